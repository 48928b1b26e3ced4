//! JSON/CSV ingestion and emission helpers shared with the CLI.
//!
//! Acts and measures travel as JSON arrays (an act *is* its value vector)
//! and as CSV rows: one act per row, columns = states, no header row.
//! Numbers always use the `.` decimal separator, independent of locale,
//! and are written in Rust's shortest round-trip representation, so a
//! write→read cycle reproduces the exact float bits.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::acts::{Act, ProbabilityMeasure};
use crate::error::{Error, Result};

/// Read any JSON-encoded value (act, measure, functional spec, utility,
/// lottery, model...); validation runs through the type's deserializer.
pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

/// Write a value as pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Parse rows of numbers from headerless CSV; all rows must have the same
/// number of columns.
fn rows_from_csv(reader: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_idx, record) in csv_reader.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(record.len());
        for (col_idx, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                Error::Precondition(format!(
                    "row {}, column {}: cannot parse {cell:?} as a number",
                    row_idx + 1,
                    col_idx + 1
                ))
            })?;
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    got: row.len(),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

fn rows_to_csv(writer: impl Write, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut csv_writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    for row in rows {
        // Format each value ourselves: shortest round-trip, '.' decimal.
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        csv_writer.write_record(&cells)?;
    }
    csv_writer.flush()?;
    Ok(())
}

/// Read acts from CSV: one act per row, columns = states.
pub fn acts_from_csv(reader: impl Read) -> Result<Vec<Act>> {
    rows_from_csv(reader)?.into_iter().map(Act::new).collect()
}

/// Read acts from a CSV file.
pub fn read_acts_csv(path: impl AsRef<Path>) -> Result<Vec<Act>> {
    acts_from_csv(File::open(path)?)
}

/// Write acts as CSV: one act per row, columns = states.
pub fn acts_to_csv(writer: impl Write, acts: &[Act]) -> Result<()> {
    rows_to_csv(writer, acts.iter().map(|a| a.values().to_vec()))
}

/// Write acts to a CSV file.
pub fn write_acts_csv(path: impl AsRef<Path>, acts: &[Act]) -> Result<()> {
    acts_to_csv(BufWriter::new(File::create(path)?), acts)
}

/// Read probability measures from CSV: one measure per row, columns =
/// states; each row is validated (nonnegative, total mass 1).
pub fn measures_from_csv(reader: impl Read) -> Result<Vec<ProbabilityMeasure>> {
    rows_from_csv(reader)?
        .into_iter()
        .map(ProbabilityMeasure::new)
        .collect()
}

/// Read probability measures from a CSV file.
pub fn read_measures_csv(path: impl AsRef<Path>) -> Result<Vec<ProbabilityMeasure>> {
    measures_from_csv(File::open(path)?)
}

/// Write `(x, y)` sample points as CSV with a header row.
pub fn curve_to_csv(
    writer: impl Write,
    header: (&str, &str),
    points: &[(f64, f64)],
) -> Result<()> {
    let mut csv_writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    csv_writer.write_record([header.0, header.1])?;
    for (x, y) in points {
        csv_writer.write_record([format!("{x}"), format!("{y}")])?;
    }
    csv_writer.flush()?;
    Ok(())
}

/// Write `(x, y)` sample points to a CSV file with a header row.
pub fn write_curve_csv(
    path: impl AsRef<Path>,
    header: (&str, &str),
    points: &[(f64, f64)],
) -> Result<()> {
    curve_to_csv(BufWriter::new(File::create(path)?), header, points)
}
