//! Measure extraction from a functional and the staged verifier for the
//! expectation representation.
//!
//! For a normalized, monotone, antimonotone-additive functional the map
//! `Q(E) = I(1_E)` is an additive probability, and `I` coincides with the
//! `Q`-expectation.  [`extract_measure`] computes the candidate weights
//! `Q_i = I(1_{omega_i})` and *checks* the claims instead of assuming
//! them; [`verify_expectation_representation`] chains the axioms leading
//! to the representation and reports the first break.

use super::checks::{check_additivity, check_monotonicity, check_normalization};
use super::sampling::enriched_act;
use super::{run_search, Eval, RelationMode, SearchBudget, AXIOM_TOL};
use crate::acts::{Act, Event, ProbabilityMeasure};
use crate::error::{Error, Result};
use crate::functionals::{evaluate, FunctionalSpec};
use crate::report::{PropertyReport, Verdict, Witness, WitnessInput};

/// Largest state count for which extraction verifies `I(1_E) = Q(E)` over
/// every event exhaustively.
pub const MAX_EXTRACTION_EVENT_STATES: usize = 12;

/// Candidate weights extracted from a functional, with the report that
/// says whether they actually form an additive representation of the
/// functional on indicators.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExtractedMeasure {
    /// `weights[i] = I(1_{omega_i})`, exactly as evaluated (kept raw so
    /// failing extractions — e.g. weights summing to 1/7 — stay visible).
    pub weights: Vec<f64>,
    pub report: PropertyReport,
}

impl ExtractedMeasure {
    /// Convert to a [`ProbabilityMeasure`] when the extraction verified.
    /// Residual float drift within the check tolerance is cleaned up:
    /// negative weights within tolerance clamp to zero and the vector is
    /// renormalized to sum exactly to one.
    pub fn into_measure(self) -> Result<ProbabilityMeasure> {
        if !self.report.passed() {
            return Err(Error::InvalidMeasure(format!(
                "extracted weights do not form an additive representation: {}",
                self.report.human_line()
            )));
        }
        let clamped: Vec<f64> = self.weights.iter().map(|&w| w.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        ProbabilityMeasure::new(clamped.into_iter().map(|w| w / sum).collect())
    }
}

struct WorstFinding {
    magnitude: f64,
    witness: Witness,
}

fn consider(worst: &mut Option<WorstFinding>, magnitude: f64, witness: impl FnOnce() -> Witness) {
    // Strictly-greater keeps the earliest stage / smallest event on ties.
    if magnitude > AXIOM_TOL && worst.as_ref().map_or(true, |w| magnitude > w.magnitude) {
        *worst = Some(WorstFinding {
            magnitude,
            witness: witness(),
        });
    }
}

/// Extract candidate weights `Q_i = I(1_{omega_i})` and verify that they
/// behave like an additive probability for `I` on indicators:
///
/// 1. nonnegativity: `Q_i >= -tol`;
/// 2. normalization: `|sum_i Q_i - 1| <= tol`;
/// 3. additivity on events: `|I(1_E) - sum_{i in E} Q_i| <= tol` for
///    every event, exhaustively when `n <= 12` (otherwise this stage is
///    skipped and noted).
///
/// Violations report the worst magnitude across all stages (ties keep
/// the earliest stage in the order above).
pub fn extract_measure(spec: &FunctionalSpec) -> Result<ExtractedMeasure> {
    let n = spec.state_count();
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let indicator = Act::indicator(n, Event::singleton(i))?;
        weights.push(evaluate(spec, &indicator)?);
    }
    let mut worst: Option<WorstFinding> = None;
    let mut samples: u64 = 0;

    // Stage 1: nonnegativity.
    let mut nonneg_ok = true;
    for (i, &q) in weights.iter().enumerate() {
        samples += 1;
        let violation = -q;
        if violation > AXIOM_TOL {
            nonneg_ok = false;
        }
        consider(&mut worst, violation, || Witness {
            sample_index: None,
            inputs: vec![
                WitnessInput::event("E", vec![i]),
                WitnessInput::scalar("Q_E", q),
            ],
            lhs: q,
            rhs: 0.0,
            magnitude: violation,
        });
    }

    // Stage 2: the weights sum to one.
    let total: f64 = weights.iter().sum();
    samples += 1;
    let sum_violation = (total - 1.0).abs();
    let sum_ok = sum_violation <= AXIOM_TOL;
    consider(&mut worst, sum_violation, || Witness {
        sample_index: None,
        inputs: vec![WitnessInput::scalar("sum_Q", total)],
        lhs: total,
        rhs: 1.0,
        magnitude: sum_violation,
    });

    // Stage 3: additivity over events, exhaustive for small n.
    let mut events_ok = true;
    let events_checked = n <= MAX_EXTRACTION_EVENT_STATES;
    if events_checked {
        for mask in 0..(1u64 << n) {
            samples += 1;
            let event = Event { mask };
            let indicator = Act::indicator(n, event)?;
            let lhs = evaluate(spec, &indicator)?;
            let rhs: f64 = (0..n)
                .filter(|&i| event.contains(i))
                .map(|i| weights[i])
                .sum();
            let violation = (lhs - rhs).abs();
            if violation > AXIOM_TOL {
                events_ok = false;
            }
            consider(&mut worst, violation, || Witness {
                sample_index: None,
                inputs: vec![
                    WitnessInput::event("E", event.members(n)),
                    WitnessInput::scalar("Q_E", rhs),
                ],
                lhs,
                rhs,
                magnitude: violation,
            });
        }
    }

    let mut report = PropertyReport::pass("measure_extraction", samples, AXIOM_TOL);
    report.exhaustive = events_checked;
    report.notes.push(format!(
        "stage nonnegativity: {}",
        if nonneg_ok { "pass" } else { "violated" }
    ));
    report.notes.push(format!(
        "stage normalization: {}",
        if sum_ok { "pass" } else { "violated" }
    ));
    if events_checked {
        report.notes.push(format!(
            "stage event additivity: {}",
            if events_ok { "pass" } else { "violated" }
        ));
    } else {
        report.notes.push(format!(
            "stage event additivity: skipped (n = {n} exceeds exhaustive limit {MAX_EXTRACTION_EVENT_STATES})"
        ));
    }
    if let Some(w) = worst {
        report.verdict = Verdict::Violated;
        report.witness = Some(w.witness);
    }
    Ok(ExtractedMeasure { weights, report })
}

/// Staged verification that `I` is an expectation: normalization,
/// monotonicity, antimonotone additivity, measure extraction, and a
/// sampled reconstruction test `|I(X) - E_Q(X)| <= tol * scale` against
/// the extracted weights.
///
/// The combined report passes iff every stage passes; the witness is the
/// first failing stage's witness and the notes record each stage verdict.
pub fn verify_expectation_representation(
    spec: &FunctionalSpec,
    budget: &SearchBudget,
) -> Result<PropertyReport> {
    budget.validate()?;
    let n = spec.state_count();
    let (lo, hi) = budget.value_range;

    let extraction = extract_measure(spec)?;
    let weights = extraction.weights.clone();
    let reconstruction = run_search(
        "reconstruction",
        None,
        budget,
        budget.samples,
        false,
        |idx| {
            let mut rng = budget.rng_for(idx);
            let x = enriched_act(&mut rng, n, lo, hi);
            let lhs = evaluate(spec, &x)?;
            let rhs: f64 = x
                .values()
                .iter()
                .zip(&weights)
                .map(|(v, q)| v * q)
                .sum();
            Ok(Eval::Checked {
                inputs: vec![WitnessInput::act("X", x.values())],
                lhs,
                rhs,
                violation: (lhs - rhs).abs(),
                scale: 1.0 + lhs.abs() + rhs.abs(),
            })
        },
    )?;

    let stages: Vec<(&str, PropertyReport)> = vec![
        ("normalization", check_normalization(spec)?),
        ("monotonicity", check_monotonicity(spec, budget)?),
        (
            "am_additivity",
            check_additivity(spec, budget, RelationMode::Antimonotonic)?,
        ),
        ("measure_extraction", extraction.report),
        ("reconstruction", reconstruction),
    ];

    let mut report = PropertyReport::pass("expectation_representation", 0, AXIOM_TOL);
    report.seed = Some(budget.seed);
    for (name, stage) in stages {
        report.samples_checked += stage.samples_checked;
        report.notes.push(format!(
            "stage {name}: {}",
            if stage.passed() { "pass" } else { "violated" }
        ));
        if !stage.passed() && report.passed() {
            report.verdict = Verdict::Violated;
            report.witness = stage.witness;
        }
    }
    Ok(report)
}
