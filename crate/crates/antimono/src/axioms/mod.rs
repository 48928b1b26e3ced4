//! Axiom verifiers: seeded counterexample searches over acts.
//!
//! Every verifier follows one discipline:
//!
//! * **Candidate generation** is seeded and per-sample independent: sample
//!   `i` of a run with seed `s` is built from [`SampleRng::new(s, i)`],
//!   so results are reproducible across runs and across thread counts.
//! * **Full-budget scan**: the search never stops at the first violation.
//!   It evaluates the entire budget and reports the *maximum-magnitude*
//!   violation, breaking exact ties by the smallest sample index.  This
//!   makes the reported witness a deterministic function of
//!   `(seed, budget)` alone.
//! * **Hysteresis**: a discrepancy only counts as a violation when it
//!   exceeds `10 x tolerance x scale`, where `scale` grows with the
//!   magnitudes of the compared functionals.  Float noise near the
//!   tolerance boundary therefore cannot flip a verdict.
//! * **Witness fidelity**: the recorded inputs re-evaluate to the recorded
//!   `lhs`/`rhs`/`magnitude` bit-for-bit, because the report stores the
//!   exact floats that were compared.
//!
//! An exhaustive grid mode ([`SearchBudget::grid`]) replaces sampling with
//! complete enumeration of grid-valued acts for the checks where
//! proof-by-exhaustion over a finite family is meaningful (additivity,
//! affinity, homogeneity, monotonicity).
//!
//! Evaluation errors (dimension mismatches, utility-domain escapes) abort
//! the search and are reported with the offending sample index attached;
//! they are never silently skipped.  The only skips are *constructive*
//! failures in checks that must first build an indifferent partner
//! (bracketing or bisection failure); those are counted in the report
//! notes.

mod checks;
mod extraction;
pub(crate) mod sampling;
mod savage;

pub use checks::{
    check_additivity, check_affinity, check_ce_am_additivity, check_homogeneity, check_law_based,
    check_monotonicity, check_normalization, check_preference_convexity,
    check_uncertainty_reduction, check_utility_concavity,
};
pub use extraction::{extract_measure, verify_expectation_representation, ExtractedMeasure};
pub use savage::{savage_equivalence_harness, standard_sequence, SavageReport};

use crate::error::{Error, Result};
use crate::report::{PropertyReport, Verdict, Witness, WitnessInput};
use crate::rng::{SampleRng, DEFAULT_SEED};
use serde::{Deserialize, Serialize};

/// Base comparison tolerance for axiom checks (relative; scales are
/// built as `1 + |compared values|`).
pub const AXIOM_TOL: f64 = 1e-9;

/// A violation is only reported when it exceeds the tolerance by this
/// factor, so verdicts are stable against float noise at the boundary.
pub const WITNESS_HYSTERESIS: f64 = 10.0;

/// Relation class a pairwise search is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationMode {
    /// Unrestricted pairs.
    General,
    /// Comonotonic pairs only.
    Comonotonic,
    /// Antimonotonic pairs only.
    Antimonotonic,
}

impl RelationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationMode::General => "general",
            RelationMode::Comonotonic => "comonotonic",
            RelationMode::Antimonotonic => "antimonotonic",
        }
    }
}

impl std::fmt::Display for RelationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn default_samples() -> u64 {
    10_000
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_range() -> (f64, f64) {
    (0.0, 1.0)
}
fn default_threads() -> usize {
    1
}

/// Budget and reproducibility parameters of a counterexample search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Number of sampled candidates (ignored in exhaustive grid mode).
    #[serde(default = "default_samples")]
    pub samples: u64,
    /// RNG seed; sample `i` uses the stream `(seed, i)`.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Closed value range acts are drawn from.
    #[serde(default = "default_range")]
    pub value_range: (f64, f64),
    /// When set, replaces sampling with exhaustive enumeration of acts
    /// whose per-state values lie on an equally spaced grid of this many
    /// levels (including both endpoints).  Only supported by checks where
    /// exhaustion over the grid family is meaningful.
    #[serde(default)]
    pub grid: Option<u32>,
    /// Worker threads for the scan; the outcome is independent of this
    /// value because samples are index-derived, the maximum-magnitude
    /// rule is order-free, and ties go to the smallest index.
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            samples: default_samples(),
            seed: default_seed(),
            value_range: default_range(),
            grid: None,
            threads: 1,
        }
    }
}

impl SearchBudget {
    pub fn new(samples: u64, seed: u64) -> Self {
        SearchBudget {
            samples,
            seed,
            ..SearchBudget::default()
        }
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.value_range = (lo, hi);
        self
    }

    pub fn with_grid(mut self, grid: u32) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.value_range;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite {
                context: "search value range".into(),
            });
        }
        if lo >= hi {
            return Err(Error::Precondition(format!(
                "search value range must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        if let Some(g) = self.grid {
            if g < 2 {
                return Err(Error::Precondition(format!(
                    "grid resolution must be >= 2, got {g}"
                )));
            }
        } else if self.samples == 0 {
            return Err(Error::Precondition(
                "sample budget must be >= 1 (or set a grid)".into(),
            ));
        }
        if self.threads == 0 {
            return Err(Error::Precondition("thread count must be >= 1".into()));
        }
        Ok(())
    }

    pub(crate) fn rng_for(&self, sample: u64) -> SampleRng {
        SampleRng::new(self.seed, sample)
    }
}

/// Result of evaluating one candidate inside a search.
pub(crate) enum Eval {
    /// The candidate was evaluated; `violation` is the signed excess of
    /// the broken (in)equality (<= 0 means satisfied) and `scale` the
    /// magnitude reference for the hysteresis threshold.
    Checked {
        inputs: Vec<WitnessInput>,
        lhs: f64,
        rhs: f64,
        violation: f64,
        scale: f64,
    },
    /// The candidate could not be constructed (e.g. no indifferent
    /// partner found); counted and noted, never a verdict by itself.
    Skip(&'static str),
}

struct Candidate {
    index: u64,
    inputs: Vec<WitnessInput>,
    lhs: f64,
    rhs: f64,
    violation: f64,
}

struct ChunkOutcome {
    evaluated: u64,
    skips: Vec<(&'static str, u64)>,
    best: Option<Candidate>,
}

fn merge_skips(into: &mut Vec<(&'static str, u64)>, reason: &'static str, count: u64) {
    if let Some(entry) = into.iter_mut().find(|(r, _)| *r == reason) {
        entry.1 += count;
    } else {
        into.push((reason, count));
    }
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    // Strictly larger violation wins; exact ties go to the smaller index.
    a.violation > b.violation || (a.violation == b.violation && a.index < b.index)
}

fn scan_range(
    lo: u64,
    hi: u64,
    eval: &(impl Fn(u64) -> Result<Eval> + Sync),
) -> std::result::Result<ChunkOutcome, (u64, Error)> {
    let mut out = ChunkOutcome {
        evaluated: 0,
        skips: Vec::new(),
        best: None,
    };
    for index in lo..hi {
        match eval(index).map_err(|e| (index, e))? {
            Eval::Checked {
                inputs,
                lhs,
                rhs,
                violation,
                scale,
            } => {
                out.evaluated += 1;
                if violation > WITNESS_HYSTERESIS * AXIOM_TOL * scale {
                    let cand = Candidate {
                        index,
                        inputs,
                        lhs,
                        rhs,
                        violation,
                    };
                    if out.best.as_ref().is_none_or(|b| better(&cand, b)) {
                        out.best = Some(cand);
                    }
                }
            }
            Eval::Skip(reason) => merge_skips(&mut out.skips, reason, 1),
        }
    }
    Ok(out)
}

/// Shared search driver: scans `total` candidate indices (in parallel if
/// requested), keeps the maximum-magnitude violation with smallest-index
/// tie-break, and assembles the report.
pub(crate) fn run_search(
    check: &str,
    mode: Option<String>,
    budget: &SearchBudget,
    total: u64,
    exhaustive: bool,
    eval: impl Fn(u64) -> Result<Eval> + Sync,
) -> Result<PropertyReport> {
    budget.validate()?;
    let threads = budget.threads.min(total.max(1) as usize).max(1);
    let merged: std::result::Result<ChunkOutcome, (u64, Error)> = if threads == 1 {
        scan_range(0, total, &eval)
    } else {
        let chunk = total.div_ceil(threads as u64);
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|t| {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(total);
                    let eval = &eval;
                    scope.spawn(move || scan_range(lo, hi, eval))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect::<Vec<_>>()
        });
        // Deterministic merge: the error at the smallest index wins;
        // otherwise combine counts and keep the best candidate.
        let mut acc = ChunkOutcome {
            evaluated: 0,
            skips: Vec::new(),
            best: None,
        };
        let mut first_err: Option<(u64, Error)> = None;
        for r in results {
            match r {
                Err((idx, e)) => {
                    if first_err.as_ref().is_none_or(|(i, _)| idx < *i) {
                        first_err = Some((idx, e));
                    }
                }
                Ok(chunk_out) => {
                    acc.evaluated += chunk_out.evaluated;
                    for (reason, count) in chunk_out.skips {
                        merge_skips(&mut acc.skips, reason, count);
                    }
                    if let Some(cand) = chunk_out.best {
                        if acc.best.as_ref().is_none_or(|b| better(&cand, b)) {
                            acc.best = Some(cand);
                        }
                    }
                }
            }
        }
        match first_err {
            Some(err) => Err(err),
            None => Ok(acc),
        }
    };

    let outcome = merged.map_err(|(sample, source)| Error::SampleEvaluation {
        sample,
        source: Box::new(source),
    })?;

    let mut report = PropertyReport {
        check: check.to_string(),
        mode,
        verdict: Verdict::Pass,
        samples_checked: outcome.evaluated,
        exhaustive,
        tolerance: AXIOM_TOL,
        seed: if exhaustive { None } else { Some(budget.seed) },
        witness: None,
        notes: Vec::new(),
    };
    for (reason, count) in &outcome.skips {
        report
            .notes
            .push(format!("skipped {count} candidates: {reason}"));
    }
    if let Some(best) = outcome.best {
        report.verdict = Verdict::Violated;
        report.witness = Some(Witness {
            sample_index: Some(best.index),
            inputs: best.inputs,
            lhs: best.lhs,
            rhs: best.rhs,
            magnitude: best.violation,
        });
    }
    Ok(report)
}

/// Enumerate grid acts for the exhaustive mode: act number `code` has
/// per-state values given by the base-`grid` digits of `code`, mapped to
/// the equally spaced levels of `[lo, hi]`.
pub(crate) fn grid_act(code: u64, n: usize, grid: u32, lo: f64, hi: f64) -> crate::acts::Act {
    let g = grid as u64;
    let step = (hi - lo) / (grid - 1) as f64;
    let mut c = code;
    let values = (0..n)
        .map(|_| {
            let digit = (c % g) as f64;
            c /= g;
            lo + digit * step
        })
        .collect();
    crate::acts::Act::new(values).expect("grid values are finite")
}

/// Total number of grid acts, guarded against overflow and absurd sizes.
pub(crate) fn grid_act_count(n: usize, grid: u32) -> Result<u64> {
    let count = (grid as u128).checked_pow(n as u32).ok_or_else(|| {
        Error::Precondition(format!("grid enumeration overflows: {grid}^{n}"))
    })?;
    u64::try_from(count).map_err(|_| {
        Error::Precondition(format!("grid enumeration too large: {grid}^{n} acts"))
    })
}

/// Guard the *square* (pair enumeration) against absurd sizes.
pub(crate) fn grid_pair_count(n: usize, grid: u32) -> Result<u64> {
    let acts = grid_act_count(n, grid)? as u128;
    let pairs = acts * acts;
    if pairs > (1u128 << 34) {
        return Err(Error::Precondition(format!(
            "exhaustive pair enumeration too large: {pairs} pairs; \
             reduce grid resolution or state count"
        )));
    }
    Ok(pairs as u64)
}
