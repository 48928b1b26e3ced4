//! Property-check reports: the shared outcome type for every verifier.
//!
//! A report never claims more than it checked: `pass` means *no violation
//! found within the stated budget* unless `exhaustive` is set, in which
//! case the enumerated family was covered completely.  A `violated` report
//! always carries a witness whose inputs re-evaluate to the recorded
//! violation magnitude bit-for-bit.

use serde::{Deserialize, Serialize};

/// Outcome of a property check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// No violation found (within budget, or exhaustively — see
    /// [`PropertyReport::exhaustive`]).
    Pass,
    /// A violation exceeding the reporting threshold was found.
    Violated,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// One named input of a witness: enough to replay the violating instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessInput {
    /// An act, by state-indexed values.
    Act { name: String, values: Vec<f64> },
    /// An event, by member state indices.
    Event { name: String, members: Vec<usize> },
    /// A scalar parameter (mixing weight, scale factor, kink location...).
    Scalar { name: String, value: f64 },
}

impl WitnessInput {
    pub fn act(name: &str, values: &[f64]) -> Self {
        WitnessInput::Act {
            name: name.to_string(),
            values: values.to_vec(),
        }
    }
    pub fn event(name: &str, members: Vec<usize>) -> Self {
        WitnessInput::Event {
            name: name.to_string(),
            members,
        }
    }
    pub fn scalar(name: &str, value: f64) -> Self {
        WitnessInput::Scalar {
            name: name.to_string(),
            value,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            WitnessInput::Act { name, .. }
            | WitnessInput::Event { name, .. }
            | WitnessInput::Scalar { name, .. } => name,
        }
    }
}

/// A reproducible counterexample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Sample index within the seeded search, when the witness came from
    /// sampling (absent for exhaustive enumerations and direct
    /// constructions).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_index: Option<u64>,
    /// The violating inputs.
    pub inputs: Vec<WitnessInput>,
    /// Left-hand evaluated quantity of the violated (in)equality.
    pub lhs: f64,
    /// Right-hand evaluated quantity.
    pub rhs: f64,
    /// Violation magnitude (always > the report's tolerance).
    pub magnitude: f64,
}

impl Witness {
    /// Fetch a named act's values from the inputs.
    pub fn act(&self, name: &str) -> Option<&[f64]> {
        self.inputs.iter().find_map(|i| match i {
            WitnessInput::Act { name: n, values } if n == name => Some(values.as_slice()),
            _ => None,
        })
    }
    /// Fetch a named event's members from the inputs.
    pub fn event(&self, name: &str) -> Option<&[usize]> {
        self.inputs.iter().find_map(|i| match i {
            WitnessInput::Event { name: n, members } if n == name => Some(members.as_slice()),
            _ => None,
        })
    }
    /// Fetch a named scalar from the inputs.
    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.inputs.iter().find_map(|i| match i {
            WitnessInput::Scalar { name: n, value } if n == name => Some(*value),
            _ => None,
        })
    }
}

/// Outcome of an axiom or structural check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    /// What was checked, e.g. `"additivity"` or `"pseudo_convexity"`.
    pub check: String,
    /// Relation class the search was restricted to, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub verdict: Verdict,
    /// Number of instances evaluated (samples, pairs, mesh points...).
    pub samples_checked: u64,
    /// True when the checked family was enumerated completely, making a
    /// `pass` a proof over that family rather than a sampling statement.
    pub exhaustive: bool,
    /// Base comparison tolerance in effect.
    pub tolerance: f64,
    /// Seed of the randomized search, when one was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Free-form diagnostics: skipped-sample counts, stage outcomes,
    /// degeneracy flags.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl PropertyReport {
    /// A passing report skeleton.
    pub fn pass(check: &str, samples_checked: u64, tolerance: f64) -> Self {
        PropertyReport {
            check: check.to_string(),
            mode: None,
            verdict: Verdict::Pass,
            samples_checked,
            exhaustive: false,
            tolerance,
            seed: None,
            witness: None,
            notes: Vec::new(),
        }
    }

    /// A violated report skeleton; the caller supplies the witness.
    pub fn violated(check: &str, samples_checked: u64, tolerance: f64, witness: Witness) -> Self {
        PropertyReport {
            check: check.to_string(),
            mode: None,
            verdict: Verdict::Violated,
            samples_checked,
            exhaustive: false,
            tolerance,
            seed: None,
            witness: Some(witness),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// Human-readable one-liner derived from the JSON-canonical content.
    pub fn human_line(&self) -> String {
        let mode = self
            .mode
            .as_deref()
            .map(|m| format!(" [{m}]"))
            .unwrap_or_default();
        match self.verdict {
            Verdict::Pass => {
                let strength = if self.exhaustive {
                    "pass (exhaustive)"
                } else {
                    "pass-within-budget"
                };
                format!(
                    "{}{}: {} after {} instances at tol {:.1e}",
                    self.check, mode, strength, self.samples_checked, self.tolerance
                )
            }
            Verdict::Violated => {
                let mag = self
                    .witness
                    .as_ref()
                    .map(|w| w.magnitude)
                    .unwrap_or(f64::NAN);
                format!(
                    "{}{}: VIOLATED, magnitude {:.6e} ({} instances at tol {:.1e})",
                    self.check, mode, mag, self.samples_checked, self.tolerance
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_serializes_snake_case() {
        assert_eq!(serde_json::to_string(&Verdict::Pass).unwrap(), "\"pass\"");
        assert_eq!(
            serde_json::to_string(&Verdict::Violated).unwrap(),
            "\"violated\""
        );
    }

    #[test]
    fn witness_roundtrips_bitwise_through_json() {
        let w = Witness {
            sample_index: Some(41),
            inputs: vec![
                WitnessInput::act("X", &[0.1 + 0.2, f64::MIN_POSITIVE, -1.0 / 3.0]),
                WitnessInput::scalar("alpha", 0.30000000000000004),
            ],
            lhs: 1.0 / 7.0,
            rhs: 6.0 / 7.0,
            magnitude: 5.0 / 7.0,
        };
        let json = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert_eq!(w, back, "f64 payloads survive JSON round-trip exactly");
    }

    #[test]
    fn witness_accessors_find_named_inputs() {
        let w = Witness {
            sample_index: None,
            inputs: vec![
                WitnessInput::act("X", &[1.0, 2.0]),
                WitnessInput::event("A", vec![0, 3]),
                WitnessInput::scalar("alpha", 0.5),
            ],
            lhs: 0.0,
            rhs: 0.0,
            magnitude: 1.0,
        };
        assert_eq!(w.act("X"), Some(&[1.0, 2.0][..]));
        assert_eq!(w.event("A"), Some(&[0, 3][..]));
        assert_eq!(w.scalar("alpha"), Some(0.5));
        assert_eq!(w.act("Y"), None);
    }

    #[test]
    fn human_line_mentions_verdict() {
        let r = PropertyReport::pass("additivity", 100, 1e-9);
        assert!(r.human_line().contains("pass-within-budget"));
        let mut e = r.clone();
        e.exhaustive = true;
        assert!(e.human_line().contains("exhaustive"));
    }
}
