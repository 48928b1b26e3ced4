//! Preference functionals: expectation, expected utility, Choquet, and
//! distortion (law-based Choquet) evaluation; certainty equivalents;
//! diversification benefit.
//!
//! The Choquet integral is computed by the sorted-telescoping formula
//! with ties broken by ascending state index, and extended to negative
//! integrands asymmetrically: for signed `v` the value equals
//! `∫_0^∞ W(v ≥ x) dx + ∫_{-∞}^0 (W(v ≥ x) − 1) dx`.  Results quoted
//! from the underlying theory rely only on the nonnegative branch; the
//! extension is what lets real-valued acts be evaluated uniformly.

use serde::{Deserialize, Serialize};

use crate::acts::{Act, ProbabilityMeasure};
use crate::capacities::{Capacity, DistortionFunction};
use crate::error::{Error, Result};

/// Bound on state counts for mask-based Choquet evaluation.
pub const MAX_CHOQUET_STATES: usize = 64;

/// A continuous piecewise-linear utility on a closed interval, given by
/// breakpoints with strictly increasing abscissae.
///
/// Utilities are piecewise-linear *only*: smooth utilities must be
/// pre-sampled by the caller.  That buys exact invertibility and exact
/// concavity tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "UtilityRepr", into = "UtilityRepr")]
pub struct UtilityFunction {
    breakpoints: Vec<(f64, f64)>,
    strictly_increasing: bool,
}

#[derive(Serialize, Deserialize)]
struct UtilityRepr {
    breakpoints: Vec<(f64, f64)>,
    #[serde(default)]
    strictly_increasing: bool,
}

impl TryFrom<UtilityRepr> for UtilityFunction {
    type Error = Error;
    fn try_from(r: UtilityRepr) -> Result<Self> {
        UtilityFunction::new(r.breakpoints, r.strictly_increasing)
    }
}

impl From<UtilityFunction> for UtilityRepr {
    fn from(u: UtilityFunction) -> Self {
        UtilityRepr {
            breakpoints: u.breakpoints,
            strictly_increasing: u.strictly_increasing,
        }
    }
}

impl UtilityFunction {
    /// Build a utility; when `strictly_increasing` is set the ordinates
    /// must strictly increase and this is validated here, licensing exact
    /// inversion later.
    pub fn new(breakpoints: Vec<(f64, f64)>, strictly_increasing: bool) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidUtility(
                "need at least two breakpoints".into(),
            ));
        }
        for &(x, u) in &breakpoints {
            if !x.is_finite() || !u.is_finite() {
                return Err(Error::InvalidUtility(format!(
                    "non-finite breakpoint ({x}, {u})"
                )));
            }
        }
        for w in breakpoints.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidUtility(format!(
                    "abscissae not strictly increasing at {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
            if strictly_increasing && w[1].1 <= w[0].1 {
                return Err(Error::InvalidUtility(format!(
                    "strictly-increasing flag set but ordinates do not increase at {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(UtilityFunction {
            breakpoints,
            strictly_increasing,
        })
    }

    /// The identity utility on `[lo, hi]`.
    pub fn identity(lo: f64, hi: f64) -> Self {
        UtilityFunction::new(vec![(lo, lo), (hi, hi)], true).expect("identity is valid")
    }

    /// Sample a function into a piecewise-linear utility on `[lo, hi]`
    /// with `segments` equal-width segments.
    pub fn sampled(
        f: impl Fn(f64) -> f64,
        lo: f64,
        hi: f64,
        segments: usize,
        strictly_increasing: bool,
    ) -> Result<Self> {
        if segments == 0 || !(lo < hi) {
            return Err(Error::InvalidUtility(
                "need segments >= 1 and lo < hi".into(),
            ));
        }
        let breakpoints = (0..=segments)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / segments as f64;
                (x, f(x))
            })
            .collect();
        UtilityFunction::new(breakpoints, strictly_increasing)
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn strictly_increasing(&self) -> bool {
        self.strictly_increasing
    }

    /// Closed domain interval `[lo, hi]`.
    pub fn domain(&self) -> (f64, f64) {
        (
            self.breakpoints[0].0,
            self.breakpoints[self.breakpoints.len() - 1].0,
        )
    }

    /// `U(x)`; errors if `x` is outside the domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(Error::UtilityDomain { value: x, lo, hi });
        }
        match self
            .breakpoints
            .binary_search_by(|&(bx, _)| bx.total_cmp(&x))
        {
            Ok(i) => Ok(self.breakpoints[i].1),
            Err(i) => {
                let (x0, u0) = self.breakpoints[i - 1];
                let (x1, u1) = self.breakpoints[i];
                Ok(u0 + (x - x0) / (x1 - x0) * (u1 - u0))
            }
        }
    }

    /// Exact piecewise-linear inversion `U^{-1}(target)`; requires the
    /// strictly-increasing flag.
    pub fn invert(&self, target: f64) -> Result<f64> {
        if !self.strictly_increasing {
            return Err(Error::Inversion {
                target,
                reason: "utility not flagged strictly increasing".into(),
            });
        }
        let u_lo = self.breakpoints[0].1;
        let u_hi = self.breakpoints[self.breakpoints.len() - 1].1;
        if !(u_lo..=u_hi).contains(&target) {
            return Err(Error::Inversion {
                target,
                reason: format!("outside utility range [{u_lo}, {u_hi}]"),
            });
        }
        match self
            .breakpoints
            .binary_search_by(|&(_, bu)| bu.total_cmp(&target))
        {
            Ok(i) => Ok(self.breakpoints[i].0),
            Err(i) => {
                let (x0, u0) = self.breakpoints[i - 1];
                let (x1, u1) = self.breakpoints[i];
                Ok(x0 + (target - u0) / (u1 - u0) * (x1 - x0))
            }
        }
    }

    /// Segment slopes, left to right.
    pub fn slopes(&self) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }
}

/// A tagged description of a preference functional `I`.
///
/// The `distortion` kind evaluates identically — bitwise — to `choquet`
/// over `capacity_from_distortion(g, P)`: both paths compute event
/// probabilities by the same ascending-index summation and share one
/// telescoping routine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalSpec {
    /// `I(X) = Σ P_i X_i`.
    Expectation { p: ProbabilityMeasure },
    /// `I(X) = Σ P_i U(X_i)`.
    ExpectedUtility {
        p: ProbabilityMeasure,
        utility: UtilityFunction,
    },
    /// Asymmetric Choquet integral of `U∘X` against `W`; `utility: None`
    /// means `U = id`.
    Choquet {
        capacity: Capacity,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        utility: Option<UtilityFunction>,
    },
    /// Law-based Choquet: `W(E) = g(P(E))` without materializing the
    /// table.
    Distortion {
        distortion: DistortionFunction,
        p: ProbabilityMeasure,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        utility: Option<UtilityFunction>,
    },
}

impl FunctionalSpec {
    /// Number of states acts must have.
    pub fn state_count(&self) -> usize {
        match self {
            FunctionalSpec::Expectation { p } => p.len(),
            FunctionalSpec::ExpectedUtility { p, .. } => p.len(),
            FunctionalSpec::Choquet { capacity, .. } => capacity.state_count(),
            FunctionalSpec::Distortion { p, .. } => p.len(),
        }
    }

    /// The embedded utility, if the kind carries one.
    pub fn utility(&self) -> Option<&UtilityFunction> {
        match self {
            FunctionalSpec::Expectation { .. } => None,
            FunctionalSpec::ExpectedUtility { utility, .. } => Some(utility),
            FunctionalSpec::Choquet { utility, .. } => utility.as_ref(),
            FunctionalSpec::Distortion { utility, .. } => utility.as_ref(),
        }
    }

    /// The embedded probability measure, if the kind carries one.
    pub fn measure(&self) -> Option<&ProbabilityMeasure> {
        match self {
            FunctionalSpec::Expectation { p } => Some(p),
            FunctionalSpec::ExpectedUtility { p, .. } => Some(p),
            FunctionalSpec::Choquet { .. } => None,
            FunctionalSpec::Distortion { p, .. } => Some(p),
        }
    }

    /// Convenience constructor for the Example 1 functional with `U = id`
    /// on the uniform `n`-state space.
    pub fn example1_uniform(n: usize) -> Result<Self> {
        Ok(FunctionalSpec::Distortion {
            distortion: crate::capacities::example1_distortion(),
            p: ProbabilityMeasure::uniform(n)?,
            utility: None,
        })
    }
}

fn check_spec_dim(spec: &FunctionalSpec, x: &Act) -> Result<()> {
    if x.len() != spec.state_count() {
        return Err(Error::DimensionMismatch {
            expected: spec.state_count(),
            got: x.len(),
        });
    }
    Ok(())
}

fn apply_utility(u: Option<&UtilityFunction>, x: &Act) -> Result<Vec<f64>> {
    match u {
        None => Ok(x.values().to_vec()),
        Some(u) => x.values().iter().map(|&v| u.eval(v)).collect(),
    }
}

/// Sorted-telescoping Choquet integral of `values` against the set
/// function `w` (queried by bitmask).  `w` must be normalized
/// (`w(full) = 1`); ties in the sort are broken by ascending state index,
/// which never changes the value, only the intermediate sets.
pub(crate) fn choquet_telescope(values: &[f64], w: impl Fn(u64) -> f64) -> Result<f64> {
    let n = values.len();
    if n > MAX_CHOQUET_STATES {
        return Err(Error::StateSpaceTooLarge {
            n,
            max: MAX_CHOQUET_STATES,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let mut mask = 0u64;
    let mut total = 0.0;
    for k in 0..n {
        mask |= 1u64 << order[k];
        if k + 1 < n {
            total += (values[order[k]] - values[order[k + 1]]) * w(mask);
        } else {
            // w(full) == 1 by the capacity/distortion invariants; multiply
            // anyway so defective unchecked tables show up in results.
            total += values[order[k]] * w(mask);
        }
    }
    if !total.is_finite() {
        return Err(Error::NonFinite {
            context: format!("choquet integral produced {total}"),
        });
    }
    Ok(total)
}

/// Evaluate `I(X)` for the given functional.
pub fn evaluate(spec: &FunctionalSpec, x: &Act) -> Result<f64> {
    check_spec_dim(spec, x)?;
    let value = match spec {
        FunctionalSpec::Expectation { p } => p.expectation(x)?,
        FunctionalSpec::ExpectedUtility { p, utility } => {
            let u = apply_utility(Some(utility), x)?;
            p.weights().iter().zip(&u).map(|(pi, ui)| pi * ui).sum()
        }
        FunctionalSpec::Choquet { capacity, utility } => {
            let u = apply_utility(utility.as_ref(), x)?;
            choquet_telescope(&u, |mask| capacity.table()[mask as usize])?
        }
        FunctionalSpec::Distortion {
            distortion,
            p,
            utility,
        } => {
            let u = apply_utility(utility.as_ref(), x)?;
            choquet_telescope(&u, |mask| {
                let pe = p.prob(crate::acts::Event { mask }).clamp(0.0, 1.0);
                distortion
                    .eval(pe)
                    .expect("clamped probability is in [0,1]")
            })?
        }
    };
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: "functional evaluation".into(),
        });
    }
    Ok(value)
}

/// Absolute convergence tolerance for certainty-equivalent bisection.
pub const CE_BISECTION_TOL: f64 = 1e-12;

/// The outcome `c` with `I(c·1) = I(X)`.
///
/// For `U = id` kinds this is `I(X)` itself (constant acts evaluate to
/// their constant).  For expected utility it is the exact piecewise-linear
/// inversion `U^{-1}(EU(X))`.  For Choquet/distortion kinds with a
/// utility, it is found by monotone bisection on
/// `c ↦ I(c·1) = U(c)` to absolute precision `1e-12`.
pub fn certainty_equivalent(spec: &FunctionalSpec, x: &Act) -> Result<f64> {
    let target = evaluate(spec, x)?;
    match spec {
        FunctionalSpec::Expectation { .. } => Ok(target),
        FunctionalSpec::ExpectedUtility { utility, .. } => utility.invert(target),
        FunctionalSpec::Choquet { utility: None, .. }
        | FunctionalSpec::Distortion { utility: None, .. } => Ok(target),
        FunctionalSpec::Choquet {
            utility: Some(u), ..
        }
        | FunctionalSpec::Distortion {
            utility: Some(u), ..
        } => {
            if !u.strictly_increasing() {
                return Err(Error::Precondition(
                    "certainty equivalent requires a strictly increasing utility".into(),
                ));
            }
            // I(c·1) = U(c), so bracket over the whole domain works.
            let (mut lo, mut hi) = u.domain();
            let f_lo = u.eval(lo)? - target;
            let f_hi = u.eval(hi)? - target;
            if f_lo > 0.0 || f_hi < 0.0 {
                return Err(Error::Inversion {
                    target,
                    reason: "I(X) outside [U(lo), U(hi)]".into(),
                });
            }
            for _ in 0..200 {
                if hi - lo <= CE_BISECTION_TOL {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if u.eval(mid)? - target >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        }
    }
}

/// `I(X) + I(Y) − I(X+Y)`.
pub fn diversification_benefit(spec: &FunctionalSpec, x: &Act, y: &Act) -> Result<f64> {
    let sum = x.add(y)?;
    Ok(evaluate(spec, x)? + evaluate(spec, y)? - evaluate(spec, &sum)?)
}

/// Default indifference tolerance for [`PreferenceOracle`].
pub const ORACLE_TOL: f64 = 1e-9;

/// A preference relation backed by a functional: `X ≽ Y ⟺ I(X) ≥ I(Y)`,
/// with indifference declared within `tol`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreferenceOracle {
    pub spec: FunctionalSpec,
    pub tol: f64,
}

impl PreferenceOracle {
    pub fn new(spec: FunctionalSpec) -> Self {
        PreferenceOracle {
            spec,
            tol: ORACLE_TOL,
        }
    }

    pub fn value(&self, x: &Act) -> Result<f64> {
        evaluate(&self.spec, x)
    }

    /// `X ≽ Y` up to the indifference tolerance.
    pub fn prefers(&self, x: &Act, y: &Act) -> Result<bool> {
        Ok(self.value(x)? >= self.value(y)? - self.tol)
    }

    /// `X ~ Y`.
    pub fn indifferent(&self, x: &Act, y: &Act) -> Result<bool> {
        Ok((self.value(x)? - self.value(y)?).abs() <= self.tol)
    }

    /// `X ≻ Y` strictly beyond the tolerance.
    pub fn strictly_prefers(&self, x: &Act, y: &Act) -> Result<bool> {
        Ok(self.value(x)? > self.value(y)? + self.tol)
    }
}
