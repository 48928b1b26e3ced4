//! Finite state spaces, acts, events, probability measures, and the
//! comonotone/antimonotone relation algebra.
//!
//! An act is a real payoff vector indexed by states.  Two acts are
//! *comonotonic* when they never move in strictly opposite directions
//! across a pair of states, and *antimonotonic* when the first is
//! comonotonic with the negation of the second.  The monotone
//! decomposition splits any act into a nondecreasing and a nonincreasing
//! part (in state-index order) whose sum reproduces the act.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SampleRng;

/// A finite state space: a count of states plus optional display labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpace {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl StateSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyStateSpace);
        }
        Ok(StateSpace { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut s = StateSpace::new(labels.len())?;
        s.labels = Some(labels);
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("s{i}"),
        }
    }
}

/// A state-contingent real payoff vector.
///
/// Serializes as the bare value array; deserialization re-validates
/// (non-empty, finite).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Act {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Act {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Act::new(values)
    }
}

impl From<Act> for Vec<f64> {
    fn from(a: Act) -> Vec<f64> {
        a.values
    }
}

impl Act {
    /// Build an act, rejecting empty or non-finite input.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("act value {bad}"),
            });
        }
        Ok(Act { values })
    }

    /// The constant act `c` on an `n`-state space.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Act::new(vec![c; n])
    }

    /// The indicator act of an event: 1 on members, 0 elsewhere.
    pub fn indicator(n: usize, event: Event) -> Result<Self> {
        let values = (0..n)
            .map(|i| if event.contains(i) { 1.0 } else { 0.0 })
            .collect();
        Act::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    fn check_dim(&self, other: &Act) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Act) -> Result<Act> {
        self.check_dim(other)?;
        Ok(Act {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Pointwise difference `self - other`.
    pub fn sub(&self, other: &Act) -> Result<Act> {
        self.check_dim(other)?;
        Ok(Act {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Scalar multiple `alpha * self`.
    pub fn scale(&self, alpha: f64) -> Act {
        Act {
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }

    /// Negation.
    pub fn negate(&self) -> Act {
        self.scale(-1.0)
    }

    /// Constant shift `self + c`.
    pub fn shift(&self, c: f64) -> Act {
        Act {
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Pointwise outcome mixture `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &Act, alpha: f64) -> Result<Act> {
        self.check_dim(other)?;
        Ok(Act {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                .collect(),
        })
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// An event: a subset of states, stored as a bitmask over state indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Event {
    pub mask: u64,
}

impl Event {
    pub const EMPTY: Event = Event { mask: 0 };

    pub fn full(n: usize) -> Event {
        debug_assert!(n <= 64);
        if n == 64 {
            Event { mask: u64::MAX }
        } else {
            Event {
                mask: (1u64 << n) - 1,
            }
        }
    }

    pub fn singleton(i: usize) -> Event {
        Event { mask: 1u64 << i }
    }

    pub fn from_members(members: &[usize]) -> Event {
        let mut mask = 0u64;
        for &i in members {
            mask |= 1u64 << i;
        }
        Event { mask }
    }

    pub fn contains(&self, i: usize) -> bool {
        (self.mask >> i) & 1 == 1
    }

    pub fn union(&self, other: Event) -> Event {
        Event {
            mask: self.mask | other.mask,
        }
    }

    pub fn intersect(&self, other: Event) -> Event {
        Event {
            mask: self.mask & other.mask,
        }
    }

    pub fn complement(&self, n: usize) -> Event {
        Event {
            mask: Event::full(n).mask & !self.mask,
        }
    }

    pub fn is_disjoint(&self, other: Event) -> bool {
        self.mask & other.mask == 0
    }

    pub fn card(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn members(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }
}

/// A probability measure over states.
///
/// Serializes as the bare weight array; deserialization re-validates
/// (nonnegative, total mass 1 within [`MEASURE_SUM_TOL`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityMeasure {
    weights: Vec<f64>,
}

impl TryFrom<Vec<f64>> for ProbabilityMeasure {
    type Error = Error;
    fn try_from(weights: Vec<f64>) -> Result<Self> {
        ProbabilityMeasure::new(weights)
    }
}

impl From<ProbabilityMeasure> for Vec<f64> {
    fn from(p: ProbabilityMeasure) -> Vec<f64> {
        p.weights
    }
}

/// Tolerance on the total-mass invariant of [`ProbabilityMeasure`].
pub const MEASURE_SUM_TOL: f64 = 1e-12;

impl ProbabilityMeasure {
    /// Build a measure, validating nonnegativity and total mass 1 within
    /// [`MEASURE_SUM_TOL`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        if let Some(bad) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("probability weight {bad}"),
            });
        }
        if let Some(bad) = weights.iter().find(|&&w| w < 0.0) {
            return Err(Error::InvalidMeasure(format!("negative weight {bad}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > MEASURE_SUM_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {sum}, not 1 within {MEASURE_SUM_TOL}"
            )));
        }
        Ok(ProbabilityMeasure { weights })
    }

    /// The uniform measure on `n` states.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyStateSpace);
        }
        ProbabilityMeasure::new(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// P(E), summed in ascending state-index order.
    ///
    /// The summation order is part of the contract: the distortion
    /// functional and `capacity_from_distortion` both rely on computing
    /// event probabilities with this exact floating-point sum so their
    /// results agree bitwise.
    pub fn prob(&self, event: Event) -> f64 {
        let mut s = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            if event.contains(i) {
                s += w;
            }
        }
        s
    }

    /// E_P[X].
    pub fn expectation(&self, x: &Act) -> Result<f64> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: x.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(x.values())
            .map(|(p, v)| p * v)
            .sum())
    }

    /// True when all weights are equal (within exact comparison of the
    /// stored floats); used to pick the permutation strategy for
    /// law-based checks.
    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| *w == self.weights[0])
    }
}

/// Comonotonicity: no pair of states where the acts move strictly in
/// opposite directions.
///
/// Exact sign test on `(X_i - X_j) * (Y_i - Y_j) >= 0` over all pairs —
/// no tolerance, by design: acts are user-provided inputs, not computed
/// quantities, so callers should pre-round noisy data before asking.
pub fn is_comonotonic(x: &Act, y: &Act) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let (xv, yv) = (x.values(), y.values());
    for i in 0..xv.len() {
        for j in (i + 1)..xv.len() {
            if (xv[i] - xv[j]) * (yv[i] - yv[j]) < 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Antimonotonicity: `X` comonotonic with `-Y`; equivalently there is no
/// state pair where both acts strictly increase.
pub fn is_antimonotonic(x: &Act, y: &Act) -> Result<bool> {
    is_comonotonic(x, &y.negate())
}

/// The monotone decomposition `X = X_up + X_down`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneDecomposition {
    /// Nondecreasing part (in state-index order).
    pub up: Act,
    /// Nonincreasing part.
    pub down: Act,
}

/// Split an act into a nondecreasing and a nonincreasing part by the
/// canonical cumulative-increment construction:
///
/// ```text
/// up[0]   = x[0]          down[0]   = 0
/// up[i]   = up[i-1]   + max(0, x[i] - x[i-1])
/// down[i] = down[i-1] + min(0, x[i] - x[i-1])
/// ```
///
/// The decomposition is taken with respect to the state-index order;
/// permute states first if another order is wanted.  The sum
/// `up[i] + down[i]` telescopes back to `x[i]`; it is bitwise exact
/// whenever the increments and their partial sums are exactly
/// representable (always true for acts drawn by this crate's samplers,
/// which live on a dyadic lattice with 11 bits of headroom).
pub fn monotone_decompose(x: &Act) -> MonotoneDecomposition {
    let v = x.values();
    let n = v.len();
    let mut up = Vec::with_capacity(n);
    let mut down = Vec::with_capacity(n);
    up.push(v[0]);
    down.push(0.0);
    for i in 1..n {
        let d = v[i] - v[i - 1];
        up.push(up[i - 1] + d.max(0.0));
        down.push(down[i - 1] + d.min(0.0));
    }
    MonotoneDecomposition {
        up: Act { values: up },
        down: Act { values: down },
    }
}

/// Law equality under `P`: the two acts induce the same value→probability
/// map, comparing values exactly and aggregated probabilities within
/// `1e-12`.
pub fn law_equal(x: &Act, y: &Act, p: &ProbabilityMeasure) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: x.len(),
        });
    }
    let dist = |a: &Act| -> Vec<(f64, f64)> {
        let mut pairs: Vec<(f64, f64)> = a
            .values()
            .iter()
            .zip(p.weights())
            .map(|(&v, &w)| (v, w))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Aggregate equal values (exact comparison).
        let mut agg: Vec<(f64, f64)> = Vec::new();
        for (v, w) in pairs {
            match agg.last_mut() {
                Some((lv, lw)) if *lv == v => *lw += w,
                _ => agg.push((v, w)),
            }
        }
        // Drop zero-probability values: they do not affect the law.
        agg.retain(|&(_, w)| w != 0.0);
        agg
    };
    let (dx, dy) = (dist(x), dist(y));
    if dx.len() != dy.len() {
        return Ok(false);
    }
    Ok(dx
        .iter()
        .zip(&dy)
        .all(|(&(vx, wx), &(vy, wy))| vx == vy && (wx - wy).abs() <= 1e-12))
}

/// Draw one act with i.i.d. values on the dyadic lattice of `[lo, hi)`.
pub fn sample_act(rng: &mut SampleRng, n: usize, lo: f64, hi: f64) -> Act {
    Act {
        values: (0..n).map(|_| rng.in_range(lo, hi)).collect(),
    }
}

/// A randomly drawn nondecreasing step function, used to manufacture
/// antimonotonic partners: `f` has sorted jump thresholds and sorted
/// output levels, so `t <= t'` implies `f(t) <= f(t')`.
pub(crate) struct StepFunction {
    /// Ascending jump locations.
    thresholds: Vec<f64>,
    /// Ascending output levels; `levels.len() == thresholds.len() + 1`.
    levels: Vec<f64>,
}

impl StepFunction {
    /// Draw a step function mapping `[dom_lo, dom_hi]` into levels from
    /// `[range_lo, range_hi)`, with `k` levels (k >= 1).
    pub(crate) fn sample(
        rng: &mut SampleRng,
        k: usize,
        dom_lo: f64,
        dom_hi: f64,
        range_lo: f64,
        range_hi: f64,
    ) -> Self {
        let mut levels: Vec<f64> = (0..k).map(|_| rng.in_range(range_lo, range_hi)).collect();
        levels.sort_by(f64::total_cmp);
        let mut thresholds: Vec<f64> = (0..k.saturating_sub(1))
            .map(|_| rng.in_range(dom_lo, dom_hi))
            .collect();
        thresholds.sort_by(f64::total_cmp);
        StepFunction { thresholds, levels }
    }

    /// Build directly from sorted parts (used by the axioms module's
    /// quantized generator).
    pub(crate) fn from_sorted(thresholds: Vec<f64>, levels: Vec<f64>) -> Self {
        debug_assert_eq!(levels.len(), thresholds.len() + 1);
        debug_assert!(thresholds.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(levels.windows(2).all(|w| w[0] <= w[1]));
        StepFunction { thresholds, levels }
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        let idx = self.thresholds.iter().filter(|&&th| th <= t).count();
        self.levels[idx]
    }
}

/// Draw a guaranteed-antimonotonic pair `(X, Y)`.
///
/// `X` is sampled i.i.d. per state on `[lo, hi)`; `Y = f(-X)` pointwise
/// for a random nondecreasing step function `f`.  Then `-Y = g(X)` for the
/// nondecreasing `g(t) = -f(-t)`, so `-Y` is comonotonic with `X`, i.e.
/// `(X, Y)` is antimonotonic by construction.
pub fn sample_antimonotonic_pair(rng: &mut SampleRng, n: usize, lo: f64, hi: f64) -> (Act, Act) {
    let x = sample_act(rng, n, lo, hi);
    let k = 1 + rng.below(4) as usize; // 1..=4 levels; k=1 gives a constant Y
    let f = StepFunction::sample(rng, k, -hi, -lo, lo, hi);
    let y = Act {
        values: x.values().iter().map(|&v| f.eval(-v)).collect(),
    };
    (x, y)
}
