//! The Anscombe–Aumann instantiation: finite-support lotteries as a
//! mixture space, affine utility over prizes, statewise mixtures of
//! lottery acts, matching probabilities, antimonotone independence, and
//! representation recovery from a black-box preference oracle.
//!
//! A [`Lottery`] is a probability vector over a fixed prize index set; a
//! [`LotteryAct`] assigns one lottery per state.  An [`AAModel`] holds a
//! probability over states and prize utilities, inducing the subjective
//! expected utility `EU(X) = sum_i P_i U(X_i)` with
//! `U(lottery) = sum_j probs_j u_j` (affine in the mixture operation by
//! construction).
//!
//! Searches over lottery acts parameterize each state's lottery by its
//! *best-prize weight* `theta`: the lottery `theta delta_best +
//! (1-theta) delta_worst` has utility affine in `theta`, so the core
//! module's antimonotonic-pair construction carries over verbatim in
//! theta-space.  Witnesses record those theta vectors.

use crate::acts::{Act, Event, ProbabilityMeasure};
use crate::axioms::sampling::{enriched_alpha01, enriched_antimonotonic_pair};
use crate::axioms::{run_search, Eval, SearchBudget, AXIOM_TOL};
use crate::error::{Error, Result};
use crate::functionals::choquet_telescope;
use crate::report::{PropertyReport, Verdict, Witness, WitnessInput};
use serde::{Deserialize, Serialize};

/// Tolerance on a lottery's probability mass.
pub const LOTTERY_MASS_TOL: f64 = 1e-12;

/// Strictness threshold for preference comparisons between lotteries
/// (U-value differences at or below this count as indifference).
pub const LOTTERY_STRICT_TOL: f64 = 1e-12;

/// Tolerance of recovery claims (mass, band agreement, reconstruction).
pub const RECOVERY_TOL: f64 = 1e-8;

/// A finite-support lottery: probabilities over a fixed prize index set.
///
/// Serializes as the bare probability vector; deserialization re-validates
/// mass and nonnegativity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Lottery {
    probs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Lottery {
    type Error = Error;
    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Lottery::new(probs)
    }
}

impl From<Lottery> for Vec<f64> {
    fn from(l: Lottery) -> Vec<f64> {
        l.probs
    }
}

impl Lottery {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidMeasure("lottery needs at least one prize".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidMeasure(
                "lottery probabilities must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > LOTTERY_MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "lottery probabilities sum to {total}, not 1"
            )));
        }
        Ok(Lottery { probs })
    }

    /// The degenerate lottery putting all mass on prize `j`.
    pub fn degenerate(prize_count: usize, j: usize) -> Result<Self> {
        if j >= prize_count {
            return Err(Error::OutOfRange {
                name: "prize index",
                value: j as f64,
                lo: 0.0,
                hi: prize_count as f64 - 1.0,
            });
        }
        let mut probs = vec![0.0; prize_count];
        probs[j] = 1.0;
        Ok(Lottery { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prize_count(&self) -> usize {
        self.probs.len()
    }

    /// Mixture `alpha * self + (1 - alpha) * other`, componentwise.
    pub fn mix(&self, other: &Lottery, alpha: f64) -> Result<Lottery> {
        if self.prize_count() != other.prize_count() {
            return Err(Error::DimensionMismatch {
                expected: self.prize_count(),
                got: other.prize_count(),
            });
        }
        Ok(Lottery {
            probs: self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                .collect(),
        })
    }
}

/// A lottery-valued act: one lottery per state, all over the same prizes.
///
/// Serializes as per-state probability vectors, e.g.
/// `[[0.25,0.75],[1.0,0.0]]`; deserialization re-validates every lottery
/// and the shared prize count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Lottery>", into = "Vec<Lottery>")]
pub struct LotteryAct {
    states: Vec<Lottery>,
}

impl TryFrom<Vec<Lottery>> for LotteryAct {
    type Error = Error;
    fn try_from(states: Vec<Lottery>) -> Result<Self> {
        LotteryAct::new(states)
    }
}

impl From<LotteryAct> for Vec<Lottery> {
    fn from(a: LotteryAct) -> Vec<Lottery> {
        a.states
    }
}

impl LotteryAct {
    pub fn new(states: Vec<Lottery>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        let k = states[0].prize_count();
        if let Some(bad) = states.iter().find(|l| l.prize_count() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: bad.prize_count(),
            });
        }
        Ok(LotteryAct { states })
    }

    /// The constant act returning `lottery` in every state.
    pub fn constant(n: usize, lottery: Lottery) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyStateSpace);
        }
        Ok(LotteryAct {
            states: vec![lottery; n],
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn prize_count(&self) -> usize {
        self.states[0].prize_count()
    }

    pub fn get(&self, i: usize) -> &Lottery {
        &self.states[i]
    }

    pub fn states(&self) -> &[Lottery] {
        &self.states
    }

    /// Statewise mixture `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &LotteryAct, alpha: f64) -> Result<LotteryAct> {
        if self.state_count() != other.state_count() {
            return Err(Error::DimensionMismatch {
                expected: self.state_count(),
                got: other.state_count(),
            });
        }
        Ok(LotteryAct {
            states: self
                .states
                .iter()
                .zip(&other.states)
                .map(|(a, b)| a.mix(b, alpha))
                .collect::<Result<_>>()?,
        })
    }
}

/// A subjective-expected-utility model over lottery acts.
///
/// JSON shape: `{"p": [state weights], "u": [prize utilities]}`, fully
/// re-validated on deserialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AAModelRepr")]
pub struct AAModel {
    p: ProbabilityMeasure,
    u: Vec<f64>,
}

#[derive(Deserialize)]
struct AAModelRepr {
    p: Vec<f64>,
    u: Vec<f64>,
}

impl TryFrom<AAModelRepr> for AAModel {
    type Error = Error;
    fn try_from(r: AAModelRepr) -> Result<Self> {
        AAModel::new(ProbabilityMeasure::new(r.p)?, r.u)
    }
}

impl AAModel {
    pub fn new(p: ProbabilityMeasure, u: Vec<f64>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidUtility("need at least one prize utility".into()));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "prize utilities".into(),
            });
        }
        Ok(AAModel { p, u })
    }

    pub fn measure(&self) -> &ProbabilityMeasure {
        &self.p
    }

    pub fn prize_utilities(&self) -> &[f64] {
        &self.u
    }

    pub fn state_count(&self) -> usize {
        self.p.len()
    }

    pub fn prize_count(&self) -> usize {
        self.u.len()
    }

    /// Affine lottery utility `U(l) = sum_j l_j u_j`.
    pub fn lottery_utility(&self, l: &Lottery) -> Result<f64> {
        if l.prize_count() != self.prize_count() {
            return Err(Error::DimensionMismatch {
                expected: self.prize_count(),
                got: l.prize_count(),
            });
        }
        Ok(l.probs.iter().zip(&self.u).map(|(p, u)| p * u).sum())
    }

    /// Subjective expected utility `EU(X) = sum_i P_i U(X_i)`.
    pub fn eu(&self, x: &LotteryAct) -> Result<f64> {
        if x.state_count() != self.state_count() {
            return Err(Error::DimensionMismatch {
                expected: self.state_count(),
                got: x.state_count(),
            });
        }
        let mut total = 0.0;
        for (i, lottery) in x.states.iter().enumerate() {
            total += self.p.weight(i) * self.lottery_utility(lottery)?;
        }
        Ok(total)
    }
}

/// Anything that values lottery acts: the preference oracles the
/// lottery-side checks and the recovery run against.  [`AAModel`] is the
/// conforming case; [`RankDependentOracle`] is the deliberate non-EU
/// control.
pub trait LotteryOracle {
    fn state_count(&self) -> usize;
    fn prize_count(&self) -> usize;
    fn value(&self, x: &LotteryAct) -> Result<f64>;
}

impl LotteryOracle for AAModel {
    fn state_count(&self) -> usize {
        AAModel::state_count(self)
    }
    fn prize_count(&self) -> usize {
        AAModel::prize_count(self)
    }
    fn value(&self, x: &LotteryAct) -> Result<f64> {
        self.eu(x)
    }
}

/// Choquet-expected-utility over lottery acts: reduces each state's
/// lottery to its affine utility, then aggregates across states with a
/// (generally non-additive) capacity.  Not an EU model unless the
/// capacity is additive — used to show the am-independence check has
/// teeth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDependentOracle {
    capacity: crate::capacities::Capacity,
    u: Vec<f64>,
}

impl RankDependentOracle {
    pub fn new(capacity: crate::capacities::Capacity, u: Vec<f64>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidUtility("need at least one prize utility".into()));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "prize utilities".into(),
            });
        }
        Ok(RankDependentOracle { capacity, u })
    }
}

impl LotteryOracle for RankDependentOracle {
    fn state_count(&self) -> usize {
        self.capacity.state_count()
    }
    fn prize_count(&self) -> usize {
        self.u.len()
    }
    fn value(&self, x: &LotteryAct) -> Result<f64> {
        if x.state_count() != self.capacity.state_count() {
            return Err(Error::DimensionMismatch {
                expected: self.capacity.state_count(),
                got: x.state_count(),
            });
        }
        let values: Vec<f64> = x
            .states
            .iter()
            .map(|l| {
                if l.prize_count() != self.u.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.u.len(),
                        got: l.prize_count(),
                    });
                }
                Ok(l.probs.iter().zip(&self.u).map(|(p, u)| p * u).sum())
            })
            .collect::<Result<_>>()?;
        choquet_telescope(&values, |mask| self.capacity.value(Event { mask }))
    }
}

/// Antimonotonicity of lottery acts under a model's preference: there are
/// no states `w, w'` with `X(w)` strictly preferred to `X(w')` *and*
/// `Y(w)` strictly preferred to `Y(w')`, where "strictly" means a U-value
/// gap above [`LOTTERY_STRICT_TOL`].
pub fn lottery_antimonotonic(model: &AAModel, x: &LotteryAct, y: &LotteryAct) -> Result<bool> {
    if x.state_count() != y.state_count() {
        return Err(Error::DimensionMismatch {
            expected: x.state_count(),
            got: y.state_count(),
        });
    }
    let ux: Vec<f64> = x
        .states
        .iter()
        .map(|l| model.lottery_utility(l))
        .collect::<Result<_>>()?;
    let uy: Vec<f64> = y
        .states
        .iter()
        .map(|l| model.lottery_utility(l))
        .collect::<Result<_>>()?;
    for i in 0..ux.len() {
        for j in 0..ux.len() {
            if ux[i] - ux[j] > LOTTERY_STRICT_TOL && uy[i] - uy[j] > LOTTERY_STRICT_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Value of the constant act at the band mixture `p M + (1-p) m`.
fn band_value(
    oracle: &dyn LotteryOracle,
    m: &Lottery,
    big_m: &Lottery,
    p: f64,
) -> Result<f64> {
    let l = big_m.mix(m, p)?;
    oracle.value(&LotteryAct::constant(oracle.state_count(), l)?)
}

/// Solve `value(p M + (1-p) m) = target` for `p in [0, 1]` by bisection
/// (the band value is increasing in `p` for preference oracles with
/// `M > m`).  Returns the matching probability to bisection precision.
fn matching_probability_bisect(
    oracle: &dyn LotteryOracle,
    m: &Lottery,
    big_m: &Lottery,
    target: f64,
) -> Result<f64> {
    let v_m = band_value(oracle, m, big_m, 0.0)?;
    let v_big = band_value(oracle, m, big_m, 1.0)?;
    if !(v_big - v_m > LOTTERY_STRICT_TOL) {
        return Err(Error::Precondition(format!(
            "band requires M strictly preferred to m (values {v_big} vs {v_m})"
        )));
    }
    let slack = 1e-9 * (1.0 + v_m.abs() + v_big.abs());
    if target < v_m - slack || target > v_big + slack {
        return Err(Error::OutOfRange {
            name: "oracle value",
            value: target,
            lo: v_m,
            hi: v_big,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if band_value(oracle, m, big_m, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Matching probability of `X` with respect to the band `[m, M]`: the
/// `p` with `p M + (1-p) m ~ X`.
///
/// Requires `U(M) > U(m)` and `U(m) <= U(X_i) <= U(M)` statewise.  The
/// closed form `(EU(X) - U(m)) / (U(M) - U(m))` is cross-checked against
/// bisection on the preference oracle to 1e-10.
pub fn matching_probability(
    model: &AAModel,
    x: &LotteryAct,
    m: &Lottery,
    big_m: &Lottery,
) -> Result<f64> {
    let um = model.lottery_utility(m)?;
    let u_big = model.lottery_utility(big_m)?;
    if !(u_big - um > LOTTERY_STRICT_TOL) {
        return Err(Error::Precondition(format!(
            "band requires U(M) > U(m), got U(M) = {u_big}, U(m) = {um}"
        )));
    }
    let band_slack = LOTTERY_STRICT_TOL * (1.0 + um.abs() + u_big.abs());
    for lottery in x.states() {
        let ui = model.lottery_utility(lottery)?;
        if ui < um - band_slack || ui > u_big + band_slack {
            return Err(Error::OutOfRange {
                name: "statewise utility U(X_i)",
                value: ui,
                lo: um,
                hi: u_big,
            });
        }
    }
    let eu = model.eu(x)?;
    let p = ((eu - um) / (u_big - um)).clamp(0.0, 1.0);
    let bisected = matching_probability_bisect(model, m, big_m, eu)?;
    if (p - bisected).abs() > 1e-10 {
        return Err(Error::Inversion {
            target: p,
            reason: format!(
                "matching-probability bisection disagrees with the closed form by {}",
                (p - bisected).abs()
            ),
        });
    }
    Ok(p)
}

/// Best-prize/worst-prize indices and the degenerate-constant values of
/// an oracle, or `None` when all prizes are indifferent.
fn prize_extremes(oracle: &dyn LotteryOracle) -> Result<Option<(usize, usize, f64, f64)>> {
    let k = oracle.prize_count();
    let n = oracle.state_count();
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut worst = (0usize, f64::INFINITY);
    for j in 0..k {
        let v = oracle.value(&LotteryAct::constant(n, Lottery::degenerate(k, j)?)?)?;
        if v > best.1 {
            best = (j, v);
        }
        if v < worst.1 {
            worst = (j, v);
        }
    }
    if best.1 - worst.1 <= LOTTERY_STRICT_TOL {
        return Ok(None);
    }
    Ok(Some((best.0, worst.0, best.1, worst.1)))
}

/// The lottery `theta delta_best + (1-theta) delta_worst`.
fn theta_lottery(k: usize, best: usize, worst: usize, theta: f64) -> Lottery {
    let mut probs = vec![0.0; k];
    if best == worst {
        probs[best] = 1.0;
    } else {
        probs[best] = theta;
        probs[worst] = 1.0 - theta;
    }
    Lottery { probs }
}

fn theta_act(k: usize, best: usize, worst: usize, thetas: &Act) -> LotteryAct {
    LotteryAct {
        states: thetas
            .values()
            .iter()
            .map(|&t| theta_lottery(k, best, worst, t))
            .collect(),
    }
}

/// Antimonotone independence: for antimonotonic `(X, Z)` and a constant
/// act `x` indifferent to `X`, tests
/// `|V(alpha X + (1-alpha) Z) - V(alpha x + (1-alpha) Z)| <= tol * scale`.
///
/// Pairs are built in theta-space (best/worst-prize mixtures) with the
/// core antimonotonic construction, so they are antimonotonic under any
/// oracle that ranks `theta` mixtures increasingly; the indifferent
/// constant is found by bisection on the oracle.  A model with all prize
/// utilities equal makes the axiom trivial: the check passes immediately
/// with a note.
pub fn check_am_independence<O: LotteryOracle + Sync>(
    oracle: &O,
    budget: &SearchBudget,
) -> Result<PropertyReport> {
    budget.validate()?;
    if budget.grid.is_some() {
        return Err(Error::Precondition(
            "am_independence does not support exhaustive grid mode".into(),
        ));
    }
    let Some((best, worst, _, _)) = prize_extremes(oracle)? else {
        let mut report = PropertyReport::pass("am_independence", 0, AXIOM_TOL);
        report.notes.push(
            "degenerate model: all prizes indifferent, am-independence holds trivially"
                .to_string(),
        );
        return Ok(report);
    };
    let n = oracle.state_count();
    let k = oracle.prize_count();
    let (lo, hi) = (
        budget.value_range.0.clamp(0.0, 1.0),
        budget.value_range.1.clamp(0.0, 1.0),
    );
    let clipped = (lo, hi) != budget.value_range;
    let m_lottery = theta_lottery(k, best, worst, 0.0);
    let big_lottery = theta_lottery(k, best, worst, 1.0);

    let mut report = run_search(
        "am_independence",
        None,
        budget,
        budget.samples,
        false,
        |idx| {
            let mut rng = budget.rng_for(idx);
            let (tx, tz) = enriched_antimonotonic_pair(&mut rng, n, lo, hi);
            let alpha = enriched_alpha01(&mut rng);
            let x = theta_act(k, best, worst, &tx);
            let z = theta_act(k, best, worst, &tz);
            let vx = oracle.value(&x)?;
            let theta_const = match matching_probability_bisect(oracle, &m_lottery, &big_lottery, vx)
            {
                Ok(t) => t,
                Err(Error::OutOfRange { .. }) => {
                    return Ok(Eval::Skip("oracle value outside the constant-act band"))
                }
                Err(e) => return Err(e),
            };
            let x_const =
                LotteryAct::constant(n, theta_lottery(k, best, worst, theta_const))?;
            if (oracle.value(&x_const)? - vx).abs() > 1e-10 {
                return Ok(Eval::Skip("indifferent constant not found to 1e-10"));
            }
            let lhs = oracle.value(&x.mix(&z, alpha)?)?;
            let rhs = oracle.value(&x_const.mix(&z, alpha)?)?;
            Ok(Eval::Checked {
                inputs: vec![
                    WitnessInput::act("theta_X", tx.values()),
                    WitnessInput::act("theta_Z", tz.values()),
                    WitnessInput::scalar("alpha", alpha),
                    WitnessInput::scalar("theta_const", theta_const),
                ],
                lhs,
                rhs,
                violation: (lhs - rhs).abs(),
                scale: 1.0 + lhs.abs() + rhs.abs(),
            })
        },
    )?;
    if clipped {
        report.notes.push(format!(
            "value range clipped to the theta domain: [{lo}, {hi}]"
        ));
    }
    Ok(report)
}

/// A representation recovered from a black-box preference oracle, per the
/// matching-probability construction: `p_hat[i]` is the MP of the act
/// paying `M` on state `i` and `m` elsewhere; `u_hat[j]` is the prize-`j`
/// utility re-anchored so that `u(m) = 0` and `u(M) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredRepresentation {
    pub p_hat: Vec<f64>,
    pub u_hat: Vec<f64>,
    pub report: PropertyReport,
}

impl RecoveredRepresentation {
    /// The recovered state probabilities as a measure (renormalized for
    /// residual bisection drift), when recovery verified.
    pub fn measure(&self) -> Result<ProbabilityMeasure> {
        if !self.report.passed() {
            return Err(Error::InvalidMeasure(format!(
                "recovery did not verify: {}",
                self.report.human_line()
            )));
        }
        let clamped: Vec<f64> = self.p_hat.iter().map(|&w| w.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        ProbabilityMeasure::new(clamped.into_iter().map(|w| w / sum).collect())
    }
}

/// Recover `(P, u)` from a black-box preference oracle using matching
/// probabilities, and verify the recovery:
///
/// * state probabilities from indicator-style acts (`M` on one state,
///   `m` elsewhere), checked to sum to 1 within 1e-8;
/// * prize utilities from degenerate constant acts measured in the wide
///   band spanned by the worst and best prizes, then affinely re-anchored
///   to take value 0 at `m` and 1 at `M`; for prizes already inside the
///   `[m, M]` band the direct in-band MP must agree with the re-anchored
///   value within 1e-8 (the two-band overlap check);
/// * reconstruction on `budget.samples` random lottery acts:
///   `|V_oracle(X) - (v_m + (v_M - v_m) sum_i p_hat[i] u_hat(X_i))| <= 1e-8`.
///
/// All matching probabilities come from bisection on the oracle alone —
/// the construction never peeks at model internals.
pub fn recover_representation(
    oracle: &impl LotteryOracle,
    m: &Lottery,
    big_m: &Lottery,
    budget: &SearchBudget,
) -> Result<RecoveredRepresentation> {
    budget.validate()?;
    if budget.grid.is_some() {
        return Err(Error::Precondition(
            "aa recovery does not support exhaustive grid mode".into(),
        ));
    }
    let n = oracle.state_count();
    let k = oracle.prize_count();
    if m.prize_count() != k || big_m.prize_count() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: if m.prize_count() != k {
                m.prize_count()
            } else {
                big_m.prize_count()
            },
        });
    }
    let v_m = oracle.value(&LotteryAct::constant(n, m.clone())?)?;
    let v_big = oracle.value(&LotteryAct::constant(n, big_m.clone())?)?;
    if !(v_big - v_m > LOTTERY_STRICT_TOL) {
        return Err(Error::Precondition(format!(
            "recovery requires M strictly preferred to m (values {v_big} vs {v_m})"
        )));
    }

    // State probabilities: MP of (M on state i, m elsewhere).
    let mut p_hat = Vec::with_capacity(n);
    for i in 0..n {
        let states: Vec<Lottery> = (0..n)
            .map(|s| if s == i { big_m.clone() } else { m.clone() })
            .collect();
        let v = oracle.value(&LotteryAct::new(states)?)?;
        p_hat.push(matching_probability_bisect(oracle, m, big_m, v)?);
    }

    // Prize utilities in the wide band (worst..best prize), re-anchored
    // to the caller band.
    let Some((best, worst, _, _)) = prize_extremes(oracle)? else {
        return Err(Error::Precondition(
            "recovery requires at least two non-indifferent prizes".into(),
        ));
    };
    let wide_m = Lottery::degenerate(k, worst)?;
    let wide_big = Lottery::degenerate(k, best)?;
    let wide_mp = |l: &Lottery| -> Result<f64> {
        let v = oracle.value(&LotteryAct::constant(n, l.clone())?)?;
        matching_probability_bisect(oracle, &wide_m, &wide_big, v)
    };
    let mp_m = wide_mp(m)?;
    let mp_big = wide_mp(big_m)?;
    if !(mp_big - mp_m > LOTTERY_STRICT_TOL) {
        return Err(Error::Precondition(
            "band endpoints collapse inside the wide band".into(),
        ));
    }
    let mut u_hat = Vec::with_capacity(k);
    for j in 0..k {
        let mp_j = wide_mp(&Lottery::degenerate(k, j)?)?;
        u_hat.push((mp_j - mp_m) / (mp_big - mp_m));
    }

    // --- verification stages ---
    let mut worst_finding: Option<Witness> = None;
    let mut worst_magnitude = 0.0_f64;
    let mut samples: u64 = n as u64 + k as u64;

    let mass: f64 = p_hat.iter().sum();
    let mass_violation = (mass - 1.0).abs();
    let mass_ok = mass_violation <= RECOVERY_TOL;
    if mass_violation > RECOVERY_TOL && mass_violation > worst_magnitude {
        worst_magnitude = mass_violation;
        worst_finding = Some(Witness {
            sample_index: None,
            inputs: vec![WitnessInput::scalar("sum_p_hat", mass)],
            lhs: mass,
            rhs: 1.0,
            magnitude: mass_violation,
        });
    }
    samples += 1;

    // Two-band overlap: prizes already inside [m, M] must get the same
    // utility from a direct in-band measurement.
    let mut overlap_ok = true;
    let mut overlap_count = 0u64;
    for j in 0..k {
        let dj = Lottery::degenerate(k, j)?;
        let vj = oracle.value(&LotteryAct::constant(n, dj.clone())?)?;
        if vj < v_m - LOTTERY_STRICT_TOL || vj > v_big + LOTTERY_STRICT_TOL {
            continue;
        }
        overlap_count += 1;
        samples += 1;
        let direct = matching_probability_bisect(oracle, m, big_m, vj)?;
        let violation = (direct - u_hat[j]).abs();
        if violation > RECOVERY_TOL {
            overlap_ok = false;
            if violation > worst_magnitude {
                worst_magnitude = violation;
                worst_finding = Some(Witness {
                    sample_index: None,
                    inputs: vec![WitnessInput::scalar("prize", j as f64)],
                    lhs: direct,
                    rhs: u_hat[j],
                    magnitude: violation,
                });
            }
        }
    }

    // Reconstruction on random lottery acts over the full prize simplex
    // (occasionally degenerate, to hit corners).
    let mut reconstruction_ok = true;
    for idx in 0..budget.samples {
        samples += 1;
        let mut rng = budget.rng_for(idx);
        let mut states = Vec::with_capacity(n);
        for _ in 0..n {
            let lottery = if rng.chance(0.3) {
                let j = rng.below(k as u64) as usize;
                Lottery::degenerate(k, j)?
            } else {
                let raw: Vec<f64> = (0..k).map(|_| rng.unit() + 1e-12).collect();
                let total: f64 = raw.iter().sum();
                Lottery::new(raw.into_iter().map(|w| w / total).collect())?
            };
            states.push(lottery);
        }
        let x = LotteryAct::new(states)?;
        let lhs = oracle.value(&x).map_err(|e| Error::SampleEvaluation {
            sample: idx,
            source: Box::new(e),
        })?;
        let forward: f64 = x
            .states
            .iter()
            .zip(&p_hat)
            .map(|(l, p)| {
                p * l
                    .probs
                    .iter()
                    .zip(&u_hat)
                    .map(|(q, u)| q * u)
                    .sum::<f64>()
            })
            .sum();
        let rhs = v_m + (v_big - v_m) * forward;
        let violation = (lhs - rhs).abs();
        if violation > RECOVERY_TOL {
            reconstruction_ok = false;
            if violation > worst_magnitude {
                worst_magnitude = violation;
                let probs_flat: Vec<f64> =
                    x.states.iter().flat_map(|l| l.probs.clone()).collect();
                worst_finding = Some(Witness {
                    sample_index: Some(idx),
                    inputs: vec![WitnessInput::act("X_probs_flat", &probs_flat)],
                    lhs,
                    rhs,
                    magnitude: violation,
                });
            }
        }
    }

    let mut report = PropertyReport::pass("aa_recovery", samples, RECOVERY_TOL);
    report.seed = Some(budget.seed);
    report.notes.push(format!(
        "stage probability mass: {}",
        if mass_ok { "pass" } else { "violated" }
    ));
    report.notes.push(format!(
        "stage band overlap ({overlap_count} prizes): {}",
        if overlap_ok { "pass" } else { "violated" }
    ));
    report.notes.push(format!(
        "stage reconstruction: {}",
        if reconstruction_ok { "pass" } else { "violated" }
    ));
    if let Some(w) = worst_finding {
        report.verdict = Verdict::Violated;
        report.witness = Some(w);
    }
    Ok(RecoveredRepresentation {
        p_hat,
        u_hat,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacities::Capacity;

    fn lottery(probs: &[f64]) -> Lottery {
        Lottery::new(probs.to_vec()).unwrap()
    }

    fn model(weights: &[f64], u: &[f64]) -> AAModel {
        AAModel::new(
            ProbabilityMeasure::new(weights.to_vec()).unwrap(),
            u.to_vec(),
        )
        .unwrap()
    }

    /// Two-state rank-dependent control with W({0}) = W({1}) = 0.1 and
    /// prizes worth 0 and 1.
    fn rank_dependent_control() -> RankDependentOracle {
        let capacity =
            Capacity::new(2, vec![0.0, 0.1, 0.1, 1.0]).unwrap();
        RankDependentOracle::new(capacity, vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn lottery_validation_rejects_bad_mass() {
        assert!(Lottery::new(vec![0.5, 0.6]).is_err());
        assert!(Lottery::new(vec![0.5, -0.5, 1.0]).is_err());
        assert!(Lottery::new(vec![]).is_err());
        assert!(Lottery::new(vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn mixture_laws_hold() {
        let x = lottery(&[0.25, 0.75]);
        let y = lottery(&[0.5, 0.5]);
        // identity
        assert_eq!(x.mix(&y, 1.0).unwrap(), x);
        // commutativity
        assert_eq!(x.mix(&y, 0.25).unwrap(), y.mix(&x, 0.75).unwrap());
        // associativity: mix(mix(x,y,beta), y, alpha) = mix(x, y, alpha*beta)
        let alpha = 0.5;
        let beta = 0.25;
        let left = x.mix(&y, beta).unwrap().mix(&y, alpha).unwrap();
        let right = x.mix(&y, alpha * beta).unwrap();
        for (a, b) in left.probs().iter().zip(right.probs()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn act_mix_is_statewise() {
        let f = LotteryAct::new(vec![lottery(&[1.0, 0.0]), lottery(&[0.0, 1.0])]).unwrap();
        let g = LotteryAct::new(vec![lottery(&[0.0, 1.0]), lottery(&[0.0, 1.0])]).unwrap();
        let h = f.mix(&g, 0.5).unwrap();
        assert_eq!(h.get(0).probs(), &[0.5, 0.5]);
        assert_eq!(h.get(1).probs(), &[0.0, 1.0]);
    }

    #[test]
    fn antimonotonic_constant_and_reversed() {
        let m = model(&[0.5, 0.5], &[0.0, 1.0]);
        let x = LotteryAct::new(vec![lottery(&[0.0, 1.0]), lottery(&[1.0, 0.0])]).unwrap();
        let constant = LotteryAct::constant(2, lottery(&[0.5, 0.5])).unwrap();
        assert!(lottery_antimonotonic(&m, &x, &constant).unwrap());
        // strictly reversed ranking
        let y = LotteryAct::new(vec![lottery(&[1.0, 0.0]), lottery(&[0.0, 1.0])]).unwrap();
        assert!(lottery_antimonotonic(&m, &x, &y).unwrap());
        // both strictly increase from state 0 to state 1
        let z = LotteryAct::new(vec![lottery(&[0.9, 0.1]), lottery(&[0.1, 0.9])]).unwrap();
        assert!(!lottery_antimonotonic(&m, &x.mix(&z, 0.0).unwrap(), &z).unwrap());
        assert!(!lottery_antimonotonic(&m, &z, &z).unwrap());
    }

    #[test]
    fn matching_probability_closed_form_and_indicators() {
        let m3 = model(&[0.25, 0.75], &[0.0, 1.0]);
        let m = lottery(&[1.0, 0.0]);
        let big = lottery(&[0.0, 1.0]);
        // constants at the band ends
        let at_m = LotteryAct::constant(2, m.clone()).unwrap();
        let at_big = LotteryAct::constant(2, big.clone()).unwrap();
        assert_eq!(matching_probability(&m3, &at_m, &m, &big).unwrap(), 0.0);
        assert_eq!(matching_probability(&m3, &at_big, &m, &big).unwrap(), 1.0);
        // indicator act: M on state 1, m on state 0 -> MP = P({1}) = 0.75
        let ind = LotteryAct::new(vec![m.clone(), big.clone()]).unwrap();
        let mp = matching_probability(&m3, &ind, &m, &big).unwrap();
        assert!((mp - 0.75).abs() <= 1e-10);
        // EU = 0.4 with U(m)=0, U(M)=1 -> 0.4
        let mixed = LotteryAct::constant(2, big.mix(&m, 0.4).unwrap()).unwrap();
        let mp = matching_probability(&m3, &mixed, &m, &big).unwrap();
        assert!((mp - 0.4).abs() <= 1e-10);
    }

    #[test]
    fn matching_probability_rejects_bad_bands() {
        let m3 = model(&[0.5, 0.5], &[0.0, 1.0]);
        let m = lottery(&[1.0, 0.0]);
        let big = lottery(&[0.0, 1.0]);
        // M not strictly preferred to m
        assert!(matching_probability(
            &m3,
            &LotteryAct::constant(2, m.clone()).unwrap(),
            &big,
            &m
        )
        .is_err());
        // act outside the band
        let narrow_big = big.mix(&m, 0.5).unwrap(); // utility 0.5
        let outside = LotteryAct::constant(2, big.clone()).unwrap(); // utility 1
        assert!(matches!(
            matching_probability(&m3, &outside, &m, &narrow_big),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn mp_represents_preference_and_is_affine() {
        let m3 = model(&[0.3, 0.3, 0.4], &[0.0, 0.25, 1.0]);
        let m = lottery(&[1.0, 0.0, 0.0]);
        let big = lottery(&[0.0, 0.0, 1.0]);
        let mut rng = crate::rng::SampleRng::new(7, 0);
        for _ in 0..200 {
            let draw = |rng: &mut crate::rng::SampleRng| {
                let states: Vec<Lottery> = (0..3)
                    .map(|_| big.mix(&m, rng.unit()).unwrap())
                    .collect();
                LotteryAct::new(states).unwrap()
            };
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            let (mpx, mpy) = (
                matching_probability(&m3, &x, &m, &big).unwrap(),
                matching_probability(&m3, &y, &m, &big).unwrap(),
            );
            // represents preference
            assert_eq!(
                m3.eu(&x).unwrap() >= m3.eu(&y).unwrap(),
                mpx >= mpy || (mpx - mpy).abs() <= 1e-10
            );
            // affine under statewise mixing (general pairs)
            let alpha = rng.unit();
            let mixed = x.mix(&y, alpha).unwrap();
            let mp_mix = matching_probability(&m3, &mixed, &m, &big).unwrap();
            assert!((mp_mix - (alpha * mpx + (1.0 - alpha) * mpy)).abs() <= 1e-9);
        }
    }

    #[test]
    fn am_independence_passes_for_every_aa_model() {
        let m3 = model(&[0.2, 0.3, 0.5], &[0.0, 0.4, 1.0]);
        let r = check_am_independence(&m3, &SearchBudget::new(2000, 83)).unwrap();
        assert!(r.passed(), "witness: {:?}", r.witness);
        assert!(r.samples_checked > 1500, "too many skips");
    }

    #[test]
    fn am_independence_fails_for_rank_dependent_control() {
        // theta_X = (1,0), theta_Z = (0,1), alpha = 1/2: the mixture of X
        // with the indifferent constant theta = W({0}) = 0.1 values at
        // 0.1, while the direct mixture values at 0.5: violation 0.4.
        let oracle = rank_dependent_control();
        let r = check_am_independence(&oracle, &SearchBudget::default()).unwrap();
        assert!(!r.passed());
        let w = r.witness.unwrap();
        assert!(w.magnitude >= 0.4 - 1e-9, "magnitude {}", w.magnitude);
    }

    #[test]
    fn am_independence_alpha_one_is_trivial() {
        let oracle = rank_dependent_control();
        let x = LotteryAct::new(vec![lottery(&[0.0, 1.0]), lottery(&[1.0, 0.0])]).unwrap();
        let z = LotteryAct::new(vec![lottery(&[1.0, 0.0]), lottery(&[0.0, 1.0])]).unwrap();
        let vx = oracle.value(&x.mix(&z, 1.0).unwrap()).unwrap();
        assert_eq!(vx, oracle.value(&x).unwrap());
    }

    #[test]
    fn am_independence_flags_degenerate_models() {
        let flat = model(&[0.5, 0.5], &[0.7, 0.7]);
        let r = check_am_independence(&flat, &SearchBudget::default()).unwrap();
        assert!(r.passed());
        assert!(r.notes.iter().any(|n| n.contains("degenerate")));
        assert_eq!(r.samples_checked, 0);
    }

    #[test]
    fn recovery_reconstructs_hidden_model() {
        let hidden = model(&[0.25, 0.75], &[0.0, 1.0]);
        let m = lottery(&[1.0, 0.0]);
        let big = lottery(&[0.0, 1.0]);
        let rec =
            recover_representation(&hidden, &m, &big, &SearchBudget::new(2000, 89)).unwrap();
        assert!(rec.report.passed(), "notes: {:?}", rec.report.notes);
        assert!((rec.p_hat[0] - 0.25).abs() <= 1e-8);
        assert!((rec.p_hat[1] - 0.75).abs() <= 1e-8);
        assert!((rec.u_hat[0] - 0.0).abs() <= 1e-8);
        assert!((rec.u_hat[1] - 1.0).abs() <= 1e-8);
        let p = rec.measure().unwrap();
        assert!((p.weight(0) - 0.25).abs() <= 1e-9);
    }

    #[test]
    fn recovery_reanchors_prizes_outside_the_band() {
        // Prizes worth (-0.5, 0, 1, 2); band from prize 1 (utility 0) to
        // prize 2 (utility 1): out-of-band prizes re-anchor to -0.5 and 2.
        let hidden = model(&[0.4, 0.6], &[-0.5, 0.0, 1.0, 2.0]);
        let m = lottery(&[0.0, 1.0, 0.0, 0.0]);
        let big = lottery(&[0.0, 0.0, 1.0, 0.0]);
        let rec =
            recover_representation(&hidden, &m, &big, &SearchBudget::new(1500, 97)).unwrap();
        assert!(rec.report.passed(), "notes: {:?}", rec.report.notes);
        let expected = [-0.5, 0.0, 1.0, 2.0];
        for (u, e) in rec.u_hat.iter().zip(&expected) {
            assert!((u - e).abs() <= 1e-8, "u_hat {u} vs {e}");
        }
    }

    #[test]
    fn recovery_rejects_collapsed_bands() {
        let hidden = model(&[0.5, 0.5], &[0.0, 1.0]);
        let same = lottery(&[0.5, 0.5]);
        assert!(recover_representation(
            &hidden,
            &same,
            &same,
            &SearchBudget::default()
        )
        .is_err());
    }

    #[test]
    fn lottery_acts_serialize_as_per_state_probability_vectors() {
        let act = LotteryAct::new(vec![lottery(&[0.25, 0.75]), lottery(&[1.0, 0.0])]).unwrap();
        let json = serde_json::to_string(&act).unwrap();
        assert_eq!(json, "[[0.25,0.75],[1.0,0.0]]");
        let back: LotteryAct = serde_json::from_str(&json).unwrap();
        assert_eq!(back, act);
        let bad: std::result::Result<LotteryAct, _> =
            serde_json::from_str("[[0.5,0.6],[1.0,0.0]]");
        assert!(bad.is_err(), "invalid mass must not deserialize");
    }

    #[test]
    fn aa_model_serde_roundtrip() {
        let m = model(&[0.25, 0.75], &[0.0, 0.5, 1.0]);
        let json = serde_json::to_string(&m).unwrap();
        let back: AAModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
