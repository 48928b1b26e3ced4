//! Internal generators for the axiom searchers.
//!
//! The library-level generators in [`crate::acts`] draw purely continuous
//! (dyadic-lattice) values.  Falsification wants more: several published
//! counterexamples live at *corners* — indicator-like acts whose values
//! sit exactly on the range endpoints — which continuous sampling hits
//! with probability zero.  The searchers therefore enrich the same
//! constructions with quantized variants: with probability 1/2 an act's
//! values (or a step function's levels) are drawn from a small
//! endpoint-including grid (2, 3, or 5 levels).  The antimonotonic
//! construction is unchanged — `Y = f(-X)` for a nondecreasing step `f` —
//! only the distribution of `X` and of `f`'s levels is enriched, so every
//! guarantee of the base generator still holds.
//!
//! Grid levels are equally spaced over `[lo, hi]`, so for power-of-two
//! range widths they stay on the dyadic lattice and sums remain exact.

use crate::acts::{Act, StepFunction};
use crate::rng::SampleRng;

/// Draw the number of grid levels for a quantized variant, or `None` for
/// the continuous variant.  Probabilities: 2 levels 25%, 3 levels 15%,
/// 5 levels 10%, continuous 50%.
fn quantization(rng: &mut SampleRng) -> Option<usize> {
    let u = rng.unit();
    if u < 0.25 {
        Some(2)
    } else if u < 0.40 {
        Some(3)
    } else if u < 0.50 {
        Some(5)
    } else {
        None
    }
}

fn grid_level(rng: &mut SampleRng, k: usize, lo: f64, hi: f64) -> f64 {
    let j = rng.below(k as u64) as f64;
    lo + j * (hi - lo) / (k - 1) as f64
}

/// One act with the corner-enriched distribution.
pub(crate) fn enriched_act(rng: &mut SampleRng, n: usize, lo: f64, hi: f64) -> Act {
    let values = match quantization(rng) {
        Some(k) => (0..n).map(|_| grid_level(rng, k, lo, hi)).collect(),
        None => (0..n).map(|_| rng.in_range(lo, hi)).collect(),
    };
    Act::new(values).expect("sampled values are finite")
}

/// A corner-enriched nondecreasing step function on `[-hi, -lo]` with
/// levels in `[lo, hi]`.
fn enriched_step(rng: &mut SampleRng, lo: f64, hi: f64) -> StepFunction {
    let level_count = 1 + rng.below(4) as usize;
    let mut levels: Vec<f64> = match quantization(rng) {
        Some(k) => (0..level_count)
            .map(|_| grid_level(rng, k, lo, hi))
            .collect(),
        None => (0..level_count).map(|_| rng.in_range(lo, hi)).collect(),
    };
    levels.sort_by(f64::total_cmp);
    let mut thresholds: Vec<f64> = (0..level_count - 1)
        .map(|_| rng.in_range(-hi, -lo))
        .collect();
    thresholds.sort_by(f64::total_cmp);
    StepFunction::from_sorted(thresholds, levels)
}

/// Antimonotonic pair by the `Y = f(-X)` construction, corner-enriched.
pub(crate) fn enriched_antimonotonic_pair(
    rng: &mut SampleRng,
    n: usize,
    lo: f64,
    hi: f64,
) -> (Act, Act) {
    let x = enriched_act(rng, n, lo, hi);
    let f = enriched_step(rng, lo, hi);
    let y = Act::new(x.values().iter().map(|&v| f.eval(-v)).collect())
        .expect("step levels are finite");
    (x, y)
}

/// Comonotonic pair: two nondecreasing step transforms of one common act
/// (nondecreasing transforms of a common act are comonotonic), with the
/// transforms' domain equal to the sampled range.
pub(crate) fn enriched_comonotonic_pair(
    rng: &mut SampleRng,
    n: usize,
    lo: f64,
    hi: f64,
) -> (Act, Act) {
    let z = enriched_act(rng, n, lo, hi);
    // f is defined on [-hi, -lo]; feed it -z to get a nondecreasing
    // transform of z itself.
    let f1 = enriched_step(rng, lo, hi);
    let f2 = enriched_step(rng, lo, hi);
    let x = Act::new(z.values().iter().map(|&v| f1.eval(v - hi - lo)).collect()).unwrap();
    let y = Act::new(z.values().iter().map(|&v| f2.eval(v - hi - lo)).collect()).unwrap();
    (x, y)
}

/// Independent pair for the unrestricted relation class.
pub(crate) fn enriched_general_pair(
    rng: &mut SampleRng,
    n: usize,
    lo: f64,
    hi: f64,
) -> (Act, Act) {
    let x = enriched_act(rng, n, lo, hi);
    let y = enriched_act(rng, n, lo, hi);
    (x, y)
}

/// Mixing weight in `[0, 1]`: continuous half the time, otherwise one of
/// {1/4, 1/2, 3/4} (published witnesses tend to sit at simple weights).
pub(crate) fn enriched_alpha01(rng: &mut SampleRng) -> f64 {
    if rng.chance(0.5) {
        match rng.below(3) {
            0 => 0.25,
            1 => 0.5,
            _ => 0.75,
        }
    } else {
        rng.unit()
    }
}

/// Scale factor for homogeneity checks: magnitude in `(0, 2]`, enriched
/// with the simple values {1/2, 1, 2}; negative half the time unless
/// `positive_only`.
pub(crate) fn enriched_scale(rng: &mut SampleRng, positive_only: bool) -> f64 {
    let magnitude = if rng.chance(0.5) {
        match rng.below(3) {
            0 => 0.5,
            1 => 1.0,
            _ => 2.0,
        }
    } else {
        // Avoid exact zero; homogeneity at 0 is normalization's job.
        2.0 - rng.in_range(0.0, 2.0)
    };
    if positive_only || rng.chance(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

/// Dominated pair `(X, Y)` with `Y <= X` pointwise and `Y` still inside
/// `[lo, hi]`: each state independently keeps `Y_i = X_i`, drops to a
/// random value in `[lo, X_i]`, or (quantized variant) drops all the way
/// to `lo`.
pub(crate) fn enriched_dominated_pair(
    rng: &mut SampleRng,
    n: usize,
    lo: f64,
    hi: f64,
) -> (Act, Act) {
    let x = enriched_act(rng, n, lo, hi);
    let full_drop = rng.chance(0.25);
    let y_values: Vec<f64> = x
        .values()
        .iter()
        .map(|&xi| {
            if rng.chance(0.5) {
                xi
            } else if full_drop {
                lo
            } else {
                // in_range(lo, xi) keeps the value on a lattice only when
                // xi - lo is a power of two; exactness is not needed for
                // dominated pairs, containment is.
                rng.in_range(lo, xi)
            }
        })
        .collect();
    (x, Act::new(y_values).expect("dominated values are finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acts::{is_antimonotonic, is_comonotonic};

    #[test]
    fn enriched_antimonotonic_pairs_verify() {
        for i in 0..500 {
            let mut rng = SampleRng::new(0xA17140, i);
            let (x, y) = enriched_antimonotonic_pair(&mut rng, 5, 0.0, 1.0);
            assert!(is_antimonotonic(&x, &y).unwrap(), "sample {i}");
        }
    }

    #[test]
    fn enriched_comonotonic_pairs_verify() {
        for i in 0..500 {
            let mut rng = SampleRng::new(0xA17140, i);
            let (x, y) = enriched_comonotonic_pair(&mut rng, 5, 0.0, 1.0);
            assert!(is_comonotonic(&x, &y).unwrap(), "sample {i}");
        }
    }

    #[test]
    fn dominated_pairs_dominate_and_stay_in_range() {
        for i in 0..500 {
            let mut rng = SampleRng::new(7, i);
            let (x, y) = enriched_dominated_pair(&mut rng, 6, -1.0, 1.0);
            for (xi, yi) in x.values().iter().zip(y.values()) {
                assert!(yi <= xi);
                assert!(*yi >= -1.0);
            }
        }
    }

    #[test]
    fn quantized_corners_are_reachable() {
        // The 2-2 indicator corner on n=4 must appear within a modest
        // sample budget; this is what makes the published am-additivity
        // witness findable.
        let target_x = [1.0, 1.0, 0.0, 0.0];
        let mut hits = 0;
        for i in 0..10_000 {
            let mut rng = SampleRng::new(0xA17140, i);
            let (x, y) = enriched_antimonotonic_pair(&mut rng, 4, 0.0, 1.0);
            if x.values() == target_x && y.values() == [0.0, 0.0, 1.0, 1.0] {
                hits += 1;
            }
        }
        assert!(hits > 0, "exact corner pair never sampled in 10^4 draws");
    }

    #[test]
    fn alpha_and_scale_ranges() {
        for i in 0..1000 {
            let mut rng = SampleRng::new(3, i);
            let a = enriched_alpha01(&mut rng);
            assert!((0.0..=1.0).contains(&a));
            let s = enriched_scale(&mut rng, true);
            assert!(s > 0.0 && s <= 2.0);
            let f = enriched_scale(&mut rng, false);
            assert!(f.abs() > 0.0 && f.abs() <= 2.0);
        }
    }
}
