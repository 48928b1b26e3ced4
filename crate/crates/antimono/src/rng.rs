//! Seeded, sample-indexed randomness.
//!
//! Every randomized search in this crate derives the generator for sample
//! `i` from the pair `(seed, i)`, never from a shared mutable stream.  Two
//! consequences, both load-bearing for the reproducibility contract:
//!
//! * a report that names `(seed, sample_index)` can be replayed exactly,
//!   without regenerating the preceding samples;
//! * partitioning the sample range across threads cannot change what any
//!   individual sample contains.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed used by the CLI and by `SearchBudget::default`.
pub const DEFAULT_SEED: u64 = 0xA17140;

/// Number of fractional bits in values drawn by [`SampleRng::unit`].
///
/// Draws are dyadic rationals `k / 2^42`.  42 bits leaves 11 bits of
/// headroom below an f64's 53-bit significand, so sums and differences of
/// up to ~2^11 sampled values (after scaling by power-of-two-width ranges)
/// remain exactly representable.  The monotone-decomposition exactness
/// guarantee relies on this.
pub const UNIT_BITS: u32 = 42;

/// A deterministic generator bound to one `(seed, sample_index)` pair.
pub struct SampleRng(ChaCha8Rng);

impl SampleRng {
    /// Generator for sample `index` of the run identified by `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        SampleRng(rng)
    }

    /// Raw 64 random bits.
    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Dyadic rational in `[0, 1)` with [`UNIT_BITS`] fractional bits.
    pub fn unit(&mut self) -> f64 {
        let k = self.0.next_u64() >> (64 - UNIT_BITS);
        k as f64 / (1u64 << UNIT_BITS) as f64
    }

    /// Dyadic-lattice point in `[lo, hi)`.
    ///
    /// The lattice is `lo + k * (hi - lo) / 2^42`; when `hi - lo` is a
    /// power of two and `lo` is itself a lattice point (the default act
    /// range `[0,1]` and the symmetric `[-1,1]` both qualify) every drawn
    /// value, and every sum of a few of them, is exact in f64.
    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.unit() * (hi - lo)
    }

    /// Uniform integer in `[0, bound)` by Lemire's rejection-free-ish
    /// widening multiply (bias < 2^-64, irrelevant at our sample counts).
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.0.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Bernoulli draw with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Access the underlying rand-compatible generator (for shuffles).
    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}
