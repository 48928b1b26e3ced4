//! Antimonotonicity machinery on finite state spaces.
//!
//! This crate implements, at desk scale, the algebra of comonotone and
//! antimonotone acts, capacities and distortion functions, the preference
//! functionals they induce (expectation, expected utility, Choquet,
//! distortion), axiom verifiers with seeded counterexample search, and the
//! Anscombe–Aumann lottery instantiation with matching-probability
//! representation recovery.
//!
//! Everything is pure and deterministic: randomized searches derive each
//! sample from `(seed, sample_index)`, so reports are reproducible
//! bit-for-bit and independent of any internal parallelism.
//!
//! Module map:
//!
//! * [`acts`] — state spaces, acts, events, probability measures, the
//!   comonotone/antimonotone predicates, and the monotone decomposition.
//! * [`capacities`] — weighting functions on `2^Ω`, distortion functions,
//!   convexity/pseudo-convexity predicates, and the built-in Example 1
//!   distortion.
//! * [`functionals`] — evaluation of preference functionals, certainty
//!   equivalents, diversification benefit.
//! * [`axioms`] — additivity/affinity/convexity/monotonicity verifiers,
//!   measure extraction, representation certification, the Savage-style
//!   equivalence harness and standard sequences.
//! * [`lotteries`] — finite-support lotteries, statewise mixtures,
//!   matching probabilities, am-independence, representation recovery.
//! * [`report`] — the shared `PropertyReport`/`Witness` outcome types.
//! * [`io`] — JSON/CSV ingestion and emission helpers shared with the CLI.

pub mod acts;
pub mod axioms;
pub mod capacities;
pub mod error;
pub mod functionals;
pub mod io;
pub mod lotteries;
pub mod report;
pub mod rng;

pub use acts::{
    is_antimonotonic, is_comonotonic, law_equal, monotone_decompose, sample_act,
    sample_antimonotonic_pair, Act, Event, MonotoneDecomposition, ProbabilityMeasure, StateSpace,
};
pub use axioms::{
    check_additivity, check_affinity, check_ce_am_additivity, check_homogeneity, check_law_based,
    check_monotonicity, check_normalization, check_preference_convexity,
    check_uncertainty_reduction, check_utility_concavity, extract_measure,
    savage_equivalence_harness, standard_sequence, verify_expectation_representation,
    ExtractedMeasure, RelationMode, SavageReport, SearchBudget,
};
pub use capacities::{
    capacity_from_distortion, distortion_pseudoconvexity, example1_distortion, is_convex_capacity,
    is_pseudo_convex, Capacity, DistortionFunction,
};
pub use error::{Error, Result};
pub use functionals::{
    certainty_equivalent, diversification_benefit, evaluate, FunctionalSpec, PreferenceOracle,
    UtilityFunction,
};
pub use lotteries::{
    check_am_independence, lottery_antimonotonic, matching_probability, recover_representation,
    AAModel, Lottery, LotteryAct, LotteryOracle, RankDependentOracle, RecoveredRepresentation,
};
pub use report::{PropertyReport, Verdict, Witness, WitnessInput};
pub use rng::{SampleRng, DEFAULT_SEED};
