//! Acceptance suite: eight end-to-end criteria, each printing one
//! pass/fail line (run with `--nocapture` to see them).  Tolerances and
//! budgets are pinned in the assertions; the fixed seed makes every run
//! reproducible.

use std::time::Instant;

use antimono::{
    capacities::{capacity_from_distortion, example1_distortion, is_convex_capacity, is_pseudo_convex},
    check_additivity, check_am_independence, check_preference_convexity, evaluate,
    extract_measure, is_antimonotonic, monotone_decompose, recover_representation,
    savage_equivalence_harness, verify_expectation_representation, AAModel, Act, Capacity,
    FunctionalSpec, Lottery, ProbabilityMeasure, RankDependentOracle, RelationMode, SampleRng,
    SearchBudget, UtilityFunction, DEFAULT_SEED,
};

fn conclude(criterion: usize, title: &str, started: Instant, outcome: Result<String, String>) {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => println!("acceptance {criterion} ({title}): pass — {detail} [{secs:.1}s]"),
        Err(detail) => {
            println!("acceptance {criterion} ({title}): FAIL — {detail} [{secs:.1}s]");
            panic!("acceptance criterion {criterion} failed: {detail}");
        }
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ------------------------------------------------------------------
// 1. Example 1 reproduction: pseudo-convex exhaustively, convexity
//    fails with deficit exactly (0.25+0.25) - (0.3+0.1) = 0.1.
// ------------------------------------------------------------------
#[test]
fn criterion_1_example1_reproduction() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let g = example1_distortion();
        let p = ProbabilityMeasure::uniform(10).map_err(|e| e.to_string())?;
        let w = capacity_from_distortion(&g, &p).map_err(|e| e.to_string())?;

        let pseudo = is_pseudo_convex(&w).map_err(|e| e.to_string())?;
        require(pseudo.passed(), "pseudo-convexity must pass")?;
        require(pseudo.exhaustive, "pseudo-convexity must be exhaustive")?;
        require(
            pseudo.samples_checked == 59_049,
            format!("expected 3^10 disjoint pairs, got {}", pseudo.samples_checked),
        )?;

        let convex = is_convex_capacity(&w).map_err(|e| e.to_string())?;
        require(!convex.passed(), "convexity must fail on Example 1")?;
        let witness = convex.witness.as_ref().ok_or("missing convexity witness")?;
        let deficit = witness.magnitude;
        require(
            (deficit - 0.1).abs() <= 1e-12,
            format!("deficit {deficit} differs from 0.1 by more than 1e-12"),
        )?;
        require(started.elapsed().as_secs_f64() < 10.0, "runtime bound 10 s exceeded")?;
        Ok(format!(
            "pseudo-convex over {} pairs, convexity deficit {deficit:.12}",
            pseudo.samples_checked
        ))
    };
    conclude(1, "Example 1 reproduction", started, run());
}

// ------------------------------------------------------------------
// 2. Additivity falsification consistency: the Example 1 functional
//    fails antimonotonic additivity with magnitude >= 1 - 1/7 - 1e-9
//    within 10^4 samples; expectation functionals survive 10^6 pair
//    samples in all three modes.
// ------------------------------------------------------------------
#[test]
fn criterion_2_theorem_1_falsification() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let spec = FunctionalSpec::example1_uniform(4).map_err(|e| e.to_string())?;
        let r = check_additivity(
            &spec,
            &SearchBudget::new(10_000, DEFAULT_SEED),
            RelationMode::Antimonotonic,
        )
        .map_err(|e| e.to_string())?;
        require(!r.passed(), "Example 1 must fail antimonotonic additivity")?;
        let magnitude = r.witness.as_ref().ok_or("missing witness")?.magnitude;
        let floor = 1.0 - 1.0 / 7.0 - 1e-9;
        require(
            magnitude >= floor,
            format!("witness magnitude {magnitude} below {floor}"),
        )?;

        let expectations = [
            FunctionalSpec::Expectation {
                p: ProbabilityMeasure::new(vec![0.2, 0.3, 0.5]).map_err(|e| e.to_string())?,
            },
            FunctionalSpec::Expectation {
                p: ProbabilityMeasure::uniform(4).map_err(|e| e.to_string())?,
            },
        ];
        let budget = SearchBudget::new(1_000_000, DEFAULT_SEED);
        for spec in &expectations {
            for mode in [
                RelationMode::General,
                RelationMode::Comonotonic,
                RelationMode::Antimonotonic,
            ] {
                let r = check_additivity(spec, &budget, mode).map_err(|e| e.to_string())?;
                require(
                    r.passed(),
                    format!("expectation violated additivity in {mode:?} mode"),
                )?;
                require(
                    r.samples_checked == 1_000_000,
                    format!("checked {} of 10^6 samples", r.samples_checked),
                )?;
            }
        }
        require(started.elapsed().as_secs_f64() < 30.0, "runtime bound 30 s exceeded")?;
        Ok(format!(
            "Example 1 witness magnitude {magnitude:.9} >= 6/7; 6x10^6 expectation pairs clean"
        ))
    };
    conclude(2, "additivity falsification consistency", started, run());
}

// ------------------------------------------------------------------
// 3. Measure extraction: hidden expectation functionals on n <= 10
//    recovered to 1e-12 and verified on 10^4 acts; Example 1 fails
//    the representation check at the am-additivity stage.
// ------------------------------------------------------------------
#[test]
fn criterion_3_extraction_and_representation() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let budget = SearchBudget::new(10_000, DEFAULT_SEED);
        let mut worst = 0.0_f64;
        for n in 3..=10usize {
            let mut rng = SampleRng::new(DEFAULT_SEED, 3_000 + n as u64);
            let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.unit()).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let p = ProbabilityMeasure::new(weights).map_err(|e| e.to_string())?;
            let hidden = FunctionalSpec::Expectation { p: p.clone() };

            let extracted = extract_measure(&hidden).map_err(|e| e.to_string())?;
            require(extracted.report.passed(), "extraction report must pass")?;
            let err = extracted
                .weights
                .iter()
                .zip(p.weights())
                .map(|(q, w)| (q - w).abs())
                .fold(0.0_f64, f64::max);
            require(
                err <= 1e-12,
                format!("n={n}: extraction error {err} above 1e-12"),
            )?;
            worst = worst.max(err);

            let verification =
                verify_expectation_representation(&hidden, &budget).map_err(|e| e.to_string())?;
            require(
                verification.passed(),
                format!("n={n}: representation verification failed"),
            )?;
        }

        let example1 = FunctionalSpec::example1_uniform(4).map_err(|e| e.to_string())?;
        let failed = verify_expectation_representation(&example1, &budget)
            .map_err(|e| e.to_string())?;
        require(!failed.passed(), "Example 1 must fail representation")?;
        require(
            failed.notes.iter().any(|n| n == "stage am_additivity: violated"),
            format!("am-additivity stage not flagged; notes: {:?}", failed.notes),
        )?;
        require(
            failed
                .notes
                .iter()
                .any(|n| n == "stage normalization: pass"),
            "normalization stage should pass for Example 1",
        )?;
        require(
            failed.notes.iter().any(|n| n == "stage monotonicity: pass"),
            "monotonicity stage should pass for Example 1",
        )?;
        require(started.elapsed().as_secs_f64() < 10.0, "runtime bound 10 s exceeded")?;
        Ok(format!(
            "8 hidden measures recovered (worst error {worst:.2e}); Example 1 fails at am-additivity"
        ))
    };
    conclude(3, "measure extraction", started, run());
}

// ------------------------------------------------------------------
// 4. Equivalence harness: 20 random concave piecewise-linear utilities
//    give (pass, pass, pass); 20 utilities with a slope increase
//    >= 0.1 always yield an am-convexity witness.
// ------------------------------------------------------------------

/// Random piecewise-linear utility on [-0.5, 1.5] with 2..=8 segments.
/// Concave when `kink` is None; otherwise segment `kink % segments`
/// (forced >= 1) raises the slope by at least 0.1.
fn random_pl_utility(rng: &mut SampleRng, kink: Option<u64>) -> UtilityFunction {
    let segments = 2 + rng.below(7) as usize;
    let raw: Vec<f64> = (0..segments).map(|_| 0.2 + rng.unit()).collect();
    let total: f64 = raw.iter().sum();
    let kink_at = kink.map(|k| 1 + (k as usize) % (segments - 1).max(1));
    let mut slope = 1.0 + rng.unit();
    let mut x = -0.5;
    let mut y = 0.0;
    let mut bps = vec![(x, y)];
    for (j, w) in raw.iter().enumerate() {
        if Some(j) == kink_at {
            slope += 0.1 + 0.4 * rng.unit();
        } else if j > 0 {
            slope *= 0.45 + 0.5 * rng.unit();
        }
        let width = 2.0 * w / total;
        x += width;
        y += slope * width;
        bps.push((x, y));
    }
    // Cover [-0.5, 1.5] exactly despite accumulated rounding.
    bps.last_mut().unwrap().0 = 1.5;
    UtilityFunction::new(bps, true).unwrap()
}

fn random_measure(rng: &mut SampleRng, n: usize) -> ProbabilityMeasure {
    let raw: Vec<f64> = (0..n).map(|_| 0.15 + rng.unit()).collect();
    let total: f64 = raw.iter().sum();
    ProbabilityMeasure::new(raw.iter().map(|w| w / total).collect()).unwrap()
}

#[test]
fn criterion_4_savage_harness() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let budget = SearchBudget::new(10_000, DEFAULT_SEED);
        for i in 0..20u64 {
            let mut rng = SampleRng::new(DEFAULT_SEED, 4_000 + i);
            let n = 2 + rng.below(4) as usize;
            let p = random_measure(&mut rng, n);
            let u = random_pl_utility(&mut rng, None);
            let report = savage_equivalence_harness(&p, &u, &budget).map_err(|e| e.to_string())?;
            require(
                report.general_convexity.passed()
                    && report.am_convexity.passed()
                    && report.utility_concavity.passed(),
                format!("concave case {i}: expected (pass, pass, pass)"),
            )?;
            require(
                report.consistent_with_theorem,
                format!("concave case {i}: harness flagged an inconsistency"),
            )?;
        }

        let mut escalations = 0usize;
        for i in 0..20u64 {
            let mut rng = SampleRng::new(DEFAULT_SEED, 4_100 + i);
            let n = 2 + rng.below(4) as usize;
            let p = random_measure(&mut rng, n);
            let u = random_pl_utility(&mut rng, Some(i));
            let report = savage_equivalence_harness(&p, &u, &budget).map_err(|e| e.to_string())?;
            require(
                !report.utility_concavity.passed(),
                format!("kinked case {i}: concavity check missed the slope increase"),
            )?;
            require(
                !report.am_convexity.passed(),
                format!("kinked case {i}: no am-convexity witness found"),
            )?;
            require(
                report.consistent_with_theorem,
                format!("kinked case {i}: harness flagged an inconsistency"),
            )?;
            if report.escalated {
                escalations += 1;
            }
        }
        require(started.elapsed().as_secs_f64() < 300.0, "runtime bound 5 min exceeded")?;
        Ok(format!(
            "20 concave utilities (pass, pass, pass); 20 kinked utilities all witnessed \
             ({escalations} via guided escalation)"
        ))
    };
    conclude(4, "equivalence harness", started, run());
}

// ------------------------------------------------------------------
// 5. Example 1 convexity split on n = 10: violated in general mode
//    within 10^5 samples, pass-within-budget over 10^6 antimonotonic
//    samples.
// ------------------------------------------------------------------
#[test]
fn criterion_5_convexity_split() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let spec = FunctionalSpec::example1_uniform(10).map_err(|e| e.to_string())?;
        let general = check_preference_convexity(
            &spec,
            &SearchBudget::new(100_000, DEFAULT_SEED),
            RelationMode::General,
        )
        .map_err(|e| e.to_string())?;
        require(!general.passed(), "general-mode convexity must be violated")?;
        let witness = general.witness.as_ref().ok_or("missing witness")?;
        let sample = witness.sample_index.ok_or("witness should be sampled")?;
        require(sample < 100_000, "witness beyond the 10^5 budget")?;

        let am = check_preference_convexity(
            &spec,
            &SearchBudget::new(1_000_000, DEFAULT_SEED),
            RelationMode::Antimonotonic,
        )
        .map_err(|e| e.to_string())?;
        require(am.passed(), "antimonotonic-mode convexity must pass")?;
        require((am.tolerance - 1e-9).abs() < f64::EPSILON, "tolerance must be 1e-9")?;
        require(started.elapsed().as_secs_f64() < 120.0, "runtime bound 2 min exceeded")?;
        Ok(format!(
            "general violated (magnitude {:.3e} at sample {sample}), antimonotonic clean over 10^6",
            witness.magnitude
        ))
    };
    conclude(5, "Example 1 convexity split", started, run());
}

// ------------------------------------------------------------------
// 6. Choquet oracle equivalence: the telescoped evaluation matches a
//    mesh-10^6 Riemann sum of W(U(X) >= x) within 1e-5, and matches
//    the expectation exactly for additive W.
// ------------------------------------------------------------------

/// Random monotone capacity: each event gets the max over its one-
/// element-smaller subsets plus damped random slack, normalized so the
/// full event carries exactly 1.
fn random_capacity(rng: &mut SampleRng, n: usize) -> Capacity {
    let size = 1usize << n;
    let full = size - 1;
    let mut table = vec![0.0_f64; size];
    for mask in 1..full {
        let mut base = 0.0_f64;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                base = base.max(table[mask & !(1 << i)]);
            }
        }
        table[mask] = base + 0.5 * rng.unit() * (1.0 - base);
    }
    table[full] = 1.0;
    Capacity::new(n, table).unwrap()
}

/// Left Riemann sum of x -> W(Y >= x) over [0, max Y] with the given
/// mesh; for the monotone step integrand the error is <= max(Y)/mesh.
fn riemann_choquet(w: &Capacity, y: &[f64], mesh: u32) -> f64 {
    let top = y.iter().cloned().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let h = top / mesh as f64;
    let mut total = 0.0;
    for k in 0..mesh {
        let t = k as f64 * h;
        let mut mask = 0u64;
        for (i, v) in y.iter().enumerate() {
            if *v >= t {
                mask |= 1 << i;
            }
        }
        total += w.value(antimono::Event { mask });
    }
    total * h
}

#[test]
fn criterion_6_choquet_oracle_equivalence() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let mut worst = 0.0_f64;
        for i in 0..1_000u64 {
            let mut rng = SampleRng::new(DEFAULT_SEED, 6_000 + i);
            let n = 2 + rng.below(5) as usize;
            let w = random_capacity(&mut rng, n);
            let x = Act::new((0..n).map(|_| rng.unit()).collect()).map_err(|e| e.to_string())?;
            // Every other act goes through a concave utility first.
            let (spec, transformed) = if i % 2 == 0 {
                let u = random_pl_utility(&mut rng, None);
                let y: Vec<f64> = x
                    .values()
                    .iter()
                    .map(|v| u.eval(*v))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                (
                    FunctionalSpec::Choquet {
                        capacity: w.clone(),
                        utility: Some(u),
                    },
                    y,
                )
            } else {
                (
                    FunctionalSpec::Choquet {
                        capacity: w.clone(),
                        utility: None,
                    },
                    x.values().to_vec(),
                )
            };
            if transformed.iter().any(|v| *v < 0.0) {
                return Err(format!("act {i} not nonnegative after transform"));
            }
            let fast = evaluate(&spec, &x).map_err(|e| e.to_string())?;
            let oracle = riemann_choquet(&w, &transformed, 1_000_000);
            let diff = (fast - oracle).abs();
            require(
                diff <= 1e-5,
                format!("act {i}: |telescope - Riemann| = {diff} above 1e-5"),
            )?;
            worst = worst.max(diff);
        }

        // Additive capacities collapse to plain expectations.
        let mut worst_additive = 0.0_f64;
        for i in 0..100_000u64 {
            let mut rng = SampleRng::new(DEFAULT_SEED, 6_700 + i);
            let n = 2 + rng.below(5) as usize;
            let p = random_measure(&mut rng, n);
            let w = Capacity::additive(&p).map_err(|e| e.to_string())?;
            let x =
                Act::new((0..n).map(|_| rng.in_range(-1.0, 1.0)).collect()).map_err(|e| e.to_string())?;
            let choquet = evaluate(
                &FunctionalSpec::Choquet {
                    capacity: w,
                    utility: None,
                },
                &x,
            )
            .map_err(|e| e.to_string())?;
            let expectation = evaluate(&FunctionalSpec::Expectation { p }, &x).map_err(|e| e.to_string())?;
            let diff = (choquet - expectation).abs();
            require(
                diff <= 1e-12,
                format!("act {i}: additive Choquet off expectation by {diff}"),
            )?;
            worst_additive = worst_additive.max(diff);
        }
        require(started.elapsed().as_secs_f64() < 60.0, "runtime bound 1 min exceeded")?;
        Ok(format!(
            "10^3 Riemann comparisons (worst {worst:.2e}); 10^5 additive acts (worst {worst_additive:.2e})"
        ))
    };
    conclude(6, "Choquet oracle equivalence", started, run());
}

// ------------------------------------------------------------------
// 7. Representation recovery: hidden AA models reconstructed to 1e-8 and
//    reproduced on 10^4 lottery acts; am-independence passes on 10^5
//    samples per model and fails for the rank-dependent control.
// ------------------------------------------------------------------
#[test]
fn criterion_7_aa_recovery() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let recover_budget = SearchBudget::new(10_000, DEFAULT_SEED);
        let independence_budget = SearchBudget::new(100_000, DEFAULT_SEED);
        let mut worst = 0.0_f64;
        for i in 0..5u64 {
            let mut rng = SampleRng::new(DEFAULT_SEED, 7_000 + i);
            let n = 2 + rng.below(5) as usize; // states <= 6
            let k = 2 + rng.below(4) as usize; // prizes <= 5
            let p = random_measure(&mut rng, n);
            // Prize utilities: endpoints pinned, interior anywhere in
            // [-0.5, 1.5] so recovery exercises out-of-band re-anchoring.
            let mut u = vec![0.0; k];
            u[k - 1] = 1.0;
            for v in u.iter_mut().take(k - 1).skip(1) {
                *v = rng.in_range(-0.5, 1.5);
            }
            let model = AAModel::new(p.clone(), u.clone()).map_err(|e| e.to_string())?;

            let m = Lottery::degenerate(k, 0).map_err(|e| e.to_string())?;
            let big_m = Lottery::degenerate(k, k - 1).map_err(|e| e.to_string())?;
            let recovered =
                recover_representation(&model, &m, &big_m, &recover_budget).map_err(|e| e.to_string())?;
            require(
                recovered.report.passed(),
                format!("model {i}: recovery report violated: {:?}", recovered.report.notes),
            )?;
            let err = recovered
                .p_hat
                .iter()
                .zip(p.weights())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            require(
                err <= 1e-8,
                format!("model {i}: measure error {err} above 1e-8"),
            )?;
            worst = worst.max(err);

            let independence =
                check_am_independence(&model, &independence_budget).map_err(|e| e.to_string())?;
            require(
                independence.passed(),
                format!("model {i}: am-independence flagged an EU model"),
            )?;
        }

        let control = RankDependentOracle::new(
            Capacity::new(2, vec![0.0, 0.1, 0.1, 1.0]).map_err(|e| e.to_string())?,
            vec![0.0, 1.0],
        )
        .map_err(|e| e.to_string())?;
        let refuted = check_am_independence(&control, &SearchBudget::new(10_000, DEFAULT_SEED))
            .map_err(|e| e.to_string())?;
        require(!refuted.passed(), "control oracle must fail am-independence")?;
        let magnitude = refuted.witness.as_ref().ok_or("missing control witness")?.magnitude;
        require(started.elapsed().as_secs_f64() < 60.0, "runtime bound 1 min exceeded")?;
        Ok(format!(
            "5 hidden models recovered (worst measure error {worst:.2e}); control violated \
             with magnitude {magnitude:.3}"
        ))
    };
    conclude(7, "representation recovery", started, run());
}

// ------------------------------------------------------------------
// 8. Decomposition invariant: 10^5 random acts on up to 64 states
//    split exactly (bitwise) into monotone parts, and X is always
//    antimonotonic with -X.
// ------------------------------------------------------------------
#[test]
fn criterion_8_decomposition_invariant() {
    let started = Instant::now();
    let run = || -> Result<String, String> {
        for i in 0..100_000u64 {
            let mut rng = SampleRng::new(DEFAULT_SEED, 8_000_000 + i);
            let n = 1 + rng.below(64) as usize;
            // Dyadic values: cumulative sums stay exact in f64, so the
            // reconstruction check below can demand bit equality.
            let x = Act::new((0..n).map(|_| rng.unit()).collect()).map_err(|e| e.to_string())?;
            let d = monotone_decompose(&x);
            for (s, (up, down)) in d.up.values().iter().zip(d.down.values()).enumerate() {
                let rebuilt = up + down;
                if rebuilt.to_bits() != x.values()[s].to_bits() {
                    return Err(format!("act {i}: state {s} rebuilt {rebuilt} != {}", x.values()[s]));
                }
            }
            for s in 1..n {
                if d.up.values()[s] < d.up.values()[s - 1] {
                    return Err(format!("act {i}: increasing part decreases at state {s}"));
                }
                if d.down.values()[s] > d.down.values()[s - 1] {
                    return Err(format!("act {i}: decreasing part increases at state {s}"));
                }
            }
            let am = is_antimonotonic(&x, &x.negate()).map_err(|e| e.to_string())?;
            if !am {
                return Err(format!("act {i}: X not antimonotonic with -X"));
            }
        }
        require(started.elapsed().as_secs_f64() < 5.0, "runtime bound 5 s exceeded")?;
        Ok("10^5 acts decomposed bitwise-exactly with monotone parts".to_string())
    };
    conclude(8, "decomposition invariant", started, run());
}
