//! antimono — command-line front end for the antimono library.
//!
//! Exit codes: 0 = pass, 1 = usage or I/O error, 2 = violation found.
//! JSON is the canonical report format (`--format json`, the default);
//! the human and CSV formats are derived from the same data, never the
//! reverse.  Identical configuration (including the seed) produces
//! byte-identical reports; `--threads` changes wall time only, never the
//! reported witness.
//!
//! The seed defaults to `0xA17140`, can be set globally through the
//! `ANTIMONO_SEED` environment variable, and is overridden by `--seed`.
//! The effective configuration is echoed in every output: inside the JSON
//! envelope, or on stderr for the human/CSV formats.

use std::path::PathBuf;
use std::process::ExitCode;

use antimono::{
    capacities::{capacity_from_distortion, example1_distortion, is_convex_capacity, is_pseudo_convex},
    certainty_equivalent, check_additivity, check_affinity, check_am_independence,
    check_ce_am_additivity, check_homogeneity, check_law_based, check_monotonicity,
    check_normalization, check_preference_convexity, check_uncertainty_reduction,
    check_utility_concavity, evaluate, extract_measure, io, lotteries::RankDependentOracle,
    monotone_decompose, recover_representation, savage_equivalence_harness, standard_sequence,
    verify_expectation_representation, AAModel, Error, Event, FunctionalSpec, Lottery,
    MonotoneDecomposition, ProbabilityMeasure, PropertyReport, RelationMode, SavageReport,
    SearchBudget, UtilityFunction, Witness, WitnessInput, DEFAULT_SEED,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version render on stdout with success; usage errors are
            // our exit-1 class, not clap's default 2 (2 means "violation"
            // here).
            let is_help = e.exit_code() == 0;
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[derive(Parser)]
#[command(
    name = "antimono",
    version,
    about = "Antimonotone act algebra, capacities, Choquet/distortion functionals, \
             axiom verifiers with counterexample search"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format (json is canonical; human/csv are derived from it)
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// RNG seed (decimal or 0x-hex); overrides ANTIMONO_SEED, default 0xA17140
    #[arg(long, global = true, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Sample budget for randomized searches
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Exhaustive grid resolution (replaces sampling where supported)
    #[arg(long, global = true)]
    grid: Option<u32>,
    /// Act value range for sampled searches
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    range: Option<Vec<f64>>,
    /// Worker threads for searches (witnesses are thread-count-invariant)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exit-code tolerance: violations with witness magnitude <= TOL still
    /// exit 0 (reports are unchanged)
    #[arg(long, global = true, default_value_t = 0.0)]
    tol: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Human,
    Csv,
}

impl FormatArg {
    fn as_str(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Human => "human",
            FormatArg::Csv => "csv",
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum AxiomArg {
    Normalization,
    Additivity,
    Affinity,
    Homogeneity,
    Monotonicity,
    Convexity,
    UncertaintyReduction,
    UtilityConcavity,
    CeAmAdditivity,
    LawBased,
    Representation,
}

impl AxiomArg {
    fn as_str(self) -> &'static str {
        match self {
            AxiomArg::Normalization => "normalization",
            AxiomArg::Additivity => "additivity",
            AxiomArg::Affinity => "affinity",
            AxiomArg::Homogeneity => "homogeneity",
            AxiomArg::Monotonicity => "monotonicity",
            AxiomArg::Convexity => "convexity",
            AxiomArg::UncertaintyReduction => "uncertainty-reduction",
            AxiomArg::UtilityConcavity => "utility-concavity",
            AxiomArg::CeAmAdditivity => "ce-am-additivity",
            AxiomArg::LawBased => "law-based",
            AxiomArg::Representation => "representation",
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    General,
    Comonotonic,
    Antimonotonic,
}

impl From<ModeArg> for RelationMode {
    fn from(m: ModeArg) -> RelationMode {
        match m {
            ModeArg::General => RelationMode::General,
            ModeArg::Comonotonic => RelationMode::Comonotonic,
            ModeArg::Antimonotonic => RelationMode::Antimonotonic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one axiom check against a functional spec
    Check {
        /// Functional spec JSON file (tagged by "kind")
        #[arg(long)]
        spec: PathBuf,
        /// Axiom to check
        #[arg(long, value_enum)]
        axiom: AxiomArg,
        /// Relation class for pairwise axioms (ignored by the others)
        #[arg(long, value_enum, default_value_t = ModeArg::General)]
        mode: ModeArg,
        /// Homogeneity only: restrict scale factors to positive values
        #[arg(long)]
        positive_only: bool,
    },
    /// Evaluate a functional on acts: one value per act
    Eval {
        /// Functional spec JSON file
        #[arg(long)]
        spec: PathBuf,
        /// Acts CSV file: one act per row, columns = states
        #[arg(long)]
        acts: PathBuf,
        /// Also compute certainty equivalents
        #[arg(long)]
        ce: bool,
    },
    /// Split acts into nondecreasing + nonincreasing parts (X = X↑ + X↓)
    Decompose {
        /// Acts CSV file: one act per row, columns = states
        #[arg(long)]
        acts: PathBuf,
        /// Also write the parts as CSV rows (act index, part, values...)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract implied state weights Q_i = I(1_{omega_i}) and verify them
    ExtractMeasure {
        /// Functional spec JSON file
        #[arg(long)]
        spec: PathBuf,
    },
    /// One-command Example 1 reproduction: distortion curve data,
    /// pseudo-convexity (pass) vs convexity (fail), am-convexity sweep,
    /// am-additivity witness
    Example1 {
        /// State count of the uniform space (pair-loop checks need <= 12)
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Write the g-curve CSV sampled at N+1 equally spaced points
        #[arg(long, value_name = "N")]
        emit_curve: Option<u32>,
        /// Path of the curve CSV
        #[arg(long, default_value = "example1_g_curve.csv")]
        out: PathBuf,
    },
    /// Savage-style harness: preference convexity == am-convexity ==
    /// concave utility, for expected utility
    Savage {
        /// Probability weights of the state space
        #[arg(long, num_args = 2.., value_name = "WEIGHT")]
        p: Vec<f64>,
        /// Utility JSON file (piecewise-linear breakpoints)
        #[arg(long)]
        utility: PathBuf,
    },
    /// Standard sequence of outcomes equally spaced in utility
    StandardSeq {
        /// P(A) of the stake event (0 < p < 1)
        #[arg(long)]
        p: f64,
        /// Worst outcome m
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        /// Best outcome M
        #[arg(long = "M", allow_negative_numbers = true)]
        big_m: f64,
        /// Utility JSON file (strictly increasing)
        #[arg(long)]
        utility: PathBuf,
    },
    /// Anscombe-Aumann commands: representation recovery, am-independence
    #[command(subcommand)]
    Aa(AaCommand),
}

#[derive(Subcommand)]
enum AaCommand {
    /// Recover (P, u) from a model treated as a black-box oracle
    Recover {
        /// AAModel JSON file: {"p": [weights], "u": [prize utilities]}
        #[arg(long)]
        model: PathBuf,
        /// Band lottery JSON files, worst then best: m.json M.json
        #[arg(long, num_args = 2, value_names = ["m.json", "M.json"])]
        band: Vec<PathBuf>,
    },
    /// Check antimonotone independence of a model or a control oracle
    Check {
        /// AAModel JSON file
        #[arg(long, conflicts_with = "control")]
        model: Option<PathBuf>,
        /// Rank-dependent control oracle JSON: {"capacity": ..., "u": ...}
        #[arg(long)]
        control: Option<PathBuf>,
    },
}

fn parse_seed(raw: &str) -> Result<u64, String> {
    let s = raw.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|_| format!("expected a decimal or 0x-prefixed hex integer, got {raw:?}"))
}

fn resolve_seed(cli_seed: Option<u64>) -> Result<u64, Error> {
    if let Some(s) = cli_seed {
        return Ok(s);
    }
    match std::env::var("ANTIMONO_SEED") {
        Ok(raw) => parse_seed(&raw)
            .map_err(|e| Error::Precondition(format!("invalid ANTIMONO_SEED: {e}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// The effective configuration, echoed in every output.
#[derive(Serialize)]
struct ConfigEcho {
    subcommand: String,
    format: &'static str,
    seed: u64,
    samples: u64,
    grid: Option<u32>,
    value_range: (f64, f64),
    threads: usize,
    tol: f64,
    inputs: Vec<String>,
}

impl ConfigEcho {
    fn line(&self) -> String {
        let grid = match self.grid {
            Some(g) => g.to_string(),
            None => "none".to_string(),
        };
        format!(
            "# config: subcommand={} format={} seed={:#x} samples={} grid={} range=[{}, {}] threads={} tol={} inputs=[{}]",
            self.subcommand,
            self.format,
            self.seed,
            self.samples,
            grid,
            self.value_range.0,
            self.value_range.1,
            self.threads,
            self.tol,
            self.inputs.join(", ")
        )
    }
}

struct Ctx {
    format: FormatArg,
    config: ConfigEcho,
    budget: SearchBudget,
    tol: f64,
}

impl Ctx {
    fn new(common: &Common, subcommand: &str, inputs: Vec<String>) -> Result<Ctx, Error> {
        let seed = resolve_seed(common.seed)?;
        let mut budget = SearchBudget::default();
        budget.seed = seed;
        if let Some(s) = common.samples {
            budget.samples = s;
        }
        budget.grid = common.grid;
        if let Some(r) = &common.range {
            budget.value_range = (r[0], r[1]);
        }
        if let Some(t) = common.threads {
            budget.threads = t;
        }
        budget.validate()?;
        let config = ConfigEcho {
            subcommand: subcommand.to_string(),
            format: common.format.as_str(),
            seed,
            samples: budget.samples,
            grid: budget.grid,
            value_range: budget.value_range,
            threads: budget.threads,
            tol: common.tol,
            inputs,
        };
        Ok(Ctx {
            format: common.format,
            config,
            budget,
            tol: common.tol,
        })
    }

    /// Print the output in the selected format.  JSON embeds the config
    /// echo in the envelope; human/csv echo it on stderr and keep stdout
    /// as clean payload.
    fn emit<T: Serialize>(&self, result: &T, human: Vec<String>, csv: String) -> Result<(), Error> {
        match self.format {
            FormatArg::Json => {
                #[derive(Serialize)]
                struct Envelope<'a, T> {
                    config: &'a ConfigEcho,
                    result: &'a T,
                }
                let envelope = Envelope {
                    config: &self.config,
                    result,
                };
                println!("{}", serde_json::to_string_pretty(&envelope)?);
            }
            FormatArg::Human => {
                eprintln!("{}", self.config.line());
                for line in human {
                    println!("{line}");
                }
            }
            FormatArg::Csv => {
                eprintln!("{}", self.config.line());
                print!("{csv}");
            }
        }
        Ok(())
    }

    /// Exit code from report verdicts, honoring any --tol override.
    fn verdict_code(&self, reports: &[&PropertyReport]) -> u8 {
        let worst = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.witness.as_ref().map_or(f64::INFINITY, |w| w.magnitude))
            .fold(0.0_f64, f64::max);
        if worst > self.tol {
            2
        } else {
            0
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_vec(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
    format!("({})", cells.join(", "))
}

fn witness_lines(w: &Witness) -> Vec<String> {
    let mut lines = vec![match w.sample_index {
        Some(i) => format!("  witness (sample {i}):"),
        None => "  witness:".to_string(),
    }];
    for input in &w.inputs {
        match input {
            WitnessInput::Act { name, values } => {
                lines.push(format!("    {name} = {}", fmt_vec(values)))
            }
            WitnessInput::Event { name, members } => {
                lines.push(format!("    {name} = {members:?}"))
            }
            WitnessInput::Scalar { name, value } => {
                lines.push(format!("    {name} = {}", fmt_f64(*value)))
            }
        }
    }
    lines.push(format!(
        "    lhs = {}, rhs = {}, magnitude = {}",
        fmt_f64(w.lhs),
        fmt_f64(w.rhs),
        fmt_f64(w.magnitude)
    ));
    lines
}

fn report_human(r: &PropertyReport) -> Vec<String> {
    let mut lines = vec![r.human_line()];
    if let Some(w) = &r.witness {
        lines.extend(witness_lines(w));
    }
    for note in &r.notes {
        lines.push(format!("  note: {note}"));
    }
    lines
}

const REPORT_CSV_HEADER: &str =
    "label,check,mode,verdict,samples_checked,exhaustive,tolerance,seed,witness_magnitude\n";

fn report_csv_row(label: &str, r: &PropertyReport) -> String {
    format!(
        "{label},{},{},{},{},{},{},{},{}\n",
        r.check,
        r.mode.as_deref().unwrap_or(""),
        if r.passed() { "pass" } else { "violated" },
        r.samples_checked,
        r.exhaustive,
        fmt_f64(r.tolerance),
        r.seed.map(|s| s.to_string()).unwrap_or_default(),
        r.witness
            .as_ref()
            .map(|w| fmt_f64(w.magnitude))
            .unwrap_or_default(),
    )
}

fn reports_csv(rows: &[(&str, &PropertyReport)]) -> String {
    let mut s = REPORT_CSV_HEADER.to_string();
    for (label, r) in rows {
        s.push_str(&report_csv_row(label, r));
    }
    s
}

fn path_str(p: &PathBuf) -> String {
    p.display().to_string()
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Check {
            ref spec,
            axiom,
            mode,
            positive_only,
        } => {
            let ctx = Ctx::new(&cli.common, "check", vec![path_str(spec)])?;
            let spec: FunctionalSpec = io::read_json(spec)?;
            let report = run_axiom(&spec, axiom, mode.into(), positive_only, &ctx.budget)?;
            #[derive(Serialize)]
            struct CheckResult {
                axiom: &'static str,
                report: PropertyReport,
            }
            let result = CheckResult {
                axiom: axiom.as_str(),
                report,
            };
            ctx.emit(
                &result,
                report_human(&result.report),
                reports_csv(&[(result.axiom, &result.report)]),
            )?;
            Ok(ctx.verdict_code(&[&result.report]))
        }

        Command::Eval {
            ref spec,
            ref acts,
            ce,
        } => {
            let ctx = Ctx::new(&cli.common, "eval", vec![path_str(spec), path_str(acts)])?;
            let spec: FunctionalSpec = io::read_json(spec)?;
            let acts = io::read_acts_csv(acts)?;
            let values: Vec<f64> = acts
                .iter()
                .map(|a| evaluate(&spec, a))
                .collect::<Result<_, _>>()?;
            let ces: Option<Vec<f64>> = if ce {
                Some(
                    acts.iter()
                        .map(|a| certainty_equivalent(&spec, a))
                        .collect::<Result<_, _>>()?,
                )
            } else {
                None
            };
            #[derive(Serialize)]
            struct EvalResult {
                values: Vec<f64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                certainty_equivalents: Option<Vec<f64>>,
            }
            let result = EvalResult {
                values,
                certainty_equivalents: ces,
            };
            let mut human = Vec::new();
            let mut csv = match &result.certainty_equivalents {
                Some(_) => "value,certainty_equivalent\n".to_string(),
                None => "value\n".to_string(),
            };
            for (i, v) in result.values.iter().enumerate() {
                match &result.certainty_equivalents {
                    Some(ces) => {
                        human.push(format!("{} (CE {})", fmt_f64(*v), fmt_f64(ces[i])));
                        csv.push_str(&format!("{},{}\n", fmt_f64(*v), fmt_f64(ces[i])));
                    }
                    None => {
                        human.push(fmt_f64(*v));
                        csv.push_str(&format!("{}\n", fmt_f64(*v)));
                    }
                }
            }
            ctx.emit(&result, human, csv)?;
            Ok(0)
        }

        Command::Decompose { ref acts, ref out } => {
            let mut inputs = vec![path_str(acts)];
            if let Some(o) = out {
                inputs.push(path_str(o));
            }
            let ctx = Ctx::new(&cli.common, "decompose", inputs)?;
            let acts = io::read_acts_csv(acts)?;
            let decompositions: Vec<MonotoneDecomposition> =
                acts.iter().map(monotone_decompose).collect();
            let mut human = Vec::new();
            let mut csv = String::new();
            for (i, d) in decompositions.iter().enumerate() {
                human.push(format!("act {i}: up = {}", fmt_vec(d.up.values())));
                human.push(format!("act {i}: down = {}", fmt_vec(d.down.values())));
                for (part, act) in [("up", &d.up), ("down", &d.down)] {
                    let cells: Vec<String> = act.values().iter().map(|v| fmt_f64(*v)).collect();
                    csv.push_str(&format!("{i},{part},{}\n", cells.join(",")));
                }
            }
            if let Some(out_path) = out {
                std::fs::write(out_path, &csv)?;
            }
            #[derive(Serialize)]
            struct DecomposeResult {
                decompositions: Vec<MonotoneDecomposition>,
            }
            ctx.emit(&DecomposeResult { decompositions }, human, csv)?;
            Ok(0)
        }

        Command::ExtractMeasure { ref spec } => {
            let ctx = Ctx::new(&cli.common, "extract-measure", vec![path_str(spec)])?;
            let spec: FunctionalSpec = io::read_json(spec)?;
            let extraction = extract_measure(&spec)?;
            let measure = extraction.clone().into_measure().ok();
            #[derive(Serialize)]
            struct ExtractResult {
                weights: Vec<f64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                measure: Option<ProbabilityMeasure>,
                report: PropertyReport,
            }
            let result = ExtractResult {
                weights: extraction.weights,
                measure,
                report: extraction.report,
            };
            let mut human = vec![format!("Q = {}", fmt_vec(&result.weights))];
            human.extend(report_human(&result.report));
            let mut csv = String::from("weights\n");
            let cells: Vec<String> = result.weights.iter().map(|v| fmt_f64(*v)).collect();
            csv.push_str(&format!("{}\n", cells.join(",")));
            ctx.emit(&result, human, csv)?;
            Ok(ctx.verdict_code(&[&result.report]))
        }

        Command::Example1 {
            n,
            emit_curve,
            ref out,
        } => {
            let mut inputs = Vec::new();
            if emit_curve.is_some() {
                inputs.push(path_str(out));
            }
            let ctx = Ctx::new(&cli.common, "example1", inputs)?;
            let g = example1_distortion();
            let p = ProbabilityMeasure::uniform(n)?;
            let w = capacity_from_distortion(&g, &p)?;
            let pseudo_convexity = is_pseudo_convex(&w)?;
            let convexity = is_convex_capacity(&w)?;
            let spec = FunctionalSpec::example1_uniform(n)?;
            let am_convexity =
                check_preference_convexity(&spec, &ctx.budget, RelationMode::Antimonotonic)?;
            let am_additivity =
                check_additivity(&spec, &ctx.budget, RelationMode::Antimonotonic)?;

            #[derive(Serialize)]
            struct CurveInfo {
                path: String,
                rows: u32,
            }
            let curve = match emit_curve {
                Some(mesh) => {
                    if mesh == 0 {
                        return Err(Error::Precondition(
                            "--emit-curve needs at least 1 mesh interval".into(),
                        ));
                    }
                    let points: Vec<(f64, f64)> = (0..=mesh)
                        .map(|i| {
                            let x = i as f64 / mesh as f64;
                            Ok((x, g.eval(x)?))
                        })
                        .collect::<Result<_, Error>>()?;
                    io::write_curve_csv(out, ("p", "g"), &points)?;
                    Some(CurveInfo {
                        path: path_str(out),
                        rows: mesh + 1,
                    })
                }
                None => None,
            };

            #[derive(Serialize)]
            struct Example1Result {
                #[serde(skip_serializing_if = "Option::is_none")]
                curve: Option<CurveInfo>,
                pseudo_convexity: PropertyReport,
                convexity: PropertyReport,
                am_convexity: PropertyReport,
                am_additivity: PropertyReport,
            }
            let result = Example1Result {
                curve,
                pseudo_convexity,
                convexity,
                am_convexity,
                am_additivity,
            };
            let mut human = Vec::new();
            if let Some(c) = &result.curve {
                human.push(format!("g-curve: wrote {} points to {}", c.rows, c.path));
            }
            for r in [
                &result.pseudo_convexity,
                &result.convexity,
                &result.am_convexity,
                &result.am_additivity,
            ] {
                human.extend(report_human(r));
            }
            let csv = reports_csv(&[
                ("pseudo_convexity", &result.pseudo_convexity),
                ("convexity", &result.convexity),
                ("am_convexity", &result.am_convexity),
                ("am_additivity", &result.am_additivity),
            ]);
            ctx.emit(&result, human, csv)?;
            // A reproduction command: mixed verdicts are the expected
            // outcome, so only errors change the exit code.
            Ok(0)
        }

        Command::Savage {
            ref p,
            ref utility,
        } => {
            let ctx = Ctx::new(&cli.common, "savage", vec![path_str(utility)])?;
            let p = ProbabilityMeasure::new(p.clone())?;
            let u: UtilityFunction = io::read_json(utility)?;
            let report: SavageReport = savage_equivalence_harness(&p, &u, &ctx.budget)?;
            let mut human = vec![format!(
                "three-way ({}, {}, {})",
                verdict_word(&report.general_convexity),
                verdict_word(&report.am_convexity),
                verdict_word(&report.utility_concavity),
            )];
            for r in [
                &report.general_convexity,
                &report.am_convexity,
                &report.utility_concavity,
            ] {
                human.extend(report_human(r));
            }
            human.push(format!(
                "consistent with theorem: {} (escalated: {})",
                report.consistent_with_theorem, report.escalated
            ));
            for note in &report.notes {
                human.push(format!("note: {note}"));
            }
            let csv = reports_csv(&[
                ("general_convexity", &report.general_convexity),
                ("am_convexity", &report.am_convexity),
                ("utility_concavity", &report.utility_concavity),
            ]);
            #[derive(Serialize)]
            struct SavageResult {
                report: SavageReport,
            }
            let code = ctx.verdict_code(&[
                &report.general_convexity,
                &report.am_convexity,
                &report.utility_concavity,
            ]);
            ctx.emit(&SavageResult { report }, human, csv)?;
            Ok(code)
        }

        Command::StandardSeq {
            p,
            m,
            big_m,
            ref utility,
        } => {
            let ctx = Ctx::new(&cli.common, "standard-seq", vec![path_str(utility)])?;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Precondition(format!(
                    "--p must satisfy 0 < p < 1, got {p}"
                )));
            }
            let measure = ProbabilityMeasure::new(vec![p, 1.0 - p])?;
            let u: UtilityFunction = io::read_json(utility)?;
            let sequence = standard_sequence(&measure, &u, Event::singleton(0), m, big_m)?;
            #[derive(Serialize)]
            struct SeqResult {
                sequence: Vec<f64>,
            }
            let human = vec![sequence
                .iter()
                .map(|v| fmt_f64(*v))
                .collect::<Vec<_>>()
                .join(", ")];
            let mut csv = String::from("outcome\n");
            for v in &sequence {
                csv.push_str(&format!("{}\n", fmt_f64(*v)));
            }
            ctx.emit(&SeqResult { sequence }, human, csv)?;
            Ok(0)
        }

        Command::Aa(AaCommand::Recover {
            ref model,
            ref band,
        }) => {
            let ctx = Ctx::new(
                &cli.common,
                "aa recover",
                vec![path_str(model), path_str(&band[0]), path_str(&band[1])],
            )?;
            let model: AAModel = io::read_json(model)?;
            let m: Lottery = io::read_json(&band[0])?;
            let big_m: Lottery = io::read_json(&band[1])?;
            let recovered = recover_representation(&model, &m, &big_m, &ctx.budget)?;
            let mut human = vec![
                format!("P_hat = {}", fmt_vec(&recovered.p_hat)),
                format!("u_hat = {}", fmt_vec(&recovered.u_hat)),
            ];
            human.extend(report_human(&recovered.report));
            let mut csv = String::from("vector,values\n");
            let p_cells: Vec<String> = recovered.p_hat.iter().map(|v| fmt_f64(*v)).collect();
            let u_cells: Vec<String> = recovered.u_hat.iter().map(|v| fmt_f64(*v)).collect();
            csv.push_str(&format!("p_hat,{}\n", p_cells.join(",")));
            csv.push_str(&format!("u_hat,{}\n", u_cells.join(",")));
            let code = ctx.verdict_code(&[&recovered.report]);
            ctx.emit(&recovered, human, csv)?;
            Ok(code)
        }

        Command::Aa(AaCommand::Check {
            ref model,
            ref control,
        }) => {
            let (input, is_control) = match (model, control) {
                (Some(path), None) => (path, false),
                (None, Some(path)) => (path, true),
                _ => {
                    return Err(Error::Precondition(
                        "provide exactly one of --model / --control".into(),
                    ))
                }
            };
            let ctx = Ctx::new(&cli.common, "aa check", vec![path_str(input)])?;
            let report = if is_control {
                let oracle: RankDependentOracle = io::read_json(input)?;
                check_am_independence(&oracle, &ctx.budget)?
            } else {
                let aa: AAModel = io::read_json(input)?;
                check_am_independence(&aa, &ctx.budget)?
            };
            #[derive(Serialize)]
            struct AaCheckResult {
                report: PropertyReport,
            }
            let result = AaCheckResult { report };
            ctx.emit(
                &result,
                report_human(&result.report),
                reports_csv(&[("am_independence", &result.report)]),
            )?;
            Ok(ctx.verdict_code(&[&result.report]))
        }
    }
}

fn verdict_word(r: &PropertyReport) -> &'static str {
    if r.passed() {
        "pass"
    } else {
        "violated"
    }
}

fn run_axiom(
    spec: &FunctionalSpec,
    axiom: AxiomArg,
    mode: RelationMode,
    positive_only: bool,
    budget: &SearchBudget,
) -> Result<PropertyReport, Error> {
    match axiom {
        AxiomArg::Normalization => check_normalization(spec),
        AxiomArg::Additivity => check_additivity(spec, budget, mode),
        AxiomArg::Affinity => check_affinity(spec, budget, mode),
        AxiomArg::Homogeneity => check_homogeneity(spec, budget, positive_only),
        AxiomArg::Monotonicity => check_monotonicity(spec, budget),
        AxiomArg::Convexity => check_preference_convexity(spec, budget, mode),
        AxiomArg::UncertaintyReduction => check_uncertainty_reduction(spec, budget),
        AxiomArg::UtilityConcavity => {
            let u = spec.utility().ok_or_else(|| {
                Error::Precondition(
                    "utility-concavity needs a spec that carries a utility \
                     (expected_utility, or choquet/distortion with one)"
                        .into(),
                )
            })?;
            Ok(check_utility_concavity(u))
        }
        AxiomArg::CeAmAdditivity => check_ce_am_additivity(spec, budget),
        AxiomArg::LawBased => {
            let p = spec
                .measure()
                .ok_or_else(|| {
                    Error::Precondition(
                        "law-based check needs a spec with an explicit probability measure \
                         (expectation, expected_utility, or distortion)"
                            .into(),
                    )
                })?
                .clone();
            check_law_based(spec, &p, budget)
        }
        AxiomArg::Representation => verify_expectation_representation(spec, budget),
    }
}
