//! End-to-end tests of the `antimono` binary: exit-code conventions,
//! format contract (JSON envelope, human/CSV derivation, stderr config
//! echo), seed resolution, and reproducibility guarantees.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_antimono"))
}

/// Shared fixture directory, written once per test-binary run.
fn fixtures() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("antimono-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let write = |name: &str, body: &str| std::fs::write(dir.join(name), body).unwrap();
        write("ev.json", r#"{"kind":"expectation","p":[0.25,0.75]}"#);
        write("ev3.json", r#"{"kind":"expectation","p":[0.2,0.3,0.5]}"#);
        write(
            "example1.json",
            &serde_json::to_string_pretty(&antimono::FunctionalSpec::example1_uniform(10).unwrap())
                .unwrap(),
        );
        // Piecewise-linear mesh of sqrt(x) on [0, 1]: concave, strictly
        // increasing.
        let sqrt_bps: Vec<(f64, f64)> = (0..=8)
            .map(|i| {
                let x = i as f64 / 8.0;
                (x, x.sqrt())
            })
            .collect();
        write(
            "sqrt.json",
            &serde_json::to_string(&serde_json::json!({
                "breakpoints": sqrt_bps,
                "strictly_increasing": true
            }))
            .unwrap(),
        );
        write(
            "id.json",
            r#"{"breakpoints":[[0,0],[1,1]],"strictly_increasing":true}"#,
        );
        write("hidden.json", r#"{"p":[0.25,0.75],"u":[0.0,1.0]}"#);
        write("m.json", "[1.0, 0.0]");
        write("M.json", "[0.0, 1.0]");
        write(
            "control.json",
            r#"{"capacity":{"n":2,"table":{"0":0.0,"1":0.1,"2":0.1,"3":1.0}},"u":[0.0,1.0]}"#,
        );
        write("acts.csv", "1,2,0.5\n3,1,2\n");
        dir
    })
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_of(out)).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn additivity_on_expectation_passes_with_exit_0() {
    let out = run(&[
        "check",
        "--spec",
        &fixture("ev.json"),
        "--axiom",
        "additivity",
        "--mode",
        "antimonotonic",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["result"]["report"]["verdict"], "pass");
    assert_eq!(v["config"]["seed"], 0xA17140);
}

#[test]
fn example1_convexity_violated_in_general_mode_exit_2_with_witness() {
    let out = run(&[
        "check",
        "--spec",
        &fixture("example1.json"),
        "--axiom",
        "convexity",
        "--mode",
        "general",
    ]);
    assert_eq!(code(&out), 2);
    let v = json_of(&out);
    assert_eq!(v["result"]["report"]["verdict"], "violated");
    let witness = &v["result"]["report"]["witness"];
    assert!(witness["magnitude"].as_f64().unwrap() > 1e-9);
    assert!(witness["inputs"].as_array().unwrap().len() >= 2);
}

#[test]
fn example1_convexity_passes_in_antimonotonic_mode_exit_0() {
    let out = run(&[
        "check",
        "--spec",
        &fixture("example1.json"),
        "--axiom",
        "convexity",
        "--mode",
        "antimonotonic",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["result"]["report"]["verdict"], "pass");
}

#[test]
fn extract_measure_prints_the_weights() {
    let out = run(&[
        "extract-measure",
        "--spec",
        &fixture("ev3.json"),
        "--format",
        "human",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(
        text.lines().next().unwrap() == "Q = (0.2, 0.3, 0.5)",
        "got: {text}"
    );
    // Config echo goes to stderr for non-JSON formats.
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("# config:"));
}

#[test]
fn example1_curve_contains_the_known_row_and_reports_split() {
    let dir = fixtures().join("curve-test");
    std::fs::create_dir_all(&dir).unwrap();
    let curve = dir.join("g.csv");
    let out = run(&[
        "example1",
        "--emit-curve",
        "10",
        "--out",
        &curve.display().to_string(),
    ]);
    assert_eq!(code(&out), 0, "reproduction command always exits 0");
    let csv = std::fs::read_to_string(&curve).unwrap();
    assert!(csv.lines().any(|l| l == "0.8,0.25"), "curve: {csv}");
    assert_eq!(csv.lines().count(), 12, "header + 11 mesh points");
    let v = json_of(&out);
    assert_eq!(v["result"]["pseudo_convexity"]["verdict"], "pass");
    assert_eq!(v["result"]["convexity"]["verdict"], "violated");
    assert_eq!(v["result"]["am_additivity"]["verdict"], "violated");
    assert_eq!(v["result"]["curve"]["rows"], 11);
}

#[test]
fn savage_sqrt_reports_three_way_pass() {
    let out = run(&[
        "savage",
        "--p",
        "0.5",
        "0.5",
        "--utility",
        &fixture("sqrt.json"),
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let r = &v["result"]["report"];
    assert_eq!(r["general_convexity"]["verdict"], "pass");
    assert_eq!(r["am_convexity"]["verdict"], "pass");
    assert_eq!(r["utility_concavity"]["verdict"], "pass");
    assert_eq!(r["consistent_with_theorem"], true);
}

#[test]
fn standard_seq_id_utility_steps_by_one_minus_p_over_p() {
    let out = run(&[
        "standard-seq",
        "--p",
        "0.6667",
        "--m",
        "0",
        "--M",
        "1",
        "--utility",
        &fixture("id.json"),
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let seq: Vec<f64> = v["result"]["sequence"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(seq.len(), 3);
    let step = (1.0 - 0.6667) / 0.6667;
    for (k, x) in seq.iter().enumerate() {
        assert!((x - k as f64 * step).abs() <= 1e-9, "seq: {seq:?}");
    }
}

#[test]
fn aa_recover_reconstructs_the_hidden_model() {
    let out = run(&[
        "aa",
        "recover",
        "--model",
        &fixture("hidden.json"),
        "--band",
        &fixture("m.json"),
        &fixture("M.json"),
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let p_hat: Vec<f64> = v["result"]["p_hat"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((p_hat[0] - 0.25).abs() <= 1e-8 && (p_hat[1] - 0.75).abs() <= 1e-8);
}

#[test]
fn aa_check_model_passes_and_control_fails() {
    let ok = run(&["aa", "check", "--model", &fixture("hidden.json")]);
    assert_eq!(code(&ok), 0);
    let bad = run(&["aa", "check", "--control", &fixture("control.json")]);
    assert_eq!(code(&bad), 2);
    let v = json_of(&bad);
    assert!(v["result"]["report"]["witness"]["magnitude"].as_f64().unwrap() >= 0.4 - 1e-9);
}

#[test]
fn identical_config_gives_byte_identical_reports() {
    let args = [
        "check",
        "--spec",
        &fixture("example1.json"),
        "--axiom",
        "convexity",
        "--mode",
        "general",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(code(&first), code(&second));
}

#[test]
fn thread_count_never_changes_the_result() {
    let base = [
        "check",
        "--spec",
        &fixture("example1.json"),
        "--axiom",
        "additivity",
        "--mode",
        "antimonotonic",
        "--samples",
        "4000",
    ];
    let one = run(&base);
    let mut with_threads: Vec<&str> = base.to_vec();
    with_threads.extend(["--threads", "4"]);
    let four = run(&with_threads);
    // The config echo differs (threads), the result must not.
    assert_eq!(json_of(&one)["result"], json_of(&four)["result"]);
    assert_eq!(code(&one), code(&four));
}

#[test]
fn seed_resolution_env_then_flag() {
    let args = [
        "check",
        "--spec",
        &fixture("ev.json"),
        "--axiom",
        "normalization",
    ];
    let env_only = bin()
        .args(args)
        .env("ANTIMONO_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json_of(&env_only)["config"]["seed"], 123);
    let flag_wins = bin()
        .args(args)
        .args(["--seed", "0x7"])
        .env("ANTIMONO_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json_of(&flag_wins)["config"]["seed"], 7);
    let bad_env = bin()
        .args(args)
        .env("ANTIMONO_SEED", "not-a-seed")
        .output()
        .unwrap();
    assert_eq!(code(&bad_env), 1);
}

#[test]
fn usage_and_io_errors_exit_1() {
    let missing_file = run(&[
        "check",
        "--spec",
        &fixture("nope.json"),
        "--axiom",
        "additivity",
    ]);
    assert_eq!(code(&missing_file), 1);
    let missing_arg = run(&["check", "--axiom", "additivity"]);
    assert_eq!(code(&missing_arg), 1);
    let unknown_axiom = run(&[
        "check",
        "--spec",
        &fixture("ev.json"),
        "--axiom",
        "frobnication",
    ]);
    assert_eq!(code(&unknown_axiom), 1);
    let help = run(&["--help"]);
    assert_eq!(code(&help), 0);
}

#[test]
fn malformed_spec_is_a_diagnostic_not_a_panic() {
    let dir = fixtures();
    std::fs::write(dir.join("broken.json"), r#"{"kind":"expectation","p":[0.5,0.6]}"#).unwrap();
    let out = run(&[
        "check",
        "--spec",
        &fixture("broken.json"),
        "--axiom",
        "additivity",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn tol_flag_downgrades_small_violations_to_exit_0() {
    // The control oracle's worst violation is 0.4; a tolerance above it
    // turns the exit code green without touching the report.
    let out = run(&[
        "aa",
        "check",
        "--control",
        &fixture("control.json"),
        "--tol",
        "0.5",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["result"]["report"]["verdict"], "violated");
}

#[test]
fn eval_matches_hand_computed_expectations() {
    let out = run(&[
        "eval",
        "--spec",
        &fixture("ev3.json"),
        "--acts",
        &fixture("acts.csv"),
        "--ce",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let values: Vec<f64> = v["result"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    // (1,2,0.5)·(0.2,0.3,0.5) and (3,1,2)·(0.2,0.3,0.5)
    assert!((values[0] - 1.05).abs() <= 1e-12);
    assert!((values[1] - 1.9).abs() <= 1e-12);
    let ces: Vec<f64> = v["result"]["certainty_equivalents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    // For an expectation functional the CE is the value itself.
    assert!((ces[0] - values[0]).abs() <= 1e-9);
    assert!((ces[1] - values[1]).abs() <= 1e-9);
}

#[test]
fn decompose_writes_parts_that_sum_back() {
    let dir = fixtures().join("decomp-test");
    std::fs::create_dir_all(&dir).unwrap();
    let out_csv = dir.join("parts.csv");
    let out = run(&[
        "decompose",
        "--acts",
        &fixture("acts.csv"),
        "--out",
        &out_csv.display().to_string(),
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let decs = v["result"]["decompositions"].as_array().unwrap();
    assert_eq!(decs.len(), 2);
    let originals: [[f64; 3]; 2] = [[1.0, 2.0, 0.5], [3.0, 1.0, 2.0]];
    for (d, original) in decs.iter().zip(originals) {
        let up: Vec<f64> = d["up"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        let down: Vec<f64> =
            d["down"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        for i in 0..3 {
            assert_eq!((up[i] + down[i]).to_bits(), original[i].to_bits());
        }
    }
    let parts = std::fs::read_to_string(&out_csv).unwrap();
    assert_eq!(parts.lines().count(), 4, "two parts per act");
    assert!(parts.lines().next().unwrap().starts_with("0,up,"));
}

#[test]
fn csv_format_emits_report_rows_on_stdout() {
    let out = run(&[
        "check",
        "--spec",
        &fixture("ev.json"),
        "--axiom",
        "additivity",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "label,check,mode,verdict,samples_checked,exhaustive,tolerance,seed,witness_magnitude"
    );
    assert!(lines.next().unwrap().starts_with("additivity,additivity,general,pass,"));
}
