//! Browser demo bindings: three interactive operations exposed to a
//! static page through JSON strings.
//!
//! Every export takes and returns JSON so the page needs no generated
//! glue types: a success is the operation's payload, a failure is
//! `{"error": "..."}` — the page decides how to render either.  The
//! functions are plain Rust and run natively too, which is how the unit
//! tests below exercise them (the sandbox used for development has no
//! wasm32 target installed; `wasm-pack build` produces the browser
//! artifact on a normal toolchain).

use antimono::{
    capacities::example1_distortion, check_additivity, check_preference_convexity, evaluate,
    monotone_decompose, Act, FunctionalSpec, RelationMode, SearchBudget, DEFAULT_SEED,
};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::wasm_bindgen;

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

fn ok_json<T: Serialize>(payload: &T) -> String {
    serde_json::to_string(payload).unwrap_or_else(err_json)
}

/// Sample the Example 1 distortion g on `mesh + 1` equally spaced
/// points of [0, 1]: returns `{"points": [[p, g(p)], ...]}`.
#[wasm_bindgen]
pub fn distortion_curve(mesh: u32) -> String {
    if mesh == 0 {
        return err_json("mesh must be at least 1");
    }
    if mesh > 100_000 {
        return err_json("mesh capped at 100000 for the demo");
    }
    let g = example1_distortion();
    let mut points = Vec::with_capacity(mesh as usize + 1);
    for i in 0..=mesh {
        let p = i as f64 / mesh as f64;
        match g.eval(p) {
            Ok(v) => points.push((p, v)),
            Err(e) => return err_json(e),
        }
    }
    #[derive(Serialize)]
    struct Curve {
        points: Vec<(f64, f64)>,
    }
    ok_json(&Curve { points })
}

/// Split an act (JSON array of numbers) into its monotone parts:
/// returns `{"up": [...], "down": [...], "value": I(X)}` where the
/// value is the Example 1 functional on as many uniform states as the
/// act has coordinates.
#[wasm_bindgen]
pub fn decompose(act_json: &str) -> String {
    let act: Act = match serde_json::from_str(act_json) {
        Ok(a) => a,
        Err(e) => return err_json(format!("bad act: {e}")),
    };
    let n = act.values().len();
    let spec = match FunctionalSpec::example1_uniform(n) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let value = match evaluate(&spec, &act) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let d = monotone_decompose(&act);
    #[derive(Serialize)]
    struct Split {
        up: Vec<f64>,
        down: Vec<f64>,
        value: f64,
    }
    ok_json(&Split {
        up: d.up.values().to_vec(),
        down: d.down.values().to_vec(),
        value,
    })
}

#[derive(Deserialize)]
struct CheckRequest {
    /// "additivity" or "convexity".
    axiom: String,
    /// "general", "comonotonic" or "antimonotonic".
    mode: String,
    /// Uniform Example 1 state count, 2..=12.
    states: usize,
    #[serde(default)]
    samples: Option<u64>,
    #[serde(default)]
    seed: Option<u64>,
}

/// Run a seeded counterexample search for one axiom against the
/// Example 1 functional; returns the full property report as JSON.
#[wasm_bindgen]
pub fn run_check(request_json: &str) -> String {
    let req: CheckRequest = match serde_json::from_str(request_json) {
        Ok(r) => r,
        Err(e) => return err_json(format!("bad request: {e}")),
    };
    if !(2..=12).contains(&req.states) {
        return err_json("states must be between 2 and 12");
    }
    let samples = req.samples.unwrap_or(2_000).min(200_000);
    let spec = match FunctionalSpec::example1_uniform(req.states) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let mode = match req.mode.as_str() {
        "general" => RelationMode::General,
        "comonotonic" => RelationMode::Comonotonic,
        "antimonotonic" => RelationMode::Antimonotonic,
        other => return err_json(format!("unknown mode {other:?}")),
    };
    let budget = SearchBudget::new(samples, req.seed.unwrap_or(DEFAULT_SEED));
    let report = match req.axiom.as_str() {
        "additivity" => check_additivity(&spec, &budget, mode),
        "convexity" => check_preference_convexity(&spec, &budget, mode),
        other => return err_json(format!("unknown axiom {other:?} (demo offers additivity, convexity)")),
    };
    match report {
        Ok(r) => ok_json(&r),
        Err(e) => err_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_hits_the_known_breakpoint() {
        let v: serde_json::Value = serde_json::from_str(&distortion_curve(10)).unwrap();
        let points = v["points"].as_array().unwrap();
        assert_eq!(points.len(), 11);
        assert_eq!(points[8][0], 0.8);
        assert_eq!(points[8][1], 0.25);
    }

    #[test]
    fn curve_rejects_bad_mesh() {
        let v: serde_json::Value = serde_json::from_str(&distortion_curve(0)).unwrap();
        assert!(v["error"].as_str().unwrap().contains("mesh"));
    }

    #[test]
    fn decompose_splits_and_evaluates() {
        let v: serde_json::Value = serde_json::from_str(&decompose("[1, 3, 2, 0.5]")).unwrap();
        assert_eq!(v["up"], serde_json::json!([1.0, 3.0, 3.0, 3.0]));
        assert_eq!(v["down"], serde_json::json!([0.0, 0.0, -1.0, -2.5]));
        assert!(v["value"].is_number());
    }

    #[test]
    fn decompose_reports_bad_input() {
        let v: serde_json::Value = serde_json::from_str(&decompose("[1, \"x\"]")).unwrap();
        assert!(v["error"].as_str().unwrap().starts_with("bad act"));
    }

    #[test]
    fn run_check_finds_the_additivity_violation() {
        let req = r#"{"axiom":"additivity","mode":"antimonotonic","states":4,"samples":5000}"#;
        let v: serde_json::Value = serde_json::from_str(&run_check(req)).unwrap();
        assert_eq!(v["verdict"], "violated");
        assert!(v["witness"]["magnitude"].as_f64().unwrap() > 0.5);
    }

    #[test]
    fn run_check_same_seed_same_report() {
        let req = r#"{"axiom":"convexity","mode":"antimonotonic","states":3,"samples":1000,"seed":7}"#;
        assert_eq!(run_check(req), run_check(req));
    }

    #[test]
    fn run_check_rejects_unknown_axiom() {
        let req = r#"{"axiom":"frobnication","mode":"general","states":3}"#;
        let v: serde_json::Value = serde_json::from_str(&run_check(req)).unwrap();
        assert!(v["error"].as_str().unwrap().contains("unknown axiom"));
    }
}
