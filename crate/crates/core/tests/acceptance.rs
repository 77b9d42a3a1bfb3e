//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact; time limits are fixed below.

use std::process::Command;
use std::time::{Duration, Instant};

use coboundary::harness::{run_check, CheckConfig, CheckReport, CHECK_NAMES};

const LIMIT_BRACKET: Duration = Duration::from_secs(1);
const LIMIT_LIE: Duration = Duration::from_secs(1);
const LIMIT_DPLUS_SQ: Duration = Duration::from_secs(30);
const LIMIT_CLI: Duration = Duration::from_secs(60);

struct Outcome {
    passed: bool,
    detail: String,
}

fn config(trials: usize) -> CheckConfig {
    CheckConfig {
        trials,
        ..CheckConfig::default()
    }
}

/// Runs the named checks; passes when every one has no failures and the
/// whole batch fits in `limit`.
fn checks(names: &[&str], trials: usize, limit: Option<Duration>) -> Outcome {
    let cfg = config(trials);
    let start = Instant::now();
    let mut reports: Vec<CheckReport> = Vec::new();
    for name in names {
        match run_check(name, &cfg) {
            Ok(r) => reports.push(r),
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: format!("{name}: {e}"),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let mut detail = format!(
        "{} x {trials} trials, {failures} failure(s), {} ms",
        names.join("+"),
        elapsed.as_millis()
    );
    if let Some(l) = limit {
        detail.push_str(&format!(" (limit {} ms)", l.as_millis()));
    }
    if let Some(w) = reports.iter().flat_map(|r| r.failures.iter().map(move |w| (r, w))).next() {
        detail.push_str(&format!("; first: {} trial {} [{}] {}: {} vs {}", w.0.check, w.1.trial, w.1.case, w.1.identity, w.1.lhs, w.1.rhs));
    }
    Outcome {
        passed: failures == 0 && limit.map_or(true, |l| elapsed < l),
        detail,
    }
}

fn cli() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_coboundary"))
        .args(["verify", "--suite", "all", "--seed", "42"])
        .output()
        .expect("run the binary");
    let elapsed = start.elapsed();
    let code = out.status.code();
    let schema = match serde_json::from_slice::<serde_json::Value>(&out.stdout) {
        Ok(v) => schema_errors(&v),
        Err(e) => vec![format!("not JSON: {e}")],
    };
    Outcome {
        passed: code == Some(0) && elapsed < LIMIT_CLI && schema.is_empty(),
        detail: format!(
            "exit {code:?}, {} ms (limit {} ms), schema {}",
            elapsed.as_millis(),
            LIMIT_CLI.as_millis(),
            if schema.is_empty() { "ok".to_string() } else { schema.join("; ") }
        ),
    }
}

/// Checks the report shape `[{check, trials, failures[], millis}]`.
fn schema_errors(v: &serde_json::Value) -> Vec<String> {
    let mut errors = Vec::new();
    let Some(items) = v.as_array() else {
        return vec!["report is not an array".into()];
    };
    let names: Vec<&str> = items.iter().filter_map(|i| i.get("check").and_then(|c| c.as_str())).collect();
    if names != CHECK_NAMES {
        errors.push(format!("checks {names:?} differ from the suite"));
    }
    for item in items {
        let Some(obj) = item.as_object() else {
            errors.push("entry is not an object".into());
            continue;
        };
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        if keys != ["check", "failures", "millis", "trials"] {
            errors.push(format!("unexpected keys {keys:?}"));
        }
        if !obj.get("trials").map_or(false, |t| t.as_u64().map_or(false, |t| t >= 1)) {
            errors.push("trials must be a positive integer".into());
        }
        if !obj.get("millis").map_or(false, serde_json::Value::is_u64) {
            errors.push("millis must be a non-negative integer".into());
        }
        if !obj.get("failures").map_or(false, serde_json::Value::is_array) {
            errors.push("failures must be an array".into());
        }
    }
    errors
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("bracket equals the commutator oracle (k = 2, 3)", Box::new(|| checks(&["bracket_oracle"], 100, Some(LIMIT_BRACKET)))),
        ("antisymmetry and Jacobi identity", Box::new(|| checks(&["jacobi"], 100, Some(LIMIT_LIE)))),
        ("tangent sums and inverses", Box::new(|| checks(&["tangent_add", "tangent_inverse"], 100, None))),
        ("structure lemmas on arity-3 cubes", Box::new(|| checks(&["simplicial", "lemma41", "lemma42", "lemma43", "star_compat"], 50, None))),
        ("d+ squares to zero", Box::new(|| checks(&["dplus_sq_zero"], 50, Some(LIMIT_DPLUS_SQ)))),
        ("d+ = dx and factor order independence", Box::new(|| checks(&["coincidence", "order_indep"], 50, None))),
        ("contour defect is the face bracket", Box::new(|| checks(&["mc_formula", "closed_corollary"], 50, None))),
        ("no residue on valid input, residue on the planted form", Box::new(|| checks(&["form_axioms", "phi_conditions", "residue_negative"], 50, None))),
        ("classical exterior derivative cross-check", Box::new(|| checks(&["classical_cross"], 50, None))),
        ("verify --suite all --seed 42", Box::new(cli)),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let outcome = run();
        if !outcome.passed {
            failed += 1;
        }
        println!(
            "acceptance {:>2} {} {label}: {}",
            i + 1,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
