//! The fifteen acceptance criteria, one pass/fail line each. Runs without
//! the libtest harness so the lines are always printed.

use std::process::{Command, ExitCode};
use std::time::Instant;

use eyefree::verify::{run_check, Check};
use serde_json::Value;

const SEED: u64 = 42;

struct Outcome {
    passed: bool,
    note: String,
}

fn checks(names: &[&str]) -> Outcome {
    let mut passed = true;
    let mut notes = Vec::new();
    for name in names {
        match run_check(name, SEED) {
            Ok(c) => {
                passed &= c.passed;
                notes.push(format!("{}={} ({} cases){}", c.name, verdict(c.passed), c.cases, highlight(&c)));
            }
            Err(e) => {
                passed = false;
                notes.push(format!("{name} errored: {e}"));
            }
        }
    }
    Outcome { passed, note: notes.join("; ") }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// A short excerpt of the detail worth seeing in the log.
fn highlight(c: &Check) -> String {
    let d = &c.detail;
    match c.name {
        "compare_weights_trichotomy" => {
            let ns: Vec<String> = d["cells"]
                .as_array()
                .map(|v| v.iter().map(|x| x["smallest_valid_n"].to_string()).collect())
                .unwrap_or_default();
            format!(", smallest valid n per cell [{}]", ns.join(","))
        }
        "exact_small_n" => {
            let rows: Vec<String> = d["rows"]
                .as_array()
                .map(|v| {
                    v.iter()
                        .filter(|r| !r["verdict"].is_null())
                        .map(|r| format!("p={} n={} {}", str_of(&r["p"]), r["n"], str_of(&r["verdict"])))
                        .collect()
                })
                .unwrap_or_default();
            format!(", verdicts [{}]", rows.join(", "))
        }
        "rb_region_bounds" => {
            let rows: Vec<String> = d["rows"]
                .as_array()
                .map(|v| v.iter().map(|r| format!("n={} {}", r["n"], str_of(&r["slack"]))).collect())
                .unwrap_or_default();
            format!(", slack [{}]", rows.join(", "))
        }
        "single_blue_vertex_eyes" | "conditioned_acceptance" | "structure_distance_trend" | "ifree_lower_bound" => {
            format!(", {}", compact(d))
        }
        _ => String::new(),
    }
}

fn str_of(v: &Value) -> String {
    v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())
}

fn compact(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 400 {
        format!("{}...", &s[..400])
    } else {
        s
    }
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_eyefree"))
            .args(["verify", "--suite", "facts", "--seed", "42", "--threads", threads])
            .output()
            .expect("binary runs")
    };
    let (one, eight) = (run("1"), run("8"));
    let ok = one.status.success() && eight.status.success() && !one.stdout.is_empty() && one.stdout == eight.stdout;
    Outcome {
        passed: ok,
        note: format!(
            "exit codes {:?}/{:?}, {} vs {} bytes, identical={}",
            one.status.code(),
            eight.status.code(),
            one.stdout.len(),
            eight.stdout.len(),
            one.stdout == eight.stdout
        ),
    }
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("kappa search equals closed form", Box::new(|| checks(&["kappa_formula_agreement"]))),
        ("maximizing types", Box::new(|| checks(&["unique_maximizing_types", "single_blue_vertex_eyes"]))),
        ("construction weights", Box::new(|| checks(&["extremal_weight_closed_forms"]))),
        ("turan size identity", Box::new(|| checks(&["turan_size_identity"]))),
        ("weight comparison trichotomy", Box::new(|| checks(&["compare_weights_trichotomy"]))),
        ("degree difference", Box::new(|| checks(&["degree_difference"]))),
        ("lambda certificates", Box::new(|| checks(&["lambda_certificates"]))),
        ("core types", Box::new(|| checks(&["core_type_structure", "lambda_subtype_monotone"]))),
        ("exact extremal sets", Box::new(|| checks(&["exact_small_n"]))),
        ("containment oracle", Box::new(|| checks(&["containment_oracle"]))),
        ("density region", Box::new(|| checks(&["rb_region_bounds"]))),
        ("conditioned model", Box::new(|| checks(&["conditioned_acceptance", "ifree_lower_bound"]))),
        ("forbidden configurations", Box::new(|| checks(&["forbidden_configurations"]))),
        ("distance trend", Box::new(|| checks(&["structure_distance_trend"]))),
        ("determinism across thread counts", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        failed += usize::from(!o.passed);
        println!(
            "criterion {:>2} {}: {} [{:.1}s] {}",
            i + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.note
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
