//! Acceptance run: one line per criterion, non-zero exit if any fails.
//! Check suites go through the binary so exit codes are covered too.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::Value;

use laxcat::cat::standard;
use laxcat::equiv::is_equivalent;
use laxcat::generator::GenParams;
use laxcat::localization::{localize, WordBounds};
use laxcat::MarkedFinCat;

/// Largest tolerated share of bound-exceeded instances.
const MAX_SKIP_FRACTION: f64 = 0.05;
/// Wall-clock budget of the lax-limit suite.
const LAX_LIM_BUDGET: Duration = Duration::from_secs(600);
/// Wall-clock budget of both cofinality suites together.
const COFINALITY_BUDGET: Duration = Duration::from_secs(60);
/// Generated categories for the localization unit check.
const FLAT_LOCALIZATIONS: u64 = 25;

struct Run {
    stdout: Vec<u8>,
    report: Value,
    code: Option<i32>,
    elapsed: Duration,
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_laxcat")).args(args).output().expect("binary runs")
}

fn check(theorem: &str, seed: u64, count: u64, jobs: Option<usize>) -> Run {
    let (seed, count) = (seed.to_string(), count.to_string());
    let mut args = vec!["check", theorem, "--seed", &seed, "--count", &count];
    let jobs = jobs.map(|j| j.to_string());
    if let Some(j) = &jobs {
        args.extend(["--jobs", j]);
    }
    let start = Instant::now();
    let o = binary(&args);
    let elapsed = start.elapsed();
    let report = serde_json::from_slice(&o.stdout).unwrap_or(Value::Null);
    Run { stdout: o.stdout, report, code: o.status.code(), elapsed }
}

/// All non-skipped instances pass, skips stay within the quota, exit 0.
fn suite_ok(r: &Run) -> Result<String, String> {
    let n = r.report["instances"].as_u64().ok_or("no report")?;
    let passes = r.report["passes"].as_u64().unwrap_or(0);
    let failures = r.report["failures"].as_array().map_or(0, Vec::len) as u64;
    let skips = r.report["bound_exceeded"].as_u64().unwrap_or(0);
    let line = format!("{passes}/{} passed, {skips} skipped, {:.1}s", n - skips, r.elapsed.as_secs_f64());
    if passes + failures + skips != n {
        return Err(format!("{line}; counts do not add up"));
    }
    if failures > 0 {
        return Err(format!("{line}; {failures} counterexamples"));
    }
    if skips as f64 > MAX_SKIP_FRACTION * n as f64 {
        return Err(format!("{line}; skip share above {MAX_SKIP_FRACTION}"));
    }
    if r.code != Some(0) {
        return Err(format!("{line}; exit code {:?}", r.code));
    }
    Ok(line)
}

fn caps_ok(r: &Run, objects: u64, morphisms: u64, fiber_objects: u64) -> Result<(), String> {
    let p = &r.report["params"];
    if p["max_objects"] == objects && p["max_morphisms"] == morphisms && p["fiber_max_objects"] == fiber_objects {
        Ok(())
    } else {
        Err(format!("unexpected generator caps {p}"))
    }
}

fn localization_units() -> Result<String, String> {
    let p = GenParams { seed: 10, ..GenParams::default() };
    let bounds = WordBounds::default();
    for k in 0..FLAT_LOCALIZATIONS {
        let c = Arc::new(p.instance(k).category());
        let l = localize(&MarkedFinCat::flat(c.clone()), &bounds).map_err(|e| format!("instance {k}: {e}"))?;
        let v = is_equivalent(&l.cat, &c).map_err(|e| e.to_string())?;
        if !v.is_positive() || !v.revalidate() {
            return Err(format!("instance {k}: |C flat| not equivalent to C"));
        }
    }
    let l = localize(&MarkedFinCat::sharp(standard::arrow()), &bounds).map_err(|e| e.to_string())?;
    if !is_equivalent(&l.cat, &Arc::new(standard::terminal())).map_err(|e| e.to_string())?.is_positive() {
        return Err("sharp arrow does not localize to the point".into());
    }
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let free = binary(&["localize", data.join("free_monoid.json").to_str().unwrap()]);
    let report: Value = serde_json::from_slice(&free.stdout).unwrap_or(Value::Null);
    if free.status.code() != Some(2) || report["status"] != "bound_exceeded" {
        return Err(format!("free monoid: exit {:?}, status {}", free.status.code(), report["status"]));
    }
    let sharp = binary(&["localize", data.join("walking_arrow_sharp.json").to_str().unwrap()]);
    if sharp.status.code() != Some(0) {
        return Err(format!("sharp arrow: exit {:?}", sharp.status.code()));
    }
    Ok(format!("{FLAT_LOCALIZATIONS}/{FLAT_LOCALIZATIONS} flat localizations, sharp arrow, free monoid exit 2"))
}

fn main() {
    let mut results: Vec<(u32, &str, Result<String, String>)> = Vec::new();
    let mut runs: Vec<(&str, u64, u64, Run)> = Vec::new();

    let specs: [(u32, &str, &str, u64, u64); 9] = [
        (1, "lax limit = marked sections", "thm-lax-lim", 3, 200),
        (2, "oplax limit = cartesian marked sections", "thm-oplax-lim", 3, 200),
        (3, "lax colimit probes", "thm-lax-colim-probe", 0, 100),
        (4, "sharp collapse", "prop-sharp-limit", 7, 50),
        (5, "flat reduction", "ghn-flat", 0, 50),
        (7, "marked limits", "marked-limit", 0, 50),
        (8, "pullback square", "pullback-remark", 0, 100),
        (9, "fully faithful limits", "ff-lemma", 0, 50),
        (6, "cofinality", "cofinality-left", 1, 200),
    ];
    for (id, label, theorem, seed, count) in specs {
        let r = check(theorem, seed, count, None);
        let mut outcome = suite_ok(&r);
        if id == 1 {
            outcome = outcome.and_then(|line| {
                caps_ok(&r, 4, 14, 3)?;
                if r.elapsed > LAX_LIM_BUDGET {
                    return Err(format!("{line}; over the {}s budget", LAX_LIM_BUDGET.as_secs()));
                }
                Ok(line)
            });
        }
        if id == 2 {
            outcome = outcome.and_then(|line| caps_ok(&r, 4, 14, 3).map(|_| line));
        }
        if id == 6 {
            let right = check("cofinality-right", seed, count, None);
            let elapsed = r.elapsed + right.elapsed;
            outcome = match (outcome, suite_ok(&right)) {
                (Ok(a), Ok(b)) if elapsed <= COFINALITY_BUDGET => Ok(format!("left {a}; right {b}")),
                (Ok(_), Ok(_)) => Err(format!("over the {}s budget", COFINALITY_BUDGET.as_secs())),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
            runs.push(("cofinality-right", seed, count, right));
        }
        results.push((id, label, outcome));
        runs.push((theorem, seed, count, r));
    }

    results.push((10, "localization units", localization_units()));

    // Same seed, different worker count: reports must match byte for byte.
    let mut mismatched = Vec::new();
    for (theorem, seed, count, first) in &runs {
        let again = check(theorem, *seed, *count, Some(2));
        if again.stdout != first.stdout {
            mismatched.push(*theorem);
        }
    }
    let det = if mismatched.is_empty() {
        Ok(format!("{} suites re-run with identical reports", runs.len()))
    } else {
        Err(format!("reports differ for {}", mismatched.join(", ")))
    };
    results.push((11, "determinism", det));

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (id, label, outcome) in &results {
        match outcome {
            Ok(line) => println!("criterion {id:>2} PASS  {label}: {line}"),
            Err(line) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {label}: {line}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
