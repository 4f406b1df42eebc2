use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, generate, CheckSettings, Input, Instance, Theorem, Verdict};
use crate::bounds::SizeLimits;
use crate::cat::{validate_category, RawCategory};
use crate::diagram::CatDiagram;
use crate::error::{CatError, Result};
use crate::generator::GenParams;
use crate::io::{read_json, to_json_pretty};
use crate::localization::{Probe, WordBounds};

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub theorem: Theorem,
    pub seed: u64,
    pub count: u64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub params: GenParams,
    pub settings: CheckSettings,
    /// Tolerated bound hits; defaults to 5% of `count`.
    pub max_skip: Option<u64>,
    /// Directory for failure dumps.
    pub out: Option<PathBuf>,
}

impl CheckOptions {
    pub fn new(theorem: Theorem, seed: u64, count: u64) -> Self {
        CheckOptions {
            theorem,
            seed,
            count,
            jobs: 0,
            params: GenParams { seed, ..theorem.default_params() },
            settings: CheckSettings::default(),
            max_skip: None,
            out: None,
        }
    }

    pub fn skip_quota(&self) -> u64 {
        self.max_skip.unwrap_or(self.count / 20)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub index: u64,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub index: u64,
    pub reason: String,
}

/// Aggregate of a run. Wall time is reported separately so that reports
/// are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: Theorem,
    pub seed: u64,
    pub params: GenParams,
    pub instances: u64,
    pub passes: u64,
    pub failures: Vec<FailureRecord>,
    pub bound_exceeded: u64,
    pub max_skip: u64,
    pub skips: Vec<SkipRecord>,
}

impl CheckReport {
    /// 0 when everything passed, 1 on a counterexample, 2 when bound hits
    /// exceed the quota.
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            1
        } else if self.bound_exceeded > self.max_skip {
            2
        } else {
            0
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {}/{} passed, {} failed, {} bound-exceeded",
            self.theorem,
            self.passes,
            self.instances - self.bound_exceeded,
            self.failures.len(),
            self.bound_exceeded
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DumpProbe {
    pub name: String,
    pub category: RawCategory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DumpSettings {
    pub limits: SizeLimits,
    pub bounds: WordBounds,
    pub probes: Vec<DumpProbe>,
}

impl DumpSettings {
    fn of(s: &CheckSettings) -> Self {
        DumpSettings {
            limits: s.limits,
            bounds: s.bounds,
            probes: s.probes.iter().map(|p| DumpProbe { name: p.name.clone(), category: p.cat.to_raw() }).collect(),
        }
    }

    fn resolve(&self) -> Result<CheckSettings> {
        let probes = self
            .probes
            .iter()
            .map(|p| Ok(Probe { name: p.name.clone(), cat: Arc::new(validate_category(&p.category)?) }))
            .collect::<Result<_>>()?;
        Ok(CheckSettings { limits: self.limits, bounds: self.bounds, probes })
    }
}

/// A failing instance as written to disk: enough to re-run the comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureDump {
    pub instance: Instance,
    pub verdict: Verdict,
    pub minimized: bool,
    pub settings: DumpSettings,
}

enum Outcome {
    Pass,
    Fail(Verdict, Option<Input>),
    Skip(String),
}

fn run_one(theorem: Theorem, params: &GenParams, k: u64, s: &CheckSettings) -> Outcome {
    let input = match generate(theorem, params, k) {
        Ok(i) => i,
        Err(e) if e.is_bound() => return Outcome::Skip(format!("generation: {e}")),
        Err(e) => return Outcome::Fail(Verdict::new(false, format!("generation error: {e}")), None),
    };
    match evaluate(theorem, &input, s) {
        Ok(v) if v.passed => Outcome::Pass,
        Ok(v) => Outcome::Fail(v, Some(input)),
        Err(e) if e.is_bound() => Outcome::Skip(e.to_string()),
        Err(e) => Outcome::Fail(Verdict::new(false, format!("error: {e}")), Some(input)),
    }
}

fn still_fails(theorem: Theorem, d: &CatDiagram, s: &CheckSettings) -> Option<Verdict> {
    d.validate().ok()?;
    match evaluate(theorem, &Input::Diagram(d.clone()), s) {
        Ok(v) if !v.passed => Some(v),
        _ => None,
    }
}

/// Greedily drops base objects, then fiber objects, while the failure
/// persists. Only single-diagram inputs are shrunk.
pub(crate) fn minimize(theorem: Theorem, input: Input, verdict: Verdict, s: &CheckSettings) -> (Input, Verdict, bool) {
    let Input::Diagram(mut d) = input else {
        return (input, verdict, false);
    };
    let mut v = verdict;
    let mut shrunk_any = false;
    'outer: loop {
        let n = d.base_cat().object_count();
        if theorem != Theorem::PropSharpLimit {
            for i in 0..n {
                let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                if let Ok(e) = d.restrict_base(&keep) {
                    if let Some(w) = still_fails(theorem, &e, s) {
                        (d, v, shrunk_any) = (e, w, true);
                        continue 'outer;
                    }
                }
            }
        }
        for i in 0..n {
            for x in 0..d.fiber(i).object_count() {
                let keep: Vec<Vec<usize>> = (0..n)
                    .map(|j| (0..d.fiber(j).object_count()).filter(|&y| j != i || y != x).collect())
                    .collect();
                if let Ok((e, _)) = d.full_subdiagram(&keep) {
                    if let Some(w) = still_fails(theorem, &e, s) {
                        (d, v, shrunk_any) = (e, w, true);
                        continue 'outer;
                    }
                }
            }
        }
        return (Input::Diagram(d), v, shrunk_any);
    }
}

fn dump_name(theorem: Theorem, seed: u64, k: u64) -> String {
    format!("{theorem}-s{seed}-i{k}")
}

/// Runs `count` seeded instances and writes a dump for every failure.
pub fn run_check(o: &CheckOptions) -> Result<CheckReport> {
    o.params.validate()?;
    let params = GenParams { seed: o.seed, ..o.params };
    let work = || -> Vec<Outcome> {
        (0..o.count).into_par_iter().map(|k| run_one(o.theorem, &params, k, &o.settings)).collect()
    };
    let outcomes = if o.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(o.jobs)
            .build()
            .map_err(|e| CatError::Parse(format!("thread pool: {e}")))?
            .install(work)
    };
    let mut report = CheckReport {
        theorem: o.theorem,
        seed: o.seed,
        params,
        instances: o.count,
        passes: 0,
        failures: vec![],
        bound_exceeded: 0,
        max_skip: o.skip_quota(),
        skips: vec![],
    };
    for (k, out) in outcomes.into_iter().enumerate() {
        let k = k as u64;
        match out {
            Outcome::Pass => report.passes += 1,
            Outcome::Skip(reason) => {
                report.bound_exceeded += 1;
                report.skips.push(SkipRecord { index: k, reason });
            }
            Outcome::Fail(v, input) => {
                let mut path = None;
                let mut detail = v.detail.clone();
                if let (Some(input), Some(dir)) = (input, &o.out) {
                    let (input, v, minimized) = minimize(o.theorem, input, v, &o.settings);
                    detail = v.detail.clone();
                    std::fs::create_dir_all(dir)?;
                    let name = dump_name(o.theorem, o.seed, k);
                    let dump = FailureDump {
                        instance: Instance::new(o.theorem, k, params, &input),
                        verdict: v,
                        minimized,
                        settings: DumpSettings::of(&o.settings),
                    };
                    if let Some(d) = &dump.instance.diagram {
                        std::fs::write(dir.join(format!("{name}.diagram.json")), to_json_pretty(d))?;
                    }
                    let p = dir.join(format!("{name}.json"));
                    std::fs::write(&p, to_json_pretty(&dump))?;
                    path = Some(p.display().to_string());
                }
                report.failures.push(FailureRecord { index: k, detail, path });
            }
        }
    }
    Ok(report)
}

/// Re-evaluates a failure dump under its recorded settings.
pub fn replay(path: &Path) -> Result<(FailureDump, Verdict)> {
    let dump: FailureDump = read_json(path)?;
    let settings = dump.settings.resolve()?;
    let input = dump.instance.input()?;
    let v = evaluate(dump.instance.theorem, &input, &settings)?;
    Ok((dump, v))
}

/// Writes a single instance of a run as a dump, whatever its verdict;
/// used to exercise replay on passing instances.
pub fn dump_instance(theorem: Theorem, params: &GenParams, k: u64, s: &CheckSettings) -> Result<FailureDump> {
    let input = generate(theorem, params, k)?;
    let verdict = evaluate(theorem, &input, s)?;
    Ok(FailureDump { instance: Instance::new(theorem, k, *params, &input), verdict, minimized: false, settings: DumpSettings::of(s) })
}
