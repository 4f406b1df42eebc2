use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use laxcat::bounds::SizeLimits;
use laxcat::check::{replay, run_check, CheckOptions, Theorem};
use laxcat::constructions::{coslice, slice, twisted_arrow};
use laxcat::equiv::{is_equivalent, skeleton};
use laxcat::grothendieck::{grothendieck_cart, grothendieck_cocart, sections};
use laxcat::io::{marked_to_raw, read_diagram, read_json, read_marked_category, read_probes, RawFunctor};
use laxcat::limits::{lax_limit, oplax_limit};
use laxcat::localization::{lax_colimit, localize, oplax_colimit, LocalizationResult, PresentedCat, WordBounds};
use laxcat::{CatError, FinCat};

/// Finite marked categories, partially lax (co)limits and their checks.
#[derive(Parser)]
#[command(name = "laxcat", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output file; for `check`, the directory receiving failure dumps.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Maximal word length during localization.
    #[arg(long, global = true)]
    word_bound: Option<usize>,
    /// Maximal number of morphisms of a localization.
    #[arg(long, global = true)]
    size_bound: Option<usize>,
    /// Object cap on derived categories.
    #[arg(long, global = true)]
    cap_objects: Option<usize>,
    /// Morphism cap on derived categories.
    #[arg(long, global = true)]
    cap_morphisms: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a category, diagram or presentation file.
    Validate { file: PathBuf },
    /// Twisted arrow category.
    Tw { file: PathBuf },
    /// Marked slice over an object.
    Slice {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Marked coslice under an object.
    Coslice {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Total category of a diagram with its induced marking.
    Grothendieck {
        file: PathBuf,
        #[arg(long)]
        cartesian: bool,
    },
    /// Section category of the Grothendieck construction.
    Sections {
        file: PathBuf,
        #[arg(long)]
        marked: bool,
        #[arg(long)]
        cartesian: bool,
    },
    /// Partially lax limit by the end formula.
    Laxlim { file: PathBuf },
    /// Partially oplax limit by the end formula.
    Oplaxlim { file: PathBuf },
    /// Partially lax colimit as a localization.
    Laxcolim { file: PathBuf },
    /// Partially oplax colimit as a localization.
    Oplaxcolim { file: PathBuf },
    /// Localize a marked category or a presentation with marked arrows.
    Localize { file: PathBuf },
    /// Decide equivalence of two categories.
    Equiv { left: PathBuf, right: PathBuf },
    /// Skeleton of a category.
    Skeleton { file: PathBuf },
    /// Run a seeded verification suite.
    Check {
        theorem: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Object cap on generated bases.
        #[arg(long)]
        max_objects: Option<usize>,
        /// Cap on non-identity morphisms of generated bases.
        #[arg(long)]
        max_morphisms: Option<usize>,
        /// Tolerated bound hits; 5% of the count by default.
        #[arg(long)]
        max_skip: Option<u64>,
        /// Probe manifest replacing the built-in suite.
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// Re-evaluate a failure dump.
    Replay { file: PathBuf },
}

enum Failure {
    Bound(CatError),
    Input(CatError),
}

impl From<CatError> for Failure {
    fn from(e: CatError) -> Self {
        if e.is_bound() {
            Failure::Bound(e)
        } else {
            Failure::Input(e)
        }
    }
}

type Outcome = Result<(Value, u8), Failure>;

struct Ctx {
    limits: SizeLimits,
    /// Explicit object and morphism caps, if any.
    caps: (Option<usize>, Option<usize>),
    bounds: WordBounds,
}

fn category(path: &Path) -> Result<Arc<FinCat>, CatError> {
    Ok(read_marked_category(path)?.cat)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn localization_outcome(r: LocalizationResult) -> Outcome {
    let code = if r.is_completed() { 0 } else { 2 };
    Ok((to_value(&r), code))
}

fn run(cmd: Cmd, ctx: &Ctx, out: Option<&Path>) -> Outcome {
    let lim = &ctx.limits;
    match cmd {
        Cmd::Validate { file } => {
            let v: Value = read_json(&file)?;
            let kind = if v.get("base").is_some() {
                let d = read_diagram(&file)?;
                json!({"valid": true, "kind": "diagram", "base_objects": d.base_cat().object_count()})
            } else if v.get("arrows").is_some() {
                let p: PresentedCat = read_json(&file)?;
                p.with_inverses()?;
                json!({"valid": true, "kind": "presentation", "arrows": p.arrows.len(), "relations": p.relations.len()})
            } else {
                let c = read_marked_category(&file)?;
                json!({
                    "valid": true,
                    "kind": "category",
                    "objects": c.cat.object_count(),
                    "morphisms": c.cat.morphism_count(),
                    "marked": c.marking.len(),
                })
            };
            Ok((kind, 0))
        }
        Cmd::Tw { file } => Ok((to_value(&twisted_arrow(&category(&file)?, lim)?.cat.to_raw()), 0)),
        Cmd::Slice { file, object } => {
            let c = read_marked_category(&file)?;
            let i = c.cat.object_index(&object)?;
            Ok((to_value(&marked_to_raw(&slice(&c, i)?.cat)), 0))
        }
        Cmd::Coslice { file, object } => {
            let c = read_marked_category(&file)?;
            let i = c.cat.object_index(&object)?;
            Ok((to_value(&marked_to_raw(&coslice(&c, i)?.cat)), 0))
        }
        Cmd::Grothendieck { file, cartesian } => {
            let d = read_diagram(&file)?;
            let e = if cartesian { grothendieck_cart(&d, lim)? } else { grothendieck_cocart(&d, lim)? };
            Ok((to_value(&marked_to_raw(&e.total)), 0))
        }
        Cmd::Sections { file, marked, cartesian } => {
            let d = read_diagram(&file)?;
            let e = if cartesian { grothendieck_cart(&d, lim)? } else { grothendieck_cocart(&d, lim)? };
            Ok((to_value(&sections(&e, marked, lim)?.cat.to_raw()), 0))
        }
        Cmd::Laxlim { file } => limit_outcome(&file, false, lim),
        Cmd::Oplaxlim { file } => limit_outcome(&file, true, lim),
        Cmd::Laxcolim { file } => {
            let d = read_diagram(&file)?;
            localization_outcome(LocalizationResult::from_localization(lax_colimit(&d, &ctx.bounds, lim))?)
        }
        Cmd::Oplaxcolim { file } => {
            let d = read_diagram(&file)?;
            localization_outcome(LocalizationResult::from_localization(oplax_colimit(&d, &ctx.bounds, lim))?)
        }
        Cmd::Localize { file } => {
            let v: Value = read_json(&file)?;
            let r = if v.get("arrows").is_some() {
                let p: PresentedCat = read_json(&file)?;
                LocalizationResult::from_completion(p.with_inverses().and_then(|q| q.complete(&ctx.bounds)))?
            } else {
                let c = read_marked_category(&file)?;
                LocalizationResult::from_localization(localize(&c, &ctx.bounds))?
            };
            localization_outcome(r)
        }
        Cmd::Equiv { left, right } => {
            let v = is_equivalent(&category(&left)?, &category(&right)?)?;
            Ok((to_value(&v), 0))
        }
        Cmd::Skeleton { file } => Ok((to_value(&skeleton(&category(&file)?).0.to_raw()), 0)),
        Cmd::Check { theorem, seed, count, jobs, max_objects, max_morphisms, max_skip, probes } => {
            let theorem: Theorem = theorem.parse()?;
            let mut o = CheckOptions::new(theorem, seed, count);
            o.jobs = jobs;
            o.max_skip = max_skip;
            o.out = out.map(Path::to_path_buf);
            o.params.max_objects = max_objects.unwrap_or(o.params.max_objects);
            o.params.max_morphisms = max_morphisms.unwrap_or(o.params.max_morphisms);
            if let Some(n) = ctx.caps.0 {
                o.settings.limits.max_objects = n;
            }
            if let Some(n) = ctx.caps.1 {
                o.settings.limits.max_morphisms = n;
            }
            o.settings.bounds = ctx.bounds;
            if let Some(p) = probes {
                o.settings.probes = read_probes(&p)?;
            }
            let start = Instant::now();
            let report = run_check(&o)?;
            eprintln!("{} in {:.1}s", report.summary(), start.elapsed().as_secs_f64());
            let code = report.exit_code() as u8;
            Ok((to_value(&report), code))
        }
        Cmd::Replay { file } => {
            let (dump, v) = replay(&file)?;
            let same = v == dump.verdict;
            let code = if v.passed { 0 } else { 1 };
            Ok((json!({"theorem": dump.instance.theorem, "recorded": dump.verdict, "replayed": v, "same": same}), code))
        }
    }
}

fn limit_outcome(file: &Path, oplax: bool, lim: &SizeLimits) -> Outcome {
    let d = read_diagram(file)?;
    let r = if oplax { oplax_limit(&d, lim)? } else { lax_limit(&d, lim)? };
    let b = d.base_cat();
    let projections: serde_json::Map<String, Value> = r
        .projections
        .iter()
        .enumerate()
        .map(|(i, p)| (b.object_id(i).to_string(), to_value(&RawFunctor::of(p))))
        .collect();
    Ok((json!({"category": r.cat.to_raw(), "projections": projections}), 0))
}

fn emit(v: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = SizeLimits::default();
    limits.max_objects = cli.cap_objects.unwrap_or(limits.max_objects);
    limits.max_morphisms = cli.cap_morphisms.unwrap_or(limits.max_morphisms);
    let mut bounds = WordBounds::default();
    bounds.max_word_length = cli.word_bound.unwrap_or(bounds.max_word_length);
    bounds.max_morphisms = cli.size_bound.unwrap_or(bounds.max_morphisms);
    let ctx = Ctx { limits, bounds, caps: (cli.cap_objects, cli.cap_morphisms) };
    let is_check = matches!(cli.cmd, Cmd::Check { .. });
    let out = cli.out.as_deref();
    match run(cli.cmd, &ctx, out) {
        Ok((v, code)) => {
            let target = if is_check { None } else { out };
            if let Err(e) = emit(&v, target) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(code)
        }
        Err(Failure::Bound(e)) => {
            let _ = emit(&json!({"status": "bound_exceeded", "error": e.to_string()}), None);
            eprintln!("bound exceeded: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
