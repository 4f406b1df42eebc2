//! Seeded verification suites. Each suite generates instances, computes both
//! sides of a statement and compares them through the equivalence or
//! set-bijection oracles.

mod run;
mod theorems;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bounds::SizeLimits;
use crate::cat::{saturate_marking, standard, MarkedFinCat, MarkedFunctor};
use crate::diagram::CatDiagram;
use crate::error::{CatError, Result};
use crate::generator::{GenParams, Generator};
use crate::io::{RawDiagram, RawMarkedFunctor, RawSetDiagram};
use crate::limits::SetDiagram;
use crate::localization::{probe_suite, Probe, WordBounds};

pub use run::{dump_instance, replay, run_check, CheckOptions, CheckReport, DumpProbe, DumpSettings, FailureDump, FailureRecord, SkipRecord};
pub use theorems::evaluate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "thm-lax-lim")]
    LaxLim,
    #[serde(rename = "thm-oplax-lim")]
    OplaxLim,
    #[serde(rename = "thm-lax-colim-probe")]
    LaxColimProbe,
    #[serde(rename = "thm-oplax-colim-probe")]
    OplaxColimProbe,
    #[serde(rename = "prop-sharp-limit")]
    PropSharpLimit,
    #[serde(rename = "ghn-flat")]
    GhnFlat,
    #[serde(rename = "cofinality-left")]
    CofinalityLeft,
    #[serde(rename = "cofinality-right")]
    CofinalityRight,
    #[serde(rename = "marked-limit")]
    MarkedLimit,
    #[serde(rename = "pullback-remark")]
    PullbackRemark,
    #[serde(rename = "ff-lemma")]
    FfLemma,
    #[serde(rename = "monotonicity")]
    Monotonicity,
}

impl Theorem {
    pub const ALL: [Theorem; 12] = [
        Theorem::LaxLim,
        Theorem::OplaxLim,
        Theorem::LaxColimProbe,
        Theorem::OplaxColimProbe,
        Theorem::PropSharpLimit,
        Theorem::GhnFlat,
        Theorem::CofinalityLeft,
        Theorem::CofinalityRight,
        Theorem::MarkedLimit,
        Theorem::PullbackRemark,
        Theorem::FfLemma,
        Theorem::Monotonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::LaxLim => "thm-lax-lim",
            Theorem::OplaxLim => "thm-oplax-lim",
            Theorem::LaxColimProbe => "thm-lax-colim-probe",
            Theorem::OplaxColimProbe => "thm-oplax-colim-probe",
            Theorem::PropSharpLimit => "prop-sharp-limit",
            Theorem::GhnFlat => "ghn-flat",
            Theorem::CofinalityLeft => "cofinality-left",
            Theorem::CofinalityRight => "cofinality-right",
            Theorem::MarkedLimit => "marked-limit",
            Theorem::PullbackRemark => "pullback-remark",
            Theorem::FfLemma => "ff-lemma",
            Theorem::Monotonicity => "monotonicity",
        }
    }

    /// Generator caps used unless overridden. Colimit probes compare
    /// functor categories out of ∫F, so their instances are kept smaller.
    pub fn default_params(self) -> GenParams {
        let p = GenParams::default();
        match self {
            Theorem::LaxColimProbe | Theorem::OplaxColimProbe => GenParams {
                max_objects: 3,
                max_morphisms: 4,
                fiber_max_objects: 2,
                fiber_max_morphisms: 2,
                ..p
            },
            Theorem::CofinalityLeft | Theorem::CofinalityRight => GenParams { max_objects: 4, max_morphisms: 8, ..p },
            _ => GenParams { max_objects: 4, max_morphisms: 14, ..p },
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = CatError;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| CatError::Parse(format!("unknown theorem {s}")))
    }
}

/// Resource settings shared by every instance of a run.
#[derive(Debug, Clone)]
pub struct CheckSettings {
    pub limits: SizeLimits,
    pub bounds: WordBounds,
    pub probes: Vec<Probe>,
}

impl Default for CheckSettings {
    /// Caps sized for generated instances: wider than the interactive
    /// defaults, since a skipped instance verifies nothing.
    fn default() -> Self {
        let limits = SizeLimits { max_objects: 4096, max_morphisms: 65_536, max_enumeration: 1_000_000 };
        CheckSettings { limits, bounds: WordBounds::default(), probes: probe_suite() }
    }
}

/// The data a statement is evaluated on.
#[derive(Debug, Clone)]
pub enum Input {
    Diagram(CatDiagram),
    Sets(SetDiagram),
    /// Two diagrams over the same base.
    Pair(CatDiagram, CatDiagram),
    /// t: I† → J† and F over J.
    Pullback(MarkedFunctor, CatDiagram),
    /// A diagram and, per base object, the fiber objects to keep.
    Subdiagram(CatDiagram, Vec<Vec<usize>>),
    /// A diagram and a second marking of its base containing the first.
    Remarked(CatDiagram, MarkedFinCat),
}

/// Outcome of evaluating one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub(crate) fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict { passed, detail: detail.into() }
    }
}

/// A reproducible instance in file form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub theorem: Theorem,
    pub index: u64,
    pub params: GenParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<RawDiagram>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<RawDiagram>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<RawSetDiagram>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<RawMarkedFunctor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep: Option<BTreeMap<String, Vec<String>>>,
    /// The larger marking of the base, as non-identity morphism ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<String>>,
}

impl Instance {
    pub fn new(theorem: Theorem, index: u64, params: GenParams, input: &Input) -> Self {
        let mut i = Instance {
            theorem,
            index,
            params,
            diagram: None,
            second: None,
            sets: None,
            functor: None,
            keep: None,
            marked: None,
        };
        match input {
            Input::Diagram(d) => i.diagram = Some(RawDiagram::of(d)),
            Input::Sets(s) => i.sets = Some(RawSetDiagram::of(s)),
            Input::Pair(d, e) => {
                i.diagram = Some(RawDiagram::of(d));
                i.second = Some(RawDiagram::of(e));
            }
            Input::Pullback(t, d) => {
                i.functor = Some(RawMarkedFunctor::of(t));
                i.diagram = Some(RawDiagram::of(d));
            }
            Input::Subdiagram(d, keep) => {
                let b = d.base_cat();
                let ids = (0..b.object_count())
                    .map(|x| {
                        let f = d.fiber(x);
                        (b.object_id(x).to_string(), keep[x].iter().map(|&y| f.object_id(y).to_string()).collect())
                    })
                    .collect();
                i.diagram = Some(RawDiagram::of(d));
                i.keep = Some(ids);
            }
            Input::Remarked(d, m) => {
                i.diagram = Some(RawDiagram::of(d));
                i.marked = Some(m.marking.indices().filter(|&f| !m.cat.is_identity(f)).map(|f| m.cat.morphism_id(f).to_string()).collect());
            }
        }
        i
    }

    /// Rebuilds and validates the input.
    pub fn input(&self) -> Result<Input> {
        let missing = |what: &str| CatError::Parse(format!("{} instance without {what}", self.theorem));
        let diagram = || self.diagram.as_ref().ok_or_else(|| missing("diagram"))?.resolve(None);
        Ok(match self.theorem {
            Theorem::CofinalityLeft | Theorem::CofinalityRight => {
                Input::Sets(self.sets.as_ref().ok_or_else(|| missing("sets"))?.resolve(None)?)
            }
            Theorem::MarkedLimit => Input::Pair(diagram()?, self.second.as_ref().ok_or_else(|| missing("second"))?.resolve(None)?),
            Theorem::PullbackRemark => {
                let t = self.functor.as_ref().ok_or_else(|| missing("functor"))?.resolve(None)?;
                Input::Pullback(t, diagram()?)
            }
            Theorem::FfLemma => {
                let d = diagram()?;
                let ids = self.keep.as_ref().ok_or_else(|| missing("keep"))?;
                let b = d.base_cat();
                let keep = (0..b.object_count())
                    .map(|x| {
                        let f = d.fiber(x);
                        ids.get(b.object_id(x)).map_or(Ok(vec![]), |v| v.iter().map(|o| f.object_index(o)).collect())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Input::Subdiagram(d, keep)
            }
            Theorem::Monotonicity => {
                let d = diagram()?;
                let b = d.base_cat().clone();
                let mut idx = b.isomorphisms();
                for m in self.marked.as_ref().ok_or_else(|| missing("marked"))? {
                    idx.push(b.morphism_index(m)?);
                }
                Input::Remarked(d, MarkedFinCat::new(b, &idx)?)
            }
            _ => Input::Diagram(diagram()?),
        })
    }
}

/// Marks fibers at random, then closes the markings under the transitions
/// so that every transition is a marked functor.
fn mark_fibers(g: &mut Generator, d: &CatDiagram) -> Result<CatDiagram> {
    let b = d.base_cat();
    let density = g.p.marking_density;
    let mut seeds: Vec<Vec<usize>> = d
        .fibers()
        .iter()
        .map(|f| f.cat.non_identity_morphisms().collect::<Vec<_>>().into_iter().filter(|_| g.gen_bool(density)).collect())
        .collect();
    loop {
        let marks: Vec<_> = d.fibers().iter().zip(&seeds).map(|(f, s)| saturate_marking(&f.cat, s)).collect();
        let mut changed = false;
        for m in 0..b.morphism_count() {
            let (s, t) = (b.src(m), b.tgt(m));
            for f in marks[s].indices() {
                let img = d.transition(m).morphisms[f];
                if !marks[t].contains(img) && !seeds[t].contains(&img) {
                    seeds[t].push(img);
                    changed = true;
                }
            }
        }
        if !changed {
            let fibers = d.fibers().iter().zip(marks).map(|(f, marking)| MarkedFinCat { cat: f.cat.clone(), marking }).collect();
            return CatDiagram::new(d.base().clone(), fibers, d.transitions().to_vec());
        }
    }
}

/// Instance `k` of a run of `theorem`.
pub fn generate(theorem: Theorem, params: &GenParams, k: u64) -> Result<Input> {
    let mut g = params.instance(k);
    Ok(match theorem {
        Theorem::LaxLim | Theorem::OplaxLim | Theorem::LaxColimProbe | Theorem::OplaxColimProbe => {
            let base = g.marked_category();
            Input::Diagram(g.diagram(&base)?)
        }
        Theorem::GhnFlat => {
            let base = MarkedFinCat::flat(g.category());
            Input::Diagram(g.diagram(&base)?)
        }
        Theorem::PropSharpLimit => {
            let shape = if g.gen_bool(0.5) { standard::arrow() } else { standard::cospan() };
            Input::Diagram(g.diagram(&MarkedFinCat::sharp(shape))?)
        }
        Theorem::CofinalityLeft | Theorem::CofinalityRight => {
            let base = Arc::new(g.category());
            Input::Sets(g.set_diagram(&base, 3)?)
        }
        Theorem::MarkedLimit => {
            let base = g.marked_category();
            let d = g.diagram(&base)?;
            let e = g.diagram(&base)?;
            Input::Pair(mark_fibers(&mut g, &d)?, mark_fibers(&mut g, &e)?)
        }
        Theorem::PullbackRemark => {
            let j = g.marked_category();
            let d = g.diagram(&j)?;
            let mut found = None;
            for _ in 0..g.p.retries {
                let n = g.p.max_objects.min(3);
                let i = Arc::new(g.category_in(1, n, g.p.max_morphisms.min(4)));
                let i = g.marking(i);
                if let Some(t) = g.marked_functor(&i, &j) {
                    found = Some(t);
                    break;
                }
            }
            let t = found.ok_or(CatError::GenerationExhausted(g.p.retries))?;
            Input::Pullback(t, d)
        }
        Theorem::FfLemma => {
            let base = g.marked_category();
            let d = g.diagram(&base)?;
            let keep = g.closed_subsets(&d);
            Input::Subdiagram(d, keep)
        }
        Theorem::Monotonicity => {
            let base = g.marked_category();
            let density = g.p.marking_density;
            let mut seed: Vec<usize> = base.marking.indices().collect();
            seed.extend(base.cat.non_identity_morphisms().collect::<Vec<_>>().into_iter().filter(|_| g.gen_bool(density)));
            let larger = MarkedFinCat { cat: base.cat.clone(), marking: saturate_marking(&base.cat, &seed) };
            Input::Remarked(g.diagram(&base)?, larger)
        }
    })
}
