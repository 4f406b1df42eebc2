//! Localization of marked categories and partially lax colimits.

mod presented;
mod probes;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use presented::{inverse_name, present, Arrow, Completion, PresentedCat, Relation, WordBounds};
pub use probes::{
    check_localization_up, colimit_probe_diagram, probe_check_colimit_theorem, probe_suite, Probe, ProbeOutcome,
    ProbeVerdict,
};

use serde::Serialize;

use crate::bounds::SizeLimits;
use crate::cat::{FinCat, Functor, FunctorMaps, MarkedFinCat, RawCategory};
use crate::diagram::CatDiagram;
use crate::error::{BoundReport, CatError, Result};
use crate::grothendieck::{grothendieck_cart, grothendieck_cocart};

/// |C†| with the canonical functor C → |C†|.
#[derive(Debug, Clone)]
pub struct Localization {
    pub cat: Arc<FinCat>,
    pub quotient: Functor,
}

impl Localization {
    /// Whether the quotient sends every marked morphism to an isomorphism.
    pub fn inverts(&self, c: &MarkedFinCat) -> bool {
        c.marking.indices().all(|f| self.cat.is_iso(self.quotient.morphism(f)))
    }
}

/// Completes a presentation of C† and reads off the canonical functor.
/// Every non-identity morphism of C must be an arrow of `p`, under its id.
pub fn localize_presented(c: &MarkedFinCat, p: &PresentedCat, bounds: &WordBounds) -> Result<Localization> {
    let done = p.complete(bounds)?;
    let gen: BTreeMap<&str, usize> = p.arrows.iter().enumerate().map(|(k, a)| (a.id.as_str(), k)).collect();
    let cat = &c.cat;
    let objects = (0..cat.object_count())
        .map(|x| done.cat.object_index(cat.object_id(x)))
        .collect::<Result<Vec<_>>>()?;
    let morphisms = (0..cat.morphism_count())
        .map(|f| {
            if cat.is_identity(f) {
                return Ok(done.cat.identity(objects[cat.src(f)]));
            }
            let g = gen.get(cat.morphism_id(f)).ok_or_else(|| {
                CatError::InvalidPresentation(format!("morphism {} is not a generator", cat.morphism_id(f)))
            })?;
            Ok(done.generators[*g])
        })
        .collect::<Result<Vec<_>>>()?;
    let quotient = Functor::new(cat.clone(), done.cat.clone(), FunctorMaps { objects, morphisms })?;
    Ok(Localization { cat: done.cat, quotient })
}

/// |C†|: formal inverses for the marked morphisms, completed within bounds.
pub fn localize(c: &MarkedFinCat, bounds: &WordBounds) -> Result<Localization> {
    localize_presented(c, &present(c), bounds)
}

/// The lax colimit, as the localization of ∫F at its marked morphisms.
pub fn lax_colimit(d: &CatDiagram, bounds: &WordBounds, limits: &SizeLimits) -> Result<Localization> {
    localize(&grothendieck_cocart(d, limits)?.total, bounds)
}

/// The oplax colimit, as the localization of ∫̄F.
pub fn oplax_colimit(d: &CatDiagram, bounds: &WordBounds, limits: &SizeLimits) -> Result<Localization> {
    localize(&grothendieck_cart(d, limits)?.total, bounds)
}

/// Outcome of a localization in serializable form.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LocalizationResult {
    Completed {
        category: RawCategory,
        #[serde(skip_serializing_if = "Option::is_none")]
        quotient: Option<QuotientJson>,
    },
    BoundExceeded {
        bound: BoundReport,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientJson {
    pub object_map: BTreeMap<String, String>,
    pub morphism_map: BTreeMap<String, String>,
}

impl LocalizationResult {
    /// Bound hits become a report; any other error is passed through.
    pub fn from_localization(r: Result<Localization>) -> Result<Self> {
        match r {
            Ok(l) => Ok(LocalizationResult::Completed {
                category: l.cat.to_raw(),
                quotient: Some(QuotientJson {
                    object_map: l.quotient.object_map_ids(),
                    morphism_map: l.quotient.morphism_map_ids(),
                }),
            }),
            Err(e) => Self::bound_or(e),
        }
    }

    pub fn from_completion(r: Result<Completion>) -> Result<Self> {
        match r {
            Ok(c) => Ok(LocalizationResult::Completed { category: c.cat.to_raw(), quotient: None }),
            Err(e) => Self::bound_or(e),
        }
    }

    fn bound_or(e: CatError) -> Result<Self> {
        match e {
            CatError::WordBoundExceeded(b) | CatError::LocalizationTooLarge(b) => Ok(LocalizationResult::BoundExceeded { bound: b }),
            e => Err(e),
        }
    }

    pub fn is_completed(&self) -> bool {
        matches!(self, LocalizationResult::Completed { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;
    use crate::equiv::is_equivalent;

    #[test]
    fn flat_localization_is_the_category() {
        for c in [standard::walking_iso(), standard::chain2(), standard::parallel_pair(), standard::split_idempotent()] {
            let m = MarkedFinCat::flat(c.clone());
            let l = localize(&m, &WordBounds::default()).unwrap();
            assert_eq!(*l.cat, c);
            assert!(l.quotient.is_isomorphism());
        }
    }

    #[test]
    fn sharp_arrow_localizes_to_a_point() {
        let m = MarkedFinCat::sharp(standard::arrow());
        let l = localize(&m, &WordBounds::default()).unwrap();
        assert!(l.inverts(&m));
        let v = is_equivalent(&l.cat, &Arc::new(standard::terminal())).unwrap();
        assert!(v.is_positive());
    }

    #[test]
    fn localization_at_saturation_agrees() {
        let c = standard::chain2();
        let seed = MarkedFinCat::from_ids(c.clone(), &["id_0", "id_1", "id_2", "u", "v", "vu"]).unwrap();
        let l1 = localize(&seed, &WordBounds::default()).unwrap();
        // u and v alone generate the same marking
        let partial = MarkedFinCat::saturated(c, &[0]);
        assert!(l1.inverts(&seed));
        assert!(is_equivalent(&l1.cat, &Arc::new(standard::terminal())).unwrap().is_positive());
        assert!(localize(&partial, &WordBounds::default()).is_ok());
    }

    #[test]
    fn bound_report_serializes() {
        let p = PresentedCat {
            objects: vec!["*".into()],
            arrows: vec![Arrow { id: "m".into(), src: "*".into(), tgt: "*".into() }],
            relations: vec![],
            identities: None,
            marked: vec!["m".into()],
        };
        let r = LocalizationResult::from_completion(p.complete(&WordBounds::default())).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "bound_exceeded");
        assert_eq!(v["bound"]["kind"], "word_length");
    }

    #[test]
    fn flat_lax_colimit_is_the_total_category() {
        let d = crate::samples::point_into_pair(MarkedFinCat::flat(standard::arrow()));
        let e = grothendieck_cocart(&d, &SizeLimits::default()).unwrap();
        let l = lax_colimit(&d, &WordBounds::default(), &SizeLimits::default()).unwrap();
        assert_eq!(*l.cat, *e.total.cat);
    }

    #[test]
    fn constant_point_over_sharp_arrow() {
        let d = CatDiagram::constant(MarkedFinCat::sharp(standard::arrow()), Arc::new(standard::terminal()));
        let l = lax_colimit(&d, &WordBounds::default(), &SizeLimits::default()).unwrap();
        assert!(is_equivalent(&l.cat, &Arc::new(standard::terminal())).unwrap().is_positive());
        let o = oplax_colimit(&d, &WordBounds::default(), &SizeLimits::default()).unwrap();
        assert!(is_equivalent(&o.cat, &Arc::new(standard::terminal())).unwrap().is_positive());
    }
}
