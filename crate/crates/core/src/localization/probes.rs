//! Mapping-out checks against a fixed suite of small probe categories.
//!
//! A localization or lax colimit is only ever compared through functor
//! categories into probes D, which is the part of its universal property a
//! finite 1-category can see.

use std::sync::Arc;

use serde::Serialize;

use super::Localization;
use crate::bounds::SizeLimits;
use crate::cat::{opposite_marked, product_functor_maps, product_marked, standard, FinCat, Functor, FunctorMaps, MarkedFinCat};
use crate::constructions::{coslice_diagram, functor_category, marked_functor_category, twisted_arrow};
use crate::diagram::CatDiagram;
use crate::equiv::is_equivalent;
use crate::error::Result;
use crate::grothendieck::{grothendieck_cart, grothendieck_cocart};
use crate::limits::{end_limit, EndDiagram};

#[derive(Debug, Clone)]
pub struct Probe {
    pub name: String,
    pub cat: Arc<FinCat>,
}

/// The versioned probe suite, smallest first.
pub fn probe_suite() -> Vec<Probe> {
    let p = |name: &str, c: FinCat| Probe { name: name.into(), cat: Arc::new(c) };
    vec![
        p("terminal", standard::terminal()),
        p("discrete-2", standard::discrete(2)),
        p("walking-arrow", standard::arrow()),
        p("walking-iso", standard::walking_iso()),
        p("chain-2", standard::chain2()),
        p("parallel-pair", standard::parallel_pair()),
        p("split-idempotent", standard::split_idempotent()),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    pub probe: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProbeVerdict {
    pub outcomes: Vec<ProbeOutcome>,
}

impl ProbeVerdict {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.outcomes.iter().filter(|o| !o.passed).map(|o| o.probe.as_str()).collect()
    }
}

/// For each probe D, whether precomposition with C → L is an equivalence
/// Fun(L, D) → Fun†(C†, D♭).
pub fn check_localization_up(c: &MarkedFinCat, l: &Localization, probes: &[Probe], limits: &SizeLimits) -> Result<ProbeVerdict> {
    let q = &l.quotient;
    let mut outcomes = Vec::new();
    for p in probes {
        let flat = MarkedFinCat::flat(p.cat.clone());
        let a = functor_category(&l.cat, &p.cat, limits)?;
        let b = marked_functor_category(c, &flat, limits)?;
        let mut objects = Vec::with_capacity(a.functors.len());
        let mut missing = None;
        for g in &a.functors {
            match b.object_of(&g.after(q.maps())) {
                Some(k) => objects.push(k),
                None => {
                    missing = Some(g.canonical_id(&l.cat, &p.cat));
                    break;
                }
            }
        }
        if let Some(g) = missing {
            let detail = format!("{g} does not restrict to a marked functor");
            outcomes.push(ProbeOutcome { probe: p.name.clone(), passed: false, detail });
            continue;
        }
        let morphisms = (0..a.cat.morphism_count())
            .map(|m| {
                let comps: Vec<usize> = (0..c.cat.object_count()).map(|x| a.components[m][q.object(x)]).collect();
                let (s, t) = (objects[a.cat.src(m)], objects[a.cat.tgt(m)]);
                *b.cat.hom(s, t).iter().find(|&&k| b.components[k] == comps).expect("restriction is natural")
            })
            .collect();
        let pre = Functor::new_unchecked(a.cat.clone(), b.cat.clone(), FunctorMaps { objects, morphisms });
        let (full, faithful, es) = (pre.is_full(), pre.is_faithful(), pre.is_essentially_surjective());
        let passed = full && faithful && es;
        let detail = if passed {
            format!("equivalence on {} functors", a.cat.object_count())
        } else {
            format!("precomposition full={full} faithful={faithful} essentially surjective={es}")
        };
        outcomes.push(ProbeOutcome { probe: p.name.clone(), passed, detail });
    }
    Ok(ProbeVerdict { outcomes })
}

/// The diagram over Tw(I) whose limit computes maps out of the lax colimit
/// into D: at f: i → j the term Fun†(I†_{j/} × F(i)♭, D♭), or with the
/// opposite coslice for the oplax colimit; (a, b): f → f′ acts through
/// precomposition with b and F(a).
pub fn colimit_probe_diagram(d: &CatDiagram, oplax: bool, probe: &Arc<FinCat>, limits: &SizeLimits) -> Result<EndDiagram> {
    let base = d.base();
    let i_cat = &base.cat;
    let tw = twisted_arrow(i_cat, limits)?;
    let cos = coslice_diagram(base, limits)?;
    let cosl = |j: usize| {
        let c = cos.marked_fiber(j);
        if oplax {
            opposite_marked(c)
        } else {
            c.clone()
        }
    };
    let flat_d = MarkedFinCat::flat(probe.clone());
    let mut terms = Vec::with_capacity(tw.arrow.len());
    for &f in &tw.arrow {
        let a = product_marked(&cosl(i_cat.tgt(f)), &MarkedFinCat::flat(d.fiber(i_cat.src(f)).clone()));
        limits.objects("colimit probe term", a.cat.object_count())?;
        terms.push((a, flat_d.clone()));
    }
    let pre = (0..tw.cat.morphism_count())
        .map(|k| {
            let (f, g) = (tw.arrow[tw.cat.src(k)], tw.arrow[tw.cat.tgt(k)]);
            let (a, b) = tw.square[k];
            let (c1, c2) = (cosl(i_cat.tgt(f)), cosl(i_cat.tgt(g)));
            let (f1, f2) = (d.fiber(i_cat.src(f)), d.fiber(i_cat.src(g)));
            product_functor_maps(
                (&c1.cat, f1, &terms[tw.cat.src(k)].0.cat),
                (&c2.cat, f2, &terms[tw.cat.tgt(k)].0.cat),
                cos.transition(b),
                d.transition(a),
            )
        })
        .collect();
    let post = vec![FunctorMaps::identity(probe); tw.cat.morphism_count()];
    Ok(EndDiagram { index: tw.cat.clone(), terms, pre, post })
}

/// For each probe D, whether Fun†(∫F†, D♭) (∫̄F† for `oplax`) is
/// equivalent to the limit of [`colimit_probe_diagram`]. No localization
/// is computed.
pub fn probe_check_colimit_theorem(d: &CatDiagram, oplax: bool, probes: &[Probe], limits: &SizeLimits) -> Result<ProbeVerdict> {
    let total = if oplax { grothendieck_cart(d, limits)? } else { grothendieck_cocart(d, limits)? }.total;
    let mut outcomes = Vec::new();
    for p in probes {
        let flat = MarkedFinCat::flat(p.cat.clone());
        let left = marked_functor_category(&total, &flat, limits)?;
        let right = end_limit(&colimit_probe_diagram(d, oplax, &p.cat, limits)?, limits)?;
        let v = is_equivalent(&left.cat, &right.cat)?;
        let detail = match &v.certificate {
            Some(c) => format!("{}: {} vs {}", c.invariant, c.left, c.right),
            None => format!("{:?} ({} objects)", v.verdict, left.cat.object_count()).to_lowercase(),
        };
        outcomes.push(ProbeOutcome { probe: p.name.clone(), passed: v.is_positive() && v.revalidate(), detail });
    }
    Ok(ProbeVerdict { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::{localize, localize_presented, present, WordBounds};
    use crate::samples::point_into_pair;

    fn lim() -> SizeLimits {
        SizeLimits::default()
    }

    #[test]
    fn suite_is_fixed() {
        let names: Vec<String> = probe_suite().into_iter().map(|p| p.name).collect();
        assert_eq!(names.len(), 7);
        let s = &probe_suite()[6].cat;
        assert_eq!(s.morphism_count(), 5);
        assert!(!s.is_thin());
        assert!(probe_suite().iter().all(|p| p.cat.object_count() <= 3));
    }

    #[test]
    fn genuine_localizations_pass() {
        for m in [
            MarkedFinCat::flat(standard::chain2()),
            MarkedFinCat::sharp(standard::arrow()),
            MarkedFinCat::from_ids(standard::chain2(), &["id_0", "id_1", "id_2", "u"]).unwrap(),
            MarkedFinCat::sharp(standard::split_idempotent()),
        ] {
            let l = localize(&m, &WordBounds::default()).unwrap();
            let v = check_localization_up(&m, &l, &probe_suite(), &lim()).unwrap();
            assert!(v.passed(), "{:?}", v.failing());
        }
    }

    #[test]
    fn inverting_a_parallel_pair_is_infinite() {
        // g⁻¹f generates a copy of the integers in End(a)
        let m = MarkedFinCat::sharp(standard::parallel_pair());
        let r = localize(&m, &WordBounds::default());
        assert!(matches!(r, Err(crate::CatError::WordBoundExceeded(_))));
    }

    #[test]
    fn sharp_arrow_into_the_walking_arrow() {
        // functors from the walking isomorphism into [1] are the two constants
        let m = MarkedFinCat::sharp(standard::arrow());
        let l = localize(&m, &WordBounds::default()).unwrap();
        let d = Arc::new(standard::arrow());
        let a = functor_category(&l.cat, &d, &lim()).unwrap();
        let b = marked_functor_category(&m, &MarkedFinCat::flat(d), &lim()).unwrap();
        assert_eq!((a.cat.object_count(), a.cat.morphism_count()), (2, 3));
        assert_eq!((b.cat.object_count(), b.cat.morphism_count()), (2, 3));
    }

    #[test]
    fn dropping_an_inverse_law_is_detected() {
        let m = MarkedFinCat::sharp(standard::arrow());
        let mut p = present(&m);
        // keep inv(u)∘u = id, drop u∘inv(u) = id
        p.relations.retain(|r| r.lhs != ["inv(u)", "u"]);
        let l = localize_presented(&m, &p, &WordBounds::default()).unwrap();
        assert_eq!(l.cat.morphism_count(), 5);
        let v = check_localization_up(&m, &l, &probe_suite(), &lim()).unwrap();
        assert_eq!(v.failing(), ["split-idempotent"]);
    }

    #[test]
    fn colimit_probe_examples() {
        let probes = probe_suite();
        let d = CatDiagram::constant(MarkedFinCat::flat(standard::arrow()), Arc::new(standard::terminal()));
        for oplax in [false, true] {
            assert!(probe_check_colimit_theorem(&d, oplax, &probes, &lim()).unwrap().passed());
        }
        let d = point_into_pair(MarkedFinCat::sharp(standard::arrow()));
        for oplax in [false, true] {
            let v = probe_check_colimit_theorem(&d, oplax, &probes, &lim()).unwrap();
            assert!(v.passed(), "{v:?}");
        }
    }

    #[test]
    fn running_example_localization_satisfies_probes() {
        let d = point_into_pair(MarkedFinCat::sharp(standard::arrow()));
        let e = grothendieck_cocart(&d, &lim()).unwrap();
        let l = localize(&e.total, &WordBounds::default()).unwrap();
        // x is identified with a, b stays apart
        assert_eq!(crate::equiv::skeleton(&l.cat).0.object_count(), 2);
        assert!(check_localization_up(&e.total, &l, &probe_suite(), &lim()).unwrap().passed());
    }
}
