mod common;

use std::sync::Arc;

use proptest::prelude::*;

use laxcat::cat::{opposite, saturate_marking, MarkedFinCat};
use laxcat::constructions::{functor_category, twisted_arrow};
use laxcat::equiv::{is_equivalent, is_isomorphic, skeleton};
use laxcat::generator::{GenParams, Generator};
use laxcat::grothendieck::{grothendieck_cart, grothendieck_cocart, sections};
use laxcat::io::RawDiagram;
use laxcat::limits::{lax_limit, lax_limit_explicit, oplax_limit, set_colimit, set_limit};
use laxcat::localization::{localize, WordBounds};
use laxcat::{CatDiagram, FinCat, SizeLimits};

fn small(seed: u64, objects: usize, morphisms: usize) -> Generator {
    GenParams { seed, max_objects: objects, max_morphisms: morphisms, fiber_max_objects: 2, fiber_max_morphisms: 2, ..GenParams::default() }
        .instance(0)
}

fn diagram(seed: u64) -> Option<CatDiagram> {
    let mut g = small(seed, 3, 4);
    let base = g.marked_category();
    g.diagram(&base).ok()
}

fn lim() -> SizeLimits {
    SizeLimits { max_objects: 4096, max_morphisms: 65_536, max_enumeration: 1_000_000 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_categories_are_valid_and_capped(seed in any::<u64>()) {
        let c = small(seed, 4, 6).category();
        prop_assert!(c.check_axioms().violations.is_empty());
        prop_assert!(c.object_count() <= 4);
        prop_assert!(c.non_identity_morphisms().count() <= 6);
    }

    #[test]
    fn saturation_is_a_closure(seed in any::<u64>(), picks in proptest::collection::vec(any::<bool>(), 16)) {
        let c = small(seed, 4, 6).category();
        let s: Vec<usize> = c.non_identity_morphisms().filter(|&f| picks[f % picks.len()]).collect();
        let m = saturate_marking(&c, &s);
        prop_assert!(s.iter().all(|&f| m.contains(f)));
        prop_assert!(c.isomorphisms().into_iter().all(|f| m.contains(f)));
        for (g, f) in c.composable_pairs() {
            if m.contains(g) && m.contains(f) {
                prop_assert!(m.contains(c.compose(g, f)));
            }
        }
        let again: Vec<usize> = m.indices().collect();
        prop_assert_eq!(saturate_marking(&c, &again), m);
    }

    #[test]
    fn twisted_arrow_homs_match_direct_search(seed in any::<u64>()) {
        let c = Arc::new(small(seed, 3, 5).category());
        let tw = twisted_arrow(&c, &lim()).unwrap();
        prop_assert_eq!(tw.cat.object_count(), c.morphism_count());
        for p in 0..tw.cat.object_count() {
            for q in 0..tw.cat.object_count() {
                prop_assert_eq!(tw.cat.hom(p, q).len(), common::twisted_hom(&c, tw.arrow[p], tw.arrow[q]));
            }
        }
    }

    #[test]
    fn functor_categories_match_enumeration(seed in any::<u64>()) {
        let mut g = small(seed, 3, 3);
        let c = Arc::new(g.category());
        let d = Arc::new(g.category());
        let fc = match functor_category(&c, &d, &lim()) {
            Err(e) if e.is_bound() => return Ok(()),
            r => r.unwrap(),
        };
        let oracle = common::functors(&c, &d);
        prop_assert_eq!(fc.cat.object_count(), oracle.len());
        let nat: usize = oracle.iter().flat_map(|s| oracle.iter().map(move |t| (s, t))).map(|(s, t)| common::transformations(&c, &d, s, t)).sum();
        prop_assert_eq!(fc.cat.morphism_count(), nat);
    }

    #[test]
    fn section_categories_match_enumeration(seed in any::<u64>(), cartesian in any::<bool>(), marked in any::<bool>()) {
        let Some(d) = diagram(seed) else { return Ok(()) };
        let e = if cartesian { grothendieck_cart(&d, &lim()) } else { grothendieck_cocart(&d, &lim()) }.unwrap();
        let s = sections(&e, marked, &lim()).unwrap();
        prop_assert_eq!((s.cat.object_count(), s.cat.morphism_count()), common::section_counts(&e, marked));
    }

    #[test]
    fn grothendieck_totals_count_fiber_objects(seed in any::<u64>()) {
        let Some(d) = diagram(seed) else { return Ok(()) };
        let e = grothendieck_cocart(&d, &lim()).unwrap();
        prop_assert_eq!(e.total.cat.object_count(), d.total_objects());
        prop_assert!(e.total.validate().is_ok());
        for f in e.total.marking.indices() {
            prop_assert!(d.base().is_marked(e.proj.morphism(f)));
        }
    }

    #[test]
    fn set_limits_and_colimits_match_enumeration(seed in any::<u64>()) {
        let mut g = small(seed, 4, 6);
        let base = Arc::new(g.category());
        let d = g.set_diagram(&base, 3).unwrap();
        prop_assert_eq!(set_limit(&d).len(), common::set_families(&d));
        prop_assert_eq!(set_colimit(&d).1, common::set_components(&d));
    }

    #[test]
    fn categories_are_equivalent_to_their_skeletons(seed in any::<u64>()) {
        let c = Arc::new(small(seed, 4, 6).category());
        let (s, _) = skeleton(&c);
        let v = is_equivalent(&c, &s).unwrap();
        prop_assert!(v.is_positive());
        prop_assert!(v.revalidate());
        let (t, _) = skeleton(&s);
        prop_assert!(is_isomorphic(&s, &t).unwrap().is_positive());
        let back = Arc::new(opposite(&opposite(&c)));
        prop_assert!(is_isomorphic(&c, &back).unwrap().is_positive());
    }

    #[test]
    fn localizing_nothing_changes_nothing(seed in any::<u64>()) {
        let c: FinCat = small(seed, 4, 6).category();
        let l = localize(&MarkedFinCat::flat(c), &WordBounds::default()).unwrap();
        prop_assert!(l.quotient.is_equivalence());
    }

    #[test]
    fn localization_inverts_the_marking(seed in any::<u64>()) {
        let c = small(seed, 3, 4).marked_category();
        if let Ok(l) = localize(&c, &WordBounds::default()) {
            prop_assert!(l.inverts(&c));
        }
    }

    #[test]
    fn end_limits_agree_with_the_explicit_construction(seed in any::<u64>(), oplax in any::<bool>()) {
        let Some(d) = diagram(seed) else { return Ok(()) };
        let lazy = if oplax { oplax_limit(&d, &lim()) } else { lax_limit(&d, &lim()) }.unwrap();
        let explicit = lax_limit_explicit(&d, oplax, &lim()).unwrap();
        prop_assert!(is_isomorphic(&lazy.cat, &explicit).unwrap().is_positive());
    }

    #[test]
    fn diagrams_survive_a_json_round_trip(seed in any::<u64>()) {
        let Some(d) = diagram(seed) else { return Ok(()) };
        let text = serde_json::to_string(&RawDiagram::of(&d)).unwrap();
        let raw: RawDiagram = serde_json::from_str(&text).unwrap();
        let e = raw.resolve(None).unwrap();
        prop_assert_eq!(RawDiagram::of(&e), RawDiagram::of(&d));
    }
}
