//! Grothendieck constructions with the induced marking, and their sections.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bounds::SizeLimits;
use crate::cat::{opposite, opposite_marked, CatBuilder, FinCat, Functor, FunctorMaps, MarkedFinCat, MarkedFunctor};
use crate::constructions::{from_functors, FunctorCategory};
use crate::diagram::CatDiagram;
use crate::error::{CatError, Result};
use crate::search::{enumerate_functors, FunctorQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Cocartesian,
    Cartesian,
}

/// A total category fibered over a marked base.
///
/// For the cocartesian flavor the base is I†; for the cartesian flavor it is
/// (I^op)†. Either way a total morphism records the base morphism φ it lies
/// over and a fiber morphism f, and it is marked iff φ is marked and f is
/// invertible.
#[derive(Debug, Clone)]
pub struct FiberedCat {
    pub total: MarkedFinCat,
    pub base: MarkedFinCat,
    pub proj: Functor,
    pub flavor: Flavor,
    /// (i, x) for each total object; x is an object of F(i).
    pub point: Vec<(usize, usize)>,
    /// (φ, f) for each total morphism; f lives in the fiber over the
    /// covariant target of φ, using the fiber indices of the diagram.
    pub lift: Vec<(usize, usize)>,
    pub diagram: CatDiagram,
}

/// ∫F with objects `(i|x)` and morphisms `(φ|x|f)` for f: F(φ)(x) → y.
pub fn grothendieck_cocart(d: &CatDiagram, limits: &SizeLimits) -> Result<FiberedCat> {
    let (cat, point, lift) = total(d, limits)?;
    let cat = Arc::new(cat);
    let mask = mask_of(d, &lift);
    let proj = Functor::new_unchecked(
        cat.clone(),
        d.base_cat().clone(),
        FunctorMaps {
            objects: point.iter().map(|p| p.0).collect(),
            morphisms: lift.iter().map(|l| l.0).collect(),
        },
    );
    Ok(FiberedCat {
        total: MarkedFinCat::with_mask_unchecked(cat, mask),
        base: d.base().clone(),
        proj,
        flavor: Flavor::Cocartesian,
        point,
        lift,
        diagram: d.clone(),
    })
}

/// ∫̄F = (∫(F^op))^op over I^op: a morphism (j|y) → (i|x) over φ: i → j is a
/// fiber morphism y → F(φ)(x), named like the matching morphism of ∫(F^op).
pub fn grothendieck_cart(d: &CatDiagram, limits: &SizeLimits) -> Result<FiberedCat> {
    let e = grothendieck_cocart(&d.opposite_fibers(), limits)?;
    // opposite() keeps ids, hence indices
    let cat = Arc::new(opposite(&e.total.cat));
    let base = opposite_marked(d.base());
    let proj = Functor::new_unchecked(cat.clone(), base.cat.clone(), e.proj.maps().clone());
    Ok(FiberedCat {
        total: MarkedFinCat::with_mask_unchecked(cat, e.total.marking.mask().to_vec()),
        base,
        proj,
        flavor: Flavor::Cartesian,
        point: e.point,
        lift: e.lift,
        diagram: d.clone(),
    })
}

fn mask_of(d: &CatDiagram, lift: &[(usize, usize)]) -> Vec<bool> {
    let b = d.base_cat();
    lift.iter().map(|&(phi, f)| d.base().is_marked(phi) && d.fiber(b.tgt(phi)).is_iso(f)).collect()
}

#[allow(clippy::type_complexity)]
fn total(d: &CatDiagram, limits: &SizeLimits) -> Result<(FinCat, Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    let base = d.base_cat();
    limits.objects("Grothendieck construction", d.total_objects())?;
    let mut b = CatBuilder::new();
    let mut obj_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut points = Vec::new();
    for i in 0..base.object_count() {
        for x in 0..d.fiber(i).object_count() {
            let k = b.object(format!("({}|{})", base.object_id(i), d.fiber(i).object_id(x)));
            obj_of.insert((i, x), k);
            points.push((i, x));
        }
    }
    // (φ, x, f)
    let mut arrows: Vec<(usize, usize, usize)> = Vec::new();
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for phi in 0..base.morphism_count() {
        let (i, j) = (base.src(phi), base.tgt(phi));
        let (fi, fj) = (d.fiber(i), d.fiber(j));
        let t = d.transition(phi);
        for x in 0..fi.object_count() {
            for &f in fj.outgoing(t.objects[x]) {
                if arrows.len() >= limits.max_morphisms {
                    return Err(limits.morphisms_overflow("Grothendieck construction"));
                }
                let id = format!("({}|{}|{})", base.morphism_id(phi), fi.object_id(x), fj.morphism_id(f));
                let k = b.morphism(id, obj_of[&(i, x)], obj_of[&(j, fj.tgt(f))]);
                index.insert((phi, x, f), k);
                arrows.push((phi, x, f));
            }
        }
    }
    for &(i, x) in &points {
        let id = base.identity(i);
        b.set_identity(obj_of[&(i, x)], index[&(id, x, d.fiber(i).identity(x))]);
    }
    let (cat, re) = b.build(|g, h| {
        // (ψ, g) ∘ (φ, f) = (ψ∘φ, g∘F(ψ)(f))
        let (phi, x, f) = arrows[h];
        let (psi, _, gg) = arrows[g];
        let k = base.tgt(psi);
        let ff = d.transition(psi).morphisms[f];
        index[&(base.compose(psi, phi), x, d.fiber(k).compose(gg, ff))]
    })?;
    let mut point = vec![(0, 0); points.len()];
    for (old, &p) in points.iter().enumerate() {
        point[re.objects[old]] = p;
    }
    let mut lift = vec![(0, 0); arrows.len()];
    for (old, &(phi, _, f)) in arrows.iter().enumerate() {
        lift[re.morphisms[old]] = (phi, f);
    }
    Ok((cat, point, lift))
}

impl FiberedCat {
    /// Whether a total morphism is a (co)cartesian lift, according to the
    /// flavor: its fiber component is invertible.
    pub fn is_transport(&self, m: usize) -> bool {
        let (phi, f) = self.lift[m];
        let j = self.diagram.base_cat().tgt(phi);
        self.diagram.fiber(j).is_iso(f)
    }

    /// The strict fiber over `i`, as the category of total morphisms lying
    /// over the identity, with object and morphism ids taken from F(i).
    pub fn fiber(&self, i: usize) -> FinCat {
        let c = &self.total.cat;
        let id = self.base.cat.identity(i);
        let objs: Vec<usize> = (0..c.object_count()).filter(|&e| self.proj.object(e) == i).collect();
        let mut b = CatBuilder::new();
        let mut new_of = HashMap::new();
        for &e in &objs {
            new_of.insert(e, b.object(self.diagram.fiber(i).object_id(self.point[e].1)));
        }
        let mut old = Vec::new();
        let mut mor_of = HashMap::new();
        for &e in &objs {
            for &e2 in &objs {
                for &m in c.hom(e, e2) {
                    if self.proj.morphism(m) == id {
                        mor_of.insert(m, b.morphism(self.diagram.fiber(i).morphism_id(self.lift[m].1), new_of[&e], new_of[&e2]));
                        old.push(m);
                    }
                }
            }
        }
        for &e in &objs {
            b.set_identity(new_of[&e], mor_of[&c.identity(e)]);
        }
        b.build(|g, f| mor_of[&c.compose(old[g], old[f])]).expect("fiber of a valid total category").0
    }
}

/// Whether total morphism `m` is a (co)cartesian lift for the flavor of `e`.
pub fn is_cocartesian(e: &FiberedCat, m: &str) -> Result<bool> {
    let k = e.total.cat.morphism_index(m)?;
    Ok(e.is_transport(k))
}

/// Sections s of the projection (proj∘s = id on the nose), with vertical
/// natural transformations; when `marked`, s must send marked base
/// morphisms to marked total morphisms.
pub fn sections(e: &FiberedCat, marked: bool, limits: &SizeLimits) -> Result<FunctorCategory> {
    let (base, total) = (&e.base.cat, &e.total.cat);
    let mut cands = vec![Vec::new(); base.object_count()];
    for t in 0..total.object_count() {
        cands[e.proj.object(t)].push(t);
    }
    let filter = |f: usize, g: usize| {
        e.proj.morphism(g) == f && (!marked || !e.base.is_marked(f) || e.total.is_marked(g))
    };
    let mut q = FunctorQuery::new(base, total);
    q.object_candidates = Some(cands);
    q.morphism_filter = Some(&filter);
    let found = enumerate_functors(&q, limits.max_objects).map_err(|_| limits.objects_overflow("section category"))?;
    let vertical = |x: usize, a: usize| e.proj.morphism(a) == base.identity(x);
    from_functors(base, total, found, Some(&vertical), limits)
}

pub fn marked_sections(e: &FiberedCat, limits: &SizeLimits) -> Result<FunctorCategory> {
    sections(e, true, limits)
}

/// The strict pullback I ×_J ∫F along a marked functor t: I† → J†.
///
/// A pair (i, (t(i)|x)) is named `(i|x)` and a pair (a, (t(a)|x|f)) is named
/// `(a|x|f)`, so the result can be compared entry by entry with the
/// construction applied to F∘t.
pub fn pullback_fibered(t: &MarkedFunctor, e: &FiberedCat, limits: &SizeLimits) -> Result<FiberedCat> {
    if e.flavor != Flavor::Cocartesian {
        return Err(CatError::InvalidDiagram { reason: "pullback expects a cocartesian construction".into(), witness: vec![] });
    }
    if *t.cod.cat != *e.base.cat {
        return Err(CatError::InvalidFunctor("functor does not land in the base of the fibration".into()));
    }
    let (ic, total) = (&t.dom.cat, &e.total.cat);
    let tf = &t.functor;
    let mut b = CatBuilder::new();
    let mut pairs = Vec::new();
    let mut obj_of = HashMap::new();
    for i in 0..ic.object_count() {
        for x in 0..total.object_count() {
            if e.proj.object(x) == tf.object(i) {
                let fib = e.diagram.fiber(e.point[x].0);
                let k = b.object(format!("({}|{})", ic.object_id(i), fib.object_id(e.point[x].1)));
                obj_of.insert((i, x), k);
                pairs.push((i, x));
            }
        }
    }
    limits.objects("pullback", pairs.len())?;
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for a in 0..ic.morphism_count() {
        for &(i, x) in pairs.iter().filter(|p| p.0 == ic.src(a)) {
            for &m in total.outgoing(x) {
                if e.proj.morphism(m) != tf.morphism(a) {
                    continue;
                }
                if arrows.len() >= limits.max_morphisms {
                    return Err(limits.morphisms_overflow("pullback"));
                }
                let (phi, f) = e.lift[m];
                let fx = e.diagram.fiber(e.point[x].0);
                let fy = e.diagram.fiber(e.diagram.base_cat().tgt(phi));
                let id = format!("({}|{}|{})", ic.morphism_id(a), fx.object_id(e.point[x].1), fy.morphism_id(f));
                let k = b.morphism(id, obj_of[&(i, x)], obj_of[&(ic.tgt(a), total.tgt(m))]);
                index.insert((a, m), k);
                arrows.push((a, m));
            }
        }
    }
    for &(i, x) in &pairs {
        b.set_identity(obj_of[&(i, x)], index[&(ic.identity(i), total.identity(x))]);
    }
    let (cat, re) = b.build(|g, f| {
        let ((a2, m2), (a1, m1)) = (arrows[g], arrows[f]);
        index[&(ic.compose(a2, a1), total.compose(m2, m1))]
    })?;
    let cat = Arc::new(cat);
    let mut point = vec![(0, 0); pairs.len()];
    for (old, &(i, x)) in pairs.iter().enumerate() {
        point[re.objects[old]] = (i, e.point[x].1);
    }
    let mut lift = vec![(0, 0); arrows.len()];
    let mut mask = vec![false; arrows.len()];
    for (old, &(a, m)) in arrows.iter().enumerate() {
        lift[re.morphisms[old]] = (a, e.lift[m].1);
        mask[re.morphisms[old]] = t.dom.is_marked(a) && e.total.is_marked(m);
    }
    let proj = Functor::new_unchecked(
        cat.clone(),
        ic.clone(),
        FunctorMaps { objects: point.iter().map(|p| p.0).collect(), morphisms: lift.iter().map(|l| l.0).collect() },
    );
    let diagram = e.diagram.precompose(t)?;
    Ok(FiberedCat {
        total: MarkedFinCat::with_mask_unchecked(cat, mask),
        base: t.dom.clone(),
        proj,
        flavor: Flavor::Cocartesian,
        point,
        lift,
        diagram,
    })
}

/// Strict equality of marked total categories: same ids, same tables, same
/// marked set.
pub fn same_marked_category(a: &MarkedFinCat, b: &MarkedFinCat) -> bool {
    *a.cat == *b.cat && a.marking == b.marking
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;
    use crate::samples::{point_into_arrow, point_into_pair};

    fn lim() -> SizeLimits {
        SizeLimits::default()
    }

    fn non_identity_ids(c: &FinCat) -> Vec<&str> {
        c.non_identity_morphisms().map(|m| c.morphism_id(m)).collect()
    }

    #[test]
    fn running_example() {
        let e = grothendieck_cocart(&point_into_pair(MarkedFinCat::flat(standard::arrow())), &lim()).unwrap();
        assert_eq!(e.total.cat.objects(), &["(0|x)", "(1|a)", "(1|b)"]);
        assert_eq!(non_identity_ids(&e.total.cat), vec!["(u|x|id_a)"]);
        assert!(e.total.is_flat());
        let e = grothendieck_cocart(&point_into_pair(MarkedFinCat::sharp(standard::arrow())), &lim()).unwrap();
        assert!(e.total.is_marked(e.total.cat.morphism_index("(u|x|id_a)").unwrap()));
        assert!(e.total.validate().is_ok());
    }

    #[test]
    fn cartesian_example() {
        let e = grothendieck_cart(&point_into_pair(MarkedFinCat::sharp(standard::arrow())), &lim()).unwrap();
        let m = e.total.cat.morphism_index("(u|x|id_a)").unwrap();
        let c = &e.total.cat;
        assert_eq!((c.object_id(c.src(m)), c.object_id(c.tgt(m))), ("(1|a)", "(0|x)"));
        assert_eq!(non_identity_ids(c).len(), 1);
        assert!(e.total.is_marked(m));
        e.proj.maps().check(c, &e.base.cat).unwrap();
        // with a non-invertible fiber morphism: (1|b) has no map to (0|x)
        let e = grothendieck_cart(&point_into_arrow(MarkedFinCat::sharp(standard::arrow())), &lim()).unwrap();
        let c = &e.total.cat;
        let marked: Vec<&str> = e.total.marking.indices().filter(|&m| !c.is_identity(m)).map(|m| c.morphism_id(m)).collect();
        assert_eq!(marked, vec!["(u|*|id_a)"]);
        assert_eq!(non_identity_ids(c), vec!["(id_1|b|v)", "(u|*|id_a)"]);
    }

    #[test]
    fn constant_terminal_recovers_the_base() {
        let base = MarkedFinCat::from_ids(standard::chain2(), &["id_0", "id_1", "id_2", "u"]).unwrap();
        let d = CatDiagram::constant(base.clone(), Arc::new(standard::terminal()));
        for e in [grothendieck_cocart(&d, &lim()).unwrap(), grothendieck_cart(&d, &lim()).unwrap()] {
            assert_eq!(e.total.cat.morphism_count(), base.cat.morphism_count());
            assert_eq!(e.total.marking.len(), base.marking.len());
            assert!(e.proj.is_isomorphism());
            assert!((0..e.total.cat.morphism_count()).all(|m| e.is_transport(m)));
            let s = marked_sections(&e, &lim()).unwrap();
            assert_eq!((s.cat.object_count(), s.cat.morphism_count()), (1, 1));
        }
    }

    #[test]
    fn is_cocartesian_by_id() {
        let e = grothendieck_cocart(&point_into_arrow(MarkedFinCat::flat(standard::arrow())), &lim()).unwrap();
        assert!(is_cocartesian(&e, "(u|*|id_a)").unwrap());
        assert!(!is_cocartesian(&e, "(u|*|v)").unwrap());
        assert!(!is_cocartesian(&e, "(id_1|a|v)").unwrap());
        assert!(is_cocartesian(&e, "nope").is_err());
    }

    /// Universal property: m: e → e′ over φ is cocartesian iff for every
    /// n: e → e″ and ψ with ψ∘φ = p(n) there is exactly one k: e′ → e″ over
    /// ψ with k∘m = n.
    fn cocartesian_oracle(e: &FiberedCat, m: usize) -> bool {
        let (c, b) = (&e.total.cat, &e.base.cat);
        let (src, tgt) = (c.src(m), c.tgt(m));
        let phi = e.proj.morphism(m);
        for e2 in 0..c.object_count() {
            for &n in c.hom(src, e2) {
                for &psi in b.hom(b.tgt(phi), e.proj.object(e2)) {
                    if b.compose(psi, phi) != e.proj.morphism(n) {
                        continue;
                    }
                    let count = c
                        .hom(tgt, e2)
                        .iter()
                        .filter(|&&k| e.proj.morphism(k) == psi && c.compose(k, m) == n)
                        .count();
                    if count != 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn samples() -> Vec<CatDiagram> {
        let mut out = vec![
            point_into_pair(MarkedFinCat::sharp(standard::arrow())),
            point_into_arrow(MarkedFinCat::sharp(standard::arrow())),
            CatDiagram::constant(MarkedFinCat::sharp(standard::split_idempotent()), Arc::new(standard::walking_iso())),
        ];
        // the walking arrow included into the walking isomorphism
        let wi = Arc::new(standard::walking_iso());
        let f0 = Arc::new(standard::arrow());
        let to_iso = FunctorMaps { objects: vec![0, 1], morphisms: vec![0, 1, wi.morphism_index("u").unwrap()] };
        out.push(
            CatDiagram::from_categories(
                MarkedFinCat::sharp(standard::arrow()),
                vec![f0.clone(), wi.clone()],
                vec![FunctorMaps::identity(&f0), FunctorMaps::identity(&wi), to_iso],
            )
            .unwrap(),
        );
        out
    }

    #[test]
    fn transport_agrees_with_universal_property() {
        for d in samples() {
            let e = grothendieck_cocart(&d, &lim()).unwrap();
            for m in 0..e.total.cat.morphism_count() {
                assert_eq!(e.is_transport(m), cocartesian_oracle(&e, m), "{}", e.total.cat.morphism_id(m));
            }
        }
    }

    #[test]
    fn fibers_are_reconstructed() {
        for d in samples() {
            for e in [grothendieck_cocart(&d, &lim()).unwrap(), grothendieck_cart(&d, &lim()).unwrap()] {
                for i in 0..d.base_cat().object_count() {
                    let f = e.fiber(i);
                    assert_eq!(&f, &**d.fiber(i));
                }
            }
        }
    }

    #[test]
    fn marked_sections_examples() {
        let d = point_into_arrow(MarkedFinCat::flat(standard::arrow()));
        let e = grothendieck_cocart(&d, &lim()).unwrap();
        let s = marked_sections(&e, &lim()).unwrap();
        assert_eq!(s.cat.object_count(), 2);
        assert_eq!(s.cat.non_identity_morphisms().count(), 1);
        let all = sections(&e, false, &lim()).unwrap();
        assert_eq!(all.cat, s.cat);
        let d = point_into_arrow(MarkedFinCat::sharp(standard::arrow()));
        let e = grothendieck_cocart(&d, &lim()).unwrap();
        let s = marked_sections(&e, &lim()).unwrap();
        assert_eq!((s.cat.object_count(), s.cat.morphism_count()), (1, 1));
    }

    #[test]
    fn pullback_examples() {
        let d = point_into_arrow(MarkedFinCat::sharp(standard::arrow()));
        let e = grothendieck_cocart(&d, &lim()).unwrap();
        let id = MarkedFunctor::new(Functor::identity(d.base_cat().clone()), d.base().clone(), d.base().clone()).unwrap();
        let p = pullback_fibered(&id, &e, &lim()).unwrap();
        assert!(same_marked_category(&p.total, &e.total));
        // picking the object 1
        let pick = Functor::from_ids(
            Arc::new(standard::terminal()),
            d.base_cat().clone(),
            &[("*".to_string(), "1".to_string())].into(),
            &Default::default(),
        )
        .unwrap();
        let t = MarkedFunctor::new(pick, MarkedFinCat::flat(standard::terminal()), d.base().clone()).unwrap();
        let p = pullback_fibered(&t, &e, &lim()).unwrap();
        assert_eq!(p.total.cat.object_count(), 2);
        assert!(p.total.is_flat());
        // [1]♭ → [1]♯
        let flat = MarkedFinCat::flat(standard::arrow());
        let t = MarkedFunctor::new(Functor::identity(d.base_cat().clone()), flat.clone(), d.base().clone()).unwrap();
        let p = pullback_fibered(&t, &e, &lim()).unwrap();
        assert_eq!(*p.total.cat, *e.total.cat);
        assert!(p.total.marking.is_subset(&e.total.marking) && p.total.marking != e.total.marking);
        let direct = grothendieck_cocart(&d.precompose(&t).unwrap(), &lim()).unwrap();
        assert!(same_marked_category(&p.total, &direct.total));
    }
}
