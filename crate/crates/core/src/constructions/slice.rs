use std::collections::HashMap;
use std::sync::Arc;

use crate::bounds::SizeLimits;
use crate::cat::{opposite, CatBuilder, Functor, FunctorMaps, MarkedFinCat};
use crate::diagram::CatDiagram;
use crate::error::Result;

/// A marked slice I_{/i} or coslice I_{i/} with its forgetful functor.
///
/// Objects are named by their leg in I, morphisms `h:f->g` by the underlying
/// morphism h and its endpoints.
#[derive(Debug, Clone)]
pub struct SliceCat {
    pub cat: MarkedFinCat,
    pub forget: Functor,
    /// Leg in I of each object.
    pub leg: Vec<usize>,
}

impl SliceCat {
    /// Object whose leg is the base morphism `f`, if any.
    pub fn object_of_leg(&self, f: usize) -> Option<usize> {
        self.leg.iter().position(|&l| l == f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Over,
    Under,
}

/// I_{/i}: objects f: x → i, morphisms h: f → g with g∘h = f.
pub fn slice(base: &MarkedFinCat, i: usize) -> Result<SliceCat> {
    build(base, i, Side::Over)
}

/// I_{i/}: objects f: i → x, morphisms h: f → g with h∘f = g.
pub fn coslice(base: &MarkedFinCat, i: usize) -> Result<SliceCat> {
    build(base, i, Side::Under)
}

fn build(base: &MarkedFinCat, i: usize, side: Side) -> Result<SliceCat> {
    let c = &base.cat;
    if i >= c.object_count() {
        return Err(crate::CatError::UnknownObject(format!("#{i}")));
    }
    let legs: Vec<usize> = match side {
        Side::Over => c.incoming(i).to_vec(),
        Side::Under => c.outgoing(i).to_vec(),
    };
    // the other endpoint of each leg
    let end = |f: usize| if side == Side::Over { c.src(f) } else { c.tgt(f) };
    let mut b = CatBuilder::new();
    for &f in &legs {
        b.object(c.morphism_id(f));
    }
    let mut arrows: Vec<usize> = Vec::new();
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (p, &f) in legs.iter().enumerate() {
        for (q, &g) in legs.iter().enumerate() {
            for &h in c.hom(end(f), end(g)) {
                let commutes = match side {
                    Side::Over => c.compose(g, h) == f,
                    Side::Under => c.compose(h, f) == g,
                };
                if commutes {
                    let id = format!("{}:{}->{}", c.morphism_id(h), c.morphism_id(f), c.morphism_id(g));
                    let k = b.morphism(id, p, q);
                    index.insert((p, q, h), k);
                    arrows.push(h);
                }
            }
        }
    }
    for (p, &f) in legs.iter().enumerate() {
        b.set_identity(p, index[&(p, p, c.identity(end(f)))]);
    }
    let ends: Vec<(usize, usize)> = {
        let mut v = vec![(0, 0); arrows.len()];
        for (&(p, q, _), &k) in &index {
            v[k] = (p, q);
        }
        v
    };
    let (cat, re) = b.build(|g, f| index[&(ends[f].0, ends[g].1, c.compose(arrows[g], arrows[f]))])?;
    let cat = Arc::new(cat);
    let mut leg = vec![0; legs.len()];
    for (p, &f) in legs.iter().enumerate() {
        leg[re.objects[p]] = f;
    }
    let mut under = vec![0; arrows.len()];
    for (k, &h) in arrows.iter().enumerate() {
        under[re.morphisms[k]] = h;
    }
    let mask: Vec<bool> = under.iter().map(|&h| base.is_marked(h)).collect();
    let forget = Functor::new_unchecked(
        cat.clone(),
        c.clone(),
        FunctorMaps { objects: leg.iter().map(|&f| end(f)).collect(), morphisms: under },
    );
    Ok(SliceCat { cat: MarkedFinCat::with_mask_unchecked(cat, mask), forget, leg })
}

/// i ↦ I_{/i} over I; a: i → i′ acts by postcomposition f ↦ a∘f.
pub fn slice_diagram(base: &MarkedFinCat, limits: &SizeLimits) -> Result<CatDiagram> {
    let c = &base.cat;
    let slices = (0..c.object_count()).map(|i| slice(base, i)).collect::<Result<Vec<_>>>()?;
    check_sizes(&slices, limits)?;
    let transitions = (0..c.morphism_count())
        .map(|a| {
            let (s, t) = (&slices[c.src(a)], &slices[c.tgt(a)]);
            move_along(s, t, |f| c.compose(a, f))
        })
        .collect();
    Ok(CatDiagram::new_unchecked(base.clone(), slices.into_iter().map(|s| s.cat).collect(), transitions))
}

/// i ↦ I_{i/} over I^op; a: i → i′ of I acts I_{i′/} → I_{i/} by f ↦ f∘a.
pub fn coslice_diagram(base: &MarkedFinCat, limits: &SizeLimits) -> Result<CatDiagram> {
    let c = &base.cat;
    let cosl = (0..c.object_count()).map(|i| coslice(base, i)).collect::<Result<Vec<_>>>()?;
    check_sizes(&cosl, limits)?;
    let transitions = (0..c.morphism_count())
        .map(|a| {
            let (s, t) = (&cosl[c.tgt(a)], &cosl[c.src(a)]);
            move_along(s, t, |f| c.compose(f, a))
        })
        .collect();
    let op = MarkedFinCat::with_mask_unchecked(Arc::new(opposite(c)), base.marking.mask().to_vec());
    Ok(CatDiagram::new_unchecked(op, cosl.into_iter().map(|s| s.cat).collect(), transitions))
}

fn check_sizes(s: &[SliceCat], limits: &SizeLimits) -> Result<()> {
    for x in s {
        limits.objects("slice", x.cat.cat.object_count())?;
        limits.morphisms("slice", x.cat.cat.morphism_count())?;
    }
    Ok(())
}

/// The functor between (co)slices that changes legs by `leg_map` and keeps
/// the underlying morphism.
fn move_along(s: &SliceCat, t: &SliceCat, leg_map: impl Fn(usize) -> usize) -> FunctorMaps {
    let objects: Vec<usize> = s.leg.iter().map(|&f| t.object_of_leg(leg_map(f)).expect("leg exists")).collect();
    let (sc, tc) = (&s.cat.cat, &t.cat.cat);
    let morphisms = (0..sc.morphism_count())
        .map(|m| {
            let h = s.forget.morphism(m);
            let (p, q) = (objects[sc.src(m)], objects[sc.tgt(m)]);
            *tc.hom(p, q).iter().find(|&&k| t.forget.morphism(k) == h).expect("morphism exists")
        })
        .collect();
    FunctorMaps { objects, morphisms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{standard, FinCat};

    fn ids(c: &FinCat) -> Vec<&str> {
        c.morphisms().iter().map(|m| m.id.as_str()).collect()
    }

    #[test]
    fn coslice_examples() {
        let flat = MarkedFinCat::flat(standard::arrow());
        let s = coslice(&flat, 1).unwrap();
        assert_eq!(s.cat.cat.objects(), &["id_1"]);
        let marked = MarkedFinCat::from_ids(standard::arrow(), &["id_0", "id_1", "u"]).unwrap();
        let s = coslice(&marked, 0).unwrap();
        assert_eq!(s.cat.cat.objects(), &["id_0", "u"]);
        let h = s.cat.cat.morphism_index("u:id_0->u").unwrap();
        assert!(s.cat.is_marked(h));
        assert_eq!(s.cat.marking.len(), 3);
        assert!(s.cat.validate().is_ok());
        let s = slice(&flat, 0).unwrap();
        assert_eq!(s.cat.cat.objects(), &["id_0"]);
    }

    #[test]
    fn slice_of_chain_has_terminal_identity() {
        let c = MarkedFinCat::flat(standard::chain2());
        let s = slice(&c, 2).unwrap();
        assert_eq!(s.cat.cat.objects(), &["id_2", "v", "vu"]);
        assert_eq!(ids(&s.cat.cat), vec!["id_0:vu->vu", "id_1:v->v", "id_2:id_2->id_2", "u:vu->v", "v:v->id_2", "vu:vu->id_2"]);
        assert!(s.cat.cat.check_axioms().violations.is_empty());
    }

    #[test]
    fn diagrams_act_by_composition() {
        let flat = MarkedFinCat::flat(standard::arrow());
        let d = coslice_diagram(&flat, &SizeLimits::default()).unwrap();
        let u = d.base_cat().morphism_index("u").unwrap();
        // I_{1/} → I_{0/}
        let t = d.transition(u);
        let (s, tt) = (d.fiber(1), d.fiber(0));
        assert_eq!(tt.object_id(t.objects[s.object_index("id_1").unwrap()]), "u");
        let d = slice_diagram(&flat, &SizeLimits::default()).unwrap();
        let t = d.transition(u);
        assert_eq!(d.fiber(1).object_id(t.objects[d.fiber(0).object_index("id_0").unwrap()]), "u");
        let d = coslice_diagram(&MarkedFinCat::flat(standard::terminal()), &SizeLimits::default()).unwrap();
        assert_eq!(d.fiber(0).object_count(), 1);
    }

    #[test]
    fn diagrams_are_functorial() {
        for c in [standard::chain2(), standard::split_idempotent(), standard::commutative_square(), standard::left_zero_monoid()] {
            let m = MarkedFinCat::sharp(c);
            slice_diagram(&m, &SizeLimits::default()).unwrap().validate().unwrap();
            coslice_diagram(&m, &SizeLimits::default()).unwrap().validate().unwrap();
        }
    }
}
