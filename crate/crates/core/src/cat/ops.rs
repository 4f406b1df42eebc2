use std::sync::Arc;

use super::{CatBuilder, FinCat, Functor, FunctorMaps, MarkedFinCat};
use crate::error::Result;

/// The opposite category. Ids are kept, so `opposite(opposite(c)) == c`.
pub fn opposite(c: &FinCat) -> FinCat {
    let mut b = CatBuilder::new();
    for o in c.objects() {
        b.object(o.clone());
    }
    for f in 0..c.morphism_count() {
        b.morphism(c.morphism_id(f), c.tgt(f), c.src(f));
    }
    for x in 0..c.object_count() {
        b.set_identity(x, c.identity(x));
    }
    // g ∘op f = f ∘ g
    let (cat, _) = b.build(|g, f| c.compose(f, g)).expect("opposite of a valid category");
    cat
}

pub fn opposite_marked(c: &MarkedFinCat) -> MarkedFinCat {
    let cat = Arc::new(opposite(&c.cat));
    MarkedFinCat::with_mask_unchecked(cat, c.marking.mask().to_vec())
}

pub(crate) fn pair_id(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Cartesian product with ids `(x,y)`; morphism `(f,g)` is marked iff both
/// components are marked.
pub fn product_marked(c: &MarkedFinCat, d: &MarkedFinCat) -> MarkedFinCat {
    let (cat, mask) = product_parts(&c.cat, &d.cat, Some((c, d)));
    MarkedFinCat::with_mask_unchecked(Arc::new(cat), mask)
}

pub fn product(c: &FinCat, d: &FinCat) -> FinCat {
    product_parts(c, d, None).0
}

fn product_parts(c: &FinCat, d: &FinCat, marks: Option<(&MarkedFinCat, &MarkedFinCat)>) -> (FinCat, Vec<bool>) {
    let (nc, nd) = (c.object_count(), d.object_count());
    let (mc, md) = (c.morphism_count(), d.morphism_count());
    let mut b = CatBuilder::new();
    for x in 0..nc {
        for y in 0..nd {
            b.object(pair_id(c.object_id(x), d.object_id(y)));
        }
    }
    let mut mask_old = Vec::with_capacity(mc * md);
    for f in 0..mc {
        for g in 0..md {
            b.morphism(pair_id(c.morphism_id(f), d.morphism_id(g)), c.src(f) * nd + d.src(g), c.tgt(f) * nd + d.tgt(g));
            mask_old.push(marks.is_some_and(|(cm, dm)| cm.is_marked(f) && dm.is_marked(g)));
        }
    }
    for x in 0..nc {
        for y in 0..nd {
            b.set_identity(x * nd + y, c.identity(x) * md + d.identity(y));
        }
    }
    let (cat, re) = b
        .build(|p, q| c.compose(p / md, q / md) * md + d.compose(p % md, q % md))
        .expect("product of valid categories");
    let mut mask = vec![false; cat.morphism_count()];
    for (old, &new) in re.morphisms.iter().enumerate() {
        mask[new] = mask_old[old];
    }
    (cat, mask)
}

/// The maps of f × g between products built by [`product`] or
/// [`product_marked`], given f: c1 → c2 and g: d1 → d2.
pub fn product_functor_maps(
    (c1, d1, p1): (&FinCat, &FinCat, &FinCat),
    (c2, d2, p2): (&FinCat, &FinCat, &FinCat),
    f: &FunctorMaps,
    g: &FunctorMaps,
) -> FunctorMaps {
    let mut objects = vec![0; p1.object_count()];
    for x in 0..c1.object_count() {
        for y in 0..d1.object_count() {
            let k = p1.object_index(&pair_id(c1.object_id(x), d1.object_id(y))).expect("product object");
            objects[k] = p2.object_index(&pair_id(c2.object_id(f.objects[x]), d2.object_id(g.objects[y]))).expect("product object");
        }
    }
    let mut morphisms = vec![0; p1.morphism_count()];
    for a in 0..c1.morphism_count() {
        for b in 0..d1.morphism_count() {
            let k = p1.morphism_index(&pair_id(c1.morphism_id(a), d1.morphism_id(b))).expect("product morphism");
            let id = pair_id(c2.morphism_id(f.morphisms[a]), d2.morphism_id(g.morphisms[b]));
            morphisms[k] = p2.morphism_index(&id).expect("product morphism");
        }
    }
    FunctorMaps { objects, morphisms }
}

/// Full subcategory on the given objects, keeping ids, plus its inclusion.
pub fn full_subcategory(c: &Arc<FinCat>, keep: &[usize]) -> (Arc<FinCat>, Functor) {
    let mut b = CatBuilder::new();
    let mut new_of = vec![usize::MAX; c.object_count()];
    let mut objs: Vec<usize> = keep.to_vec();
    objs.sort_unstable();
    objs.dedup();
    for &x in &objs {
        new_of[x] = b.object(c.object_id(x));
    }
    let mut old_mor = Vec::new();
    let mut mor_of = std::collections::HashMap::new();
    for &x in &objs {
        for &y in &objs {
            for &f in c.hom(x, y) {
                let k = b.morphism(c.morphism_id(f), new_of[x], new_of[y]);
                old_mor.push(f);
                mor_of.insert(f, k);
            }
        }
    }
    for &x in &objs {
        b.identity[new_of[x]] = Some(mor_of[&c.identity(x)]);
    }
    let (sub, re) = b
        .build(|g, f| mor_of[&c.compose(old_mor[g], old_mor[f])])
        .expect("full subcategory of a valid category");
    let sub = Arc::new(sub);
    let mut objects = vec![0; sub.object_count()];
    for &x in &objs {
        objects[re.objects[new_of[x]]] = x;
    }
    let mut morphisms = vec![0; sub.morphism_count()];
    for (k, &f) in old_mor.iter().enumerate() {
        morphisms[re.morphisms[k]] = f;
    }
    let incl = Functor::new_unchecked(sub.clone(), c.clone(), FunctorMaps { objects, morphisms });
    (sub, incl)
}

/// The wide subcategory on the marked morphisms.
pub fn marked_subcategory(c: &MarkedFinCat) -> Result<FinCat> {
    let mut b = CatBuilder::new();
    for o in c.cat.objects() {
        b.object(o.clone());
    }
    let kept: Vec<usize> = c.marking.indices().collect();
    let mut new_of = std::collections::HashMap::new();
    for &f in &kept {
        new_of.insert(f, b.morphism(c.cat.morphism_id(f), c.cat.src(f), c.cat.tgt(f)));
    }
    for x in 0..c.cat.object_count() {
        b.set_identity(x, new_of[&c.cat.identity(x)]);
    }
    let (cat, _) = b.build(|g, f| new_of[&c.cat.compose(kept[g], kept[f])])?;
    Ok(cat)
}
