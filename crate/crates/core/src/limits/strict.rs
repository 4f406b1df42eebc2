use std::collections::HashMap;
use std::sync::Arc;

use super::family::{assemble, search, FamilyProblem};
use crate::bounds::SizeLimits;
use crate::cat::{CatBuilder, FinCat, Functor, FunctorMaps, MarkedFinCat};
use crate::diagram::CatDiagram;
use crate::error::Result;

/// A strict limit together with its projections to the values of the diagram.
#[derive(Debug, Clone)]
pub struct LimitResult {
    /// Marked by the componentwise criterion: a family of morphisms is
    /// marked iff each component is.
    pub cat: MarkedFinCat,
    /// Object families, one entry per base object.
    pub objects: Vec<Vec<usize>>,
    /// Morphism families, one entry per base object.
    pub morphisms: Vec<Vec<usize>>,
    pub projections: Vec<Functor>,
}

pub(crate) fn family_id(ids: impl Iterator<Item = impl AsRef<str>>) -> String {
    let mut s = String::from("[");
    for (k, id) in ids.enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(id.as_ref());
    }
    s.push(']');
    s
}

struct Objects<'a> {
    d: &'a CatDiagram,
    cons: Vec<(usize, usize)>,
    via: Vec<usize>,
}

impl FamilyProblem for Objects<'_> {
    type V = usize;
    fn nodes(&self) -> usize {
        self.d.base_cat().object_count()
    }
    fn constraints(&self) -> &[(usize, usize)] {
        &self.cons
    }
    fn force(&self, k: usize, v: &usize) -> usize {
        self.d.transition(self.via[k]).objects[*v]
    }
    fn candidates(&self, node: usize, known: &[(usize, &usize)]) -> Result<Vec<usize>> {
        Ok((0..self.d.fiber(node).object_count()).filter(|v| known.iter().all(|&(k, w)| self.force(k, v) == *w)).collect())
    }
}

struct Morphisms<'a> {
    d: &'a CatDiagram,
    cons: &'a [(usize, usize)],
    via: &'a [usize],
    src: &'a [usize],
    tgt: &'a [usize],
}

impl FamilyProblem for Morphisms<'_> {
    type V = usize;
    fn nodes(&self) -> usize {
        self.d.base_cat().object_count()
    }
    fn constraints(&self) -> &[(usize, usize)] {
        self.cons
    }
    fn force(&self, k: usize, v: &usize) -> usize {
        self.d.transition(self.via[k]).morphisms[*v]
    }
    fn candidates(&self, node: usize, known: &[(usize, &usize)]) -> Result<Vec<usize>> {
        let hom = self.d.fiber(node).hom(self.src[node], self.tgt[node]);
        Ok(hom.iter().copied().filter(|v| known.iter().all(|&(k, w)| self.force(k, v) == *w)).collect())
    }
}

/// The strict limit of a diagram of categories: compatible families of
/// objects and of morphisms, composed componentwise.
pub fn cat_limit(d: &CatDiagram, limits: &SizeLimits) -> Result<LimitResult> {
    let base = d.base_cat();
    let n = base.object_count();
    let mut cons = Vec::new();
    let mut via = Vec::new();
    for m in base.non_identity_morphisms() {
        cons.push((base.tgt(m), base.src(m)));
        via.push(m);
    }
    let op = Objects { d, cons, via };
    let objects = search(&op, limits.max_objects, || limits.objects_overflow("limit"))?;
    let mut mors: Vec<(usize, usize, Vec<usize>, String)> = Vec::new();
    for (p, x) in objects.iter().enumerate() {
        for (q, y) in objects.iter().enumerate() {
            let mp = Morphisms { d, cons: &op.cons, via: &op.via, src: x, tgt: y };
            let left = limits.max_morphisms.saturating_sub(mors.len());
            for fam in search(&mp, left, || limits.morphisms_overflow("limit"))? {
                let id = family_id((0..n).map(|i| d.fiber(i).morphism_id(fam[i])));
                mors.push((p, q, fam, id));
            }
        }
    }
    let obj_ids: Vec<String> = objects.iter().map(|x| family_id((0..n).map(|i| d.fiber(i).object_id(x[i])))).collect();
    let (cat, re, keys) = assemble(
        obj_ids,
        mors,
        |p| (0..n).map(|i| d.fiber(i).identity(objects[p][i])).collect(),
        |g, f| (0..n).map(|i| d.fiber(i).compose(g[i], f[i])).collect(),
    )?;
    let mut objs = vec![Vec::new(); objects.len()];
    for (old, x) in objects.into_iter().enumerate() {
        objs[re.objects[old]] = x;
    }
    let cat = Arc::new(cat);
    let mask = keys.iter().map(|fam| (0..n).all(|i| d.marked_fiber(i).is_marked(fam[i]))).collect();
    let projections = (0..n)
        .map(|i| {
            Functor::new_unchecked(
                cat.clone(),
                d.fiber(i).clone(),
                FunctorMaps { objects: objs.iter().map(|x| x[i]).collect(), morphisms: keys.iter().map(|f| f[i]).collect() },
            )
        })
        .collect();
    Ok(LimitResult { cat: MarkedFinCat::with_mask_unchecked(cat, mask), objects: objs, morphisms: keys, projections })
}

/// Limit of a diagram of marked categories; marked iff every projection marks it.
pub fn marked_cat_limit(d: &CatDiagram, limits: &SizeLimits) -> Result<MarkedFinCat> {
    Ok(cat_limit(d, limits)?.cat)
}

/// Objects (a, c, β: g(a) ≅ h(c)); morphisms (p, q) with β′∘g(p) = h(q)∘β.
/// Ids are `(a|c|β)` and `(p|q)@(a|c|β)`, naming the source.
pub fn iso_comma(g: &Functor, h: &Functor, limits: &SizeLimits) -> Result<FinCat> {
    let (a, c, b) = (g.dom(), h.dom(), g.cod());
    let mut objs = Vec::new();
    for x in 0..a.object_count() {
        for y in 0..c.object_count() {
            for &beta in b.hom(g.object(x), h.object(y)) {
                if b.is_iso(beta) {
                    objs.push((x, y, beta));
                }
            }
        }
    }
    limits.objects("iso comma", objs.len())?;
    let mut bld = CatBuilder::new();
    let names: Vec<String> =
        objs.iter().map(|&(x, y, beta)| format!("({}|{}|{})", a.object_id(x), c.object_id(y), b.morphism_id(beta))).collect();
    let mut obj_of = HashMap::new();
    for (k, name) in names.iter().enumerate() {
        bld.object(name.clone());
        obj_of.insert(objs[k], k);
    }
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for (s, &(x, y, beta)) in objs.iter().enumerate() {
        for (t, &(x2, y2, beta2)) in objs.iter().enumerate() {
            for &p in a.hom(x, x2) {
                for &q in c.hom(y, y2) {
                    if b.compose(beta2, g.morphism(p)) == b.compose(h.morphism(q), beta) {
                        if arrows.len() >= limits.max_morphisms {
                            return Err(limits.morphisms_overflow("iso comma"));
                        }
                        let id = format!("({}|{})@{}", a.morphism_id(p), c.morphism_id(q), names[s]);
                        let k = bld.morphism(id, s, t);
                        index.insert((s, t, p, q), k);
                        arrows.push((s, t, p, q));
                    }
                }
            }
        }
    }
    for (s, &(x, y, _)) in objs.iter().enumerate() {
        bld.set_identity(s, index[&(s, s, a.identity(x), c.identity(y))]);
    }
    let (cat, _) = bld.build(|gg, ff| {
        let (s, _, p1, q1) = arrows[ff];
        let (_, t, p2, q2) = arrows[gg];
        index[&(s, t, a.compose(p2, p1), c.compose(q2, q1))]
    })?;
    Ok(cat)
}
