//! Limits of diagrams of marked functor categories, as they arise from end
//! formulas over twisted arrow categories.

use std::sync::Arc;

use super::family::{assemble, search, FamilyProblem};
use super::strict::{cat_limit, family_id};
use crate::bounds::SizeLimits;
use crate::cat::{opposite, FinCat, FunctorMaps, MarkedFinCat};
use crate::constructions::{marked_functor_category, FunctorCategory};
use crate::diagram::CatDiagram;
use crate::error::Result;
use crate::search::{enumerate_functors, enumerate_nat, FunctorQuery};

/// A diagram X ↦ post∘X∘pre of marked functor categories Fun†(A_f, B_f),
/// contravariant in the index category: a morphism k: f → f′ acts
/// Fun†(A_f′, B_f′) → Fun†(A_f, B_f) through pre_k: A_f → A_f′ and
/// post_k: B_f′ → B_f.
#[derive(Debug, Clone)]
pub struct EndDiagram {
    pub index: Arc<FinCat>,
    pub terms: Vec<(MarkedFinCat, MarkedFinCat)>,
    pub pre: Vec<FunctorMaps>,
    pub post: Vec<FunctorMaps>,
}

/// The limit over the opposite of the index category.
#[derive(Debug, Clone)]
pub struct EndLimit {
    pub cat: Arc<FinCat>,
    /// The functor X_f of each object family, per index object.
    pub objects: Vec<Vec<FunctorMaps>>,
    /// Components of each morphism family, per index object.
    pub morphisms: Vec<Vec<Vec<usize>>>,
}

impl EndDiagram {
    fn act(&self, k: usize, x: &FunctorMaps) -> FunctorMaps {
        self.post[k].after(&x.after(&self.pre[k]))
    }

    fn act_components(&self, k: usize, a: &[usize]) -> Vec<usize> {
        self.pre[k].objects.iter().map(|&y| self.post[k].morphisms[a[y]]).collect()
    }

    fn term_id(&self, f: usize, x: &FunctorMaps) -> String {
        x.canonical_id(&self.terms[f].0.cat, &self.terms[f].1.cat)
    }
}

struct Objects<'a> {
    d: &'a EndDiagram,
    cons: Vec<(usize, usize)>,
    via: Vec<usize>,
    limits: &'a SizeLimits,
}

impl FamilyProblem for Objects<'_> {
    type V = FunctorMaps;
    fn nodes(&self) -> usize {
        self.d.index.object_count()
    }
    fn constraints(&self) -> &[(usize, usize)] {
        &self.cons
    }
    fn force(&self, k: usize, v: &FunctorMaps) -> FunctorMaps {
        self.d.act(self.via[k], v)
    }
    fn candidates(&self, node: usize, known: &[(usize, &FunctorMaps)]) -> Result<Vec<FunctorMaps>> {
        let (a, b) = &self.d.terms[node];
        let mut objs: Vec<Option<Vec<bool>>> = vec![None; a.cat.object_count()];
        let mut mors: Vec<Option<Vec<bool>>> = vec![None; a.cat.morphism_count()];
        for &(k, w) in known {
            let (pre, post) = (&self.d.pre[self.via[k]], &self.d.post[self.via[k]]);
            for (y, &img) in w.objects.iter().enumerate() {
                let slot = objs[pre.objects[y]].get_or_insert_with(|| vec![true; b.cat.object_count()]);
                for (z, ok) in slot.iter_mut().enumerate() {
                    *ok &= post.objects[z] == img;
                }
            }
            for (m, &img) in w.morphisms.iter().enumerate() {
                let slot = mors[pre.morphisms[m]].get_or_insert_with(|| vec![true; b.cat.morphism_count()]);
                for (g, ok) in slot.iter_mut().enumerate() {
                    *ok &= post.morphisms[g] == img;
                }
            }
        }
        let cands = objs
            .iter()
            .map(|o| (0..b.cat.object_count()).filter(|&z| o.as_ref().is_none_or(|v| v[z])).collect())
            .collect();
        let filter = |f: usize, g: usize| {
            (!a.is_marked(f) || b.is_marked(g)) && mors[f].as_ref().is_none_or(|v| v[g])
        };
        let mut q = FunctorQuery::new(&a.cat, &b.cat);
        q.object_candidates = Some(cands);
        q.morphism_filter = Some(&filter);
        enumerate_functors(&q, self.limits.max_enumeration)
            .map_err(|_| self.limits.enumeration_overflow("functor category term"))
    }
}

struct Transformations<'a> {
    d: &'a EndDiagram,
    cons: &'a [(usize, usize)],
    via: &'a [usize],
    src: &'a [FunctorMaps],
    tgt: &'a [FunctorMaps],
    limits: &'a SizeLimits,
}

impl FamilyProblem for Transformations<'_> {
    type V = Vec<usize>;
    fn nodes(&self) -> usize {
        self.d.index.object_count()
    }
    fn constraints(&self) -> &[(usize, usize)] {
        self.cons
    }
    fn force(&self, k: usize, v: &Vec<usize>) -> Vec<usize> {
        self.d.act_components(self.via[k], v)
    }
    fn candidates(&self, node: usize, known: &[(usize, &Vec<usize>)]) -> Result<Vec<Vec<usize>>> {
        let (a, b) = &self.d.terms[node];
        let mut allowed: Vec<Option<Vec<bool>>> = vec![None; a.cat.object_count()];
        for &(k, w) in known {
            let (pre, post) = (&self.d.pre[self.via[k]], &self.d.post[self.via[k]]);
            for (y, &img) in w.iter().enumerate() {
                let slot = allowed[pre.objects[y]].get_or_insert_with(|| vec![true; b.cat.morphism_count()]);
                for (g, ok) in slot.iter_mut().enumerate() {
                    *ok &= post.morphisms[g] == img;
                }
            }
        }
        let filter = |x: usize, g: usize| allowed[x].as_ref().is_none_or(|v| v[g]);
        enumerate_nat(&a.cat, &b.cat, &self.src[node], &self.tgt[node], Some(&filter), self.limits.max_enumeration)
            .map_err(|_| self.limits.enumeration_overflow("natural transformations in a term"))
    }
}

/// Computes the limit by propagating forced components, without building
/// the functor categories of the terms.
pub fn end_limit(d: &EndDiagram, limits: &SizeLimits) -> Result<EndLimit> {
    let idx = &d.index;
    let n = idx.object_count();
    let mut cons = Vec::new();
    let mut via = Vec::new();
    for k in idx.non_identity_morphisms() {
        cons.push((idx.src(k), idx.tgt(k)));
        via.push(k);
    }
    let op = Objects { d, cons, via, limits };
    let objects = search(&op, limits.max_objects, || limits.objects_overflow("end limit"))?;
    let obj_term_ids: Vec<Vec<String>> =
        objects.iter().map(|x| (0..n).map(|f| d.term_id(f, &x[f])).collect()).collect();
    let mut mors = Vec::new();
    for (p, x) in objects.iter().enumerate() {
        for (q, y) in objects.iter().enumerate() {
            let tp = Transformations { d, cons: &op.cons, via: &op.via, src: x, tgt: y, limits };
            let left = limits.max_morphisms.saturating_sub(mors.len());
            for fam in search(&tp, left, || limits.morphisms_overflow("end limit"))? {
                let id = family_id((0..n).map(|f| {
                    let names: Vec<&str> = fam[f].iter().map(|&g| d.terms[f].1.cat.morphism_id(g)).collect();
                    format!("{}=>{}[{}]", obj_term_ids[p][f], obj_term_ids[q][f], names.join(","))
                }));
                mors.push((p, q, fam, id));
            }
        }
    }
    let obj_ids = obj_term_ids.iter().map(|ids| family_id(ids.iter())).collect();
    let (cat, re, keys) = assemble(
        obj_ids,
        mors,
        |p| (0..n).map(|f| objects[p][f].objects.iter().map(|&z| d.terms[f].1.cat.identity(z)).collect()).collect(),
        |g: &Vec<Vec<usize>>, h: &Vec<Vec<usize>>| {
            (0..n)
                .map(|f| g[f].iter().zip(&h[f]).map(|(&x, &y)| d.terms[f].1.cat.compose(x, y)).collect())
                .collect()
        },
    )?;
    let mut objs = vec![Vec::new(); objects.len()];
    for (old, x) in objects.into_iter().enumerate() {
        objs[re.objects[old]] = x;
    }
    Ok(EndLimit { cat: Arc::new(cat), objects: objs, morphisms: keys })
}

/// The same limit computed the long way: every term becomes an explicit
/// marked functor category and the strict limit is taken over the opposite
/// of the index. Ids agree with [`end_limit`].
pub fn explicit_end_limit(d: &EndDiagram, limits: &SizeLimits) -> Result<Arc<FinCat>> {
    let idx = &d.index;
    let cats: Vec<FunctorCategory> =
        d.terms.iter().map(|(a, b)| marked_functor_category(a, b, limits)).collect::<Result<_>>()?;
    let transitions = (0..idx.morphism_count())
        .map(|k| {
            let (s, t) = (&cats[idx.tgt(k)], &cats[idx.src(k)]);
            let objects: Vec<usize> =
                s.functors.iter().map(|x| t.object_of(&d.act(k, x)).expect("image is a marked functor")).collect();
            let morphisms = (0..s.cat.morphism_count())
                .map(|m| {
                    let comps = d.act_components(k, &s.components[m]);
                    let (p, q) = (objects[s.cat.src(m)], objects[s.cat.tgt(m)]);
                    *t.cat.hom(p, q).iter().find(|&&g| t.components[g] == comps).expect("image is natural")
                })
                .collect();
            FunctorMaps { objects, morphisms }
        })
        .collect();
    let base = MarkedFinCat::flat(opposite(idx));
    let fibers = cats.iter().map(|c| c.cat.clone()).collect();
    let diagram = CatDiagram::from_categories(base, fibers, transitions)?;
    Ok(cat_limit(&diagram, limits)?.cat.cat)
}
