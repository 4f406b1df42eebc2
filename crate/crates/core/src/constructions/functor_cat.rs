use std::collections::HashMap;
use std::sync::Arc;

use crate::bounds::SizeLimits;
use crate::cat::{CatBuilder, FinCat, Functor, FunctorMaps, MarkedFinCat};
use crate::error::Result;
use crate::search::{enumerate_functors, enumerate_nat, FunctorQuery};

/// Fun(C, D) or Fun†(C†, D†) as an explicit finite category.
///
/// Object ids are the canonical ids of the functors; a natural
/// transformation α: F ⇒ G is named `F=>G[α_x,...]`.
#[derive(Debug, Clone)]
pub struct FunctorCategory {
    pub cat: Arc<FinCat>,
    pub dom: Arc<FinCat>,
    pub cod: Arc<FinCat>,
    /// The functor at each object.
    pub functors: Vec<FunctorMaps>,
    /// Components of each morphism, indexed by objects of `dom`.
    pub components: Vec<Vec<usize>>,
}

impl FunctorCategory {
    pub fn functor(&self, k: usize) -> Functor {
        Functor::new_unchecked(self.dom.clone(), self.cod.clone(), self.functors[k].clone())
    }

    /// Object of the functor category carrying the given maps.
    pub fn object_of(&self, maps: &FunctorMaps) -> Option<usize> {
        self.cat.object_index(&maps.canonical_id(&self.dom, &self.cod)).ok()
    }

    /// Evaluation at an object x of the domain, Fun(C, D) → D.
    pub fn evaluation(&self, x: usize) -> Functor {
        Functor::new_unchecked(
            self.cat.clone(),
            self.cod.clone(),
            FunctorMaps {
                objects: self.functors.iter().map(|f| f.objects[x]).collect(),
                morphisms: self.components.iter().map(|c| c[x]).collect(),
            },
        )
    }
}

pub fn functor_category(c: &Arc<FinCat>, d: &Arc<FinCat>, limits: &SizeLimits) -> Result<FunctorCategory> {
    build(c, d, None, limits)
}

/// Full subcategory of Fun(C, D) on the functors preserving markings.
pub fn marked_functor_category(c: &MarkedFinCat, d: &MarkedFinCat, limits: &SizeLimits) -> Result<FunctorCategory> {
    build(&c.cat, &d.cat, Some((c, d)), limits)
}

fn build(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    marks: Option<(&MarkedFinCat, &MarkedFinCat)>,
    limits: &SizeLimits,
) -> Result<FunctorCategory> {
    let filter = |f: usize, g: usize| marks.is_none_or(|(cm, dm)| !cm.is_marked(f) || dm.is_marked(g));
    let mut q = FunctorQuery::new(c, d);
    if marks.is_some() {
        q.morphism_filter = Some(&filter);
    }
    let functors =
        enumerate_functors(&q, limits.max_objects).map_err(|_| limits.objects_overflow("functor category"))?;
    from_functors(c, d, functors, None, limits)
}

/// The subcategory of Fun(C, D) on the given functors and on the natural
/// transformations whose components all pass `component_filter`.
pub(crate) fn from_functors(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    functors: Vec<FunctorMaps>,
    component_filter: Option<&dyn Fn(usize, usize) -> bool>,
    limits: &SizeLimits,
) -> Result<FunctorCategory> {
    let ids: Vec<String> = functors.iter().map(|f| f.canonical_id(c, d)).collect();
    let mut b = CatBuilder::new();
    for id in &ids {
        b.object(id.clone());
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    let mut ends = Vec::new();
    for (p, f) in functors.iter().enumerate() {
        for (q, g) in functors.iter().enumerate() {
            let left = limits.max_morphisms - comps.len();
            let nats = enumerate_nat(c, d, f, g, component_filter, left).map_err(|_| limits.morphisms_overflow("functor category"))?;
            for a in nats {
                let names: Vec<&str> = a.iter().map(|&m| d.morphism_id(m)).collect();
                let k = b.morphism(format!("{}=>{}[{}]", ids[p], ids[q], names.join(",")), p, q);
                index.insert((p, q, a.clone()), k);
                comps.push(a);
                ends.push((p, q));
            }
        }
    }
    for (p, f) in functors.iter().enumerate() {
        let idc: Vec<usize> = f.objects.iter().map(|&y| d.identity(y)).collect();
        b.set_identity(p, index[&(p, p, idc)]);
    }
    let (cat, re) = b.build(|g, f| {
        let comp: Vec<usize> = comps[g].iter().zip(&comps[f]).map(|(&x, &y)| d.compose(x, y)).collect();
        index[&(ends[f].0, ends[g].1, comp)]
    })?;
    let mut fs = vec![FunctorMaps { objects: vec![], morphisms: vec![] }; functors.len()];
    for (p, f) in functors.into_iter().enumerate() {
        fs[re.objects[p]] = f;
    }
    let mut cs = vec![Vec::new(); comps.len()];
    for (k, a) in comps.into_iter().enumerate() {
        cs[re.morphisms[k]] = a;
    }
    Ok(FunctorCategory { cat: Arc::new(cat), dom: c.clone(), cod: d.clone(), functors: fs, components: cs })
}
