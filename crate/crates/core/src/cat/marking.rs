use std::sync::Arc;

use super::{FinCat, Functor};
use crate::error::{CatError, Result};

/// A set of morphisms of a host category that contains every isomorphism
/// and is closed under composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking {
    marked: Vec<bool>,
}

impl Marking {
    pub fn contains(&self, f: usize) -> bool {
        self.marked[f]
    }

    pub fn len(&self) -> usize {
        self.marked.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.marked.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k)
    }

    pub fn ids(&self, cat: &FinCat) -> Vec<String> {
        self.indices().map(|f| cat.morphism_id(f).to_string()).collect()
    }

    pub fn is_subset(&self, other: &Marking) -> bool {
        self.marked.iter().zip(&other.marked).all(|(&a, &b)| !a || b)
    }

    pub fn flat(cat: &FinCat) -> Marking {
        Marking { marked: (0..cat.morphism_count()).map(|f| cat.is_iso(f)).collect() }
    }

    pub fn sharp(cat: &FinCat) -> Marking {
        Marking { marked: vec![true; cat.morphism_count()] }
    }

    /// Wraps a mask without checking the marking axioms.
    pub(crate) fn from_mask_unchecked(marked: Vec<bool>) -> Marking {
        Marking { marked }
    }

    pub(crate) fn mask(&self) -> &[bool] {
        &self.marked
    }
}

/// Checks a candidate marking without repairing it.
pub fn validate_marking(cat: &FinCat, marked: &[usize]) -> Result<Marking> {
    let mut mask = vec![false; cat.morphism_count()];
    for &f in marked {
        mask[f] = true;
    }
    let mut problems = Vec::new();
    for f in 0..cat.morphism_count() {
        if cat.is_iso(f) && !mask[f] {
            problems.push(format!("isomorphism {} is not marked", cat.morphism_id(f)));
        }
    }
    for f in 0..cat.morphism_count() {
        if !mask[f] {
            continue;
        }
        for &g in cat.outgoing(cat.tgt(f)) {
            if mask[g] && !mask[cat.compose(g, f)] {
                problems.push(format!(
                    "{}∘{} = {} is not marked",
                    cat.morphism_id(g),
                    cat.morphism_id(f),
                    cat.morphism_id(cat.compose(g, f))
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok(Marking { marked: mask })
    } else {
        Err(CatError::InvalidMarking(problems.join("; ")))
    }
}

/// Smallest marking containing `seed`: all isomorphisms are added and the
/// set is closed under composition.
pub fn saturate_marking(cat: &FinCat, seed: &[usize]) -> Marking {
    let mut mask = Marking::flat(cat).marked;
    let mut work: Vec<usize> = Vec::new();
    for f in 0..cat.morphism_count() {
        if mask[f] {
            work.push(f);
        }
    }
    for &f in seed {
        if !mask[f] {
            mask[f] = true;
            work.push(f);
        }
    }
    while let Some(f) = work.pop() {
        let mut fresh = Vec::new();
        for &g in cat.outgoing(cat.tgt(f)) {
            if mask[g] {
                fresh.push(cat.compose(g, f));
            }
        }
        for &e in cat.incoming(cat.src(f)) {
            if mask[e] {
                fresh.push(cat.compose(f, e));
            }
        }
        for h in fresh {
            if !mask[h] {
                mask[h] = true;
                work.push(h);
            }
        }
    }
    Marking { marked: mask }
}

/// A finite category together with a marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedFinCat {
    pub cat: Arc<FinCat>,
    pub marking: Marking,
}

impl MarkedFinCat {
    pub fn new(cat: impl Into<Arc<FinCat>>, marked: &[usize]) -> Result<Self> {
        let cat = cat.into();
        let marking = validate_marking(&cat, marked)?;
        Ok(MarkedFinCat { cat, marking })
    }

    pub fn from_ids(cat: impl Into<Arc<FinCat>>, marked: &[&str]) -> Result<Self> {
        let cat = cat.into();
        let idx = marked.iter().map(|m| cat.morphism_index(m)).collect::<Result<Vec<_>>>()?;
        Self::new(cat, &idx)
    }

    pub fn saturated(cat: impl Into<Arc<FinCat>>, seed: &[usize]) -> Self {
        let cat = cat.into();
        let marking = saturate_marking(&cat, seed);
        MarkedFinCat { cat, marking }
    }

    /// Only the isomorphisms are marked.
    pub fn flat(cat: impl Into<Arc<FinCat>>) -> Self {
        let cat = cat.into();
        let marking = Marking::flat(&cat);
        MarkedFinCat { cat, marking }
    }

    /// Every morphism is marked.
    pub fn sharp(cat: impl Into<Arc<FinCat>>) -> Self {
        let cat = cat.into();
        let marking = Marking::sharp(&cat);
        MarkedFinCat { cat, marking }
    }

    pub(crate) fn with_mask_unchecked(cat: Arc<FinCat>, mask: Vec<bool>) -> Self {
        MarkedFinCat { cat, marking: Marking::from_mask_unchecked(mask) }
    }

    pub fn is_marked(&self, f: usize) -> bool {
        self.marking.contains(f)
    }

    pub fn is_flat(&self) -> bool {
        self.marking == Marking::flat(&self.cat)
    }

    pub fn is_sharp(&self) -> bool {
        self.marking.len() == self.cat.morphism_count()
    }

    /// Re-checks the marking axioms against the host category.
    pub fn validate(&self) -> Result<()> {
        let idx: Vec<usize> = self.marking.indices().collect();
        validate_marking(&self.cat, &idx).map(|_| ())
    }
}

/// A functor between marked categories that preserves marked morphisms.
#[derive(Debug, Clone)]
pub struct MarkedFunctor {
    pub functor: Functor,
    pub dom: MarkedFinCat,
    pub cod: MarkedFinCat,
}

impl MarkedFunctor {
    pub fn new(functor: Functor, dom: MarkedFinCat, cod: MarkedFinCat) -> Result<Self> {
        if !Arc::ptr_eq(functor.dom(), &dom.cat) && **functor.dom() != *dom.cat {
            return Err(CatError::InvalidFunctor("domain does not match the marked domain".into()));
        }
        if !Arc::ptr_eq(functor.cod(), &cod.cat) && **functor.cod() != *cod.cat {
            return Err(CatError::InvalidFunctor("codomain does not match the marked codomain".into()));
        }
        for f in dom.marking.indices() {
            if !cod.is_marked(functor.morphism(f)) {
                return Err(CatError::InvalidFunctor(format!(
                    "marked morphism {} is sent to unmarked {}",
                    dom.cat.morphism_id(f),
                    cod.cat.morphism_id(functor.morphism(f))
                )));
            }
        }
        Ok(MarkedFunctor { functor, dom, cod })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;

    fn ids(c: &FinCat, m: &Marking) -> Vec<String> {
        m.ids(c)
    }

    #[test]
    fn saturation_examples() {
        let a = standard::arrow();
        assert_eq!(ids(&a, &saturate_marking(&a, &[])), vec!["id_0", "id_1"]);
        let c = standard::chain2();
        let u = c.morphism_index("u").unwrap();
        let v = c.morphism_index("v").unwrap();
        assert_eq!(ids(&c, &saturate_marking(&c, &[u])), vec!["id_0", "id_1", "id_2", "u"]);
        assert_eq!(
            ids(&c, &saturate_marking(&c, &[u, v])),
            vec!["id_0", "id_1", "id_2", "u", "v", "vu"]
        );
    }

    #[test]
    fn flat_and_sharp() {
        let a = MarkedFinCat::sharp(standard::arrow());
        assert_eq!(a.marking.len(), 3);
        let a = MarkedFinCat::flat(standard::arrow());
        assert_eq!(ids(&a.cat, &a.marking), vec!["id_0", "id_1"]);
        let w = MarkedFinCat::flat(standard::walking_iso());
        assert_eq!(w.marking.len(), 4);
    }

    #[test]
    fn validation_rejects_unclosed_input() {
        let c = standard::chain2();
        let err = MarkedFinCat::from_ids(c.clone(), &["id_0", "id_1", "id_2", "u", "v"]).unwrap_err();
        assert!(err.to_string().contains("v∘u"));
        let err = MarkedFinCat::from_ids(standard::walking_iso(), &["id_a", "id_b"]).unwrap_err();
        assert!(err.to_string().contains("isomorphism u"));
        assert!(MarkedFinCat::from_ids(c, &["id_0", "id_1", "id_2", "u"]).is_ok());
    }
}
