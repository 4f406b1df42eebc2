use std::collections::BTreeMap;
use std::sync::Arc;

use super::FinCat;
use crate::error::{CatError, Result};

/// The object and morphism maps of a functor, without its endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctorMaps {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl FunctorMaps {
    pub fn identity(c: &FinCat) -> Self {
        FunctorMaps { objects: (0..c.object_count()).collect(), morphisms: (0..c.morphism_count()).collect() }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &FunctorMaps) -> FunctorMaps {
        FunctorMaps {
            objects: inner.objects.iter().map(|&x| self.objects[x]).collect(),
            morphisms: inner.morphisms.iter().map(|&f| self.morphisms[f]).collect(),
        }
    }

    /// Canonical content id: object images, then images of the non-identity
    /// morphisms of the domain, both in domain index order.
    pub fn canonical_id(&self, dom: &FinCat, cod: &FinCat) -> String {
        let mut s = String::from("<");
        for (k, &x) in self.objects.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(cod.object_id(x));
        }
        s.push('|');
        let mut first = true;
        for f in dom.non_identity_morphisms() {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(cod.morphism_id(self.morphisms[f]));
        }
        s.push('>');
        s
    }

    /// Exhaustive functoriality check; returns the first problem found.
    pub fn check(&self, dom: &FinCat, cod: &FinCat) -> std::result::Result<(), String> {
        if self.objects.len() != dom.object_count() || self.morphisms.len() != dom.morphism_count() {
            return Err("map sizes do not match the domain".into());
        }
        if self.objects.iter().any(|&y| y >= cod.object_count())
            || self.morphisms.iter().any(|&g| g >= cod.morphism_count())
        {
            return Err("map points outside the codomain".into());
        }
        for f in 0..dom.morphism_count() {
            let g = self.morphisms[f];
            if cod.src(g) != self.objects[dom.src(f)] || cod.tgt(g) != self.objects[dom.tgt(f)] {
                return Err(format!("{} is not sent to a morphism between the image objects", dom.morphism_id(f)));
            }
        }
        for x in 0..dom.object_count() {
            if self.morphisms[dom.identity(x)] != cod.identity(self.objects[x]) {
                return Err(format!("identity of {} is not preserved", dom.object_id(x)));
            }
        }
        for (g, f) in dom.composable_pairs() {
            let lhs = self.morphisms[dom.compose(g, f)];
            let rhs = cod.compose(self.morphisms[g], self.morphisms[f]);
            if lhs != rhs {
                return Err(format!(
                    "composite {}∘{} is not preserved",
                    dom.morphism_id(g),
                    dom.morphism_id(f)
                ));
            }
        }
        Ok(())
    }

    pub fn is_bijective(&self, dom: &FinCat, cod: &FinCat) -> bool {
        let mut seen_o = vec![false; cod.object_count()];
        let mut seen_m = vec![false; cod.morphism_count()];
        self.objects.len() == cod.object_count()
            && self.morphisms.len() == cod.morphism_count()
            && self.objects.iter().all(|&y| !std::mem::replace(&mut seen_o[y], true))
            && self.morphisms.iter().all(|&g| !std::mem::replace(&mut seen_m[g], true))
            && dom.object_count() == cod.object_count()
    }
}

/// A validated functor between finite categories.
#[derive(Debug, Clone)]
pub struct Functor {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    maps: FunctorMaps,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.maps == other.maps
            && (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
    }
}

impl Functor {
    pub fn new(dom: Arc<FinCat>, cod: Arc<FinCat>, maps: FunctorMaps) -> Result<Self> {
        maps.check(&dom, &cod).map_err(CatError::InvalidFunctor)?;
        Ok(Functor { dom, cod, maps })
    }

    pub(crate) fn new_unchecked(dom: Arc<FinCat>, cod: Arc<FinCat>, maps: FunctorMaps) -> Self {
        debug_assert!(maps.check(&dom, &cod).is_ok(), "{:?}", maps.check(&dom, &cod));
        Functor { dom, cod, maps }
    }

    /// Builds a functor from id maps. Identity morphisms may be omitted
    /// from `morphism_map`; they are sent to the identity of the image.
    pub fn from_ids(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        object_map: &BTreeMap<String, String>,
        morphism_map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut objects = Vec::with_capacity(dom.object_count());
        for o in dom.objects() {
            let img = object_map
                .get(o)
                .ok_or_else(|| CatError::InvalidFunctor(format!("object {o} is not mapped")))?;
            objects.push(cod.object_index(img)?);
        }
        for k in object_map.keys() {
            dom.object_index(k)?;
        }
        for k in morphism_map.keys() {
            dom.morphism_index(k)?;
        }
        let mut morphisms = Vec::with_capacity(dom.morphism_count());
        for f in 0..dom.morphism_count() {
            let id = dom.morphism_id(f);
            let g = match morphism_map.get(id) {
                Some(img) => cod.morphism_index(img)?,
                None if dom.is_identity(f) => cod.identity(objects[dom.src(f)]),
                None => return Err(CatError::InvalidFunctor(format!("morphism {id} is not mapped"))),
            };
            morphisms.push(g);
        }
        Functor::new(dom, cod, FunctorMaps { objects, morphisms })
    }

    pub fn identity(c: Arc<FinCat>) -> Self {
        let maps = FunctorMaps::identity(&c);
        Functor { dom: c.clone(), cod: c, maps }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Functor) -> Result<Functor> {
        if !Arc::ptr_eq(&inner.cod, &self.dom) && inner.cod != self.dom {
            return Err(CatError::InvalidFunctor("composing functors with mismatched endpoints".into()));
        }
        Ok(Functor { dom: inner.dom.clone(), cod: self.cod.clone(), maps: self.maps.after(&inner.maps) })
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn maps(&self) -> &FunctorMaps {
        &self.maps
    }

    pub fn object(&self, x: usize) -> usize {
        self.maps.objects[x]
    }

    pub fn morphism(&self, f: usize) -> usize {
        self.maps.morphisms[f]
    }

    pub fn object_map_ids(&self) -> BTreeMap<String, String> {
        (0..self.dom.object_count())
            .map(|x| (self.dom.object_id(x).to_string(), self.cod.object_id(self.object(x)).to_string()))
            .collect()
    }

    pub fn morphism_map_ids(&self) -> BTreeMap<String, String> {
        (0..self.dom.morphism_count())
            .map(|f| (self.dom.morphism_id(f).to_string(), self.cod.morphism_id(self.morphism(f)).to_string()))
            .collect()
    }

    pub fn is_full(&self) -> bool {
        let n = self.dom.object_count();
        for x in 0..n {
            for y in 0..n {
                let mut hit = vec![false; self.cod.morphism_count()];
                for &f in self.dom.hom(x, y) {
                    hit[self.morphism(f)] = true;
                }
                if self.cod.hom(self.object(x), self.object(y)).iter().any(|&g| !hit[g]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_faithful(&self) -> bool {
        let n = self.dom.object_count();
        for x in 0..n {
            for y in 0..n {
                let mut seen = std::collections::HashSet::new();
                if !self.dom.hom(x, y).iter().all(|&f| seen.insert(self.morphism(f))) {
                    return false;
                }
            }
        }
        true
    }

    /// Every codomain object is isomorphic to an image object.
    pub fn is_essentially_surjective(&self) -> bool {
        let mut reached = vec![false; self.cod.object_count()];
        for x in 0..self.dom.object_count() {
            let y = self.object(x);
            reached[y] = true;
            for &g in self.cod.outgoing(y) {
                if self.cod.is_iso(g) {
                    reached[self.cod.tgt(g)] = true;
                }
            }
        }
        reached.into_iter().all(|b| b)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_full() && self.is_faithful() && self.is_essentially_surjective()
    }

    /// Bijective on objects and morphisms.
    pub fn is_isomorphism(&self) -> bool {
        self.maps.is_bijective(&self.dom, &self.cod)
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone)]
pub struct NatTrans {
    pub src: Functor,
    pub tgt: Functor,
    pub components: Vec<usize>,
}

impl NatTrans {
    pub fn new(src: Functor, tgt: Functor, components: Vec<usize>) -> Result<Self> {
        if src.dom() != tgt.dom() || src.cod() != tgt.cod() {
            return Err(CatError::InvalidNatTrans("functors are not parallel".into()));
        }
        let (dom, cod) = (src.dom().clone(), src.cod().clone());
        if components.len() != dom.object_count() {
            return Err(CatError::InvalidNatTrans("one component per object is required".into()));
        }
        for x in 0..dom.object_count() {
            let a = components[x];
            if cod.src(a) != src.object(x) || cod.tgt(a) != tgt.object(x) {
                return Err(CatError::InvalidNatTrans(format!("component at {} has wrong endpoints", dom.object_id(x))));
            }
        }
        for f in 0..dom.morphism_count() {
            let (x, y) = (dom.src(f), dom.tgt(f));
            if cod.compose(tgt.morphism(f), components[x]) != cod.compose(components[y], src.morphism(f)) {
                return Err(CatError::InvalidNatTrans(format!("naturality fails at {}", dom.morphism_id(f))));
            }
        }
        Ok(NatTrans { src, tgt, components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;

    #[test]
    fn functor_checks() {
        let a = Arc::new(standard::arrow());
        let w = Arc::new(standard::walking_iso());
        let om: BTreeMap<String, String> = [("0", "a"), ("1", "b")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let mm: BTreeMap<String, String> = [("u", "u")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let f = Functor::from_ids(a.clone(), w.clone(), &om, &mm).unwrap();
        assert!(f.is_faithful());
        assert!(!f.is_full());
        assert!(f.is_essentially_surjective());
        let bad: BTreeMap<String, String> = [("u", "v")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        assert!(Functor::from_ids(a.clone(), w.clone(), &om, &bad).is_err());
        let id = Functor::identity(a.clone());
        assert!(id.is_isomorphism() && id.is_equivalence());
        assert_eq!(f.after(&id).unwrap(), f);
    }

    #[test]
    fn naturality_is_checked() {
        let a = Arc::new(standard::arrow());
        let c0 = Functor::new(a.clone(), a.clone(), FunctorMaps { objects: vec![0, 0], morphisms: vec![0, 0, 0] }).unwrap();
        let id = Functor::identity(a.clone());
        let u = a.morphism_index("u").unwrap();
        let id0 = a.identity(0);
        assert!(NatTrans::new(c0.clone(), id.clone(), vec![id0, u]).is_ok());
        assert!(NatTrans::new(id, c0, vec![id0, u]).is_err());
    }
}
