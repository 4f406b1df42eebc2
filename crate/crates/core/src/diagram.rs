//! Strict diagrams I → Cat over a marked base.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{full_subcategory, opposite_marked, FinCat, Functor, FunctorMaps, MarkedFinCat, MarkedFunctor};
use crate::error::{CatError, Result};

/// A strict functor from a marked base category to finite categories.
///
/// Fibers carry a marking of their own; it is ignored by the Grothendieck
/// construction and only read by limits of marked categories.
#[derive(Debug, Clone)]
pub struct CatDiagram {
    base: MarkedFinCat,
    fibers: Vec<MarkedFinCat>,
    transitions: Vec<FunctorMaps>,
}

impl CatDiagram {
    /// `transitions[m]` is the functor for base morphism `m`, identities included.
    pub fn new(base: MarkedFinCat, fibers: Vec<MarkedFinCat>, transitions: Vec<FunctorMaps>) -> Result<Self> {
        let d = CatDiagram { base, fibers, transitions };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn new_unchecked(base: MarkedFinCat, fibers: Vec<MarkedFinCat>, transitions: Vec<FunctorMaps>) -> Self {
        let d = CatDiagram { base, fibers, transitions };
        debug_assert!(d.validate().is_ok(), "{:?}", d.validate());
        d
    }

    /// Diagram with every fiber flat-marked.
    pub fn from_categories(base: MarkedFinCat, fibers: Vec<Arc<FinCat>>, transitions: Vec<FunctorMaps>) -> Result<Self> {
        Self::new(base, fibers.into_iter().map(MarkedFinCat::flat).collect(), transitions)
    }

    /// The diagram with the same value `c` at every object and identity transitions.
    pub fn constant(base: MarkedFinCat, c: Arc<FinCat>) -> Self {
        let fibers = vec![MarkedFinCat::flat(c.clone()); base.cat.object_count()];
        let transitions = vec![FunctorMaps::identity(&c); base.cat.morphism_count()];
        CatDiagram { base, fibers, transitions }
    }

    pub fn validate(&self) -> Result<()> {
        let base = &self.base.cat;
        if self.fibers.len() != base.object_count() || self.transitions.len() != base.morphism_count() {
            return Err(CatError::InvalidDiagram {
                reason: "one fiber per object and one transition per morphism are required".into(),
                witness: vec![],
            });
        }
        for m in 0..base.morphism_count() {
            let (s, t) = (&self.fibers[base.src(m)].cat, &self.fibers[base.tgt(m)].cat);
            if let Err(e) = self.transitions[m].check(s, t) {
                return Err(CatError::InvalidDiagram {
                    reason: format!("transition for {} is not a functor: {e}", base.morphism_id(m)),
                    witness: vec![base.morphism_id(m).into()],
                });
            }
        }
        for x in 0..base.object_count() {
            if self.transitions[base.identity(x)] != FunctorMaps::identity(&self.fibers[x].cat) {
                return Err(CatError::InvalidDiagram {
                    reason: format!("identity of {} is not sent to the identity functor", base.object_id(x)),
                    witness: vec![base.morphism_id(base.identity(x)).into()],
                });
            }
        }
        for (g, f) in base.composable_pairs() {
            let h = base.compose(g, f);
            if self.transitions[h] != self.transitions[g].after(&self.transitions[f]) {
                return Err(CatError::InvalidDiagram {
                    reason: format!(
                        "F({}∘{}) differs from F({})∘F({})",
                        base.morphism_id(g),
                        base.morphism_id(f),
                        base.morphism_id(g),
                        base.morphism_id(f)
                    ),
                    witness: vec![base.morphism_id(g).into(), base.morphism_id(f).into(), base.morphism_id(h).into()],
                });
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &MarkedFinCat {
        &self.base
    }

    pub fn base_cat(&self) -> &Arc<FinCat> {
        &self.base.cat
    }

    pub fn fiber(&self, x: usize) -> &Arc<FinCat> {
        &self.fibers[x].cat
    }

    pub fn marked_fiber(&self, x: usize) -> &MarkedFinCat {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[MarkedFinCat] {
        &self.fibers
    }

    pub fn transition(&self, m: usize) -> &FunctorMaps {
        &self.transitions[m]
    }

    pub fn transitions(&self) -> &[FunctorMaps] {
        &self.transitions
    }

    pub fn transition_functor(&self, m: usize) -> Functor {
        let b = &self.base.cat;
        Functor::new_unchecked(
            self.fibers[b.src(m)].cat.clone(),
            self.fibers[b.tgt(m)].cat.clone(),
            self.transitions[m].clone(),
        )
    }

    /// Same diagram over a different marking of the same base category.
    pub fn with_base(&self, base: MarkedFinCat) -> Result<Self> {
        if *base.cat != *self.base.cat {
            return Err(CatError::InvalidDiagram { reason: "base category differs".into(), witness: vec![] });
        }
        Ok(CatDiagram { base, fibers: self.fibers.clone(), transitions: self.transitions.clone() })
    }

    /// Replaces every fiber marking by the flat one.
    pub fn flat_fibers(&self) -> Self {
        CatDiagram {
            base: self.base.clone(),
            fibers: self.fibers.iter().map(|f| MarkedFinCat::flat(f.cat.clone())).collect(),
            transitions: self.transitions.clone(),
        }
    }

    /// The diagram i ↦ F(i)^op with the same transition maps.
    pub fn opposite_fibers(&self) -> Self {
        CatDiagram {
            base: self.base.clone(),
            fibers: self.fibers.iter().map(opposite_marked).collect(),
            transitions: self.transitions.clone(),
        }
    }

    /// F∘t for a marked functor t into the base.
    pub fn precompose(&self, t: &MarkedFunctor) -> Result<Self> {
        if *t.cod.cat != *self.base.cat {
            return Err(CatError::InvalidDiagram { reason: "functor does not land in the base".into(), witness: vec![] });
        }
        let f = &t.functor;
        let fibers = (0..t.dom.cat.object_count()).map(|x| self.fibers[f.object(x)].clone()).collect();
        let transitions = (0..t.dom.cat.morphism_count()).map(|m| self.transitions[f.morphism(m)].clone()).collect();
        CatDiagram::new(t.dom.clone(), fibers, transitions)
    }

    /// The subdiagram on full subcategories `keep[i]` ⊆ Ob F(i), with the
    /// componentwise inclusions. Every transition must map kept objects to
    /// kept objects.
    pub fn full_subdiagram(&self, keep: &[Vec<usize>]) -> Result<(CatDiagram, Vec<Functor>)> {
        let b = &self.base.cat;
        let subs: Vec<(Arc<FinCat>, Functor)> =
            (0..b.object_count()).map(|i| full_subcategory(&self.fibers[i].cat, &keep[i])).collect();
        let mut transitions = Vec::with_capacity(b.morphism_count());
        for m in 0..b.morphism_count() {
            let (s, t) = (&subs[b.src(m)], &subs[b.tgt(m)]);
            let back_obj: HashMap<usize, usize> = (0..t.0.object_count()).map(|y| (t.1.object(y), y)).collect();
            let back_mor: HashMap<usize, usize> = (0..t.0.morphism_count()).map(|g| (t.1.morphism(g), g)).collect();
            let tr = &self.transitions[m];
            let objects = (0..s.0.object_count())
                .map(|x| back_obj.get(&tr.objects[s.1.object(x)]).copied())
                .collect::<Option<Vec<_>>>();
            let Some(objects) = objects else {
                return Err(CatError::InvalidDiagram {
                    reason: format!("{} leaves the chosen subcategory", b.morphism_id(m)),
                    witness: vec![b.morphism_id(m).into()],
                });
            };
            let morphisms = (0..s.0.morphism_count()).map(|f| back_mor[&tr.morphisms[s.1.morphism(f)]]).collect();
            transitions.push(FunctorMaps { objects, morphisms });
        }
        let fibers = subs
            .iter()
            .zip(&self.fibers)
            .map(|((c, incl), f)| {
                let mask = (0..c.morphism_count()).map(|g| f.is_marked(incl.morphism(g))).collect();
                MarkedFinCat::with_mask_unchecked(c.clone(), mask)
            })
            .collect();
        let d = CatDiagram::new(self.base.clone(), fibers, transitions)?;
        Ok((d, subs.into_iter().map(|s| s.1).collect()))
    }

    /// The restriction to the full subcategory of the base on `keep`.
    pub fn restrict_base(&self, keep: &[usize]) -> Result<CatDiagram> {
        let (sub, incl) = full_subcategory(&self.base.cat, keep);
        let mask = (0..sub.morphism_count()).map(|f| self.base.is_marked(incl.morphism(f))).collect();
        let dom = MarkedFinCat::with_mask_unchecked(sub, mask);
        self.precompose(&MarkedFunctor::new(incl, dom, self.base.clone())?)
    }

    /// Total number of fiber objects.
    pub fn total_objects(&self) -> usize {
        self.fibers.iter().map(|f| f.cat.object_count()).sum()
    }

    pub fn base_opposite(&self) -> MarkedFinCat {
        opposite_marked(&self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;

    /// F(0) = {x}, F(1) = discrete {a, b}, F(u)(x) = a.
    pub(crate) fn running(base: MarkedFinCat) -> CatDiagram {
        let f0 = Arc::new(standard::from_table(&["x"], &[], &[]));
        let f1 = Arc::new(standard::from_table(&["a", "b"], &[], &[]));
        let u = FunctorMaps { objects: vec![0], morphisms: vec![0] };
        let t = vec![FunctorMaps::identity(&f0), FunctorMaps::identity(&f1), u];
        CatDiagram::from_categories(base, vec![f0, f1], t).unwrap()
    }

    #[test]
    fn valid_and_invalid_diagrams() {
        let d = running(MarkedFinCat::flat(standard::arrow()));
        assert_eq!(d.total_objects(), 3);
        let f0 = Arc::new(standard::terminal());
        let bad = CatDiagram::from_categories(
            MarkedFinCat::flat(standard::arrow()),
            vec![f0.clone(), f0.clone()],
            vec![
                FunctorMaps { objects: vec![0], morphisms: vec![0] },
                FunctorMaps { objects: vec![0], morphisms: vec![0] },
                FunctorMaps { objects: vec![0], morphisms: vec![1] },
            ],
        );
        assert!(matches!(bad, Err(CatError::InvalidDiagram { .. })));
    }

    #[test]
    fn functoriality_failure_has_witness() {
        // base [2]; F(vu) chosen inconsistently with F(v)∘F(u)
        let base = MarkedFinCat::flat(standard::chain2());
        let two = Arc::new(standard::discrete(2));
        let idm = FunctorMaps::identity(&two);
        let swap = FunctorMaps { objects: vec![1, 0], morphisms: vec![1, 0] };
        // morphisms sorted: id_0, id_1, id_2, u, v, vu
        let err = CatDiagram::from_categories(
            base,
            vec![two.clone(), two.clone(), two],
            vec![idm.clone(), idm.clone(), idm.clone(), swap.clone(), swap, idm.clone()],
        );
        match err {
            Ok(_) => {}
            Err(CatError::InvalidDiagram { witness, .. }) => panic!("swap∘swap = id should pass: {witness:?}"),
            Err(e) => panic!("{e}"),
        }
        let base = MarkedFinCat::flat(standard::chain2());
        let two = Arc::new(standard::discrete(2));
        let swap = FunctorMaps { objects: vec![1, 0], morphisms: vec![1, 0] };
        let err = CatDiagram::from_categories(
            base,
            vec![two.clone(), two.clone(), two],
            vec![idm.clone(), idm.clone(), idm.clone(), swap, idm.clone(), idm],
        )
        .unwrap_err();
        let CatError::InvalidDiagram { witness, .. } = err else { panic!() };
        assert_eq!(witness, vec!["v", "u", "vu"]);
    }
}
