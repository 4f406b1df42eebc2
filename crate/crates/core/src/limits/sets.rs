use std::sync::Arc;

use crate::cat::{FinCat, Functor};
use crate::error::{CatError, Result};

/// A strict functor from a finite category to finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDiagram {
    pub base: Arc<FinCat>,
    /// Element names at each object.
    pub values: Vec<Vec<String>>,
    /// For each morphism f: i → j, the image in values[j] of each element of values[i].
    pub actions: Vec<Vec<usize>>,
}

impl SetDiagram {
    pub fn new(base: Arc<FinCat>, values: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Result<Self> {
        let d = SetDiagram { base, values, actions };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.base;
        let bad = |reason: String, witness: Vec<String>| Err(CatError::InvalidDiagram { reason, witness });
        if self.values.len() != b.object_count() || self.actions.len() != b.morphism_count() {
            return bad("one set per object and one map per morphism are required".into(), vec![]);
        }
        for f in 0..b.morphism_count() {
            let (s, t) = (b.src(f), b.tgt(f));
            if self.actions[f].len() != self.values[s].len() || self.actions[f].iter().any(|&y| y >= self.values[t].len()) {
                return bad(format!("map for {} is not a function", b.morphism_id(f)), vec![b.morphism_id(f).into()]);
            }
        }
        for x in 0..b.object_count() {
            let id = b.identity(x);
            if self.actions[id].iter().enumerate().any(|(k, &y)| k != y) {
                return bad(format!("identity of {} acts nontrivially", b.object_id(x)), vec![b.morphism_id(id).into()]);
            }
        }
        for (g, f) in b.composable_pairs() {
            let h = b.compose(g, f);
            if self.actions[f].iter().map(|&y| self.actions[g][y]).ne(self.actions[h].iter().copied()) {
                let w = vec![b.morphism_id(g).into(), b.morphism_id(f).into(), b.morphism_id(h).into()];
                return bad(format!("F({}) differs from the composite", b.morphism_id(h)), w);
            }
        }
        Ok(())
    }

    /// F∘t for a functor t into the base.
    pub fn precompose(&self, t: &Functor) -> SetDiagram {
        let d = t.dom();
        SetDiagram {
            base: d.clone(),
            values: (0..d.object_count()).map(|x| self.values[t.object(x)].clone()).collect(),
            actions: (0..d.morphism_count()).map(|f| self.actions[t.morphism(f)].clone()).collect(),
        }
    }

    /// Position of element x of object i in the disjoint union of all values.
    pub fn offset(&self, i: usize) -> usize {
        self.values[..i].iter().map(Vec::len).sum()
    }
}

/// The compatible families: one element per object, agreeing under every map.
/// Families are listed in lexicographic order.
pub fn set_limit(d: &SetDiagram) -> Vec<Vec<usize>> {
    let b = &d.base;
    let n = b.object_count();
    let mut out = Vec::new();
    let mut fam = vec![usize::MAX; n];
    fn rec(x: usize, d: &SetDiagram, fam: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let b = &d.base;
        if x == b.object_count() {
            out.push(fam.clone());
            return;
        }
        for v in 0..d.values[x].len() {
            fam[x] = v;
            let ok = (0..b.morphism_count()).all(|f| {
                let (s, t) = (b.src(f), b.tgt(f));
                s.max(t) != x || d.actions[f][fam[s]] == fam[t]
            });
            if ok {
                rec(x + 1, d, fam, out);
            }
        }
        fam[x] = usize::MAX;
    }
    rec(0, d, &mut fam, &mut out);
    out
}

/// The colimit as a partition of the disjoint union of the values: the class
/// of every element (indexed through [`SetDiagram::offset`]) and the number
/// of classes. Classes are numbered by first occurrence.
pub fn set_colimit(d: &SetDiagram) -> (Vec<usize>, usize) {
    let b = &d.base;
    let total: usize = d.values.iter().map(Vec::len).sum();
    let mut uf = UnionFind::new(total);
    for f in 0..b.morphism_count() {
        let (os, ot) = (d.offset(b.src(f)), d.offset(b.tgt(f)));
        for (x, &y) in d.actions[f].iter().enumerate() {
            uf.union(os + x, ot + y);
        }
    }
    let mut class = vec![usize::MAX; total];
    let mut label = vec![usize::MAX; total];
    let mut count = 0;
    for e in 0..total {
        let r = uf.find(e);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        class[e] = label[r];
    }
    (class, count)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges two classes; the smaller root survives. Returns false if they
    /// were already merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::SizeLimits;
    use crate::cat::standard;
    use crate::constructions::twisted_arrow;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn example() -> SetDiagram {
        // F(0) = {x, y}, F(1) = {z}; morphisms sort as id_0, id_1, u
        SetDiagram::new(
            Arc::new(standard::arrow()),
            vec![names(&["x", "y"]), names(&["z"])],
            vec![vec![0, 1], vec![0], vec![0, 0]],
        )
        .unwrap()
    }

    #[test]
    fn arrow_example() {
        let d = example();
        assert_eq!(set_limit(&d), vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(set_colimit(&d).1, 1);
        let tw = twisted_arrow(&d.base, &SizeLimits::default()).unwrap();
        let p = d.precompose(&tw.pi);
        assert_eq!(set_colimit(&p).1, 1);
        assert_eq!(set_limit(&p).len(), 2);
    }

    #[test]
    fn constant_singleton() {
        let b = Arc::new(standard::split_idempotent());
        let d = SetDiagram::new(
            b.clone(),
            vec![names(&["*"]); b.object_count()],
            vec![vec![0]; b.morphism_count()],
        )
        .unwrap();
        assert_eq!(set_limit(&d).len(), 1);
        assert_eq!(set_colimit(&d).1, 1);
    }

    #[test]
    fn rejects_non_functor() {
        let r = SetDiagram::new(
            Arc::new(standard::arrow()),
            vec![names(&["x"]), names(&["z"])],
            vec![vec![0], vec![0], vec![1]],
        );
        assert!(r.is_err());
    }
}
