//! Backtracking search for compatible families, shared by every strict
//! limit in the crate.
//!
//! A problem has nodes and constraints; constraint k says that the value at
//! `determined(k)` equals `force(k, value at determiner(k))`. Assigning a
//! node therefore fixes every node it determines, transitively, and the
//! search only branches on nodes nothing has fixed yet.

use std::collections::HashMap;
use std::hash::Hash;

use crate::cat::{CatBuilder, FinCat, Relabel};
use crate::error::Result;

pub(crate) trait FamilyProblem {
    type V: Clone + Eq;

    fn nodes(&self) -> usize;
    /// (determined, determiner) for every constraint.
    fn constraints(&self) -> &[(usize, usize)];
    fn force(&self, k: usize, v: &Self::V) -> Self::V;
    /// Candidate values for `node`. `known` lists constraints k with
    /// determiner `node` whose determined node already has a value; the
    /// candidates may ignore them, since they are checked afterwards.
    fn candidates(&self, node: usize, known: &[(usize, &Self::V)]) -> Result<Vec<Self::V>>;
}

/// Every compatible family, or `overflow()` once more than `cap` are found.
pub(crate) fn search<P: FamilyProblem>(
    p: &P,
    cap: usize,
    overflow: impl Fn() -> crate::CatError,
) -> Result<Vec<Vec<P::V>>> {
    let n = p.nodes();
    let cons = p.constraints();
    let mut by_determiner = vec![Vec::new(); n];
    for (k, &(_, r)) in cons.iter().enumerate() {
        by_determiner[r].push(k);
    }
    let mut out = Vec::new();
    let mut vals: Vec<Option<P::V>> = vec![None; n];
    let ctx = Ctx { p, by_determiner: &by_determiner, cap, overflow: &overflow };
    ctx.rec(&mut vals, &mut out)?;
    Ok(out)
}

struct Ctx<'a, P: FamilyProblem, O> {
    p: &'a P,
    by_determiner: &'a [Vec<usize>],
    cap: usize,
    overflow: &'a O,
}

impl<P: FamilyProblem, O: Fn() -> crate::CatError> Ctx<'_, P, O> {
    /// Assigns `v` at `node` and everything it forces; false on a clash.
    fn assign(&self, vals: &mut [Option<P::V>], node: usize, v: P::V, trail: &mut Vec<usize>) -> bool {
        let cons = self.p.constraints();
        vals[node] = Some(v);
        trail.push(node);
        let mut work = vec![node];
        while let Some(r) = work.pop() {
            for &k in &self.by_determiner[r] {
                let d = cons[k].0;
                let forced = self.p.force(k, vals[r].as_ref().expect("assigned"));
                match &vals[d] {
                    Some(old) => {
                        if *old != forced {
                            return false;
                        }
                    }
                    None => {
                        vals[d] = Some(forced);
                        trail.push(d);
                        work.push(d);
                    }
                }
            }
        }
        true
    }

    fn rec(&self, vals: &mut Vec<Option<P::V>>, out: &mut Vec<Vec<P::V>>) -> Result<()> {
        let cons = self.p.constraints();
        // most constrained free node, then the one determining most others
        let next = (0..vals.len()).filter(|&x| vals[x].is_none()).max_by_key(|&x| {
            let known = self.by_determiner[x].iter().filter(|&&k| vals[cons[k].0].is_some()).count();
            (known, self.by_determiner[x].len(), std::cmp::Reverse(x))
        });
        let Some(node) = next else {
            if out.len() >= self.cap {
                return Err((self.overflow)());
            }
            out.push(vals.iter().map(|v| v.clone().expect("complete")).collect());
            return Ok(());
        };
        let known: Vec<(usize, &P::V)> = self.by_determiner[node]
            .iter()
            .filter_map(|&k| vals[cons[k].0].as_ref().map(|v| (k, v)))
            .collect();
        let cands = self.p.candidates(node, &known)?;
        for v in cands {
            let mut trail = Vec::new();
            if self.assign(vals, node, v, &mut trail) {
                self.rec(vals, out)?;
            }
            for x in trail {
                vals[x] = None;
            }
        }
        Ok(())
    }
}

/// Builds the category of families from its objects and morphisms.
/// Morphisms are (src, tgt, key, id); `identity(x)` and `compose(g, f)` work
/// on keys.
pub(crate) fn assemble<K: Hash + Eq + Clone>(
    object_ids: Vec<String>,
    morphisms: Vec<(usize, usize, K, String)>,
    identity: impl Fn(usize) -> K,
    compose: impl Fn(&K, &K) -> K,
) -> Result<(FinCat, Relabel, Vec<K>)> {
    let mut b = CatBuilder::new();
    for id in &object_ids {
        b.object(id.clone());
    }
    let mut index: HashMap<(usize, usize, K), usize> = HashMap::new();
    let mut keys = Vec::with_capacity(morphisms.len());
    let mut ends = Vec::with_capacity(morphisms.len());
    for (s, t, k, id) in morphisms {
        let m = b.morphism(id, s, t);
        index.insert((s, t, k.clone()), m);
        keys.push(k);
        ends.push((s, t));
    }
    for x in 0..object_ids.len() {
        b.set_identity(x, index[&(x, x, identity(x))]);
    }
    let (cat, re) = b.build(|g, f| index[&(ends[f].0, ends[g].1, compose(&keys[g], &keys[f]))])?;
    let mut sorted = keys.clone();
    for (old, k) in keys.into_iter().enumerate() {
        sorted[re.morphisms[old]] = k;
    }
    Ok((cat, re, sorted))
}
