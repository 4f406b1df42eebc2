//! Backtracking enumeration of functors and natural transformations.
//!
//! Results come back in canonical order: lexicographic in the object images
//! (domain index order), then in the morphism images.

use crate::cat::{FinCat, FunctorMaps};

/// The enumeration produced more results than allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Constraints on the functors to enumerate.
pub struct FunctorQuery<'a> {
    pub dom: &'a FinCat,
    pub cod: &'a FinCat,
    /// Allowed images per domain object; all objects when `None`.
    pub object_candidates: Option<Vec<Vec<usize>>>,
    /// Extra condition on the image of each non-identity morphism.
    pub morphism_filter: Option<&'a (dyn Fn(usize, usize) -> bool + Sync)>,
}

impl<'a> FunctorQuery<'a> {
    pub fn new(dom: &'a FinCat, cod: &'a FinCat) -> Self {
        FunctorQuery { dom, cod, object_candidates: None, morphism_filter: None }
    }

    fn allows(&self, f: usize, g: usize) -> bool {
        self.morphism_filter.is_none_or(|p| p(f, g))
    }
}

struct Plan {
    order: Vec<usize>,
    // per position: triples (g, f, h) with h = g∘f whose last-assigned member sits at this position
    checks: Vec<Vec<(usize, usize, usize)>>,
    // per position: (g, f) with g∘f = order[pos] and both assigned earlier
    forcing: Vec<Vec<(usize, usize)>>,
}

fn plan(dom: &FinCat) -> Plan {
    let nonid: Vec<usize> = dom.non_identity_morphisms().collect();
    let mut factorizations = vec![0usize; dom.morphism_count()];
    for (g, f) in dom.composable_pairs() {
        factorizations[dom.compose(g, f)] += 1;
    }
    let mut order = nonid.clone();
    order.sort_by_key(|&f| (factorizations[f], f));
    let mut pos = vec![usize::MAX; dom.morphism_count()];
    for (k, &f) in order.iter().enumerate() {
        pos[f] = k;
    }
    let mut checks = vec![Vec::new(); order.len()];
    let mut forcing = vec![Vec::new(); order.len()];
    for (g, f) in dom.composable_pairs() {
        let h = dom.compose(g, f);
        let hp = if dom.is_identity(h) { 0 } else { pos[h] };
        let last = pos[g].max(pos[f]).max(if dom.is_identity(h) { 0 } else { hp });
        checks[last].push((g, f, h));
        if !dom.is_identity(h) && hp > pos[g] && hp > pos[f] {
            forcing[hp].push((g, f));
        }
    }
    Plan { order, checks, forcing }
}

/// Enumerates every functor satisfying the query; fails once more than
/// `limit` functors have been found.
pub fn enumerate_functors(q: &FunctorQuery<'_>, limit: usize) -> Result<Vec<FunctorMaps>, Overflow> {
    let (dom, cod) = (q.dom, q.cod);
    let n = dom.object_count();
    let cands: Vec<Vec<usize>> = match &q.object_candidates {
        Some(c) => c.clone(),
        None => vec![(0..cod.object_count()).collect(); n],
    };
    // morphisms to check when the later endpoint is assigned
    let mut edge_checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in dom.non_identity_morphisms() {
        edge_checks[dom.src(f).max(dom.tgt(f))].push(f);
    }
    let plan = plan(dom);
    let mut out = Vec::new();
    let mut objects = vec![usize::MAX; n];
    let mut st = State { q, plan: &plan, cands: &cands, edge_checks: &edge_checks, out: &mut out, limit };
    let mut morphisms = vec![usize::MAX; dom.morphism_count()];
    st.objects(0, &mut objects, &mut morphisms)?;
    out.sort();
    Ok(out)
}

struct State<'q, 'a> {
    q: &'q FunctorQuery<'a>,
    plan: &'q Plan,
    cands: &'q [Vec<usize>],
    edge_checks: &'q [Vec<usize>],
    out: &'q mut Vec<FunctorMaps>,
    limit: usize,
}

impl State<'_, '_> {
    fn objects(&mut self, x: usize, objects: &mut Vec<usize>, morphisms: &mut Vec<usize>) -> Result<(), Overflow> {
        let (dom, cod) = (self.q.dom, self.q.cod);
        if x == dom.object_count() {
            for y in 0..dom.object_count() {
                morphisms[dom.identity(y)] = cod.identity(objects[y]);
            }
            return self.morphisms(0, objects, morphisms);
        }
        for &c in &self.cands[x] {
            objects[x] = c;
            let ok = self.edge_checks[x].iter().all(|&f| {
                cod.hom(objects[dom.src(f)], objects[dom.tgt(f)]).iter().any(|&g| self.q.allows(f, g))
            });
            if ok {
                self.objects(x + 1, objects, morphisms)?;
            }
        }
        objects[x] = usize::MAX;
        Ok(())
    }

    fn morphisms(&mut self, k: usize, objects: &[usize], morphisms: &mut Vec<usize>) -> Result<(), Overflow> {
        let (dom, cod) = (self.q.dom, self.q.cod);
        if k == self.plan.order.len() {
            if self.out.len() >= self.limit {
                return Err(Overflow);
            }
            self.out.push(FunctorMaps { objects: objects.to_vec(), morphisms: morphisms.clone() });
            return Ok(());
        }
        let f = self.plan.order[k];
        let hom = cod.hom(objects[dom.src(f)], objects[dom.tgt(f)]);
        let forced = self.plan.forcing[k].first().map(|&(g, h)| cod.compose(morphisms[g], morphisms[h]));
        let candidates: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => hom.to_vec(),
        };
        for g in candidates {
            if !self.q.allows(f, g) {
                continue;
            }
            morphisms[f] = g;
            let ok = self.plan.checks[k]
                .iter()
                .all(|&(a, b, h)| cod.compose(morphisms[a], morphisms[b]) == morphisms[h]);
            if ok {
                self.morphisms(k + 1, objects, morphisms)?;
            }
        }
        morphisms[f] = usize::MAX;
        Ok(())
    }
}

/// Enumerates natural transformations `src ⇒ tgt` between functors
/// `dom → cod`, optionally restricting each component.
pub fn enumerate_nat(
    dom: &FinCat,
    cod: &FinCat,
    src: &FunctorMaps,
    tgt: &FunctorMaps,
    component_filter: Option<&dyn Fn(usize, usize) -> bool>,
    limit: usize,
) -> Result<Vec<Vec<usize>>, Overflow> {
    let n = dom.object_count();
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in dom.non_identity_morphisms() {
        checks[dom.src(f).max(dom.tgt(f))].push(f);
    }
    let mut out = Vec::new();
    let mut comps = vec![usize::MAX; n];
    fn rec(
        x: usize,
        dom: &FinCat,
        cod: &FinCat,
        src: &FunctorMaps,
        tgt: &FunctorMaps,
        filter: Option<&dyn Fn(usize, usize) -> bool>,
        checks: &[Vec<usize>],
        comps: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<(), Overflow> {
        if x == dom.object_count() {
            if out.len() >= limit {
                return Err(Overflow);
            }
            out.push(comps.clone());
            return Ok(());
        }
        for &a in cod.hom(src.objects[x], tgt.objects[x]) {
            if let Some(p) = filter {
                if !p(x, a) {
                    continue;
                }
            }
            comps[x] = a;
            let ok = checks[x].iter().all(|&f| {
                let (s, t) = (dom.src(f), dom.tgt(f));
                cod.compose(tgt.morphisms[f], comps[s]) == cod.compose(comps[t], src.morphisms[f])
            });
            if ok {
                rec(x + 1, dom, cod, src, tgt, filter, checks, comps, out, limit)?;
            }
        }
        comps[x] = usize::MAX;
        Ok(())
    }
    rec(0, dom, cod, src, tgt, component_filter, &checks, &mut comps, &mut out, limit)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;

    /// Independent enumerator: every pair of (object map, morphism map),
    /// kept when functorial. Only usable on tiny inputs.
    fn brute_force(dom: &FinCat, cod: &FinCat) -> Vec<FunctorMaps> {
        let n = dom.object_count();
        let m = dom.morphism_count();
        let mut out = Vec::new();
        let no = cod.object_count().pow(n as u32);
        let nm = cod.morphism_count().pow(m as u32);
        for a in 0..no {
            let objects: Vec<usize> = (0..n).map(|k| (a / cod.object_count().pow(k as u32)) % cod.object_count()).collect();
            for b in 0..nm {
                let morphisms: Vec<usize> =
                    (0..m).map(|k| (b / cod.morphism_count().pow(k as u32)) % cod.morphism_count()).collect();
                let maps = FunctorMaps { objects: objects.clone(), morphisms };
                if maps.check(dom, cod).is_ok() {
                    out.push(maps);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn agrees_with_brute_force_on_small_pairs() {
        let cats = [
            standard::terminal(),
            standard::arrow(),
            standard::walking_iso(),
            standard::parallel_pair(),
            standard::left_zero_monoid(),
            standard::discrete(2),
        ];
        for d in &cats {
            for c in &cats {
                let got = enumerate_functors(&FunctorQuery::new(d, c), usize::MAX).unwrap();
                assert_eq!(got, brute_force(d, c), "{d:?} -> {c:?}");
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let d = standard::discrete(3);
        let c = standard::discrete(3);
        assert_eq!(enumerate_functors(&FunctorQuery::new(&d, &c), 26), Err(Overflow));
        assert_eq!(enumerate_functors(&FunctorQuery::new(&d, &c), 27).unwrap().len(), 27);
    }

    #[test]
    fn nat_trans_on_arrow() {
        let a = standard::arrow();
        let fs = enumerate_functors(&FunctorQuery::new(&a, &a), 100).unwrap();
        assert_eq!(fs.len(), 3);
        let total: usize = fs
            .iter()
            .flat_map(|f| fs.iter().map(move |g| (f, g)))
            .map(|(f, g)| enumerate_nat(&a, &a, f, g, None, 100).unwrap().len())
            .sum();
        // three identities plus three non-identity transformations
        assert_eq!(total, 6);
    }
}
