//! Isomorphism and equivalence of finite categories.
//!
//! Equivalence is decided through skeletons: finite categories are
//! equivalent iff their skeletons are isomorphic, and isomorphism is a
//! backtracking search over object bijections followed by morphism
//! bijections, with composites propagated as soon as both factors are fixed.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cat::{full_subcategory, FinCat, Functor, FunctorMaps};
use crate::error::{CatError, Result};
use crate::limits::UnionFind;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Isomorphic,
    Equivalent,
    Inequivalent,
}

/// A functor C → D with a functor D → C inverse to it up to isomorphism.
#[derive(Debug, Clone)]
pub struct Witness {
    pub forward: Functor,
    pub backward: Functor,
}

/// A concrete invariant on which the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub invariant: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
}

impl EquivalenceVerdict {
    pub fn is_positive(&self) -> bool {
        self.verdict != Verdict::Inequivalent
    }

    fn negative(invariant: &str, left: impl ToString, right: impl ToString) -> Self {
        EquivalenceVerdict {
            verdict: Verdict::Inequivalent,
            witness: None,
            certificate: Some(Certificate { invariant: invariant.into(), left: left.to_string(), right: right.to_string() }),
        }
    }

    /// Re-checks a positive witness: both functors valid, both equivalences,
    /// and for an isomorphism verdict both bijective.
    pub fn revalidate(&self) -> bool {
        let Some(w) = &self.witness else {
            return !self.is_positive();
        };
        let ok = |f: &Functor| f.maps().check(f.dom(), f.cod()).is_ok() && f.is_equivalence();
        let iso = self.verdict != Verdict::Isomorphic || (w.forward.is_isomorphism() && w.backward.is_isomorphism());
        ok(&w.forward) && ok(&w.backward) && iso
    }
}

#[derive(Serialize)]
struct FunctorJson {
    object_map: BTreeMap<String, String>,
    morphism_map: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct VerdictJson {
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<FunctorJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse: Option<FunctorJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
}

impl Serialize for EquivalenceVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = |f: &Functor| FunctorJson { object_map: f.object_map_ids(), morphism_map: f.morphism_map_ids() };
        VerdictJson {
            verdict: self.verdict,
            witness: self.witness.as_ref().map(|w| json(&w.forward)),
            inverse: self.witness.as_ref().map(|w| json(&w.backward)),
            certificate: self.certificate.clone(),
        }
        .serialize(s)
    }
}

/// Isomorphism classes of objects, labelled by their least member.
pub fn iso_classes(c: &FinCat) -> Vec<usize> {
    let mut uf = UnionFind::new(c.object_count());
    for f in c.isomorphisms() {
        uf.union(c.src(f), c.tgt(f));
    }
    (0..c.object_count()).map(|x| uf.find(x)).collect()
}

/// The full subcategory on the least object of every isomorphism class,
/// with its inclusion.
pub fn skeleton(c: &Arc<FinCat>) -> (Arc<FinCat>, Functor) {
    let class = iso_classes(c);
    let reps: Vec<usize> = (0..c.object_count()).filter(|&x| class[x] == x).collect();
    full_subcategory(c, &reps)
}

pub fn is_skeletal(c: &FinCat) -> bool {
    iso_classes(c).iter().enumerate().all(|(x, &r)| x == r)
}

/// A retraction C → skeleton(C) inverse to the inclusion up to isomorphism.
fn retraction(c: &Arc<FinCat>, skel: &Arc<FinCat>, incl: &Functor) -> Functor {
    let class = iso_classes(c);
    let skel_of: BTreeMap<usize, usize> = (0..skel.object_count()).map(|k| (incl.object(k), k)).collect();
    // an isomorphism x → rep(x) for every object
    let to_rep: Vec<usize> = (0..c.object_count())
        .map(|x| {
            let r = class[x];
            *c.hom(x, r).iter().find(|&&f| c.is_iso(f)).expect("isomorphic to its class representative")
        })
        .collect();
    let mor_of: BTreeMap<usize, usize> = (0..skel.morphism_count()).map(|k| (incl.morphism(k), k)).collect();
    let objects = (0..c.object_count()).map(|x| skel_of[&class[x]]).collect();
    let morphisms = (0..c.morphism_count())
        .map(|f| {
            let (x, y) = (c.src(f), c.tgt(f));
            let back = c.inverse(to_rep[x]).expect("iso");
            let g = c.compose(to_rep[y], c.compose(f, back));
            mor_of[&g]
        })
        .collect();
    Functor::new_unchecked(c.clone(), skel.clone(), FunctorMaps { objects, morphisms })
}

fn hom_sizes(c: &FinCat) -> Vec<usize> {
    let n = c.object_count();
    let mut v: Vec<usize> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| c.hom(x, y).len()).collect();
    v.sort_unstable();
    v
}

fn endo_sizes(c: &FinCat) -> Vec<usize> {
    let mut v: Vec<usize> = (0..c.object_count()).map(|x| c.hom(x, x).len()).collect();
    v.sort_unstable();
    v
}

type ObjSig = (usize, Vec<usize>, Vec<usize>, usize);

fn object_sig(c: &FinCat, x: usize) -> ObjSig {
    let n = c.object_count();
    let mut out: Vec<usize> = (0..n).map(|y| c.hom(x, y).len()).collect();
    let mut inn: Vec<usize> = (0..n).map(|y| c.hom(y, x).len()).collect();
    out.sort_unstable();
    inn.sort_unstable();
    let isos = c.outgoing(x).iter().filter(|&&f| c.is_iso(f)).count();
    (c.hom(x, x).len(), out, inn, isos)
}

type MorSig = (bool, bool, bool, usize, usize);

fn morphism_sigs(c: &FinCat) -> Vec<MorSig> {
    let mut factors = vec![0usize; c.morphism_count()];
    for (g, f) in c.composable_pairs() {
        factors[c.compose(g, f)] += 1;
    }
    (0..c.morphism_count())
        .map(|f| {
            let endo = c.src(f) == c.tgt(f);
            let idem = endo && c.compose(f, f) == f;
            // order of f in its endomorphism monoid, 0 for non-endomorphisms
            let order = if endo {
                let mut seen = vec![f];
                let mut p = c.compose(f, f);
                while !seen.contains(&p) {
                    seen.push(p);
                    p = c.compose(f, p);
                }
                seen.len()
            } else {
                0
            };
            (c.is_identity(f), c.is_iso(f), idem, factors[f], order)
        })
        .collect()
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

struct IsoSearch<'a> {
    c: &'a FinCat,
    d: &'a FinCat,
    csig: Vec<MorSig>,
    dsig: Vec<MorSig>,
    budget: u64,
    nodes: u64,
}

impl IsoSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CatError::SearchBudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn objects(&mut self, order: &[usize], cands: &[Vec<usize>], k: usize, sigma: &mut Vec<usize>, used: &mut Vec<bool>) -> Result<Option<FunctorMaps>> {
        if k == order.len() {
            return self.morphisms(sigma);
        }
        let x = order[k];
        for &y in &cands[x] {
            if used[y] {
                continue;
            }
            self.tick()?;
            let fits = order[..k].iter().all(|&z| {
                self.c.hom(x, z).len() == self.d.hom(y, sigma[z]).len() && self.c.hom(z, x).len() == self.d.hom(sigma[z], y).len()
            });
            if !fits {
                continue;
            }
            sigma[x] = y;
            used[y] = true;
            if let Some(found) = self.objects(order, cands, k + 1, sigma, used)? {
                return Ok(Some(found));
            }
            used[y] = false;
            sigma[x] = usize::MAX;
        }
        Ok(None)
    }

    fn morphisms(&mut self, sigma: &[usize]) -> Result<Option<FunctorMaps>> {
        let (c, d) = (self.c, self.d);
        let mut tau = vec![usize::MAX; c.morphism_count()];
        let mut used = vec![false; d.morphism_count()];
        let mut trail = Vec::new();
        for x in 0..c.object_count() {
            let ok = self.assign(c.identity(x), d.identity(sigma[x]), sigma, &mut tau, &mut used, &mut trail);
            if !ok {
                return Ok(None);
            }
        }
        let mut order: Vec<usize> = c.non_identity_morphisms().collect();
        order.sort_by_key(|&f| (self.csig[f].3, f));
        if self.rec(&order, 0, sigma, &mut tau, &mut used)? {
            Ok(Some(FunctorMaps { objects: sigma.to_vec(), morphisms: tau }))
        } else {
            Ok(None)
        }
    }

    fn rec(&mut self, order: &[usize], k: usize, sigma: &[usize], tau: &mut Vec<usize>, used: &mut Vec<bool>) -> Result<bool> {
        let Some(pos) = (k..order.len()).find(|&p| tau[order[p]] == usize::MAX) else {
            return Ok(true);
        };
        let f = order[pos];
        let (c, d) = (self.c, self.d);
        let cands: Vec<usize> = d
            .hom(sigma[c.src(f)], sigma[c.tgt(f)])
            .iter()
            .copied()
            .filter(|&g| !used[g] && self.dsig[g] == self.csig[f])
            .collect();
        for g in cands {
            self.tick()?;
            let mut trail = Vec::new();
            if self.assign(f, g, sigma, tau, used, &mut trail) && self.rec(order, pos + 1, sigma, tau, used)? {
                return Ok(true);
            }
            for h in trail {
                used[tau[h]] = false;
                tau[h] = usize::MAX;
            }
        }
        Ok(false)
    }

    /// Sets τ(f) = g and every composite this forces; false on a clash.
    fn assign(&self, f: usize, g: usize, sigma: &[usize], tau: &mut [usize], used: &mut [bool], trail: &mut Vec<usize>) -> bool {
        let (c, d) = (self.c, self.d);
        let mut work = vec![(f, g)];
        while let Some((f, g)) = work.pop() {
            if tau[f] != usize::MAX {
                if tau[f] != g {
                    return false;
                }
                continue;
            }
            let fits = !used[g]
                && d.src(g) == sigma[c.src(f)]
                && d.tgt(g) == sigma[c.tgt(f)]
                && self.csig[f] == self.dsig[g];
            if !fits {
                return false;
            }
            tau[f] = g;
            used[g] = true;
            trail.push(f);
            for &h in c.outgoing(c.tgt(f)) {
                if tau[h] != usize::MAX {
                    work.push((c.compose(h, f), d.compose(tau[h], g)));
                }
            }
            for &h in c.incoming(c.src(f)) {
                if tau[h] != usize::MAX {
                    work.push((c.compose(f, h), d.compose(g, tau[h])));
                }
            }
        }
        true
    }
}

fn inverse_maps(m: &FunctorMaps, d: &FinCat) -> FunctorMaps {
    let mut objects = vec![0; d.object_count()];
    for (x, &y) in m.objects.iter().enumerate() {
        objects[y] = x;
    }
    let mut morphisms = vec![0; d.morphism_count()];
    for (f, &g) in m.morphisms.iter().enumerate() {
        morphisms[g] = f;
    }
    FunctorMaps { objects, morphisms }
}

/// Searches for an isomorphism C ≅ D within `budget` backtracking nodes.
pub fn is_isomorphic_with_budget(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: u64) -> Result<EquivalenceVerdict> {
    if c.object_count() != d.object_count() {
        return Ok(EquivalenceVerdict::negative("object count", c.object_count(), d.object_count()));
    }
    if c.morphism_count() != d.morphism_count() {
        return Ok(EquivalenceVerdict::negative("morphism count", c.morphism_count(), d.morphism_count()));
    }
    let (hc, hd) = (hom_sizes(c), hom_sizes(d));
    if hc != hd {
        return Ok(EquivalenceVerdict::negative("hom-set size multiset", format!("{hc:?}"), format!("{hd:?}")));
    }
    let (ec, ed) = (endo_sizes(c), endo_sizes(d));
    if ec != ed {
        return Ok(EquivalenceVerdict::negative("endomorphism monoid sizes", format!("{ec:?}"), format!("{ed:?}")));
    }
    let osc: Vec<ObjSig> = (0..c.object_count()).map(|x| object_sig(c, x)).collect();
    let osd: Vec<ObjSig> = (0..d.object_count()).map(|x| object_sig(d, x)).collect();
    if sorted(&osc) != sorted(&osd) {
        return Ok(EquivalenceVerdict::negative("object signatures", format!("{:?}", sorted(&osc)), format!("{:?}", sorted(&osd))));
    }
    let (csig, dsig) = (morphism_sigs(c), morphism_sigs(d));
    if sorted(&csig) != sorted(&dsig) {
        return Ok(EquivalenceVerdict::negative("morphism signatures", format!("{:?}", sorted(&csig)), format!("{:?}", sorted(&dsig))));
    }
    let cands: Vec<Vec<usize>> =
        osc.iter().map(|s| (0..d.object_count()).filter(|&y| osd[y] == *s).collect()).collect();
    let mut order: Vec<usize> = (0..c.object_count()).collect();
    order.sort_by_key(|&x| (cands[x].len(), x));
    let mut search = IsoSearch { c, d, csig, dsig, budget, nodes: 0 };
    let mut sigma = vec![usize::MAX; c.object_count()];
    let mut used = vec![false; d.object_count()];
    match search.objects(&order, &cands, 0, &mut sigma, &mut used)? {
        Some(maps) => {
            let back = inverse_maps(&maps, d);
            Ok(EquivalenceVerdict {
                verdict: Verdict::Isomorphic,
                witness: Some(Witness {
                    forward: Functor::new_unchecked(c.clone(), d.clone(), maps),
                    backward: Functor::new_unchecked(d.clone(), c.clone(), back),
                }),
                certificate: None,
            })
        }
        None => Ok(EquivalenceVerdict::negative("isomorphism search", "exhausted", format!("no bijective functor ({} nodes)", search.nodes))),
    }
}

pub fn is_isomorphic(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Result<EquivalenceVerdict> {
    is_isomorphic_with_budget(c, d, DEFAULT_BUDGET)
}

/// Decides C ≃ D by comparing skeletons. A positive witness is transported
/// along the inclusions and retractions of both skeletons.
pub fn is_equivalent_with_budget(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: u64) -> Result<EquivalenceVerdict> {
    let (sc, ic) = skeleton(c);
    let (sd, id) = skeleton(d);
    if sc.object_count() != sd.object_count() {
        return Ok(EquivalenceVerdict::negative("isomorphism classes", sc.object_count(), sd.object_count()));
    }
    let v = is_isomorphic_with_budget(&sc, &sd, budget)?;
    let Some(w) = v.witness else {
        let cert = v.certificate.map(|c| Certificate { invariant: format!("skeleton {}", c.invariant), ..c });
        return Ok(EquivalenceVerdict { verdict: Verdict::Inequivalent, witness: None, certificate: cert });
    };
    let rc = retraction(c, &sc, &ic);
    let rd = retraction(d, &sd, &id);
    let forward = id.after(&w.forward.after(&rc)?)?;
    let backward = ic.after(&w.backward.after(&rd)?)?;
    let verdict = if c.object_count() == sc.object_count() && d.object_count() == sd.object_count() {
        Verdict::Isomorphic
    } else {
        Verdict::Equivalent
    };
    Ok(EquivalenceVerdict { verdict, witness: Some(Witness { forward, backward }), certificate: None })
}

pub fn is_equivalent(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Result<EquivalenceVerdict> {
    is_equivalent_with_budget(c, d, DEFAULT_BUDGET)
}
