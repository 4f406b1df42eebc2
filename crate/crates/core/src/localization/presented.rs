//! Categories given by generators and relations, completed by bounded coset
//! enumeration.
//!
//! Every class of paths out of every object is a node; generators act on
//! nodes by postcomposition. Each relation is scanned at each node and the
//! two endpoints are merged, merges propagate through the action table, and
//! the process stops once every live node has all its generators defined and
//! all relations scanned. Nodes whose word would exceed the length bound, or
//! a live node count above the size bound, abort with a witness report.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cat::{CatBuilder, FinCat, MarkedFinCat};
use crate::error::{BoundKind, BoundReport, CatError, Result};

/// A generating arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrow {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// `lhs = rhs` between parallel paths written in application order; the
/// empty path is the identity of the object the other side lives on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordBounds {
    pub max_word_length: usize,
    pub max_morphisms: usize,
}

impl Default for WordBounds {
    fn default() -> Self {
        WordBounds { max_word_length: 8, max_morphisms: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentedCat {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub relations: Vec<Relation>,
    /// Identity names, `id_<object>` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<BTreeMap<String, String>>,
    /// Arrows to invert formally before completion.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub marked: Vec<String>,
}

/// Name of the formal inverse of a generator.
pub fn inverse_name(f: &str) -> String {
    format!("inv({f})")
}

/// Generators: the non-identity morphisms, then a formal inverse for each
/// marked one. Relations: every composite of two non-identity morphisms,
/// then both inverse laws for each marked generator.
pub fn present(c: &MarkedFinCat) -> PresentedCat {
    let cat = &c.cat;
    let oid = |x: usize| cat.object_id(x).to_string();
    let mid = |f: usize| cat.morphism_id(f).to_string();
    let mut arrows: Vec<Arrow> =
        cat.non_identity_morphisms().map(|f| Arrow { id: mid(f), src: oid(cat.src(f)), tgt: oid(cat.tgt(f)) }).collect();
    let marked: Vec<usize> = cat.non_identity_morphisms().filter(|&f| c.is_marked(f)).collect();
    for &f in &marked {
        arrows.push(Arrow { id: inverse_name(&mid(f)), src: oid(cat.tgt(f)), tgt: oid(cat.src(f)) });
    }
    let path = |h: usize| if cat.is_identity(h) { vec![] } else { vec![mid(h)] };
    let mut relations: Vec<Relation> = cat
        .composable_pairs()
        .map(|(g, f)| Relation { lhs: vec![mid(f), mid(g)], rhs: path(cat.compose(g, f)) })
        .collect();
    for &f in &marked {
        relations.push(Relation { lhs: vec![mid(f), inverse_name(&mid(f))], rhs: vec![] });
        relations.push(Relation { lhs: vec![inverse_name(&mid(f)), mid(f)], rhs: vec![] });
    }
    let identities = (0..cat.object_count()).map(|x| (oid(x), mid(cat.identity(x)))).collect();
    PresentedCat { objects: cat.objects().to_vec(), arrows, relations, identities: Some(identities), marked: vec![] }
}

/// A finished completion: the category and the morphism each arrow became.
#[derive(Debug, Clone)]
pub struct Completion {
    pub cat: Arc<FinCat>,
    pub generators: Vec<usize>,
}

struct Resolved {
    src: Vec<usize>,
    tgt: Vec<usize>,
    /// position of each generator among the generators out of its source
    pos: Vec<usize>,
    out: Vec<Vec<usize>>,
    rels_at: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
}

impl PresentedCat {
    /// The presentation with formal inverses and inverse laws added for
    /// every arrow listed in `marked`.
    pub fn with_inverses(&self) -> Result<PresentedCat> {
        let mut p = self.clone();
        p.marked.clear();
        for m in &self.marked {
            let a = self
                .arrows
                .iter()
                .find(|a| &a.id == m)
                .ok_or_else(|| CatError::InvalidPresentation(format!("marked arrow {m} is not a generator")))?
                .clone();
            let inv = inverse_name(&a.id);
            p.arrows.push(Arrow { id: inv.clone(), src: a.tgt.clone(), tgt: a.src.clone() });
            p.relations.push(Relation { lhs: vec![a.id.clone(), inv.clone()], rhs: vec![] });
            p.relations.push(Relation { lhs: vec![inv, a.id.clone()], rhs: vec![] });
        }
        Ok(p)
    }

    fn identity_name(&self, x: &str) -> String {
        self.identities.as_ref().and_then(|m| m.get(x).cloned()).unwrap_or_else(|| format!("id_{x}"))
    }

    fn resolve(&self) -> Result<Resolved> {
        let bad = |s: String| CatError::InvalidPresentation(s);
        let obj: BTreeMap<&str, usize> = self.objects.iter().enumerate().map(|(k, o)| (o.as_str(), k)).collect();
        if obj.len() != self.objects.len() {
            return Err(bad("duplicate object id".into()));
        }
        let n = self.objects.len();
        let mut gen: BTreeMap<&str, usize> = BTreeMap::new();
        let (mut src, mut tgt, mut pos) = (Vec::new(), Vec::new(), Vec::new());
        let mut out = vec![Vec::new(); n];
        for (k, a) in self.arrows.iter().enumerate() {
            let s = *obj.get(a.src.as_str()).ok_or_else(|| bad(format!("arrow {} has unknown source {}", a.id, a.src)))?;
            let t = *obj.get(a.tgt.as_str()).ok_or_else(|| bad(format!("arrow {} has unknown target {}", a.id, a.tgt)))?;
            if gen.insert(a.id.as_str(), k).is_some() {
                return Err(bad(format!("duplicate arrow id {}", a.id)));
            }
            src.push(s);
            tgt.push(t);
            pos.push(out[s].len());
            out[s].push(k);
        }
        let mut rels_at = vec![Vec::new(); n];
        for r in &self.relations {
            let conv = |p: &[String]| -> Result<Vec<usize>> {
                p.iter().map(|g| gen.get(g.as_str()).copied().ok_or_else(|| bad(format!("unknown arrow {g} in a relation")))).collect()
            };
            let (l, rr) = (conv(&r.lhs)?, conv(&r.rhs)?);
            let ends = |p: &[usize]| -> Result<Option<(usize, usize)>> {
                if p.is_empty() {
                    return Ok(None);
                }
                for w in p.windows(2) {
                    if tgt[w[0]] != src[w[1]] {
                        return Err(bad(format!("path {:?} is not composable", r.lhs)));
                    }
                }
                Ok(Some((src[p[0]], tgt[*p.last().expect("nonempty")])))
            };
            let at = match (ends(&l)?, ends(&rr)?) {
                (Some(a), Some(b)) if a == b => a.0,
                (Some((s, t)), None) | (None, Some((s, t))) if s == t => s,
                (None, None) => return Err(bad("a relation needs at least one nonempty side".into())),
                _ => return Err(bad(format!("relation {:?} = {:?} is between non-parallel paths", r.lhs, r.rhs))),
            };
            rels_at[at].push((l, rr));
        }
        Ok(Resolved { src, tgt, pos, out, rels_at })
    }

    /// Runs the enumeration to completion or to the first bound hit.
    pub fn complete(&self, bounds: &WordBounds) -> Result<Completion> {
        let p = if self.marked.is_empty() { self.clone() } else { self.with_inverses()? };
        let r = p.resolve()?;
        let mut e = Enumerator { p: &p, r: &r, bounds, src: vec![], tgt: vec![], depth: vec![], next: vec![], parent: vec![], live: 0 };
        for x in 0..p.objects.len() {
            e.node(x, x, 0);
        }
        let mut i = 0;
        while i < e.parent.len() {
            if e.find(i) == i {
                for k in 0..r.rels_at[e.tgt[i]].len() {
                    let (l, rr) = &r.rels_at[e.tgt[i]][k];
                    let a = e.trace(i, l)?;
                    let b = e.trace(i, rr)?;
                    e.coincide(a, b);
                    if e.find(i) != i {
                        break;
                    }
                }
            }
            if e.find(i) == i {
                for &g in &r.out[e.tgt[i]] {
                    e.step(i, g)?;
                }
            }
            i += 1;
        }
        e.finish()
    }
}

struct Enumerator<'a> {
    p: &'a PresentedCat,
    r: &'a Resolved,
    bounds: &'a WordBounds,
    src: Vec<usize>,
    tgt: Vec<usize>,
    depth: Vec<usize>,
    next: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
}

const UNDEF: usize = usize::MAX;

impl Enumerator<'_> {
    fn node(&mut self, s: usize, t: usize, depth: usize) -> usize {
        self.src.push(s);
        self.tgt.push(t);
        self.depth.push(depth);
        self.next.push(vec![UNDEF; self.r.out[t].len()]);
        self.parent.push(self.parent.len());
        self.live += 1;
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn report(&mut self, kind: BoundKind, limit: usize, s: usize, t: usize) -> BoundReport {
        let roots: Vec<usize> = (0..self.parent.len()).filter(|&x| self.find(x) == x).collect();
        let hom_size = roots.iter().filter(|&&x| self.src[x] == s && self.tgt[x] == t).count();
        BoundReport {
            kind,
            limit,
            frontier: self.live,
            hom: (self.p.objects[s].clone(), self.p.objects[t].clone()),
            hom_size,
        }
    }

    /// The node n·g, defining it if needed.
    fn step(&mut self, n: usize, g: usize) -> Result<usize> {
        let n = self.find(n);
        let slot = self.r.pos[g];
        let x = self.next[n][slot];
        if x != UNDEF {
            return Ok(self.find(x));
        }
        let (s, t, d) = (self.src[n], self.r.tgt[g], self.depth[n] + 1);
        if d > self.bounds.max_word_length {
            return Err(CatError::WordBoundExceeded(self.report(BoundKind::WordLength, self.bounds.max_word_length, s, t)));
        }
        if self.live >= self.bounds.max_morphisms || self.parent.len() >= 16 * self.bounds.max_morphisms {
            return Err(CatError::LocalizationTooLarge(self.report(BoundKind::Morphisms, self.bounds.max_morphisms, s, t)));
        }
        let m = self.node(s, t, d);
        self.next[n][slot] = m;
        Ok(m)
    }

    fn trace(&mut self, n: usize, path: &[usize]) -> Result<usize> {
        let mut x = n;
        for &g in path {
            x = self.step(x, g)?;
        }
        Ok(self.find(x))
    }

    fn coincide(&mut self, a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, kill) = if a < b { (a, b) } else { (b, a) };
            self.parent[kill] = keep;
            self.live -= 1;
            for slot in 0..self.next[kill].len() {
                let y = self.next[kill][slot];
                if y == UNDEF {
                    continue;
                }
                let z = self.next[keep][slot];
                if z == UNDEF {
                    self.next[keep][slot] = y;
                } else {
                    queue.push((y, z));
                }
            }
        }
    }

    fn finish(mut self) -> Result<Completion> {
        let n = self.p.objects.len();
        // shortlex words by breadth-first search from the identities
        let mut word: Vec<Option<Vec<usize>>> = vec![None; self.parent.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for x in 0..n {
            let r = self.find(x);
            word[r] = Some(vec![]);
            queue.push_back(r);
        }
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for &g in &self.r.out[self.tgt[c]] {
                let y = self.next[c][self.r.pos[g]];
                let y = self.find(y);
                if word[y].is_none() {
                    let mut w = word[c].clone().expect("visited");
                    w.push(g);
                    word[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        let mut b = CatBuilder::new();
        for o in &self.p.objects {
            b.object(o.clone());
        }
        let mut index = vec![UNDEF; self.parent.len()];
        for &c in &order {
            let w = word[c].as_ref().expect("visited");
            let id = if w.is_empty() {
                self.p.identity_name(&self.p.objects[self.src[c]])
            } else {
                w.iter().map(|&g| self.p.arrows[g].id.as_str()).collect::<Vec<_>>().join(";")
            };
            index[c] = b.morphism(id, self.src[c], self.tgt[c]);
        }
        for x in 0..n {
            let r = self.find(x);
            b.set_identity(x, index[r]);
        }
        let mut classes = order.clone();
        classes.sort_by_key(|&c| index[c]);
        let (cat, re) = b.build(|g, f| {
            // follow the word of g from the class of f
            let mut x = classes[f];
            for &a in word[classes[g]].as_ref().expect("visited") {
                x = self.find(self.next[x][self.r.pos[a]]);
            }
            index[x]
        })?;
        let generators = (0..self.p.arrows.len())
            .map(|g| {
                // node x is the identity of object x
                let root = self.find(self.r.src[g]);
                let c = self.find(self.next[root][self.r.pos[g]]);
                re.morphisms[index[c]]
            })
            .collect();
        Ok(Completion { cat: Arc::new(cat), generators })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;

    #[test]
    fn presentation_counts() {
        let t = present(&MarkedFinCat::sharp(standard::terminal()));
        assert!(t.arrows.is_empty() && t.relations.is_empty());
        let a = present(&MarkedFinCat::sharp(standard::arrow()));
        let ids: Vec<&str> = a.arrows.iter().map(|x| x.id.as_str()).collect();
        assert_eq!(ids, ["u", "inv(u)"]);
        assert_eq!(a.relations.len(), 2);
        assert_eq!(a.relations[0], Relation { lhs: vec!["u".into(), "inv(u)".into()], rhs: vec![] });
        let w = standard::walking_iso();
        let pairs = w.composable_pairs().count();
        let isos = w.non_identity_morphisms().filter(|&f| w.is_iso(f)).count();
        let p = present(&MarkedFinCat::flat(w));
        assert_eq!(p.relations.len(), pairs + 2 * isos);
        assert_eq!(p.arrows.len(), 4);
    }

    #[test]
    fn completion_of_a_category_returns_it() {
        for c in [standard::chain2(), standard::split_idempotent(), standard::left_zero_monoid(), standard::commutative_square()] {
            let p = present(&MarkedFinCat::flat(c.clone()));
            let done = p.complete(&WordBounds::default()).unwrap();
            assert_eq!(*done.cat, c);
        }
    }

    #[test]
    fn sharp_arrow_becomes_walking_iso() {
        let p = present(&MarkedFinCat::sharp(standard::arrow()));
        let done = p.complete(&WordBounds::default()).unwrap();
        let ids: Vec<&str> = done.cat.morphisms().iter().map(|m| m.id.as_str()).collect();
        assert_eq!(ids, ["id_0", "id_1", "inv(u)", "u"]);
        assert!(done.cat.is_groupoid());
    }

    #[test]
    fn free_monoid_inverted_hits_word_bound() {
        let p = PresentedCat {
            objects: vec!["*".into()],
            arrows: vec![Arrow { id: "m".into(), src: "*".into(), tgt: "*".into() }],
            relations: vec![],
            identities: None,
            marked: vec!["m".into()],
        };
        match p.complete(&WordBounds::default()) {
            Err(CatError::WordBoundExceeded(r)) => {
                assert_eq!(r.limit, 8);
                assert_eq!(r.hom, ("*".to_string(), "*".to_string()));
            }
            other => panic!("expected a word bound, got {other:?}"),
        }
        let small = WordBounds { max_word_length: 100, max_morphisms: 10 };
        assert!(matches!(p.complete(&small), Err(CatError::LocalizationTooLarge(_))));
    }

    #[test]
    fn rejects_non_parallel_relations() {
        let p = PresentedCat {
            objects: vec!["a".into(), "b".into()],
            arrows: vec![Arrow { id: "f".into(), src: "a".into(), tgt: "b".into() }],
            relations: vec![Relation { lhs: vec!["f".into()], rhs: vec![] }],
            identities: None,
            marked: vec![],
        };
        assert!(matches!(p.complete(&WordBounds::default()), Err(CatError::InvalidPresentation(_))));
    }

    #[test]
    fn cyclic_group_relation() {
        // one generator t with t³ = 1
        let p = PresentedCat {
            objects: vec!["*".into()],
            arrows: vec![Arrow { id: "t".into(), src: "*".into(), tgt: "*".into() }],
            relations: vec![Relation { lhs: vec!["t".into(); 3], rhs: vec![] }],
            identities: None,
            marked: vec![],
        };
        let done = p.complete(&WordBounds::default()).unwrap();
        assert_eq!(done.cat.morphism_count(), 3);
        assert!(done.cat.is_groupoid());
        assert!(done.cat.check_axioms().violations.is_empty());
    }
}
