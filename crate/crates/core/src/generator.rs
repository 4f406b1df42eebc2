//! Seeded random categories, markings and diagrams.
//!
//! Categories are free categories on random acyclic quivers, quotiented by
//! random identifications of parallel paths, with a few curated non-poset
//! categories mixed in. Identical parameters and seeds give identical output.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cat::{saturate_marking, standard, CatBuilder, FinCat, Functor, FunctorMaps, MarkedFinCat, MarkedFunctor};
use crate::diagram::CatDiagram;
use crate::equiv::iso_classes;
use crate::error::{CatError, Result};
use crate::limits::{SetDiagram, UnionFind};
use crate::search::{enumerate_functors, FunctorQuery};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenParams {
    pub seed: u64,
    pub max_objects: usize,
    /// Cap on non-identity morphisms of a generated base.
    pub max_morphisms: usize,
    pub relation_density: f64,
    pub marking_density: f64,
    pub fiber_max_objects: usize,
    pub fiber_max_morphisms: usize,
    /// Probability of drawing a curated non-poset category instead.
    pub curated_probability: f64,
    /// Fresh fiber draws before diagram generation gives up.
    pub retries: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_objects: 4,
            max_morphisms: 6,
            relation_density: 0.5,
            marking_density: 0.4,
            fiber_max_objects: 3,
            fiber_max_morphisms: 3,
            curated_probability: 0.15,
            retries: 32,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(CatError::Parse(format!("generator parameters: {s}")));
        if self.max_objects == 0 || self.retries == 0 {
            return bad("caps must be positive");
        }
        for d in [self.relation_density, self.marking_density, self.curated_probability] {
            if !(0.0..=1.0).contains(&d) {
                return bad("densities must lie in [0, 1]");
            }
        }
        Ok(())
    }

    /// The generator for instance `k` of a run; streams are independent of
    /// how instances are scheduled.
    pub fn instance(&self, k: u64) -> Generator {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k);
        Generator { p: *self, rng }
    }
}

const EMPTY_FIBER_PROBABILITY: f64 = 1.0 / 32.0;

/// A seeded stream of random structures.
#[derive(Debug, Clone)]
pub struct Generator {
    pub p: GenParams,
    rng: ChaCha8Rng,
}

fn letter(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("e{k}")
    }
}

/// The free category on an acyclic quiver with `n` objects, quotiented by
/// identifying each further parallel path with the first one in its hom-set
/// with probability `density`, then closing under composition. Morphisms
/// are named by their shortest representative path, last arrow first.
pub fn quotient_free<R: Rng>(n: usize, edges: &[(usize, usize)], density: f64, rng: &mut R, path_cap: usize) -> Option<FinCat> {
    // all paths, in order of length, then lexicographically
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..edges.len()).map(|e| vec![e]).collect();
    while !frontier.is_empty() {
        paths.extend(frontier.iter().cloned());
        if paths.len() > path_cap {
            return None;
        }
        let mut next = Vec::new();
        for p in &frontier {
            let end = edges[*p.last().expect("nonempty")].1;
            for (e, &(s, _)) in edges.iter().enumerate() {
                if s == end {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    let ends = |p: &[usize]| (edges[p[0]].0, edges[*p.last().expect("nonempty")].1);
    let index: HashMap<Vec<usize>, usize> = paths.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let mut uf = UnionFind::new(paths.len());
    let mut first: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, p) in paths.iter().enumerate() {
        match first.get(&ends(p)) {
            Some(&r) => {
                if rng.gen_bool(density) {
                    uf.union(r, k);
                }
            }
            None => {
                first.insert(ends(p), k);
            }
        }
    }
    // congruence closure: extend every path and its class root by one arrow
    loop {
        let mut changed = false;
        for (k, p) in paths.iter().enumerate() {
            let r = uf.find(k);
            if r == k {
                continue;
            }
            let rp = &paths[r];
            for (e, &(s, t)) in edges.iter().enumerate() {
                if s == ends(p).1 {
                    let (mut a, mut b) = (p.clone(), rp.clone());
                    a.push(e);
                    b.push(e);
                    changed |= uf.union(index[&a], index[&b]);
                }
                if t == ends(p).0 {
                    let (mut a, mut b) = (vec![e], vec![e]);
                    a.extend(p);
                    b.extend(rp);
                    changed |= uf.union(index[&a], index[&b]);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut bld = CatBuilder::new();
    for x in 0..n {
        bld.object(x.to_string());
    }
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    for (k, p) in paths.iter().enumerate() {
        let r = uf.find(k);
        if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(r) {
            let name: String = p.iter().rev().map(|&e| letter(e)).collect();
            let (s, t) = ends(p);
            e.insert(bld.morphism(name, s, t));
            reps.push(k);
        }
    }
    let ids: Vec<usize> = (0..n).map(|x| bld.identity(x, format!("id_{x}"))).collect();
    let is_id = |m: usize| ids.contains(&m);
    let (cat, _) = bld
        .build(|g, f| {
            if is_id(g) {
                return f;
            }
            if is_id(f) {
                return g;
            }
            let mut p = paths[reps[f]].clone();
            p.extend(&paths[reps[g]]);
            class_of[&uf.find(index[&p])]
        })
        .ok()?;
    Some(cat)
}

impl Generator {
    pub fn from_params(p: GenParams) -> Self {
        Generator { p, rng: ChaCha8Rng::seed_from_u64(p.seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn curated(&mut self, max_objects: usize, max_morphisms: usize) -> Option<FinCat> {
        let all = [standard::walking_iso(), standard::left_zero_monoid(), standard::parallel_pair()];
        let fit: Vec<FinCat> = all
            .into_iter()
            .filter(|c| c.object_count() <= max_objects && c.non_identity_morphisms().count() <= max_morphisms)
            .collect();
        fit.choose(&mut self.rng).cloned()
    }

    /// A random category with between `min_objects` and `max_objects`
    /// objects and at most `max_morphisms` non-identity morphisms.
    pub fn category_in(&mut self, min_objects: usize, max_objects: usize, max_morphisms: usize) -> FinCat {
        if max_objects >= 1 && self.rng.gen_bool(self.p.curated_probability) {
            if let Some(c) = self.curated(max_objects, max_morphisms) {
                return c;
            }
        }
        loop {
            let n = self.rng.gen_range(min_objects..=max_objects);
            if n == 0 {
                return standard::empty();
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut self.rng);
            let pairs = n * (n - 1) / 2;
            let k = if pairs == 0 { 0 } else { self.rng.gen_range(0..=max_morphisms.min(pairs + 1)) };
            let mut edges = Vec::with_capacity(k);
            for _ in 0..k {
                let a = self.rng.gen_range(0..n - 1);
                let b = self.rng.gen_range(a + 1..n);
                edges.push((order[a], order[b]));
            }
            edges.sort_unstable();
            let density = self.p.relation_density;
            if let Some(c) = quotient_free(n, &edges, density, &mut self.rng, 4 * max_morphisms + 16) {
                if c.non_identity_morphisms().count() <= max_morphisms {
                    return c;
                }
            }
        }
    }

    /// A base category within the object and morphism caps. Bases have at
    /// least two objects when the cap allows it; the terminal base only
    /// arises through the curated seeds.
    pub fn category(&mut self) -> FinCat {
        let min = self.p.max_objects.min(2);
        self.category_in(min, self.p.max_objects, self.p.max_morphisms)
    }

    /// A fiber category. Fibers are empty with a small fixed probability:
    /// one empty fiber already empties every limit, so they are kept rare.
    pub fn fiber(&mut self) -> FinCat {
        if self.p.fiber_max_objects == 0 || self.rng.gen_bool(EMPTY_FIBER_PROBABILITY) {
            return standard::empty();
        }
        self.category_in(1, self.p.fiber_max_objects, self.p.fiber_max_morphisms)
    }

    /// Random non-identity morphisms at the marking density, saturated.
    pub fn marking(&mut self, c: Arc<FinCat>) -> MarkedFinCat {
        let seed: Vec<usize> =
            c.non_identity_morphisms().collect::<Vec<_>>().into_iter().filter(|_| self.rng.gen_bool(self.p.marking_density)).collect();
        let marking = saturate_marking(&c, &seed);
        MarkedFinCat { cat: c, marking }
    }

    pub fn marked_category(&mut self) -> MarkedFinCat {
        let c = Arc::new(self.category());
        self.marking(c)
    }

    /// A strict diagram over `base` with random fibers; transitions are
    /// found by backtracking and fibers are redrawn on failure.
    pub fn diagram(&mut self, base: &MarkedFinCat) -> Result<CatDiagram> {
        self.diagram_with_fibers(base, Self::fiber)
    }

    /// Same as [`Generator::diagram`], with fibers drawn by `fiber`.
    /// Isomorphic base objects share one fiber, since their fibers must be
    /// isomorphic and independent draws rarely are.
    pub fn diagram_with_fibers(&mut self, base: &MarkedFinCat, fiber: impl Fn(&mut Self) -> FinCat) -> Result<CatDiagram> {
        let class = iso_classes(&base.cat);
        for _ in 0..self.p.retries {
            let mut drawn = HashMap::new();
            for (x, &k) in class.iter().enumerate() {
                if x == k {
                    drawn.insert(k, Arc::new(fiber(self)));
                }
            }
            let fibers: Vec<Arc<FinCat>> = class.iter().map(|k| drawn[k].clone()).collect();
            if let Some(t) = self.transitions(&base.cat, &fibers) {
                return CatDiagram::from_categories(base.clone(), fibers, t);
            }
        }
        Err(CatError::GenerationExhausted(self.p.retries))
    }

    fn transitions(&mut self, base: &FinCat, fibers: &[Arc<FinCat>]) -> Option<Vec<FunctorMaps>> {
        let mut cands: Vec<Vec<FunctorMaps>> = Vec::with_capacity(base.morphism_count());
        for m in 0..base.morphism_count() {
            let (s, t) = (&fibers[base.src(m)], &fibers[base.tgt(m)]);
            if base.is_identity(m) {
                cands.push(vec![FunctorMaps::identity(s)]);
                continue;
            }
            let mut all = enumerate_functors(&FunctorQuery::new(s, t), 4096).ok()?;
            all.shuffle(&mut self.rng);
            cands.push(all);
        }
        let compose = |g: &FunctorMaps, f: &FunctorMaps| g.after(f);
        functorial_assignment(base, &cands, compose, 20_000)
    }

    /// A strict functor from `base` to finite sets of at most `max` elements.
    pub fn set_diagram(&mut self, base: &Arc<FinCat>, max: usize) -> Result<SetDiagram> {
        let class = iso_classes(base);
        for _ in 0..self.p.retries {
            let mut sizes: Vec<usize> = Vec::with_capacity(class.len());
            for (x, &k) in class.iter().enumerate() {
                let n = if x == k { self.rng.gen_range(0..=max) } else { sizes[k] };
                sizes.push(n);
            }
            let mut cands: Vec<Vec<Vec<usize>>> = Vec::with_capacity(base.morphism_count());
            for m in 0..base.morphism_count() {
                let (s, t) = (sizes[base.src(m)], sizes[base.tgt(m)]);
                if base.is_identity(m) {
                    cands.push(vec![(0..s).collect()]);
                    continue;
                }
                let mut all = all_maps(s, t);
                all.shuffle(&mut self.rng);
                cands.push(all);
            }
            let compose = |g: &Vec<usize>, f: &Vec<usize>| f.iter().map(|&x| g[x]).collect();
            if let Some(actions) = functorial_assignment(base, &cands, compose, 20_000) {
                let values = sizes
                    .iter()
                    .enumerate()
                    .map(|(i, &n)| (0..n).map(|k| format!("{}{k}", base.object_id(i))).collect())
                    .collect();
                return SetDiagram::new(base.clone(), values, actions);
            }
        }
        Err(CatError::GenerationExhausted(self.p.retries))
    }

    /// A random marked functor dom → cod, if one exists.
    pub fn marked_functor(&mut self, dom: &MarkedFinCat, cod: &MarkedFinCat) -> Option<MarkedFunctor> {
        let filter = |f: usize, g: usize| !dom.is_marked(f) || cod.is_marked(g);
        let mut q = FunctorQuery::new(&dom.cat, &cod.cat);
        q.morphism_filter = Some(&filter);
        let all = enumerate_functors(&q, 4096).ok()?;
        let pick = all.choose(&mut self.rng)?.clone();
        let f = Functor::new(dom.cat.clone(), cod.cat.clone(), pick).ok()?;
        MarkedFunctor::new(f, dom.clone(), cod.clone()).ok()
    }

    /// Random subsets of fiber objects, closed under the transitions.
    pub fn closed_subsets(&mut self, d: &CatDiagram) -> Vec<Vec<usize>> {
        let b = d.base_cat();
        let mut keep: Vec<Vec<bool>> =
            d.fibers().iter().map(|f| (0..f.cat.object_count()).map(|_| self.rng.gen_bool(0.5)).collect()).collect();
        loop {
            let mut changed = false;
            for m in 0..b.morphism_count() {
                let (s, t) = (b.src(m), b.tgt(m));
                for x in 0..keep[s].len() {
                    let y = d.transition(m).objects[x];
                    if keep[s][x] && !keep[t][y] {
                        keep[t][y] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        keep.into_iter().map(|k| k.iter().enumerate().filter(|(_, &b)| b).map(|(x, _)| x).collect()).collect()
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn gen_range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }
}

fn all_maps(s: usize, t: usize) -> Vec<Vec<usize>> {
    if t == 0 {
        return if s == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![vec![]];
    for _ in 0..s {
        out = out.into_iter().flat_map(|p: Vec<usize>| (0..t).map(move |y| [p.clone(), vec![y]].concat())).collect();
    }
    out
}

/// Chooses one value per base morphism from `cands` so that every composite
/// is respected, assigning indecomposable morphisms first and forcing
/// composites. Gives up after `budget` nodes.
fn functorial_assignment<V: Clone + PartialEq>(
    base: &FinCat,
    cands: &[Vec<V>],
    compose: impl Fn(&V, &V) -> V,
    budget: usize,
) -> Option<Vec<V>> {
    let mut factors = vec![0usize; base.morphism_count()];
    for (g, f) in base.composable_pairs() {
        factors[base.compose(g, f)] += 1;
    }
    let mut order: Vec<usize> = (0..base.morphism_count()).collect();
    order.sort_by_key(|&m| (!base.is_identity(m), factors[m], m));
    let mut vals: Vec<Option<V>> = vec![None; base.morphism_count()];
    let mut nodes = 0;
    fn consistent<V: PartialEq>(base: &FinCat, vals: &[Option<V>], m: usize, compose: &impl Fn(&V, &V) -> V, cands: &[Vec<V>]) -> bool {
        // every pair involving m whose three members are known must commute
        let check = |g: usize, f: usize| {
            let h = base.compose(g, f);
            match (&vals[g], &vals[f], &vals[h]) {
                (Some(a), Some(b), Some(c)) => compose(a, b) == *c,
                (Some(a), Some(b), None) => cands[h].contains(&compose(a, b)),
                _ => true,
            }
        };
        base.outgoing(base.tgt(m)).iter().all(|&g| check(g, m))
            && base.incoming(base.src(m)).iter().all(|&f| check(m, f))
            && (0..base.morphism_count()).all(|g| {
                // m as a composite of known factors
                base.outgoing(base.tgt(g)).iter().all(|&h| base.compose(h, g) != m || check(h, g))
            })
    }
    fn rec<V: Clone + PartialEq>(
        base: &FinCat,
        order: &[usize],
        k: usize,
        vals: &mut Vec<Option<V>>,
        cands: &[Vec<V>],
        compose: &impl Fn(&V, &V) -> V,
        nodes: &mut usize,
        budget: usize,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let m = order[k];
        for v in &cands[m] {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            vals[m] = Some(v.clone());
            if consistent(base, vals, m, compose, cands) && rec(base, order, k + 1, vals, cands, compose, nodes, budget) {
                return true;
            }
            vals[m] = None;
        }
        false
    }
    if rec(base, &order, 0, &mut vals, cands, &compose, &mut nodes, budget) {
        Some(vals.into_iter().map(|v| v.expect("assigned")).collect())
    } else {
        None
    }
}

/// `gen_category`: a random category from the parameters' own seed.
pub fn gen_category(p: &GenParams) -> FinCat {
    Generator::from_params(*p).category()
}

pub fn gen_marking(c: &Arc<FinCat>, p: &GenParams) -> MarkedFinCat {
    Generator::from_params(*p).marking(c.clone())
}

pub fn gen_diagram(base: &MarkedFinCat, p: &GenParams) -> Result<CatDiagram> {
    Generator::from_params(*p).diagram(base)
}
