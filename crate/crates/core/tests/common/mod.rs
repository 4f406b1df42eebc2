//! Brute-force oracles. They share no code with the library beyond the
//! category accessors, so they can be used to cross-check it.
#![allow(dead_code)]

use laxcat::grothendieck::FiberedCat;
use laxcat::limits::SetDiagram;
use laxcat::FinCat;

/// Every functor c → d as (object map, morphism map), by exhaustive product
/// over hom-sets followed by a check of the composition law.
pub fn functors(c: &FinCat, d: &FinCat) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let n = c.object_count();
    let mut obj = vec![0; n];
    if n > 0 && d.object_count() == 0 {
        return out;
    }
    loop {
        let mut mor = vec![usize::MAX; c.morphism_count()];
        for x in 0..n {
            mor[c.identity(x)] = d.identity(obj[x]);
        }
        let free: Vec<usize> = c.non_identity_morphisms().collect();
        fill(c, d, &obj, &free, 0, &mut mor, &mut out);
        if !bump(&mut obj, d.object_count()) {
            break;
        }
    }
    out
}

fn bump(v: &mut [usize], base: usize) -> bool {
    for x in v.iter_mut() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

fn fill(
    c: &FinCat,
    d: &FinCat,
    obj: &[usize],
    free: &[usize],
    k: usize,
    mor: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    if k == free.len() {
        let ok = (0..c.morphism_count()).all(|g| {
            (0..c.morphism_count()).all(|f| {
                c.tgt(f) != c.src(g) || d.compose(mor[g], mor[f]) == mor[c.compose(g, f)]
            })
        });
        if ok {
            out.push((obj.to_vec(), mor.clone()));
        }
        return;
    }
    let f = free[k];
    for &g in d.hom(obj[c.src(f)], obj[c.tgt(f)]) {
        mor[f] = g;
        fill(c, d, obj, free, k + 1, mor, out);
    }
}

/// Natural transformations between two functors given as morphism maps.
pub fn transformations(c: &FinCat, d: &FinCat, s: &(Vec<usize>, Vec<usize>), t: &(Vec<usize>, Vec<usize>)) -> usize {
    let choices: Vec<Vec<usize>> = (0..c.object_count()).map(|x| d.hom(s.0[x], t.0[x]).to_vec()).collect();
    count_natural(c, d, s, t, &choices)
}

/// Object and morphism counts of the category of strict sections of `e`,
/// optionally restricted to marked sections.
pub fn section_counts(e: &FiberedCat, marked: bool) -> (usize, usize) {
    let base = &e.base.cat;
    let total = &e.total.cat;
    let secs: Vec<_> = functors(base, total)
        .into_iter()
        .filter(|(o, m)| {
            (0..base.object_count()).all(|i| e.proj.object(o[i]) == i)
                && (0..base.morphism_count()).all(|f| e.proj.morphism(m[f]) == f)
                && (!marked || e.base.marking.indices().all(|f| e.total.marking.contains(m[f])))
        })
        .collect();
    let mut mors = 0;
    for s in &secs {
        for t in &secs {
            // vertical transformations: every component lies over an identity
            let n = base.object_count();
            let choices: Vec<Vec<usize>> = (0..n)
                .map(|i| {
                    total.hom(s.0[i], t.0[i]).iter().copied().filter(|&a| e.proj.morphism(a) == base.identity(i)).collect()
                })
                .collect();
            mors += count_natural(base, total, s, t, &choices);
        }
    }
    (secs.len(), mors)
}

fn count_natural(c: &FinCat, d: &FinCat, s: &(Vec<usize>, Vec<usize>), t: &(Vec<usize>, Vec<usize>), choices: &[Vec<usize>]) -> usize {
    let n = c.object_count();
    if choices.iter().any(Vec::is_empty) {
        return 0;
    }
    let mut comp = vec![0usize; n];
    let mut count = 0;
    loop {
        let alpha: Vec<usize> = (0..n).map(|x| choices[x][comp[x]]).collect();
        if (0..c.morphism_count()).all(|f| d.compose(t.1[f], alpha[c.src(f)]) == d.compose(alpha[c.tgt(f)], s.1[f])) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            if comp[k] + 1 < choices[k].len() {
                comp[k] += 1;
                break;
            }
            comp[k] = 0;
            k += 1;
        }
    }
}

/// Hom-set size of Tw(c) between the objects f and g, by direct search for
/// pairs (a, b) with b∘g∘a = f.
pub fn twisted_hom(c: &FinCat, f: usize, g: usize) -> usize {
    let mut n = 0;
    for &a in c.hom(c.src(f), c.src(g)) {
        for &b in c.hom(c.tgt(g), c.tgt(f)) {
            if c.compose(b, c.compose(g, a)) == f {
                n += 1;
            }
        }
    }
    n
}

/// Compatible families of a set-valued diagram by full enumeration.
pub fn set_families(d: &SetDiagram) -> usize {
    let b = &d.base;
    let n = b.object_count();
    if d.values.iter().any(Vec::is_empty) && n > 0 {
        return 0;
    }
    let mut fam = vec![0usize; n];
    let mut count = 0;
    loop {
        if (0..b.morphism_count()).all(|f| d.actions[f][fam[b.src(f)]] == fam[b.tgt(f)]) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            fam[k] += 1;
            if fam[k] < d.values[k].len() {
                break;
            }
            fam[k] = 0;
            k += 1;
        }
    }
}

/// Number of connected components of the graph whose vertices are all
/// elements and whose edges are the action pairs, by label propagation.
pub fn set_components(d: &SetDiagram) -> usize {
    let b = &d.base;
    let mut label: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for v in &d.values {
        label.push((next..next + v.len()).collect());
        next += v.len();
    }
    loop {
        let mut changed = false;
        for f in 0..b.morphism_count() {
            let (s, t) = (b.src(f), b.tgt(f));
            for x in 0..d.values[s].len() {
                let y = d.actions[f][x];
                let m = label[s][x].min(label[t][y]);
                if label[s][x] != m || label[t][y] != m {
                    label[s][x] = m;
                    label[t][y] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut all: Vec<usize> = label.into_iter().flatten().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}
