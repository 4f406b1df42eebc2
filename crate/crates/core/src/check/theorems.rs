use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{CheckSettings, Input, Theorem, Verdict};
use crate::cat::{full_subcategory, pair_id, product_functor_maps, product_marked, FinCat, Functor, FunctorMaps, MarkedFinCat};
use crate::constructions::{twisted_arrow, FunctorCategory};
use crate::diagram::CatDiagram;
use crate::equiv::is_equivalent;
use crate::error::{CatError, Result};
use crate::grothendieck::{grothendieck_cart, grothendieck_cocart, marked_sections, pullback_fibered, same_marked_category, sections};
use crate::limits::{cat_limit, iso_comma, lax_limit, oplax_limit, pseudo_limit, set_colimit, set_limit, SetDiagram};
use crate::localization::{check_localization_up, lax_colimit, oplax_colimit, probe_check_colimit_theorem};

fn counts(c: &FinCat) -> String {
    format!("({}, {})", c.object_count(), c.morphism_count())
}

/// Compares two categories through the equivalence oracle.
fn compare(what: &str, a: &Arc<FinCat>, b: &Arc<FinCat>) -> Result<Verdict> {
    let v = is_equivalent(a, b)?;
    let ok = v.is_positive() && v.revalidate();
    let detail = match &v.certificate {
        Some(c) => format!("{what}: {} {} vs {}", c.invariant, c.left, c.right),
        None if ok => format!("{what}: {:?} on {}", v.verdict, counts(a)).to_lowercase(),
        None => format!("{what}: witness failed revalidation"),
    };
    Ok(Verdict::new(ok, detail))
}

fn all(vs: Vec<Verdict>) -> Verdict {
    let passed = vs.iter().all(|v| v.passed);
    let detail = vs.iter().filter(|v| passed || !v.passed).map(|v| v.detail.as_str()).collect::<Vec<_>>().join("; ");
    Verdict::new(passed, detail)
}

fn wrong_input(t: Theorem) -> CatError {
    CatError::Parse(format!("input does not fit {t}"))
}

/// Evaluates one instance. Bound hits come back as errors.
pub fn evaluate(theorem: Theorem, input: &Input, s: &CheckSettings) -> Result<Verdict> {
    let lim = &s.limits;
    match (theorem, input) {
        (Theorem::LaxLim, Input::Diagram(d)) => {
            let l = lax_limit(d, lim)?.cat;
            let sec = marked_sections(&grothendieck_cocart(d, lim)?, lim)?.cat;
            compare("lax limit vs marked sections", &l, &sec)
        }
        (Theorem::OplaxLim, Input::Diagram(d)) => {
            let l = oplax_limit(d, lim)?.cat;
            let sec = marked_sections(&grothendieck_cart(d, lim)?, lim)?.cat;
            compare("oplax limit vs marked sections", &l, &sec)
        }
        (Theorem::LaxColimProbe, Input::Diagram(d)) => colimit_probe(d, false, s),
        (Theorem::OplaxColimProbe, Input::Diagram(d)) => colimit_probe(d, true, s),
        (Theorem::PropSharpLimit, Input::Diagram(d)) => sharp_limit(d, s),
        (Theorem::GhnFlat, Input::Diagram(d)) => ghn_flat(d, s),
        (Theorem::CofinalityLeft, Input::Sets(d)) => cofinality_left(d, s),
        (Theorem::CofinalityRight, Input::Sets(d)) => cofinality_right(d, s),
        (Theorem::MarkedLimit, Input::Pair(d, e)) => marked_limit(d, e, s),
        (Theorem::PullbackRemark, Input::Pullback(t, d)) => {
            let e = grothendieck_cocart(d, lim)?;
            let a = pullback_fibered(t, &e, lim)?;
            let b = grothendieck_cocart(&d.precompose(t)?, lim)?;
            let same = same_marked_category(&a.total, &b.total);
            Ok(Verdict::new(
                same,
                format!("pullback {} {} the construction on F∘t", counts(&a.total.cat), if same { "equals" } else { "differs from" }),
            ))
        }
        (Theorem::FfLemma, Input::Subdiagram(d, keep)) => ff_lemma(d, keep, s),
        (Theorem::Monotonicity, Input::Remarked(d, m)) => monotonicity(d, m, s),
        (t, _) => Err(wrong_input(t)),
    }
}

fn colimit_probe(d: &CatDiagram, oplax: bool, s: &CheckSettings) -> Result<Verdict> {
    let v = probe_check_colimit_theorem(d, oplax, &s.probes, &s.limits)?;
    if !v.passed() {
        let bad: Vec<String> = v.outcomes.iter().filter(|o| !o.passed).map(|o| format!("{}: {}", o.probe, o.detail)).collect();
        return Ok(Verdict::new(false, format!("mapping-out comparison fails on {}", bad.join(", "))));
    }
    let l = if oplax { oplax_colimit(d, &s.bounds, &s.limits) } else { lax_colimit(d, &s.bounds, &s.limits) };
    let l = match l {
        Ok(l) => l,
        Err(e) if e.is_bound() => {
            return Ok(Verdict::new(true, format!("{} probes agree; localization not completed ({e})", v.outcomes.len())));
        }
        Err(e) => return Err(e),
    };
    let total = if oplax { grothendieck_cart(d, &s.limits)? } else { grothendieck_cocart(d, &s.limits)? }.total;
    let up = check_localization_up(&total, &l, &s.probes, &s.limits)?;
    let passed = up.passed() && l.inverts(&total);
    let detail = if passed {
        format!("{} probes agree; localization {} satisfies every probe", v.outcomes.len(), counts(&l.cat))
    } else {
        format!("localization {} fails probes {:?}", counts(&l.cat), up.failing())
    };
    Ok(Verdict::new(passed, detail))
}

fn sharp_limit(d: &CatDiagram, s: &CheckSettings) -> Result<Verdict> {
    let lim = &s.limits;
    let d = d.with_base(MarkedFinCat::sharp(d.base_cat().clone()))?;
    let b = d.base_cat();
    let arrows: Vec<usize> = b.non_identity_morphisms().collect();
    let oracle: Arc<FinCat> = match (b.object_count(), &arrows[..]) {
        (2, &[u]) => d.fiber(b.src(u)).clone(),
        (3, &[p, q]) if b.tgt(p) == b.tgt(q) => Arc::new(iso_comma(&d.transition_functor(p), &d.transition_functor(q), lim)?),
        _ => return Err(CatError::Parse("sharp-limit instances live over an arrow or a cospan".into())),
    };
    let l = lax_limit(&d, lim)?.cat;
    let o = oplax_limit(&d, lim)?.cat;
    Ok(all(vec![
        compare("lax vs pseudo-limit", &l, &oracle)?,
        compare("oplax vs pseudo-limit", &o, &oracle)?,
        compare("lax vs oplax", &l, &o)?,
    ]))
}

fn ghn_flat(d: &CatDiagram, s: &CheckSettings) -> Result<Verdict> {
    let lim = &s.limits;
    let d = d.with_base(MarkedFinCat::flat(d.base_cat().clone()))?;
    let l = lax_limit(&d, lim)?.cat;
    let e = grothendieck_cocart(&d, lim)?;
    let everything = sections(&e, false, lim)?.cat;
    let limit_side = compare("flat lax limit vs all sections", &l, &everything)?;
    let c = lax_colimit(&d, &s.bounds, lim)?;
    let flat = e.total.is_flat();
    let same = *c.cat == *e.total.cat && c.quotient.is_isomorphism();
    let colimit_side = Verdict::new(
        flat && same,
        format!("flat lax colimit {} ∫F {}", if same { "is" } else { "is not" }, counts(&e.total.cat)),
    );
    Ok(all(vec![limit_side, colimit_side]))
}

fn cofinality_left(d: &SetDiagram, s: &CheckSettings) -> Result<Verdict> {
    let tw = twisted_arrow(&d.base, &s.limits)?;
    let dp = d.precompose(&tw.pi);
    let (cls, n) = set_colimit(d);
    let (clp, np) = set_colimit(&dp);
    // the class of (f, x) must determine the class of (π f, x), bijectively
    let mut induced: Vec<Option<usize>> = vec![None; np];
    for t in 0..tw.cat.object_count() {
        for x in 0..dp.values[t].len() {
            let c = clp[dp.offset(t) + x];
            let c2 = cls[d.offset(tw.pi.object(t)) + x];
            match induced[c] {
                Some(prev) if prev != c2 => {
                    return Ok(Verdict::new(false, format!("class {c} of the restriction meets classes {prev} and {c2}")));
                }
                _ => induced[c] = Some(c2),
            }
        }
    }
    let hit: BTreeSet<usize> = induced.iter().flatten().copied().collect();
    let passed = n == np && hit.len() == n && induced.iter().all(Option::is_some);
    Ok(Verdict::new(passed, format!("colimit partitions: {n} classes, {np} after restriction along π")))
}

fn cofinality_right(d: &SetDiagram, s: &CheckSettings) -> Result<Verdict> {
    let tw = twisted_arrow(&d.base, &s.limits)?;
    let dp = d.precompose(&tw.pi);
    let fams = set_limit(d);
    let restricted: BTreeSet<Vec<usize>> = set_limit(&dp).into_iter().collect();
    let image: BTreeSet<Vec<usize>> =
        fams.iter().map(|f| (0..tw.cat.object_count()).map(|t| f[tw.pi.object(t)]).collect()).collect();
    let passed = fams.len() == restricted.len() && image == restricted;
    Ok(Verdict::new(passed, format!("limit families: {} and {} after restriction along π", fams.len(), restricted.len())))
}

fn product_diagram(d: &CatDiagram, e: &CatDiagram) -> Result<CatDiagram> {
    let b = d.base_cat();
    let fibers: Vec<MarkedFinCat> =
        (0..b.object_count()).map(|i| product_marked(d.marked_fiber(i), e.marked_fiber(i))).collect();
    let transitions = (0..b.morphism_count())
        .map(|m| {
            let (s, t) = (b.src(m), b.tgt(m));
            product_functor_maps(
                (d.fiber(s), e.fiber(s), &fibers[s].cat),
                (d.fiber(t), e.fiber(t), &fibers[t].cat),
                d.transition(m),
                e.transition(m),
            )
        })
        .collect();
    CatDiagram::new(d.base().clone(), fibers, transitions)
}

fn marked_limit(d: &CatDiagram, e: &CatDiagram, s: &CheckSettings) -> Result<Verdict> {
    let lim = &s.limits;
    if d.base() != e.base() {
        return Err(CatError::Parse("marked-limit diagrams must share their base".into()));
    }
    let p = product_diagram(d, e)?;
    let (ld, le, lp) = (cat_limit(d, lim)?, cat_limit(e, lim)?, cat_limit(&p, lim)?);
    for l in [&ld, &le, &lp] {
        if let Err(err) = l.cat.validate() {
            return Ok(Verdict::new(false, format!("componentwise marking is not a marking: {err}")));
        }
    }
    let target = product_marked(&ld.cat, &le.cat);
    let b = d.base_cat();
    // per base object, product fiber index ↦ component indices
    let mut split_obj: Vec<HashMap<usize, (usize, usize)>> = Vec::new();
    let mut split_mor: Vec<HashMap<usize, (usize, usize)>> = Vec::new();
    for i in 0..b.object_count() {
        let (c, k, pc) = (d.fiber(i), e.fiber(i), p.fiber(i));
        let mut so = HashMap::new();
        for x in 0..c.object_count() {
            for y in 0..k.object_count() {
                so.insert(pc.object_index(&pair_id(c.object_id(x), k.object_id(y)))?, (x, y));
            }
        }
        let mut sm = HashMap::new();
        for f in 0..c.morphism_count() {
            for g in 0..k.morphism_count() {
                sm.insert(pc.morphism_index(&pair_id(c.morphism_id(f), k.morphism_id(g)))?, (f, g));
            }
        }
        split_obj.push(so);
        split_mor.push(sm);
    }
    let index = |fams: &[Vec<usize>]| -> HashMap<Vec<usize>, usize> { fams.iter().cloned().enumerate().map(|(k, f)| (f, k)).collect() };
    let (od, oe, md, me) = (index(&ld.objects), index(&le.objects), index(&ld.morphisms), index(&le.morphisms));
    let split = |fam: &[usize], tab: &[HashMap<usize, (usize, usize)>]| -> (Vec<usize>, Vec<usize>) {
        fam.iter().enumerate().map(|(i, z)| tab[i][z]).unzip()
    };
    let mut objects = Vec::with_capacity(lp.objects.len());
    for fam in &lp.objects {
        let (a, c) = split(fam, &split_obj);
        let (Some(&x), Some(&y)) = (od.get(&a), oe.get(&c)) else {
            return Ok(Verdict::new(false, "a family of pairs splits into non-families"));
        };
        objects.push(target.cat.object_index(&pair_id(ld.cat.cat.object_id(x), le.cat.cat.object_id(y)))?);
    }
    let mut morphisms = Vec::with_capacity(lp.morphisms.len());
    for fam in &lp.morphisms {
        let (a, c) = split(fam, &split_mor);
        let (Some(&x), Some(&y)) = (md.get(&a), me.get(&c)) else {
            return Ok(Verdict::new(false, "a morphism family of pairs splits into non-families"));
        };
        morphisms.push(target.cat.morphism_index(&pair_id(ld.cat.cat.morphism_id(x), le.cat.cat.morphism_id(y)))?);
    }
    let cmp = match Functor::new(lp.cat.cat.clone(), target.cat.clone(), FunctorMaps { objects, morphisms }) {
        Ok(f) => f,
        Err(err) => return Ok(Verdict::new(false, format!("comparison is not a functor: {err}"))),
    };
    let iso = cmp.is_isomorphism();
    let marks = (0..lp.cat.cat.morphism_count()).all(|f| lp.cat.is_marked(f) == target.is_marked(cmp.morphism(f)));
    Ok(Verdict::new(
        iso && marks,
        format!(
            "lim(D×E) {} → lim D × lim E {}: isomorphism {iso}, markings agree {marks}",
            counts(&lp.cat.cat),
            counts(&target.cat)
        ),
    ))
}

/// Index of each functor of `small` among those of `big`, matching total
/// objects and morphisms by id.
fn embed_sections(small: &FunctorCategory, big: &FunctorCategory) -> Result<Option<Functor>> {
    let (sc, bc) = (&small.cod, &big.cod);
    let obj: Vec<usize> = (0..sc.object_count()).map(|x| bc.object_index(sc.object_id(x))).collect::<Result<_>>()?;
    let mor: Vec<usize> = (0..sc.morphism_count()).map(|f| bc.morphism_index(sc.morphism_id(f))).collect::<Result<_>>()?;
    let mut objects = Vec::with_capacity(small.functors.len());
    for s in &small.functors {
        let img = FunctorMaps {
            objects: s.objects.iter().map(|&x| obj[x]).collect(),
            morphisms: s.morphisms.iter().map(|&f| mor[f]).collect(),
        };
        match big.object_of(&img) {
            Some(k) => objects.push(k),
            None => return Ok(None),
        }
    }
    let mut morphisms = Vec::with_capacity(small.cat.morphism_count());
    for m in 0..small.cat.morphism_count() {
        let comps: Vec<usize> = small.components[m].iter().map(|&f| mor[f]).collect();
        let (a, b) = (objects[small.cat.src(m)], objects[small.cat.tgt(m)]);
        match big.cat.hom(a, b).iter().find(|&&k| big.components[k] == comps) {
            Some(&k) => morphisms.push(k),
            None => return Ok(None),
        }
    }
    Ok(Functor::new(small.cat.clone(), big.cat.clone(), FunctorMaps { objects, morphisms }).ok())
}

fn ff_lemma(d: &CatDiagram, keep: &[Vec<usize>], s: &CheckSettings) -> Result<Verdict> {
    let lim = &s.limits;
    let (sub, _) = d.full_subdiagram(keep)?;
    let big = pseudo_limit(d, lim)?;
    let small = pseudo_limit(&sub, lim)?;
    let Some(eta) = embed_sections(&small, &big)? else {
        return Ok(Verdict::new(false, "a section of the subdiagram is not a section of the diagram"));
    };
    let (full, faithful) = (eta.is_full(), eta.is_faithful());
    let e = grothendieck_cocart(&d.with_base(MarkedFinCat::sharp(d.base_cat().clone()))?, lim)?;
    let image: Vec<usize> = (0..small.cat.object_count()).map(|x| eta.object(x)).collect();
    let mut mismatch = None;
    for x in 0..big.cat.object_count() {
        let essential = image.iter().any(|&y| big.cat.hom(x, y).iter().any(|&f| big.cat.is_iso(f)));
        let componentwise = big.functors[x].objects.iter().all(|&t| {
            let (i, z) = e.point[t];
            let f = d.fiber(i);
            keep[i].iter().any(|&y| f.hom(z, y).iter().any(|&g| f.is_iso(g)))
        });
        if essential != componentwise {
            mismatch = Some(big.cat.object_id(x).to_string());
            break;
        }
    }
    let passed = full && faithful && mismatch.is_none();
    let detail = match mismatch {
        Some(x) => format!("essential image differs from the componentwise one at {x}"),
        None => format!(
            "lim η: {} → {} full {full}, faithful {faithful}, essential image componentwise",
            counts(&small.cat),
            counts(&big.cat)
        ),
    };
    Ok(Verdict::new(passed, detail))
}

fn monotonicity(d: &CatDiagram, larger: &MarkedFinCat, s: &CheckSettings) -> Result<Verdict> {
    let lim = &s.limits;
    if larger.cat != *d.base_cat() || !d.base().marking.is_subset(&larger.marking) {
        return Err(CatError::Parse("monotonicity needs a larger marking of the same base".into()));
    }
    let d2 = d.with_base(larger.clone())?;
    let s1 = marked_sections(&grothendieck_cocart(d, lim)?, lim)?;
    let s2 = marked_sections(&grothendieck_cocart(&d2, lim)?, lim)?;
    let Some(incl) = embed_sections(&s2, &s1)? else {
        return Ok(Verdict::new(false, "a section for the larger marking is missing for the smaller one"));
    };
    if !(incl.is_full() && incl.is_faithful()) {
        return Ok(Verdict::new(false, "sections for the larger marking do not form a full subcategory"));
    }
    let keep: Vec<usize> = (0..s2.cat.object_count()).map(|x| incl.object(x)).collect();
    let (sub, _) = full_subcategory(&s1.cat, &keep);
    let l2 = lax_limit(&d2, lim)?.cat;
    let v = compare("larger-marking lax limit vs full subcategory", &l2, &sub)?;
    Ok(Verdict::new(v.passed, format!("{} of {} sections; {}", keep.len(), s1.cat.object_count(), v.detail)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;
    use crate::samples::{point_into_arrow, point_into_pair};

    fn st() -> CheckSettings {
        CheckSettings::default()
    }

    #[test]
    fn running_examples_pass() {
        for base in [MarkedFinCat::flat(standard::arrow()), MarkedFinCat::sharp(standard::arrow())] {
            for d in [point_into_pair(base.clone()), point_into_arrow(base.clone())] {
                let input = Input::Diagram(d);
                for t in [Theorem::LaxLim, Theorem::OplaxLim, Theorem::LaxColimProbe, Theorem::GhnFlat, Theorem::PropSharpLimit] {
                    let v = evaluate(t, &input, &st()).unwrap();
                    assert!(v.passed, "{t}: {}", v.detail);
                }
            }
        }
    }

    #[test]
    fn mismatched_input_is_rejected() {
        let d = point_into_pair(MarkedFinCat::flat(standard::arrow()));
        assert!(evaluate(Theorem::CofinalityLeft, &Input::Diagram(d), &st()).is_err());
    }

    #[test]
    fn cofinality_on_the_arrow_example() {
        let b = Arc::new(standard::arrow());
        let d = SetDiagram::new(b, vec![vec!["x".into(), "y".into()], vec!["z".into()]], vec![vec![0, 1], vec![0], vec![0, 0]]).unwrap();
        assert!(evaluate(Theorem::CofinalityLeft, &Input::Sets(d.clone()), &st()).unwrap().passed);
        assert!(evaluate(Theorem::CofinalityRight, &Input::Sets(d), &st()).unwrap().passed);
    }

    #[test]
    fn strict_limit_breaks_the_ff_lemma() {
        // F(x) = F(z) = {0 ≅ 1}, F(y) = {*}, p = id and q(*) = 0; keep 1 over
        // x. The strict limit of the subdiagram is empty although (0, *, 0)
        // lies in the essential image componentwise.
        let iso = Arc::new(standard::walking_iso());
        let pt = Arc::new(standard::terminal());
        let base = MarkedFinCat::flat(standard::cospan());
        let b = base.cat.clone();
        let (x, y, z) = (b.object_index("x").unwrap(), b.object_index("y").unwrap(), b.object_index("z").unwrap());
        let mut fibers = vec![iso.clone(); 3];
        fibers[y] = pt.clone();
        let mut transitions = vec![FunctorMaps::identity(&iso); b.morphism_count()];
        transitions[b.identity(y)] = FunctorMaps::identity(&pt);
        let q = b.morphism_index("q").unwrap();
        transitions[q] = FunctorMaps { objects: vec![0], morphisms: vec![iso.identity(0)] };
        let d = CatDiagram::from_categories(base, fibers, transitions).unwrap();
        let mut keep = vec![vec![]; 3];
        keep[x] = vec![1];
        keep[y] = vec![0];
        keep[z] = vec![0, 1];
        let (sub, _) = d.full_subdiagram(&keep).unwrap();
        let (small, big) = (cat_limit(&sub, &st().limits).unwrap(), cat_limit(&d, &st().limits).unwrap());
        assert_eq!((small.objects.len(), big.objects.len()), (0, 1));
        let v = evaluate(Theorem::FfLemma, &Input::Subdiagram(d, keep), &st()).unwrap();
        assert!(v.passed, "{}", v.detail);
    }
}
