use std::sync::Arc;

use super::end::{end_limit, explicit_end_limit, EndDiagram, EndLimit};
use crate::bounds::SizeLimits;
use crate::cat::{opposite_marked, FinCat, Functor, FunctorMaps, MarkedFinCat};
use crate::constructions::{slice, slice_diagram, twisted_arrow, FunctorCategory, TwistedArrowCat};
use crate::diagram::CatDiagram;
use crate::error::Result;
use crate::grothendieck::{grothendieck_cocart, marked_sections};

/// A partially lax or oplax limit with its evaluation functors.
#[derive(Debug, Clone)]
pub struct LaxLimitResult {
    pub cat: Arc<FinCat>,
    /// Evaluation at each base object i, lim → F(i).
    pub projections: Vec<Functor>,
    pub families: EndLimit,
    pub tw: TwistedArrowCat,
}

/// The end diagram over Tw(I): at f: i → j the term Fun†(I†_{/i}, F(j)♭), or
/// Fun†((I_{/i})^op†, F(j)♭) for the oplax variant; (a, b): f → f′ acts by
/// X ↦ F(b)∘X∘a_*.
pub fn lax_end_diagram(d: &CatDiagram, oplax: bool, limits: &SizeLimits) -> Result<(EndDiagram, TwistedArrowCat)> {
    let base = d.base();
    let tw = twisted_arrow(&base.cat, limits)?;
    let sd = slice_diagram(base, limits)?;
    let terms = tw
        .arrow
        .iter()
        .map(|&f| {
            let a = sd.marked_fiber(base.cat.src(f));
            let a = if oplax { opposite_marked(a) } else { a.clone() };
            (a, MarkedFinCat::flat(d.fiber(base.cat.tgt(f)).clone()))
        })
        .collect();
    let pre = tw.square.iter().map(|&(a, _)| sd.transition(a).clone()).collect();
    let post = tw.square.iter().map(|&(_, b)| d.transition(b).clone()).collect();
    Ok((EndDiagram { index: tw.cat.clone(), terms, pre, post }, tw))
}

fn end_result(d: &CatDiagram, oplax: bool, limits: &SizeLimits) -> Result<LaxLimitResult> {
    let (ed, tw) = lax_end_diagram(d, oplax, limits)?;
    let fam = end_limit(&ed, limits)?;
    let base = d.base();
    let projections = (0..base.cat.object_count())
        .map(|i| {
            let id = base.cat.identity(i);
            let node = tw.arrow.iter().position(|&f| f == id).expect("identity is a twisted arrow object");
            // the object id_i of the slice over i
            let s = slice(base, i).expect("object exists");
            let leg = s.object_of_leg(id).expect("identity leg");
            Functor::new_unchecked(
                fam.cat.clone(),
                d.fiber(i).clone(),
                FunctorMaps {
                    objects: fam.objects.iter().map(|x| x[node].objects[leg]).collect(),
                    morphisms: fam.morphisms.iter().map(|a| a[node][leg]).collect(),
                },
            )
        })
        .collect();
    Ok(LaxLimitResult { cat: fam.cat.clone(), projections, families: fam, tw })
}

/// The partially lax limit of F over I†, by the end formula.
pub fn lax_limit(d: &CatDiagram, limits: &SizeLimits) -> Result<LaxLimitResult> {
    end_result(d, false, limits)
}

/// The partially oplax limit of F over I†, by the end formula with opposite slices.
pub fn oplax_limit(d: &CatDiagram, limits: &SizeLimits) -> Result<LaxLimitResult> {
    end_result(d, true, limits)
}

/// The lax limit computed through explicit functor categories; slow, for
/// cross-checking.
pub fn lax_limit_explicit(d: &CatDiagram, oplax: bool, limits: &SizeLimits) -> Result<Arc<FinCat>> {
    let (ed, _) = lax_end_diagram(d, oplax, limits)?;
    explicit_end_limit(&ed, limits)
}

/// The pseudo-limit: sections of ∫F sending every base morphism to a
/// cocartesian one.
pub fn pseudo_limit(d: &CatDiagram, limits: &SizeLimits) -> Result<FunctorCategory> {
    let sharp = d.with_base(MarkedFinCat::sharp(d.base_cat().clone()))?;
    marked_sections(&grothendieck_cocart(&sharp, limits)?, limits)
}
