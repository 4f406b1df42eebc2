use std::collections::HashMap;
use std::sync::Arc;

use crate::bounds::SizeLimits;
use crate::cat::{opposite, CatBuilder, FinCat, Functor, FunctorMaps};
use crate::error::Result;

/// Tw(I): objects are the morphisms f: i → j of I; a morphism f → f′ is a
/// pair (a: i → i′, b: j′ → j) with b∘f′∘a = f.
#[derive(Debug, Clone)]
pub struct TwistedArrowCat {
    pub cat: Arc<FinCat>,
    pub base: Arc<FinCat>,
    /// Projection to the source, covariant: f ↦ i, (a, b) ↦ a.
    pub pi: Functor,
    /// Projection to the target, landing in I^op: f ↦ j, (a, b) ↦ b.
    pub pi_op: Functor,
    /// Base morphism underlying each object of Tw(I).
    pub arrow: Vec<usize>,
    /// The pair (a, b) of each morphism of Tw(I).
    pub square: Vec<(usize, usize)>,
}

pub fn twisted_arrow(base: &Arc<FinCat>, limits: &SizeLimits) -> Result<TwistedArrowCat> {
    let i = base;
    let m = i.morphism_count();
    limits.objects("twisted arrow category", m)?;
    let mut b = CatBuilder::new();
    for f in 0..m {
        b.object(i.morphism_id(f));
    }
    let mut squares: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut index: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for f in 0..m {
        for f2 in 0..m {
            for &a in i.hom(i.src(f), i.src(f2)) {
                for &bb in i.hom(i.tgt(f2), i.tgt(f)) {
                    if i.compose(bb, i.compose(f2, a)) == f {
                        if squares.len() >= limits.max_morphisms {
                            return Err(limits.morphisms_overflow("twisted arrow category"));
                        }
                        let id = format!("<{},{}>:{}->{}", i.morphism_id(a), i.morphism_id(bb), i.morphism_id(f), i.morphism_id(f2));
                        let k = b.morphism(id, f, f2);
                        index.insert((f, f2, a, bb), k);
                        squares.push((f, f2, a, bb));
                    }
                }
            }
        }
    }
    for f in 0..m {
        let k = index[&(f, f, i.identity(i.src(f)), i.identity(i.tgt(f)))];
        b.set_identity(f, k);
    }
    let (cat, re) = b.build(|g, h| {
        // (a2, b2) ∘ (a1, b1) = (a2∘a1, b1∘b2)
        let (f, _, a1, b1) = squares[h];
        let (_, f3, a2, b2) = squares[g];
        index[&(f, f3, i.compose(a2, a1), i.compose(b1, b2))]
    })?;
    let cat = Arc::new(cat);
    let mut arrow = vec![0; m];
    for f in 0..m {
        arrow[re.objects[f]] = f;
    }
    let mut square = vec![(0, 0); squares.len()];
    for (k, &(_, _, a, bb)) in squares.iter().enumerate() {
        square[re.morphisms[k]] = (a, bb);
    }
    let pi = Functor::new_unchecked(
        cat.clone(),
        base.clone(),
        FunctorMaps { objects: arrow.iter().map(|&f| i.src(f)).collect(), morphisms: square.iter().map(|s| s.0).collect() },
    );
    // opposite() keeps ids and therefore indices
    let base_op = Arc::new(opposite(base));
    let pi_op = Functor::new_unchecked(
        cat.clone(),
        base_op,
        FunctorMaps { objects: arrow.iter().map(|&f| i.tgt(f)).collect(), morphisms: square.iter().map(|s| s.1).collect() },
    );
    Ok(TwistedArrowCat { cat, base: base.clone(), pi, pi_op, arrow, square })
}
