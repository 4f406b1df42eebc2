//! Small diagrams used in examples and tests.

use std::sync::Arc;

use crate::cat::{standard, FunctorMaps, MarkedFinCat};
use crate::diagram::CatDiagram;

/// Over a walking-arrow base: F(0) = {x}, F(1) = discrete {a, b}, F(u)(x) = a.
pub fn point_into_pair(base: MarkedFinCat) -> CatDiagram {
    let f0 = Arc::new(standard::from_table(&["x"], &[], &[]));
    let f1 = Arc::new(standard::from_table(&["a", "b"], &[], &[]));
    over_arrow(base, f0, f1, FunctorMaps { objects: vec![0], morphisms: vec![0] })
}

/// Over a walking-arrow base: F(0) = {*}, F(1) = {a → b}, F(u)(*) = a.
pub fn point_into_arrow(base: MarkedFinCat) -> CatDiagram {
    let f0 = Arc::new(standard::terminal());
    let f1 = Arc::new(standard::from_table(&["a", "b"], &[("v", "a", "b")], &[]));
    // morphisms of F(1) sort as id_a, id_b, v
    over_arrow(base, f0, f1, FunctorMaps { objects: vec![0], morphisms: vec![0] })
}

fn over_arrow(base: MarkedFinCat, f0: Arc<crate::FinCat>, f1: Arc<crate::FinCat>, u: FunctorMaps) -> CatDiagram {
    assert_eq!(base.cat.objects(), &["0", "1"], "base must be the walking arrow");
    let t = vec![FunctorMaps::identity(&f0), FunctorMaps::identity(&f1), u];
    CatDiagram::from_categories(base, vec![f0, f1], t).expect("sample diagram is valid")
}
