//! Derived categories: twisted arrows, marked (co)slices, functor categories.

mod functor_cat;
mod slice;
mod twisted;

pub use functor_cat::{functor_category, marked_functor_category, FunctorCategory};
pub(crate) use functor_cat::from_functors;
pub use slice::{coslice, coslice_diagram, slice, slice_diagram, SliceCat};
pub use twisted::{twisted_arrow, TwistedArrowCat};
