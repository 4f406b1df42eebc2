//! Finite marked categories and partially lax (co)limits.
//!
//! Every construction works on explicit composition tables: twisted arrow
//! categories, marked slices, Grothendieck constructions with their induced
//! markings, marked sections, strict limits, end formulas over twisted arrow
//! categories, and localizations computed by bounded coset enumeration.

pub mod bounds;
pub mod cat;
pub mod check;
pub mod constructions;
pub mod diagram;
pub mod equiv;
pub mod error;
pub mod generator;
pub mod grothendieck;
pub mod io;
pub mod limits;
pub mod localization;
pub mod samples;
pub mod search;

pub use bounds::SizeLimits;
pub use cat::{FinCat, Functor, FunctorMaps, MarkedFinCat, Marking, NatTrans};
pub use diagram::CatDiagram;
pub use error::{CatError, Result};
