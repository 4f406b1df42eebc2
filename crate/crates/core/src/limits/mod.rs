//! Strict limits and colimits, and partially lax limits by end formulas.

mod end;
mod family;
mod lax;
mod sets;
mod strict;

pub use end::{end_limit, explicit_end_limit, EndDiagram, EndLimit};
pub use lax::{lax_end_diagram, lax_limit, lax_limit_explicit, oplax_limit, pseudo_limit, LaxLimitResult};
pub use sets::{set_colimit, set_limit, SetDiagram};
pub(crate) use sets::UnionFind;
pub use strict::{cat_limit, iso_comma, marked_cat_limit, LimitResult};
