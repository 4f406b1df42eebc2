use crate::error::{BoundKind, CatError, Result};

/// Caps on derived categories. Constructions fail with
/// [`CatError::SizeBoundExceeded`] instead of truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SizeLimits {
    pub max_objects: usize,
    pub max_morphisms: usize,
    /// Cap on intermediate enumerations that never become a category of
    /// their own (object sets of functor categories inside end formulas).
    pub max_enumeration: usize,
}

impl Default for SizeLimits {
    fn default() -> Self {
        SizeLimits { max_objects: 64, max_morphisms: 512, max_enumeration: 100_000 }
    }
}

impl SizeLimits {
    pub fn objects(&self, what: &str, n: usize) -> Result<()> {
        if n > self.max_objects {
            Err(CatError::size(what, BoundKind::Objects, self.max_objects))
        } else {
            Ok(())
        }
    }

    pub fn morphisms(&self, what: &str, n: usize) -> Result<()> {
        if n > self.max_morphisms {
            Err(CatError::size(what, BoundKind::Morphisms, self.max_morphisms))
        } else {
            Ok(())
        }
    }

    pub(crate) fn objects_overflow(&self, what: &str) -> CatError {
        CatError::size(what, BoundKind::Objects, self.max_objects)
    }

    pub(crate) fn morphisms_overflow(&self, what: &str) -> CatError {
        CatError::size(what, BoundKind::Morphisms, self.max_morphisms)
    }

    pub(crate) fn enumeration_overflow(&self, what: &str) -> CatError {
        CatError::size(what, BoundKind::Enumeration, self.max_enumeration)
    }
}
