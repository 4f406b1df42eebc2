use std::fmt;

use thiserror::Error;

/// One violated category axiom found while validating a raw table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DanglingObject { morphism: String, object: String },
    DanglingMorphism { entry: String, morphism: String },
    NotComposable { after: String, before: String },
    CompositeTyping { after: String, before: String, equals: String },
    UnitLaw { after: String, before: String, got: String, expected: String },
    Associativity { h: String, g: String, f: String },
    IdentityNotEndo { object: String, morphism: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingObject { morphism, object } => {
                write!(f, "morphism {morphism} references unknown object {object}")
            }
            Violation::DanglingMorphism { entry, morphism } => {
                write!(f, "composition entry {entry} references unknown morphism {morphism}")
            }
            Violation::NotComposable { after, before } => {
                write!(f, "composite ({after}, {before}) listed but the pair is not composable")
            }
            Violation::CompositeTyping { after, before, equals } => {
                write!(f, "composite ({after}, {before}) = {equals} has the wrong source or target")
            }
            Violation::UnitLaw { after, before, got, expected } => write!(
                f,
                "unit law fails at ({after}, {before}): table gives {got}, expected {expected}"
            ),
            Violation::Associativity { h, g, f: ff } => {
                write!(f, "associativity fails on ({h}, {g}, {ff})")
            }
            Violation::IdentityNotEndo { object, morphism } => {
                write!(f, "identity {morphism} of {object} is not an endomorphism of {object}")
            }
        }
    }
}

/// Every axiom violation found in a table, not just the first one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Which resource bound a computation ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Objects,
    Morphisms,
    Enumeration,
    WordLength,
    SearchBudget,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundKind::Objects => "objects",
            BoundKind::Morphisms => "morphisms",
            BoundKind::Enumeration => "enumeration",
            BoundKind::WordLength => "word length",
            BoundKind::SearchBudget => "search budget",
        };
        f.write_str(s)
    }
}

/// Witness data attached to a bound hit during localization.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub limit: usize,
    /// Number of live elements when the bound was hit.
    pub frontier: usize,
    /// Source and target of the hom-set whose growth hit the bound.
    pub hom: (String, String),
    pub hom_size: usize,
}

#[derive(Debug, Error)]
pub enum CatError {
    #[error("malformed table: {}", .0.join("; "))]
    MalformedTable(Vec<String>),
    #[error("invalid category: {0}")]
    Invalid(ValidationReport),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid natural transformation: {0}")]
    InvalidNatTrans(String),
    #[error("invalid diagram: {reason}")]
    InvalidDiagram { reason: String, witness: Vec<String> },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("{what}: {kind} bound {limit} exceeded")]
    SizeBoundExceeded { what: String, kind: BoundKind, limit: usize },
    #[error("word length bound {} exceeded at hom({}, {})", .0.limit, .0.hom.0, .0.hom.1)]
    WordBoundExceeded(BoundReport),
    #[error("localization exceeded {} bound {} at hom({}, {})", .0.kind, .0.limit, .0.hom.0, .0.hom.1)]
    LocalizationTooLarge(BoundReport),
    #[error("search budget of {0} nodes exhausted")]
    SearchBudgetExceeded(u64),
    #[error("diagram generation exhausted after {0} attempts")]
    GenerationExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CatError {
    /// True for resource-bound failures, as opposed to invalid input.
    pub fn is_bound(&self) -> bool {
        matches!(
            self,
            CatError::SizeBoundExceeded { .. }
                | CatError::WordBoundExceeded(_)
                | CatError::LocalizationTooLarge(_)
                | CatError::SearchBudgetExceeded(_)
                | CatError::GenerationExhausted(_)
        )
    }

    pub(crate) fn size(what: impl Into<String>, kind: BoundKind, limit: usize) -> Self {
        CatError::SizeBoundExceeded { what: what.into(), kind, limit }
    }
}

pub type Result<T, E = CatError> = std::result::Result<T, E>;
