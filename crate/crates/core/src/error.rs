use thiserror::Error;

/// Errors produced by the analysis engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("denominator vanishes identically or at the evaluation point")]
    ZeroDenominator,
    #[error("denominator has zero constant term; no power series expansion exists")]
    NonUnitDenominator,
    #[error("pole at x_box = 0: numerator order {numerator} is below denominator order {denominator}")]
    PoleAtLimit { numerator: u32, denominator: u32 },
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(String),
    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("invalid transformation: {0}")]
    InvalidTransformation(String),
    #[error("graph does not have the unique simple path property")]
    NotUsp,
    #[error("path is not a simple path from the root of the graph")]
    PathNotInGraph,
    #[error("back edge from {source_word} under {label} has {count} candidate targets")]
    AmbiguousBackEdge {
        source_word: String,
        label: String,
        count: usize,
    },
    #[error("Kleene star applied to an expression with nonzero constant term")]
    StarOfUnit,
    #[error("expression is ambiguous: word {word} occurs {count} times")]
    AmbiguousExpression { word: String, count: u64 },
    #[error("expression still contains loop placeholders")]
    UnresolvedPlaceholder,
    #[error("minimal ideal is not left zero")]
    NotLeftZero,
    #[error("nullspace of T - I has dimension {0}, expected 1")]
    NotIrreducible(usize),
    #[error("residual mass does not vanish in the limit: {0}")]
    ResidualMassNonzero(String),
    #[error("verification failed at {point}: {detail}")]
    VerificationFailed { point: String, detail: String },
    #[error("unknown vertex word {0:?}")]
    UnknownVertexWord(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
