use thiserror::Error;

use crate::atom::Atom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbolic set {0} has no rule for this operation")]
    SymbolicSetUnsupported(String),
    #[error("fiber of {0} is infinite")]
    InfiniteFiber(Atom),
    #[error("{0} is not an atom of the system")]
    AtomOutsideSpace(Atom),
    #[error("set has measure zero")]
    ZeroMeasureSet,
    #[error("set has infinite measure")]
    InfiniteMeasureSet,
    #[error("map is not injective")]
    NotInjective,
    #[error("weights are unbounded")]
    UnboundedWeights,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no witness times found up to horizon {horizon}")]
    NoWitnessTimes { horizon: u64 },
    #[error("budget exhausted after {reached} of {requested} stages")]
    BudgetExhausted { reached: usize, requested: usize },
    #[error("scalars must be distinct")]
    DuplicateScalars,
    #[error("total measure is infinite")]
    InfiniteTotalMeasure,
    #[error("unknown gallery entry `{0}`")]
    UnknownEntry(String),
    #[error("vector takes nonzero value {0} on an atom of infinite measure")]
    InfiniteNorm(Atom),
    #[error("|value|^p is not rational for value {0}")]
    InexactPower(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
