//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building carriers, evaluating maps,
/// or running checks, enumerations, and oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("declared fact refuted: {fact} on `{carrier}`: {witness}")]
    DeclaredFactRefuted {
        carrier: String,
        fact: String,
        witness: String,
    },
    #[error("module `{0}` is not unital")]
    NonUnitalModule(String),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("carrier `{0}` is infinite; operation requires a finite carrier")]
    InfiniteCarrier(String),
    #[error("ideal is not two-sided: {0}")]
    NotTwoSided(String),
    #[error("closure failure: {0}")]
    ClosureFailure(String),
    #[error("unsupported carrier for this constructor: {0}")]
    UnsupportedCarrier(String),
    #[error("non-integral scaling: {0}")]
    NonIntegralScaling(String),
    #[error("map does not leave the subgroup invariant: image of {witness} escapes")]
    NotInvariant { witness: String },
    #[error("prerequisite law failed: {which}")]
    PrereqFailed { which: String },
    #[error("hypothesis unmet for {lemma}: {reason}")]
    HypothesisUnmet { lemma: String, reason: String },
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("enumeration budget exceeded after {examined} candidates")]
    BudgetExceeded { examined: u64 },
    #[error("carrier `{0}` is not finite")]
    NotFinite(String),
    #[error("oracle hypothesis failed: {instance}: {reason}")]
    HypothesisFailed { instance: String, reason: String },
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("unresolved reference: {0}")]
    ResolveError(String),
    #[error("validation error: {0}")]
    ValidationError(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
