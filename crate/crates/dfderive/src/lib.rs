//! Exact-arithmetic carriers (rings, algebras, modules, bimodules), additive
//! maps between them, witness-bearing law checkers, structural predicates,
//! pruned enumeration of constrained additive maps, and theorem-scale
//! brute-force oracles on small finite structures.
//!
//! Everything is exact: arbitrary-precision integers, normalized rationals,
//! and modular residues. There is no floating point anywhere.

pub mod analysis;
pub mod carrier;
pub mod check;
pub mod enumerate;
pub mod error;
pub mod map;
pub mod jordan;
pub mod oracle;
pub mod exec;
pub mod probe;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod subset;
pub mod tables;
pub mod value;

pub use carrier::{Carrier, CarrierKind, Cardinality, Construction, DeclaredFact, Element, FactKind};
pub use check::{VerificationReport, Verdict, Witness};
pub use error::{Error, Result};
pub use map::{AdditiveMap, RoleClaim};
pub use probe::{ProbeSpec, Strategy};
pub use scalar::{Scalar, ScalarDomain};
pub use subset::{Ideal, Predicate, Sidedness, Submodule};
pub use value::Value;
