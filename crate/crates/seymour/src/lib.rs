//! Exact-arithmetic toolkit for second-neighborhood analysis of arc-weighted
//! digraphs: neighborhood weights, Seymour-vertex detection, Farkas
//! feasibility certificates, losing densities, median orders, and a seeded
//! search harness.
//!
//! All weights are arbitrary-precision rationals kept in lowest terms, so
//! every sign test and every certificate check is exact. There is no
//! floating-point path anywhere in the crate.

pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod io;
pub mod lp;
pub mod order;
pub mod report;
pub mod transform;

#[cfg(test)]
pub(crate) mod testutil;

pub use graph::{Digraph, Neighborhoods, VertexWeighting};
pub use lp::{CertVariant, FarkasCertificate, FarkasSystem, LdOutcome, LpOutcome};
pub use order::{MedianOrder, OrderMode};
pub use report::{Classification, NeighborhoodReport, VertexReport};
pub use transform::{Contraction, Expansion};

/// Exact rational scalar used for every weight and every solver entry.
pub type Rational = num::BigRational;

/// Shorthand constructor for small rationals. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(num::BigInt::from(numer), num::BigInt::from(denom))
}

/// Renders a rational in canonical form: `p` when the denominator is one,
/// `p/q` otherwise, always in lowest terms.
pub fn format_rational(value: &Rational) -> String {
    use num::One;
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Errors shared by the whole crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid digraph: {0}")]
    InvalidGraph(String),
    #[error("vertex {vertex} out of range (n = {n})")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("weighting has {len} entries but the digraph has {n} vertices")]
    WeightingMismatch { len: usize, n: usize },
    #[error("no length-2 path from {from} to {to}")]
    NoTwoPath { from: usize, to: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("order cap exceeded: n = {n} > cap = {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("not a permutation of the vertex set")]
    NotPermutation,
    #[error("expansion too large: {size} vertices exceeds cap {cap}")]
    ExpansionTooLarge { size: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
