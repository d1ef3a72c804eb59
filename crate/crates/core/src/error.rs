use thiserror::Error;

use crate::ensembles::{AxiomReport, Matching, SupportKey};
use crate::extension::CompatibilityWitness;
use crate::simplex::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} lies outside the ambient {m}x{n} grid")]
    IndexOutOfRange { vertex: Vertex, m: usize, n: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("flip not supported: {0}")]
    FlipNotSupported(String),

    #[error("not a triangulation: support {support} carries two matchings {first} and {second}")]
    SupportConflict { support: SupportKey, first: Matching, second: Matching },

    #[error("matching ensemble violates its axioms:\n{0}")]
    AxiomFailure(Box<AxiomReport>),

    #[error("skeleton faces are incompatible: {0}")]
    Incompatible(Box<CompatibilityWitness>),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
