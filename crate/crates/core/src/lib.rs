//! Construction and certification of bipartite Ramanujan graphs through shift
//! k-lifts.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the CLI and the certificates use.
//! Matching polynomials are computed exactly over big integers.

pub mod construct;
pub mod error;
pub mod graph;
pub mod lift;
pub mod poly;
pub mod scalar;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use construct::{construct, Construction, ConstructionPlan, StagePlan};
pub use graph::{complete_bipartite, content_digest, validate, Graph, RegularityReport};
pub use poly::{IntPolynomial, Polynomial};
pub use scalar::Scalar;
pub use search::{SearchBudget, SearchOutcome, SearchReport};
pub use spectral::{Certificate, Verdict};

pub type Poly = Polynomial<f64>;
pub type Spectrum64 = spectral::Spectrum<f64>;
pub type QuotientMatrix64 = lift::QuotientMatrix<f64>;
