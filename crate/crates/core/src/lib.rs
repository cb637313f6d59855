//! Exact computations on torsion quotients of rank-2 trivial bundles on curves:
//! truncated-module charts, invariant-subspace censuses over finite fields,
//! Grassmannian chart equations, and the degree-3 birational involution of ℙ³.

pub mod census;
pub mod chart_eqs;
pub mod cli;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod modules;
pub mod parse;
pub mod poly;
pub mod projective;
pub mod report;
pub mod scalar;
pub mod stable_pairs;
pub mod truncated;

pub use error::{Error, Result};
pub use parse::parse_poly;
pub use poly::{BinaryForm, Monomial, MultiPoly};
pub use scalar::{Field, Scalar};
pub use truncated::TruncatedPoly;
