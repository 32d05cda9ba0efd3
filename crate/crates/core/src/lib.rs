//! J-spectral factorization `S = S₊ J S₊*` of Hermitian Laurent-polynomial
//! matrix functions on the unit circle.
//!
//! The pipeline is:
//!
//! 1. [`triangular`]: lower-triangular J-factorization `S = M J M*` with
//!    causal diagonal entries, valid when every leading principal minor of
//!    `S` has constant sign on the circle.
//! 2. [`pipeline::truncate_tails`]: keep finitely many negative-power
//!    coefficients of the off-diagonal entries.
//! 3. [`pipeline::recursive_factorize`]: multiply by J-unitary polynomial
//!    correctors ([`junitary`]) one leading block at a time until the
//!    factor is causal.

pub mod displacement;
pub mod error;
pub mod fixtures;
pub mod fourier;
pub mod generate;
pub mod junitary;
pub mod laurent;
pub mod matrix;
pub mod pipeline;
pub mod roots;
pub mod scalar;
pub mod signature;
pub mod triangular;
pub mod verify;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use matrix::MatrixLaurent;
pub use num_complex::Complex64;
pub use pipeline::{factorize, FactorizationResult, PipelineConfig};
pub use signature::Signature;
