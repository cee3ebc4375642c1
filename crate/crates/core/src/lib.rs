//! Projective planes over the two-dimensional real algebras (complex, double
//! and dual numbers), their realization as line congruences of `RP^5`, and
//! the ruled 3-folds swept by algebra-smooth lines.
//!
//! Everything numeric is generic over [`Scalar`], so the same code runs in
//! exact rational arithmetic (for identities that must hold on the nose) and
//! in `f64` (for sampled analysis).

pub mod algebra2d;
pub mod error;
pub mod exactlin;
pub mod grassmann;
pub mod model;
pub mod proj_plane;
pub mod report;
pub mod ruled;
pub mod sampling;
pub mod scalar;
pub mod wire;

pub use algebra2d::{AlgebraKind, ConeRuling, Extended, Mat2, A2};
pub use error::{Error, Result};
pub use model::{model, registry, AlgebraModel, Registry};
pub use scalar::{Rational, Scalar};
