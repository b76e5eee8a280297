//! Exact computer algebra for quantized multiplicative quiver varieties at
//! roots of unity: PBW rewriting, Frobenius centers, degeneration brackets,
//! zero-fiber matrix algebras and the classical multiplicative geometry.

pub mod azumaya;
pub mod classical;
pub mod error;
pub mod linalg;
pub mod ncalg;
pub mod poisson;
pub mod qalgebras;
pub mod scalars;

pub use error::{Error, Result};
