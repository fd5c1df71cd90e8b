//! Sigma-type and interpolating entire functions on complex lattices
//! `Λ = A·Z[i]^d`, with numerical checks in the Bargmann-Fock setting.

pub mod builders;
pub mod cjson;
pub mod error;
pub mod lattice;
pub mod logc;
pub mod verify;
pub mod weierstrass;
pub mod zi;

pub use error::{Error, Result};
pub use logc::LogComplex;
pub use weierstrass::{EntireFn, ScalarFn, SigmaEvaluator};
pub use zi::GaussInt;
