//! Exact computations with finite dg categories over ℚ or 𝔽_p.

pub mod cli;
pub mod complex;
pub mod dgcat;
pub mod error;
pub mod field;
pub mod filtlab;
pub mod glue;
pub mod glue_prime;
pub mod hypercube;
pub mod json;
pub mod linalg;
pub mod random;
pub mod twisted;

pub use complex::{Complex, GradedMap};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::Matrix;
