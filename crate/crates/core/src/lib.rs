//! Exact computations with truncated A∞-algebras over ℚ and prime fields.

pub mod ainfty;
pub mod bifib;
pub mod coalgebra;
pub mod error;
pub mod extension;
pub mod generate;
pub mod linalg;
pub mod multimap;
pub mod scalar;
pub mod space;
pub mod transfer;

pub use error::{Error, Result};
pub use multimap::{GradedLinearMap, MultiMap};
pub use scalar::{Field, Scalar};
pub use space::GradedSpace;
