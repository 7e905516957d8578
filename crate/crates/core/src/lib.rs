//! Exact computations in the algebraic model `A(Z_p)` for rational
//! `Z_p`-equivariant spectra.

pub mod amodel;
pub mod burnside;
pub mod cyclic;
pub mod error;
pub mod homext;
pub mod linalg;
pub mod mackey;
pub mod natseq;
pub mod random;

pub use error::{Error, Result};
