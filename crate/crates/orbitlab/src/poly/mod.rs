//! Exact polynomial algebra: univariate integer polynomials with modular
//! gcd and rational factorization, homogeneous binary forms, and sparse
//! multivariate forms.

pub mod binform;
pub mod factor;
pub mod multipoly;
pub mod zpoly;

pub use binform::{sylvester_resultant, BinForm};
pub use multipoly::MultiPoly;
pub use zpoly::ZPoly;
