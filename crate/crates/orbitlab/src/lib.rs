//! Exact-arithmetic laboratory for arithmetic dynamics over the rationals:
//! Weil and local heights along orbits, arithmetic-degree estimation,
//! backward multiplicity cocycles on the projective line, and Banach
//! densities of dynamical return sets.
//!
//! All control flow runs on exact integer arithmetic; floating point
//! enters only in reported logarithms, roots, and ratios.

pub mod arith;
pub mod config;
pub mod degrees;
pub mod error;
pub mod heights;
pub mod lang_siegel;
pub mod maps;
pub mod multiplicity;
pub mod poly;
pub mod report;
pub mod runner;

pub use arith::{Place, ProjPoint};
