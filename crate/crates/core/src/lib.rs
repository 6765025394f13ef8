//! Numerical laboratory for the generalized spherical means
//! `A_t^α f(x) = Γ(α)^{-1} ∫_{|y|≤1} (1-|y|²)^{α-1} f(x - t y) dy`, their
//! Fourier multipliers, a family of oscillatory test functions, and the
//! power-law growth experiments that probe `L^p` boundedness of the
//! associated maximal operator.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod exponent_regions;
pub mod output;
pub mod quadrature;
pub mod radial_fourier;
pub mod scaling_lab;
pub mod special_functions;
pub mod spherical_means;
pub mod test_function;

pub use error::{Result, SmlError};
