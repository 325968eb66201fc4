//! Shared numerical kernels: quadrature, root finding, differentiation.

pub mod diff;
pub mod quad;
pub mod roots;
