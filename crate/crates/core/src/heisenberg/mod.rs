//! The Heisenberg group `H^n`: group law, gauge, pair geometry and the
//! sub-Laplacian applied to test functions with exact derivatives.

mod functions;
mod group;

pub use functions::{
    apply_sublaplacian, derivative_consistency, DerivativeConsistency, Gaussian, Gradient, Polynomial, Product,
    SecondPartials, TestFunction,
};
pub use group::{hermitian_product, inverse, koranyi_gauge4, multiply, pair_geometry, HeisenbergPoint, PairGeometry};
