//! Scalar foundations and quadrature engines.
//!
//! All routines are pure; integrands handed to the engines are called
//! sequentially from the calling thread and need not be `Sync`.

mod extended;
mod gamma;
mod quadrature;
mod scalar;

pub use extended::{gamma_dd, recip_gamma_dd, DoubleDouble};
pub use gamma::{gamma, gamma_real, recip_gamma, sin_pi};
pub use quadrature::{
    integrate_adaptive, integrate_adaptive_points, integrate_adaptive_with, integrate_semi_infinite,
    integrate_semi_infinite_envelope, integrate_semi_infinite_points, EndpointSingularity, Envelope, QuadratureConfig, QuadratureResult, Truncation,
};
pub use scalar::{is_complex_nonpositive_integer, is_nonpositive_integer, near_integer, QuadValue, Real};
