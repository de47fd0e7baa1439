//! Fundamental solution of the sub-Laplacian on the Heisenberg groups H^n.
//!
//! The crate evaluates Folland's fundamental solution three independent ways
//! and checks the identities that connect them:
//!
//! - the closed form `c_n (|z|^4 + tau^2)^(-n/2)` ([`kernels::folland_closed`]),
//! - the Tricomi-Psi integral representation ([`kernels::folland_integral`]),
//! - the `zeta -> 0` limit of the resolvent kernel ([`kernels::resolvent`],
//!   [`kernels::green_r0`]).
//!
//! Module map:
//!
//! - [`numerics`]: scalar contract, complex gamma, adaptive and semi-infinite quadrature.
//! - [`special`]: Kummer `1F1`, Gauss `2F1`, Tricomi `Psi`, Legendre `P`, scaled Bessel `K`.
//! - [`heisenberg`]: group law, pair geometry, exact sub-Laplacian of test functions.
//! - [`kernels`]: the kernel evaluators.
//! - [`verify`]: identity checks producing [`verify::VerificationReport`]s.
//! - [`cli`]: the `heiskern` command line.
//!
//! The numerical core is generic over [`numerics::Real`] (`f32` or `f64`);
//! the aliases below fix it to `f64`, which is what every accuracy target
//! in this crate is stated for.

pub mod cli;
pub mod error;
pub mod heisenberg;
pub mod kernels;
pub mod numerics;
pub mod special;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used for `zeta`, complex gamma arguments and Psi parameters.
pub type Complex = num_complex::Complex<f64>;
/// Point of H^n in double precision.
pub type Point = heisenberg::HeisenbergPoint<f64>;
/// Pair geometry `(mu, theta)` in double precision.
pub type Geometry = heisenberg::PairGeometry<f64>;
/// Quadrature settings in double precision.
pub type QuadConfig = numerics::QuadratureConfig<f64>;
/// Result of a real-valued quadrature.
pub type RealQuad = numerics::QuadratureResult<f64, f64>;
/// Result of a complex-valued quadrature.
pub type ComplexQuad = numerics::QuadratureResult<Complex, f64>;
