//! Special functions: Kummer `1F1`, Gauss `2F1`, Tricomi `Psi`, the product
//! `Gamma(a) Psi(a, c; u)`, Legendre `P` on the cut and scaled Bessel `K`.

mod bessel;
mod hypergeometric;
mod legendre;
mod tricomi;

pub use bessel::{bessel_k_scaled, ValidatedFastPath, FAST_PATH_TOLERANCE};
pub use hypergeometric::{gauss_2f1, kummer_m};
pub use legendre::legendre_p;
pub use tricomi::{gamma_psi_product, psi_series, tricomi_psi, PsiCache, PsiEvalMode, INTEGER_C_GUARD};
