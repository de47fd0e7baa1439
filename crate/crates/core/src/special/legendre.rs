//! Legendre function of the first kind on the cut `(-1, 1)`.

use super::hypergeometric::gauss_2f1;
use crate::error::{Error, Result};
use crate::numerics::{gamma_real, is_nonpositive_integer, Real};

/// `P_lambda^nu(x)` for `|x| < 1`, in the on-cut (Ferrers) normalization
///
/// `P_lambda^nu(x) = ((1 + x) / (1 - x))^(nu/2) / Gamma(1 - nu) * 2F1(-lambda, lambda + 1; 1 - nu; (1 - x) / 2)`,
///
/// which is real on the whole interval.
pub fn legendre_p<T: Real>(degree: T, order: T, x: T) -> Result<T> {
    if !(x.abs() < T::one()) {
        return Err(Error::Domain {
            function: "legendre_p",
            detail: format!("need |x| < 1, got x = {}", x),
        });
    }
    let c = T::one() - order;
    if is_nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "legendre_p",
            at: format!("1 - order = {}", c),
        });
    }
    let one = T::one();
    let half = T::lit(0.5);
    let prefactor = ((one + x) / (one - x)).powf(order * half) / gamma_real(c)?;
    let series = gauss_2f1(-degree, degree + one, c, (one - x) * half)?;
    Ok(prefactor * series)
}
