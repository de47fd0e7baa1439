use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::Real;

/// A point `(z, tau)` of `H^n = C^n x R`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergPoint<T> {
    pub z: Vec<Complex<T>>,
    pub tau: T,
}

/// `mu = 2 |z - w|^2` and `theta = (tau - s) + 2 Im <z, w>` for a pair of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry<T> {
    pub mu: T,
    pub theta: T,
}

impl<T: Real> HeisenbergPoint<T> {
    pub fn new(z: Vec<Complex<T>>, tau: T) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::Precondition {
                function: "HeisenbergPoint::new",
                detail: "dimension n must be at least 1".into(),
            });
        }
        if !tau.is_finite() || z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Precondition {
                function: "HeisenbergPoint::new",
                detail: "coordinates must be finite".into(),
            });
        }
        Ok(Self { z, tau })
    }

    /// Point with real coordinates `x_j + i y_j`.
    pub fn from_real(x: &[T], y: &[T], tau: T) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        Self::new(x.iter().zip(y).map(|(&a, &b)| Complex::new(a, b)).collect(), tau)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            z: vec![Complex::new(T::zero(), T::zero()); n],
            tau: T::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// `|z|^2`.
    pub fn z_norm_sqr(&self) -> T {
        self.z.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn is_identity(&self) -> bool {
        self.tau == T::zero() && self.z.iter().all(|c| c.re == T::zero() && c.im == T::zero())
    }

    /// Dilation `(r z, r^2 tau)`.
    pub fn dilate(&self, r: T) -> Self {
        Self {
            z: self.z.iter().map(|c| c * r).collect(),
            tau: r * r * self.tau,
        }
    }
}

fn check_dims<T>(p: &HeisenbergPoint<T>, q: &HeisenbergPoint<T>) -> Result<()> {
    if p.z.len() != q.z.len() {
        return Err(Error::DimensionMismatch {
            left: p.z.len(),
            right: q.z.len(),
        });
    }
    Ok(())
}

/// `<z, w> = sum_j z_j conj(w_j)`.
pub fn hermitian_product<T: Real>(z: &[Complex<T>], w: &[Complex<T>]) -> Complex<T> {
    z.iter()
        .zip(w)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b.conj())
}

/// Group law `(z, tau)(w, s) = (z + w, tau + s + 2 Im <z, w>)`.
pub fn multiply<T: Real>(p: &HeisenbergPoint<T>, q: &HeisenbergPoint<T>) -> Result<HeisenbergPoint<T>> {
    check_dims(p, q)?;
    let twist = hermitian_product(&p.z, &q.z).im;
    Ok(HeisenbergPoint {
        z: p.z.iter().zip(&q.z).map(|(a, b)| a + b).collect(),
        tau: p.tau + q.tau + (twist + twist),
    })
}

/// `(z, tau)^-1 = (-z, -tau)`.
pub fn inverse<T: Real>(p: &HeisenbergPoint<T>) -> HeisenbergPoint<T> {
    HeisenbergPoint {
        z: p.z.iter().map(|c| -c).collect(),
        tau: -p.tau,
    }
}

/// Fourth power of the Koranyi gauge, `|z|^4 + tau^2`.
pub fn koranyi_gauge4<T: Real>(p: &HeisenbergPoint<T>) -> T {
    let r2 = p.z_norm_sqr();
    r2 * r2 + p.tau * p.tau
}

pub fn pair_geometry<T: Real>(p: &HeisenbergPoint<T>, q: &HeisenbergPoint<T>) -> Result<PairGeometry<T>> {
    check_dims(p, q)?;
    let diff = p.z.iter().zip(&q.z).fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr());
    let twist = hermitian_product(&p.z, &q.z).im;
    Ok(PairGeometry {
        mu: diff + diff,
        theta: (p.tau - q.tau) + (twist + twist),
    })
}
