use crate::error::{Error, Result};
use crate::numerics::Real;

use super::group::HeisenbergPoint;

/// First partials `d/dx_j`, `d/dy_j`, `d/dtau`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub tau: T,
}

/// The second partials the sub-Laplacian needs, per coordinate pair `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondPartials<T> {
    pub xx: Vec<T>,
    pub yy: Vec<T>,
    pub xy: Vec<T>,
    pub x_tau: Vec<T>,
    pub y_tau: Vec<T>,
    pub tau_tau: T,
}

/// A smooth function on `H^n` with exact first and second partials.
///
/// Beyond `support_radius` (in every coordinate) the value and all listed
/// derivatives are below `1e-16`. Implementations must be callable from
/// several threads at once.
pub trait TestFunction<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, p: &HeisenbergPoint<T>) -> T;
    fn grad(&self, p: &HeisenbergPoint<T>) -> Gradient<T>;
    fn hess(&self, p: &HeisenbergPoint<T>) -> SecondPartials<T>;
    fn support_radius(&self) -> T;
}

// Real coordinates in the order x_1..x_n, y_1..y_n, tau.
fn coords<T: Real>(p: &HeisenbergPoint<T>) -> Vec<T> {
    let mut c: Vec<T> = p.z.iter().map(|z| z.re).collect();
    c.extend(p.z.iter().map(|z| z.im));
    c.push(p.tau);
    c
}

/// Functions described by partials in the flat coordinate order.
trait CoordinateForm<T: Real> {
    fn n(&self) -> usize;
    fn d0(&self, c: &[T]) -> T;
    fn d1(&self, c: &[T], k: usize) -> T;
    fn d2(&self, c: &[T], k: usize, l: usize) -> T;
}

fn gradient_from<T: Real, F: CoordinateForm<T>>(f: &F, p: &HeisenbergPoint<T>) -> Gradient<T> {
    let n = f.n();
    let c = coords(p);
    Gradient {
        x: (0..n).map(|j| f.d1(&c, j)).collect(),
        y: (0..n).map(|j| f.d1(&c, n + j)).collect(),
        tau: f.d1(&c, 2 * n),
    }
}

fn partials_from<T: Real, F: CoordinateForm<T>>(f: &F, p: &HeisenbergPoint<T>) -> SecondPartials<T> {
    let n = f.n();
    let c = coords(p);
    let t = 2 * n;
    SecondPartials {
        xx: (0..n).map(|j| f.d2(&c, j, j)).collect(),
        yy: (0..n).map(|j| f.d2(&c, n + j, n + j)).collect(),
        xy: (0..n).map(|j| f.d2(&c, j, n + j)).collect(),
        x_tau: (0..n).map(|j| f.d2(&c, j, t)).collect(),
        y_tau: (0..n).map(|j| f.d2(&c, n + j, t)).collect(),
        tau_tau: f.d2(&c, t, t),
    }
}

/// Polynomial in the real coordinates. Unbounded, so its support radius is
/// infinite; it is meant for algebraic checks and as a factor of a
/// [`Product`] with a decaying function.
#[derive(Debug, Clone)]
pub struct Polynomial<T> {
    n: usize,
    // (coefficient, exponents of x_1..x_n, y_1..y_n, tau)
    terms: Vec<(T, Vec<u32>)>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    /// Adds `coeff * prod x_j^{ex_j} y_j^{ey_j} * tau^{et}`.
    pub fn term(mut self, coeff: T, ex: &[u32], ey: &[u32], et: u32) -> Result<Self> {
        if ex.len() != self.n || ey.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: ex.len().max(ey.len()),
            });
        }
        let mut e = ex.to_vec();
        e.extend_from_slice(ey);
        e.push(et);
        self.terms.push((coeff, e));
        Ok(self)
    }

    fn eval_partial(&self, c: &[T], order: &[usize]) -> T {
        let mut total = T::zero();
        for (coeff, exps) in &self.terms {
            let mut v = *coeff;
            for (k, (&e, &x)) in exps.iter().zip(c).enumerate() {
                let d = order.iter().filter(|&&o| o == k).count() as u32;
                if d > e {
                    v = T::zero();
                    break;
                }
                let mut falling = T::one();
                for i in 0..d {
                    falling = falling * T::lit((e - i) as f64);
                }
                v = v * falling * x.powi((e - d) as i32);
            }
            total = total + v;
        }
        total
    }
}

impl<T: Real> CoordinateForm<T> for Polynomial<T> {
    fn n(&self) -> usize {
        self.n
    }
    fn d0(&self, c: &[T]) -> T {
        self.eval_partial(c, &[])
    }
    fn d1(&self, c: &[T], k: usize) -> T {
        self.eval_partial(c, &[k])
    }
    fn d2(&self, c: &[T], k: usize, l: usize) -> T {
        self.eval_partial(c, &[k, l])
    }
}

/// `amplitude * exp(-sum_j a_j |z_j - center_j|^2 - b (tau - tau0)^2)`.
#[derive(Debug, Clone)]
pub struct Gaussian<T> {
    amplitude: T,
    // weights and centres in flat coordinate order
    weights: Vec<T>,
    centre: Vec<T>,
}

impl<T: Real> Gaussian<T> {
    /// `exp(-|z|^2 - tau^2)` on `H^n`.
    pub fn standard(n: usize) -> Self {
        Self {
            amplitude: T::one(),
            weights: vec![T::one(); 2 * n + 1],
            centre: vec![T::zero(); 2 * n + 1],
        }
    }

    /// Per-`j` widths `a_j`, central width `b`, and centre point.
    pub fn new(a: &[T], b: T, centre: &HeisenbergPoint<T>) -> Result<Self> {
        if a.len() != centre.dim() {
            return Err(Error::DimensionMismatch {
                left: a.len(),
                right: centre.dim(),
            });
        }
        if a.iter().chain(std::iter::once(&b)).any(|&w| !(w > T::zero())) {
            return Err(Error::Precondition {
                function: "Gaussian::new",
                detail: "widths must be positive".into(),
            });
        }
        let mut weights = a.to_vec();
        weights.extend_from_slice(a);
        weights.push(b);
        Ok(Self {
            amplitude: T::one(),
            weights,
            centre: coords(centre),
        })
    }

    pub fn with_amplitude(mut self, amplitude: T) -> Self {
        self.amplitude = amplitude;
        self
    }

    fn offsets(&self, c: &[T]) -> Vec<T> {
        c.iter().zip(&self.centre).map(|(&x, &m)| x - m).collect()
    }
}

impl<T: Real> CoordinateForm<T> for Gaussian<T> {
    fn n(&self) -> usize {
        (self.weights.len() - 1) / 2
    }
    fn d0(&self, c: &[T]) -> T {
        let d = self.offsets(c);
        let q = d.iter().zip(&self.weights).fold(T::zero(), |acc, (&x, &w)| acc + w * x * x);
        self.amplitude * (-q).exp()
    }
    fn d1(&self, c: &[T], k: usize) -> T {
        let d = self.offsets(c);
        -T::lit(2.0) * self.weights[k] * d[k] * self.d0(c)
    }
    fn d2(&self, c: &[T], k: usize, l: usize) -> T {
        let d = self.offsets(c);
        let (wk, wl) = (self.weights[k], self.weights[l]);
        let mut f = T::lit(4.0) * wk * wl * d[k] * d[l];
        if k == l {
            f = f - T::lit(2.0) * wk;
        }
        f * self.d0(c)
    }
}

macro_rules! test_function_via_coordinates {
    ($ty:ident) => {
        impl<T: Real> TestFunction<T> for $ty<T> {
            fn dim(&self) -> usize {
                CoordinateForm::n(self)
            }
            fn value(&self, p: &HeisenbergPoint<T>) -> T {
                self.d0(&coords(p))
            }
            fn grad(&self, p: &HeisenbergPoint<T>) -> Gradient<T> {
                gradient_from(self, p)
            }
            fn hess(&self, p: &HeisenbergPoint<T>) -> SecondPartials<T> {
                partials_from(self, p)
            }
            fn support_radius(&self) -> T {
                self.radius()
            }
        }
    };
}

impl<T: Real> Polynomial<T> {
    fn radius(&self) -> T {
        T::infinity()
    }
}

impl<T: Real> Gaussian<T> {
    /// Distance from the origin beyond which `|phi|` and its derivatives,
    /// which carry polynomial factors up to `4 w^2 r^2`, stay below `1e-16`.
    fn radius(&self) -> T {
        let w_min = self.weights.iter().copied().fold(T::infinity(), T::min);
        let w_max = self.weights.iter().copied().fold(T::zero(), T::max);
        let offset = self.centre.iter().copied().fold(T::zero(), |m, c| m.max(c.abs()));
        let mut r = (T::lit(37.0) / w_min).sqrt();
        let amp = self.amplitude.abs().max(T::one());
        for _ in 0..8 {
            let factor = T::lit(4.0) * w_max * w_max * r * r + T::lit(2.0) * w_max + T::one();
            r = ((T::lit(36.85) + (amp * factor).ln()) / w_min).sqrt();
        }
        offset + r
    }
}

test_function_via_coordinates!(Polynomial);
test_function_via_coordinates!(Gaussian);

/// Pointwise product of two test functions.
#[derive(Debug, Clone)]
pub struct Product<A, B> {
    pub left: A,
    pub right: B,
}

impl<A, B> Product<A, B> {
    pub fn new(left: A, right: B) -> Self {
        Self { left, right }
    }
}

impl<T: Real, A: TestFunction<T>, B: TestFunction<T>> TestFunction<T> for Product<A, B> {
    fn dim(&self) -> usize {
        self.left.dim()
    }

    fn value(&self, p: &HeisenbergPoint<T>) -> T {
        self.left.value(p) * self.right.value(p)
    }

    fn grad(&self, p: &HeisenbergPoint<T>) -> Gradient<T> {
        let (f, g) = (self.left.value(p), self.right.value(p));
        let (df, dg) = (self.left.grad(p), self.right.grad(p));
        let mix = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * g + f * y).collect();
        Gradient {
            x: mix(&df.x, &dg.x),
            y: mix(&df.y, &dg.y),
            tau: df.tau * g + f * dg.tau,
        }
    }

    fn hess(&self, p: &HeisenbergPoint<T>) -> SecondPartials<T> {
        let (f, g) = (self.left.value(p), self.right.value(p));
        let (df, dg) = (self.left.grad(p), self.right.grad(p));
        let (hf, hg) = (self.left.hess(p), self.right.hess(p));
        let n = self.dim();
        // (fg)_kl = f_kl g + f_k g_l + f_l g_k + f g_kl
        let rule = |fkl: T, gkl: T, fk: T, gk: T, fl: T, gl: T| fkl * g + fk * gl + fl * gk + f * gkl;
        SecondPartials {
            xx: (0..n).map(|j| rule(hf.xx[j], hg.xx[j], df.x[j], dg.x[j], df.x[j], dg.x[j])).collect(),
            yy: (0..n).map(|j| rule(hf.yy[j], hg.yy[j], df.y[j], dg.y[j], df.y[j], dg.y[j])).collect(),
            xy: (0..n).map(|j| rule(hf.xy[j], hg.xy[j], df.x[j], dg.x[j], df.y[j], dg.y[j])).collect(),
            x_tau: (0..n)
                .map(|j| rule(hf.x_tau[j], hg.x_tau[j], df.x[j], dg.x[j], df.tau, dg.tau))
                .collect(),
            y_tau: (0..n)
                .map(|j| rule(hf.y_tau[j], hg.y_tau[j], df.y[j], dg.y[j], df.tau, dg.tau))
                .collect(),
            tau_tau: rule(hf.tau_tau, hg.tau_tau, df.tau, dg.tau, df.tau, dg.tau),
        }
    }

    fn support_radius(&self) -> T {
        self.left.support_radius().min(self.right.support_radius())
    }
}

/// Sub-Laplacian of `phi` at `p`:
///
/// `sum_j [ -(phi_xjxj + phi_yjyj)/4 - |z_j|^2 phi_tautau + x_j phi_yjtau - y_j phi_xjtau ]`,
///
/// which is `-(1/4) sum_j (X_j^2 + Y_j^2)` for the left-invariant fields
/// `X_j = d/dx_j + 2 y_j d/dtau`, `Y_j = d/dy_j - 2 x_j d/dtau`.
pub fn apply_sublaplacian<T: Real, F: TestFunction<T> + ?Sized>(phi: &F, p: &HeisenbergPoint<T>) -> Result<T> {
    if phi.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: p.dim(),
        });
    }
    let h = phi.hess(p);
    let quarter = T::lit(0.25);
    let mut total = T::zero();
    for (j, z) in p.z.iter().enumerate() {
        total = total - quarter * (h.xx[j] + h.yy[j]) - z.norm_sqr() * h.tau_tau + z.re * h.y_tau[j]
            - z.im * h.x_tau[j];
    }
    Ok(total)
}

/// Worst disagreement between the supplied derivatives and central
/// differences (step `h`), relative to the largest derivative magnitude at
/// the point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeConsistency<T> {
    pub max_deviation: T,
    pub scale: T,
}

impl<T: Real> DerivativeConsistency<T> {
    pub fn within(&self, rel_tol: T) -> bool {
        self.max_deviation <= rel_tol
    }
}

pub fn derivative_consistency<T: Real, F: TestFunction<T> + ?Sized>(
    phi: &F,
    p: &HeisenbergPoint<T>,
    h: T,
) -> Result<DerivativeConsistency<T>> {
    if phi.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: p.dim(),
        });
    }
    let n = p.dim();
    let shifted = |k: usize, s: T| {
        let mut q = p.clone();
        if k < n {
            q.z[k].re = q.z[k].re + s;
        } else if k < 2 * n {
            q.z[k - n].im = q.z[k - n].im + s;
        } else {
            q.tau = q.tau + s;
        }
        q
    };
    let flat_grad = |g: Gradient<T>| {
        let mut v = g.x;
        v.extend(g.y);
        v.push(g.tau);
        v
    };
    let two_h = h + h;
    let exact_grad = flat_grad(phi.grad(p));
    let hs = phi.hess(p);
    let mut pairs: Vec<(T, T)> = Vec::new();
    for k in 0..=2 * n {
        let fd = (phi.value(&shifted(k, h)) - phi.value(&shifted(k, -h))) / two_h;
        pairs.push((fd, exact_grad[k]));
    }
    // second partials from differences of the exact gradient
    let grad_diff = |k: usize| {
        let up = flat_grad(phi.grad(&shifted(k, h)));
        let down = flat_grad(phi.grad(&shifted(k, -h)));
        up.iter().zip(&down).map(|(&a, &b)| (a - b) / two_h).collect::<Vec<T>>()
    };
    let t = 2 * n;
    let dtau = grad_diff(t);
    pairs.push((dtau[t], hs.tau_tau));
    for j in 0..n {
        let dx = grad_diff(j);
        let dy = grad_diff(n + j);
        pairs.push((dx[j], hs.xx[j]));
        pairs.push((dy[n + j], hs.yy[j]));
        pairs.push((dx[n + j], hs.xy[j]));
        pairs.push((dy[j], hs.xy[j]));
        pairs.push((dx[t], hs.x_tau[j]));
        pairs.push((dtau[j], hs.x_tau[j]));
        pairs.push((dy[t], hs.y_tau[j]));
        pairs.push((dtau[n + j], hs.y_tau[j]));
    }
    let scale = pairs
        .iter()
        .fold(phi.value(p).abs(), |m, &(_, exact)| m.max(exact.abs()))
        .max(T::min_positive_value());
    let max_deviation = pairs
        .iter()
        .fold(T::zero(), |m, &(fd, exact)| m.max((fd - exact).abs() / scale));
    Ok(DerivativeConsistency { max_deviation, scale })
}
