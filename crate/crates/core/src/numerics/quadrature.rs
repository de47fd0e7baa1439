//! Adaptive Gauss-Kronrod quadrature on finite and semi-infinite ranges.
//!
//! The finite-range engine keeps a max-heap of panels keyed on their
//! `|K15 - G7|` discrepancy and bisects the worst one until the summed
//! discrepancy meets the tolerance. The semi-infinite engine truncates at a
//! point derived from a caller-supplied exponential envelope and hands the
//! finite part to the same engine, optionally with panels aligned to
//! half-periods of an oscillating factor.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::scalar::{QuadValue, Real};
use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1] (non-negative half, descending); the odd
// entries are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and budgets shared by every engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Bisections allowed beyond the initial panels.
    pub max_subdivisions: usize,
    /// Bound on the discarded tail of a semi-infinite integral.
    pub tail_epsilon: T,
    /// Period of an oscillating factor; panels are aligned to its halves.
    pub oscillation_period: Option<T>,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-10),
            max_subdivisions: 4000,
            tail_epsilon: T::lit(1e-12),
            oscillation_period: None,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if !positive(self.abs_tol) || !positive(self.rel_tol) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be positive (abs_tol = {}, rel_tol = {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig("max_subdivisions must be >= 1".into()));
        }
        if !positive(self.tail_epsilon) {
            return Err(Error::InvalidConfig(format!(
                "tail_epsilon must be positive, got {}",
                self.tail_epsilon
            )));
        }
        if let Some(p) = self.oscillation_period {
            if !positive(p) {
                return Err(Error::InvalidConfig(format!(
                    "oscillation_period must be positive, got {}",
                    p
                )));
            }
        }
        Ok(())
    }

    /// `max(abs_tol, rel_tol * |value|)`.
    pub fn tolerance(&self, magnitude: T) -> T {
        self.abs_tol.max(self.rel_tol * magnitude)
    }

    pub fn with_period(mut self, period: Option<T>) -> Self {
        self.oscillation_period = period;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Outcome of a quadrature. `converged` implies
/// `error_estimate <= cfg.tolerance(|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<V, T> {
    pub value: V,
    pub error_estimate: T,
    pub evaluations: usize,
    pub converged: bool,
}

impl<V: Copy, T: Real> QuadratureResult<V, T> {
    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> QuadratureResult<W, T> {
        QuadratureResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}

/// Which endpoints get the square-root substitution that regularises
/// `(x - a)^(-1/2)`-type behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointSingularity {
    None,
    Lower,
    Upper,
    Both,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T, V> {
    lo: T,
    hi: T,
    value: V,
    error: T,
}

struct Ranked<T, V>(Panel<T, V>);

impl<T: PartialOrd, V> PartialEq for Ranked<T, V> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl<T: PartialOrd, V> Eq for Ranked<T, V> {}
impl<T: PartialOrd, V> PartialOrd for Ranked<T, V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd, V> Ord for Ranked<T, V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.error.partial_cmp(&other.0.error).unwrap_or(Ordering::Equal)
    }
}

fn sample<T, V, F>(f: &F, x: T) -> Result<V>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let v = f(x);
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { x: x.as_f64() })
    }
}

/// One G7/K15 panel: `(kronrod, |kronrod - gauss|)`.
fn gauss_kronrod_15<T, V, F>(f: &F, lo: T, hi: T) -> Result<(V, T)>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let half = T::lit(0.5);
    let center = (lo + hi) * half;
    let half_len = (hi - lo) * half;
    let fc = sample(f, center)?;
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let pair = sample(f, center - dx)? + sample(f, center + dx)?;
        kronrod = kronrod + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    let k = kronrod * half_len;
    let g = gauss * half_len;
    Ok((k, (k - g).modulus()))
}

struct CoreOutcome<T, V> {
    result: QuadratureResult<V, T>,
    /// The smallest unresolved panels hug the lower / upper endpoint.
    stuck_lower: bool,
    stuck_upper: bool,
}

/// Adaptive engine over consecutive breakpoints. `reserved` is error budget
/// already spent elsewhere (the tail of a semi-infinite range).
fn adaptive_core<T, V, F>(
    f: &F,
    points: &[T],
    cfg: &QuadratureConfig<T>,
    reserved: T,
) -> Result<CoreOutcome<T, V>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    debug_assert!(points.len() >= 2);
    let a = points[0];
    let b = points[points.len() - 1];
    let mut heap = BinaryHeap::with_capacity(points.len() + cfg.max_subdivisions + 1);
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gauss_kronrod_15(f, w[0], w[1])?;
        evaluations += 15;
        heap.push(Ranked(Panel {
            lo: w[0],
            hi: w[1],
            value,
            error,
        }));
    }
    let mut frozen: Vec<Panel<T, V>> = Vec::new();
    let mut subdivisions = 0usize;
    let mut err_sum = heap.iter().fold(T::zero(), |acc, p| acc + p.0.error);
    let mut value_sum = heap.iter().fold(V::zero(), |acc, p| acc + p.0.value);
    let converged = loop {
        let tol = cfg.tolerance(value_sum.modulus()) - reserved;
        if err_sum <= tol {
            // Re-sum to shed drift from the incremental updates.
            err_sum = heap
                .iter()
                .map(|p| p.0.error)
                .chain(frozen.iter().map(|p| p.error))
                .fold(T::zero(), |acc, e| acc + e);
            if err_sum <= tol {
                break true;
            }
        }
        if subdivisions >= cfg.max_subdivisions {
            break false;
        }
        let Some(Ranked(worst)) = heap.pop() else {
            break false;
        };
        let mid = (worst.lo + worst.hi) * T::lit(0.5);
        let min_width = T::epsilon() * T::lit(8.0) * worst.lo.abs().max(worst.hi.abs()).max(T::min_positive_value());
        if !(mid > worst.lo && mid < worst.hi) || worst.hi - worst.lo < min_width {
            frozen.push(worst);
            if heap.is_empty() {
                break false;
            }
            continue;
        }
        let (lv, le) = gauss_kronrod_15(f, worst.lo, mid)?;
        let (rv, re) = gauss_kronrod_15(f, mid, worst.hi)?;
        evaluations += 30;
        subdivisions += 1;
        err_sum = err_sum - worst.error + le + re;
        value_sum = value_sum - worst.value + lv + rv;
        heap.push(Ranked(Panel {
            lo: worst.lo,
            hi: mid,
            value: lv,
            error: le,
        }));
        heap.push(Ranked(Panel {
            lo: mid,
            hi: worst.hi,
            value: rv,
            error: re,
        }));
    };

    let mut panels: Vec<Panel<T, V>> = heap.into_iter().map(|r| r.0).collect();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.lo.partial_cmp(&q.lo).unwrap_or(Ordering::Equal));
    let value = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    let error = panels.iter().fold(T::zero(), |acc, p| acc + p.error);

    let (mut stuck_lower, mut stuck_upper) = (false, false);
    if !converged {
        let span = b - a;
        let tiny = span * T::lit(1e-7);
        for p in &panels {
            if p.hi - p.lo < tiny {
                if p.lo == a {
                    stuck_lower = true;
                }
                if p.hi == b {
                    stuck_upper = true;
                }
            }
        }
    }
    Ok(CoreOutcome {
        result: QuadratureResult {
            value,
            error_estimate: error + reserved,
            evaluations,
            converged,
        },
        stuck_lower,
        stuck_upper,
    })
}

fn check_range<T: Real>(a: T, b: T) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Precondition {
            function: "integrate_adaptive",
            detail: format!("need finite a < b, got [{}, {}]", a, b),
        });
    }
    Ok(())
}

fn substituted<T, V, F>(
    f: &F,
    a: T,
    b: T,
    cfg: &QuadratureConfig<T>,
    endpoints: EndpointSingularity,
) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let two = T::lit(2.0);
    let unit = [T::zero(), T::one()];
    let lower = |lo: T, hi: T| {
        move |u: T| f(lo + (hi - lo) * u * u) * (two * (hi - lo) * u)
    };
    let upper = |lo: T, hi: T| {
        move |u: T| f(hi - (hi - lo) * u * u) * (two * (hi - lo) * u)
    };
    match endpoints {
        EndpointSingularity::None => Ok(adaptive_core(f, &[a, b], cfg, T::zero())?.result),
        EndpointSingularity::Lower => Ok(adaptive_core(&lower(a, b), &unit, cfg, T::zero())?.result),
        EndpointSingularity::Upper => Ok(adaptive_core(&upper(a, b), &unit, cfg, T::zero())?.result),
        EndpointSingularity::Both => {
            let m = (a + b) * T::lit(0.5);
            let half_cfg = cfg.with_abs_tol(cfg.abs_tol * T::lit(0.5));
            let l = adaptive_core(&lower(a, m), &unit, &half_cfg, T::zero())?.result;
            let r = adaptive_core(&upper(m, b), &unit, &half_cfg, T::zero())?.result;
            let value = l.value + r.value;
            let error_estimate = l.error_estimate + r.error_estimate;
            Ok(QuadratureResult {
                value,
                error_estimate,
                evaluations: l.evaluations + r.evaluations,
                converged: l.converged && r.converged && error_estimate <= cfg.tolerance(value.modulus()),
            })
        }
    }
}

/// Integrates `f` over `[a, b]`.
///
/// Integrable endpoint singularities are handled by bisection first; when
/// that runs out of budget with the unresolved panels pinned to an endpoint,
/// the integral is redone with a square-root substitution at that endpoint.
/// A budget-exhausted run is returned with `converged = false`.
pub fn integrate_adaptive<T, V, F>(f: F, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    cfg.validate()?;
    check_range(a, b)?;
    let first = adaptive_core(&f, &[a, b], cfg, T::zero())?;
    if first.result.converged || !(first.stuck_lower || first.stuck_upper) {
        return Ok(first.result);
    }
    let endpoints = match (first.stuck_lower, first.stuck_upper) {
        (true, true) => EndpointSingularity::Both,
        (true, false) => EndpointSingularity::Lower,
        _ => EndpointSingularity::Upper,
    };
    let mut retry = substituted(&f, a, b, cfg, endpoints)?;
    retry.evaluations += first.result.evaluations;
    if retry.converged || retry.error_estimate < first.result.error_estimate {
        Ok(retry)
    } else {
        Ok(QuadratureResult {
            evaluations: retry.evaluations,
            ..first.result
        })
    }
}

/// [`integrate_adaptive`] with the square-root substitution applied up front
/// at the named endpoints.
pub fn integrate_adaptive_with<T, V, F>(
    f: F,
    a: T,
    b: T,
    cfg: &QuadratureConfig<T>,
    endpoints: EndpointSingularity,
) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    cfg.validate()?;
    check_range(a, b)?;
    substituted(&f, a, b, cfg, endpoints)
}

/// Adaptive integration seeded with breakpoints (sorted, at least two).
/// Interior breakpoints let the engine see features the first K15 pass on
/// the whole range would sample past.
pub fn integrate_adaptive_points<T, V, F>(f: F, points: &[T], cfg: &QuadratureConfig<T>) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::Precondition {
            function: "integrate_adaptive_points",
            detail: "need at least two breakpoints".into(),
        });
    }
    check_range(points[0], points[points.len() - 1])?;
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Precondition {
            function: "integrate_adaptive_points",
            detail: "breakpoints must be sorted".into(),
        });
    }
    Ok(adaptive_core(&f, points, cfg, T::zero())?.result)
}

/// Exponential envelope `|f(x)| <= C x^power exp(-decay_rate x)` for large
/// `x`. `C` is estimated from samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope<T> {
    pub decay_rate: T,
    pub power: T,
}

impl<T: Real> Envelope<T> {
    pub fn exponential(decay_rate: T) -> Self {
        Self {
            decay_rate,
            power: T::zero(),
        }
    }

    pub fn with_power(mut self, power: T) -> Self {
        self.power = power;
        self
    }

    fn shape(&self, x: T) -> T {
        x.powf(self.power) * (-self.decay_rate * x).exp()
    }

    /// Upper bound on `int_x^inf C t^p e^(-lambda t) dt` for `lambda x > 2p`.
    fn tail_bound(&self, scale: T, x: T) -> T {
        let lambda = self.decay_rate;
        let rate = (lambda - self.power / x).max(lambda * T::lit(0.5));
        scale * self.shape(x) / rate
    }
}

/// Truncation point and the resulting tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation<T> {
    pub cut: T,
    pub tail_bound: T,
    pub scale: T,
}

// Sample offsets (in units of 1/decay_rate) used to fit the envelope
// constant; the irrational-looking multipliers keep clear of the zeros of
// common oscillating factors.
const SCALE_SAMPLES: [f64; 8] = [0.5, 1.0, 1.618, 2.414, 3.303, 4.2, 6.1, 8.05];

fn estimate_truncation<T, V, F>(f: &F, env: &Envelope<T>, target: T, extra: &[T]) -> Result<(Truncation<T>, usize)>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let lambda = env.decay_rate;
    let mut scale = T::zero();
    let mut min_cut = T::lit(8.05) / lambda;
    let mut samples = SCALE_SAMPLES.len();
    for s in SCALE_SAMPLES {
        let x = T::lit(s) / lambda;
        let v = sample(f, x)?.modulus();
        scale = scale.max(v / env.shape(x));
    }
    // caller-declared features also calibrate the envelope
    for &x in extra.iter().filter(|&&x| x > T::zero() && x.is_finite()) {
        let v = sample(f, x)?.modulus();
        scale = scale.max(v / env.shape(x));
        min_cut = min_cut.max(x);
        samples += 1;
    }
    if scale == T::zero() {
        return Ok((
            Truncation {
                cut: min_cut,
                tail_bound: T::zero(),
                scale,
            },
            samples,
        ));
    }
    // X = (p ln X - ln(eps lambda / C)) / lambda, iterated twice.
    let log_term = (target * lambda / scale).ln();
    let mut cut = (-log_term / lambda).max(min_cut);
    for _ in 0..2 {
        cut = ((env.power * cut.ln() - log_term) / lambda).max(min_cut);
    }
    let step = T::one() / lambda;
    let mut guard = 0;
    while env.tail_bound(scale, cut) > target && guard < 200 {
        cut = cut + step;
        guard += 1;
    }
    Ok((
        Truncation {
            cut,
            tail_bound: env.tail_bound(scale, cut),
            scale,
        },
        samples,
    ))
}

/// Integrates `f` over `[0, inf)` given its decay rate.
pub fn integrate_semi_infinite<T, V, F>(f: F, cfg: &QuadratureConfig<T>, decay_rate: T) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    integrate_semi_infinite_envelope(f, cfg, Envelope::exponential(decay_rate))
}

/// Integrates `f` over `[0, inf)` under a power-times-exponential envelope.
///
/// The range is cut where the envelope's tail integral drops below
/// `min(tail_epsilon, abs_tol / 2)`; the tail bound is included in the
/// reported error estimate. With `oscillation_period` set, the panels of
/// `[0, cut]` start on multiples of half a period and the cut is rounded up
/// to one. Samples beyond half the cut that exceed ten times the fitted
/// envelope raise [`Error::DecayHintViolated`].
pub fn integrate_semi_infinite_envelope<T, V, F>(
    f: F,
    cfg: &QuadratureConfig<T>,
    envelope: Envelope<T>,
) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    integrate_semi_infinite_points(f, cfg, envelope, &[])
}

/// [`integrate_semi_infinite_envelope`] with extra interior breakpoints
/// (features such as a sharp peak the envelope knows nothing about).
/// The integrand is also sampled at the breakpoints when fitting the
/// envelope constant. Breakpoints beyond the truncation point are ignored.
pub fn integrate_semi_infinite_points<T, V, F>(
    f: F,
    cfg: &QuadratureConfig<T>,
    envelope: Envelope<T>,
    extra: &[T],
) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    cfg.validate()?;
    if !(envelope.decay_rate > T::zero() && envelope.decay_rate.is_finite()) {
        return Err(Error::Precondition {
            function: "integrate_semi_infinite",
            detail: format!("decay_rate must be positive, got {}", envelope.decay_rate),
        });
    }
    let target = cfg.tail_epsilon.min(cfg.abs_tol * T::lit(0.5));
    let (mut trunc, mut evaluations) = estimate_truncation(&f, &envelope, target, extra)?;

    let lambda = envelope.decay_rate;
    let mut points = Vec::new();
    if let Some(period) = cfg.oscillation_period {
        let half = period * T::lit(0.5);
        let count = (trunc.cut / half).ceil();
        let limit = (cfg.max_subdivisions * 4).max(4096);
        if count.as_f64() > limit as f64 {
            return Err(Error::ResolutionBudget {
                ratio: count.as_f64(),
                limit: limit as f64,
            });
        }
        let count = count.as_f64() as usize;
        trunc.cut = half * T::lit(count as f64);
        trunc.tail_bound = if trunc.scale == T::zero() {
            T::zero()
        } else {
            envelope.tail_bound(trunc.scale, trunc.cut)
        };
        points.extend((0..=count).map(|k| half * T::lit(k as f64)));
    } else {
        let unit = T::one() / lambda;
        points.push(T::zero());
        for frac in [0.125, 0.25, 0.5] {
            points.push(unit * T::lit(frac));
        }
        let mut k = 1.0;
        while unit * T::lit(k) < trunc.cut {
            points.push(unit * T::lit(k));
            k *= if k < 8.0 { 2.0 } else { 1.25 };
            k = k.round();
        }
        points.push(trunc.cut);
    }

    if trunc.scale > T::zero() {
        for frac in [0.5, 0.75, 0.9, 1.0] {
            let x = trunc.cut * T::lit(frac) * T::lit(1.0 + 1e-3 * frac);
            let observed = sample(&f, x)?.modulus();
            let bound = trunc.scale * envelope.shape(x);
            evaluations += 1;
            if observed > T::lit(10.0) * bound && observed > T::min_positive_value() {
                return Err(Error::DecayHintViolated {
                    x: x.as_f64(),
                    observed: observed.as_f64(),
                    envelope: bound.as_f64(),
                });
            }
        }
    }

    if !extra.is_empty() {
        points.extend(extra.iter().copied().filter(|&x| x > T::zero() && x < trunc.cut));
        points.sort_by(|p, q| p.partial_cmp(q).unwrap_or(Ordering::Equal));
        points.dedup();
    }
    let outcome = adaptive_core(&f, &points, cfg, trunc.tail_bound)?;
    let mut result = outcome.result;
    result.evaluations += evaluations;
    Ok(result)
}
