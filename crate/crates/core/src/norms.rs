//! Integral means, `H^p` norms and the recursive `S_n^p` norms.
//!
//! Boundary values on the circle `|z| = r` are produced by one inverse FFT of
//! the (radius-scaled) coefficient vector, so a trapezoid pass over `M`
//! nodes costs `O(M log M)`. For `p = 2` and even integer `p` there are
//! exact coefficient-space branches that the trapezoid rule is checked
//! against.

use std::cell::RefCell;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TaylorSeries;

/// Relative slack allowed between successive integral means in the
/// monotonicity sanity check of [`hp_norm`].
const MONOTONE_SLACK: f64 = 1e-9;

/// The pair `(n, p)` selecting `S_n^p`; `n = 0` is `H^p` itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    n: usize,
    p: f64,
}

impl SpaceParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(SpaceParams { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `S_{n-1}^p`, saturating at `H^p`.
    pub fn lower(&self) -> Self {
        SpaceParams { n: self.n.saturating_sub(1), p: self.p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMode {
    /// Parseval for `p = 2`, coefficient expansion for other even `p`,
    /// trapezoid otherwise.
    Auto,
    ExactParseval,
    PowerTrick,
    Trapezoid,
}

impl QuadratureMode {
    pub fn name(&self) -> &'static str {
        match self {
            QuadratureMode::Auto => "auto",
            QuadratureMode::ExactParseval => "exact-parseval",
            QuadratureMode::PowerTrick => "power-trick",
            QuadratureMode::Trapezoid => "trapezoid",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub num_points: usize,
    pub mode: QuadratureMode,
}

impl QuadratureConfig {
    pub const DEFAULT_POINTS: usize = 4096;

    pub fn new(num_points: usize, mode: QuadratureMode) -> Self {
        QuadratureConfig { num_points, mode }
    }

    pub fn trapezoid(num_points: usize) -> Self {
        Self::new(num_points, QuadratureMode::Trapezoid)
    }

    /// Smallest admissible node count for a degree-`order` series.
    pub fn oversampling_floor(order: usize) -> usize {
        4 * (order + 1)
    }

    /// Default trapezoid configuration large enough for `order`.
    pub fn for_order(order: usize) -> Self {
        Self::trapezoid(Self::DEFAULT_POINTS.max(Self::oversampling_floor(order)))
    }

    pub fn with_mode(self, mode: QuadratureMode) -> Self {
        QuadratureConfig { mode, ..self }
    }

    fn check(&self, order: usize) -> Result<()> {
        let floor = Self::oversampling_floor(order);
        if self.num_points < floor {
            return Err(Error::TooFewPoints { points: self.num_points, floor, order });
        }
        Ok(())
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::trapezoid(Self::DEFAULT_POINTS)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius(r))
    }
}

fn even_integer(p: f64) -> Option<u32> {
    (p.fract() == 0.0 && p >= 2.0 && p % 2.0 == 0.0 && p <= 64.0).then(|| (p / 2.0) as u32)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Values `f(r e^{2πik/M})`, `k = 0..M`.
pub fn boundary_samples(f: &TaylorSeries, r: f64, num_points: usize) -> Vec<Complex64> {
    let m = num_points.max(1);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut rk = 1.0;
    for (k, c) in f.coeffs().iter().enumerate() {
        // aliasing folds degree k onto k mod M, exact on the grid
        buf[k % m] += c * rk;
        rk *= r;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
    fft.process(&mut buf);
    buf
}

/// `((1/2π)∫|f(re^{iθ})|^p dθ)^{1/p}`.
pub fn integral_mean(f: &TaylorSeries, p: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_exponent(p)?;
    check_radius(r)?;
    cfg.check(f.order())?;
    if f.is_zero() {
        return Ok(0.0);
    }
    match cfg.mode {
        QuadratureMode::ExactParseval => {
            if p != 2.0 {
                return Err(Error::ModeMismatch { mode: cfg.mode.name(), p });
            }
            Ok(parseval_mean(f, r))
        }
        QuadratureMode::PowerTrick => match even_integer(p) {
            Some(q) => Ok(power_trick_mean(f, q, r)),
            None => Err(Error::ModeMismatch { mode: cfg.mode.name(), p }),
        },
        QuadratureMode::Trapezoid => Ok(trapezoid_mean(f, p, r, cfg.num_points)),
        QuadratureMode::Auto => Ok(if p == 2.0 {
            parseval_mean(f, r)
        } else if let Some(q) = even_integer(p) {
            power_trick_mean(f, q, r)
        } else {
            trapezoid_mean(f, p, r, cfg.num_points)
        }),
    }
}

fn scaled_coeffs(f: &TaylorSeries, r: f64) -> TaylorSeries {
    let mut rk = 1.0;
    f.map(|c| {
        let out = c * rk;
        rk *= r;
        out
    })
}

fn parseval_mean(f: &TaylorSeries, r: f64) -> f64 {
    let mut rk = 1.0;
    let mut sum = 0.0;
    for c in f.coeffs() {
        sum += c.norm_sqr() * rk;
        rk *= r * r;
    }
    sum.sqrt()
}

/// `|f|^{2q} = |f^q|^2` on the circle, so the mean is Parseval applied to `f^q`.
fn power_trick_mean(f: &TaylorSeries, q: u32, r: f64) -> f64 {
    let g = scaled_coeffs(f, r).pow(q);
    let sum: f64 = g.coeffs().iter().map(|c| c.norm_sqr()).sum();
    sum.powf(1.0 / (2.0 * q as f64))
}

fn trapezoid_mean(f: &TaylorSeries, p: f64, r: f64, num_points: usize) -> f64 {
    let samples = boundary_samples(f, r, num_points);
    let peak = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let sum: f64 = samples.iter().map(|v| (v.norm() / peak).powf(p)).sum();
    peak * (sum / num_points as f64).powf(1.0 / p)
}

/// `‖f‖_{H^p}`, taken at `r = 1`. Integral means are nondecreasing in `r`;
/// this is spot-checked at `r ∈ {1/2, 3/4, 1}`.
pub fn hp_norm(f: &TaylorSeries, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let radii = [0.5, 0.75, 1.0];
    let mut means = [0.0; 3];
    for (m, &r) in means.iter_mut().zip(&radii) {
        *m = integral_mean(f, p, r, cfg)?;
    }
    for i in 0..2 {
        if means[i] > means[i + 1] * (1.0 + MONOTONE_SLACK) + f64::MIN_POSITIVE {
            return Err(Error::NotMonotone {
                r_inner: radii[i],
                inner: means[i],
                r_outer: radii[i + 1],
                outer: means[i + 1],
            });
        }
    }
    Ok(means[2])
}

/// Estimate of `sup_{|z|≤1} |f(z)|`: best boundary sample, then a
/// golden-section polish on the two neighbouring cells.
pub fn sup_norm(f: &TaylorSeries, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.check(f.order())?;
    let m = cfg.num_points;
    let samples = boundary_samples(f, 1.0, m);
    let (best, peak) = samples
        .iter()
        .enumerate()
        .map(|(k, v)| (k, v.norm()))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let h = TAU / m as f64;
    let centre = h * best as f64;
    let modulus = |t: f64| f.eval(Complex64::from_polar(1.0, t)).norm();
    let polished = golden_section_max(modulus, centre - h, centre + h, 60);
    Ok(peak.max(polished))
}

fn golden_section_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..iters {
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1);
        }
    }
    g1.max(g2)
}

/// `‖f‖_{S_n^p} = |f(0)| + ‖f'‖_{S_{n-1}^p}`, with `S_0^p = H^p`.
pub fn sn_norm(f: &TaylorSeries, params: SpaceParams, cfg: &QuadratureConfig) -> Result<f64> {
    if params.n() == 0 {
        return hp_norm(f, params.p(), cfg);
    }
    Ok(f.coeff(0).norm() + sn_norm(&f.derivative(1), params.lower(), cfg)?)
}

/// Unrolled form `|f(0)| + |f'(0)| + … + |f^{(n-1)}(0)| + ‖f^{(n)}‖_{H^p}`.
pub fn sn_norm_unrolled(f: &TaylorSeries, params: SpaceParams, cfg: &QuadratureConfig) -> Result<f64> {
    let n = params.n();
    let head: f64 = (0..n).map(|k| f.derivative_at_zero(k).norm()).sum();
    Ok(head + hp_norm(&f.derivative(n), params.p(), cfg)?)
}

/// `Σ_{k=0}^{n} ‖f^{(k)}‖_{H^p}`.
pub fn equiv_norm_hp_sum(f: &TaylorSeries, params: SpaceParams, cfg: &QuadratureConfig) -> Result<f64> {
    (0..=params.n()).map(|k| hp_norm(&f.derivative(k), params.p(), cfg)).sum()
}

/// `Σ_{k=0}^{n-1} ‖f^{(k)}‖_∞ + ‖f^{(n)}‖_{H^p}`.
pub fn equiv_norm_sup_sum(f: &TaylorSeries, params: SpaceParams, cfg: &QuadratureConfig) -> Result<f64> {
    let n = params.n();
    let head = (0..n).map(|k| sup_norm(&f.derivative(k), cfg)).sum::<Result<f64>>()?;
    Ok(head + hp_norm(&f.derivative(n), params.p(), cfg)?)
}

/// Left side of Hardy's inequality, `Σ |a_k| / (k+1)`.
pub fn hardy_lhs(f: &TaylorSeries) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() / (k + 1) as f64)
        .sum()
}
