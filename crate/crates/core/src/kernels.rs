//! The Mehler kernel of `e^{-tL}`, the kernels of `S = |x| L^{-1/2}` and of
//! the resolvent `(L + 2a)^{-1}`, and quadrature for their masses.
//!
//! Time integrals `\int_0^\infty t^{-1/2} F(t) dt` are taken as
//! `2 \int_0^U F(u^2) du` on Gauss-Legendre panels graded towards `u = 0`,
//! and accepted once doubling the panel count changes the value by less than
//! the configured relative tolerance.

use std::f64::consts::{LN_2, PI};

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::basis::{gauss_hermite_grid, gauss_legendre, BasisError, QuadratureGrid};
use crate::integrate::{adaptive_gk, IntegrationError};
use crate::spectral::{synthesize, SpectralError, SpectralFn};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the S kernel is not integrable in t at x = y")]
    CoincidentPoints,
    #[error("unsupported dimension {0} (tensor quadrature is limited to d <= 3)")]
    UnsupportedDimension(usize),
    #[error("rel_tol must lie in (0, 1e-4], got {0}")]
    Tolerance(f64),
    #[error("time integral did not settle: last relative change {change:e} with {panels} panels")]
    NotConverged { change: f64, panels: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

fn positive(name: &'static str, value: f64) -> Result<(), KernelError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(KernelError::NonPositive { name, value })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelConfig {
    pub dim: usize,
    /// Upper limit in `t`; the `u` range is `[0, t_cut^{1/2}]`.
    pub t_cut: f64,
    pub rel_tol: f64,
    /// Integrate in `u = t^{1/2}` (otherwise directly in `t`).
    pub singularity_substitution: bool,
    /// Initial number of time panels.
    pub panels: usize,
    /// Gauss-Legendre nodes per time panel.
    pub order: usize,
    /// Panels per axis (radial and angular) for spatial moments.
    pub spatial_panels: usize,
    pub spatial_order: usize,
}

impl KernelConfig {
    /// `t_cut` with `e^{-d t_cut} < 1e-16`.
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            t_cut: 37.0 / dim.max(1) as f64,
            rel_tol: 1e-8,
            singularity_substitution: true,
            panels: 16,
            order: 16,
            spatial_panels: 8,
            spatial_order: 16,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Double every panel count.
    pub fn refined(&self) -> Self {
        Self { panels: 2 * self.panels, spatial_panels: 2 * self.spatial_panels, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(KernelError::Tolerance(self.rel_tol));
        }
        positive("t_cut", self.t_cut)?;
        for (name, v) in [
            ("panels", self.panels),
            ("order", self.order),
            ("spatial_panels", self.spatial_panels),
            ("spatial_order", self.spatial_order),
        ] {
            positive(name, v as f64)?;
        }
        Ok(())
    }
}

/// Gauss-Legendre panels on `[0, hi]` with breakpoints `hi (k/P)^2`.
fn graded_rule(hi: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let a = hi * (k as f64 / panels as f64).powi(2);
        let b = hi * ((k + 1) as f64 / panels as f64).powi(2);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + half * xi);
            weights.push(half * wi);
        }
    }
    (nodes, weights)
}

fn uniform_rule(lo: f64, hi: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let g = QuadratureGrid::panels(lo, hi, panels, order).expect("positive interval");
    (g.nodes().to_vec(), g.weights().to_vec())
}

/// Refine `rule(panels)` by doubling until two successive values agree to
/// `rel_tol`; returns the finer value and the last change.
fn settle<F>(cfg: &KernelConfig, mut integral: F) -> Result<(f64, f64), KernelError>
where
    F: FnMut(usize) -> Result<f64, KernelError>,
{
    let mut panels = cfg.panels;
    let mut prev = integral(panels)?;
    let mut change = f64::INFINITY;
    for _ in 0..4 {
        panels *= 2;
        let next = integral(panels)?;
        change = (next - prev).abs();
        if change <= cfg.rel_tol * next.abs() + 1e-300 {
            return Ok((next, change));
        }
        prev = next;
    }
    Err(KernelError::NotConverged { change: change / prev.abs().max(f64::MIN_POSITIVE), panels })
}

/// `\int_0^{t_cut} t^{-1/2} F(t) dt`.
fn subordinate<F>(cfg: &KernelConfig, mut f: F) -> Result<f64, KernelError>
where
    F: FnMut(f64) -> Result<f64, KernelError>,
{
    settle(cfg, |panels| {
        let mut total = 0.0;
        if cfg.singularity_substitution {
            let (u, w) = graded_rule(cfg.t_cut.sqrt(), panels, cfg.order);
            for (ui, wi) in u.iter().zip(&w) {
                total += wi * 2.0 * f(ui * ui)?;
            }
        } else {
            let (t, w) = graded_rule(cfg.t_cut, panels, cfg.order);
            for (ti, wi) in t.iter().zip(&w) {
                total += wi * f(*ti)? / ti.sqrt();
            }
        }
        Ok(total)
    })
    .map(|(v, _)| v)
}

/// `ln sinh(u)` for `u > 0`, overflow-free.
fn ln_sinh(u: f64) -> f64 {
    if u > 20.0 {
        u - LN_2 + (-(-2.0 * u).exp()).ln_1p()
    } else {
        u.sinh().ln()
    }
}

/// `ln cosh(u)`, overflow-free.
fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a - LN_2 + (-2.0 * a).exp().ln_1p()
}

/// `1 / sinh(u)`.
fn csch(u: f64) -> f64 {
    if u > 20.0 {
        2.0 * (-u).exp() / (-(-2.0 * u).exp()).ln_1p().exp()
    } else {
        1.0 / u.sinh()
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<(), KernelError> {
    if x.len() != y.len() {
        return Err(KernelError::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    Ok(())
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `ln K_t(x, y)`.
pub fn mehler_log_kernel(t: f64, x: &[f64], y: &[f64]) -> Result<f64, KernelError> {
    positive("t", t)?;
    check_pair(x, y)?;
    let d = x.len() as f64;
    let diff: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
    let sum: f64 = x.iter().zip(y).map(|(a, b)| (a + b).powi(2)).sum();
    let th = t.tanh();
    let ln_c = -0.5 * d * (2.0 * PI).ln() - 0.5 * PI.ln();
    Ok(ln_c - 0.5 * d * ln_sinh(2.0 * t) - diff / (4.0 * th) - 0.25 * th * sum)
}

/// `K_t(x,y) = C_d (sinh 2t)^{-d/2} exp(-|x-y|^2/(4 tanh t) - tanh t |x+y|^2/4)`
/// with `C_d = (2 pi)^{-d/2} pi^{-1/2}`; `pi^{1/2} K_t` is the kernel of `e^{-tL}`.
pub fn mehler_kernel(t: f64, x: &[f64], y: &[f64]) -> Result<f64, KernelError> {
    Ok(mehler_log_kernel(t, x, y)?.exp())
}

/// `e^{-tL} f(x)` as `pi^{1/2} \int K_t(x,y) f(y) dy`, by Gauss-Hermite
/// quadrature centred on the Gaussian factor of the integrand in `y`.
pub fn heat_apply(t: f64, f: &SpectralFn, x: &[f64]) -> Result<f64, KernelError> {
    let gh = gauss_hermite_grid(heat_rule_order(f))?;
    heat_apply_with(t, f, x, &gh)
}

fn heat_rule_order(f: &SpectralFn) -> usize {
    (f.max_axis_degree() as usize + 8).max(16)
}

fn heat_apply_with(t: f64, f: &SpectralFn, x: &[f64], gh: &QuadratureGrid) -> Result<f64, KernelError> {
    positive("t", t)?;
    let dim = f.dim();
    if x.len() != dim {
        return Err(KernelError::DimensionMismatch { expected: dim, found: x.len() });
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    // y-exponent of K_t(x, y) h(y): -(coth 2t + 1) y^2 / 2 + y x / sinh 2t
    let precision = 1.0 / (2.0 * t).tanh() + 1.0;
    let shift = csch(2.0 * t) / precision;
    let scale = (0.5 * precision).sqrt();
    let centre: Vec<f64> = x.iter().map(|xi| xi * shift).collect();
    let m = gh.len();
    let count = m.pow(dim as u32);
    let mut points = Vec::with_capacity(count);
    let mut factors = Vec::with_capacity(count);
    for flat in 0..count {
        let mut rest = flat;
        let mut y = vec![0.0; dim];
        let mut weight = 1.0;
        let mut z2 = 0.0;
        for (axis, slot) in y.iter_mut().enumerate().rev() {
            let j = rest % m;
            rest /= m;
            let z = gh.nodes()[j];
            *slot = centre[axis] + z / scale;
            weight *= gh.weights()[j];
            z2 += z * z;
        }
        let log_k = mehler_log_kernel(t, x, &y)?;
        factors.push(weight * (log_k + z2).exp());
        points.push(y);
    }
    let values = synthesize(f, &points)?;
    let sum: f64 = factors.iter().zip(&values).map(|(a, b)| a * b).sum();
    Ok(PI.sqrt() * sum / scale.powi(dim as i32))
}

/// `K(x,y) = |x| \int_0^\infty t^{-1/2} K_t(x,y) dt`, the kernel of `S`.
pub fn s_kernel(x: &[f64], y: &[f64], cfg: &KernelConfig) -> Result<f64, KernelError> {
    check_pair(x, y)?;
    cfg.validate()?;
    let r = norm2(x).sqrt();
    if r == 0.0 {
        return Ok(0.0);
    }
    if x == y {
        return Err(KernelError::CoincidentPoints);
    }
    Ok(r * subordinate(cfg, |t| mehler_kernel(t, x, y))?)
}

/// `Sf(x)` through the kernel: `|x| pi^{-1/2} \int_0^\infty t^{-1/2} e^{-tL} f(x) dt`.
pub fn s_apply_kernel(f: &SpectralFn, x: &[f64], cfg: &KernelConfig) -> Result<f64, KernelError> {
    cfg.validate()?;
    let r = norm2(x).sqrt();
    if r == 0.0 {
        return Ok(0.0);
    }
    let gh = gauss_hermite_grid(heat_rule_order(f))?;
    let integral = subordinate(cfg, |t| heat_apply_with(t, f, x, &gh))?;
    Ok(r * integral / PI.sqrt())
}

/// `\int_{R^d} |x| e^{-k|x|^2} dx = Gamma((d+1)/2)/Gamma(d/2) pi^{d/2} k^{-(d+1)/2}`.
pub fn gaussian_first_moment(d: usize, k: f64) -> Result<f64, KernelError> {
    positive("k", k)?;
    let d = d as f64;
    Ok((ln_gamma(0.5 * (d + 1.0)) - ln_gamma(0.5 * d) + 0.5 * d * PI.ln() - 0.5 * (d + 1.0) * k.ln()).exp())
}

/// Independent value of [`gaussian_first_moment`] for `d <= 3` by tensor
/// Gauss-Legendre quadrature over one orthant, panels graded towards the
/// cone point at the origin.
pub fn gaussian_first_moment_quadrature(d: usize, k: f64) -> Result<f64, KernelError> {
    positive("k", k)?;
    if !(1..=3).contains(&d) {
        return Err(KernelError::UnsupportedDimension(d));
    }
    let (x, w) = graded_rule((40.0 / k).sqrt(), 8, 16);
    let n = x.len();
    let mut total = 0.0;
    for flat in 0..n.pow(d as u32) {
        let (mut rest, mut r2, mut weight) = (flat, 0.0, 1.0);
        for _ in 0..d {
            r2 += x[rest % n] * x[rest % n];
            weight *= w[rest % n];
            rest /= n;
        }
        total += weight * r2.sqrt() * (-k * r2).exp();
    }
    Ok(total * (1usize << d) as f64)
}

/// `\int_0^\infty cosh(t)^{-d} dt = 2^{d-2} Gamma(d/2)^2 / Gamma(d)`.
pub fn sech_power_integral(d: usize) -> Result<f64, KernelError> {
    positive("d", d as f64)?;
    let d = d as f64;
    Ok(((d - 2.0) * LN_2 + 2.0 * ln_gamma(0.5 * d) - ln_gamma(d)).exp())
}

/// `2^{d-1} Gamma((d+1)/2) Gamma(d/2) / (pi^{1/2} Gamma(d))`, identically 1.
pub fn prop1_exact_chain(d: usize) -> Result<f64, KernelError> {
    positive("d", d as f64)?;
    let d = d as f64;
    Ok(((d - 1.0) * LN_2 + ln_gamma(0.5 * (d + 1.0)) + ln_gamma(0.5 * d) - 0.5 * PI.ln() - ln_gamma(d)).exp())
}

/// `\int K_t(x, y) dy = pi^{-1/2} (cosh 2t)^{-d/2} exp(-|x|^2 tanh(2t) / 2)`.
pub fn mehler_mass(t: f64, x: &[f64]) -> Result<f64, KernelError> {
    positive("t", t)?;
    let d = x.len() as f64;
    Ok((-0.5 * PI.ln() - 0.5 * d * ln_cosh(2.0 * t) - 0.5 * norm2(x) * (2.0 * t).tanh()).exp())
}

/// `E|alpha e_1 + G|` for a standard Gaussian `G` in `R^d`, `d <= 3`, by
/// polar quadrature about the origin: radial panels over
/// `[max(0, alpha - 12), alpha + 12]`, angular panels restricted to the
/// cap outside which the integrand is below `e^{-40}`.
pub fn displaced_chi_mean(d: usize, alpha: f64, panels: usize, order: usize) -> Result<f64, KernelError> {
    if !(1..=3).contains(&d) {
        return Err(KernelError::UnsupportedDimension(d));
    }
    let a = alpha.abs();
    let (r_nodes, r_weights) = uniform_rule((a - 12.0).max(0.0), a + 12.0, panels, order);
    let mut total = 0.0;
    for (&r, &wr) in r_nodes.iter().zip(&r_weights) {
        let radial = (-0.5 * (r - a).powi(2)).exp();
        let ra = r * a;
        // \int_{S^{d-1}} exp(-r a (1 - cos theta)) d omega
        let sphere = match d {
            1 => 1.0 + (-2.0 * ra).exp(),
            2 => {
                let theta_max = if 40.0 / ra >= 2.0 { PI } else { (1.0 - 40.0 / ra).acos() };
                let (th, wt) = uniform_rule(0.0, theta_max, panels, order);
                2.0 * th.iter().zip(&wt).map(|(t, w)| w * (-ra * (1.0 - t.cos())).exp()).sum::<f64>()
            }
            _ => {
                if ra < 1e-12 {
                    4.0 * PI
                } else {
                    2.0 * PI * -(-2.0 * ra).exp_m1() / ra
                }
            }
        };
        total += wr * r.powi(d as i32) * radial * sphere;
    }
    Ok(total / (2.0 * PI).powf(0.5 * d as f64))
}

/// `\int |z - anchor| K_t(z, y) dz` where `K_t(., y)` is the Gaussian of
/// mass [`mehler_mass`], centre `y / cosh 2t` and variance `tanh 2t`; the
/// anchor enters only through `offset = |y/cosh 2t - anchor|`.
fn kernel_first_moment(t: f64, y: &[f64], offset: f64, cfg: &KernelConfig, panels: usize) -> Result<f64, KernelError> {
    let sigma = (2.0 * t).tanh().sqrt();
    let chi = displaced_chi_mean(y.len(), offset / sigma, panels, cfg.spatial_order)?;
    Ok(mehler_mass(t, y)? * sigma * chi)
}

fn spatial_dim(d: usize, y: &[f64]) -> Result<(), KernelError> {
    if !(1..=3).contains(&d) {
        return Err(KernelError::UnsupportedDimension(d));
    }
    if y.len() != d {
        return Err(KernelError::DimensionMismatch { expected: d, found: y.len() });
    }
    Ok(())
}

/// `\int |y - z| \int_0^\infty t^{-1/2} K_t(z, y) dt dz`.
pub fn prop1_numeric(d: usize, y: &[f64], cfg: &KernelConfig) -> Result<f64, KernelError> {
    spatial_dim(d, y)?;
    cfg.validate()?;
    let r = norm2(y).sqrt();
    subordinate(cfg, |t| {
        // |y/cosh 2t - y| = |y| 2 sinh^2 t / cosh 2t
        let offset = r * 2.0 * t.sinh().powi(2) / (2.0 * t).cosh();
        kernel_first_moment(t, y, offset, cfg, cfg.spatial_panels)
    })
}

/// Column mass `\int K(z, y) dz` of the S kernel.
pub fn s_column_mass(y: &[f64], cfg: &KernelConfig) -> Result<f64, KernelError> {
    spatial_dim(y.len(), y)?;
    cfg.validate()?;
    let r = norm2(y).sqrt();
    subordinate(cfg, |t| kernel_first_moment(t, y, r / (2.0 * t).cosh(), cfg, cfg.spatial_panels))
}

/// Row mass `\int K(x, y) dy = |x| \int_0^\infty t^{-1/2} mehler_mass(t, x) dt`.
pub fn prop2_numeric(d: usize, x: &[f64], cfg: &KernelConfig) -> Result<f64, KernelError> {
    spatial_dim(d, x)?;
    cfg.validate()?;
    let r = norm2(x).sqrt();
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(r * subordinate(cfg, |t| mehler_mass(t, x))?)
}

/// The unique positive root of `tanh(2t) = t`, by bisection on `[0.5, 1.5]`.
pub fn tau_root() -> f64 {
    let g = |t: f64| (2.0 * t).tanh() - t;
    let (mut lo, mut hi) = (0.5, 1.5);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `1/pi^{1/2} + 2^{1/2}`.
pub fn prop2_bound() -> f64 {
    1.0 / PI.sqrt() + 2f64.sqrt()
}

fn resolvent_horizon(a: f64, d: usize) -> f64 {
    (38.0 + d as f64) / (2.0 * a + d as f64)
}

/// `\int_0^\infty e^{-2at} pi^{1/2} mehler_mass(t, x) dt`, the row mass of
/// the kernel of `(L + 2a)^{-1}`.
pub fn resolvent_kernel_mass(a: f64, x: &[f64], cfg: &KernelConfig) -> Result<f64, KernelError> {
    positive("a", a)?;
    cfg.validate()?;
    let horizon = resolvent_horizon(a, x.len());
    settle(cfg, |panels| {
        let (t, w) = uniform_rule(0.0, horizon, panels, cfg.order);
        let mut total = 0.0;
        for (ti, wi) in t.iter().zip(&w) {
            total += wi * (-2.0 * a * ti).exp() * PI.sqrt() * mehler_mass(*ti, x)?;
        }
        Ok(total)
    })
    .map(|(v, _)| v)
}

/// `(L + 2a)^{-1} f(x) = \int_0^\infty e^{-2at} e^{-tL} f(x) dt`.
pub fn resolvent_apply(a: f64, f: &SpectralFn, x: &[f64], cfg: &KernelConfig) -> Result<f64, KernelError> {
    positive("a", a)?;
    cfg.validate()?;
    let gh = gauss_hermite_grid(heat_rule_order(f))?;
    let horizon = resolvent_horizon(a, f.dim());
    settle(cfg, |panels| {
        let (t, w) = uniform_rule(0.0, horizon, panels, cfg.order);
        let mut total = 0.0;
        for (ti, wi) in t.iter().zip(&w) {
            total += wi * (-2.0 * a * ti).exp() * heat_apply_with(*ti, f, x, &gh)?;
        }
        Ok(total)
    })
    .map(|(v, _)| v)
}

/// Independent check of [`sech_power_integral`] by adaptive quadrature.
pub fn sech_power_quadrature(d: usize) -> Result<f64, KernelError> {
    let r = adaptive_gk(|t: f64| (-(d as f64) * ln_cosh(t)).exp(), 0.0, 40.0, 1e-14, 0.0, 4000)?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{hermite_function, hermite_multi, panel_grid, MultiIndex};
    use crate::spectral::eigenvalue;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mehler_examples() {
        let v = mehler_kernel(1.0, &[0.0], &[0.0]).unwrap();
        let expected = (2.0 * PI).powf(-0.5) * PI.powf(-0.5) * 2f64.sinh().powf(-0.5);
        assert_relative_eq!(v, expected, max_relative = 1e-14);
        assert!(mehler_kernel(0.0, &[0.0], &[0.0]).is_err());
        assert!(mehler_kernel(1.0, &[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn mehler_symmetry_and_two_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let d = rng.random_range(1..=3);
            let t: f64 = rng.random_range(0.05..3.0);
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
            let y: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
            let a = mehler_kernel(t, &x, &y).unwrap();
            assert_eq!(a, mehler_kernel(t, &y, &x).unwrap());
            assert!(a > 0.0);
            let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let alt = -(norm2(&x) + norm2(&y)) / 2.0 / (2.0 * t).tanh() + xy / (2.0 * t).sinh();
            let direct = -x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / (4.0 * t.tanh())
                - t.tanh() / 4.0 * x.iter().zip(&y).map(|(a, b)| (a + b).powi(2)).sum::<f64>();
            assert!(((alt.exp() - direct.exp()) / direct.exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn mehler_large_time_does_not_overflow() {
        let v = mehler_kernel(400.0, &[1.0, 2.0], &[0.5, -1.0]).unwrap();
        assert!(v >= 0.0 && v.is_finite());
        assert!(mehler_log_kernel(400.0, &[1.0, 2.0], &[0.5, -1.0]).unwrap().is_finite());
        let ln = mehler_log_kernel(400.0, &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        let expected = -(2.0 * PI).ln() - 0.5 * PI.ln() - (800.0 - LN_2);
        assert!((ln - expected).abs() < 1e-10);
    }

    #[test]
    fn heat_examples() {
        let v = heat_apply(0.5, &SpectralFn::basis([0]), &[0.7]).unwrap();
        assert!((v - (-0.5f64).exp() * hermite_function(0, 0.7)).abs() < 1e-9);
        assert!(heat_apply(1.0, &SpectralFn::basis([3]), &[0.0]).unwrap().abs() < 1e-10);
        let x = [0.5, -0.2];
        let v = heat_apply(0.3, &SpectralFn::basis([1, 0]), &x).unwrap();
        let expected = (-0.3f64 * 4.0).exp() * hermite_multi(&MultiIndex::from([1, 0]), &x).unwrap();
        assert!((v - expected).abs() < 1e-8);
    }

    #[test]
    fn heat_matches_spectral_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 1..=2 {
            for n in MultiIndex::all_up_to(d, 5) {
                for t in [0.1, 0.5, 1.0, 2.0] {
                    let x: Vec<f64> = (0..d).map(|_| rng.random_range(-2.5..2.5)).collect();
                    let v = heat_apply(t, &SpectralFn::basis(n.clone()), &x).unwrap();
                    let expected = (-t * eigenvalue(n.order(), d)).exp() * hermite_multi(&n, &x).unwrap();
                    assert!((v - expected).abs() < 1e-8, "{n:?} t={t}");
                }
            }
        }
    }

    #[test]
    fn s_kernel_examples() {
        let cfg = KernelConfig::new(1);
        assert_eq!(s_kernel(&[0.0], &[1.0], &cfg).unwrap(), 0.0);
        let v = s_kernel(&[1.0], &[-1.0], &cfg).unwrap();
        let fine = s_kernel(&[1.0], &[-1.0], &cfg.refined()).unwrap();
        assert!(v > 0.0);
        assert!((v - fine).abs() <= cfg.rel_tol * fine);
        assert!(matches!(s_kernel(&[1.0], &[1.0], &cfg), Err(KernelError::CoincidentPoints)));
    }

    #[test]
    fn s_kernel_agrees_with_direct_t_integration() {
        let cfg = KernelConfig::new(2);
        let x = [0.8, -0.3];
        let y = [-0.4, 1.1];
        let v = s_kernel(&x, &y, &cfg).unwrap();
        let r =
            adaptive_gk(|t: f64| mehler_kernel(t, &x, &y).unwrap() / t.sqrt(), 0.0, 40.0, 1e-12, 0.0, 4000).unwrap();
        assert!((v - norm2(&x).sqrt() * r.value).abs() < 1e-9 * v);
    }

    #[test]
    fn special_integrals() {
        assert_relative_eq!(gaussian_first_moment(1, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gaussian_first_moment(2, 1.0).unwrap(), PI.powf(1.5) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(sech_power_integral(1).unwrap(), PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(sech_power_integral(2).unwrap(), 1.0, max_relative = 1e-14);
        assert!((sech_power_integral(6).unwrap() - sech_power_quadrature(6).unwrap()).abs() < 1e-10);
        for d in [1, 7, 50] {
            assert!((prop1_exact_chain(d).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_moment_by_tensor_quadrature() {
        for d in 1..=3 {
            for k in [0.5, 1.0, 2.0] {
                let q = gaussian_first_moment_quadrature(d, k).unwrap();
                assert!((q - gaussian_first_moment(d, k).unwrap()).abs() < 1e-9, "d={d} k={k} {q}");
            }
        }
        let g = panel_grid(6.0, 12, 16).unwrap();
        let q1 = g.integrate(|x| x.abs() * (-x * x).exp());
        assert!((q1 - gaussian_first_moment(1, 1.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn mass_examples() {
        assert_relative_eq!(
            mehler_mass(1.0, &[0.0]).unwrap(),
            PI.powf(-0.5) * 2f64.cosh().powf(-0.5),
            max_relative = 1e-14
        );
        assert_relative_eq!(mehler_mass(1e-12, &[0.0]).unwrap(), PI.powf(-0.5), max_relative = 1e-12);
        let g = panel_grid(14.0, 40, 16).unwrap();
        let q = g.integrate(|y| mehler_kernel(0.5, &[1.2], &[y]).unwrap());
        assert!((q - mehler_mass(0.5, &[1.2]).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn displaced_chi_mean_matches_closed_forms() {
        // E|a + G| = (2/pi)^{1/2} e^{-a^2/2} + a erf(a/2^{1/2}) in d = 1 and
        // (2/pi)^{1/2} e^{-a^2/2} + (a + 1/a) erf(a/2^{1/2}) in d = 3,
        // evaluated at 30 digits
        #[allow(clippy::excessive_precision)]
        let table = [
            (0.0, 0.797_884_560_802_865_4, 1.595_769_121_605_731),
            (0.3, 0.833_522_484_234_419_75, 1.619_598_632_160_770_7),
            (1.0, 1.166_630_941_175_372_6, 1.849_320_433_312_458_5),
            (4.0, 4.000_014_290_516_865, 4.249_998_454_895_948),
            (30.0, 30.0, 30.033_333_333_333_333),
        ];
        for (alpha, one, three) in table {
            let got = displaced_chi_mean(1, alpha, 8, 16).unwrap();
            assert!((got - one).abs() < 1e-13 * one, "{alpha}: {got} vs {one}");
            let got = displaced_chi_mean(3, alpha, 8, 16).unwrap();
            assert!((got - three).abs() < 1e-13 * three, "{alpha}: {got} vs {three}");
        }
        assert!((displaced_chi_mean(2, 0.0, 8, 16).unwrap() - (PI / 2.0).sqrt()).abs() < 1e-12);
        // large displacement: alpha + (d - 1) / (2 alpha) + O(alpha^-3)
        let v = displaced_chi_mean(2, 1e3, 8, 16).unwrap();
        assert!((v - (1e3 + 0.5e-3)).abs() < 1e-8);
    }

    #[test]
    fn prop1_examples() {
        let cfg = KernelConfig::new(1);
        let v = prop1_numeric(1, &[0.0], &cfg).unwrap();
        assert!(v > 0.0 && v <= 1.0 + 1e-6, "{v}");
        let cfg2 = KernelConfig::new(2);
        let v = prop1_numeric(2, &[3.0, 0.0], &cfg2).unwrap();
        assert!(v <= 1.0 + 1e-6, "{v}");
        let fine = prop1_numeric(2, &[3.0, 0.0], &cfg2.refined()).unwrap();
        assert!((v - fine).abs() < 1e-6);
        assert!(prop1_numeric(4, &[0.0; 4], &KernelConfig::new(4)).is_err());
    }

    #[test]
    fn prop1_one_dimensional_by_direct_quadrature() {
        let y = 0.7;
        let cfg = KernelConfig::new(1);
        let v = prop1_numeric(1, &[y], &cfg).unwrap();
        let g = panel_grid(12.0, 48, 16).unwrap();
        let (u, w) = graded_rule(cfg.t_cut.sqrt(), 64, 16);
        let mut total = 0.0;
        for (ui, wi) in u.iter().zip(&w) {
            let t = ui * ui;
            let sigma = (2.0 * t).tanh().sqrt();
            let centre = y / (2.0 * t).cosh();
            let inner: f64 = g
                .nodes()
                .iter()
                .zip(g.weights())
                .map(|(z, wz)| {
                    let zz = centre + sigma * z;
                    wz * sigma * (zz - y).abs() * mehler_kernel(t, &[zz], &[y]).unwrap()
                })
                .sum();
            total += wi * 2.0 * inner;
        }
        assert!((v - total).abs() < 1e-5, "{v} vs {total}");
    }

    #[test]
    fn tau_examples() {
        let tau = tau_root();
        assert!((0.95..=0.96).contains(&tau));
        assert!(((2.0 * tau).tanh() - tau).abs() < 1e-12);
        assert!((tau - 0.957_504_2).abs() < 1e-6);
    }

    #[test]
    fn prop2_examples() {
        let cfg = KernelConfig::new(1);
        assert_eq!(prop2_numeric(1, &[0.0], &cfg).unwrap(), 0.0);
        assert!(prop2_numeric(1, &[1.0], &cfg).unwrap() <= 1.978_483_8);
        let cfg3 = KernelConfig::new(3);
        assert!(prop2_numeric(3, &[3.0, 4.0, 0.0], &cfg3).unwrap() <= 1.978_483_8);
    }

    #[test]
    fn column_mass_decomposition() {
        for y in [vec![0.0], vec![1.5], vec![0.5, -2.0]] {
            let cfg = KernelConfig::new(y.len());
            let col = s_column_mass(&y, &cfg).unwrap();
            let row = prop2_numeric(y.len(), &y, &cfg).unwrap();
            let p1 = prop1_numeric(y.len(), &y, &cfg).unwrap();
            assert!(col <= row + p1 + 1e-8, "{col} {row} {p1}");
            assert!(col <= 3.0);
        }
    }

    #[test]
    fn resolvent_examples() {
        let cfg = KernelConfig::new(1);
        assert!(resolvent_kernel_mass(1.0, &[0.0], &cfg).unwrap() <= 0.5);
        assert!(resolvent_kernel_mass(5.0, &[0.0], &cfg).unwrap() <= 0.1);
        let v = resolvent_apply(1.0, &SpectralFn::basis([0]), &[0.4], &cfg).unwrap();
        assert!((v - hermite_function(0, 0.4) / 3.0).abs() < 1e-8);
    }

    #[test]
    fn s_apply_kernel_matches_spectral() {
        let cfg = KernelConfig::new(1);
        let f = SpectralFn::basis([0]).add_scaled(&SpectralFn::basis([2]), 1.0).unwrap();
        for x in [0.3, -1.2, 2.0] {
            let v = s_apply_kernel(&f, &[x], &cfg).unwrap();
            let expected = x.abs() * (hermite_function(0, x) + hermite_function(2, x) / 5f64.sqrt());
            assert!((v - expected).abs() < 1e-6);
        }
    }

    #[test]
    fn config_validation() {
        assert!(KernelConfig::new(1).with_rel_tol(1e-3).validate().is_err());
        assert!(KernelConfig::new(1).validate().is_ok());
    }
}
