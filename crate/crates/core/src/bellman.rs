//! The Nazarov-Treil Bellman function `beta(s, t)`, its biradial lift
//! `B(zeta, eta) = beta(|zeta|, |eta|) / 2`, a quadrature mollification
//! `B_kappa = B * psi_kappa`, and pointwise checks of the inequalities it
//! is built to satisfy.

use thiserror::Error;

use crate::basis::QuadratureGrid;
use crate::integrate::{adaptive_gk, IntegrationError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellmanError {
    #[error("exponent p = {0} is below 2; swap p and q before calling")]
    ExponentBelowTwo(f64),
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("d/dt beta is singular at t = 0 when q < 2")]
    SingularDerivative,
    #[error("mollification supports m1 + m2 <= 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("kappa must lie in (0, 1), got {0}")]
    Kappa(f64),
    #[error("the drift inequality needs d >= 2, got d = {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

/// `p >= 2`, its conjugate `q` and `gamma = q(q - 1)/8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellmanParams {
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
}

impl BellmanParams {
    pub fn new(p: f64) -> Result<Self, BellmanError> {
        if !(p >= 2.0) || !p.is_finite() {
            return Err(BellmanError::ExponentBelowTwo(p));
        }
        let q = p / (p - 1.0);
        Ok(Self { p, q, gamma: q * (q - 1.0) / 8.0 })
    }

    /// `p* = max(p, q)`, which is `p` here.
    pub fn p_star(&self) -> f64 {
        self.p.max(self.q)
    }

    /// Explicit constant in `0 <= d_t beta <= C t^{q-1}`.
    pub fn gradient_constant(&self) -> f64 {
        self.q + self.gamma * (2.0 - self.q)
    }
}

/// `(|zeta|, |eta|)` together with the ambient dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiradialPoint {
    pub s: f64,
    pub t: f64,
    pub m1: usize,
    pub m2: usize,
}

impl BiradialPoint {
    pub fn from_vectors(zeta: &[f64], eta: &[f64]) -> Self {
        Self { s: euclid(zeta), t: euclid(eta), m1: zeta.len(), m2: eta.len() }
    }
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_nonneg(name: &'static str, value: f64) -> Result<(), BellmanError> {
    if value >= 0.0 {
        Ok(())
    } else {
        Err(BellmanError::Negative { name, value })
    }
}

/// `true` on the branch `s^p <= t^q`.
fn lower_branch(s: f64, t: f64, params: &BellmanParams) -> bool {
    s.powf(params.p) <= t.powf(params.q)
}

/// `s^2 t^{2-q}`, zero when `s = 0`.
fn cross_term(s: f64, t: f64, q: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s * s * t.powf(2.0 - q)
    }
}

pub fn beta_eval(s: f64, t: f64, params: &BellmanParams) -> Result<f64, BellmanError> {
    check_nonneg("s", s)?;
    check_nonneg("t", t)?;
    Ok(beta_unchecked(s, t, params))
}

fn beta_unchecked(s: f64, t: f64, params: &BellmanParams) -> f64 {
    let BellmanParams { p, q, gamma } = *params;
    let sp = s.powf(p);
    let tq = t.powf(q);
    if sp <= tq {
        sp + tq + gamma * cross_term(s, t, q)
    } else {
        sp + tq + gamma * (2.0 / p * sp + (2.0 / q - 1.0) * tq)
    }
}

/// Both branch formulas at `(s, t)` regardless of which one applies:
/// `(s^p + t^q + gamma s^2 t^{2-q}, s^p + t^q + gamma (2/p s^p + (2/q - 1) t^q))`.
pub fn beta_branches(s: f64, t: f64, params: &BellmanParams) -> (f64, f64) {
    let BellmanParams { p, q, gamma } = *params;
    let base = s.powf(p) + t.powf(q);
    (base + gamma * cross_term(s, t, q), base + gamma * (2.0 / p * s.powf(p) + (2.0 / q - 1.0) * t.powf(q)))
}

/// `d beta / d t`.
pub fn beta_grad_t(s: f64, t: f64, params: &BellmanParams) -> Result<f64, BellmanError> {
    check_nonneg("s", s)?;
    check_nonneg("t", t)?;
    let BellmanParams { p: _, q, gamma } = *params;
    let two_minus_q = 2.0 - q;
    if t == 0.0 {
        if two_minus_q > 0.0 {
            return Err(BellmanError::SingularDerivative);
        }
        return Ok(0.0);
    }
    let base = q * t.powf(q - 1.0);
    if two_minus_q == 0.0 {
        return Ok(base);
    }
    let extra = if lower_branch(s, t, params) { s * s * t.powf(1.0 - q) } else { t.powf(q - 1.0) };
    Ok(base + gamma * two_minus_q * extra)
}

#[allow(non_snake_case)]
pub fn bellman_B(zeta: &[f64], eta: &[f64], params: &BellmanParams) -> f64 {
    0.5 * beta_unchecked(euclid(zeta), euclid(eta), params)
}

/// The unnormalized bump `exp(-1/(1 - r^2))` on the unit ball.
fn bump(r2: f64) -> f64 {
    if r2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r2)).exp()
    }
}

/// Tensor quadrature on the unit ball of `R^{m1+m2}` weighted by the
/// normalized bump, ready for repeated convolutions.
#[derive(Debug, Clone)]
pub struct Mollifier {
    m1: usize,
    m2: usize,
    offsets: Vec<Vec<f64>>,
    weights: Vec<f64>,
    normalization: f64,
    discrete_mass: f64,
}

impl Mollifier {
    /// `axis_grid` is a 1-d rule on `[-1, 1]`, tensorized over all axes.
    pub fn new(m1: usize, m2: usize, axis_grid: &QuadratureGrid) -> Result<Self, BellmanError> {
        let m = m1 + m2;
        if m == 0 || m > 3 {
            return Err(BellmanError::UnsupportedDimension(m));
        }
        let nodes = axis_grid.nodes();
        let w1 = axis_grid.weights();
        let mut offsets = Vec::new();
        let mut weights = Vec::new();
        let count = nodes.len().pow(m as u32);
        for flat in 0..count {
            let mut rest = flat;
            let mut x = vec![0.0; m];
            let mut w = 1.0;
            for slot in x.iter_mut().rev() {
                let j = rest % nodes.len();
                rest /= nodes.len();
                *slot = nodes[j];
                w *= w1[j];
            }
            let psi = bump(x.iter().map(|v| v * v).sum());
            if psi > 0.0 {
                offsets.push(x);
                weights.push(w * psi);
            }
        }
        let mass: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= mass;
        }
        let normalization = bump_normalization(m)?;
        Ok(Self { m1, m2, offsets, weights, normalization, discrete_mass: normalization * mass })
    }

    /// 32-point Gauss-Legendre per axis.
    pub fn standard(m1: usize, m2: usize) -> Result<Self, BellmanError> {
        Self::new(m1, m2, &legendre_unit(32))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m1, self.m2)
    }

    /// `c_{m1,m2}` making `c exp(-1/(1-|x|^2))` a probability density.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `c \sum_j w_j psi(x_j)` on the tensor rule; the convolution weights
    /// are rescaled to unit mass, so this only measures the rule's accuracy.
    pub fn discrete_mass(&self) -> f64 {
        self.discrete_mass
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn legendre_unit(order: usize) -> QuadratureGrid {
    QuadratureGrid::panels(-1.0, 1.0, 1, order).expect("unit interval grid is valid")
}

/// Independent value of `c_{m}`: `1 / (|S^{m-1}| \int_0^1 r^{m-1} e^{-1/(1-r^2)} dr)`.
pub fn bump_normalization(m: usize) -> Result<f64, BellmanError> {
    let sphere = match m {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => return Err(BellmanError::UnsupportedDimension(m)),
    };
    let radial = adaptive_gk(|r| r.powi(m as i32 - 1) * bump(r * r), 0.0, 1.0, 1e-13, 0.0, 2000)?;
    Ok(1.0 / (sphere * radial.value))
}

/// `B_kappa(z) = \int B(z - kappa w) psi(w) dw` with `z = (zeta, eta)`.
#[allow(non_snake_case)]
pub fn mollified_B(z: &[f64], kappa: f64, params: &BellmanParams, moll: &Mollifier) -> Result<f64, BellmanError> {
    let m = moll.m1 + moll.m2;
    if z.len() != m {
        return Err(BellmanError::DimensionMismatch { expected: m, found: z.len() });
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(BellmanError::Kappa(kappa));
    }
    let mut shifted = vec![0.0; m];
    let mut total = 0.0;
    for (w, off) in moll.weights.iter().zip(&moll.offsets) {
        for ((s, zi), oi) in shifted.iter_mut().zip(z).zip(off) {
            *s = zi - kappa * oi;
        }
        let (zeta, eta) = shifted.split_at(moll.m1);
        total += w * bellman_B(zeta, eta, params);
    }
    Ok(total)
}

/// `<Hess(B_kappa)(z) omega, omega>` by a central second difference along
/// `omega` with step `1e-4 max(1, |z|)` (scaled by `|omega|`).
pub fn hessian_form(
    z: &[f64],
    omega: &[f64],
    kappa: f64,
    params: &BellmanParams,
    moll: &Mollifier,
) -> Result<f64, BellmanError> {
    if omega.len() != z.len() {
        return Err(BellmanError::DimensionMismatch { expected: z.len(), found: omega.len() });
    }
    let size = euclid(omega);
    if size == 0.0 {
        return Ok(0.0);
    }
    let h = 1e-4 * euclid(z).max(1.0) / size;
    let along = |sign: f64| -> Vec<f64> { z.iter().zip(omega).map(|(a, b)| a + sign * h * b).collect() };
    let plus = mollified_B(&along(1.0), kappa, params, moll)?;
    let mid = mollified_B(z, kappa, params, moll)?;
    let minus = mollified_B(&along(-1.0), kappa, params, moll)?;
    Ok((plus - 2.0 * mid + minus) / (h * h))
}

/// `(|x|^2 + 2d) beta - 2 (q t^q + gamma (2 - q) {s^2 t^{2-q} | t^q})` and its sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ineq34 {
    pub margin: f64,
    pub holds: bool,
}

pub fn ineq34_check(
    x_norm: f64,
    zeta_norm: f64,
    eta_norm: f64,
    d: usize,
    params: &BellmanParams,
) -> Result<Ineq34, BellmanError> {
    if d < 2 {
        return Err(BellmanError::DimensionTooSmall(d));
    }
    check_nonneg("|x|", x_norm)?;
    check_nonneg("|zeta|", zeta_norm)?;
    check_nonneg("|eta|", eta_norm)?;
    let BellmanParams { p: _, q, gamma } = *params;
    let (s, t) = (zeta_norm, eta_norm);
    let tq = t.powf(q);
    let r = x_norm * x_norm + 2.0 * d as f64;
    let drift = if lower_branch(s, t, params) { cross_term(s, t, q) } else { tq };
    let margin = r * beta_unchecked(s, t, params) - 2.0 * (q * tq + gamma * (2.0 - q) * drift);
    Ok(Ineq34 { margin, holds: margin >= 0.0 })
}

/// `d s^p + (d - q) t^q + gamma (d - 2 + q) s^2 t^{2-q}`.
pub fn case1_sufficient(d: usize, s: f64, t: f64, params: &BellmanParams) -> f64 {
    let BellmanParams { p, q, gamma } = *params;
    let d = d as f64;
    d * s.powf(p) + (d - q) * t.powf(q) + gamma * (d - 2.0 + q) * cross_term(s, t, q)
}

/// The three forms of the cubic in `q` for the branch `s^p >= t^q` at `(d, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasePolynomial {
    /// `q^3 + q^2(-d - 3) + q(3d - 6) + 6d`
    pub expanded: f64,
    /// `(d - q)(q^2 - 3q - 6)`
    pub factored: f64,
    /// `2d(1 + 2 gamma/q - gamma) - 2q - 4 gamma + 2 gamma q`, times 4.
    pub reduced: f64,
    pub holds: bool,
}

pub fn case_polynomial_check(d: usize, q: f64) -> CasePolynomial {
    let df = d as f64;
    let expanded = q.powi(3) + q * q * (-df - 3.0) + q * (3.0 * df - 6.0) + 6.0 * df;
    let factored = (df - q) * (q * q - 3.0 * q - 6.0);
    let gamma = q * (q - 1.0) / 8.0;
    let reduced = (2.0 * df * (1.0 + 2.0 * gamma / q - gamma) - 2.0 * q - 4.0 * gamma + 2.0 * gamma * q) * 4.0;
    let tol = 1e-12 * (1.0 + expanded.abs());
    let holds = factored <= tol && (expanded + factored).abs() <= tol && (reduced - expanded).abs() <= tol;
    CasePolynomial { expanded, factored, reduced, holds }
}

/// Log-spaced values `10^a, ..., 10^b` with `count` points.
pub fn log_grid(lo_exp: f64, hi_exp: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (count - 1).max(1) as f64)).collect()
}
