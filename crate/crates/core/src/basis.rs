//! Hermite polynomials and functions, multi-indices, and the 1-d quadrature
//! grids the rest of the crate integrates on.
//!
//! Hermite functions are evaluated by the normalized three-term recurrence
//! with a running log-scale, so neither `n!` nor `e^{-x^2/2}` ever has to be
//! formed on its own. This keeps `h_n(x)` finite and accurate for
//! `n <= 10_000` and `|x| <= 50`, well past the point where the textbook
//! definition overflows.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `pi^{-1/4}`, the value of `h_0(0)`.
pub const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_FACTOR: f64 = 1e-150;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("quadrature order must be positive")]
    ZeroOrder,
    #[error("invalid grid parameter: {0}")]
    InvalidGrid(String),
    #[error("Gauss-Hermite node solve did not converge for order {0}")]
    NodeSolve(usize),
}

/// A multi-index `n = (n_1, ..., n_d)` labelling the tensor Hermite function `h_n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// Panics if `entries` is empty; every multi-index lives in some `N^d`, `d >= 1`.
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "multi-index needs dimension >= 1");
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    /// The unit increment `e_axis` in dimension `dim`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut entries = vec![0; dim];
        entries[axis] = 1;
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|n| = n_1 + ... + n_d`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// `n + e_axis`.
    pub fn raised(&self, axis: usize) -> Self {
        let mut entries = self.0.clone();
        entries[axis] += 1;
        Self(entries)
    }

    /// `n - e_axis`, or `None` when `n_axis == 0`.
    pub fn lowered(&self, axis: usize) -> Option<Self> {
        if self.0[axis] == 0 {
            return None;
        }
        let mut entries = self.0.clone();
        entries[axis] -= 1;
        Some(Self(entries))
    }

    /// All multi-indices of dimension `dim` with `|n| <= max_order`, in
    /// lexicographic order.
    pub fn all_up_to(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; dim];
        fn rec(axis: usize, budget: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if axis == current.len() {
                out.push(MultiIndex(current.clone()));
                return;
            }
            for k in 0..=budget {
                current[axis] = k;
                rec(axis + 1, budget - k, current, out);
            }
            current[axis] = 0;
        }
        rec(0, max_order, &mut current, &mut out);
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(entries: Vec<u32>) -> Self {
        Self::new(entries)
    }
}

impl<const D: usize> From<[u32; D]> for MultiIndex {
    fn from(entries: [u32; D]) -> Self {
        Self::new(entries.to_vec())
    }
}

/// Physicists' Hermite polynomial `H_n(x)` by the unnormalized recurrence.
///
/// Overflows for large `n |x|`; use [`hermite_function`] for anything that
/// needs to be stable.
pub fn hermite_polynomial(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 2..=n {
        let next = 2.0 * x * cur - 2.0 * (k - 1) as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `h_0(x), ..., h_n(x)` of the orthonormal Hermite functions.
pub fn hermite_functions_upto(n: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    // Recurrence runs on h_k(x) * e^{x^2/2} * e^{-log_scale}; the Gaussian
    // and any rescalings are folded back in through `log_scale`.
    let mut log_scale = -0.5 * x * x;
    let mut prev = PI_POW_NEG_QUARTER;
    out.push(prev * log_scale.exp());
    if n == 0 {
        return out;
    }
    let mut cur = std::f64::consts::SQRT_2 * x * prev;
    out.push(cur * log_scale.exp());
    for k in 2..=n {
        let kf = k as f64;
        let next = x * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_FACTOR;
            prev *= RESCALE_FACTOR;
            log_scale -= RESCALE_FACTOR.ln();
        }
        out.push(cur * log_scale.exp());
    }
    out
}

/// Orthonormal Hermite function `h_n(x) = (2^n n! sqrt(pi))^{-1/2} e^{-x^2/2} H_n(x)`.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    let mut log_scale = -0.5 * x * x;
    let mut prev = PI_POW_NEG_QUARTER;
    if n == 0 {
        return prev * log_scale.exp();
    }
    let mut cur = std::f64::consts::SQRT_2 * x * prev;
    for k in 2..=n {
        let kf = k as f64;
        let next = x * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_FACTOR;
            prev *= RESCALE_FACTOR;
            log_scale -= RESCALE_FACTOR.ln();
        }
    }
    cur * log_scale.exp()
}

/// `h_n'(x)` from the ladder relations: `d/dx = (delta - delta^*)/2`.
pub fn hermite_function_deriv(n: u32, x: f64) -> f64 {
    let table = hermite_functions_upto(n + 1, x);
    let n_f = n as f64;
    let lower = if n == 0 { 0.0 } else { (2.0 * n_f).sqrt() * table[n as usize - 1] };
    let upper = (2.0 * (n_f + 1.0)).sqrt() * table[n as usize + 1];
    0.5 * (lower - upper)
}

/// Tensor Hermite function `h_n(x) = h_{n_1}(x_1) ... h_{n_d}(x_d)`.
pub fn hermite_multi(n: &MultiIndex, x: &[f64]) -> Result<f64, BasisError> {
    if n.dim() != x.len() {
        return Err(BasisError::DimensionMismatch { expected: n.dim(), found: x.len() });
    }
    Ok(n.entries().iter().zip(x).map(|(&k, &xi)| hermite_function(k, xi)).product())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridKind {
    GaussHermite,
    PanelLegendre,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridDomain {
    /// The real line against the weight `e^{-x^2}`.
    WeightedLine,
    Interval {
        lo: f64,
        hi: f64,
    },
}

/// An immutable 1-d node/weight table.
///
/// For Gauss-Hermite grids `weights` integrate against `e^{-x^2}`; the
/// companion `line_weights` (`w_i e^{x_i^2}`) integrate plain functions over
/// the line and stay representable even where `w_i` itself underflows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    kind: GridKind,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    line_weights: Vec<f64>,
    domain: GridDomain,
}

impl QuadratureGrid {
    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Points per rule (per panel for composite rules).
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights for `\int f(x) dx` without any weight function.
    pub fn line_weights(&self) -> &[f64] {
        &self.line_weights
    }

    pub fn domain(&self) -> GridDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum w_i f(x_i)`: weighted integral for Gauss-Hermite, plain integral for panels.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `\int f(x) dx` over the grid's domain, with no weight function.
    pub fn integrate_plain<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.line_weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Composite Gauss-Legendre rule on `[lo, hi]`.
    pub fn panels(lo: f64, hi: f64, panels: usize, order: usize) -> Result<Self, BasisError> {
        if order == 0 {
            return Err(BasisError::ZeroOrder);
        }
        if panels == 0 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(BasisError::InvalidGrid(format!("panels={panels} on [{lo}, {hi}]")));
        }
        let (ref_nodes, ref_weights) = gauss_legendre(order);
        let width = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = lo + p as f64 * width;
            let mid = a + 0.5 * width;
            for (&t, &w) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(mid + 0.5 * width * t);
                weights.push(0.5 * width * w);
            }
        }
        Ok(Self {
            kind: GridKind::PanelLegendre,
            order,
            line_weights: weights.clone(),
            nodes,
            weights,
            domain: GridDomain::Interval { lo, hi },
        })
    }
}

/// Gauss-Legendre nodes (increasing) and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, x);
            deriv = dp;
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                let (_, dp) = legendre_with_deriv(n, x);
                deriv = dp;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Hermite rule of the given order for the weight `e^{-x^2}`.
///
/// Initial nodes come from the symmetric Jacobi matrix (off-diagonal
/// `sqrt(k/2)`); each node is then polished by Newton on `h_order` and the
/// weights are taken from the Christoffel function
/// `w_i = e^{-x_i^2} / sum_{k < order} h_k(x_i)^2`.
pub fn gauss_hermite_grid(order: usize) -> Result<QuadratureGrid, BasisError> {
    if order == 0 {
        return Err(BasisError::ZeroOrder);
    }
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let off = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = off;
        jacobi[(k, k - 1)] = off;
    }
    let eigen = SymmetricEigen::try_new(jacobi, 1e-15, 10_000 * order).ok_or(BasisError::NodeSolve(order))?;
    let mut nodes: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    let n = order as u32;
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let table = hermite_functions_upto(n, *x);
            let h_n = table[order];
            let h_prev = if order >= 1 { table[order - 1] } else { 0.0 };
            let deriv = (2.0 * n as f64).sqrt() * h_prev - *x * h_n;
            if deriv == 0.0 {
                break;
            }
            let step = h_n / deriv;
            *x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
    }
    // Symmetrize: the rule is exactly even.
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let avg = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -avg;
        nodes[j] = avg;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(BasisError::NodeSolve(order));
    }

    let mut weights = Vec::with_capacity(order);
    let mut line_weights = Vec::with_capacity(order);
    for &x in &nodes {
        let table = hermite_functions_upto(n - 1, x);
        let christoffel: f64 = table.iter().map(|h| h * h).sum();
        let line = 1.0 / christoffel;
        line_weights.push(line);
        weights.push(line * (-x * x).exp());
    }
    Ok(QuadratureGrid {
        kind: GridKind::GaussHermite,
        order,
        nodes,
        weights,
        line_weights,
        domain: GridDomain::WeightedLine,
    })
}

/// Composite Gauss-Legendre rule on `[-half_width, half_width]`.
pub fn panel_grid(half_width: f64, panels: usize, order: usize) -> Result<QuadratureGrid, BasisError> {
    if !(half_width > 0.0) {
        return Err(BasisError::InvalidGrid(format!("half width {half_width} must be positive")));
    }
    QuadratureGrid::panels(-half_width, half_width, panels, order)
}

/// Default truncation half-width for an expansion of total degree `degree`
/// in dimension `dim`: the turning point `sqrt(2(2N + d))` plus six.
pub fn default_half_width(degree: u32, dim: usize) -> f64 {
    (2.0 * (2.0 * degree as f64 + dim as f64)).sqrt() + 6.0
}
