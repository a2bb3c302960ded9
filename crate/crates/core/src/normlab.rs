//! L^p norms of synthesized expansions, empirical operator-norm ratios over
//! random expansions, and the numeric side of the bilinear embedding.
//!
//! Ratios are empirical lower bounds on operator norms; the constants they
//! are compared with are upper bounds, so every check here is one-sided.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::basis::{default_half_width, gauss_legendre, panel_grid, MultiIndex, QuadratureGrid};
use crate::report::Report;
use crate::spectral::{
    apply_multiplier, delta, delta_star, eigenvalue, lemma3_time_grid, riesz, riesz_prime, riesz_star, riesz_tilde,
    semigroup_p, u_multiplier, vectorize, Flow, Multiplier, Semigroup, SpectralError, SpectralFn, SpectralVecFn,
    TensorGrid,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("exponent p = {0} is outside the supported range")]
    Exponent(f64),
    #[error("unknown operator {0:?}")]
    UnknownOperator(String),
    #[error("operator {op} is not covered at p = {p}")]
    NotApplicable { op: String, p: f64 },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Basis(#[from] crate::basis::BasisError),
}

/// `max(p, p/(p-1))`.
pub fn p_star(p: f64) -> f64 {
    p.max(p / (p - 1.0))
}

/// `p/(p-1)`.
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// A cube tensor grid with cached weights and radii.
#[derive(Debug, Clone)]
pub struct NormGrid {
    grid: TensorGrid,
    half_width: f64,
    weights: Vec<f64>,
    radii: Vec<f64>,
}

impl NormGrid {
    pub fn new(dim: usize, half_width: f64, panels: usize, order: usize) -> Result<Self, NormError> {
        let grid = TensorGrid::cube(panel_grid(half_width, panels, order)?, dim);
        let weights = grid.weights();
        let radii = grid.squared_radii().into_iter().map(f64::sqrt).collect();
        Ok(Self { grid, half_width, weights, radii })
    }

    /// Half-width `(2(2N + d))^{1/2} + 6`.
    pub fn for_degree(dim: usize, degree: u32, panels: usize, order: usize) -> Result<Self, NormError> {
        Self::new(dim, default_half_width(degree, dim), panels, order)
    }

    /// Panel layout used by the sweeps: `(panels, order)` per axis.
    pub fn sweep_layout(dim: usize) -> (usize, usize) {
        match dim {
            1 => (48, 8),
            2 => (32, 6),
            _ => (14, 8),
        }
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn tensor(&self) -> &TensorGrid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Whether the box reaches the default truncation for `degree`.
    pub fn covers(&self, degree: u32) -> bool {
        self.half_width >= default_half_width(degree, self.dim()) - 1e-12
    }

    pub fn synthesize(&self, f: &SpectralFn) -> Result<Vec<f64>, NormError> {
        Ok(self.grid.synthesize(f)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpNorm {
    pub value: f64,
    /// The grid box is smaller than the default truncation for the input degree.
    pub undersized: bool,
}

fn check_exponent(p: f64) -> Result<(), NormError> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(NormError::Exponent(p))
    }
}

/// `(sum_j w_j |v_j|^p)^{1/p}`.
pub fn lp_norm_values(values: &[f64], weights: &[f64], p: f64) -> f64 {
    let sum: f64 = if p == 2.0 {
        values.iter().zip(weights).map(|(v, w)| w * v * v).sum()
    } else {
        values.iter().zip(weights).map(|(v, w)| w * v.abs().powf(p)).sum()
    };
    sum.powf(1.0 / p)
}

/// Pointwise Euclidean length of a field given component-wise.
pub fn euclidean_length(components: &[Vec<f64>]) -> Vec<f64> {
    let n = components.first().map_or(0, Vec::len);
    (0..n).map(|j| components.iter().map(|c| c[j] * c[j]).sum::<f64>().sqrt()).collect()
}

pub fn lp_norm(f: &SpectralFn, p: f64, grid: &NormGrid) -> Result<LpNorm, NormError> {
    check_exponent(p)?;
    let values = grid.synthesize(f)?;
    Ok(LpNorm { value: lp_norm_values(&values, grid.weights(), p), undersized: !grid.covers(f.max_order()) })
}

/// `|| |F| ||_p` with `|F(x)|` the Euclidean length of the component tuple.
pub fn lp_norm_vec(f: &SpectralVecFn, p: f64, grid: &NormGrid) -> Result<LpNorm, NormError> {
    check_exponent(p)?;
    let comps = f.components().iter().map(|c| grid.synthesize(c)).collect::<Result<Vec<_>, _>>()?;
    let degree = f.components().iter().map(SpectralFn::max_order).max().unwrap_or(0);
    Ok(LpNorm { value: lp_norm_values(&euclidean_length(&comps), grid.weights(), p), undersized: !grid.covers(degree) })
}

/// `Sf(x) = |x| L^{-1/2} f(x)` at arbitrary points.
pub fn apply_s(f: &SpectralFn, points: &[Vec<f64>]) -> Result<Vec<f64>, NormError> {
    let g = apply_multiplier(&Multiplier::eigenvalue_power(0.0, -0.5), f);
    let values = crate::spectral::synthesize(&g, points)?;
    Ok(values.iter().zip(points).map(|(v, x)| v * x.iter().map(|c| c * c).sum::<f64>().sqrt()).collect())
}

/// The operators of the norm sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operator {
    /// `|x| L^{-1/2}`
    S,
    /// `(delta_i^* L'^{-1/2})_i`
    RPrime,
    /// `(delta_i^* L^{-1/2})_i`
    RTilde,
    /// `(delta_i^* (L + 2)^{-1/2})_i`
    RStar,
    /// `(L (L + 2a)^{-1})^{1/2}`
    U(f64),
    /// `(delta_i L^{-1/2})_i`
    R,
}

impl Operator {
    pub fn all() -> Vec<Operator> {
        vec![Operator::S, Operator::RPrime, Operator::RTilde, Operator::RStar, Operator::U(1.0), Operator::R]
    }

    pub fn is_vector(&self) -> bool {
        matches!(self, Operator::RPrime | Operator::RTilde | Operator::RStar | Operator::R)
    }

    /// The constant the sweep compares against, or `None` where no bound
    /// is claimed (vector operators at `p = 1`).
    pub fn bound(&self, p: f64) -> Option<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return None;
        }
        match self {
            Operator::S => Some(3.0),
            Operator::U(_) => Some(2.0),
            _ if p == 1.0 => None,
            Operator::RPrime | Operator::R => Some(36.0 * (p_star(p) - 1.0)),
            Operator::RTilde => Some(42.0 * (p_star(p) - 1.0)),
            Operator::RStar => Some(84.0 * (p_star(p) - 1.0)),
        }
    }

    /// Output degree for inputs of degree `degree`.
    pub fn output_degree(&self, degree: u32) -> u32 {
        match self {
            Operator::RPrime | Operator::RTilde | Operator::RStar => degree + 1,
            _ => degree,
        }
    }

    /// Pointwise `|T f(x)|` on the grid.
    pub fn magnitude_on(&self, f: &SpectralFn, grid: &NormGrid) -> Result<Vec<f64>, NormError> {
        let vector = |op: fn(usize, &SpectralFn) -> Result<SpectralFn, SpectralError>| -> Result<Vec<f64>, NormError> {
            let v = vectorize(f, op)?;
            let comps = v.components().iter().map(|c| grid.synthesize(c)).collect::<Result<Vec<_>, _>>()?;
            Ok(euclidean_length(&comps))
        };
        match *self {
            Operator::S => {
                let g = apply_multiplier(&Multiplier::eigenvalue_power(0.0, -0.5), f);
                let v = grid.synthesize(&g)?;
                Ok(v.iter().zip(grid.radii()).map(|(a, r)| (a * r).abs()).collect())
            }
            Operator::U(a) => Ok(grid.synthesize(&u_multiplier(a, f)?)?.iter().map(|v| v.abs()).collect()),
            Operator::RPrime => vector(riesz_prime),
            Operator::RTilde => vector(riesz_tilde),
            Operator::RStar => vector(riesz_star),
            Operator::R => vector(riesz),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::S => write!(f, "S"),
            Operator::RPrime => write!(f, "Rprime"),
            Operator::RTilde => write!(f, "Rtilde"),
            Operator::RStar => write!(f, "Rstar"),
            Operator::U(a) => write!(f, "U:{a}"),
            Operator::R => write!(f, "R"),
        }
    }
}

impl FromStr for Operator {
    type Err = NormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || NormError::UnknownOperator(s.to_string());
        match s {
            "S" => Ok(Operator::S),
            "Rprime" | "R'" => Ok(Operator::RPrime),
            "Rtilde" => Ok(Operator::RTilde),
            "Rstar" | "R*" => Ok(Operator::RStar),
            "R" => Ok(Operator::R),
            "U" => Ok(Operator::U(1.0)),
            _ => {
                let a = s.strip_prefix("U:").or_else(|| s.strip_prefix("U_")).ok_or_else(unknown)?;
                let a: f64 = a.parse().map_err(|_| unknown())?;
                if a > 0.0 && a.is_finite() {
                    Ok(Operator::U(a))
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormSweepConfig {
    pub dims: Vec<usize>,
    pub exponents: Vec<f64>,
    pub degree: u32,
    /// `(panels, order)` per axis; `None` uses [`NormGrid::sweep_layout`].
    pub layout: Option<(usize, usize)>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for NormSweepConfig {
    fn default() -> Self {
        Self {
            dims: vec![1, 2, 3],
            exponents: vec![1.25, 1.5, 2.0, 3.0, 4.0, 8.0],
            degree: 6,
            layout: None,
            samples: 50,
            seed: 42,
        }
    }
}

impl NormSweepConfig {
    /// A grid wide enough for every operator's output at this degree.
    pub fn grid(&self, dim: usize) -> Result<NormGrid, NormError> {
        let (panels, order) = self.layout.unwrap_or_else(|| NormGrid::sweep_layout(dim));
        NormGrid::for_degree(dim, self.degree + 1, panels, order)
    }
}

fn sample_seed(seed: u64, dim: usize, sample: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((dim as u64) << 40) ^ (sample as u64)
}

/// i.i.d. standard normal coefficients on `{|n| <= degree}`, deterministic
/// in `(seed, dim, sample)`.
pub fn random_function(dim: usize, degree: u32, seed: u64, sample: usize) -> SpectralFn {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, dim, sample));
    let terms: Vec<(MultiIndex, f64)> =
        MultiIndex::all_up_to(dim, degree).into_iter().map(|n| (n, StandardNormal.sample(&mut rng))).collect();
    SpectralFn::from_terms(dim, terms).expect("indices have the right dimension")
}

/// Worst ratio observed in one `(op, d, p)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub op: Operator,
    pub dim: usize,
    pub p: f64,
    pub max_ratio: f64,
    pub bound: f64,
    pub samples: usize,
    /// Largest relative gap between the grid L^2 norm and the coefficient norm
    /// over the sampled inputs.
    pub parseval_error: f64,
}

impl NormEstimate {
    pub fn report(&self, degree: u32, seed: u64) -> Report {
        Report::new(
            format!("norm.{}", self.op),
            [
                ("d", self.dim.to_string()),
                ("p", self.p.to_string()),
                ("degree", degree.to_string()),
                ("samples", self.samples.to_string()),
                ("seed", seed.to_string()),
                ("parseval_rel_err", format!("{:.1e}", self.parseval_error)),
                ("note", "empirical lower bound on norm; the constant is an upper bound".to_string()),
            ],
            self.max_ratio,
            self.bound,
            0.0,
        )
    }
}

/// Ratios `||T f||_p / ||f||_p` for every requested exponent, sharing the
/// synthesis of each sample across exponents. Samples run in parallel;
/// results do not depend on scheduling.
pub fn sweep_cell(
    op: Operator,
    dim: usize,
    exponents: &[f64],
    cfg: &NormSweepConfig,
) -> Result<Vec<NormEstimate>, NormError> {
    if !(1..=3).contains(&dim) {
        return Err(NormError::UnsupportedDimension(dim));
    }
    let mut bounds = Vec::with_capacity(exponents.len());
    for &p in exponents {
        check_exponent(p)?;
        bounds.push(op.bound(p).ok_or(NormError::NotApplicable { op: op.to_string(), p })?);
    }
    let grid = cfg.grid(dim)?;
    let per_sample: Vec<(Vec<f64>, f64)> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| -> Result<(Vec<f64>, f64), NormError> {
            let f = random_function(dim, cfg.degree, cfg.seed, k);
            let base = grid.synthesize(&f)?;
            let image = op.magnitude_on(&f, &grid)?;
            let ratios = exponents
                .iter()
                .map(|&p| lp_norm_values(&image, grid.weights(), p) / lp_norm_values(&base, grid.weights(), p))
                .collect();
            let parseval = (lp_norm_values(&base, grid.weights(), 2.0) / f.l2_norm() - 1.0).abs();
            Ok((ratios, parseval))
        })
        .collect::<Result<_, _>>()?;
    let parseval_error = per_sample.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(exponents
        .iter()
        .zip(&bounds)
        .enumerate()
        .map(|(j, (&p, &bound))| NormEstimate {
            op,
            dim,
            p,
            max_ratio: per_sample.iter().map(|s| s.0[j]).fold(0.0, f64::max),
            bound,
            samples: cfg.samples,
            parseval_error,
        })
        .collect())
}

pub fn empirical_norm(op: Operator, dim: usize, p: f64, cfg: &NormSweepConfig) -> Result<NormEstimate, NormError> {
    Ok(sweep_cell(op, dim, &[p], cfg)?.remove(0))
}

/// `max_n (lambda_n / (lambda_n + 2a))^{1/2}` over `|n| <= degree`, the
/// exact L^2 norm of `U_a` on that span.
pub fn u_l2_norm(a: f64, dim: usize, degree: u32) -> f64 {
    (0..=degree).map(|k| (eigenvalue(k, dim) / (eigenvalue(k, dim) + 2.0 * a)).sqrt()).fold(0.0, f64::max)
}

/// Time rule for the bilinear embedding: Gauss-Legendre panels in
/// `u = t^{1/2}` on `[0, U]` with `e^{-U^2 ((3d)^{1/2} + (3d - 2)^{1/2})} < e^{-40}`.
pub fn bilinear_time_grid(dim: usize, panels: usize, order: usize) -> QuadratureGrid {
    let d = dim as f64;
    let rate = (3.0 * d).sqrt() + (3.0 * d - 2.0).sqrt();
    QuadratureGrid::panels(0.0, (40.0 / rate).sqrt(), panels, order).expect("valid time grid")
}

fn star_squares(flow: &Flow, t: f64, grid: &NormGrid) -> Result<Vec<f64>, NormError> {
    let dim = flow.dim() as f64;
    let groups = flow.star_fields(t)?;
    let mut total = vec![0.0; grid.len()];
    for (g, fields) in groups.iter().enumerate() {
        for field in fields {
            if field.is_zero() {
                continue;
            }
            let values = grid.synthesize(field)?;
            if g == 0 {
                for ((acc, v), r) in total.iter_mut().zip(&values).zip(grid.radii()) {
                    *acc += (r * r + 2.0 * dim) * v * v;
                }
            } else {
                for (acc, v) in total.iter_mut().zip(&values) {
                    *acc += v * v;
                }
            }
        }
    }
    Ok(total)
}

/// `\int_0^\infty \int |P_t f(x)|_* |Q_t g(x)|_* dx t dt` with `t = u^2`
/// (`t dt = 2u^3 du`) on `u_grid` and tensor quadrature on `grid_x`.
pub fn bilinear_embedding_lhs(
    f: &SpectralFn,
    g: &SpectralVecFn,
    grid_x: &NormGrid,
    u_grid: &QuadratureGrid,
) -> Result<f64, NormError> {
    if g.dim() != f.dim() {
        return Err(NormError::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    if grid_x.dim() != f.dim() {
        return Err(NormError::DimensionMismatch { expected: f.dim(), found: grid_x.dim() });
    }
    if f.is_zero() || g.components().iter().all(SpectralFn::is_zero) {
        return Ok(0.0);
    }
    let pf = Flow::new(Semigroup::P, vec![f.clone()])?;
    let qg = Flow::new(Semigroup::Q, g.components().to_vec())?;
    let mut total = 0.0;
    for (&u, &w) in u_grid.nodes().iter().zip(u_grid.weights()) {
        let t = u * u;
        let a = star_squares(&pf, t, grid_x)?;
        let b = star_squares(&qg, t, grid_x)?;
        let inner: f64 = a.iter().zip(&b).zip(grid_x.weights()).map(|((x, y), wx)| wx * (x * y).sqrt()).sum();
        total += w * 2.0 * u * u * u * inner;
    }
    Ok(total)
}

/// Both sides of the first step of the `R'` duality chain and its final bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCheck {
    /// `|sum_i <R'_i f, g_i>|`, exact.
    pub lhs: f64,
    /// `4 \int_0^\infty sum_i |<delta_i^* P_t f, d_t Q_t g_i>| t dt`.
    pub time_side: f64,
    /// `36 (p* - 1) ||f||_p || |g| ||_q`.
    pub norm_side: f64,
    pub chain: Report,
    pub bound: Report,
}

pub fn theorem2_chain_check(
    f: &SpectralFn,
    g: &SpectralVecFn,
    p: f64,
    grid: &NormGrid,
) -> Result<ChainCheck, NormError> {
    if !(p > 1.0) {
        return Err(NormError::Exponent(p));
    }
    let dim = f.dim();
    if g.dim() != dim || g.len() != dim {
        return Err(NormError::DimensionMismatch { expected: dim, found: g.len() });
    }
    let mut lhs = 0.0;
    for (i, gi) in g.components().iter().enumerate() {
        lhs += riesz_prime(i, f)?.dot(gi)?;
    }
    let lhs = lhs.abs();
    let s_grid = lemma3_time_grid(dim);
    let mut time_side = 0.0;
    for (&s, &w) in s_grid.nodes().iter().zip(s_grid.weights()) {
        let t = s * s;
        let pf = semigroup_p(t, f);
        let mut sum = 0.0;
        for (i, gi) in g.components().iter().enumerate() {
            sum += delta_star(i, &pf)?.dot(&Semigroup::Q.time_derivative(t, gi))?.abs();
        }
        time_side += w * sum * 2.0 * s * s * s;
    }
    time_side *= 4.0;
    let norm_side = 36.0 * (p_star(p) - 1.0) * lp_norm(f, p, grid)?.value * lp_norm_vec(g, conjugate(p), grid)?.value;
    let params = [("d", dim.to_string()), ("p", p.to_string())];
    let chain = Report::new("riesz_prime.chain", params.clone(), lhs, time_side, 1e-10 * (1.0 + time_side));
    let bound = Report::new("riesz_prime.bound", params, lhs, norm_side, 0.0);
    Ok(ChainCheck { lhs, time_side, norm_side, chain, bound })
}

/// Pointwise comparison of `R~ f` with `R^1 f + R^2 f`,
/// `R^1 = -delta L^{-1/2}`, `R^2 = 2x L^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleCheck {
    /// `max_x (|R~ f| - |R^1 f| - |R^2 f|)`
    pub triangle_excess: f64,
    /// `max_x |R~ f - R^1 f - R^2 f|`
    pub sum_error: f64,
    /// `max_x | |R^2 f| - 2|x||L^{-1/2} f| |`
    pub r2_error: f64,
    /// `max_x |R~ f(x)|`, for scale.
    pub scale: f64,
}

pub fn triangle_decomposition(f: &SpectralFn, points: &[Vec<f64>]) -> Result<TriangleCheck, NormError> {
    let dim = f.dim();
    let half = apply_multiplier(&Multiplier::eigenvalue_power(0.0, -0.5), f);
    let base = crate::spectral::synthesize(&half, points)?;
    let mut tilde = Vec::with_capacity(dim);
    let mut first = Vec::with_capacity(dim);
    for i in 0..dim {
        tilde.push(crate::spectral::synthesize(&riesz_tilde(i, f)?, points)?);
        first.push(crate::spectral::synthesize(&delta(i, &half)?.scaled(-1.0), points)?);
    }
    let mut out = TriangleCheck { triangle_excess: f64::NEG_INFINITY, sum_error: 0.0, r2_error: 0.0, scale: 0.0 };
    for (j, x) in points.iter().enumerate() {
        let second: Vec<f64> = x.iter().map(|xi| 2.0 * xi * base[j]).collect();
        let len = |v: &dyn Fn(usize) -> f64| (0..dim).map(|i| v(i).powi(2)).sum::<f64>().sqrt();
        let t = len(&|i| tilde[i][j]);
        let a = len(&|i| first[i][j]);
        let b = len(&|i| second[i]);
        let sum_err = (0..dim).map(|i| (tilde[i][j] - first[i][j] - second[i]).abs()).fold(0.0, f64::max);
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        out.triangle_excess = out.triangle_excess.max(t - a - b);
        out.sum_error = out.sum_error.max(sum_err);
        out.r2_error = out.r2_error.max((b - 2.0 * r * base[j].abs()).abs());
        out.scale = out.scale.max(t);
    }
    Ok(out)
}

/// `max |R*_i h_n - R~_i U_1 h_n|` over `|n| <= degree` and all axes.
pub fn riesz_star_factorization(dim: usize, degree: u32) -> Result<f64, NormError> {
    let mut worst: f64 = 0.0;
    for n in MultiIndex::all_up_to(dim, degree) {
        let h = SpectralFn::basis(n);
        for i in 0..dim {
            let direct = riesz_star(i, &h)?;
            let factored = riesz_tilde(i, &u_multiplier(1.0, &h)?)?;
            worst = worst.max(direct.max_abs_diff(&factored)?);
        }
    }
    Ok(worst)
}

/// Scattered evaluation points in `[-r, r]^d`, deterministic in `seed`.
pub fn sample_points(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<f64>> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..dim).map(|_| rng.random_range(-radius..radius)).collect()).collect()
}

/// 1-d Gauss-Legendre rule on `[lo, hi]` split into `panels`.
pub fn legendre_panels(lo: f64, hi: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for k in 0..panels {
        let mid = lo + (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}
