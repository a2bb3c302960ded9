//! Coefficient-space algebra on finite Hermite expansions.
//!
//! A [`SpectralFn`] stores `<f, h_n>` sparsely. Every operator in this module
//! (ladder operators, spectral multipliers, the Riesz-type transforms, the
//! multiplier `U_a`) acts on those coefficients exactly; nothing here touches
//! a spatial grid. Axes are zero-based throughout.

mod flow;
mod multiplier;
mod synth;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::basis::{BasisError, MultiIndex};

pub use flow::{
    lemma3_closed_form, lemma3_lhs, lemma3_rhs, lemma3_time_grid, semigroup_p, semigroup_q, star_norm, Flow, Semigroup,
};
pub use multiplier::{eigenvalue, shifted_eigenvalue, Multiplier};
pub use synth::{synthesize, TensorGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter must be positive, got {name} = {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("vector function needs at least one component")]
    EmptyVector,
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// A finite Hermite expansion `f = sum_n c_n h_n` on `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFn {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl SpectralFn {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Self { dim, coeffs: BTreeMap::new() }
    }

    /// The basis function `h_n`.
    pub fn basis(index: impl Into<MultiIndex>) -> Self {
        let index = index.into();
        let mut f = Self::zero(index.dim());
        f.coeffs.insert(index, 1.0);
        f
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, SpectralError>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut f = Self::zero(dim);
        for (index, c) in terms {
            f.add_term(index, c)?;
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Accumulate `c` onto the coefficient of `h_index`; exact zeros are pruned.
    pub fn add_term(&mut self, index: MultiIndex, c: f64) -> Result<(), SpectralError> {
        if index.dim() != self.dim {
            return Err(SpectralError::DimensionMismatch { expected: self.dim, found: index.dim() });
        }
        match self.coeffs.entry(index) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if c != 0.0 {
                    e.insert(c);
                }
            }
        }
        Ok(())
    }

    pub fn coeff(&self, index: &MultiIndex) -> f64 {
        self.coeffs.get(index).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (k, *v))
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|n|` in the support, 0 for the zero function.
    pub fn max_order(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// Largest single entry `n_i` over the support.
    pub fn max_axis_degree(&self) -> u32 {
        self.coeffs.keys().flat_map(|k| k.entries().iter().copied()).max().unwrap_or(0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::zero(self.dim);
        if factor != 0.0 {
            out.coeffs = self.coeffs.iter().map(|(k, v)| (k.clone(), v * factor)).collect();
        }
        out
    }

    fn check_dim(&self, other: &Self) -> Result<(), SpectralError> {
        if self.dim != other.dim {
            return Err(SpectralError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self, SpectralError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_term(k.clone(), factor * v)?;
        }
        Ok(out)
    }

    /// `L^2` inner product `<self, other>`, exact in coefficient space.
    pub fn dot(&self, other: &Self) -> Result<f64, SpectralError> {
        self.check_dim(other)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        Ok(small.terms().map(|(k, v)| v * large.coeff(k)).sum())
    }

    /// `||f||_2 = (sum c_n^2)^{1/2}` by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, SpectralError> {
        let diff = self.add_scaled(other, -1.0)?;
        Ok(diff.coeffs.values().fold(0.0, |m, v| m.max(v.abs())))
    }

    fn check_axis(&self, axis: usize) -> Result<(), SpectralError> {
        if axis >= self.dim {
            return Err(SpectralError::AxisOutOfRange { axis, dim: self.dim });
        }
        Ok(())
    }
}

/// A tuple `(g_1, ..., g_N)` of expansions sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVecFn {
    components: Vec<SpectralFn>,
}

impl SpectralVecFn {
    pub fn new(components: Vec<SpectralFn>) -> Result<Self, SpectralError> {
        let first = components.first().ok_or(SpectralError::EmptyVector)?;
        let dim = first.dim();
        if let Some(bad) = components.iter().find(|c| c.dim() != dim) {
            return Err(SpectralError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn components(&self) -> &[SpectralFn] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn into_components(self) -> Vec<SpectralFn> {
        self.components
    }
}

/// `delta_i = d/dx_i + x_i`: `h_n -> sqrt(2 n_i) h_{n - e_i}`.
pub fn delta(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    f.check_axis(axis)?;
    let mut out = SpectralFn::zero(f.dim());
    for (n, c) in f.terms() {
        if let Some(lower) = n.lowered(axis) {
            out.add_term(lower, (2.0 * n.get(axis) as f64).sqrt() * c)?;
        }
    }
    Ok(out)
}

/// `delta_i^* = -d/dx_i + x_i`: `h_n -> sqrt(2(n_i + 1)) h_{n + e_i}`.
pub fn delta_star(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    f.check_axis(axis)?;
    let mut out = SpectralFn::zero(f.dim());
    for (n, c) in f.terms() {
        out.add_term(n.raised(axis), (2.0 * (n.get(axis) as f64 + 1.0)).sqrt() * c)?;
    }
    Ok(out)
}

/// `d/dx_i f = (delta_i f - delta_i^* f) / 2`.
pub fn partial(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    let down = delta(axis, f)?;
    let up = delta_star(axis, f)?;
    Ok(down.add_scaled(&up, -1.0)?.scaled(0.5))
}

/// `x_i f = (delta_i f + delta_i^* f) / 2`.
pub fn multiply_coordinate(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    let down = delta(axis, f)?;
    let up = delta_star(axis, f)?;
    Ok(down.add_scaled(&up, 1.0)?.scaled(0.5))
}

/// Diagonal action `c_n -> m(|n|, d) c_n`.
pub fn apply_multiplier(m: &Multiplier, f: &SpectralFn) -> SpectralFn {
    let dim = f.dim();
    let mut out = SpectralFn::zero(dim);
    for (n, c) in f.terms() {
        let v = m.eval(n.order(), dim) * c;
        if v != 0.0 {
            out.coeffs.insert(n.clone(), v);
        }
    }
    out
}

/// `R'_i = delta_i^* L'^{-1/2}`
pub fn riesz_prime(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    delta_star(axis, &apply_multiplier(&Multiplier::shifted_power(-0.5), f))
}

/// `R~_i = delta_i^* L^{-1/2}`
pub fn riesz_tilde(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    delta_star(axis, &apply_multiplier(&Multiplier::eigenvalue_power(0.0, -0.5), f))
}

/// `R_i = delta_i L^{-1/2}`
pub fn riesz(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    delta(axis, &apply_multiplier(&Multiplier::eigenvalue_power(0.0, -0.5), f))
}

/// `R_i^* = delta_i^* (L + 2)^{-1/2}`, the adjoint of [`riesz`].
pub fn riesz_star(axis: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    delta_star(axis, &apply_multiplier(&Multiplier::eigenvalue_power(2.0, -0.5), f))
}

/// Applies a per-axis transform for every axis, giving the vector `(T_1 f, ..., T_d f)`.
pub fn vectorize<F>(f: &SpectralFn, op: F) -> Result<SpectralVecFn, SpectralError>
where
    F: Fn(usize, &SpectralFn) -> Result<SpectralFn, SpectralError>,
{
    let comps = (0..f.dim()).map(|i| op(i, f)).collect::<Result<Vec<_>, _>>()?;
    SpectralVecFn::new(comps)
}

/// `U_a = (L (L + 2a)^{-1})^{1/2}`.
pub fn u_multiplier(a: f64, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    if !(a > 0.0) {
        return Err(SpectralError::NonPositive { name: "a", value: a });
    }
    Ok(apply_multiplier(&Multiplier::u_factor(a), f))
}

/// Coefficients `c_1, ..., c_count` of `sqrt(1 - x) = 1 - sum c_n x^n`,
/// `c_n = (2n)! / ((n!)^2 (2n - 1) 4^n)`, via `c_{n+1} = c_n (2n - 1) / (2n + 2)`.
pub fn sqrt_series_coeffs(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 0.5;
    for n in 1..=count {
        out.push(c);
        let nf = n as f64;
        c *= (2.0 * nf - 1.0) / (2.0 * nf + 2.0);
    }
    out
}

/// `U_a` through the truncated series `I - sum_{n <= terms} c_n A^n` with
/// `A = 2a (L + 2a)^{-1}`.
pub fn u_via_series(a: f64, terms: usize, f: &SpectralFn) -> Result<SpectralFn, SpectralError> {
    if !(a > 0.0) {
        return Err(SpectralError::NonPositive { name: "a", value: a });
    }
    let coeffs = sqrt_series_coeffs(terms);
    let m = Multiplier::new(format!("U_{a}[{terms}]"), move |n, d| {
        let ratio = 2.0 * a / (eigenvalue(n, d) + 2.0 * a);
        let mut power = 1.0;
        let mut sum = 0.0;
        for c in &coeffs {
            power *= ratio;
            sum += c * power;
        }
        1.0 - sum
    });
    Ok(apply_multiplier(&m, f))
}
