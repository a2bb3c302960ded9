//! The Poisson-type semigroups `P_t = e^{-t L'^{1/2}}` and
//! `Q_t = e^{-t (L' - 2)^{1/2}}`, the starred gradient norm of their orbits,
//! and the time-integral representation of `<R'_i f, g>`.

use crate::basis::{BasisError, GridDomain, QuadratureGrid};

use super::multiplier::shifted_eigenvalue;
use super::{apply_multiplier, delta_star, partial, riesz_prime, synthesize, Multiplier, SpectralError, SpectralFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semigroup {
    /// `P_t`, generator `L'^{1/2}`.
    P,
    /// `Q_t`, generator `(L' - 2)^{1/2}`.
    Q,
}

impl Semigroup {
    /// Square root of the generator's eigenvalue on `h_n`.
    pub fn rate(self, order: u32, dim: usize) -> f64 {
        match self {
            Semigroup::P => shifted_eigenvalue(order, dim).sqrt(),
            Semigroup::Q => (shifted_eigenvalue(order, dim) - 2.0).sqrt(),
        }
    }

    pub fn apply(self, t: f64, f: &SpectralFn) -> SpectralFn {
        let m = Multiplier::new(format!("{self:?}_{t}"), move |n, d| (-t * self.rate(n, d)).exp());
        apply_multiplier(&m, f)
    }

    /// `d/dt` of the orbit, computed spectrally.
    pub fn time_derivative(self, t: f64, f: &SpectralFn) -> SpectralFn {
        let m = Multiplier::new(format!("d/dt {self:?}_{t}"), move |n, d| {
            let r = self.rate(n, d);
            -r * (-t * r).exp()
        });
        apply_multiplier(&m, f)
    }
}

pub fn semigroup_p(t: f64, f: &SpectralFn) -> SpectralFn {
    Semigroup::P.apply(t, f)
}

pub fn semigroup_q(t: f64, f: &SpectralFn) -> SpectralFn {
    Semigroup::Q.apply(t, f)
}

/// An orbit `t -> (S_t f_1, ..., S_t f_N)` under one of the two semigroups.
#[derive(Debug, Clone)]
pub struct Flow {
    semigroup: Semigroup,
    components: Vec<SpectralFn>,
}

impl Flow {
    pub fn new(semigroup: Semigroup, components: Vec<SpectralFn>) -> Result<Self, SpectralError> {
        let first = components.first().ok_or(SpectralError::EmptyVector)?;
        let dim = first.dim();
        if let Some(bad) = components.iter().find(|c| c.dim() != dim) {
            return Err(SpectralError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { semigroup, components })
    }

    pub fn semigroup(&self) -> Semigroup {
        self.semigroup
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn components(&self) -> &[SpectralFn] {
        &self.components
    }

    pub fn at(&self, t: f64) -> Vec<SpectralFn> {
        self.components.iter().map(|f| self.semigroup.apply(t, f)).collect()
    }

    pub fn time_derivative(&self, t: f64) -> Vec<SpectralFn> {
        self.components.iter().map(|f| self.semigroup.time_derivative(t, f)).collect()
    }

    /// Every spectral field entering `|u(x,t)|_*^2`, grouped as
    /// `(values, d/dt, d/dx_1, ..., d/dx_d)`, each a list over components.
    pub fn star_fields(&self, t: f64) -> Result<Vec<Vec<SpectralFn>>, SpectralError> {
        let values = self.at(t);
        let mut groups = vec![self.time_derivative(t)];
        for axis in 0..self.dim() {
            groups.push(values.iter().map(|v| partial(axis, v)).collect::<Result<_, _>>()?);
        }
        groups.insert(0, values);
        Ok(groups)
    }
}

/// `|u(x,t)|_* = (r(x)|u|^2 + |d_t u|^2 + sum_i |d_{x_i} u|^2)^{1/2}` with
/// `r(x) = |x|^2 + 2d`; all derivatives are exact spectral ones.
pub fn star_norm(flow: &Flow, x: &[f64], t: f64) -> Result<f64, SpectralError> {
    let dim = flow.dim();
    if x.len() != dim {
        return Err(SpectralError::DimensionMismatch { expected: dim, found: x.len() });
    }
    let point = [x.to_vec()];
    let r = x.iter().map(|v| v * v).sum::<f64>() + 2.0 * dim as f64;
    let groups = flow.star_fields(t)?;
    let mut total = 0.0;
    for (g, fields) in groups.iter().enumerate() {
        let weight = if g == 0 { r } else { 1.0 };
        for f in fields {
            let v = synthesize(f, &point)?[0];
            total += weight * v * v;
        }
    }
    Ok(total.sqrt())
}

/// `<R'_i f, g>` in coefficient space.
pub fn lemma3_lhs(axis: usize, f: &SpectralFn, g: &SpectralFn) -> Result<f64, SpectralError> {
    riesz_prime(axis, f)?.dot(g)
}

/// Default grid in `s` (`t = s^2`) for [`lemma3_rhs`]: Gauss-Legendre panels
/// on `[0, S]` with `e^{-S^2 (3d - 2)^{1/2}} < 1e-16`.
pub fn lemma3_time_grid(dim: usize) -> QuadratureGrid {
    let slowest = (3.0 * dim as f64 - 2.0).sqrt();
    let s_max = (37.0 / slowest).sqrt();
    QuadratureGrid::panels(0.0, s_max, 24, 12).expect("static grid parameters are valid")
}

/// `-4 \int_0^\infty <delta_i^* P_t f, d_t Q_t g> t dt` by quadrature in
/// `s = t^{1/2}` (`t dt = 2 s^3 ds`) on the supplied grid, which must be a
/// panel grid on `[0, S]`.
pub fn lemma3_rhs(axis: usize, f: &SpectralFn, g: &SpectralFn, s_grid: &QuadratureGrid) -> Result<f64, SpectralError> {
    if f.dim() != g.dim() {
        return Err(SpectralError::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    match s_grid.domain() {
        GridDomain::Interval { lo: 0.0, .. } => {}
        _ => return Err(BasisError::InvalidGrid("time grid must start at s = 0".into()).into()),
    }
    let mut total = 0.0;
    for (&s, &w) in s_grid.nodes().iter().zip(s_grid.weights()) {
        let t = s * s;
        let left = delta_star(axis, &semigroup_p(t, f))?;
        let right = Semigroup::Q.time_derivative(t, g);
        total += w * left.dot(&right)? * 2.0 * s * s * s;
    }
    Ok(-4.0 * total)
}

/// The closed form of the time integral, term by term:
/// `4 (lambda'_k - 2)^{1/2} / (lambda'_n^{1/2} + (lambda'_k - 2)^{1/2})^2 <delta_i^* h_n, h_k>`.
pub fn lemma3_closed_form(axis: usize, f: &SpectralFn, g: &SpectralFn) -> Result<f64, SpectralError> {
    if f.dim() != g.dim() {
        return Err(SpectralError::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    let dim = f.dim();
    let mut total = 0.0;
    for (n, c) in f.terms() {
        let up = delta_star(axis, &SpectralFn::basis(n.clone()))?;
        for (k, ladder) in up.terms() {
            let gk = g.coeff(k);
            if gk == 0.0 {
                continue;
            }
            let a = shifted_eigenvalue(n.order(), dim).sqrt();
            let b = (shifted_eigenvalue(k.order(), dim) - 2.0).sqrt();
            total += 4.0 * b / ((a + b) * (a + b)) * ladder * c * gk;
        }
    }
    Ok(total)
}
