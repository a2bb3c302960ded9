use crate::basis::{hermite_functions_upto, QuadratureGrid};

use super::{SpectralError, SpectralFn};

/// Pointwise values `f(x) = sum_n c_n h_n(x)` at arbitrary points.
pub fn synthesize(f: &SpectralFn, points: &[Vec<f64>]) -> Result<Vec<f64>, SpectralError> {
    let dim = f.dim();
    let top = f.max_axis_degree();
    points
        .iter()
        .map(|x| {
            if x.len() != dim {
                return Err(SpectralError::DimensionMismatch { expected: dim, found: x.len() });
            }
            let tables: Vec<Vec<f64>> = x.iter().map(|&xi| hermite_functions_upto(top, xi)).collect();
            Ok(f.terms()
                .map(|(n, c)| {
                    c * n.entries().iter().enumerate().map(|(axis, &k)| tables[axis][k as usize]).product::<f64>()
                })
                .sum())
        })
        .collect()
}

/// Tensor product of 1-d grids. Points are enumerated row-major: the last
/// axis varies fastest.
#[derive(Debug, Clone)]
pub struct TensorGrid {
    axes: Vec<QuadratureGrid>,
}

impl TensorGrid {
    pub fn new(axes: Vec<QuadratureGrid>) -> Self {
        assert!(!axes.is_empty(), "tensor grid needs at least one axis");
        Self { axes }
    }

    /// The same 1-d grid on every axis.
    pub fn cube(grid: QuadratureGrid, dim: usize) -> Self {
        Self::new(vec![grid; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[QuadratureGrid] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(QuadratureGrid::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(QuadratureGrid::len).collect()
    }

    /// Per-point tensor-product values of a 1-d quantity.
    fn tensor_product<F, G>(&self, per_axis: F, combine: G, init: f64) -> Vec<f64>
    where
        F: Fn(&QuadratureGrid) -> Vec<f64>,
        G: Fn(f64, f64) -> f64,
    {
        let mut out = vec![init];
        for axis in &self.axes {
            let vals = per_axis(axis);
            let mut next = Vec::with_capacity(out.len() * vals.len());
            for &acc in &out {
                for &v in &vals {
                    next.push(combine(acc, v));
                }
            }
            out = next;
        }
        out
    }

    /// Plain (unweighted-integrand) quadrature weights per point.
    pub fn weights(&self) -> Vec<f64> {
        self.tensor_product(|g| g.line_weights().to_vec(), |a, b| a * b, 1.0)
    }

    /// `|x|^2` per point.
    pub fn squared_radii(&self) -> Vec<f64> {
        self.tensor_product(|g| g.nodes().iter().map(|x| x * x).collect(), |a, b| a + b, 0.0)
    }

    /// The `axis` coordinate of every point.
    pub fn coordinate(&self, axis: usize) -> Vec<f64> {
        let shape = self.shape();
        let inner: usize = shape[axis + 1..].iter().product();
        let nodes = self.axes[axis].nodes();
        (0..self.len()).map(|p| nodes[(p / inner) % shape[axis]]).collect()
    }

    /// The point with flat index `p`.
    pub fn point(&self, mut p: usize) -> Vec<f64> {
        let shape = self.shape();
        let mut x = vec![0.0; shape.len()];
        for axis in (0..shape.len()).rev() {
            x[axis] = self.axes[axis].nodes()[p % shape[axis]];
            p /= shape[axis];
        }
        x
    }

    /// `f` at every grid point by sum factorization: the dense coefficient
    /// tensor is contracted against 1-d Hermite tables one axis at a time.
    pub fn synthesize(&self, f: &SpectralFn) -> Result<Vec<f64>, SpectralError> {
        let dim = self.dim();
        if f.dim() != dim {
            return Err(SpectralError::DimensionMismatch { expected: dim, found: f.dim() });
        }
        if f.is_zero() {
            return Ok(vec![0.0; self.len()]);
        }
        let modes = f.max_axis_degree() as usize + 1;
        let mut dims = vec![modes; dim];
        let mut data = vec![0.0; modes.pow(dim as u32)];
        for (n, c) in f.terms() {
            let flat = n.entries().iter().fold(0usize, |acc, &k| acc * modes + k as usize);
            data[flat] = c;
        }
        for (axis, grid) in self.axes.iter().enumerate() {
            let table: Vec<Vec<f64>> =
                grid.nodes().iter().map(|&x| hermite_functions_upto(modes as u32 - 1, x)).collect();
            let outer: usize = dims[..axis].iter().product();
            let inner: usize = dims[axis + 1..].iter().product();
            let m = grid.len();
            let mut next = vec![0.0; outer * m * inner];
            for o in 0..outer {
                for k in 0..modes {
                    let src = &data[(o * modes + k) * inner..(o * modes + k + 1) * inner];
                    if src.iter().all(|v| *v == 0.0) {
                        continue;
                    }
                    for (j, row) in table.iter().enumerate() {
                        let hk = row[k];
                        let dst = &mut next[(o * m + j) * inner..(o * m + j + 1) * inner];
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d += hk * s;
                        }
                    }
                }
            }
            dims[axis] = m;
            data = next;
        }
        Ok(data)
    }

    /// `sum_p w_p v_p`
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights().iter().zip(values).map(|(w, v)| w * v).sum()
    }
}
