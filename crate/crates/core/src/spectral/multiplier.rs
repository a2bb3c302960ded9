use std::fmt;
use std::sync::Arc;

/// Eigenvalue of `L = -Delta + |x|^2` on `h_n`: `lambda_n = 2|n| + d`.
pub fn eigenvalue(order: u32, dim: usize) -> f64 {
    2.0 * order as f64 + dim as f64
}

/// Eigenvalue of `L' = L + 2d` on `h_n`: `lambda'_n = 2|n| + 3d`.
pub fn shifted_eigenvalue(order: u32, dim: usize) -> f64 {
    2.0 * order as f64 + 3.0 * dim as f64
}

type Rule = dyn Fn(u32, usize) -> f64 + Send + Sync;

/// A spectral multiplier: a scalar function of `(|n|, d)` acting diagonally
/// on the Hermite basis.
#[derive(Clone)]
pub struct Multiplier {
    label: String,
    rule: Arc<Rule>,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier").field("label", &self.label).finish()
    }
}

impl Multiplier {
    pub fn new<F>(label: impl Into<String>, rule: F) -> Self
    where
        F: Fn(u32, usize) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.into(), rule: Arc::new(rule) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The factor applied to a coefficient of order `|n|` in dimension `dim`.
    pub fn eval(&self, order: u32, dim: usize) -> f64 {
        (self.rule)(order, dim)
    }

    pub fn identity() -> Self {
        Self::new("I", |_, _| 1.0)
    }

    /// `L`
    pub fn eigenvalue() -> Self {
        Self::new("L", eigenvalue)
    }

    /// `L'`
    pub fn shifted_eigenvalue() -> Self {
        Self::new("L'", shifted_eigenvalue)
    }

    /// `(L + shift)^exponent`
    pub fn eigenvalue_power(shift: f64, exponent: f64) -> Self {
        Self::new(format!("(L+{shift})^{exponent}"), move |n, d| (eigenvalue(n, d) + shift).powf(exponent))
    }

    /// `L'^exponent`
    pub fn shifted_power(exponent: f64) -> Self {
        Self::new(format!("L'^{exponent}"), move |n, d| shifted_eigenvalue(n, d).powf(exponent))
    }

    /// `e^{-t L'^{1/2}}`
    pub fn poisson(t: f64) -> Self {
        Self::new(format!("P_{t}"), move |n, d| (-t * shifted_eigenvalue(n, d).sqrt()).exp())
    }

    /// `e^{-t (L' - 2)^{1/2}}`
    pub fn poisson_shifted(t: f64) -> Self {
        Self::new(format!("Q_{t}"), move |n, d| (-t * (shifted_eigenvalue(n, d) - 2.0).sqrt()).exp())
    }

    /// `(L (L + 2a)^{-1})^{1/2}`
    pub fn u_factor(a: f64) -> Self {
        Self::new(format!("U_{a}"), move |n, d| {
            let lambda = eigenvalue(n, d);
            (lambda / (lambda + 2.0 * a)).sqrt()
        })
    }
}
