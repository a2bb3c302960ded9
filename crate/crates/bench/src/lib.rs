//! Shared inputs for the benchmarks.

use hermite_riesz::basis::MultiIndex;
use hermite_riesz::spectral::SpectralFn;

/// Deterministic dense expansion on `{|n| <= degree}` with slowly varying coefficients.
pub fn dense(dim: usize, degree: u32) -> SpectralFn {
    let terms =
        MultiIndex::all_up_to(dim, degree).into_iter().enumerate().map(|(k, n)| (n, ((k as f64) * 0.7).sin() + 0.5));
    SpectralFn::from_terms(dim, terms).expect("indices share the dimension")
}
