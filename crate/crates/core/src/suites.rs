//! Named verification suites. Each suite returns [`Report`]s in canonical
//! order; identities are reported as `computed = |error|` against
//! `bound = tolerance`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::basis::{hermite_multi, MultiIndex};
use crate::bellman::{
    beta_branches, beta_eval, beta_grad_t, case1_sufficient, case_polynomial_check, hessian_form, ineq34_check,
    log_grid, mollified_B, BellmanError, BellmanParams, Mollifier,
};
use crate::kernels::{
    gaussian_first_moment, gaussian_first_moment_quadrature, heat_apply, mehler_kernel, prop1_exact_chain,
    prop1_numeric, prop2_bound, prop2_numeric, resolvent_apply, resolvent_kernel_mass, s_apply_kernel, s_column_mass,
    sech_power_integral, sech_power_quadrature, tau_root, KernelConfig, KernelError,
};
use crate::normlab::{
    apply_s, bilinear_embedding_lhs, bilinear_time_grid, conjugate, lp_norm, lp_norm_vec, p_star, random_function,
    riesz_star_factorization, sample_points, sweep_cell, theorem2_chain_check, triangle_decomposition, u_l2_norm,
    NormError, NormGrid, NormSweepConfig, Operator,
};
use crate::report::{sort_reports, Report};
use crate::spectral::{
    apply_multiplier, delta, delta_star, eigenvalue, lemma3_closed_form, lemma3_lhs, lemma3_rhs, lemma3_time_grid,
    multiply_coordinate, partial, riesz, riesz_prime, riesz_star, shifted_eigenvalue, sqrt_series_coeffs, u_multiplier,
    u_via_series, Multiplier, SpectralError, SpectralFn, SpectralVecFn,
};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("suite {suite} supports d <= {max}, got d = {dim}")]
    UnsupportedDimension { suite: Suite, dim: usize, max: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Bellman(#[from] BellmanError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Algebra,
    Kernels,
    Bellman,
    Lemma3,
    NormSweep,
    Bilinear,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Algebra, Suite::Kernels, Suite::Bellman, Suite::Lemma3, Suite::NormSweep, Suite::Bilinear];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "verify-algebra",
            Suite::Kernels => "verify-kernels",
            Suite::Bellman => "verify-bellman",
            Suite::Lemma3 => "verify-lemma3",
            Suite::NormSweep => "norm-sweep",
            Suite::Bilinear => "bilinear-check",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| SuiteError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub exponents: Vec<f64>,
    pub degree: u32,
    pub samples: usize,
    pub seed: u64,
    pub rel_tol: f64,
    pub ops: Vec<Operator>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dims: vec![1, 2, 3],
            exponents: vec![1.25, 1.5, 2.0, 3.0, 4.0, 8.0],
            degree: 6,
            samples: 50,
            seed: 42,
            rel_tol: 1e-8,
            ops: Operator::all(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), SuiteError> {
        let bad = |m: &str| Err(SuiteError::Config(m.to_string()));
        if self.dims.is_empty() || self.dims.contains(&0) {
            return bad("dims must be a nonempty list of positive integers");
        }
        if self.exponents.is_empty() || self.exponents.iter().any(|p| !(*p >= 1.0) || !p.is_finite()) {
            return bad("exponents must be finite and >= 1");
        }
        if self.degree == 0 {
            return bad("degree must be >= 1");
        }
        if self.samples == 0 {
            return bad("samples must be >= 1");
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return bad("rel_tol must lie in (0, 1e-4]");
        }
        if self.ops.is_empty() {
            return bad("at least one operator is required");
        }
        Ok(())
    }

    fn dims_up_to(&self, suite: Suite, max: usize) -> Result<Vec<usize>, SuiteError> {
        match self.dims.iter().find(|&&d| d > max) {
            Some(&dim) => Err(SuiteError::UnsupportedDimension { suite, dim, max }),
            None => Ok(self.dims.clone()),
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}

/// Runs one suite (or all of them) and returns its reports in canonical order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    cfg.validate()?;
    let mut out = match suite {
        Suite::Algebra => algebra_suite(cfg)?,
        Suite::Kernels => kernel_suite(cfg)?,
        Suite::Bellman => bellman_suite(cfg)?,
        Suite::Lemma3 => lemma3_suite(cfg)?,
        Suite::NormSweep => norm_sweep_suite(cfg)?,
        Suite::Bilinear => bilinear_suite(cfg)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, cfg)?);
            }
            all
        }
    };
    sort_reports(&mut out);
    Ok(out)
}

const EXACT: f64 = 1e-12;

fn identity(claim: &str, params: Vec<(&str, String)>, error: f64, tol: f64) -> Report {
    Report::new(claim, params, error, tol, 0.0)
}

fn dparam(d: usize) -> Vec<(&'static str, String)> {
    vec![("d", d.to_string())]
}

fn worst(acc: &mut f64, v: f64) {
    if v.is_nan() || v > *acc {
        *acc = v;
    }
}

// ---------------------------------------------------------------- algebra

pub fn algebra_suite(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let mut out = Vec::new();
    for &d in &cfg.dims {
        let params = || {
            let mut p = dparam(d);
            p.push(("degree", cfg.degree.to_string()));
            p
        };
        let basis = MultiIndex::all_up_to(d, cfg.degree);
        let (mut ladder, mut fact, mut diff, mut comm, mut number, mut shifted, mut eig) =
            (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for n in &basis {
            let h = SpectralFn::basis(n.clone());
            let mut down_sum = SpectralFn::zero(d);
            let mut up_sum = SpectralFn::zero(d);
            for i in 0..d {
                let ni = n.get(i) as f64;
                let expected_down = match n.lowered(i) {
                    Some(m) => SpectralFn::basis(m).scaled((2.0 * ni).sqrt()),
                    None => SpectralFn::zero(d),
                };
                let expected_up = SpectralFn::basis(n.raised(i)).scaled((2.0 * (ni + 1.0)).sqrt());
                worst(&mut ladder, delta(i, &h)?.max_abs_diff(&expected_down)?);
                worst(&mut ladder, delta_star(i, &h)?.max_abs_diff(&expected_up)?);

                let star_delta = delta_star(i, &delta(i, &h)?)?;
                let delta_star_ = delta(i, &delta_star(i, &h)?)?;
                worst(&mut fact, star_delta.max_abs_diff(&h.scaled(2.0 * ni))?);
                worst(&mut fact, delta_star_.max_abs_diff(&h.scaled(2.0 * ni + 2.0))?);

                // -d^2 + x^2 -+ 1 through the exact derivative and coordinate maps
                let second = partial(i, &partial(i, &h)?)?;
                let xx = multiply_coordinate(i, &multiply_coordinate(i, &h)?)?;
                let schrodinger = xx.add_scaled(&second, -1.0)?;
                worst(&mut diff, star_delta.max_abs_diff(&schrodinger.add_scaled(&h, -1.0)?)?);
                worst(&mut diff, delta_star_.max_abs_diff(&schrodinger.add_scaled(&h, 1.0)?)?);

                worst(&mut comm, star_delta.add_scaled(&delta_star_, -1.0)?.max_abs_diff(&h.scaled(-2.0))?);
                down_sum = down_sum.add_scaled(&star_delta, 1.0)?;
                up_sum = up_sum.add_scaled(&delta_star_, 1.0)?;
            }
            let l = down_sum.add_scaled(&h, d as f64)?;
            let l_prime = up_sum.add_scaled(&h, d as f64)?;
            let l_mult = apply_multiplier(&Multiplier::eigenvalue(), &h);
            worst(&mut number, l.max_abs_diff(&h.scaled(eigenvalue(n.order(), d)))?);
            worst(&mut number, l.max_abs_diff(&l_mult)?);
            worst(&mut shifted, l_prime.max_abs_diff(&l.add_scaled(&h, 2.0 * d as f64)?)?);
            worst(&mut shifted, l_prime.max_abs_diff(&apply_multiplier(&Multiplier::shifted_eigenvalue(), &h))?);
            let k = n.order() as f64;
            worst(&mut eig, (eigenvalue(n.order(), d) - (2.0 * k + d as f64)).abs());
            worst(&mut eig, (shifted_eigenvalue(n.order(), d) - (2.0 * k + 3.0 * d as f64)).abs());
            worst(&mut eig, (l.coeff(n) - (2.0 * k + d as f64)).abs());
            worst(&mut eig, (l_prime.coeff(n) - (2.0 * k + 3.0 * d as f64)).abs());
        }
        out.push(identity("algebra.ladder", params(), ladder, EXACT));
        out.push(identity("algebra.factorization", params(), fact, EXACT));
        out.push(identity("algebra.factorization_differential", params(), diff, EXACT));
        out.push(identity("algebra.commutator", params(), comm, EXACT));
        out.push(identity("algebra.number_operator", params(), number, EXACT));
        out.push(identity("algebra.shifted_operator", params(), shifted, EXACT));
        out.push(identity("algebra.eigenvalues", params(), eig, EXACT));

        // <h_n, R*_1 h_k> = <R_1 h_n, h_k>, equal to (2 n_1 / (2|n| + d))^{1/2} at k = n - e_1
        let (mut adj, mut value) = (0.0, 0.0);
        let images: Vec<(SpectralFn, SpectralFn)> = basis
            .iter()
            .map(|n| {
                let h = SpectralFn::basis(n.clone());
                Ok((riesz(0, &h)?, riesz_star(0, &h)?))
            })
            .collect::<Result<_, SpectralError>>()?;
        for (n, (r_n, _)) in basis.iter().zip(&images) {
            for (k, (_, rs_k)) in basis.iter().zip(&images) {
                let left = rs_k.coeff(n);
                let right = r_n.coeff(k);
                worst(&mut adj, (left - right).abs());
            }
            if let Some(k) = n.lowered(0) {
                let expected = (2.0 * n.get(0) as f64 / eigenvalue(n.order(), d)).sqrt();
                let left = images[basis.iter().position(|m| *m == k).expect("lowered index is in range")].1.coeff(n);
                worst(&mut value, (left - expected).abs());
                worst(&mut value, (r_n.coeff(&k) - expected).abs());
            }
        }
        out.push(identity("algebra.adjoint", params(), adj, EXACT));
        out.push(identity("algebra.adjoint_value", params(), value, EXACT));
        if d == 1 {
            let mut same = 0.0;
            for n in &basis {
                let h = SpectralFn::basis(n.clone());
                worst(&mut same, riesz_prime(0, &h)?.max_abs_diff(&riesz_star(0, &h)?)?);
            }
            out.push(identity("algebra.rprime_is_rstar_d1", params(), same, EXACT));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- lemma 3

pub fn lemma3_suite(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let dims = cfg.dims_up_to(Suite::Lemma3, 3)?;
    let mut out = Vec::new();
    for d in dims {
        let grid = lemma3_time_grid(d);
        let degree = cfg.degree.min(4);
        let (mut identity_err, mut closed_err, mut pairs) = (0.0, 0.0, 0usize);
        let mut check = |axis: usize, f: &SpectralFn, g: &SpectralFn| -> Result<(), SuiteError> {
            let lhs = lemma3_lhs(axis, f, g)?;
            let rhs = lemma3_rhs(axis, f, g, &grid)?;
            let closed = lemma3_closed_form(axis, f, g)?;
            worst(&mut identity_err, (lhs - rhs).abs());
            worst(&mut closed_err, (closed - rhs).abs());
            pairs += 1;
            Ok(())
        };
        for n in MultiIndex::all_up_to(d, degree) {
            for axis in 0..d {
                let f = SpectralFn::basis(n.clone());
                check(axis, &f, &SpectralFn::basis(n.raised(axis)))?;
                // a pair with vanishing pairing
                check(axis, &f, &f)?;
            }
        }
        for k in 0..cfg.samples.min(10) {
            let f = random_function(d, degree, cfg.seed, 2 * k);
            let g = random_function(d, degree + 1, cfg.seed, 2 * k + 1);
            check(k % d, &f, &g)?;
        }
        let mut params = dparam(d);
        params.push(("pairs", pairs.to_string()));
        out.push(identity("lemma3.identity", params.clone(), identity_err, 1e-8));
        out.push(identity("lemma3.closed_form", params, closed_err, 1e-8));
    }
    Ok(out)
}

// ---------------------------------------------------------------- kernels

fn random_point(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-radius..radius)).collect()
}

/// A point of norm `r` along `(1, ..., 1)`.
fn diagonal_point(d: usize, r: f64) -> Vec<f64> {
    vec![r / (d as f64).sqrt(); d]
}

pub fn kernel_suite(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let dims = cfg.dims_up_to(Suite::Kernels, 3)?;
    let mut out = Vec::new();
    let mut rng = cfg.rng(11);

    let mut chain: f64 = 0.0;
    for d in 1..=50 {
        worst(&mut chain, (prop1_exact_chain(d)? - 1.0).abs());
    }
    out.push(identity("prop1.exact_chain", [("d", "1..50".to_string())].to_vec(), chain, 1e-12));
    let mut sech: f64 = 0.0;
    for d in 1..=10 {
        worst(&mut sech, (sech_power_integral(d)? - sech_power_quadrature(d)?).abs());
    }
    out.push(identity("special.sech_power", [("d", "1..10".to_string())].to_vec(), sech, 1e-10));

    let tau = tau_root();
    out.push(identity("tau.interval", Vec::new(), (tau - 0.955).abs(), 0.005));
    out.push(identity("tau.residual", Vec::new(), ((2.0 * tau).tanh() - tau).abs(), 1e-12));

    // partial sums of sum c_n increase to 1
    let coeffs = sqrt_series_coeffs(1_000_000);
    let mut partial_sum = 0.0;
    let mut decreases = 0usize;
    for c in &coeffs {
        let next = partial_sum + c;
        if next <= partial_sum {
            decreases += 1;
        }
        partial_sum = next;
    }
    out.push(identity("u_multiplier.series_monotone", [("n", "1e6".to_string())].to_vec(), decreases as f64, 0.0));
    out.push(identity("u_multiplier.series_deficit", [("n", "1e6".to_string())].to_vec(), 1.0 - partial_sum, 2e-3));
    let h0 = SpectralFn::basis([0]);
    let series = u_via_series(1.0, 100, &h0)?.max_abs_diff(&u_multiplier(1.0, &h0)?)?;
    out.push(identity(
        "u_multiplier.series_limit",
        [("N", "100"), ("a", "1"), ("lambda", "1")].map(|(k, v)| (k, v.to_string())).to_vec(),
        series,
        5e-3,
    ));

    for d in dims {
        let kcfg = KernelConfig::new(d).with_rel_tol(cfg.rel_tol);
        let dp = || dparam(d);

        // symmetry and positivity of K_t
        let (mut sym, mut neg) = (0.0, 0.0f64);
        for _ in 0..50 {
            let x = random_point(&mut rng, d, 4.0);
            let y = random_point(&mut rng, d, 4.0);
            let t = 10f64.powf(rng.random_range(-2.0..1.5));
            let a = mehler_kernel(t, &x, &y)?;
            let b = mehler_kernel(t, &y, &x)?;
            worst(&mut sym, (a - b).abs() / a.abs().max(f64::MIN_POSITIVE));
            neg = neg.max(-a).max(-b);
        }
        out.push(identity("kernel.symmetry", dp(), sym, 1e-13));
        out.push(identity("kernel.positivity", dp(), neg, 0.0));

        // heat semigroup against e^{-t lambda_n}
        let mut heat = 0.0;
        for n in MultiIndex::all_up_to(d, 5) {
            for t in [0.1, 0.5, 1.0, 2.0] {
                let x = random_point(&mut rng, d, 2.5);
                let v = heat_apply(t, &SpectralFn::basis(n.clone()), &x)?;
                let expected = (-t * eigenvalue(n.order(), d)).exp() * hermite_multi(&n, &x).expect("dims agree");
                worst(&mut heat, (v - expected).abs());
            }
        }
        out.push(identity("heat.oracle", dp(), heat, 1e-8));

        let mut moment = 0.0;
        for k in [0.5, 1.0, 2.0] {
            worst(&mut moment, (gaussian_first_moment(d, k)? - gaussian_first_moment_quadrature(d, k)?).abs());
        }
        out.push(identity("special.gaussian_moment", dp(), moment, 1e-9));

        for r in [0.0, 0.5, 1.0, 2.5, 5.0] {
            let y = diagonal_point(d, r);
            let v = prop1_numeric(d, &y, &kcfg)?;
            let mut p = dp();
            p.push(("|y|", r.to_string()));
            out.push(Report::new("prop1.bound", p, v, 1.0, 1e-6));
        }

        for r in [0.1, 1.0, 5.0, 20.0] {
            let x = diagonal_point(d, r);
            let v = prop2_numeric(d, &x, &kcfg)?;
            let mut p = dp();
            p.push(("|x|", r.to_string()));
            out.push(Report::new("prop2.row_mass", p, v, prop2_bound(), 1e-6));
        }

        for r in [0.3, 1.0, 3.0] {
            let y = diagonal_point(d, r);
            let column = s_column_mass(&y, &kcfg)?;
            let row = prop2_numeric(d, &y, &kcfg)?;
            let excess = prop1_numeric(d, &y, &kcfg)?;
            let mut p = dp();
            p.push(("|y|", r.to_string()));
            out.push(Report::new(
                "s_kernel.column_vs_row",
                p.clone(),
                column,
                row + excess,
                10.0 * cfg.rel_tol * (row + excess),
            ));
            out.push(Report::new("s_kernel.column_mass", p, column, 3.0, 1e-6));
        }

        for a in [0.5, 1.0, 5.0] {
            let mut mass: f64 = 0.0;
            for r in [0.0, 1.0, 4.0] {
                mass = mass.max(resolvent_kernel_mass(a, &diagonal_point(d, r), &kcfg)?);
            }
            let mut p = dp();
            p.push(("a", a.to_string()));
            out.push(Report::new("u_multiplier.resolvent_mass", p.clone(), mass, 1.0 / (2.0 * a), 1e-8));
            let f = random_function(d, 3, cfg.seed, 900 + d);
            let resolved = apply_multiplier(&Multiplier::eigenvalue_power(2.0 * a, -1.0), &f);
            let mut err: f64 = 0.0;
            for _ in 0..3 {
                let x = random_point(&mut rng, d, 2.0);
                let spectral = crate::spectral::synthesize(&resolved, std::slice::from_ref(&x))?[0];
                worst(&mut err, (resolvent_apply(a, &f, &x, &kcfg)? - spectral).abs());
            }
            out.push(identity("u_multiplier.resolvent_oracle", p, err, 1e-6));
        }

        // S through the kernel against S through the spectrum
        let f = SpectralFn::basis(MultiIndex::zero(d))
            .add_scaled(&SpectralFn::basis(MultiIndex::unit(d, 0).raised(0)), 1.0)?;
        let mut s_err = 0.0;
        for _ in 0..4 {
            let x = random_point(&mut rng, d, 2.5);
            let spectral = apply_s(&f, std::slice::from_ref(&x))?[0];
            worst(&mut s_err, (spectral - s_apply_kernel(&f, &x, &kcfg)?).abs());
        }
        out.push(identity("s_operator.kernel_vs_spectral", dp(), s_err, 1e-6));
    }
    Ok(out)
}

// ---------------------------------------------------------------- bellman

pub fn bellman_suite(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let mut out = Vec::new();
    let mut rng = cfg.rng(23);
    let grid = log_grid(-3.0, 3.0, 61);
    for p in [2.0, 2.5, 3.0, 4.0, 8.0] {
        let b = BellmanParams::new(p)?;
        let pp = || vec![("p", p.to_string())];
        let mut seam: f64 = 0.0;
        for _ in 0..1000 {
            let s: f64 = 10f64.powf(rng.random_range(-2.0..1.0));
            let t = s.powf(p / b.q);
            let (one, two) = beta_branches(s, t, &b);
            worst(&mut seam, (one - two).abs() / one.max(1.0));
        }
        out.push(identity("bellman.seam", pp(), seam, 1e-12));

        let (mut growth, mut grad) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let c = b.gradient_constant();
        for &s in &grid {
            for &t in &grid {
                let v = beta_eval(s, t, &b)?;
                let cap = (1.0 + b.gamma) * (s.powf(p) + t.powf(b.q));
                growth = growth.max((v - cap) / cap).max(-v);
                let g = beta_grad_t(s, t, &b)?;
                let cap = c * t.powf(b.q - 1.0);
                grad = grad.max((g - cap) / cap).max(-g);
            }
        }
        let mut gp = pp();
        gp.push(("points", (grid.len() * grid.len()).to_string()));
        out.push(Report::new("bellman.growth", gp.clone(), growth, 0.0, 1e-14));
        gp.push(("C", c.to_string()));
        out.push(Report::new("bellman.gradient", gp, grad, 0.0, 1e-14));
    }

    let moll = Mollifier::standard(1, 1)?;
    for p in [2.0, 3.0] {
        let b = BellmanParams::new(p)?;
        for kappa in [0.05, 0.1] {
            let (mut deficit, mut accepted, mut negative) = (f64::NEG_INFINITY, 0usize, 0.0f64);
            while accepted < 1000 {
                let z = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
                let (sp, tq) = (f64::abs(z[0]).powf(b.p), f64::abs(z[1]).powf(b.q));
                if (sp - tq).abs() < 0.05 * (sp + tq) {
                    continue;
                }
                accepted += 1;
                let w = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                let form = hessian_form(&z, &w, kappa, &b, &moll)?;
                deficit = deficit.max(b.gamma * w[0].abs() * w[1].abs() - form);
                negative = negative.max(-mollified_B(&z, kappa, &b, &moll)?);
            }
            let params = vec![("p", p.to_string()), ("kappa", kappa.to_string()), ("samples", accepted.to_string())];
            out.push(Report::new("bellman.hessian", params.clone(), deficit, 0.0, 1e-5));
            out.push(Report::new("bellman.mollified_nonnegative", params, negative, 0.0, 0.0));
        }
    }

    let norms = log_grid(-2.0, 2.0, 25);
    let with_zero: Vec<f64> = std::iter::once(0.0).chain(norms.iter().copied()).collect();
    for d in [2usize, 3, 4, 8] {
        for q in [1.1, 1.5, 2.0] {
            let b = BellmanParams::new(q / (q - 1.0))?;
            let (mut margin, mut case1, mut points) = (f64::INFINITY, f64::INFINITY, 0usize);
            for x in [0.0, 1.0, 10.0] {
                for &s in &with_zero {
                    for &t in &with_zero {
                        margin = margin.min(ineq34_check(x, s, t, d, &b)?.margin);
                        points += 1;
                    }
                }
            }
            for &s in &with_zero {
                for &t in &with_zero {
                    case1 = case1.min(case1_sufficient(d, s, t, &b));
                }
            }
            let params = vec![("d", d.to_string()), ("q", q.to_string()), ("points", points.to_string())];
            out.push(Report::new("bellman.ineq34", params.clone(), -margin, 0.0, 1e-12));
            out.push(Report::new("bellman.case1", params, -case1, 0.0, 1e-12));
        }
    }
    let mut poly: f64 = 0.0;
    let mut sign = f64::NEG_INFINITY;
    for d in [2usize, 3, 4, 5, 8, 16] {
        for k in 0..=20 {
            let q = 1.0 + k as f64 / 20.0;
            let r = case_polynomial_check(d, q);
            let scale = 1.0 + r.expanded.abs();
            worst(&mut poly, ((r.expanded + r.factored).abs() / scale).max((r.reduced - r.expanded).abs() / scale));
            sign = sign.max(r.factored);
        }
    }
    out.push(identity("bellman.case_polynomial_identity", Vec::new(), poly, 1e-12));
    out.push(Report::new("bellman.case_polynomial_sign", Vec::<(String, String)>::new(), sign, 0.0, 1e-12));
    Ok(out)
}

// ---------------------------------------------------------------- norm sweep

fn sweep_config(cfg: &SuiteConfig) -> NormSweepConfig {
    NormSweepConfig {
        dims: cfg.dims.clone(),
        exponents: cfg.exponents.clone(),
        degree: cfg.degree,
        layout: None,
        samples: cfg.samples,
        seed: cfg.seed,
    }
}

pub fn norm_sweep_suite(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let dims = cfg.dims_up_to(Suite::NormSweep, 3)?;
    let sweep = sweep_config(cfg);
    let mut out = Vec::new();
    for &op in &cfg.ops {
        let exponents: Vec<f64> = cfg.exponents.iter().copied().filter(|&p| op.bound(p).is_some()).collect();
        if exponents.is_empty() {
            continue;
        }
        for &d in &dims {
            let cells = sweep_cell(op, d, &exponents, &sweep)?;
            for cell in &cells {
                out.push(cell.report(cfg.degree, cfg.seed));
                if let (Operator::U(a), true) = (op, cell.p == 2.0) {
                    let exact = u_l2_norm(a, d, cfg.degree);
                    let params = vec![("a", a.to_string()), ("d", d.to_string()), ("samples", cfg.samples.to_string())];
                    out.push(Report::new("u_multiplier.l2", params, cell.max_ratio, exact, 10.0 * cell.parseval_error));
                }
            }
        }
    }
    for &d in &dims {
        out.push(identity(
            "riesz_star.factorization",
            vec![("d", d.to_string()), ("degree", "6".to_string())],
            riesz_star_factorization(d, 6)?,
            1e-14,
        ));
        let mut excess = 0.0;
        let mut sum_error = 0.0;
        let mut r2_error = 0.0;
        for k in 0..cfg.samples.min(10) {
            let f = random_function(d, cfg.degree, cfg.seed, 500 + k);
            let points = sample_points(d, 200, 5.0, cfg.seed.wrapping_add(k as u64));
            let c = triangle_decomposition(&f, &points)?;
            let scale = c.scale.max(1.0);
            worst(&mut excess, c.triangle_excess / scale);
            worst(&mut sum_error, c.sum_error / scale);
            worst(&mut r2_error, c.r2_error / scale);
        }
        let p = || dparam(d);
        out.push(Report::new("riesz_tilde.triangle", p(), excess, 0.0, 1e-10));
        out.push(identity("riesz_tilde.decomposition", p(), sum_error, 1e-10));
        out.push(identity("riesz_tilde.r2_modulus", p(), r2_error, 1e-10));
    }
    Ok(out)
}

// ---------------------------------------------------------------- bilinear

/// Pairs `(f, g)` with `g` a `d`-vector, degree `<= degree`, reproducible in `seed`.
pub fn random_pair(dim: usize, degree: u32, seed: u64, index: usize) -> (SpectralFn, SpectralVecFn) {
    let base = 1000 + index * (dim + 1);
    let f = random_function(dim, degree, seed, base);
    let g = (0..dim).map(|i| random_function(dim, degree, seed, base + 1 + i)).collect();
    (f, SpectralVecFn::new(g).expect("components share the dimension"))
}

pub const BILINEAR_PAIRS: usize = 10;

pub fn bilinear_suite(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let dims: Vec<usize> = cfg.dims.iter().copied().filter(|d| *d == 2).collect();
    let mut out = Vec::new();
    let degree = cfg.degree.min(4);
    for d in dims {
        let grid = NormGrid::for_degree(d, degree + 1, 24, 8)?;
        let u = bilinear_time_grid(d, 16, 8);
        let pairs = BILINEAR_PAIRS.max(cfg.samples.min(BILINEAR_PAIRS));
        for k in 0..pairs {
            let (f, g) = random_pair(d, degree, cfg.seed, k);
            let lhs = bilinear_embedding_lhs(&f, &g, &grid, &u)?;
            if k == 0 {
                let fine = bilinear_embedding_lhs(
                    &f,
                    &g,
                    &NormGrid::for_degree(d, degree + 1, 48, 8)?,
                    &bilinear_time_grid(d, 32, 8),
                )?;
                out.push(identity(
                    "bilinear.self_convergence",
                    vec![("d", d.to_string()), ("pair", k.to_string())],
                    (lhs - fine).abs() / fine,
                    1e-4,
                ));
            }
            for p in [2.0, 4.0] {
                let rhs = 6.0
                    * (p_star(p) - 1.0)
                    * lp_norm(&f, p, &grid)?.value
                    * lp_norm_vec(&g, conjugate(p), &grid)?.value;
                let params = vec![
                    ("d", d.to_string()),
                    ("p", p.to_string()),
                    ("pair", k.to_string()),
                    ("degree", degree.to_string()),
                ];
                out.push(Report::new("bilinear.embedding", params.clone(), lhs, rhs, 0.0));
                let chain = theorem2_chain_check(&f, &g, p, &grid)?;
                for mut r in [chain.chain, chain.bound] {
                    r.params.insert("pair".into(), k.to_string());
                    r.params.insert("degree".into(), degree.to_string());
                    out.push(r);
                }
            }
        }
    }
    Ok(out)
}
