//! Acceptance run: twelve criteria, evaluated in order on one thread of the
//! test harness so that the runtime limits are measured without contention.
//! Each criterion prints one `[PASS]`/`[FAIL]` line straight to stderr.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hermite_riesz::basis::{hermite_multi, MultiIndex};
use hermite_riesz::kernels::{
    gaussian_first_moment, gaussian_first_moment_quadrature, heat_apply, prop1_exact_chain, prop1_numeric, prop2_bound,
    prop2_numeric, resolvent_kernel_mass, s_apply_kernel, sech_power_integral, sech_power_quadrature, tau_root,
    KernelConfig,
};
use hermite_riesz::normlab::{
    apply_s, random_function, riesz_star_factorization, sample_points, sweep_cell, triangle_decomposition,
    NormSweepConfig, Operator,
};
use hermite_riesz::report::{serialize_reports, Report, ReportFormat};
use hermite_riesz::spectral::{eigenvalue, sqrt_series_coeffs, u_multiplier, u_via_series, SpectralFn};
use hermite_riesz::suites::{
    algebra_suite, bellman_suite, bilinear_suite, lemma3_suite, run_suite, Suite, SuiteConfig,
};

const ALGEBRA_TOL: f64 = 1e-12;
const ALGEBRA_TIME: Duration = Duration::from_secs(10);
const LEMMA3_TOL: f64 = 1e-8;
const LEMMA3_MIN_PAIRS: usize = 20;
const LEMMA3_TIME: Duration = Duration::from_secs(30);
const HEAT_TOL: f64 = 1e-8;
const CHAIN_TOL: f64 = 1e-12;
const SECH_TOL: f64 = 1e-10;
const MOMENT_TOL: f64 = 1e-9;
const PROP1_SLACK: f64 = 1e-6;
const TAU_RESIDUAL: f64 = 1e-12;
const PROP2_SLACK: f64 = 1e-6;
const S_BOUND: f64 = 3.0;
const S_ROUTE_TOL: f64 = 1e-6;
const RESOLVENT_SLACK: f64 = 1e-8;
const SERIES_DEFICIT: f64 = 2e-3;
const U_SERIES_TOL: f64 = 5e-3;
const U_BOUND: f64 = 2.0;
const HESSIAN_SLACK: f64 = 1e-5;
const INEQ34_SLACK: f64 = 1e-12;
const BELLMAN_TIME: Duration = Duration::from_secs(120);
const BILINEAR_CONVERGENCE: f64 = 1e-4;
const ALL_TIME: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;

fn say(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failing(reports: &[Report]) -> Result<(), String> {
    match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(format!("{r}")),
        None => Ok(()),
    }
}

fn max_computed<'a>(reports: impl IntoIterator<Item = &'a Report>) -> f64 {
    reports.into_iter().map(|r| r.computed).fold(0.0, f64::max)
}

fn with_claim<'a>(reports: &'a [Report], claim: &'a str) -> impl Iterator<Item = &'a Report> + 'a {
    reports.iter().filter(move |r| r.claim == claim)
}

fn algebra() -> Outcome {
    let start = Instant::now();
    let cfg = SuiteConfig { dims: vec![1, 2, 3, 4], degree: 6, ..Default::default() };
    let r = algebra_suite(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    failing(&r)?;
    for claim in [
        "algebra.ladder",
        "algebra.factorization",
        "algebra.commutator",
        "algebra.shifted_operator",
        "algebra.eigenvalues",
        "algebra.adjoint",
        "algebra.adjoint_value",
    ] {
        ensure(with_claim(&r, claim).count() == 4, || format!("{claim} missing for some d"))?;
    }
    let worst = max_computed(&r);
    ensure(worst <= ALGEBRA_TOL, || format!("max error {worst:e}"))?;
    ensure(elapsed < ALGEBRA_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!("d<=4, |n|<=6: max error {worst:.1e} (tol {ALGEBRA_TOL:e}), {:.2} s", elapsed.as_secs_f64()))
}

fn lemma3() -> Outcome {
    let start = Instant::now();
    let cfg = SuiteConfig { dims: vec![1, 2, 3], ..Default::default() };
    let r = lemma3_suite(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    failing(&r)?;
    let pairs: usize = with_claim(&r, "lemma3.identity").map(|x| x.params["pairs"].parse::<usize>().unwrap()).sum();
    let identity = max_computed(with_claim(&r, "lemma3.identity"));
    let closed = max_computed(with_claim(&r, "lemma3.closed_form"));
    ensure(pairs >= LEMMA3_MIN_PAIRS, || format!("only {pairs} pairs"))?;
    ensure(identity < LEMMA3_TOL && closed < LEMMA3_TOL, || format!("errors {identity:e}, {closed:e}"))?;
    ensure(elapsed < LEMMA3_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{pairs} pairs: |lhs - rhs| {identity:.1e}, |closed - rhs| {closed:.1e} (tol {LEMMA3_TOL:e}), {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn heat() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for d in 1..=2 {
        for n in MultiIndex::all_up_to(d, 5) {
            for t in [0.1, 0.5, 1.0, 2.0] {
                for x in sample_points(d, 2, 2.5, 17 + count as u64) {
                    let v = heat_apply(t, &SpectralFn::basis(n.clone()), &x).map_err(|e| e.to_string())?;
                    let exact = (-t * eigenvalue(n.order(), d)).exp() * hermite_multi(&n, &x).unwrap();
                    worst = worst.max((v - exact).abs());
                    count += 1;
                }
            }
        }
    }
    ensure(worst < HEAT_TOL, || format!("max error {worst:e}"))?;
    Ok(format!("{count} evaluations: max error {worst:.1e} (tol {HEAT_TOL:e})"))
}

fn special_integrals() -> Outcome {
    let mut chain: f64 = 0.0;
    for d in 1..=50 {
        chain = chain.max((prop1_exact_chain(d).map_err(|e| e.to_string())? - 1.0).abs());
    }
    let mut sech: f64 = 0.0;
    for d in 1..=10 {
        let closed = sech_power_integral(d).map_err(|e| e.to_string())?;
        sech = sech.max((closed - sech_power_quadrature(d).map_err(|e| e.to_string())?).abs());
    }
    let mut moment: f64 = 0.0;
    for d in 1..=3 {
        for k in [0.5, 1.0, 2.0] {
            let closed = gaussian_first_moment(d, k).map_err(|e| e.to_string())?;
            moment = moment.max((closed - gaussian_first_moment_quadrature(d, k).map_err(|e| e.to_string())?).abs());
        }
    }
    ensure(chain <= CHAIN_TOL, || format!("chain {chain:e}"))?;
    ensure(sech <= SECH_TOL, || format!("sech {sech:e}"))?;
    ensure(moment <= MOMENT_TOL, || format!("moment {moment:e}"))?;
    Ok(format!("chain {chain:.1e} (tol {CHAIN_TOL:e}), sech {sech:.1e} (tol {SECH_TOL:e}), moment {moment:.1e} (tol {MOMENT_TOL:e})"))
}

fn diagonal(d: usize, r: f64) -> Vec<f64> {
    vec![r / (d as f64).sqrt(); d]
}

fn prop1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for d in 1..=3 {
        let cfg = KernelConfig::new(d);
        for r in [0.0, 0.5, 1.0, 2.5, 5.0] {
            let v = prop1_numeric(d, &diagonal(d, r), &cfg).map_err(|e| e.to_string())?;
            ensure(v <= 1.0 + PROP1_SLACK, || format!("d={d} |y|={r}: {v}"))?;
            worst = worst.max(v);
            count += 1;
        }
    }
    Ok(format!("{count} points, d<=3, |y| in {{0,...,5}}: max {worst:.6} <= 1 + {PROP1_SLACK:e}"))
}

fn prop2() -> Outcome {
    let tau = tau_root();
    let residual = ((2.0 * tau).tanh() - tau).abs();
    ensure((0.95..=0.96).contains(&tau), || format!("tau = {tau}"))?;
    ensure(residual < TAU_RESIDUAL, || format!("residual {residual:e}"))?;
    let bound = prop2_bound();
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        let cfg = KernelConfig::new(d);
        for r in [0.1, 1.0, 5.0, 20.0] {
            let v = prop2_numeric(d, &diagonal(d, r), &cfg).map_err(|e| e.to_string())?;
            ensure(v <= bound + PROP2_SLACK, || format!("d={d} |x|={r}: {v}"))?;
            worst = worst.max(v);
        }
    }
    Ok(format!("tau = {tau:.12} (residual {residual:.1e}); row mass max {worst:.6} <= {bound:.7} + {PROP2_SLACK:e}"))
}

fn s_operator() -> Outcome {
    let cfg = NormSweepConfig { samples: 50, ..Default::default() };
    let exponents = [1.0, 1.5, 2.0, 4.0, 8.0];
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        for cell in sweep_cell(Operator::S, d, &exponents, &cfg).map_err(|e| e.to_string())? {
            ensure(cell.max_ratio <= S_BOUND, || format!("d={d} p={}: {}", cell.p, cell.max_ratio))?;
            worst = worst.max(cell.max_ratio);
        }
    }
    let f = SpectralFn::basis([0]).add_scaled(&SpectralFn::basis([2]), 1.0).unwrap();
    let kcfg = KernelConfig::new(1);
    let mut route: f64 = 0.0;
    for x in [-2.3, -0.7, 0.2, 1.1, 3.4] {
        let spectral = apply_s(&f, &[vec![x]]).map_err(|e| e.to_string())?[0];
        let kernel = s_apply_kernel(&f, &[x], &kcfg).map_err(|e| e.to_string())?;
        route = route.max((spectral - kernel).abs());
    }
    ensure(route < S_ROUTE_TOL, || format!("route mismatch {route:e}"))?;
    Ok(format!("15 cells x 50 samples: max ratio {worst:.4} <= {S_BOUND}; kernel vs spectral {route:.1e} (tol {S_ROUTE_TOL:e})"))
}

fn u_multiplier_bounds() -> Outcome {
    let mut mass_gap = f64::NEG_INFINITY;
    for d in 1..=3 {
        let cfg = KernelConfig::new(d);
        for a in [0.5, 1.0, 5.0] {
            for r in [0.0, 1.0, 4.0] {
                let m = resolvent_kernel_mass(a, &diagonal(d, r), &cfg).map_err(|e| e.to_string())?;
                ensure(m <= 1.0 / (2.0 * a) + RESOLVENT_SLACK, || format!("d={d} a={a} |x|={r}: {m}"))?;
                mass_gap = mass_gap.max(m - 1.0 / (2.0 * a));
            }
        }
    }
    let coeffs = sqrt_series_coeffs(1_000_000);
    let mut sum = 0.0;
    for (n, c) in coeffs.iter().enumerate() {
        let next = sum + c;
        ensure(next > sum, || format!("partial sum stalls at n = {}", n + 1))?;
        sum = next;
    }
    let deficit = 1.0 - sum;
    ensure(deficit < SERIES_DEFICIT, || format!("deficit {deficit:e}"))?;
    let h0 = SpectralFn::basis([0]);
    let series = u_via_series(1.0, 100, &h0).unwrap().max_abs_diff(&u_multiplier(1.0, &h0).unwrap()).unwrap();
    ensure(series < U_SERIES_TOL, || format!("series error {series:e}"))?;
    let cfg = NormSweepConfig { samples: 50, ..Default::default() };
    let exponents = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0];
    let mut ratio: f64 = 0.0;
    for a in [0.5, 1.0, 5.0] {
        for d in 1..=3 {
            for cell in sweep_cell(Operator::U(a), d, &exponents, &cfg).map_err(|e| e.to_string())? {
                ensure(cell.max_ratio <= U_BOUND, || format!("a={a} d={d} p={}: {}", cell.p, cell.max_ratio))?;
                ratio = ratio.max(cell.max_ratio);
            }
        }
    }
    Ok(format!(
        "resolvent mass - 1/(2a) max {mass_gap:.2e}; series deficit {deficit:.2e} at 1e6 (tol {SERIES_DEFICIT:e}); \
         U via series {series:.1e}; max U ratio {ratio:.4} <= {U_BOUND}"
    ))
}

fn bellman() -> Outcome {
    let start = Instant::now();
    let r = bellman_suite(&SuiteConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    failing(&r)?;
    let hessian_samples: usize =
        with_claim(&r, "bellman.hessian").map(|x| x.params["samples"].parse::<usize>().unwrap()).sum();
    let kappas: Vec<&str> = with_claim(&r, "bellman.hessian").map(|x| x.params["kappa"].as_str()).collect();
    ensure(kappas.contains(&"0.05") && kappas.contains(&"0.1"), || "kappa values missing".into())?;
    ensure(with_claim(&r, "bellman.hessian").all(|x| x.err == HESSIAN_SLACK), || "hessian slack differs".into())?;
    ensure(hessian_samples >= 1000, || format!("{hessian_samples} hessian samples"))?;
    let points: usize = with_claim(&r, "bellman.ineq34").map(|x| x.params["points"].parse::<usize>().unwrap()).sum();
    ensure(points >= 10_000, || format!("{points} grid points"))?;
    let dims: Vec<&str> = with_claim(&r, "bellman.ineq34").map(|x| x.params["d"].as_str()).collect();
    for d in ["2", "3", "4", "8"] {
        ensure(dims.contains(&d), || format!("d = {d} missing"))?;
    }
    let worst_margin = -with_claim(&r, "bellman.ineq34").map(|x| x.computed).fold(f64::NEG_INFINITY, f64::max);
    ensure(worst_margin >= -INEQ34_SLACK, || format!("margin {worst_margin:e}"))?;
    for claim in ["bellman.seam", "bellman.growth", "bellman.gradient", "bellman.case_polynomial_identity"] {
        ensure(with_claim(&r, claim).count() > 0, || format!("{claim} missing"))?;
    }
    ensure(elapsed < BELLMAN_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} checks; {hessian_samples} hessian samples, {points} drift-inequality points (min margin {worst_margin:.1e}), {:.1} s",
        r.len(),
        elapsed.as_secs_f64()
    ))
}

fn bilinear() -> Outcome {
    let cfg = SuiteConfig { dims: vec![2], ..Default::default() };
    let r = bilinear_suite(&cfg).map_err(|e| e.to_string())?;
    failing(&r)?;
    let embeddings: Vec<&Report> = with_claim(&r, "bilinear.embedding").collect();
    let pairs = embeddings.iter().filter(|x| x.params["p"] == "2").count();
    ensure(pairs >= 10, || format!("{pairs} pairs"))?;
    ensure(embeddings.iter().any(|x| x.params["p"] == "4"), || "p = 4 missing".into())?;
    ensure(embeddings.iter().all(|x| x.params["degree"].parse::<u32>().unwrap() <= 4), || "degree above 4".into())?;
    let conv = max_computed(with_claim(&r, "bilinear.self_convergence"));
    ensure(with_claim(&r, "bilinear.self_convergence").count() > 0 && conv < BILINEAR_CONVERGENCE, || {
        format!("convergence {conv:e}")
    })?;
    let ratio = embeddings.iter().map(|x| x.computed / x.bound).fold(0.0, f64::max);
    Ok(format!("{pairs} pairs, p in {{2,4}}: max lhs/rhs {ratio:.3}; self-convergence {conv:.1e} (tol {BILINEAR_CONVERGENCE:e})"))
}

fn headline(all: &[Report]) -> Outcome {
    let mut summary = Vec::new();
    for (op, factor) in [("Rprime", 36.0), ("Rtilde", 42.0), ("Rstar", 84.0)] {
        let claim = format!("norm.{op}");
        let cells: Vec<&Report> = with_claim(all, &claim).collect();
        ensure(cells.len() >= 3, || format!("{claim}: {} cells", cells.len()))?;
        for c in &cells {
            let p: f64 = c.params["p"].parse().unwrap();
            let bound = factor * (p.max(p / (p - 1.0)) - 1.0);
            ensure((c.bound - bound).abs() <= 1e-12 * bound, || format!("{claim} bound {}", c.bound))?;
            ensure(c.computed <= bound, || format!("{c}"))?;
        }
        summary.push(format!("{op} max {:.3}", max_computed(cells)));
    }
    let mut fact: f64 = 0.0;
    let mut tri: f64 = f64::NEG_INFINITY;
    for d in 1..=3 {
        fact = fact.max(riesz_star_factorization(d, 6).map_err(|e| e.to_string())?);
        for k in 0..5 {
            let f = random_function(d, 6, 2024, k);
            let c = triangle_decomposition(&f, &sample_points(d, 300, 5.0, k as u64)).map_err(|e| e.to_string())?;
            let scale = c.scale.max(1.0);
            tri = tri.max(c.triangle_excess / scale).max(c.sum_error / scale).max(c.r2_error / scale);
        }
    }
    ensure(fact < 1e-14, || format!("factorization {fact:e}"))?;
    ensure(tri <= 1e-10, || format!("triangle {tri:e}"))?;
    Ok(format!("{}; factorization {fact:.1e}; triangle decomposition {tri:.1e} (tol 1e-10)", summary.join(", ")))
}

fn reproducibility(first: &[Report], elapsed: Duration) -> Outcome {
    ensure(elapsed < ALL_TIME, || format!("all took {elapsed:?}"))?;
    let again = run_suite(Suite::All, &SuiteConfig::default()).map_err(|e| e.to_string())?;
    for format in [ReportFormat::Json, ReportFormat::Csv] {
        let a = serialize_reports(first, format).unwrap();
        let b = serialize_reports(&again, format).unwrap();
        ensure(a.as_bytes() == b.as_bytes(), || format!("{format:?} output differs between runs"))?;
    }
    failing(first)?;
    Ok(format!(
        "`all` at defaults: {} reports in {:.1} s, second run byte-identical",
        first.len(),
        elapsed.as_secs_f64()
    ))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(e) => Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    }
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let all = run_suite(Suite::All, &SuiteConfig::default());
    let all_elapsed = start.elapsed();

    let mut results: Vec<(&str, Outcome)> = vec![
        ("algebra identities", guarded(algebra)),
        ("time-integral identity for <R'_i f, g>", guarded(lemma3)),
        ("heat semigroup oracle", guarded(heat)),
        ("special-integral identities", guarded(special_integrals)),
        ("excess mass of the S kernel <= 1", guarded(prop1)),
        ("tau root and S-kernel row mass", guarded(prop2)),
        ("S operator bound 3 and kernel route", guarded(s_operator)),
        ("U_a, resolvent and series bounds", guarded(u_multiplier_bounds)),
        ("Bellman function suite", guarded(bellman)),
        ("bilinear embedding at d = 2", guarded(bilinear)),
    ];
    match &all {
        Ok(reports) => {
            results.push(("Riesz-transform constants, factorization, triangle", guarded(|| headline(reports))));
            results.push(("reproducibility and `all` budget", guarded(|| reproducibility(reports, all_elapsed))));
        }
        Err(e) => {
            results.push(("Riesz-transform constants, factorization, triangle", Err(format!("all suite failed: {e}"))));
            results.push(("reproducibility and `all` budget", Err(format!("all suite failed: {e}"))));
        }
    }

    let mut failed = Vec::new();
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => say(&format!("[PASS] criterion {:>2} {name}: {detail}", i + 1)),
            Err(why) => {
                say(&format!("[FAIL] criterion {:>2} {name}: {why}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
