//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the verdict lines are always shown.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cube_sobolev::ball::{ball_lambda_star, ball_minimizer};
use cube_sobolev::codes::{asymptotic_rate_bound, code_size_bound};
use cube_sobolev::cube::CubeFunction;
use cube_sobolev::series::{verify_coefficient_properties, verify_hprop_series};
use cube_sobolev::special::{alpha, c_alpha, c_explicit, phi, psi, xi, LN_2};
use cube_sobolev::spectral::lambda_star_value;
use cube_sobolev::subset::{is_subcube, SubsetSpec};
use cube_sobolev::verify::{
    mixed_generators, run_suite, scan_all_subsets, tightness_rows, Inequality,
};
use cube_sobolev::log_sobolev_constant;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn c_endpoints_and_agreement() -> Outcome {
    let c_top = 2.0 / LN_2;
    let mut ok = true;
    for c in [c_alpha, c_explicit] {
        ok &= (c(0.0).unwrap() - 2.0).abs() <= 1e-9;
        ok &= (c(LN_2).unwrap() - c_top).abs() <= 1e-9;
    }
    let max_diff = grid(0.0, LN_2, 10_000)
        .into_iter()
        .map(|t| (c_alpha(t).unwrap() - c_explicit(t).unwrap()).abs())
        .fold(0.0, f64::max);
    outcome(
        ok && max_diff <= 1e-9,
        format!("max |c_alpha - c_explicit| = {max_diff:.2e} on 10^4 points"),
    )
}

/// Counts violations of monotone increase and of the requested convexity
/// (`sign = 1`) or concavity (`sign = -1`) on a uniform grid.
fn shape_violations(f: impl Fn(f64) -> f64, lo: f64, hi: f64, sign: f64) -> usize {
    const SLACK: f64 = 1e-6;
    let v: Vec<f64> = grid(lo, hi, 1000).into_iter().map(f).collect();
    let monotone = v.windows(2).filter(|w| w[1] < w[0] - SLACK).count();
    let curvature = v
        .windows(3)
        .filter(|w| sign * (w[0] - 2.0 * w[1] + w[2]) < -SLACK)
        .count();
    monotone + curvature
}

/// Name, function, right end of the grid on `[0, end]`, curvature sign.
type ShapeCase = (&'static str, Box<dyn Fn(f64) -> f64>, f64, f64);

fn shape_properties() -> Outcome {
    let cases: [ShapeCase; 5] = [
        ("psi concave", Box::new(|t| psi(t).unwrap()), 1.0, -1.0),
        ("xi concave", Box::new(|t| xi(t).unwrap()), 1.0, -1.0),
        ("phi convex", Box::new(|y| phi(y).unwrap()), 2.0 * LN_2, 1.0),
        ("alpha convex", Box::new(|y| alpha(y).unwrap()), LN_2, 1.0),
        ("c convex", Box::new(|t| c_explicit(t).unwrap()), LN_2, 1.0),
    ];
    let mut total = 0;
    let mut parts = Vec::new();
    for (name, f, hi, sign) in cases {
        let v = shape_violations(f, 0.0, hi, sign);
        total += v;
        parts.push(format!("{name}: {v}"));
    }
    outcome(total == 0, format!("violations {}", parts.join(", ")))
}

fn coefficient_properties() -> Outcome {
    let report = verify_coefficient_properties(60).unwrap();
    outcome(
        report.all_passed(),
        format!(
            "k_max = 60: {} checks, {} violations",
            report.checks().len(),
            report.violations()
        ),
    )
}

fn hprop_series() -> Outcome {
    let report = verify_hprop_series(200).unwrap();
    let first = report
        .failures()
        .next()
        .map(|c| format!(", first at {} ({})", c.name, c.lhs))
        .unwrap_or_default();
    outcome(
        report.all_passed(),
        format!(
            "k_max = 200: {} coefficients, {} negative{first}",
            report.checks().len(),
            report.violations()
        ),
    )
}

fn one_dimensional_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = rng.random::<f64>().sqrt();
        let f = CubeFunction::new(1, vec![1.0 - s, 1.0 + s]).unwrap();
        let (k2, ent) = (f.k2(), f.entropy_sq().unwrap());
        let rhs = 4.0 * k2 * phi((ent / k2).min(2.0 * LN_2)).unwrap();
        worst = worst.max((f.d2() - rhs).abs());
    }
    outcome(worst <= 1e-10, format!("max |D^2 - 4 K^2 phi| = {worst:.2e} over 10^3 t"))
}

fn inequality_suites() -> Outcome {
    let generators = mixed_generators(100_000, 10, 0).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for ineq in Inequality::ALL {
        let report = run_suite(ineq, &generators, 0);
        ok &= report.all_passed();
        parts.push(format!("{} {}/{}", ineq.suite_name(), report.violations(), report.checks().len()));
    }
    outcome(ok, format!("10^5 functions, violations/checks: {}", parts.join(", ")))
}

fn exhaustive_faber_krahn() -> Outcome {
    let scan = scan_all_subsets(4, 0).unwrap();
    let row = &scan.table[7];
    let witness: Vec<u32> = (0..16).filter(|v| row.witness_mask >> v & 1 == 1).collect();
    let min_frac = scan
        .table
        .iter()
        .filter(|r| r.m == 8)
        .map(|r| r.frac_boundary(4))
        .fold(f64::INFINITY, f64::min);
    let ok = scan.report.checks().len() == 65_535
        && scan.report.all_passed()
        && row.m == 8
        && (min_frac - 1.0).abs() <= 1e-9
        && is_subcube(&witness);
    outcome(
        ok,
        format!(
            "{} subsets, {} violations; m = 8 frac boundary {min_frac:.12} witnessed by 0x{:04x}",
            scan.report.checks().len(),
            scan.report.violations(),
            row.witness_mask
        ),
    )
}

fn spectral_identities() -> Outcome {
    let mut subcube_err: f64 = 0.0;
    let mut radial_err: f64 = 0.0;
    let mut singleton_ok = true;
    for n in 1..=12 {
        for t in 0..=n {
            let lambda = lambda_star_value(&SubsetSpec::subcube(n, t).unwrap()).unwrap();
            subcube_err = subcube_err.max((lambda - 2.0 * t as f64).abs());
        }
        let single = lambda_star_value(&SubsetSpec::mask(n, [0]).unwrap()).unwrap();
        singleton_ok &= single == 2.0 * n as f64;
        for r in 1..=n {
            let full = lambda_star_value(&SubsetSpec::ball(n, r).unwrap()).unwrap();
            radial_err = radial_err.max((ball_lambda_star(n, r).unwrap() - full).abs());
        }
    }
    outcome(
        subcube_err <= 1e-9 && radial_err <= 1e-8 && singleton_ok,
        format!(
            "subcube err {subcube_err:.2e}, radial vs full err {radial_err:.2e}, singleton exact: {singleton_ok}"
        ),
    )
}

fn ball_tightness_trend() -> Outcome {
    let rows = tightness_rows(&[500, 1000, 2000, 4000], 0.11).unwrap();
    let positive = rows.iter().all(|r| r.gap > 0.0);
    let decreasing = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let last = rows.last().unwrap();
    let relative = last.gap / last.fk_per_n;
    let gaps: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.gap)).collect();
    outcome(
        positive && decreasing && relative < 0.05,
        format!("gaps [{}], n = 4000 gap / fk = {relative:.4}", gaps.join(", ")),
    )
}

fn log_sobolev_tightness() -> Outcome {
    let f = ball_minimizer(20, 4).unwrap().to_cube_function().unwrap();
    let rho = f.rho().unwrap();
    let rhs = log_sobolev_constant(rho).unwrap() * f.entropy_sq().unwrap();
    let ratio = f.d2() / rhs;
    outcome(ratio <= 1.25, format!("rho = {rho:.4}, D^2 / (C(rho) Ent) = {ratio:.4}"))
}

fn first_lp_bound() -> Outcome {
    let res = code_size_bound(2000, 200).unwrap();
    let h2 = asymptotic_rate_bound(0.1).unwrap();
    // binary entropy of 0.2, in bits
    let reference = -(0.2f64 * 0.2f64.log2() + 0.8 * 0.8f64.log2());
    let radius_ratio = res.critical_radius as f64 / 2000.0;
    let ok = (radius_ratio - 0.2).abs() <= 0.01
        && (res.rate_bound_bits - reference).abs() <= 0.02
        && (h2 - reference).abs() <= 1e-6;
    outcome(
        ok,
        format!(
            "r/n = {radius_ratio:.4}, rate {:.5} vs H2(0.2) = {reference:.5}, asymptotic {h2:.7}",
            res.rate_bound_bits
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1", "C endpoints and representation agreement", c_endpoints_and_agreement, Duration::from_secs(5)),
        ("2", "shape of psi, xi, phi, alpha, C", shape_properties, Duration::from_secs(5)),
        ("3a", "coefficient properties and closed forms", coefficient_properties, Duration::from_secs(30)),
        ("3b", "stronger-form series coefficients nonnegative", hprop_series, Duration::from_secs(30)),
        ("4", "one-dimensional equality", one_dimensional_equality, Duration::from_secs(1)),
        ("5", "inequality suites on generated functions", inequality_suites, Duration::from_secs(600)),
        ("6", "exhaustive Faber-Krahn at n = 4", exhaustive_faber_krahn, Duration::from_secs(900)),
        ("7", "spectral identities", spectral_identities, Duration::from_secs(300)),
        ("8", "ball tightness trend", ball_tightness_trend, Duration::from_secs(60)),
        ("9", "log-Sobolev tightness witness", log_sobolev_tightness, Duration::from_secs(60)),
        ("10", "first linear programming bound", first_lp_bound, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (id, title, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let ok = result.ok && elapsed <= budget;
        failed += usize::from(!ok);
        println!(
            "criterion {id:>3} {}: {title} -- {} [{:.2} s, budget {} s]",
            if ok { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
