//! Pointwise inequality checks and the generated-function suites.
//!
//! Every inequality compared here is homogeneous of degree two in `f`, so
//! the additive slack is `1e-9 * n * E f^2` throughout.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::ball::fk_rhs;
use crate::cube::CubeFunction;
use crate::error::{clamp_domain, Error, Result};
use crate::special::{log_sobolev_constant, phi, LN_2};
use crate::spectral::lambda_star_value;
use crate::subset::SubsetSpec;

use super::generator::FunctionGenerator;
use super::report::{CheckRecord, Status, VerificationReport};

pub const RELATIVE_SLACK: f64 = 1e-9;

pub fn slack(f: &CubeFunction) -> f64 {
    RELATIVE_SLACK * f.n() as f64 * f.mean_sq()
}

/// A domain error in an intermediate ratio means an upstream inequality
/// already failed; it is recorded as a failure of this check.
fn domain_failure(name: &str, err: Error) -> CheckRecord {
    let (lhs, rhs) = match err {
        Error::Domain { value, .. } => (value, f64::NAN),
        _ => (f64::NAN, f64::NAN),
    };
    CheckRecord::from_bool(name, false, lhs, rhs)
}

/// `D^2(|f|) >= C(rho) Ent(f^2)`.
///
/// Evaluated on `|f|`: `Ent` and `rho` do not see the sign while
/// `D^2(|f|) <= D^2(f)`, so this is the sharper form of the statement.
pub fn check_log_sobolev(f: &CubeFunction) -> CheckRecord {
    const NAME: &str = "log_sobolev";
    if f.is_zero() {
        return CheckRecord::skipped(NAME);
    }
    let g = f.abs();
    let result = (|| {
        let ent = g.entropy_sq()?;
        let c = log_sobolev_constant(g.rho()?)?;
        Ok(CheckRecord::at_least(NAME, g.d2(), c * ent, slack(f)))
    })();
    result.unwrap_or_else(|e| domain_failure(NAME, e))
}

/// `Ent(f^2) <= 2 log 2 K^2(f)` for `f >= 0` (signed input is folded).
pub fn check_ent_k2(f: &CubeFunction) -> CheckRecord {
    const NAME: &str = "ent_k2";
    if f.is_zero() {
        return CheckRecord::skipped(NAME);
    }
    let g = f.abs();
    match g.entropy_sq() {
        Ok(ent) => CheckRecord::at_least(NAME, 2.0 * LN_2 * g.k2(), ent, slack(f)),
        Err(e) => domain_failure(NAME, e),
    }
}

/// `D^2(f) >= 4 K^2(f) phi(Ent(f^2) / K^2(f))` for `f >= 0` (signed input is folded).
pub fn check_technical(f: &CubeFunction) -> CheckRecord {
    const NAME: &str = "technical";
    if f.is_zero() {
        return CheckRecord::skipped(NAME);
    }
    let g = f.abs();
    let result = (|| {
        let k2 = g.k2();
        let ratio = clamp_domain(
            "Ent/K^2",
            g.entropy_sq()? / k2,
            0.0,
            2.0 * LN_2,
            "[0, 2 log 2]",
        )?;
        Ok(CheckRecord::at_least(
            NAME,
            g.d2(),
            4.0 * k2 * phi(ratio)?,
            slack(f),
        ))
    })();
    result.unwrap_or_else(|e| domain_failure(NAME, e))
}

/// The two halves of the functional isoperimetric inequality, with
/// `rho = (1/n) log(E f^2 / E^2 |f|)`:
/// `Ent(f^2) >= E f^2 log(E f^2 / E^2|f|)` and
/// `D^2(f) >= C(rho) E f^2 log(E f^2 / E^2|f|)`.
pub fn check_functional_isop(f: &CubeFunction) -> [CheckRecord; 2] {
    const ENT: &str = "isop_entropy";
    const ISOP: &str = "isop";
    if f.is_zero() {
        return [CheckRecord::skipped(ENT), CheckRecord::skipped(ISOP)];
    }
    let m = f.mean_sq();
    let a = f.mean_abs();
    let log_ratio = (m / (a * a)).ln().max(0.0);
    let rhs_base = m * log_ratio;
    let s = slack(f);
    let ent = match f.entropy_sq() {
        Ok(ent) => CheckRecord::at_least(ENT, ent, rhs_base, s),
        Err(e) => domain_failure(ENT, e),
    };
    let rho = log_ratio / f.n() as f64;
    let isop = match log_sobolev_constant(rho) {
        Ok(c) => CheckRecord::at_least(ISOP, f.d2(), c * rhs_base, s),
        Err(e) => domain_failure(ISOP, e),
    };
    [ent, isop]
}

/// Slack on the fundamental-tone scale.
pub fn fk_slack(n: usize) -> f64 {
    RELATIVE_SLACK * n as f64
}

/// `lambda*(A) >= fk_rhs(n, log |A|)` for a precomputed `lambda*`.
pub fn check_fk_value(n: usize, log_cardinality: f64, lambda: f64) -> CheckRecord {
    const NAME: &str = "faber_krahn";
    match fk_rhs(n, log_cardinality) {
        Ok(rhs) => CheckRecord::at_least(NAME, lambda, rhs, fk_slack(n)),
        Err(e) => domain_failure(NAME, e),
    }
}

pub fn check_fk(subset: &SubsetSpec) -> Result<CheckRecord> {
    let lambda = lambda_star_value(subset)?;
    Ok(check_fk_value(subset.n(), subset.log_cardinality(), lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    LogSobolev,
    EntK2,
    Technical,
    FunctionalIsop,
}

impl Inequality {
    pub const ALL: [Inequality; 4] = [
        Inequality::LogSobolev,
        Inequality::EntK2,
        Inequality::Technical,
        Inequality::FunctionalIsop,
    ];

    pub fn suite_name(self) -> &'static str {
        match self {
            Inequality::LogSobolev => "logsob",
            Inequality::EntK2 => "entk",
            Inequality::Technical => "tech",
            Inequality::FunctionalIsop => "isop",
        }
    }

    pub fn check(self, f: &CubeFunction) -> Vec<CheckRecord> {
        match self {
            Inequality::LogSobolev => vec![check_log_sobolev(f)],
            Inequality::EntK2 => vec![check_ent_k2(f)],
            Inequality::Technical => vec![check_technical(f)],
            Inequality::FunctionalIsop => check_functional_isop(f).to_vec(),
        }
    }
}

/// `R[f] = D^2(f) / Ent(f^2)`, when the entropy is above rounding level.
pub fn variation_entropy_ratio(f: &CubeFunction) -> Option<f64> {
    let ent = f.entropy_sq().ok()?;
    (ent > slack(f)).then(|| f.d2() / ent)
}

struct Evaluated {
    checks: Vec<CheckRecord>,
    ratio: Option<f64>,
}

fn evaluate(ineq: Inequality, generator: &FunctionGenerator, index: usize) -> Evaluated {
    let f = generator.generate(index);
    let label = format!("{}/n={}/#{index}", generator.kind.name(), generator.n);
    let checks = ineq
        .check(&f)
        .into_iter()
        .map(|mut c| {
            c.name = format!("{}[{label}]", c.name);
            c.with_witness_on_fail(|| generator.witness(index))
        })
        .collect();
    Evaluated {
        checks,
        ratio: variation_entropy_ratio(&f),
    }
}

fn work_items(generators: &[FunctionGenerator]) -> Vec<(usize, usize)> {
    generators
        .iter()
        .enumerate()
        .flat_map(|(g, gen)| (0..gen.count).map(move |i| (g, i)))
        .collect()
}

/// Runs one inequality over every function of every generator.
///
/// Work is split into chunks of `chunk_size` items, each evaluated in
/// parallel and merged in input order, so the report does not depend on
/// the chunking or the number of threads.
pub fn run_suite_chunked(
    ineq: Inequality,
    generators: &[FunctionGenerator],
    seed: u64,
    chunk_size: usize,
) -> VerificationReport {
    let items = work_items(generators);
    let mut report = VerificationReport::new(ineq.suite_name(), seed)
        .with_param("functions", items.len())
        .with_param(
            "generators",
            generators
                .iter()
                .map(|g| json!({"kind": g.kind.name(), "n": g.n, "count": g.count}))
                .collect::<Vec<_>>(),
        );
    let mut min_ratio: Option<f64> = None;
    for chunk in items.chunks(chunk_size.max(1)) {
        let evaluated: Vec<Evaluated> = chunk
            .par_iter()
            .map(|&(g, i)| evaluate(ineq, &generators[g], i))
            .collect();
        let mut part = VerificationReport::new(ineq.suite_name(), seed);
        for e in evaluated {
            if let Some(r) = e.ratio {
                min_ratio = Some(min_ratio.map_or(r, |m: f64| m.min(r)));
            }
            part.extend(e.checks);
        }
        report.merge(part);
    }
    report.set_param("min_variation_entropy_ratio", min_ratio);
    report
}

pub fn run_suite(
    ineq: Inequality,
    generators: &[FunctionGenerator],
    seed: u64,
) -> VerificationReport {
    run_suite_chunked(ineq, generators, seed, 1 << 14)
}

/// Replays a failed check's witness and reports whether it still fails.
pub fn replay_fails(ineq: Inequality, record: &CheckRecord) -> Result<bool> {
    let witness = record
        .witness
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("record has no witness".into()))?;
    let f = super::generator::replay_witness(witness)?;
    let base = record.name.split('[').next().unwrap_or_default();
    Ok(ineq
        .check(&f)
        .iter()
        .any(|c| c.name == base && c.status == Status::Fail))
}
