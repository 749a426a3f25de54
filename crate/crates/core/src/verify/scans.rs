//! Exhaustive subset scans, the ball tightness sweep, and fine-grid checks
//! on the smallest cubes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::ball::{ball_lambda_star, fk_rhs};
use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::spectral::lambda_star_value;
use crate::subset::SubsetSpec;

use super::checks::{check_fk_value, check_technical};
use super::report::{CheckRecord, VerificationReport};

/// Largest dimension for which every subset is enumerated.
pub const MAX_SCAN_DIM: usize = 4;

/// Ties within this margin keep the earlier (smaller) mask as witness.
const IMPROVEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRow {
    /// Cardinality.
    pub m: usize,
    pub lambda_min: f64,
    /// Membership bitmask over vertices: bit `v` set iff vertex `v` is in the set.
    pub witness_mask: u64,
    /// `lambda*` of a Hamming ball with exactly `m` vertices, if one exists.
    pub ball_lambda: Option<f64>,
    /// `lambda*` of a subcube with exactly `m` vertices, if one exists.
    pub subcube_lambda: Option<f64>,
}

impl ExtremalRow {
    pub fn frac_boundary(&self, n: usize) -> f64 {
        self.m as f64 / (1u64 << n) as f64 * self.lambda_min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetScan {
    pub n: usize,
    pub report: VerificationReport,
    pub table: Vec<ExtremalRow>,
}

impl SubsetScan {
    pub fn table_csv(&self) -> String {
        let width = ((1usize << self.n) / 4).max(1);
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
        let mut out = String::from("m,lambda_min,witness_mask,ball_lambda,subcube_lambda\n");
        for row in &self.table {
            out.push_str(&format!(
                "{},{:.12},0x{:0width$x},{},{}\n",
                row.m,
                row.lambda_min,
                row.witness_mask,
                opt(row.ball_lambda),
                opt(row.subcube_lambda),
            ));
        }
        out
    }
}

fn mask_vertices(bits: u64) -> impl Iterator<Item = u32> {
    (0..64u32).filter(move |v| bits >> v & 1 == 1)
}

/// Evaluates `lambda*` and the Faber-Krahn check on every nonempty subset of
/// the `n`-cube, and tabulates the smallest `lambda*` per cardinality.
pub fn scan_all_subsets(n: usize, seed: u64) -> Result<SubsetScan> {
    if n == 0 || n > MAX_SCAN_DIM {
        return Err(Error::InvalidParameter(format!(
            "exhaustive scan needs 1 <= n <= {MAX_SCAN_DIM}, got {n}"
        )));
    }
    let size = 1usize << n;
    let count: u64 = (1u64 << size) - 1;
    let lambdas: Vec<(u64, usize, f64)> = (1..=count)
        .into_par_iter()
        .map(|bits| {
            let spec = SubsetSpec::mask(n, mask_vertices(bits))?;
            Ok((bits, bits.count_ones() as usize, lambda_star_value(&spec)?))
        })
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new("fk-scan", seed)
        .with_param("n", n)
        .with_param("subsets", count);
    let mut best: Vec<Option<(f64, u64)>> = vec![None; size + 1];
    for &(bits, m, lambda) in &lambdas {
        let check = check_fk_value(n, (m as f64).ln(), lambda);
        report.push(
            CheckRecord {
                name: format!("faber_krahn[mask=0x{bits:x}]"),
                ..check
            }
            .with_witness_on_fail(|| json!({"n": n, "mask": bits})),
        );
        match best[m] {
            Some((current, _)) if lambda >= current - IMPROVEMENT_TOL => {}
            _ => best[m] = Some((lambda, bits)),
        }
    }

    let ball_sizes: Vec<(usize, f64)> = (0..=n)
        .map(|r| {
            let spec = SubsetSpec::ball(n, r)?;
            let m = spec.cardinality().expect("small cube") as usize;
            Ok((m, ball_lambda_star(n, r)?))
        })
        .collect::<Result<_>>()?;
    let table = (1..=size)
        .map(|m| {
            let (lambda_min, witness_mask) = best[m].expect("every cardinality occurs");
            ExtremalRow {
                m,
                lambda_min,
                witness_mask,
                ball_lambda: ball_sizes.iter().find(|b| b.0 == m).map(|b| b.1),
                subcube_lambda: m
                    .is_power_of_two()
                    .then(|| 2.0 * (n - m.trailing_zeros() as usize) as f64),
            }
        })
        .collect();
    Ok(SubsetScan { n, report, table })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessRow {
    pub n: usize,
    pub r: usize,
    /// `lambda*(B) / n`.
    pub lambda_per_n: f64,
    /// `fk_rhs / n`.
    pub fk_per_n: f64,
    pub gap: f64,
}

/// Balls of radius `round(ratio * n)` against the Faber-Krahn bound, with
/// `n_list` sorted ascending.
pub fn tightness_rows(n_list: &[usize], ratio: f64) -> Result<Vec<TightnessRow>> {
    if !(ratio > 0.0 && ratio < 0.5) {
        return Err(Error::Domain {
            name: "ratio",
            value: ratio,
            domain: "(0, 1/2)",
        });
    }
    if n_list.is_empty() {
        return Err(Error::InvalidParameter("n_list is empty".into()));
    }
    if let Some(&n) = n_list.iter().find(|&&n| n < 100) {
        return Err(Error::InvalidParameter(format!(
            "tightness sweep needs n >= 100, got {n}"
        )));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter()
        .map(|&n| {
            let r = (ratio * n as f64).round() as usize;
            let lambda = ball_lambda_star(n, r)?;
            let fk = fk_rhs(n, SubsetSpec::ball(n, r)?.log_cardinality())?;
            let nf = n as f64;
            Ok(TightnessRow {
                n,
                r,
                lambda_per_n: lambda / nf,
                fk_per_n: fk / nf,
                gap: (lambda - fk) / nf,
            })
        })
        .collect()
}

pub fn tightness_sweep(n_list: &[usize], ratio: f64, seed: u64) -> Result<VerificationReport> {
    let rows = tightness_rows(n_list, ratio)?;
    let mut report = VerificationReport::new("tightness", seed)
        .with_param("ratio", ratio)
        .with_param("rows", serde_json::to_value(&rows).expect("rows serialize"));
    for row in &rows {
        report.push(CheckRecord::from_bool(
            format!("gap_positive[n={}]", row.n),
            row.gap > 0.0,
            row.gap,
            0.0,
        ));
    }
    if rows.len() < 2 {
        report.push(CheckRecord::skipped("gap_decreasing"));
    }
    for w in rows.windows(2) {
        report.push(CheckRecord::from_bool(
            format!("gap_decreasing[n={}->{}]", w[0].n, w[1].n),
            w[1].gap < w[0].gap,
            w[1].gap,
            w[0].gap,
        ));
    }
    Ok(report)
}

/// Runs the technical inequality on every nonnegative function on `{0,1}^n`
/// (`n <= 2`) with values in `{0, 1/steps, ..., 1}`, and records the
/// smallest normalized margin `(D^2 - 4 K^2 phi) / E f^2` in the params.
pub fn fine_grid_technical(n: usize, steps: usize, seed: u64) -> Result<VerificationReport> {
    if !(1..=2).contains(&n) || steps == 0 {
        return Err(Error::InvalidParameter(format!(
            "fine grid needs n in 1..=2 and steps >= 1, got n = {n}, steps = {steps}"
        )));
    }
    let size = 1usize << n;
    let levels = steps + 1;
    let total = levels.pow(size as u32);
    let records: Vec<(CheckRecord, Option<f64>)> = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let values: Vec<f64> = (0..size)
                .map(|_| {
                    let v = (c % levels) as f64 / steps as f64;
                    c /= levels;
                    v
                })
                .collect();
            let f = CubeFunction::new(n, values.clone()).expect("grid values are finite");
            let check = check_technical(&f);
            let margin = (!f.is_zero()).then(|| (check.lhs - check.rhs) / f.mean_sq());
            let check = CheckRecord {
                name: format!("technical[grid#{code}]"),
                ..check
            }
            .with_witness_on_fail(|| json!({"n": n, "values": values}));
            (check, margin)
        })
        .collect();
    let min_margin = records
        .iter()
        .filter_map(|r| r.1)
        .fold(f64::INFINITY, f64::min);
    let mut report = VerificationReport::new("tech-grid", seed)
        .with_param("n", n)
        .with_param("steps", steps)
        .with_param("min_normalized_margin", min_margin);
    report.extend(records.into_iter().map(|r| r.0));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scans() {
        let scan = scan_all_subsets(2, 0).unwrap();
        assert_eq!(scan.report.checks().len(), 15);
        assert!(scan.report.all_passed());
        let lambdas: Vec<f64> = scan.table.iter().map(|r| r.lambda_min).collect();
        assert_eq!(lambdas[0], 4.0);
        assert!((lambdas[1] - 2.0).abs() < 1e-12);
        assert!(lambdas[3].abs() < 1e-12);
        assert!(scan_all_subsets(5, 0).is_err());
    }

    #[test]
    fn csv_layout() {
        let scan = scan_all_subsets(2, 0).unwrap();
        let csv = scan.table_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("m,lambda_min,witness_mask,ball_lambda,subcube_lambda"));
        assert_eq!(lines.next(), Some("1,4.000000000000,0x1,4.000000000000,4.000000000000"));
    }

    #[test]
    fn sweep_validation() {
        assert!(tightness_rows(&[50], 0.1).is_err());
        assert!(tightness_rows(&[200], 0.5).is_err());
        let single = tightness_sweep(&[200], 0.11, 0).unwrap();
        assert!(single.all_passed());
        assert_eq!(single.count(super::super::report::Status::Skipped), 1);
    }

    #[test]
    fn grid_n1_touches_equality() {
        let r = fine_grid_technical(1, 40, 0).unwrap();
        assert!(r.all_passed());
        let margin = r.params["min_normalized_margin"].as_f64().unwrap();
        assert!(margin.abs() < 1e-9, "{margin}");
    }
}
