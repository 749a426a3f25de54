//! Exact rational power series for the coefficient argument behind the
//! convexity of `C`.
//!
//! With `L1(x) = log((1+x)/(1-x))` and `L2(x) = L1(x^2)`, the convexity
//! inequality becomes `F(x) > G(x)` where
//!
//! ```text
//! F = (3 - x^2)(1 + x^2) L1 L2 + 2x (1 + x^2) L2
//! G = 2x (1 - x^2) L1^2 + 4x L2^2 + 4x^2 L1
//! ```
//!
//! Both sides are odd; `F = 4 sum ell_{2k+1} x^{2k+1}` and
//! `G = 4 sum r_{2k+1} x^{2k+1}`. The truncated expansions here are the
//! ground truth that the closed-form coefficient formulas are checked
//! against. Everything is exact; there are no tolerances in this module.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::verify::report::{CheckRecord, VerificationReport};

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// A power series truncated after `x^degree`, with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); degree + 1],
        }
    }

    /// Builds a (truncated) polynomial from `(power, numerator, denominator)` terms.
    pub fn polynomial(degree: usize, terms: &[(usize, i64, i64)]) -> Self {
        let mut s = Self::zero(degree);
        for &(p, num, den) in terms {
            if p <= degree {
                s.coeffs[p] += rat(num, den);
            }
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^power`; zero beyond the truncation degree.
    pub fn coeff(&self, power: usize) -> BigRational {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, power: usize, value: BigRational) {
        if power <= self.degree() {
            self.coeffs[power] = value;
        }
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplication by `x^shift`, truncated at the same degree.
    pub fn shift(&self, shift: usize) -> Self {
        let mut out = Self::zero(self.degree());
        for (p, c) in self.coeffs.iter().enumerate() {
            if p + shift <= out.degree() {
                out.coeffs[p + shift] = c.clone();
            }
        }
        out
    }

    /// Substitution `x -> x^2`, truncated at the same degree.
    pub fn square_argument(&self) -> Self {
        let mut out = Self::zero(self.degree());
        for (p, c) in self.coeffs.iter().enumerate() {
            if 2 * p <= out.degree() {
                out.coeffs[2 * p] = c.clone();
            }
        }
        out
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;

    fn add(self, rhs: &RationalSeries) -> RationalSeries {
        let degree = self.degree().min(rhs.degree());
        RationalSeries {
            coeffs: (0..=degree)
                .map(|p| &self.coeffs[p] + &rhs.coeffs[p])
                .collect(),
        }
    }
}

impl Sub for &RationalSeries {
    type Output = RationalSeries;

    fn sub(self, rhs: &RationalSeries) -> RationalSeries {
        let degree = self.degree().min(rhs.degree());
        RationalSeries {
            coeffs: (0..=degree)
                .map(|p| &self.coeffs[p] - &rhs.coeffs[p])
                .collect(),
        }
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;

    fn neg(self) -> RationalSeries {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;

    /// Cauchy product truncated at the smaller of the two degrees.
    fn mul(self, rhs: &RationalSeries) -> RationalSeries {
        let degree = self.degree().min(rhs.degree());
        let mut out = RationalSeries::zero(degree);
        for (i, a) in self.coeffs.iter().enumerate().take(degree + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(degree + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

/// `x^{2k+1}` coefficients of `F/4` and `G/4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffPair {
    pub k: usize,
    pub ell: BigRational,
    pub r: BigRational,
}

fn series_degree(k_max: usize) -> Result<usize> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    Ok(2 * k_max + 1)
}

/// `log((1+x)/(1-x)) = 2 sum x^{2k+1} / (2k+1)`, through `x^{2 k_max + 1}`.
pub fn l1_series(k_max: usize) -> Result<RationalSeries> {
    let degree = series_degree(k_max)?;
    let mut s = RationalSeries::zero(degree);
    for k in 0..=k_max {
        s.coeffs[2 * k + 1] = rat(2, 2 * k as i64 + 1);
    }
    Ok(s)
}

/// `L1(x^2)`, truncated at the same degree as [`l1_series`].
pub fn l2_series(k_max: usize) -> Result<RationalSeries> {
    Ok(l1_series(k_max)?.square_argument())
}

/// Left-hand side `(3 - x^2)(1 + x^2) L1 L2 + 2x (1 + x^2) L2`.
pub fn f_series(k_max: usize) -> Result<RationalSeries> {
    let d = series_degree(k_max)?;
    let l1 = l1_series(k_max)?;
    let l2 = l2_series(k_max)?;
    let quartic = RationalSeries::polynomial(d, &[(0, 3, 1), (2, 2, 1), (4, -1, 1)]);
    let cubic = RationalSeries::polynomial(d, &[(1, 2, 1), (3, 2, 1)]);
    let l1l2 = &l1 * &l2;
    Ok(&(&quartic * &l1l2) + &(&cubic * &l2))
}

/// Right-hand side `2x (1 - x^2) L1^2 + 4x L2^2 + 4x^2 L1`.
pub fn g_series(k_max: usize) -> Result<RationalSeries> {
    let d = series_degree(k_max)?;
    let l1 = l1_series(k_max)?;
    let l2 = l2_series(k_max)?;
    let a = RationalSeries::polynomial(d, &[(1, 2, 1), (3, -2, 1)]);
    let b = RationalSeries::polynomial(d, &[(1, 4, 1)]);
    let c = RationalSeries::polynomial(d, &[(2, 4, 1)]);
    let t1 = &a * &(&l1 * &l1);
    let t2 = &b * &(&l2 * &l2);
    let t3 = &c * &l1;
    Ok(&(&t1 + &t2) + &t3)
}

/// `ell_{2k+1}`, `r_{2k+1}` for `0 <= k <= k_max`, read off the expansions.
pub fn coefficient_pairs(k_max: usize) -> Result<Vec<CoeffPair>> {
    let f = f_series(k_max)?;
    let g = g_series(k_max)?;
    let quarter = rat(1, 4);
    Ok((0..=k_max)
        .map(|k| CoeffPair {
            k,
            ell: f.coeff(2 * k + 1) * &quarter,
            r: g.coeff(2 * k + 1) * &quarter,
        })
        .collect())
}

/// `sum_{m=1}^{upper} 1 / (a m + b)`.
fn harmonic(upper: usize, a: i64, b: i64) -> BigRational {
    (1..=upper as i64).fold(BigRational::zero(), |acc, m| acc + rat(1, a * m + b))
}

fn check_closed_form_index(k: usize) -> Result<i64> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "closed forms start at k = 3, got k = {k}; read k <= 2 from the series"
        )));
    }
    Ok(k as i64)
}

/// Closed form for `ell_{2k+1}`, `k >= 3`.
///
/// The three harmonic sums run over denominators `1 mod 4`, `3 mod 4` and
/// all odd numbers; which of the first two carries the `(8k-20)` weight
/// depends on the parity of `k`.
pub fn explicit_ell(k: usize) -> Result<BigRational> {
    let kk = check_closed_form_index(k)?;
    let weight_a = rat(8 * kk - 20, (2 * kk - 3) * (2 * kk + 1));
    let weight_b = rat(4, 2 * kk - 1);
    let weight_c = rat(3, 2 * kk + 1) + rat(2, 2 * kk - 1) - rat(1, 2 * kk - 3);
    let three_mod_four = harmonic((k - 1) / 2, 4, -1);
    if k % 2 == 1 {
        let one_mod_four = harmonic((k - 1) / 2, 4, -3);
        let odd = harmonic((k - 1) / 2, 2, -1);
        let tail = rat(1, kk) + rat(3, kk * (2 * kk + 1)) + rat(6, (2 * kk - 1) * (2 * kk + 1));
        Ok(weight_a * one_mod_four + weight_b * three_mod_four + weight_c * odd + tail)
    } else {
        let one_mod_four = harmonic(k / 2, 4, -3);
        let odd = harmonic((k - 2) / 2, 2, -1);
        let tail = rat(1, kk - 1)
            + rat(6, (2 * kk - 1) * (2 * kk + 1))
            + rat(10 * kk - 1, (kk - 1) * (2 * kk - 1) * (2 * kk + 1));
        Ok(weight_a * three_mod_four + weight_b * one_mod_four + weight_c * odd + tail)
    }
}

/// Closed form for `r_{2k+1}`, `k >= 3`.
pub fn explicit_r(k: usize) -> Result<BigRational> {
    let kk = check_closed_form_index(k)?;
    let base = rat(2 * kk + 2, kk * (2 * kk - 1)) - rat(2, kk * (kk - 1)) * harmonic(k - 1, 2, -1);
    if k % 2 == 1 {
        Ok(base)
    } else {
        Ok(rat(8, kk) * harmonic(k / 2, 2, -1) + base)
    }
}

fn rational_witness(k: usize, ell: &BigRational, r: &BigRational) -> serde_json::Value {
    json!({
        "k": k,
        "ell": ell.to_string(),
        "r": r.to_string(),
        "margin": (ell - r).to_string(),
    })
}

/// Runs the coefficient properties on an explicit list of pairs (indexed
/// by `k` from 0). Separated from [`verify_coefficient_properties`] so that
/// perturbed inputs can be checked.
pub fn check_coefficient_pairs(pairs: &[CoeffPair]) -> VerificationReport {
    let k_max = pairs.len().saturating_sub(1);
    let mut report = VerificationReport::new("series", 0).with_param("kmax", k_max);

    // (1) nonnegativity
    for p in pairs {
        for (label, v) in [("ell", &p.ell), ("r", &p.r)] {
            report.push(
                CheckRecord::from_bool(
                    format!("nonneg_{label}[k={}]", p.k),
                    !v.is_negative(),
                    to_f64(v),
                    0.0,
                )
                .with_witness_on_fail(|| rational_witness(p.k, &p.ell, &p.r)),
            );
        }
    }

    // (2) low-order values
    let expected = [(0usize, 0i64), (1, 4), (2, 4)];
    for (k, value) in expected {
        if let Some(p) = pairs.get(k) {
            let target = rat(value, 1);
            for (label, v) in [("ell", &p.ell), ("r", &p.r)] {
                report.push(
                    CheckRecord::from_bool(
                        format!("low_order_{label}[k={k}]"),
                        *v == target,
                        to_f64(v),
                        value as f64,
                    )
                    .with_witness_on_fail(|| rational_witness(k, &p.ell, &p.r)),
                );
            }
        }
    }

    // (3) odd k >= 3: strict dominance, singly and in consecutive pairs
    for k in (3..=k_max).step_by(2) {
        let p = &pairs[k];
        report.push(
            CheckRecord::from_bool(
                format!("ell_gt_r[k={k}]"),
                p.ell > p.r,
                to_f64(&p.ell),
                to_f64(&p.r),
            )
            .with_witness(rational_witness(k, &p.ell, &p.r)),
        );
        if let Some(q) = pairs.get(k + 1) {
            let lhs = &p.ell + &q.ell;
            let rhs = &p.r + &q.r;
            report.push(
                CheckRecord::from_bool(
                    format!("pair_sum[k={k}]"),
                    lhs > rhs,
                    to_f64(&lhs),
                    to_f64(&rhs),
                )
                .with_witness(json!({
                    "k": k,
                    "lhs": lhs.to_string(),
                    "rhs": rhs.to_string(),
                    "margin": (&lhs - &rhs).to_string(),
                })),
            );
        }
    }

    // (4) closed forms agree with the expansion
    for p in pairs.iter().filter(|p| p.k >= 3) {
        let ell = explicit_ell(p.k).expect("k >= 3");
        let r = explicit_r(p.k).expect("k >= 3");
        for (label, closed, series) in [("ell", &ell, &p.ell), ("r", &r, &p.r)] {
            report.push(
                CheckRecord::from_bool(
                    format!("closed_form_{label}[k={}]", p.k),
                    closed == series,
                    to_f64(closed),
                    to_f64(series),
                )
                .with_witness_on_fail(|| {
                    json!({"k": p.k, "closed_form": closed.to_string(), "series": series.to_string()})
                }),
            );
        }
    }
    report
}

/// Checks nonnegativity, the low-order values, odd-`k` dominance and
/// closed-form agreement for every `k <= k_max`.
pub fn verify_coefficient_properties(k_max: usize) -> Result<VerificationReport> {
    if k_max < 5 {
        return Err(Error::InvalidParameter(format!(
            "k_max must be at least 5, got {k_max}"
        )));
    }
    Ok(check_coefficient_pairs(&coefficient_pairs(k_max)?))
}

/// Coefficientwise check that `series - 2x` has zero linear term and
/// nonnegative coefficients otherwise.
fn check_dominates_2x(suite: &str, series: &RationalSeries, k_max: usize) -> VerificationReport {
    let mut report = VerificationReport::new(suite, 0).with_param("kmax", k_max);
    for (p, c) in series.coeffs().iter().enumerate() {
        let c = if p == 1 { c - rat(2, 1) } else { c.clone() };
        let (ok, name) = if p == 1 {
            (c.is_zero(), format!("linear_term_zero[x^{p}]"))
        } else {
            (!c.is_negative(), format!("coeff_nonneg[x^{p}]"))
        };
        report.push(
            CheckRecord::from_bool(name, ok, to_f64(&c), 0.0)
                .with_witness_on_fail(|| json!({"power": p, "coefficient": c.to_string()})),
        );
    }
    report
}

/// Expansion of `t^3 L2 + (1 - t^4) L1 - 2t`.
pub fn hprop_series(k_max: usize) -> Result<RationalSeries> {
    let d = series_degree(k_max)?;
    let l1 = l1_series(k_max)?;
    let l2 = l2_series(k_max)?;
    let one_minus_t4 = RationalSeries::polynomial(d, &[(0, 1, 1), (4, -1, 1)]);
    Ok(&l2.shift(3) + &(&one_minus_t4 * &l1))
}

/// Expansion of `(1 + t^2) t^3 L2 + (1 - t^4) L1`, the form in which
/// `(1 - t^2) h' >= t h''` is equivalent to dominating `2t`.
pub fn hprop_required_series(k_max: usize) -> Result<RationalSeries> {
    let d = series_degree(k_max)?;
    let l1 = l1_series(k_max)?;
    let l2 = l2_series(k_max)?;
    let one_minus_t4 = RationalSeries::polynomial(d, &[(0, 1, 1), (4, -1, 1)]);
    let t3_plus_t5 = RationalSeries::polynomial(d, &[(3, 1, 1), (5, 1, 1)]);
    Ok(&(&t3_plus_t5 * &l2) + &(&one_minus_t4 * &l1))
}

/// Coefficientwise check of `t^3 L2 + (1 - t^4) L1 >= 2t` through `x^{2 k_max + 1}`.
pub fn verify_hprop_series(k_max: usize) -> Result<VerificationReport> {
    if k_max < 3 {
        return Err(Error::InvalidParameter(format!(
            "k_max must be at least 3, got {k_max}"
        )));
    }
    Ok(check_dominates_2x("hprop", &hprop_series(k_max)?, k_max))
}

/// Coefficientwise check of `(1 + t^2) t^3 L2 + (1 - t^4) L1 >= 2t`.
pub fn verify_hprop_required_series(k_max: usize) -> Result<VerificationReport> {
    if k_max < 3 {
        return Err(Error::InvalidParameter(format!(
            "k_max must be at least 3, got {k_max}"
        )));
    }
    Ok(check_dominates_2x(
        "hprop-required",
        &hprop_required_series(k_max)?,
        k_max,
    ))
}

/// Evaluates a truncated series at a float point (Horner).
pub fn eval_f64(series: &RationalSeries, x: f64) -> f64 {
    series
        .coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + to_f64(c))
}
