//! Upper bounds on binary codes of length `n` and minimum distance `d`.
//!
//! A set `A` whose fundamental tone is at most `2(2d + 1)` gives
//! `A(n, d) <= n |A|`. Taking `A` a Hamming ball, the smallest admissible
//! radius reproduces the first linear programming bound.

use serde::{Deserialize, Serialize};

use crate::ball::ball_lambda_star;
use crate::error::{Error, Result};
use crate::special::{entropy_h, LN_2};
use crate::subset::SubsetSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeBoundResult {
    pub n: usize,
    pub d: usize,
    pub critical_radius: usize,
    /// `log |B_r|` (natural log).
    pub log_ball_size: f64,
    /// `log n + log |B_r|`.
    pub log_bound: f64,
    /// `log_bound / (n log 2)`.
    pub rate_bound_bits: f64,
    /// `n/2 - sqrt(d (n - d))`.
    pub reference_radius: f64,
}

fn check_params(n: usize, d: usize) -> Result<()> {
    if d == 0 || 2 * d > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= d <= n/2, got n = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// Fundamental-tone threshold `2(2d + 1)`.
pub fn tone_threshold(d: usize) -> f64 {
    2.0 * (2 * d + 1) as f64
}

/// Smallest `r` with `lambda*(Ball(n, r)) <= 2(2d + 1)`.
pub fn critical_radius(n: usize, d: usize) -> Result<usize> {
    check_params(n, d)?;
    let threshold = tone_threshold(d);
    // lambda* is nonincreasing in r and vanishes at r = n
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ball_lambda_star(n, mid)? <= threshold {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

pub fn code_size_bound(n: usize, d: usize) -> Result<CodeBoundResult> {
    let r = critical_radius(n, d)?;
    let log_ball_size = SubsetSpec::ball(n, r)?.log_cardinality();
    let log_bound = (n as f64).ln() + log_ball_size;
    let (nf, df) = (n as f64, d as f64);
    Ok(CodeBoundResult {
        n,
        d,
        critical_radius: r,
        log_ball_size,
        log_bound,
        rate_bound_bits: log_bound / (nf * LN_2),
        reference_radius: nf / 2.0 - (df * (nf - df)).sqrt(),
    })
}

/// First linear programming bound on the rate, in bits:
/// `H(1/2 - sqrt(delta (1 - delta))) / log 2`.
pub fn asymptotic_rate_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            domain: "(0, 1/2)",
        });
    }
    let x = 0.5 - (delta * (1.0 - delta)).sqrt();
    Ok(entropy_h(x.max(0.0))? / LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_distance() {
        assert!(critical_radius(10, 0).is_err());
        assert!(critical_radius(10, 6).is_err());
        assert!(critical_radius(10, 5).is_ok());
    }

    #[test]
    fn radius_is_minimal() {
        for n in [10, 40, 120] {
            for d in 1..=n / 2 {
                let r = critical_radius(n, d).unwrap();
                let threshold = tone_threshold(d);
                assert!(ball_lambda_star(n, r).unwrap() <= threshold);
                if r > 0 {
                    assert!(ball_lambda_star(n, r - 1).unwrap() > threshold);
                }
            }
        }
    }

    #[test]
    fn radius_nondecreasing_in_threshold() {
        // larger d loosens the tone condition, so the radius cannot grow
        let n = 80;
        let radii: Vec<usize> = (1..=n / 2).map(|d| critical_radius(n, d).unwrap()).collect();
        assert!(radii.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn balanced_distance_gives_tiny_radius() {
        let res = code_size_bound(2000, 1000).unwrap();
        assert!(res.critical_radius <= 1);
        assert!(res.rate_bound_bits < 0.01);
        assert_eq!(res.reference_radius, 0.0);
    }

    #[test]
    fn asymptotic_rate_values() {
        // H_2(0.2), mpmath
        assert!((asymptotic_rate_bound(0.1).unwrap() - 0.7219280948873623).abs() < 1e-12);
        assert!(asymptotic_rate_bound(0.4999999).unwrap() < 1e-6);
        assert!(asymptotic_rate_bound(1e-12).unwrap() > 0.9999);
        assert!(asymptotic_rate_bound(0.0).is_err());
        assert!(asymptotic_rate_bound(0.5).is_err());
        assert!(asymptotic_rate_bound(f64::NAN).is_err());
    }
}
