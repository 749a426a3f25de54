//! Radial reduction for Hamming balls.
//!
//! On functions of the Hamming weight, the cube adjacency acts as
//! `(W g)(k) = (n - k) g(k+1) + k g(k-1)`. Truncating at `g(r+1) = 0` and
//! conjugating by `sqrt(C(n, k))` gives a symmetric tridiagonal matrix
//! with zero diagonal and off-diagonal `sqrt((n-k)(k+1))`, of size `r + 1`.
//! Its top eigenvalue is that of the induced ball subgraph, so balls with
//! `n` in the thousands cost `O(r)` per Sturm sweep.

use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, MAX_DIM};
use crate::error::{clamp_domain, Error, Result};
use crate::special::{balance_deficit, xlogx, LN_2};
use crate::subset::log_binomials;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalForm {
    n: usize,
    /// Squared off-diagonal entries `(n - k)(k + 1)`, `k < r`.
    off_sq: Vec<f64>,
}

impl TridiagonalForm {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidParameter(format!("radius {r} exceeds n = {n}")));
        }
        let off_sq = (0..r).map(|k| ((n - k) as f64) * ((k + 1) as f64)).collect();
        Ok(Self { n, off_sq })
    }

    pub fn size(&self) -> usize {
        self.off_sq.len() + 1
    }

    pub fn off_diagonal(&self) -> Vec<f64> {
        self.off_sq.iter().map(|b| b.sqrt()).collect()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut q = -x;
        let mut count = usize::from(q < 0.0);
        for &b2 in &self.off_sq {
            if q == 0.0 {
                q = -tiny;
            }
            q = -x - b2 / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Largest eigenvalue by bisection on the Sturm count, to full precision.
    pub fn lambda_max(&self) -> f64 {
        if self.off_sq.is_empty() {
            return 0.0;
        }
        let size = self.size();
        let b: Vec<f64> = self.off_diagonal();
        let gersh = (0..size)
            .map(|i| {
                let left = if i > 0 { b[i - 1] } else { 0.0 };
                let right = b.get(i).copied().unwrap_or(0.0);
                left + right
            })
            .fold(0.0, f64::max);
        // trace zero, so the top eigenvalue is nonnegative
        let (mut lo, mut hi) = (0.0, gersh * (1.0 + 1e-12) + 1e-12);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) == size {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit top eigenvector by inverse iteration at the computed eigenvalue,
    /// with positive entries (Perron).
    pub fn top_eigenvector(&self, lambda: f64) -> Vec<f64> {
        let size = self.size();
        if size == 1 {
            return vec![1.0];
        }
        let b = self.off_diagonal();
        let shift = lambda + 1e-10 * self.n as f64;
        let mut x = vec![1.0; size];
        for _ in 0..4 {
            x = solve_shifted(&b, shift, &x);
            let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let sign = if x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
            x.iter_mut().for_each(|v| *v *= sign / s);
        }
        x
    }
}

/// Solves `(T - shift I) x = rhs` for the zero-diagonal tridiagonal `T`
/// with off-diagonal `b`, by Gaussian elimination with partial pivoting.
fn solve_shifted(b: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    // row i holds entries at columns i, i+1, i+2 after pivoting
    let mut d = vec![-shift; n];
    let mut du: Vec<f64> = b.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut dl: Vec<f64> = b.to_vec();
    let mut x = rhs.to_vec();
    for i in 0..n - 1 {
        if dl[i].abs() > d[i].abs() {
            // swap rows i and i+1
            let (di, dui) = (d[i], du[i]);
            d[i] = dl[i];
            du[i] = d[i + 1];
            d[i + 1] = dui;
            x.swap(i, i + 1);
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = 0.0;
            }
            let factor = di / d[i];
            d[i + 1] -= factor * du[i];
            if i + 2 < n {
                du[i + 1] -= factor * du2[i];
            }
            x[i + 1] -= factor * x[i];
        } else {
            let pivot = if d[i] == 0.0 { f64::EPSILON } else { d[i] };
            d[i] = pivot;
            let factor = dl[i] / pivot;
            d[i + 1] -= factor * du[i];
            x[i + 1] -= factor * x[i];
        }
        dl[i] = 0.0;
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = f64::EPSILON;
    }
    let mut out = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= du[i] * out[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * out[i + 2];
        }
        out[i] = s / d[i];
    }
    out
}

/// Values of a function of the Hamming weight on the ball of radius `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub n: usize,
    pub r: usize,
    pub g: Vec<f64>,
}

impl RadialProfile {
    /// `log(C(n, k) / 2^n)` for `k = 0..=r`.
    fn log_weights(&self) -> Vec<f64> {
        let shift = self.n as f64 * LN_2;
        log_binomials(self.n, self.r)
            .into_iter()
            .map(|l| l - shift)
            .collect()
    }

    pub fn mean_sq(&self) -> f64 {
        self.log_weights()
            .iter()
            .zip(&self.g)
            .map(|(lw, g)| lw.exp() * g * g)
            .sum()
    }

    /// `D^2` of the radial function extended by zero outside the ball,
    /// `2^{1-n} f^T (n I - W) f` evaluated weight class by weight class.
    pub fn d2(&self) -> f64 {
        let n = self.n as f64;
        let g = |k: usize| self.g.get(k).copied().unwrap_or(0.0);
        self.log_weights()
            .iter()
            .enumerate()
            .map(|(k, lw)| {
                let wg = (n - k as f64) * g(k + 1) + if k > 0 { k as f64 * g(k - 1) } else { 0.0 };
                2.0 * lw.exp() * g(k) * (n * g(k) - wg)
            })
            .sum()
    }

    pub fn entropy_sq(&self) -> Result<f64> {
        let m = self.mean_sq();
        if m == 0.0 {
            return Err(Error::ZeroFunction);
        }
        let e: f64 = self
            .log_weights()
            .iter()
            .zip(&self.g)
            .map(|(lw, g)| lw.exp() * xlogx(g * g))
            .sum();
        Ok((e - m * m.ln()).max(0.0))
    }

    pub fn to_cube_function(&self) -> Result<CubeFunction> {
        if self.n > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "cannot materialize n = {} > {MAX_DIM}",
                self.n
            )));
        }
        CubeFunction::from_fn(self.n, |x| {
            let w = x.count_ones() as usize;
            if w <= self.r {
                self.g[w]
            } else {
                0.0
            }
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,g_k\n");
        for (k, g) in self.g.iter().enumerate() {
            out.push_str(&format!("{k},{g:?}\n"));
        }
        out
    }
}

fn check_ball(n: usize, r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if r > n {
        return Err(Error::InvalidParameter(format!("radius {r} exceeds n = {n}")));
    }
    Ok(())
}

/// `lambda*(Ball(n, r)) = 2 (n - lambda_max)` from the radial tridiagonal.
pub fn ball_lambda_star(n: usize, r: usize) -> Result<f64> {
    check_ball(n, r)?;
    if r == 0 {
        return Ok(2.0 * n as f64);
    }
    if r == n {
        return Ok(0.0);
    }
    let t = TridiagonalForm::new(n, r)?;
    Ok((2.0 * (n as f64 - t.lambda_max())).max(0.0))
}

/// The extremal radial function on `Ball(n, r)`, normalized to `E f^2 = 1`.
pub fn ball_minimizer(n: usize, r: usize) -> Result<RadialProfile> {
    check_ball(n, r)?;
    let t = TridiagonalForm::new(n, r)?;
    let u = t.top_eigenvector(t.lambda_max());
    // E f^2 = sum_k C(n,k) g_k^2 / 2^n = |u|^2 / 2^n with |u| = 1
    let half_shift = 0.5 * n as f64 * LN_2;
    let g: Vec<f64> = log_binomials(n, r)
        .iter()
        .zip(&u)
        .map(|(lc, uk)| uk * (half_shift - 0.5 * lc).exp())
        .collect();
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radial profile for n = {n} overflows double precision"
        )));
    }
    Ok(RadialProfile { n, r, g })
}

/// Faber-Krahn lower bound on `lambda*`: `4n (1/2 - sqrt(x(1-x)))`, `x = H^-1(log|A| / n)`.
pub fn fk_rhs(n: usize, log_cardinality: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let nf = n as f64;
    let log_card = clamp_domain(
        "log_cardinality",
        log_cardinality,
        0.0,
        nf * LN_2,
        "[0, n log 2]",
    )?;
    Ok(4.0 * nf * balance_deficit(LN_2 - log_card / nf)?)
}
