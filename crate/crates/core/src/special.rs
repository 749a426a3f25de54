//! Scalar functions behind the modified log-Sobolev constant.
//!
//! The chain is built from the two-point entropy
//! `psi(t) = Ent(f^2)` for `f = (1 - sqrt t, 1 + sqrt t)` on `{0,1}`:
//!
//! * `h(t) = psi(t^2)` with closed-form first and second derivatives,
//! * `phi = psi^-1` on `[0, 2 log 2]`,
//! * `xi(t) = psi(t) / (1 + t)` and its inverse `alpha` on `[0, log 2]`,
//! * `tau(y) = phi(y) / y`,
//! * the constant `C`, available both through `alpha` and through the
//!   entropy inverse `H^-1`.
//!
//! Every inverse is computed by bisection. Near the ends of the domain the
//! naive formulas cancel catastrophically, so the inversions that feed `C`
//! work with the gap to `log 2` instead of the value itself.

use serde::{Deserialize, Serialize};

use crate::error::{clamp_domain, Error, Result};

pub const LN_2: f64 = std::f64::consts::LN_2;

/// `C(0)`, the removable singularity of both representations of `C`.
pub const C_AT_ZERO: f64 = 2.0;

/// `tau(0) = phi'(0) = 1 / psi'(0)`, and `psi'(0) = 2`.
pub const TAU_AT_ZERO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub max_bisect_iters: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_bisect_iters: 200,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, max_bisect_iters: usize) -> Result<Self> {
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {abs_tol}"
            )));
        }
        if max_bisect_iters == 0 {
            return Err(Error::InvalidParameter(
                "max_bisect_iters must be at least 1".into(),
            ));
        }
        Ok(Self {
            abs_tol,
            max_bisect_iters,
        })
    }
}

/// Solves `f(x) = target` for a nondecreasing `f` on `[lo, hi]`.
///
/// Bisection runs to full double resolution (or the iteration cap); the
/// tolerance is then enforced as a postcondition on `|f(x) - target|`,
/// unless the bracket itself has shrunk below `abs_tol`.
pub fn bisect_increasing<F>(
    f: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    tol: &Tolerance,
    what: &'static str,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut iterations = 0;
    while iterations < tol.max_bisect_iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let (f_lo, f_hi) = (f(lo), f(hi));
    let (x, residual) = if (f_lo - target).abs() <= (f_hi - target).abs() {
        (lo, (f_lo - target).abs())
    } else {
        (hi, (f_hi - target).abs())
    };
    if residual <= tol.abs_tol || hi - lo <= tol.abs_tol {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            what,
            iterations,
            residual,
        })
    }
}

/// `x log x` with the convention `0 log 0 = 0`.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Binary entropy in nats: `-x log x - (1-x) log(1-x)`.
pub fn entropy_h(x: f64) -> Result<f64> {
    let x = clamp_domain("x", x, 0.0, 1.0, "[0, 1]")?;
    Ok(entropy_h_unchecked(x))
}

#[inline]
fn entropy_h_unchecked(x: f64) -> f64 {
    let right = if x == 1.0 { 0.0 } else { (1.0 - x) * (-x).ln_1p() };
    -xlogx(x) - right
}

/// `log 2 - H(1/2 - delta)` without cancellation, for `delta` in `[0, 1/2]`.
fn entropy_gap(delta: f64) -> f64 {
    let u = 2.0 * delta;
    let minus = if u >= 1.0 { 0.0 } else { (1.0 - u) * (-u).ln_1p() };
    0.5 * ((1.0 + u) * u.ln_1p() + minus)
}

/// The unique `x` in `[0, 1/2]` with `H(x) = y`.
pub fn inv_entropy(y: f64) -> Result<f64> {
    inv_entropy_with(y, &Tolerance::default())
}

pub fn inv_entropy_with(y: f64, tol: &Tolerance) -> Result<f64> {
    let y = clamp_domain("y", y, 0.0, LN_2, "[0, log 2]")?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == LN_2 {
        return Ok(0.5);
    }
    bisect_increasing(entropy_h_unchecked, y, 0.0, 0.5, tol, "inverse entropy")
}

/// `1/2 - sqrt(x (1 - x))` where `x = H^-1(log 2 - gap)`.
///
/// This is the quantity that both the log-Sobolev constant and the
/// Faber-Krahn bound are built from. For small gaps `x` is close to `1/2`
/// and the difference is computed from `delta = 1/2 - x` directly.
pub fn balance_deficit(gap: f64) -> Result<f64> {
    let gap = clamp_domain("gap", gap, 0.0, LN_2, "[0, log 2]")?;
    if gap == 0.0 {
        return Ok(0.0);
    }
    if gap >= 0.5 * LN_2 {
        let x = inv_entropy(LN_2 - gap)?;
        let d = 0.5 - x;
        return Ok(d * d / (0.5 + (x * (1.0 - x)).sqrt()));
    }
    let delta = bisect_increasing(
        entropy_gap,
        gap,
        0.0,
        0.5,
        &Tolerance::default(),
        "inverse entropy gap",
    )?;
    Ok(delta * delta / (0.5 + (0.25 - delta * delta).sqrt()))
}

/// `h(t) = psi(t^2)`, valid on `[0, 1]`.
pub fn h_of(t: f64) -> Result<f64> {
    let t = clamp_domain("t", t, 0.0, 1.0, "[0, 1]")?;
    Ok(h_unchecked(t))
}

fn h_unchecked(s: f64) -> f64 {
    let low = if s >= 1.0 {
        0.0
    } else {
        (1.0 - s) * (1.0 - s) * (-s).ln_1p()
    };
    let s2 = s * s;
    low + (1.0 + s) * (1.0 + s) * s.ln_1p() - (1.0 + s2) * s2.ln_1p()
}

pub fn h_prime(t: f64) -> Result<f64> {
    let t = clamp_domain("t", t, 0.0, 1.0, "[0, 1]")?;
    let low = if t >= 1.0 { 0.0 } else { (1.0 - t) * (-t).ln_1p() };
    Ok(2.0 * ((1.0 + t) * t.ln_1p() - low - t * (t * t).ln_1p()))
}

pub fn h_second(t: f64) -> Result<f64> {
    let t = clamp_domain("t", t, 0.0, 1.0, "[0, 1]")?;
    if t >= 1.0 {
        return Err(Error::Divergence("h''"));
    }
    let t2 = t * t;
    Ok(4.0 / (1.0 + t2) - 2.0 * (t2.ln_1p() - (-t2).ln_1p()))
}

/// Two-point entropy `psi(t) = Ent(f^2)` for `f = (1 - sqrt t, 1 + sqrt t)`.
pub fn psi(t: f64) -> Result<f64> {
    let t = clamp_domain("t", t, 0.0, 1.0, "[0, 1]")?;
    Ok(h_unchecked(t.sqrt()))
}

/// Inverse of `psi`, taking `[0, 2 log 2]` onto `[0, 1]`.
pub fn phi(y: f64) -> Result<f64> {
    phi_with(y, &Tolerance::default())
}

pub fn phi_with(y: f64, tol: &Tolerance) -> Result<f64> {
    let y = clamp_domain("y", y, 0.0, 2.0 * LN_2, "[0, 2 log 2]")?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 2.0 * LN_2 {
        return Ok(1.0);
    }
    bisect_increasing(|t| h_unchecked(t.sqrt()), y, 0.0, 1.0, tol, "phi")
}

/// `xi(t) = psi(t) / (1 + t)`.
pub fn xi(t: f64) -> Result<f64> {
    Ok(psi(t)? / (1.0 + t.clamp(0.0, 1.0)))
}

/// `log 2 - xi(a)`, in a form whose two summands are both nonnegative.
///
/// With `s = sqrt a` and `u = 1 - s`,
/// `(1 + a)(log 2 - xi(a)) = (1 + a) log(1 + u^2/(1+s)^2) + u^2 log((1+s)/u)`.
fn xi_gap(a: f64) -> f64 {
    let s = a.sqrt();
    let u = (1.0 - a) / (1.0 + s);
    if u <= 0.0 {
        return 0.0;
    }
    let w = u / (1.0 + s);
    ((1.0 + a) * (w * w).ln_1p() + u * u * ((1.0 + s) / u).ln()) / (1.0 + a)
}

/// Inverse of `xi`, taking `[0, log 2]` onto `[0, 1]`.
pub fn alpha(y: f64) -> Result<f64> {
    alpha_with(y, &Tolerance::default())
}

pub fn alpha_with(y: f64, tol: &Tolerance) -> Result<f64> {
    let y = clamp_domain("y", y, 0.0, LN_2, "[0, log 2]")?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == LN_2 {
        return Ok(1.0);
    }
    if y <= 0.5 * LN_2 {
        bisect_increasing(
            |t| h_unchecked(t.sqrt()) / (1.0 + t),
            y,
            0.0,
            1.0,
            tol,
            "alpha",
        )
    } else {
        // xi flattens out at 1 (xi'(1) = 0); invert the gap instead.
        bisect_increasing(|t| -xi_gap(t), -(LN_2 - y), 0.0, 1.0, tol, "alpha")
    }
}

/// `tau(y) = phi(y) / y`, with `tau(0) = phi'(0)`.
pub fn tau(y: f64) -> Result<f64> {
    let y = clamp_domain("y", y, 0.0, 2.0 * LN_2, "[0, 2 log 2]")?;
    if y == 0.0 {
        return Ok(TAU_AT_ZERO);
    }
    Ok(phi(y)? / y)
}

/// `c(t) = 4 alpha(t) / (t (1 + alpha(t)))`, with `c(0) = 2`.
pub fn c_alpha(t: f64) -> Result<f64> {
    let t = clamp_domain("t", t, 0.0, LN_2, "[0, log 2]")?;
    if t == 0.0 {
        return Ok(C_AT_ZERO);
    }
    let a = alpha(t)?;
    Ok(4.0 * a / (t * (1.0 + a)))
}

/// `C(t) = (4/t) (1/2 - sqrt(x (1-x)))` with `x = H^-1(log 2 - t)`; `C(0) = 2`.
pub fn c_explicit(t: f64) -> Result<f64> {
    let t = clamp_domain("t", t, 0.0, LN_2, "[0, log 2]")?;
    if t == 0.0 {
        return Ok(C_AT_ZERO);
    }
    Ok(4.0 / t * balance_deficit(t)?)
}

/// The modified log-Sobolev constant `C(rho)`.
#[inline]
pub fn log_sobolev_constant(rho: f64) -> Result<f64> {
    c_explicit(rho)
}
