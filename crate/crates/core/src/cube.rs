//! Real functions on `{0,1}^n` and the functionals `D^2`, `K^2`, `Ent`.
//!
//! Vertices are bitmasks: coordinate `i` of vertex `x` is bit `i` of `x`.
//! All expectations are under the uniform measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension for which a full value vector is materialized.
pub const MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidFunction(format!(
                "dimension must be in 1..={MAX_DIM}, got {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidFunction(format!(
                "expected {} values for n = {n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!(
                "value at vertex {i} is not finite"
            )));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidFunction(format!(
                "dimension must be in 1..={MAX_DIM}, got {n}"
            )));
        }
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    /// Indicator of a set of vertices.
    pub fn indicator(n: usize, vertices: &[u32]) -> Result<Self> {
        let mut f = Self::constant(n, 0.0)?;
        for &v in vertices {
            let v = v as usize;
            if v >= f.values.len() {
                return Err(Error::InvalidFunction(format!(
                    "vertex {v} out of range for n = {n}"
                )));
            }
            f.values[v] = 1.0;
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.n, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn abs(&self) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `f(x XOR shift)`.
    pub fn translated(&self, shift: usize) -> Self {
        let mask = (1usize << self.n) - 1;
        Self {
            n: self.n,
            values: (0..self.values.len())
                .map(|x| self.values[(x ^ shift) & mask])
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn mean_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }

    pub fn mean_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64
    }

    pub fn max_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).fold(0.0, f64::max)
    }

    /// Sum over undirected edges `{x, x ^ e_i}` of `g(f(x), f(y))`.
    fn edge_sum(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            let bit = 1usize << i;
            for x in (0..self.values.len()).filter(|x| x & bit == 0) {
                total += g(self.values[x], self.values[x | bit]);
            }
        }
        total
    }

    /// `D^2(f) = E_x sum_{y ~ x} (f(x) - f(y))^2`; each undirected edge is
    /// seen from both endpoints.
    pub fn d2(&self) -> f64 {
        2.0 * self.edge_sum(|a, b| (a - b) * (a - b)) / self.values.len() as f64
    }

    /// `K^2(f) = 1/4 E_x sum_{y ~ x} (f(x) + f(y))^2`.
    pub fn k2(&self) -> f64 {
        0.5 * self.edge_sum(|a, b| (a + b) * (a + b)) / self.values.len() as f64
    }

    /// `Ent(f^2) = E f^2 log f^2 - E f^2 log E f^2`.
    ///
    /// Evaluated as `E f^2 * E[u log u - u + 1]` with `u = f^2 / E f^2`,
    /// whose summands are all nonnegative.
    pub fn entropy_sq(&self) -> Result<f64> {
        let m = self.mean_sq();
        if m == 0.0 {
            return Err(Error::ZeroFunction);
        }
        let total: f64 = self
            .values
            .iter()
            .map(|v| {
                let u = v * v / m;
                if u == 0.0 {
                    1.0
                } else {
                    let w = u - 1.0;
                    u * w.ln_1p() - w
                }
            })
            .sum();
        Ok((m * total / self.values.len() as f64).max(0.0))
    }

    /// `rho = Ent(f^2) / (n E f^2)`, in `[0, log 2]`.
    pub fn rho(&self) -> Result<f64> {
        let ent = self.entropy_sq()?;
        Ok(ent / (self.n as f64 * self.mean_sq()))
    }
}

pub fn d2(f: &CubeFunction) -> f64 {
    f.d2()
}

pub fn k2(f: &CubeFunction) -> f64 {
    f.k2()
}

pub fn entropy_sq(f: &CubeFunction) -> Result<f64> {
    f.entropy_sq()
}

pub fn rho_of(f: &CubeFunction) -> Result<f64> {
    f.rho()
}
