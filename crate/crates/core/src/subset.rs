//! Vertex subsets of the cube: explicit masks, Hamming balls around the
//! all-zeros vertex, and subcubes fixing the first `t` coordinates to zero.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cube::MAX_DIM;
use crate::error::{Error, Result};
use crate::special::LN_2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SubsetSpec {
    /// Explicit vertex list, sorted and free of duplicates.
    Mask { n: usize, vertices: Vec<u32> },
    Ball { n: usize, r: usize },
    Subcube { n: usize, t: usize },
}

/// `log C(n, k)` for `k = 0..=r`, accumulated from the ratio
/// `C(n, k) / C(n, k-1) = (n - k + 1) / k`.
pub fn log_binomials(n: usize, r: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(r + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..=r.min(n) {
        acc += ((n - k + 1) as f64).ln() - (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `log sum_i exp(x_i)`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

impl SubsetSpec {
    pub fn mask(n: usize, vertices: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidSubset(format!(
                "mask dimension must be in 1..={MAX_DIM}, got {n}"
            )));
        }
        let mut vertices: Vec<u32> = vertices.into_iter().collect();
        if let Some(&v) = vertices.iter().find(|&&v| (v as u64) >= 1u64 << n) {
            return Err(Error::InvalidSubset(format!(
                "vertex {v} out of range for n = {n}"
            )));
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("duplicate vertex {}", w[0])));
        }
        Ok(Self::Mask { n, vertices })
    }

    /// Mask from the bits of `bits`: vertex `v` is present iff bit `v` is set.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::InvalidSubset(format!(
                "a 64-bit membership word covers n <= 6, got {n}"
            )));
        }
        Self::mask(n, (0..1u32 << n).filter(|&v| bits >> v & 1 == 1))
    }

    pub fn ball(n: usize, r: usize) -> Result<Self> {
        if n == 0 || r > n {
            return Err(Error::InvalidSubset(format!(
                "ball needs 1 <= n and r <= n, got n = {n}, r = {r}"
            )));
        }
        Ok(Self::Ball { n, r })
    }

    pub fn subcube(n: usize, t: usize) -> Result<Self> {
        if n == 0 || t > n {
            return Err(Error::InvalidSubset(format!(
                "subcube needs 1 <= n and t <= n, got n = {n}, t = {t}"
            )));
        }
        Ok(Self::Subcube { n, t })
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::subcube(n, 0)
    }

    pub fn n(&self) -> usize {
        match *self {
            Self::Mask { n, .. } | Self::Ball { n, .. } | Self::Subcube { n, .. } => n,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        match self {
            Self::Mask { vertices, .. } => {
                u32::try_from(v).is_ok_and(|v| vertices.binary_search(&v).is_ok())
            }
            Self::Ball { n, r } => v >> n == 0 && v.count_ones() as usize <= *r,
            Self::Subcube { n, t } => v >> n == 0 && v & ((1u64 << t) - 1) == 0,
        }
    }

    /// Exact cardinality, when it fits in 128 bits.
    pub fn cardinality(&self) -> Option<u128> {
        match *self {
            Self::Mask { ref vertices, .. } => Some(vertices.len() as u128),
            Self::Subcube { n, t } => 1u128.checked_shl((n - t) as u32),
            Self::Ball { n, r } => {
                let mut binom: u128 = 1;
                let mut total: u128 = 1;
                for k in 1..=r {
                    binom = binom.checked_mul((n - k + 1) as u128)? / k as u128;
                    total = total.checked_add(binom)?;
                }
                Some(total)
            }
        }
    }

    /// Natural log of the cardinality, stable for balls with `n` up to `10^6`.
    pub fn log_cardinality(&self) -> f64 {
        match *self {
            Self::Mask { ref vertices, .. } => (vertices.len() as f64).ln(),
            Self::Subcube { n, t } => (n - t) as f64 * LN_2,
            Self::Ball { n, r } if r == n => n as f64 * LN_2,
            Self::Ball { n, r } => log_sum_exp(&log_binomials(n, r)),
        }
    }

    /// Sorted vertex list; only for `n <= 24`.
    pub fn vertices(&self) -> Result<Vec<u32>> {
        let n = self.n();
        if n > MAX_DIM {
            return Err(Error::InvalidSubset(format!(
                "cannot enumerate vertices for n = {n} > {MAX_DIM}"
            )));
        }
        Ok(match self {
            Self::Mask { vertices, .. } => vertices.clone(),
            _ => (0..1u32 << n)
                .filter(|&v| self.contains(v as u64))
                .collect(),
        })
    }

    /// Number of edges leaving the set, normalized by `2^(n-1)`.
    pub fn edge_boundary(&self) -> Result<f64> {
        match *self {
            Self::Subcube { t, .. } => Ok(t as f64 * 2f64.powi(1 - t as i32)),
            Self::Ball { n, r } if r == n => Ok(0.0),
            // each weight-r vertex has n - r neighbors of weight r + 1
            Self::Ball { n, r } => {
                let log_c = *log_binomials(n, r).last().expect("nonempty");
                Ok((log_c + ((n - r) as f64).ln() - (n - 1) as f64 * LN_2).exp())
            }
            Self::Mask { n, ref vertices } => {
                let mut cut = 0u64;
                for &v in vertices {
                    for i in 0..n {
                        if !self.contains((v ^ (1 << i)) as u64) {
                            cut += 1;
                        }
                    }
                }
                Ok(cut as f64 / 2f64.powi(n as i32 - 1))
            }
        }
    }

    /// The explicit mask `{v XOR shift : v in A}`.
    pub fn translated(&self, shift: u32) -> Result<Self> {
        let n = self.n();
        let shift = shift & ((1u32 << n) - 1);
        Self::mask(n, self.vertices()?.into_iter().map(|v| v ^ shift))
    }

    /// The mask-file text for this set.
    pub fn to_mask_file(&self) -> Result<String> {
        let mut out = format!("n={}\n", self.n());
        for v in self.vertices()? {
            writeln!(out, "{v}").expect("writing to a String");
        }
        Ok(out)
    }
}

/// Parses the mask file format: `n=<int>` on the first line, then one
/// vertex index per line. Blank lines are ignored; duplicates are errors.
pub fn parse_mask_file(text: &str) -> Result<SubsetSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(Error::MaskFormat {
        line: 1,
        message: "empty file".into(),
    })?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::MaskFormat {
            line,
            message: format!("expected `n=<int>`, got `{header}`"),
        })?;
    if n == 0 || n > MAX_DIM {
        return Err(Error::MaskFormat {
            line,
            message: format!("n must be in 1..={MAX_DIM}"),
        });
    }
    let mut seen = std::collections::HashSet::new();
    let mut vertices = Vec::new();
    for (line, text) in lines {
        let v: u64 = text.parse().map_err(|_| Error::MaskFormat {
            line,
            message: format!("not a vertex index: `{text}`"),
        })?;
        if v >= 1u64 << n {
            return Err(Error::MaskFormat {
                line,
                message: format!("vertex {v} out of range [0, 2^{n})"),
            });
        }
        if !seen.insert(v) {
            return Err(Error::MaskFormat {
                line,
                message: format!("duplicate vertex {v}"),
            });
        }
        vertices.push(v as u32);
    }
    SubsetSpec::mask(n, vertices)
}

/// Whether a vertex set is a subcube: some coordinates fixed, the rest free.
pub fn is_subcube(vertices: &[u32]) -> bool {
    if vertices.is_empty() || !vertices.len().is_power_of_two() {
        return false;
    }
    let all_and = vertices.iter().fold(u32::MAX, |a, &v| a & v);
    let all_or = vertices.iter().fold(0, |a, &v| a | v);
    let free = all_and ^ all_or;
    // every vertex agrees with the fixed bits by construction of and/or;
    // distinctness plus the count forces all 2^free combinations
    1usize << free.count_ones() == vertices.len()
}
