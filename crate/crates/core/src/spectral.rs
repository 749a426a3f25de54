//! Fundamental tone and fractional edge boundary of vertex subsets.
//!
//! For `f` supported in `A`, `D^2(f) = 2^{1-n} f^T (n I - W_A) f` and
//! `E f^2 = 2^{-n} f^T f`, where `W_A` is the adjacency matrix of the
//! subgraph induced on `A`. Minimizing the Rayleigh quotient therefore
//! gives `lambda*(A) = 2 (n - lambda_max(W_A))`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::CubeFunction;
use crate::eigen::{dense_top, dense_top_value, lanczos_top, EigenPair, LanczosConfig};
use crate::error::{Error, Result};
use crate::subset::SubsetSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Subsets up to this many vertices use a dense eigensolve.
    pub dense_threshold: usize,
    /// Iterative path stops at `||W v - lambda v|| <= tol ||v||`.
    pub tol: f64,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
    /// Whether to build the extended minimizer.
    pub minimizer: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dense_threshold: 2048,
            tol: 1e-10,
            krylov_dim: 64,
            max_restarts: 400,
            seed: 0,
            minimizer: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
    Radial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda_star: f64,
    pub frac_boundary: f64,
    /// Extremal function extended by zero, scaled to `E f^2 = |A| / 2^n`.
    pub minimizer: Option<CubeFunction>,
    pub method: Method,
    /// `||W_A v - lambda v||` of the unit eigenvector; `None` when only the
    /// eigenvalue was computed.
    pub residual: Option<f64>,
}

/// Induced subgraph on a sorted vertex list, in compressed adjacency form.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    n: usize,
    vertices: Vec<u32>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl InducedSubgraph {
    pub fn new(n: usize, vertices: Vec<u32>) -> Self {
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for &v in &vertices {
            for i in 0..n {
                if let Ok(j) = vertices.binary_search(&(v ^ (1 << i))) {
                    neighbors.push(j as u32);
                }
            }
            offsets.push(neighbors.len());
        }
        Self {
            n,
            vertices,
            offsets,
            neighbors,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    fn row(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn dense_adjacency(&self) -> DMatrix<f64> {
        let m = self.len();
        let mut w = DMatrix::zeros(m, m);
        for i in 0..m {
            for &j in self.row(i) {
                w[(i, j as usize)] = 1.0;
            }
        }
        w
    }

    /// `y = W_A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let row = |i: usize| self.row(i).iter().map(|&j| x[j as usize]).sum::<f64>();
        if self.len() >= 1 << 14 {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row(i));
        } else {
            y.iter_mut().enumerate().for_each(|(i, yi)| *yi = row(i));
        }
    }

    /// Extends a vector on `A` by zero to the whole cube.
    pub fn extend(&self, local: &[f64]) -> Result<CubeFunction> {
        let mut values = vec![0.0; 1 << self.n];
        for (&v, &x) in self.vertices.iter().zip(local) {
            values[v as usize] = x;
        }
        CubeFunction::new(self.n, values)
    }
}

fn top_eigenpair(graph: &InducedSubgraph, cfg: &SolverConfig) -> Result<(EigenPair, Method)> {
    if graph.len() <= cfg.dense_threshold {
        Ok((dense_top(graph.dense_adjacency()), Method::Dense))
    } else {
        let lcfg = LanczosConfig {
            krylov_dim: cfg.krylov_dim,
            max_restarts: cfg.max_restarts,
            tol: cfg.tol,
            seed: cfg.seed,
        };
        let pair = lanczos_top(graph.len(), |x, y| graph.apply(x, y), &lcfg)?;
        Ok((pair, Method::Iterative))
    }
}

/// Fundamental tone `lambda*(A)` with the dense/iterative switch of `cfg`.
pub fn lambda_star(subset: &SubsetSpec, cfg: &SolverConfig) -> Result<SpectralResult> {
    let n = subset.n();
    let vertices = subset.vertices()?;
    if vertices.is_empty() {
        return Err(Error::InvalidSubset("empty subset".into()));
    }
    let m = vertices.len();
    let share = m as f64 / 2f64.powi(n as i32);
    let graph = InducedSubgraph::new(n, vertices);

    if m == 1 {
        let minimizer = if cfg.minimizer {
            Some(graph.extend(&[1.0])?)
        } else {
            None
        };
        let lambda = 2.0 * n as f64;
        return Ok(SpectralResult {
            lambda_star: lambda,
            frac_boundary: share * lambda,
            minimizer,
            method: Method::Dense,
            residual: Some(0.0),
        });
    }

    if !cfg.minimizer && m <= cfg.dense_threshold {
        let top = dense_top_value(graph.dense_adjacency());
        let lambda = (2.0 * (n as f64 - top)).max(0.0);
        return Ok(SpectralResult {
            lambda_star: lambda,
            frac_boundary: share * lambda,
            minimizer: None,
            method: Method::Dense,
            residual: None,
        });
    }

    let (pair, method) = top_eigenpair(&graph, cfg)?;
    let lambda = (2.0 * (n as f64 - pair.value)).max(0.0);
    let minimizer = if cfg.minimizer {
        // Perron sign, then E f^2 = |A| / 2^n, i.e. f^T f = |A|
        let sign = if pair.vector.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        let scale = sign * (m as f64).sqrt();
        let local: Vec<f64> = pair.vector.iter().map(|x| x * scale).collect();
        Some(graph.extend(&local)?)
    } else {
        None
    };
    Ok(SpectralResult {
        lambda_star: lambda,
        frac_boundary: share * lambda,
        minimizer,
        method,
        residual: Some(pair.residual),
    })
}

/// `|boundary* A| = (|A| / 2^n) lambda*(A)`.
pub fn frac_boundary(subset: &SubsetSpec, cfg: &SolverConfig) -> Result<f64> {
    Ok(lambda_star(subset, cfg)?.frac_boundary)
}

/// `lambda*` only, skipping the minimizer.
pub fn lambda_star_value(subset: &SubsetSpec) -> Result<f64> {
    let cfg = SolverConfig {
        minimizer: false,
        ..SolverConfig::default()
    };
    Ok(lambda_star(subset, &cfg)?.lambda_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> SolverConfig {
        SolverConfig {
            minimizer: false,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn full_cube_and_singleton() {
        for n in 1..=6 {
            let full = lambda_star(&SubsetSpec::full(n).unwrap(), &quiet()).unwrap();
            assert!(full.lambda_star.abs() < 1e-12);
            let single = lambda_star(&SubsetSpec::mask(n, [5 % (1 << n)]).unwrap(), &quiet()).unwrap();
            assert_eq!(single.lambda_star, 2.0 * n as f64);
            assert!((single.frac_boundary - 2.0 * n as f64 / 2f64.powi(n as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn subcube_and_small_ball() {
        for n in 1..=7 {
            for t in 0..=n {
                let r = lambda_star(&SubsetSpec::subcube(n, t).unwrap(), &quiet()).unwrap();
                assert!((r.lambda_star - 2.0 * t as f64).abs() < 1e-10, "n={n} t={t}");
            }
        }
        let b = lambda_star(&SubsetSpec::ball(4, 1).unwrap(), &SolverConfig::default()).unwrap();
        assert!((b.lambda_star - 4.0).abs() < 1e-12);
        assert!((b.frac_boundary - 1.25).abs() < 1e-12);
        let g = b.minimizer.unwrap();
        assert!((g.mean_sq() - 5.0 / 16.0).abs() < 1e-12);
        assert!((g.d2() - b.frac_boundary).abs() < 1e-10);
    }

    #[test]
    fn iterative_matches_dense() {
        let dense = SolverConfig::default();
        let iterative = SolverConfig {
            dense_threshold: 0,
            ..SolverConfig::default()
        };
        for spec in [
            SubsetSpec::ball(8, 3).unwrap(),
            SubsetSpec::subcube(6, 2).unwrap(),
            SubsetSpec::mask(5, [0, 1, 2, 3, 7, 11, 19, 30]).unwrap(),
        ] {
            let a = lambda_star(&spec, &dense).unwrap();
            let b = lambda_star(&spec, &iterative).unwrap();
            assert_eq!(b.method, Method::Iterative);
            assert!((a.lambda_star - b.lambda_star).abs() < 1e-8, "{spec:?}");
            assert!(b.residual.unwrap() <= 1e-10);
        }
    }

    #[test]
    fn nonconvergence_is_reported() {
        let cfg = SolverConfig {
            dense_threshold: 0,
            krylov_dim: 2,
            max_restarts: 1,
            tol: 1e-15,
            ..SolverConfig::default()
        };
        let err = lambda_star(&SubsetSpec::ball(9, 4).unwrap(), &cfg).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn empty_mask_is_rejected() {
        let empty = SubsetSpec::mask(3, []).unwrap();
        assert!(lambda_star(&empty, &quiet()).is_err());
    }
}
