//! Top eigenpairs of symmetric operators: dense (nalgebra) and a restarted
//! Lanczos iteration with full reorthogonalization for matrix-free use.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// Unit-norm eigenvector.
    pub vector: Vec<f64>,
    /// `||A v - value v||_2` for the returned unit vector.
    pub residual: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest eigenvalue of a dense symmetric matrix, without forming eigenvectors.
pub fn dense_top_value(matrix: DMatrix<f64>) -> f64 {
    matrix
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest eigenpair of a dense symmetric matrix.
pub fn dense_top(matrix: DMatrix<f64>) -> EigenPair {
    let dim = matrix.nrows();
    let original = matrix.clone();
    let eig = SymmetricEigen::new(matrix);
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    let vector: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    let av = &original * nalgebra::DVector::from_column_slice(&vector);
    let residual = (0..dim)
        .map(|i| (av[i] - value * vector[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    EigenPair {
        value,
        vector,
        residual,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Stop once `||A v - lambda v|| <= tol` for the unit Ritz vector.
    pub tol: f64,
    pub seed: u64,
}

/// Largest eigenpair of the symmetric operator `apply` (writes `A x` into `y`).
///
/// Explicitly restarted Lanczos: each cycle builds a fully reorthogonalized
/// Krylov basis from the current Ritz vector, so the iteration is
/// deterministic given the seed.
pub fn lanczos_top<F>(dim: usize, apply: F, cfg: &LanczosConfig) -> Result<EigenPair>
where
    F: Fn(&[f64], &mut [f64]),
{
    assert!(dim > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| 0.5 + rng.random::<f64>()).collect();
    let s = norm(&start);
    start.iter_mut().for_each(|x| *x /= s);

    let m = cfg.krylov_dim.clamp(2, dim.max(2)).min(dim);
    let mut best_residual = f64::INFINITY;
    let mut w = vec![0.0; dim];

    for _ in 0..cfg.max_restarts.max(1) {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas = Vec::with_capacity(m);
        let mut betas: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            apply(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alphas.push(a);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            if j + 1 == m || b <= 1e-14 * a.abs().max(1.0) {
                break;
            }
            betas.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }

        let k = alphas.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alphas[i];
            if i + 1 < k {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let small = dense_top(t);
        let mut ritz = vec![0.0; dim];
        for (coef, q) in small.vector.iter().zip(&basis) {
            ritz.iter_mut().zip(q).for_each(|(x, y)| *x += coef * y);
        }
        let s = norm(&ritz);
        ritz.iter_mut().for_each(|x| *x /= s);

        apply(&ritz, &mut w);
        let value = dot(&w, &ritz);
        let residual = w
            .iter()
            .zip(&ritz)
            .map(|(a, v)| (a - value * v).powi(2))
            .sum::<f64>()
            .sqrt();
        best_residual = best_residual.min(residual);
        if residual <= cfg.tol {
            return Ok(EigenPair {
                value,
                vector: ritz,
                residual,
            });
        }
        start = ritz;
    }
    Err(Error::NoConvergence {
        what: "Lanczos",
        iterations: cfg.max_restarts,
        residual: best_residual,
    })
}
