//! Lowest eigenpairs of `A v = λ M v` for sparse symmetric `A ⪰ 0`, `M ≻ 0`
//! by shifted subspace inverse iteration with Rayleigh–Ritz.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FemError, Result};
use crate::solver::cg;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Bound on `‖Av − λMv‖_{D⁻¹} / max(1, |λ|)` for `M`-normalised `v`, with
    /// `D` the diagonal of `M`.
    pub tol: f64,
    pub max_iter: usize,
    pub inner_tol: f64,
    /// Shift `σ` in `(A + σM)⁻¹`, making the solves definite.
    pub shift: f64,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 500, inner_tol: 1e-10, shift: 1.0, seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    /// Ascending.
    pub values: Vec<f64>,
    /// `M`-orthonormal.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

pub const MAX_EIGENPAIRS: usize = 10;

pub fn low_eigenvalues(a: &CsrMatrix, m: &CsrMatrix, k: usize) -> Result<Vec<f64>> {
    Ok(low_eigenpairs(a, m, k, EigenOptions::default())?.values)
}

fn m_dot(m: &CsrMatrix, x: &[f64], y: &[f64]) -> f64 {
    m.bilinear(x, y)
}

/// Modified Gram–Schmidt in the `M` inner product, applied twice.
fn m_orthonormalize(m: &CsrMatrix, block: &mut [Vec<f64>]) -> Result<()> {
    for _ in 0..2 {
        for j in 0..block.len() {
            for i in 0..j {
                let c = m_dot(m, &block[i], &block[j]);
                let (head, tail) = block.split_at_mut(j);
                tail[0].iter_mut().zip(&head[i]).for_each(|(y, x)| *y -= c * x);
            }
            let norm = m_dot(m, &block[j], &block[j]).sqrt();
            if !(norm > 0.0) {
                return Err(FemError::Convergence { iterations: 0, residual: f64::NAN });
            }
            block[j].iter_mut().for_each(|y| *y /= norm);
        }
    }
    Ok(())
}

pub fn low_eigenpairs(a: &CsrMatrix, m: &CsrMatrix, k: usize, opts: EigenOptions) -> Result<EigenPairs> {
    let n = a.nrows();
    if k == 0 || k > MAX_EIGENPAIRS || k > n {
        return Err(FemError::Contract(format!("asked for {k} eigenpairs of a {n}×{n} pencil")));
    }
    let p = (k + k.max(4)).min(n);
    let m_diag = m.diag();
    if m_diag.iter().any(|d| !(*d > 0.0)) {
        return Err(FemError::Contract("mass matrix needs a positive diagonal".into()));
    }
    let shifted = CsrMatrix::linear_combination(&[(1.0, a), (opts.shift, m)]);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut block: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    m_orthonormalize(m, &mut block)?;

    let mut worst = f64::INFINITY;
    for iteration in 1..=opts.max_iter {
        let mut next = Vec::with_capacity(p);
        for x in &block {
            let rhs = m.mul_vec(x);
            next.push(cg(&shifted, &rhs, opts.inner_tol, 50 * n + 100)?.x);
        }
        m_orthonormalize(m, &mut next)?;

        let ax: Vec<Vec<f64>> = next.iter().map(|y| a.mul_vec(y)).collect();
        let reduced = DMatrix::from_fn(p, p, |i, j| {
            let v: f64 = next[i].iter().zip(&ax[j]).map(|(x, y)| x * y).sum();
            v
        });
        let reduced = (&reduced + reduced.transpose()) * 0.5;
        let eig = SymmetricEigen::new(reduced);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        block = order
            .iter()
            .map(|&c| {
                let mut v = vec![0.0; n];
                for (r, y) in next.iter().enumerate() {
                    let w = eig.eigenvectors[(r, c)];
                    v.iter_mut().zip(y).for_each(|(acc, yi)| *acc += w * yi);
                }
                v
            })
            .collect();
        let values: Vec<f64> = order.iter().map(|&c| eig.eigenvalues[c]).collect();

        let residuals: Vec<f64> = (0..k)
            .map(|i| {
                let av = a.mul_vec(&block[i]);
                let mv = m.mul_vec(&block[i]);
                let dual: f64 = (0..n)
                    .map(|j| (av[j] - values[i] * mv[j]).powi(2) / m_diag[j])
                    .sum::<f64>()
                    .sqrt();
                dual / values[i].abs().max(1.0)
            })
            .collect();
        worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst <= opts.tol {
            block.truncate(k);
            return Ok(EigenPairs {
                values: values[..k].to_vec(),
                vectors: block,
                residuals,
                iterations: iteration,
            });
        }
    }
    Err(FemError::Convergence { iterations: opts.max_iter, residual: worst })
}
