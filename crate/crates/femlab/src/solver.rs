//! Jacobi-preconditioned conjugate gradients.

use serde::{Deserialize, Serialize};

use crate::assembly::{MeshVariant, SparseSystem};
use crate::error::{FemError, Result};
use crate::sparse::CsrMatrix;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 20_000;
const MAX_RESTARTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `‖b − Ax‖ / ‖b‖`, recomputed from the final iterate.
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn cg(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<CgOutcome> {
    let n = b.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(FemError::Contract(format!("{}×{} matrix, rhs of length {n}", a.nrows(), a.ncols())));
    }
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok(CgOutcome { x: vec![0.0; n], iterations: 0, relative_residual: 0.0 });
    }
    let inv_diag: Vec<f64> = a
        .diag()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut x = vec![0.0; n];
    let mut iterations = 0;
    let mut residual;
    // restart from the true residual whenever the recurrence has drifted
    let mut restarts = 0;
    loop {
        let ax = a.mul_vec(&x);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, y)| b - y).collect();
        residual = dot(&r, &r).sqrt() / b_norm;
        if residual <= tol || iterations >= max_iter || restarts > MAX_RESTARTS {
            break;
        }
        restarts += 1;
        let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; n];
        while iterations < max_iter && dot(&r, &r).sqrt() > tol * b_norm {
            iterations += 1;
            a.mul_vec_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(FemError::Contract("matrix is not positive definite".into()));
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
    }
    if residual > tol {
        return Err(FemError::Convergence { iterations, residual });
    }
    Ok(CgOutcome { x, iterations, relative_residual: residual })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSolution {
    pub values: Vec<f64>,
    pub variant: MeshVariant,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solves `(K + (1+V)M + B) u = b` with homogeneous Dirichlet data.
pub fn solve_cg(system: &SparseSystem, tol: f64, max_iter: usize) -> Result<DiscreteSolution> {
    let free = system.free_nodes();
    let a = system.operator().submatrix(&free);
    let rhs: Vec<f64> = free.iter().map(|&i| system.load[i]).collect();
    let out = cg(&a, &rhs, tol, max_iter)?;
    let mut values = vec![0.0; system.size()];
    for (k, &i) in free.iter().enumerate() {
        values[i] = out.x[k];
    }
    Ok(DiscreteSolution {
        values,
        variant: system.variant,
        iterations: out.iterations,
        relative_residual: out.relative_residual,
    })
}
