//! Error norms on the perforated mesh between `u_ε` and the shared-node
//! restriction of the homogenized solution.

use perfhom_core::corrector::{CorrectorField, Lattice};
use serde::{Deserialize, Serialize};

use crate::assembly::{hat_gradients, MeshVariant};
use crate::error::{FemError, Result};
use crate::mesh::{signed_area, PerforatedMesh, TriMesh};
use crate::quadrature;
use crate::solver::DiscreteSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub l2: f64,
    pub h1: f64,
    /// `‖u_ε − (1 + G_ε) u‖_{H¹(Ω_ε)}` when a corrector is supplied.
    pub h1_corrected: Option<f64>,
}

/// `(‖v‖²_{L²}, ‖∇v‖²_{L²})` of a P1 field, exact for P1 data.
pub fn squared_norms(mesh: &TriMesh, values: &[f64]) -> (f64, f64) {
    let mut l2 = 0.0;
    let mut grad = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = mesh.corners(t);
        let area = signed_area(&p);
        let v = [values[tri[0]], values[tri[1]], values[tri[2]]];
        // exact integral of a squared linear function
        let s: f64 = v.iter().sum();
        let sq: f64 = v.iter().map(|x| x * x).sum();
        l2 += area * (s * s + sq) / 12.0;
        let g = gradient(&p, &v);
        grad += area * (g[0] * g[0] + g[1] * g[1]);
    }
    (l2, grad)
}

pub fn l2_norm(mesh: &TriMesh, values: &[f64]) -> f64 {
    squared_norms(mesh, values).0.sqrt()
}

fn gradient(p: &[[f64; 2]; 3], v: &[f64; 3]) -> [f64; 2] {
    let g = hat_gradients(p);
    [
        v[0] * g[0][0] + v[1] * g[1][0] + v[2] * g[2][0],
        v[0] * g[0][1] + v[1] * g[1][1] + v[2] * g[2][1],
    ]
}

/// `(G_ε, ∇G_ε)` at `x` from the radial profile of the nearest hole. Points
/// between a polygon chord and its arc are accepted.
pub fn corrector_at(field: &CorrectorField, lattice: &Lattice, x: [f64; 2]) -> (f64, [f64; 2]) {
    let Some(index) = lattice.nearest(&x) else {
        return (0.0, [0.0; 2]);
    };
    let c = lattice.center(&index);
    let diff = [x[0] - c[0], x[1] - c[1]];
    let r = diff[0].hypot(diff[1]);
    if r == 0.0 || r >= field.geometry.annulus_radius {
        return (0.0, [0.0; 2]);
    }
    let (g, dg) = field.kernel(r);
    let (phi, dphi) = field.outer_cutoff(r);
    let radial = dg * phi + g * dphi;
    (g * phi, [radial * diff[0] / r, radial * diff[1] / r])
}

pub fn error_norms(
    mesh: &PerforatedMesh,
    u_eps: &DiscreteSolution,
    u: &DiscreteSolution,
    corrector: Option<&CorrectorField>,
) -> Result<ErrorNorms> {
    let shared = mesh.shared_nodes();
    if u_eps.variant != MeshVariant::Perforated || u_eps.values.len() != shared {
        return Err(FemError::Contract("u_ε must live on the perforated mesh".into()));
    }
    if u.variant != MeshVariant::Filled || u.values.len() != mesh.filled.nodes.len() {
        return Err(FemError::Contract("u must live on the filled mesh".into()));
    }
    let diff: Vec<f64> = (0..shared).map(|i| u_eps.values[i] - u.values[i]).collect();
    let (l2, grad) = squared_norms(&mesh.perforated, &diff);

    let h1_corrected = match corrector {
        None => None,
        Some(field) => {
            if (field.eps - mesh.eps).abs() > 1e-12 * mesh.eps || field.dim() != 2 {
                return Err(FemError::Contract("corrector built for another ε or dimension".into()));
            }
            let lattice = Lattice::unit_cube(2, mesh.eps)?;
            Some(corrected_norm(&mesh.perforated, &u_eps.values, &u.values[..shared], field, &lattice))
        }
    };
    Ok(ErrorNorms { l2: l2.sqrt(), h1: (l2 + grad).sqrt(), h1_corrected })
}

fn corrected_norm(
    mesh: &TriMesh,
    u_eps: &[f64],
    u: &[f64],
    field: &CorrectorField,
    lattice: &Lattice,
) -> f64 {
    let rule = quadrature::degree5();
    let mut total = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = mesh.corners(t);
        let area = signed_area(&p);
        let ue = [u_eps[tri[0]], u_eps[tri[1]], u_eps[tri[2]]];
        let uh = [u[tri[0]], u[tri[1]], u[tri[2]]];
        let gue = gradient(&p, &ue);
        let guh = gradient(&p, &uh);
        for (bary, w) in rule {
            let x = quadrature::point(&p, bary);
            let ve: f64 = (0..3).map(|i| bary[i] * ue[i]).sum();
            let vh: f64 = (0..3).map(|i| bary[i] * uh[i]).sum();
            let (g, dg) = corrector_at(field, lattice, x);
            let e = ve - (1.0 + g) * vh;
            let ex = gue[0] - dg[0] * vh - (1.0 + g) * guh[0];
            let ey = gue[1] - dg[1] * vh - (1.0 + g) * guh[1];
            total += w * area * (e * e + ex * ex + ey * ey);
        }
    }
    total.sqrt()
}
