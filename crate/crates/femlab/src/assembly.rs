//! P1 assembly of `a[u,v] + (u,v)` with Robin terms on hole edges.

use perfhom_core::regime::PerforationParams;
use serde::{Deserialize, Serialize};

use crate::error::{FemError, Result};
use crate::mesh::{BoundaryTag, PerforatedMesh, TriMesh};
use crate::quadrature;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Problem {
    /// `-Δu + u = f` in `Ω_ε`, `∂u/∂n + γ_ε u = 0` on the holes.
    PerforatedRobin,
    /// `-Δu + V u + u = f` in `Ω`.
    Homogenized { potential: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeshVariant {
    Perforated,
    Filled,
    Plain,
}

/// Full-size matrices; Dirichlet nodes are removed only when solving.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    pub robin: CsrMatrix,
    pub potential: f64,
    /// Ascending Dirichlet node indices.
    pub dirichlet: Vec<usize>,
    pub load: Vec<f64>,
    pub variant: MeshVariant,
}

impl SparseSystem {
    pub fn size(&self) -> usize {
        self.load.len()
    }

    /// `K + (1 + V) M + B`.
    pub fn operator(&self) -> CsrMatrix {
        CsrMatrix::linear_combination(&[
            (1.0, &self.stiffness),
            (1.0 + self.potential, &self.mass),
            (1.0, &self.robin),
        ])
    }

    /// `K + V M + B`, the form without the identity shift.
    pub fn form_matrix(&self) -> CsrMatrix {
        CsrMatrix::linear_combination(&[
            (1.0, &self.stiffness),
            (self.potential, &self.mass),
            (1.0, &self.robin),
        ])
    }

    pub fn free_nodes(&self) -> Vec<usize> {
        let mut fixed = vec![false; self.size()];
        self.dirichlet.iter().for_each(|&i| fixed[i] = true);
        (0..self.size()).filter(|&i| !fixed[i]).collect()
    }
}

/// `∫ ∇φ_i·∇φ_j` on one triangle.
pub fn local_stiffness(p: &[[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let area = crate::mesh::signed_area(p);
    let grads = hat_gradients(p);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
        }
    }
    k
}

/// Constant gradients of the three hat functions.
pub fn hat_gradients(p: &[[f64; 2]; 3]) -> [[f64; 2]; 3] {
    let twice = 2.0 * crate::mesh::signed_area(p);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let (b, c) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        g[i] = [(b[1] - c[1]) / twice, (c[0] - b[0]) / twice];
    }
    g
}

/// `∫ φ_i φ_j` on one triangle.
pub fn local_mass(p: &[[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let a = crate::mesh::signed_area(p) / 12.0;
    let mut m = [[a; 3]; 3];
    (0..3).for_each(|i| m[i][i] = 2.0 * a);
    m
}

/// `γ ∫_e φ_i φ_j ds` on an edge of length `len`.
pub fn local_robin(len: f64, gamma: f64) -> [[f64; 2]; 2] {
    let c = gamma * len / 6.0;
    [[2.0 * c, c], [c, 2.0 * c]]
}

/// Assembles on one variant of a matched pair.
pub fn assemble(
    mesh: &PerforatedMesh,
    params: &PerforationParams,
    eps: f64,
    problem: Problem,
    f: &dyn Fn(f64, f64) -> f64,
) -> Result<SparseSystem> {
    if (eps - mesh.eps).abs() > 1e-12 * mesh.eps {
        return Err(FemError::Contract(format!("mesh built for ε = {}, asked for {eps}", mesh.eps)));
    }
    let d = params.d(eps);
    if (d - mesh.hole_radius).abs() > 1e-12 * d {
        return Err(FemError::Contract(format!(
            "mesh hole radius {} differs from d_ε = {d}",
            mesh.hole_radius
        )));
    }
    match problem {
        Problem::PerforatedRobin => {
            let mut s = assemble_on(&mesh.perforated, params.gamma(eps), 0.0, true, f)?;
            s.variant = MeshVariant::Perforated;
            Ok(s)
        }
        Problem::Homogenized { potential } => {
            let mut s = assemble_on(&mesh.filled, 0.0, potential, true, f)?;
            s.variant = MeshVariant::Filled;
            Ok(s)
        }
    }
}

/// Assembles on any triangulation; `gamma` scales the hole-edge mass and
/// `dirichlet` decides whether `OuterDirichlet` nodes are fixed.
pub fn assemble_on(
    mesh: &TriMesh,
    gamma: f64,
    potential: f64,
    dirichlet: bool,
    f: &dyn Fn(f64, f64) -> f64,
) -> Result<SparseSystem> {
    let n = mesh.nodes.len();
    let mut k_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut m_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut load = vec![0.0; n];
    let rule = quadrature::degree4();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = mesh.corners(t);
        let kl = local_stiffness(&p);
        let ml = local_mass(&p);
        for i in 0..3 {
            for j in 0..3 {
                k_trip.push((tri[i], tri[j], kl[i][j]));
                m_trip.push((tri[i], tri[j], ml[i][j]));
            }
        }
        let area = crate::mesh::signed_area(&p);
        for (bary, w) in rule {
            let [x, y] = quadrature::point(&p, bary);
            let fx = f(x, y);
            if !fx.is_finite() {
                return Err(FemError::Load(x, y));
            }
            for i in 0..3 {
                load[tri[i]] += w * area * fx * bary[i];
            }
        }
    }
    let mut b_trip = Vec::new();
    if gamma != 0.0 {
        for (e, tag) in &mesh.boundary_edges {
            if let BoundaryTag::Hole(_) = tag {
                let (p, q) = (mesh.nodes[e[0]], mesh.nodes[e[1]]);
                let bl = local_robin((p[0] - q[0]).hypot(p[1] - q[1]), gamma);
                for i in 0..2 {
                    for j in 0..2 {
                        b_trip.push((e[i], e[j], bl[i][j]));
                    }
                }
            }
        }
    }
    let dirichlet = if dirichlet { mesh.dirichlet_nodes() } else { Vec::new() };
    Ok(SparseSystem {
        stiffness: CsrMatrix::from_triplets(n, n, &k_trip),
        mass: CsrMatrix::from_triplets(n, n, &m_trip),
        robin: CsrMatrix::from_triplets(n, n, &b_trip),
        potential,
        dirichlet,
        load,
        variant: MeshVariant::Plain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_triangle_stiffness() {
        let k = local_stiffness(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let want = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(k[i][j], want[i][j], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn robin_edge_mass() {
        let b = local_robin(0.3, 2.0);
        assert_relative_eq!(b[0][0], 0.2, epsilon = 1e-15);
        assert_relative_eq!(b[0][1], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn mass_sums_to_area() {
        let p = [[0.1, 0.2], [1.3, 0.4], [0.5, 1.9]];
        let total: f64 = local_mass(&p).iter().flatten().sum();
        assert_relative_eq!(total, crate::mesh::signed_area(&p), max_relative = 1e-14);
    }
}
