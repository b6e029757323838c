//! Conforming triangulations of the unit square with an `ε`-periodic array of
//! circular holes, plus the variant with every hole filled in.
//!
//! The square is cut along `x, y ∈ {0, ε/2, 3ε/2, …, 1}` into blocks. Blocks
//! that are whole cells `ε(□ + i)` carry a hole and are meshed from a polar
//! template blended into the cell boundary; the half-width strips along `∂Ω`
//! are structured. Every block boundary carries the same uniform trace with
//! spacing `h = ε/k_s`, so neighbouring blocks share nodes exactly.

use std::collections::HashMap;
use std::f64::consts::PI;

use perfhom_core::regime::PerforationParams;
use serde::{Deserialize, Serialize};

use crate::error::{FemError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryTag {
    OuterDirichlet,
    /// Position of the hole in [`PerforatedMesh::holes`].
    Hole(usize),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriMesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counter-clockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<([usize; 2], BoundaryTag)>,
}

/// Summary of the combinatorial checks run by [`TriMesh::audit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshAudit {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub min_signed_area: f64,
    pub total_area: f64,
}

impl TriMesh {
    pub fn corners(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        signed_area(&self.corners(t))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    /// Nodes on `OuterDirichlet` edges, ascending.
    pub fn dirichlet_nodes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|(_, tag)| *tag == BoundaryTag::OuterDirichlet)
            .flat_map(|(e, _)| *e)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Checks orientation, edge-to-edge conformity (edges used once are
    /// exactly the tagged boundary edges, all others twice) and the Euler
    /// characteristic.
    pub fn audit(&self, expected_euler: i64) -> Result<MeshAudit> {
        let mut min_area = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let a = self.signed_area(t);
            if !(a > 0.0) {
                return Err(FemError::Geometry(format!("triangle {t} has signed area {a}")));
            }
            min_area = min_area.min(a);
        }
        let mut uses: HashMap<[usize; 2], usize> = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                *uses.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default() += 1;
            }
        }
        let mut tagged: HashMap<[usize; 2], usize> = HashMap::new();
        for (e, _) in &self.boundary_edges {
            *tagged.entry(edge_key(e[0], e[1])).or_default() += 1;
        }
        for (e, &n) in &uses {
            let on_boundary = tagged.get(e).copied().unwrap_or(0);
            match (n, on_boundary) {
                (1, 1) | (2, 0) => {}
                _ => {
                    return Err(FemError::Geometry(format!(
                        "edge {e:?} used by {n} triangles, tagged {on_boundary} times"
                    )))
                }
            }
        }
        if tagged.len() != self.boundary_edges.len() || tagged.keys().any(|e| !uses.contains_key(e)) {
            return Err(FemError::Geometry("tagged boundary edge not in the mesh".into()));
        }
        let mut used = vec![false; self.nodes.len()];
        self.triangles.iter().flatten().for_each(|&i| used[i] = true);
        let vertices = used.iter().filter(|u| **u).count();
        let euler = vertices as i64 - uses.len() as i64 + self.triangles.len() as i64;
        if euler != expected_euler {
            return Err(FemError::Geometry(format!(
                "Euler characteristic {euler}, expected {expected_euler}"
            )));
        }
        Ok(MeshAudit {
            vertices,
            edges: uses.len(),
            faces: self.triangles.len(),
            euler_characteristic: euler,
            min_signed_area: min_area,
            total_area: self.total_area(),
        })
    }

    /// Structured mesh of `[x0, x0+side]×[y0, y0+side]` with `divisions²`
    /// squares, each cut along its rising diagonal; the whole boundary is
    /// tagged `OuterDirichlet`.
    pub fn square(origin: [f64; 2], side: f64, divisions: usize) -> Result<Self> {
        if divisions == 0 || !(side > 0.0) {
            return Err(FemError::Geometry("square needs positive side and divisions".into()));
        }
        let n = divisions;
        let h = side / n as f64;
        let id = |i: usize, j: usize| j * (n + 1) + i;
        let mut mesh = TriMesh::default();
        for j in 0..=n {
            for i in 0..=n {
                mesh.nodes.push([origin[0] + i as f64 * h, origin[1] + j as f64 * h]);
            }
        }
        for j in 0..n {
            for i in 0..n {
                let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                mesh.triangles.push([a, b, c]);
                mesh.triangles.push([a, c, d]);
            }
        }
        for k in 0..n {
            for e in [
                [id(k, 0), id(k + 1, 0)],
                [id(n, k), id(n, k + 1)],
                [id(k, n), id(k + 1, n)],
                [id(0, k), id(0, k + 1)],
            ] {
                mesh.boundary_edges.push((e, BoundaryTag::OuterDirichlet));
            }
        }
        Ok(mesh)
    }
}

pub fn signed_area(p: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

fn edge_key(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub index: [i64; 2],
    pub center: [f64; 2],
}

/// Matched pair of meshes sharing every node outside the holes: the first
/// `perforated.nodes.len()` nodes of `filled` are the perforated nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PerforatedMesh {
    pub eps: f64,
    pub hole_radius: f64,
    /// Sides of each hole polygon.
    pub polygon_sides: usize,
    /// Segments per cell side; the trace spacing is `ε / segments_per_cell`.
    pub segments_per_cell: usize,
    pub holes: Vec<Hole>,
    pub perforated: TriMesh,
    pub filled: TriMesh,
    /// Lattice index of the cell each perforated triangle lies in; `None` in
    /// the boundary strips.
    pub cell_map: Vec<Option<[i64; 2]>>,
}

impl PerforatedMesh {
    /// Area of the perforated variant if every hole were an exact polygon.
    pub fn polygonal_area(&self) -> f64 {
        let m = self.polygon_sides as f64;
        let polygon = 0.5 * m * self.hole_radius.powi(2) * (2.0 * PI / m).sin();
        1.0 - self.holes.len() as f64 * polygon
    }

    /// Runs [`TriMesh::audit`] on both variants.
    pub fn audit(&self) -> Result<(MeshAudit, MeshAudit)> {
        let holes = self.holes.len() as i64;
        Ok((self.perforated.audit(1 - holes)?, self.filled.audit(1)?))
    }

    pub fn shared_nodes(&self) -> usize {
        self.perforated.nodes.len()
    }
}

/// Number of cells per side for `ε = 1/k`.
pub fn cells_per_side(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(FemError::Tiling(format!("ε = {eps} is not in (0, 1]")));
    }
    let k = (1.0 / eps).round();
    if (k * eps - 1.0).abs() > 1e-12 {
        return Err(FemError::Tiling(format!("1/ε = {} is not an integer", 1.0 / eps)));
    }
    Ok(k as usize)
}

/// Sides of the hole polygon for a refinement level.
pub fn polygon_sides(refinement: u32) -> usize {
    16usize.max(4usize << refinement.min(20))
}

struct Builder {
    nodes: Vec<[f64; 2]>,
    keyed: HashMap<(i64, i64), usize>,
    /// Grid spacing `1/(k k_s)` for keyed nodes.
    h: f64,
}

impl Builder {
    fn keyed(&mut self, key: (i64, i64)) -> usize {
        let h = self.h;
        let nodes = &mut self.nodes;
        *self.keyed.entry(key).or_insert_with(|| {
            nodes.push([key.0 as f64 * h, key.1 as f64 * h]);
            nodes.len() - 1
        })
    }

    fn free(&mut self, p: [f64; 2]) -> usize {
        self.nodes.push(p);
        self.nodes.len() - 1
    }
}

pub fn build_mesh(params: &PerforationParams, eps: f64, refinement: u32) -> Result<PerforatedMesh> {
    if params.n != 2 {
        return Err(FemError::Contract(format!("meshes are two-dimensional, got n = {}", params.n)));
    }
    let k = cells_per_side(eps)?;
    let eps = 1.0 / k as f64;
    let d = params.d(eps);
    if !(d > 0.0) || d >= eps / 4.0 {
        return Err(FemError::Geometry(format!("hole radius {d} is not in (0, ε/4 = {})", eps / 4.0)));
    }
    let m = polygon_sides(refinement);
    let ks = m / 4;
    let half = (ks / 2) as i64;
    let total = (k * ks) as i64;
    let mut b = Builder { nodes: Vec::new(), keyed: HashMap::new(), h: 1.0 / total as f64 };

    let span = |block: usize| -> (i64, i64) {
        let c = (block * ks) as i64;
        let lo = if block == 0 { 0 } else { c - half };
        let hi = if block == k { total } else { c + half };
        (lo, hi)
    };

    let mut triangles = Vec::new();
    let mut cell_map = Vec::new();
    let mut boundary = Vec::new();
    let mut holes = Vec::new();
    let mut fans = Vec::new();

    // structured strips along ∂Ω
    for bi in 0..=k {
        for bj in 0..=k {
            let interior = (1..k).contains(&bi) && (1..k).contains(&bj);
            if interior {
                continue;
            }
            let (x0, x1) = span(bi);
            let (y0, y1) = span(bj);
            for x in x0..x1 {
                for y in y0..y1 {
                    let a = b.keyed((x, y));
                    let bb = b.keyed((x + 1, y));
                    let c = b.keyed((x + 1, y + 1));
                    let dd = b.keyed((x, y + 1));
                    triangles.push([a, bb, c]);
                    triangles.push([a, c, dd]);
                    cell_map.extend([None, None]);
                }
            }
        }
    }

    // polar templates
    let a = eps / 2.0;
    let rings = 2usize.max(((a / d).ln() / (1.0 + 2.0 * PI / m as f64).ln()).ceil() as usize);
    for bi in 1..k {
        for bj in 1..k {
            let hole_id = holes.len();
            let (ci, cj) = ((bi * ks) as i64, (bj * ks) as i64);
            let center = [ci as f64 * b.h, cj as f64 * b.h];
            holes.push(Hole { index: [bi as i64, bj as i64], center });

            let frame: Vec<usize> = (0..m as i64)
                .map(|l| {
                    let side = l / ks as i64;
                    let s = l % ks as i64;
                    let key = match side {
                        0 => (ci - half + s, cj - half),
                        1 => (ci + half, cj - half + s),
                        2 => (ci + half - s, cj + half),
                        _ => (ci - half, cj + half - s),
                    };
                    b.keyed(key)
                })
                .collect();
            let frame_pts: Vec<[f64; 2]> = frame.iter().map(|&i| b.nodes[i]).collect();
            let dirs: Vec<[f64; 2]> = (0..m)
                .map(|l| {
                    let theta = -0.75 * PI + 2.0 * PI * l as f64 / m as f64;
                    [theta.cos(), theta.sin()]
                })
                .collect();

            let mut ring_ids: Vec<Vec<usize>> = Vec::with_capacity(rings + 1);
            for j in 0..=rings {
                if j == rings {
                    ring_ids.push(frame.clone());
                    continue;
                }
                let rho = d * (a / d).powf(j as f64 / rings as f64);
                let w = (rho - d) / (a - d);
                let ids = (0..m)
                    .map(|l| {
                        let u = dirs[l];
                        let s = frame_pts[l];
                        let p = [
                            center[0] + (1.0 - w) * d * u[0] + w * (s[0] - center[0]),
                            center[1] + (1.0 - w) * d * u[1] + w * (s[1] - center[1]),
                        ];
                        b.free(p)
                    })
                    .collect();
                ring_ids.push(ids);
            }
            for j in 0..rings {
                for l in 0..m {
                    let l1 = (l + 1) % m;
                    let (n00, n01) = (ring_ids[j][l], ring_ids[j][l1]);
                    let (n10, n11) = (ring_ids[j + 1][l], ring_ids[j + 1][l1]);
                    let dist = |p: usize, q: usize| {
                        let (u, v) = (b.nodes[p], b.nodes[q]);
                        (u[0] - v[0]).hypot(u[1] - v[1])
                    };
                    if dist(n00, n11) <= dist(n01, n10) {
                        triangles.push([n00, n10, n11]);
                        triangles.push([n00, n11, n01]);
                    } else {
                        triangles.push([n00, n10, n01]);
                        triangles.push([n01, n10, n11]);
                    }
                    cell_map.extend([Some([bi as i64, bj as i64]); 2]);
                }
            }
            for l in 0..m {
                boundary.push(([ring_ids[0][l], ring_ids[0][(l + 1) % m]], BoundaryTag::Hole(hole_id)));
            }
            fans.push((center, ring_ids[0].clone()));
        }
    }

    // outer boundary
    for s in 0..total {
        for (p, q) in [
            ((s, 0), (s + 1, 0)),
            ((total, s), (total, s + 1)),
            ((s, total), (s + 1, total)),
            ((0, s), (0, s + 1)),
        ] {
            let e = [b.keyed(p), b.keyed(q)];
            boundary.push((e, BoundaryTag::OuterDirichlet));
        }
    }

    let perforated = TriMesh { nodes: b.nodes, triangles, boundary_edges: boundary };
    let mut filled = TriMesh {
        nodes: perforated.nodes.clone(),
        triangles: perforated.triangles.clone(),
        boundary_edges: perforated
            .boundary_edges
            .iter()
            .filter(|(_, t)| *t == BoundaryTag::OuterDirichlet)
            .cloned()
            .collect(),
    };
    for (center, circle) in fans {
        filled.nodes.push(center);
        let c = filled.nodes.len() - 1;
        for l in 0..m {
            filled.triangles.push([c, circle[l], circle[(l + 1) % m]]);
        }
    }

    Ok(PerforatedMesh {
        eps,
        hole_radius: d,
        polygon_sides: m,
        segments_per_cell: ks,
        holes,
        perforated,
        filled,
        cell_map,
    })
}
