//! Lattice geometry, cut-off profiles and the corrector fields.
//!
//! Each hole `D_iε` (ball of radius `d_ε` about `x_iε = iε`) carries the
//! scaled fundamental solution
//!
//! ```text
//! G_iε(x) = -V_ε εⁿ / (κ_n (n-2) |x - x_iε|^{n-2})    n ≥ 3
//! G_iε(x) =  V_ε ε² ln|x - x_iε| / (2π)               n = 2
//! ```
//!
//! which satisfies `∂G/∂n + γ_ε (G + 1) = 0` on `∂D_iε` with the normal
//! pointing into the hole, and carries total flux `V_ε εⁿ`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regime::{perforation_numbers, PerforationNumbers, PerforationParams};
use crate::sphere::sample_unit_sphere;

const GL10_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

const BUMP_PANELS: usize = 16;

/// `exp(-1/((t-1)(2-t)))` on `(1,2)`, zero elsewhere.
pub fn bump(t: f64) -> f64 {
    if t <= 1.0 || t >= 2.0 {
        0.0
    } else {
        (-1.0 / ((t - 1.0) * (2.0 - t))).exp()
    }
}

fn bump_integral(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / BUMP_PANELS as f64;
    let mut sum = 0.0;
    for p in 0..BUMP_PANELS {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for (x, w) in GL10_NODES.iter().zip(GL10_WEIGHTS) {
            sum += w * half * (bump(mid - half * x) + bump(mid + half * x));
        }
    }
    sum
}

fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| bump_integral(1.0, 2.0))
}

/// Smooth cut-off: `1` on `[0,1]`, `0` on `[2,∞)`, and on `(1,2)` the
/// normalised integral of the bump from `t` to `2`. Returns `(φ(t), φ'(t))`.
pub fn cutoff_phi(t: f64) -> (f64, f64) {
    if t <= 1.0 {
        (1.0, 0.0)
    } else if t >= 2.0 {
        (0.0, 0.0)
    } else {
        let z = bump_mass();
        // integrate over the shorter side for accuracy near the ends
        let value = if t < 1.5 {
            1.0 - bump_integral(1.0, t) / z
        } else {
            bump_integral(t, 2.0) / z
        };
        (value, -bump(t) / z)
    }
}

/// Axis-aligned box `Ω` with the cells `ε(□ + i)` that fit inside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub eps: f64,
    /// Inclusive per-axis index ranges; the index set is their product.
    ranges: Vec<(i64, i64)>,
}

impl Lattice {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, eps: f64) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Dimension("box corners must have equal, non-zero length".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("cell size must be positive, got {eps}")));
        }
        let tol = 1e-9;
        let ranges = lower
            .iter()
            .zip(&upper)
            .map(|(&lo, &hi)| {
                let first = (lo / eps + 0.5 - tol).ceil() as i64;
                let last = (hi / eps - 0.5 + tol).floor() as i64;
                (first, last)
            })
            .collect();
        Ok(Self { lower, upper, eps, ranges })
    }

    pub fn unit_cube(n: usize, eps: f64) -> Result<Self> {
        Self::new(vec![0.0; n], vec![1.0; n], eps)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, index: &[i64]) -> bool {
        index.len() == self.dim()
            && index.iter().zip(&self.ranges).all(|(i, (a, b))| a <= i && i <= b)
    }

    pub fn len(&self) -> usize {
        self.ranges.iter().map(|(a, b)| (b - a + 1).max(0) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All indices in lexicographic order (last axis fastest).
    pub fn index_set(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &(a, b) in &self.ranges {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (a..=b).map(move |i| {
                        let mut v = prefix.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        if self.is_empty() {
            out.clear();
        }
        out
    }

    pub fn center(&self, index: &[i64]) -> Vec<f64> {
        index.iter().map(|&i| i as f64 * self.eps).collect()
    }

    /// Index of the lattice point nearest to `x`, if its cell is in the set.
    pub fn nearest(&self, x: &[f64]) -> Option<Vec<i64>> {
        let index: Vec<i64> = x.iter().map(|c| (c / self.eps).round() as i64).collect();
        self.contains(&index).then_some(index)
    }

    /// Mean of `f` over the cell `ε(□ + i)` by tensor-product Gauss quadrature
    /// with five points per axis.
    pub fn cell_mean(&self, index: &[i64], f: &dyn Fn(&[f64]) -> f64) -> f64 {
        let n = self.dim();
        let center = self.center(index);
        let half = 0.5 * self.eps;
        let total = 5usize.pow(n as u32);
        let mut x = vec![0.0; n];
        let mut sum = 0.0;
        for flat in 0..total {
            let mut rest = flat;
            let mut w = 1.0;
            for k in 0..n {
                let q = rest % 5;
                rest /= 5;
                x[k] = center[k] + half * GL5_NODES[q];
                w *= GL5_WEIGHTS[q];
            }
            sum += w * f(&x);
        }
        // weights sum to 2 per axis
        sum / 2f64.powi(n as i32)
    }
}

/// Radii describing one periodicity cell around its hole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellGeometry {
    /// `d_ε`.
    pub hole_radius: f64,
    /// Outer radius `ε/2` of the annulus `Y_iε`.
    pub annulus_radius: f64,
    /// Inner radius `ε/4` of the transition shell where `φ_iε` varies.
    pub shell_inner: f64,
    /// `d̃_ε`: `2d_ε` for `n ≥ 3`, `√(ε d_ε)` for `n = 2`.
    pub cutoff_radius: f64,
}

impl CellGeometry {
    pub fn new(params: &PerforationParams, eps: f64) -> Result<Self> {
        let d = params.d(eps);
        if d >= eps / 2.0 {
            return Err(Error::Geometry(format!("hole radius {d} does not fit in cell {eps}")));
        }
        let cutoff_radius = if params.n == 2 { (eps * d).sqrt() } else { 2.0 * d };
        Ok(Self {
            hole_radius: d,
            annulus_radius: eps / 2.0,
            shell_inner: eps / 4.0,
            cutoff_radius,
        })
    }

    /// `F_iε ⊆ Y_iε`.
    pub fn cutoff_inside_annulus(&self) -> bool {
        self.cutoff_radius <= self.annulus_radius
    }
}

/// Corrector data for one `(params, ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectorField {
    pub params: PerforationParams,
    pub eps: f64,
    pub numbers: PerforationNumbers,
    pub geometry: CellGeometry,
    kappa: f64,
}

/// Value and gradient of a scalar field.
pub type ValueGrad = (f64, Vec<f64>);

impl CorrectorField {
    pub fn new(params: PerforationParams, eps: f64) -> Result<Self> {
        let numbers = perforation_numbers(&params, eps)?;
        let geometry = CellGeometry::new(&params, eps)?;
        Ok(Self { params, eps, numbers, geometry, kappa: params.kappa() })
    }

    pub fn dim(&self) -> usize {
        self.params.n
    }

    pub fn hole_radius(&self) -> f64 {
        self.geometry.hole_radius
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma(self.eps)
    }

    /// `V_ε εⁿ`, the flux carried by each `G_iε`.
    pub fn strength(&self) -> f64 {
        self.numbers.v_eps * self.eps.powi(self.params.n as i32)
    }

    /// `(G(r), G'(r))` for the radial kernel.
    pub fn kernel(&self, r: f64) -> (f64, f64) {
        let n = self.params.n;
        let c = self.strength();
        if n == 2 {
            (c / (2.0 * PI) * r.ln(), c / (2.0 * PI * r))
        } else {
            let nf = n as f64;
            let value = -c / (self.kappa * (nf - 2.0) * r.powi(n as i32 - 2));
            let slope = c / (self.kappa * r.powi(n as i32 - 1));
            (value, slope)
        }
    }

    /// `(φ_iε, dφ_iε/dr)` with `φ_iε = φ(4r/ε)`.
    pub fn outer_cutoff(&self, r: f64) -> (f64, f64) {
        let scale = 4.0 / self.eps;
        let (v, dv) = cutoff_phi(scale * r);
        (v, scale * dv)
    }

    /// `(φ̃_iε, dφ̃_iε/dr)`: `φ(r/d_ε)` for `n ≥ 3`; the logarithmic
    /// profile between `d_ε` and `√(ε d_ε)` for `n = 2`.
    pub fn inner_cutoff(&self, r: f64) -> (f64, f64) {
        let d = self.hole_radius();
        if self.params.n == 2 {
            let outer = (self.eps * d).sqrt();
            if r >= outer {
                (0.0, 0.0)
            } else if r <= d {
                (1.0, 0.0)
            } else {
                let denom = d.ln() - outer.ln();
                ((r.ln() - outer.ln()) / denom, 1.0 / (r * denom))
            }
        } else {
            let (v, dv) = cutoff_phi(r / d);
            (v, dv / d)
        }
    }

    /// `G_iε` and its gradient at `x`.
    pub fn eval_g_i(&self, lattice: &Lattice, index: &[i64], x: &[f64]) -> Result<ValueGrad> {
        self.check_point(x)?;
        let center = lattice.center(index);
        self.eval_g_at(&center, x)
    }

    fn eval_g_at(&self, center: &[f64], x: &[f64]) -> Result<ValueGrad> {
        let diff: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
        let r = norm(&diff);
        if r == 0.0 {
            return Err(Error::Singularity);
        }
        let (g, dg) = self.kernel(r);
        Ok((g, diff.iter().map(|c| dg * c / r).collect()))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "point of length {} in dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Nearest hole whose cut-off region could contain `x`, with the offset
    /// from its centre; errors if `x` lies inside a hole.
    fn locate(&self, lattice: &Lattice, x: &[f64]) -> Result<Option<(Vec<i64>, Vec<f64>, f64)>> {
        self.check_point(x)?;
        let Some(index) = lattice.nearest(x) else {
            return Ok(None);
        };
        let center = lattice.center(&index);
        let diff: Vec<f64> = x.iter().zip(&center).map(|(a, b)| a - b).collect();
        let r = norm(&diff);
        if r < self.hole_radius() * (1.0 - 1e-12) {
            return Err(Error::Domain(format!("point {x:?} lies inside hole {index:?}")));
        }
        Ok(Some((index, diff, r)))
    }

    /// `G_ε(x) = Σ_i G_iε(x) φ_iε(x)` and its gradient. At most one term is
    /// non-zero since `supp φ_iε` lies inside the cell.
    pub fn eval_corrector(&self, lattice: &Lattice, x: &[f64]) -> Result<ValueGrad> {
        let zero = (0.0, vec![0.0; x.len()]);
        let Some((_, diff, r)) = self.locate(lattice, x)? else {
            return Ok(zero);
        };
        if r >= self.geometry.annulus_radius || self.numbers.v_eps == 0.0 {
            return Ok(zero);
        }
        let (g, dg) = self.kernel(r);
        let (phi, dphi) = self.outer_cutoff(r);
        let radial = dg * phi + g * dphi;
        Ok((g * phi, diff.iter().map(|c| radial * c / r).collect()))
    }

    /// `(J¹_ε f)(x)` with the cell mean of `f` computed by quadrature.
    pub fn eval_j1(&self, lattice: &Lattice, f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Result<f64> {
        let mean = match self.locate(lattice, x)? {
            Some((index, _, r)) if r < self.geometry.annulus_radius => lattice.cell_mean(&index, f),
            _ => 0.0,
        };
        self.eval_j1_with_mean(lattice, f, mean, x)
    }

    /// `f(x) + Σ_i [(f_iε - f(x)) φ̃_iε(x) + f_iε G_iε(x) φ_iε(x)]`, where
    /// `mean` is `f_iε` for the cell containing `x`.
    pub fn eval_j1_with_mean(
        &self,
        lattice: &Lattice,
        f: &dyn Fn(&[f64]) -> f64,
        mean: f64,
        x: &[f64],
    ) -> Result<f64> {
        let fx = f(x);
        let Some((_, _, r)) = self.locate(lattice, x)? else {
            return Ok(fx);
        };
        if r >= self.geometry.annulus_radius {
            return Ok(fx);
        }
        let (tilde, _) = self.inner_cutoff(r);
        let (phi, _) = self.outer_cutoff(r);
        let (g, _) = self.kernel(r);
        Ok(fx + (mean - fx) * tilde + mean * g * phi)
    }

    /// Points `x_iε + d_ε u` on the boundary of hole `index`.
    pub fn boundary_samples(&self, lattice: &Lattice, index: &[i64], count: usize) -> Vec<Vec<f64>> {
        let center = lattice.center(index);
        let d = self.hole_radius();
        sample_unit_sphere(self.dim(), count, 0x5eed)
            .into_iter()
            .map(|u| center.iter().zip(&u).map(|(c, e)| c + d * e).collect())
            .collect()
    }

    /// Offsets `d_ε u` from a hole centre to its boundary. The identities
    /// below are evaluated on these directly: going through global
    /// coordinates costs about `|x|/d_ε` ulps in `r`.
    fn boundary_offsets(&self, count: usize) -> Vec<Vec<f64>> {
        let d = self.hole_radius();
        sample_unit_sphere(self.dim(), count, 0x5eed)
            .into_iter()
            .map(|u| u.iter().map(|e| d * e).collect())
            .collect()
    }

    /// Max over sampled boundary points of `|∂G/∂n + γ_ε (G + 1)|`, the
    /// normal being the exterior normal of `Ω_ε` (pointing at the centre).
    /// The kernel is translation invariant, so the hole index only fixes
    /// which cell is meant.
    pub fn check_robin_identity(&self, _lattice: &Lattice, _index: &[i64], sample_count: usize) -> f64 {
        let gamma = self.gamma();
        let origin = vec![0.0; self.dim()];
        self.boundary_offsets(sample_count)
            .iter()
            .map(|diff| {
                let (g, grad) = self.eval_g_at(&origin, diff).expect("boundary point off-centre");
                let r = norm(diff);
                let dn: f64 = -grad.iter().zip(diff).map(|(g, c)| g * c / r).sum::<f64>();
                (dn + gamma * (g + 1.0)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `-∫_{∂D_iε} ∂G_iε/∂n ds`; the normal derivative is constant on the
    /// sphere, so this is `G'(d_ε)` times the surface area `κ_n d_ε^{n-1}`.
    pub fn flux_integral(&self) -> f64 {
        let d = self.hole_radius();
        let (_, slope) = self.kernel(d);
        let normal_derivative = -slope;
        -normal_derivative * self.kappa * d.powi(self.params.n as i32 - 1)
    }

    /// Sampled `sup_{∂D_iε} |G_iε|`.
    pub fn boundary_sup(&self, _lattice: &Lattice, _index: &[i64], sample_count: usize) -> f64 {
        let origin = vec![0.0; self.dim()];
        self.boundary_offsets(sample_count)
            .iter()
            .map(|diff| self.eval_g_at(&origin, diff).expect("boundary point off-centre").0.abs())
            .fold(0.0, f64::max)
    }

    /// `P_ε/(P_ε + Q_ε)`, the value `|G_iε|` takes on `∂D_iε`.
    pub fn boundary_sup_exact(&self) -> f64 {
        let PerforationNumbers { p_eps, q_eps, .. } = self.numbers;
        if p_eps == 0.0 {
            0.0
        } else {
            p_eps / (p_eps + q_eps)
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}
