//! Finite-dimensional model of two non-negative self-adjoint operators acting
//! in different Hilbert spaces and linked by identification maps.
//!
//! With `R = (A+I)^{-1}`, `R_ε = (A_ε+I)^{-1}` and identification maps
//! `J, J̃, J¹, J̃¹`, the minimal constants in the four closeness conditions are
//! plain operator norms, so the resolvent bounds `‖R_ε J − J R‖ ≤ 4δ`,
//! `‖R_ε J − J¹ R‖_{H→H¹_ε} ≤ 6δ` and the spectral bound can be checked
//! exactly with dense linear algebra.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Largest singular value.
pub fn op_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// `f(M)` for symmetric `M` via its eigendecomposition.
pub fn sym_apply(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let mut scaled = eig.eigenvectors.clone();
    for (j, &lam) in eig.eigenvalues.iter().enumerate() {
        let s = f(lam);
        scaled.column_mut(j).scale_mut(s);
    }
    scaled * eig.eigenvectors.transpose()
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

fn check_psd(name: &str, m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::Dimension(format!("{name} must be square and non-empty")));
    }
    let scale = 1.0f64.max(m.amax());
    if (m - m.transpose()).amax() > SYMMETRY_TOL * scale {
        return Err(Error::Domain(format!("{name} is not symmetric")));
    }
    let min = sym_eigenvalues(m)[0];
    if min < -PSD_TOL * scale {
        return Err(Error::Domain(format!("{name} has negative eigenvalue {min}")));
    }
    Ok(())
}

/// The operators `A` on `H` and `A_ε` on `H_ε` (standard inner products).
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertPair {
    pub a: DMatrix<f64>,
    pub a_eps: DMatrix<f64>,
}

impl HilbertPair {
    pub fn new(a: DMatrix<f64>, a_eps: DMatrix<f64>) -> Result<Self> {
        check_psd("A", &a)?;
        check_psd("A_eps", &a_eps)?;
        Ok(Self { a, a_eps })
    }

    pub fn dim_h(&self) -> usize {
        self.a.nrows()
    }

    pub fn dim_he(&self) -> usize {
        self.a_eps.nrows()
    }

    /// `(A+I)^{-1}`.
    pub fn resolvent(&self) -> DMatrix<f64> {
        sym_apply(&self.a, |l| 1.0 / (1.0 + l))
    }

    /// `(A_ε+I)^{-1}`.
    pub fn resolvent_eps(&self) -> DMatrix<f64> {
        sym_apply(&self.a_eps, |l| 1.0 / (1.0 + l))
    }
}

/// Operator pair plus the four identification maps.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiUnitarySetup {
    pub pair: HilbertPair,
    /// `J: H → H_ε`.
    pub j: DMatrix<f64>,
    /// `J̃: H_ε → H`.
    pub j_tilde: DMatrix<f64>,
    /// `J¹: H¹ → H¹_ε`.
    pub j1: DMatrix<f64>,
    /// `J̃¹: H¹_ε → H¹`.
    pub j1_tilde: DMatrix<f64>,
}

impl QuasiUnitarySetup {
    pub fn new(
        pair: HilbertPair,
        j: DMatrix<f64>,
        j_tilde: DMatrix<f64>,
        j1: DMatrix<f64>,
        j1_tilde: DMatrix<f64>,
    ) -> Result<Self> {
        let (h, he) = (pair.dim_h(), pair.dim_he());
        for (name, m, rows, cols) in [
            ("J", &j, he, h),
            ("J_tilde", &j_tilde, h, he),
            ("J1", &j1, he, h),
            ("J1_tilde", &j1_tilde, h, he),
        ] {
            if m.shape() != (rows, cols) {
                return Err(Error::Dimension(format!(
                    "{name} is {:?}, expected {:?}",
                    m.shape(),
                    (rows, cols)
                )));
            }
        }
        Ok(Self { pair, j, j_tilde, j1, j1_tilde })
    }

    /// Identical systems linked by identity maps.
    pub fn identity(a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let id = DMatrix::identity(n, n);
        Self::new(HilbertPair::new(a.clone(), a)?, id.clone(), id.clone(), id.clone(), id)
    }
}

/// Minimal constants for the four closeness conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    /// `‖J* − J̃‖`.
    pub delta0: f64,
    /// `‖(J¹ − J)(A+I)^{-1/2}‖`.
    pub delta1: f64,
    /// `‖J̃¹ − J̃‖`.
    pub delta2: f64,
    /// `‖(A_ε+I)^{-1/2}(A_ε J¹ − J̃¹* A)(A+I)^{-1}‖`.
    pub delta3: f64,
    pub delta: f64,
}

pub fn delta_certificate(setup: &QuasiUnitarySetup) -> DeltaCertificate {
    let QuasiUnitarySetup { pair, j, j_tilde, j1, j1_tilde } = setup;
    let half_inv = sym_apply(&pair.a, |l| (1.0 + l).powf(-0.5));
    let half_inv_eps = sym_apply(&pair.a_eps, |l| (1.0 + l).powf(-0.5));
    let resolvent = pair.resolvent();

    let delta0 = op_norm(&(j.transpose() - j_tilde));
    let delta1 = op_norm(&((j1 - j) * &half_inv));
    let delta2 = op_norm(&(j1_tilde - j_tilde));
    let form_defect = &pair.a_eps * j1 - j1_tilde.transpose() * &pair.a;
    let delta3 = op_norm(&(half_inv_eps * form_defect * resolvent));
    DeltaCertificate {
        delta0,
        delta1,
        delta2,
        delta3,
        delta: delta0.max(delta1).max(delta2).max(delta3),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventDefect {
    /// `‖R_ε J − J R‖_{H→H_ε}`.
    pub l2: f64,
    /// `‖(A_ε+I)^{1/2}(R_ε J − J¹ R)‖`, the `H → H¹_ε` norm.
    pub h1: f64,
}

pub fn resolvent_defect(setup: &QuasiUnitarySetup) -> ResolventDefect {
    let pair = &setup.pair;
    let r = pair.resolvent();
    let r_eps = pair.resolvent_eps();
    let l2 = op_norm(&(&r_eps * &setup.j - &setup.j * &r));
    let half_eps = sym_apply(&pair.a_eps, |l| (1.0 + l).sqrt());
    let h1 = op_norm(&(half_eps * (&r_eps * &setup.j - &setup.j1 * &r)));
    ResolventDefect { l2, h1 }
}

/// `‖J̃ R_ε − R J̃‖_{H_ε→H}`.
pub fn adjoint_resolvent_defect(setup: &QuasiUnitarySetup) -> f64 {
    let pair = &setup.pair;
    op_norm(&(&setup.j_tilde * pair.resolvent_eps() - pair.resolvent() * &setup.j_tilde))
}

/// Hausdorff distance between two non-empty finite subsets of `ℝ`.
pub fn hausdorff(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    let directed = |from: &[f64], to: &[f64]| {
        from.iter()
            .map(|a| to.iter().map(|b| (a - b).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(x, y).max(directed(y, x)))
}

/// `d_H` after mapping both sets through `x ↦ 1/(1+x)`.
pub fn tilde_hausdorff(x: &[f64], y: &[f64]) -> Result<f64> {
    let map = |s: &[f64]| -> Result<Vec<f64>> {
        s.iter()
            .map(|&v| {
                if v < 0.0 || v.is_nan() {
                    Err(Error::Domain(format!("negative spectral value {v}")))
                } else {
                    Ok(1.0 / (1.0 + v))
                }
            })
            .collect()
    };
    hausdorff(&map(x)?, &map(y)?)
}

/// Constants in the lower bounds `‖f‖² ≤ μ‖Jf‖² + ν a[f,f]` and
/// `‖u‖² ≤ μ̃‖J̃u‖² + ν̃ a_ε[u,u]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConstants {
    pub mu: f64,
    pub nu: f64,
    pub mu_tilde: f64,
    pub nu_tilde: f64,
}

impl SpectralConstants {
    /// `ν = ν̃ = 0`, `μ = ‖(J*J)^{-1}‖`, `μ̃ = ‖(J̃*J̃)^{-1}‖`; `None` if either
    /// map fails to be injective.
    pub fn from_injective_maps(setup: &QuasiUnitarySetup) -> Option<Self> {
        let inv_min = |m: &DMatrix<f64>| {
            let gram = m.transpose() * m;
            let min = sym_eigenvalues(&gram)[0];
            let scale = 1.0f64.max(gram.amax());
            (min > 1e-10 * scale).then(|| 1.0 / min)
        };
        Some(Self {
            mu: inv_min(&setup.j)?,
            nu: 0.0,
            mu_tilde: inv_min(&setup.j_tilde)?,
            nu_tilde: 0.0,
        })
    }
}

/// `ν/2 + √(ν²/4 + ρ²μ)`.
pub fn spectral_rate(rho: f64, mu: f64, nu: f64) -> f64 {
    nu / 2.0 + (nu * nu / 4.0 + rho * rho * mu).sqrt()
}

/// Numerical `inf_{τ∈(0,1)} max{ρ√(μ/τ), ν/(1−τ)}` by bisection on the
/// crossing of the decreasing and increasing branches.
pub fn minimize_over_tau(rho: f64, mu: f64, nu: f64) -> f64 {
    let first = |tau: f64| rho * (mu / tau).sqrt();
    let second = |tau: f64| nu / (1.0 - tau);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if first(mid) > second(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the infimum sits between the two bracketing points
    let at = |tau: f64| {
        if tau <= 0.0 {
            if rho * mu.sqrt() == 0.0 { nu } else { f64::INFINITY }
        } else if tau >= 1.0 {
            if nu == 0.0 { rho * mu.sqrt() } else { f64::INFINITY }
        } else {
            first(tau).max(second(tau))
        }
    };
    at(lo).min(at(hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralCheck {
    /// `d̃_H(σ(A_ε), σ(A))`.
    pub lhs: f64,
    pub rhs: f64,
    pub rho: f64,
    pub rho_tilde: f64,
}

impl SpectralCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-9
    }
}

/// Verifies the two lower bounds for the supplied constants, then compares
/// the distance between spectra with the bound.
pub fn spectral_bound_check(
    setup: &QuasiUnitarySetup,
    constants: SpectralConstants,
) -> Result<SpectralCheck> {
    let pair = &setup.pair;
    let SpectralConstants { mu, nu, mu_tilde, nu_tilde } = constants;
    check_lower_bound("μ J*J + ν A − I", &setup.j, &pair.a, mu, nu)?;
    check_lower_bound("μ̃ J̃*J̃ + ν̃ A_ε − I", &setup.j_tilde, &pair.a_eps, mu_tilde, nu_tilde)?;

    let rho = resolvent_defect(setup).l2;
    let rho_tilde = adjoint_resolvent_defect(setup);
    let lhs = tilde_hausdorff(&sym_eigenvalues(&pair.a_eps), &sym_eigenvalues(&pair.a))?;
    let rhs = spectral_rate(rho, mu, nu).max(spectral_rate(rho_tilde, mu_tilde, nu_tilde));
    Ok(SpectralCheck { lhs, rhs, rho, rho_tilde })
}

fn check_lower_bound(
    name: &str,
    map: &DMatrix<f64>,
    op: &DMatrix<f64>,
    mu: f64,
    nu: f64,
) -> Result<()> {
    if mu < 0.0 || nu < 0.0 {
        return Err(Error::Hypothesis(format!("{name}: constants must be non-negative")));
    }
    let n = op.nrows();
    let m = map.transpose() * map * mu + op * nu - DMatrix::identity(n, n);
    let min = sym_eigenvalues(&m)[0];
    let scale = 1.0f64.max(m.amax());
    if min < -1e-9 * scale {
        return Err(Error::Hypothesis(format!("{name} has eigenvalue {min} < 0")));
    }
    Ok(())
}

/// Deterministic pseudo-random setup with `dim_h = dims.0`, `dim_he = dims.1`.
///
/// `A` is Wishart; `J = U + c·N` with `U` an isometry (or co-isometry when
/// `dim_he < dim_h`), `J̃ = U* + c·N` and likewise for `J¹, J̃¹`;
/// `A_ε = U A U* + P⊥ B P⊥ + c·E E*` so that `U` intertwines the unperturbed
/// operators. Each noise matrix has operator norm about one.
pub fn random_instance(seed: u64, dims: (usize, usize), coupling_scale: f64) -> Result<QuasiUnitarySetup> {
    let (h, he) = dims;
    if h == 0 || he == 0 {
        return Err(Error::Dimension("dimensions must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gaussian = |rows: usize, cols: usize| {
        DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
    };

    let w = gaussian(h, h);
    let a = &w * w.transpose() / h as f64;

    let u = if he >= h {
        gaussian(he, h).qr().q()
    } else {
        gaussian(h, he).qr().q().transpose()
    };
    let proj_perp = DMatrix::identity(he, he) - &u * u.transpose();
    let wb = gaussian(he, he);
    let b = &wb * wb.transpose() / he as f64;

    let mut noise = |rows: usize, cols: usize| {
        gaussian(rows, cols) / (2.0 * (rows.max(cols) as f64).sqrt())
    };
    let e = noise(he, he);
    let mut a_eps = &u * &a * u.transpose() + &proj_perp * b * &proj_perp
        + &e * e.transpose() * coupling_scale;
    a_eps = (&a_eps + a_eps.transpose()) * 0.5;

    let j = &u + noise(he, h) * coupling_scale;
    let j_tilde = u.transpose() + noise(h, he) * coupling_scale;
    let j1 = &u + noise(he, h) * coupling_scale;
    let j1_tilde = u.transpose() + noise(h, he) * coupling_scale;

    let a = (&a + a.transpose()) * 0.5;
    QuasiUnitarySetup::new(HilbertPair::new(a, a_eps)?, j, j_tilde, j1, j1_tilde)
}
