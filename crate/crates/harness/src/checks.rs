//! Identity and bound suites behind `corrector-check` and `abstract-check`.

use perfhom_core::corrector::{CorrectorField, Lattice};
use perfhom_core::quasiunitary::{
    delta_certificate, random_instance, resolvent_defect, spectral_bound_check, SpectralConstants,
};
use perfhom_core::regime::{validate_epsilon, PerforationParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const ROBIN_TOL: f64 = 1e-10;
pub const FLUX_TOL: f64 = 1e-12;
pub const SUP_TOL: f64 = 1e-12;
pub const DEFECT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCase {
    pub n: usize,
    pub s: f64,
    pub t: f64,
    pub eps: f64,
}

/// Power-law tuples `d = ε^s`, `γ = ε^t` over `n = 2..=6` with no
/// admissibility violation at `eps`.
pub fn corrector_grid() -> Result<Vec<PowerCase>> {
    let mut out = Vec::new();
    for n in 2..=6 {
        for s in [1.5, 1.8, 2.0, 2.5, 3.0] {
            for t in [-1.0, 0.0, 0.5, 1.0] {
                for eps in [0.1, 0.05, 0.02] {
                    let params = PerforationParams::power_laws(n, s, t)?;
                    if validate_epsilon(&params, eps)?.is_empty() {
                        out.push(PowerCase { n, s, t, eps });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectorRow {
    #[serde(flatten)]
    pub case: PowerCase,
    pub gamma: f64,
    /// Max of `|∂G/∂n + γ(G+1)|` over sampled boundary points.
    pub robin_residual: f64,
    pub flux_rel_error: f64,
    pub sup_sampled: f64,
    pub sup_exact: f64,
    pub sup_rel_error: f64,
    pub pass: bool,
}

pub fn corrector_row(case: PowerCase, samples: usize) -> Result<CorrectorRow> {
    let params = PerforationParams::power_laws(case.n, case.s, case.t)?;
    let field = CorrectorField::new(params, case.eps)?;
    let lattice = Lattice::unit_cube(case.n, case.eps)?;
    let index = lattice.nearest(&vec![0.5; case.n]).expect("unit cube has cells");
    let gamma = field.gamma();
    let robin_residual = field.check_robin_identity(&lattice, &index, samples);
    let strength = field.strength();
    let flux_rel_error = (field.flux_integral() - strength).abs() / strength;
    let sup_sampled = field.boundary_sup(&lattice, &index, samples);
    let sup_exact = field.boundary_sup_exact();
    let sup_rel_error = (sup_sampled - sup_exact).abs() / sup_exact;
    let pass = robin_residual <= ROBIN_TOL * gamma
        && flux_rel_error <= FLUX_TOL
        && sup_rel_error <= SUP_TOL
        && sup_exact <= 1.0;
    Ok(CorrectorRow { case, gamma, robin_residual, flux_rel_error, sup_sampled, sup_exact, sup_rel_error, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectorSummary {
    pub cases: usize,
    pub failures: usize,
    /// Largest `robin_residual / γ`.
    pub max_robin: f64,
    pub max_flux: f64,
    pub max_sup: f64,
}

pub fn corrector_suite(cases: &[PowerCase], samples: usize) -> Result<(Vec<CorrectorRow>, CorrectorSummary)> {
    let rows: Vec<CorrectorRow> = cases.iter().map(|&c| corrector_row(c, samples)).collect::<Result<_>>()?;
    let summary = CorrectorSummary {
        cases: rows.len(),
        failures: rows.iter().filter(|r| !r.pass).count(),
        max_robin: rows.iter().map(|r| r.robin_residual / r.gamma).fold(0.0, f64::max),
        max_flux: rows.iter().map(|r| r.flux_rel_error).fold(0.0, f64::max),
        max_sup: rows.iter().map(|r| r.sup_rel_error).fold(0.0, f64::max),
    };
    Ok((rows, summary))
}

/// One random finite-dimensional instance. Spectral columns are filled for
/// square instances, where both identification maps can be injective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbstractRow {
    pub seed: u64,
    pub dim_h: usize,
    pub dim_he: usize,
    pub delta: f64,
    #[serde(rename = "L2_defect")]
    pub l2_defect: f64,
    #[serde(rename = "4delta")]
    pub four_delta: f64,
    #[serde(rename = "H1_defect")]
    pub h1_defect: f64,
    #[serde(rename = "6delta")]
    pub six_delta: f64,
    #[serde(rename = "dH_spec")]
    pub dh_spec: Option<f64>,
    pub bound: Option<f64>,
}

impl AbstractRow {
    pub fn resolvent_bounds_hold(&self) -> bool {
        self.l2_defect <= self.four_delta + DEFECT_SLACK && self.h1_defect <= self.six_delta + DEFECT_SLACK
    }

    pub fn spectral_bound_holds(&self) -> bool {
        match (self.dh_spec, self.bound) {
            (Some(lhs), Some(rhs)) => lhs <= rhs + DEFECT_SLACK,
            _ => true,
        }
    }
}

/// Instance `i` uses seed `seed + i`; every other instance is square.
pub fn abstract_suite(instances: usize, max_dim: usize, seed: u64) -> Result<Vec<AbstractRow>> {
    let max_dim = max_dim.max(1);
    (0..instances as u64)
        .map(|i| {
            let s = seed + i;
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0xabcd_ef01);
            let h = rng.random_range(1..=max_dim);
            let he = if i % 2 == 0 { h } else { rng.random_range(1..=max_dim) };
            let coupling = rng.random_range(0.0..0.3);
            abstract_row(s, (h, he), coupling)
        })
        .collect()
}

pub fn abstract_row(seed: u64, dims: (usize, usize), coupling: f64) -> Result<AbstractRow> {
    let setup = random_instance(seed, dims, coupling)?;
    let delta = delta_certificate(&setup).delta;
    let defect = resolvent_defect(&setup);
    let spectral = match SpectralConstants::from_injective_maps(&setup) {
        Some(constants) => Some(spectral_bound_check(&setup, constants)?),
        None => None,
    };
    Ok(AbstractRow {
        seed,
        dim_h: dims.0,
        dim_he: dims.1,
        delta,
        l2_defect: defect.l2,
        four_delta: 4.0 * delta,
        h1_defect: defect.h1,
        six_delta: 6.0 * delta,
        dh_spec: spectral.map(|c| c.lhs),
        bound: spectral.map(|c| c.rhs),
    })
}
