//! ε-sweeps: matched meshes, both solves and normalised errors per ε.

use std::time::Instant;

use perfhom_core::corrector::CorrectorField;
use perfhom_core::regime::{
    limit_regime, perforation_numbers, rates_at, PerforationNumbers, PerforationParams, RateBundle,
    RateKey, Scenario,
};
use perfhom_femlab::assembly::{assemble, Problem};
use perfhom_femlab::mesh::{build_mesh, polygon_sides, PerforatedMesh};
use perfhom_femlab::norms::{error_norms, l2_norm, ErrorNorms};
use perfhom_femlab::solver::{solve_cg, DiscreteSolution};
use serde::{Deserialize, Serialize};

use crate::config::{ErrorKey, SolverSettings, SweepConfig};
use crate::error::{HarnessError, Result};
use crate::loads::Load;

/// Errors divided by `‖f‖_{L²(Ω)}`, maximised over the load dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeasuredErrors {
    pub l2: Option<f64>,
    pub h1: Option<f64>,
    pub h1_corrected: Option<f64>,
    /// `‖u_ε‖_{L²(Ω_ε)} / ‖f‖`.
    pub u_norm: f64,
}

impl MeasuredErrors {
    pub fn get(&self, key: ErrorKey) -> Option<f64> {
        match key {
            ErrorKey::L2 => self.l2,
            ErrorKey::H1 => self.h1,
            ErrorKey::H1Corrected => self.h1_corrected,
            ErrorKey::UNorm => Some(self.u_norm),
        }
    }

    fn absorb(&mut self, other: &MeasuredErrors) {
        let max = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        };
        self.l2 = max(self.l2, other.l2);
        self.h1 = max(self.h1, other.h1);
        self.h1_corrected = max(self.h1_corrected, other.h1_corrected);
        self.u_norm = self.u_norm.max(other.u_norm);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub numbers: PerforationNumbers,
    pub rates: RateBundle,
    pub errors: MeasuredErrors,
    pub per_load: Vec<(Load, MeasuredErrors)>,
    pub refinement: u32,
    /// `error / rate` for the headline pair: `l2/η` or `u_norm/th5`.
    pub fitted: Option<f64>,
    /// Excluded from reports so that they stay reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

/// Smallest level whose hole polygon satisfies `m⁻² ≤ 0.01 · η_ε` for the
/// smallest `η_ε` under test. Vanishing families only record `‖u_ε‖`, which
/// the polygon perturbs by a relative `O(m⁻²)`, so there `m⁻² ≤ 0.01`.
pub fn auto_refinement(params: &PerforationParams, eps_list: &[f64]) -> Result<u32> {
    let mut smallest = 1.0f64;
    for &eps in eps_list {
        if let Some(eta) = rates_at(params, eps)?.eta {
            smallest = smallest.min(eta);
        }
    }
    let mut level = 0;
    while (polygon_sides(level) as f64).powi(-2) > 0.01 * smallest {
        level += 1;
        if level > 8 {
            return Err(HarnessError::Config(format!("rate {smallest} needs an impractically fine hole polygon")));
        }
    }
    Ok(level)
}

/// Discrete solutions for one load: `u_ε` always, the homogenized solution
/// and the error norms unless the family has a vanishing limit.
#[derive(Debug, Clone)]
pub struct LoadSolution {
    pub u_eps: DiscreteSolution,
    pub u_hom: Option<DiscreteSolution>,
    pub norms: Option<ErrorNorms>,
}

pub fn solve_load(
    mesh: &PerforatedMesh,
    params: &PerforationParams,
    load: Load,
    with_limit: bool,
    with_corrector: bool,
    solver: SolverSettings,
) -> Result<LoadSolution> {
    let eps = mesh.eps;
    let f = move |x: f64, y: f64| load.eval(x, y);
    let se = assemble(mesh, params, eps, Problem::PerforatedRobin, &f)?;
    let u_eps = solve_cg(&se, solver.tol, solver.max_iter)?;
    let regime = limit_regime(params);
    if regime.scenario == Scenario::VanishingLimit || !with_limit {
        return Ok(LoadSolution { u_eps, u_hom: None, norms: None });
    }
    let potential = regime.v.expect("homogenized families have a limit potential");
    let sh = assemble(mesh, params, eps, Problem::Homogenized { potential }, &f)?;
    let u_hom = solve_cg(&sh, solver.tol, solver.max_iter)?;
    let corrector = if with_corrector { Some(CorrectorField::new(*params, eps)?) } else { None };
    let norms = error_norms(mesh, &u_eps, &u_hom, corrector.as_ref())?;
    Ok(LoadSolution { u_eps, u_hom: Some(u_hom), norms: Some(norms) })
}

/// Solves both problems for one load on a prepared mesh.
pub fn measure(
    mesh: &PerforatedMesh,
    params: &PerforationParams,
    load: Load,
    record: &[ErrorKey],
    solver: SolverSettings,
) -> Result<MeasuredErrors> {
    let norm_f = load.norm();
    let wants_errors = record.iter().any(|k| *k != ErrorKey::UNorm);
    let sol = solve_load(mesh, params, load, wants_errors, record.contains(&ErrorKey::H1Corrected), solver)?;
    let mut out = MeasuredErrors {
        u_norm: l2_norm(&mesh.perforated, &sol.u_eps.values) / norm_f,
        ..Default::default()
    };
    let Some(norms) = sol.norms else {
        return Ok(out);
    };
    if record.contains(&ErrorKey::L2) {
        out.l2 = Some(norms.l2 / norm_f);
    }
    if record.contains(&ErrorKey::H1) {
        out.h1 = Some(norms.h1 / norm_f);
    }
    out.h1_corrected = norms.h1_corrected.map(|v| v / norm_f);
    Ok(out)
}

pub fn run_point(config: &SweepConfig, eps: f64, refinement: u32) -> Result<SweepRow> {
    let start = Instant::now();
    let params = &config.params;
    let numbers = perforation_numbers(params, eps)?;
    let rates = rates_at(params, eps)?;
    let mesh = build_mesh(params, eps, refinement)?;
    let mut errors = MeasuredErrors::default();
    let mut per_load = Vec::with_capacity(config.loads.len());
    for &load in &config.loads {
        let e = measure(&mesh, params, load, &config.record, config.solver)?;
        errors.absorb(&e);
        per_load.push((load, e));
    }
    let fitted = match (errors.l2, rates.get(RateKey::Eta)) {
        (Some(err), Some(rate)) => Some(err / rate),
        _ => Some(errors.u_norm / rates.th5_bound),
    };
    Ok(SweepRow {
        eps,
        numbers,
        rates,
        errors,
        per_load,
        refinement,
        fitted,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs every ε of the configuration in order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let refinement = match config.refinement {
        Some(r) => r,
        None => auto_refinement(&config.params, &config.eps)?,
    };
    config
        .eps
        .iter()
        .map(|&eps| run_point(config, eps, refinement).map_err(|e| HarnessError::at(eps, e)))
        .collect()
}
