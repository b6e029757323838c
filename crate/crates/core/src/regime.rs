//! Parameter algebra of the perforated problem.
//!
//! The hole radius `d_ε` and the Robin coefficient `γ_ε` are power-log laws
//! `c·ε^s·|ln ε|^p`. From them we get the two dimensionless quantities
//!
//! ```text
//! P_ε = κ_n γ_ε d_ε^{n-1} / ε^n
//! Q_ε = (n-2) κ_n d_ε^{n-2} / ε^n        (n ≥ 3)
//! Q_ε = 2π / (|ln d_ε| ε²)               (n = 2)
//! V_ε = P_ε Q_ε / (P_ε + Q_ε)
//! ```
//!
//! whose limits decide whether solutions vanish or converge to the solution of
//! `-Δu + Vu + u = f`. All limits are read off the exponents exactly.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent sums closer to zero than this are treated as exactly zero.
///
/// Exponents enter as decimal floats (e.g. `5/3` for `n/(n-2)` at `n = 5`),
/// so sums that vanish in exact arithmetic can carry a rounding residue.
pub const EXPONENT_TOL: f64 = 1e-12;

fn exponent_sign(a: f64) -> Ordering {
    if a.abs() <= EXPONENT_TOL {
        Ordering::Equal
    } else if a > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Surface area `κ_n = 2π^{n/2}/Γ(n/2)` of the unit sphere in `ℝⁿ`.
pub fn sphere_area(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("sphere area needs n >= 2, got {n}")));
    }
    // κ_{n+2} = 2π κ_n / n
    let (mut k, mut area) = if n % 2 == 0 { (2, 2.0 * PI) } else { (3, 4.0 * PI) };
    while k < n {
        area *= 2.0 * PI / k as f64;
        k += 2;
    }
    Ok(area)
}

/// `coefficient · ε^exponent · |ln ε|^log_power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaw {
    pub coefficient: f64,
    pub exponent: f64,
    #[serde(default)]
    pub log_power: i32,
}

impl ScalingLaw {
    pub fn new(coefficient: f64, exponent: f64, log_power: i32) -> Result<Self> {
        let law = Self { coefficient, exponent, log_power };
        law.check_positive()?;
        Ok(law)
    }

    /// `ε^exponent`.
    pub fn power(exponent: f64) -> Self {
        Self { coefficient: 1.0, exponent, log_power: 0 }
    }

    /// The identically vanishing law, used for `γ_ε = 0` (Neumann holes).
    pub fn zero() -> Self {
        Self { coefficient: 0.0, exponent: 0.0, log_power: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient == 0.0
    }

    fn check_finite(&self) -> Result<()> {
        if !self.coefficient.is_finite() || !self.exponent.is_finite() {
            return Err(Error::Domain(format!("non-finite scaling law {self}")));
        }
        if self.coefficient < 0.0 {
            return Err(Error::Domain(format!("negative coefficient in {self}")));
        }
        Ok(())
    }

    fn check_positive(&self) -> Result<()> {
        self.check_finite()?;
        if self.coefficient <= 0.0 {
            return Err(Error::Domain(format!("coefficient must be positive in {self}")));
        }
        Ok(())
    }

    pub fn eval(&self, eps: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let mut v = self.coefficient * eps.powf(self.exponent);
        if self.log_power != 0 {
            v *= eps.ln().abs().powi(self.log_power);
        }
        v
    }
}

impl fmt::Display for ScalingLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·ε^{}", self.coefficient, self.exponent)?;
        if self.log_power != 0 {
            write!(f, "·|ln ε|^{}", self.log_power)?;
        }
        Ok(())
    }
}

/// The complete problem family: dimension, hole radius law and Robin law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerforationParams {
    pub n: usize,
    #[serde(rename = "d")]
    pub d_law: ScalingLaw,
    #[serde(rename = "gamma")]
    pub gamma_law: ScalingLaw,
}

impl PerforationParams {
    pub fn new(n: usize, d_law: ScalingLaw, gamma_law: ScalingLaw) -> Result<Self> {
        let p = Self { n, d_law, gamma_law };
        p.validate()?;
        Ok(p)
    }

    /// `d_ε = ε^s`, `γ_ε = ε^t`.
    pub fn power_laws(n: usize, s: f64, t: f64) -> Result<Self> {
        Self::new(n, ScalingLaw::power(s), ScalingLaw::power(t))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {}", self.n)));
        }
        self.d_law.check_positive()?;
        self.gamma_law.check_finite()?;
        // Λ_ε = d_ε/ε → 0
        let excess = self.d_law.exponent - 1.0;
        let shrinks = match exponent_sign(excess) {
            Ordering::Greater => true,
            Ordering::Equal => self.d_law.log_power < 0,
            Ordering::Less => false,
        };
        if !shrinks {
            return Err(Error::Domain(format!(
                "hole radius {} does not satisfy d_ε/ε → 0",
                self.d_law
            )));
        }
        Ok(())
    }

    pub fn d(&self, eps: f64) -> f64 {
        self.d_law.eval(eps)
    }

    pub fn gamma(&self, eps: f64) -> f64 {
        self.gamma_law.eval(eps)
    }

    pub fn kappa(&self) -> f64 {
        sphere_area(self.n).expect("validated dimension")
    }

    /// `P_ε` as a power-log monomial in ε.
    fn p_monomial(&self) -> Monomial {
        let n = self.n as f64;
        let (d, g) = (&self.d_law, &self.gamma_law);
        Monomial {
            coefficient: self.kappa() * g.coefficient * d.coefficient.powi(self.n as i32 - 1),
            exponent: g.exponent + (n - 1.0) * d.exponent - n,
            log_power: g.log_power + (self.n as i32 - 1) * d.log_power,
        }
    }

    /// `Q_ε` as a power-log monomial; `None` for `n = 2`, where `Q_ε` is not one.
    fn q_monomial(&self) -> Option<Monomial> {
        if self.n == 2 {
            return None;
        }
        let n = self.n as f64;
        let d = &self.d_law;
        Some(Monomial {
            coefficient: (n - 2.0) * self.kappa() * d.coefficient.powi(self.n as i32 - 2),
            exponent: (n - 2.0) * d.exponent - n,
            log_power: (self.n as i32 - 2) * d.log_power,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Monomial {
    coefficient: f64,
    exponent: f64,
    log_power: i32,
}

impl Monomial {
    /// Limit as ε → 0, where `|ln ε| → ∞`.
    fn limit(&self) -> ExtReal {
        if self.coefficient == 0.0 {
            return ExtReal::Finite(0.0);
        }
        let order = match exponent_sign(self.exponent) {
            Ordering::Equal => 0.cmp(&self.log_power),
            other => other,
        };
        match order {
            Ordering::Greater => ExtReal::Finite(0.0),
            Ordering::Less => ExtReal::Infinite,
            Ordering::Equal => ExtReal::Finite(self.coefficient),
        }
    }
}

/// A value in `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite(v) if *v == 0.0)
    }

    pub fn is_finite_positive(&self) -> bool {
        matches!(self, ExtReal::Finite(v) if *v > 0.0)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::Infinite => None,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}

/// Values of the parameter algebra at one ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerforationNumbers {
    pub p_eps: f64,
    pub q_eps: f64,
    pub v_eps: f64,
    /// `d_ε^{n-2}` for `n ≥ 3`, `|ln d_ε|^{-1}` for `n = 2`.
    pub d_script: f64,
    pub lambda_eps: f64,
}

pub fn perforation_numbers(params: &PerforationParams, eps: f64) -> Result<PerforationNumbers> {
    check_eps(eps)?;
    let n = params.n;
    let d = params.d(eps);
    let gamma = params.gamma(eps);
    if d >= eps / 2.0 {
        return Err(Error::Geometry(format!(
            "hole radius {d} does not fit in a cell of size {eps}"
        )));
    }
    let kappa = params.kappa();
    let eps_n = eps.powi(n as i32);
    let p_eps = kappa * gamma * d.powi(n as i32 - 1) / eps_n;
    let (q_eps, d_script) = if n == 2 {
        let ln_d = d.ln().abs();
        (2.0 * PI / (ln_d * eps * eps), 1.0 / ln_d)
    } else {
        let ds = d.powi(n as i32 - 2);
        ((n as f64 - 2.0) * kappa * ds / eps_n, ds)
    };
    Ok(PerforationNumbers {
        p_eps,
        q_eps,
        v_eps: harmonic_blend(p_eps, q_eps),
        d_script,
        lambda_eps: d / eps,
    })
}

/// `PQ/(P+Q)`, with the convention `0` when `P = 0`.
fn harmonic_blend(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * q / (p + q)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("ε must lie in (0,1), got {eps}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// `P = Q = ∞`: solutions tend to zero.
    VanishingLimit,
    /// Convergence to the solution of the problem with potential `V`.
    HomogenizedLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VCase {
    /// `0 < P < ∞`, `Q = ∞`: `V = P`.
    PPosQInf,
    /// `P = ∞`, `0 < Q < ∞`: `V = Q`.
    PInfQPos,
    /// both finite and positive: `V = PQ/(P+Q)`.
    BothPos,
    /// `P = 0` or `Q = 0`: `V = 0`.
    EitherZero,
    /// `P = Q = ∞`.
    NotApplicable,
}

/// Regions of the `(s, t)` phase diagram for `d_ε = ε^s`, `γ_ε = ε^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    BothInfinite,
    EitherZero,
    PFiniteQInfinite,
    PInfiniteQFinite,
    BothFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub p: ExtReal,
    pub q: ExtReal,
    pub v: Option<f64>,
    pub scenario: Scenario,
    pub v_case: VCase,
}

impl RegimeReport {
    pub fn region(&self) -> Region {
        match self.v_case {
            VCase::NotApplicable => Region::BothInfinite,
            VCase::EitherZero => Region::EitherZero,
            VCase::PPosQInf => Region::PFiniteQInfinite,
            VCase::PInfQPos => Region::PInfiniteQFinite,
            VCase::BothPos => Region::BothFinite,
        }
    }

    /// `(P<∞ ∧ Q=∞) ∨ (P=0 ∧ Q>0) ∨ Q=0`: the families for which `η′_ε → 0`.
    pub fn h1_rate_vanishes(&self) -> bool {
        (!self.p.is_infinite() && self.q.is_infinite())
            || (self.p.is_zero() && !self.q.is_zero())
            || self.q.is_zero()
    }
}

pub fn limit_regime(params: &PerforationParams) -> RegimeReport {
    let p = params.p_monomial().limit();
    let q = match params.q_monomial() {
        Some(m) => m.limit(),
        // 2π/(ε²|ln d_ε|) grows like ε^{-2}/|ln ε| for every power-log radius
        None => ExtReal::Infinite,
    };
    let (v_case, v) = match (p, q) {
        (ExtReal::Infinite, ExtReal::Infinite) => (VCase::NotApplicable, None),
        _ if p.is_zero() || q.is_zero() => (VCase::EitherZero, Some(0.0)),
        (ExtReal::Finite(pv), ExtReal::Infinite) => (VCase::PPosQInf, Some(pv)),
        (ExtReal::Infinite, ExtReal::Finite(qv)) => (VCase::PInfQPos, Some(qv)),
        (ExtReal::Finite(pv), ExtReal::Finite(qv)) => (VCase::BothPos, Some(pv * qv / (pv + qv))),
    };
    let scenario = if v_case == VCase::NotApplicable {
        Scenario::VanishingLimit
    } else {
        Scenario::HomogenizedLimit
    };
    RegimeReport { p, q, v, scenario, v_case }
}

/// Position of `(s, t)` relative to the two critical lines of the phase
/// diagram for `n ≥ 3`: the `P`-line `t = n - (n-1)s` and the `Q`-line
/// `s = n/(n-2)`.
pub fn figure2_region(n: usize, s: f64, t: f64) -> Result<Region> {
    if n < 3 {
        return Err(Error::Domain(format!("phase diagram is drawn for n >= 3, got {n}")));
    }
    if s.partial_cmp(&1.0) != Some(Ordering::Greater) {
        return Err(Error::Domain(format!("s = {s} violates d_ε/ε → 0 (need s > 1)")));
    }
    let nf = n as f64;
    let p_line = nf - (nf - 1.0) * s;
    let q_line = nf / (nf - 2.0);
    let above_p = exponent_sign(t - p_line);
    let right_of_q = exponent_sign(s - q_line);
    let region = match (above_p, right_of_q) {
        (Ordering::Greater, _) | (_, Ordering::Greater) => Region::EitherZero,
        (Ordering::Less, Ordering::Less) => Region::BothInfinite,
        (Ordering::Equal, Ordering::Less) => Region::PFiniteQInfinite,
        (Ordering::Less, Ordering::Equal) => Region::PInfiniteQFinite,
        (Ordering::Equal, Ordering::Equal) => Region::BothFinite,
    };
    Ok(region)
}

/// A pointwise admissibility condition that fails at a given ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// `Λ_ε = d_ε/ε > 1/4`.
    LambdaTooLarge { lambda: f64 },
    /// `n = 2`, `Q > 0` and `|ln ε|/|ln d_ε| > 1/2`.
    LogRatioTooLarge { ratio: f64 },
    /// `d_ε ≥ ε/2`.
    HoleOutsideCell { d: f64, eps: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LambdaTooLarge { lambda } => write!(f, "Λ_ε = {lambda} > 1/4"),
            Violation::LogRatioTooLarge { ratio } => write!(f, "|ln ε|/|ln d_ε| = {ratio} > 1/2"),
            Violation::HoleOutsideCell { d, eps } => write!(f, "d_ε = {d} >= ε/2 = {}", eps / 2.0),
        }
    }
}

pub fn validate_epsilon(params: &PerforationParams, eps: f64) -> Result<Vec<Violation>> {
    check_eps(eps)?;
    let d = params.d(eps);
    let lambda = d / eps;
    let mut out = Vec::new();
    if lambda > 0.25 {
        out.push(Violation::LambdaTooLarge { lambda });
    }
    if params.n == 2 && !limit_regime(params).q.is_zero() {
        let ratio = eps.ln().abs() / d.ln().abs();
        if ratio > 0.5 {
            out.push(Violation::LogRatioTooLarge { ratio });
        }
    }
    if d >= eps / 2.0 {
        out.push(Violation::HoleOutsideCell { d, eps });
    }
    Ok(out)
}

/// Predicted rates at one ε. Everything except `th5_bound` is `None` for
/// vanishing-limit families; `eta_dprime` also requires `P < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBundle {
    pub eta: Option<f64>,
    pub eta_prime: Option<f64>,
    pub eta_tilde: Option<f64>,
    pub eta_dprime: Option<f64>,
    pub delta_1: Option<f64>,
    pub delta_2: Option<f64>,
    pub delta_3: Option<f64>,
    pub delta_4: Option<f64>,
    /// `max{P_ε^{-1}, Q_ε^{-1}, ε²}`.
    pub th5_bound: f64,
}

impl RateBundle {
    pub fn get(&self, key: RateKey) -> Option<f64> {
        match key {
            RateKey::Eta => self.eta,
            RateKey::EtaPrime => self.eta_prime,
            RateKey::EtaTilde => self.eta_tilde,
            RateKey::EtaDprime => self.eta_dprime,
            RateKey::Th5 => Some(self.th5_bound),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKey {
    Eta,
    EtaPrime,
    EtaTilde,
    EtaDprime,
    Th5,
}

impl std::str::FromStr for RateKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eta" => Ok(RateKey::Eta),
            "eta_prime" => Ok(RateKey::EtaPrime),
            "eta_tilde" => Ok(RateKey::EtaTilde),
            "eta_dprime" => Ok(RateKey::EtaDprime),
            "th5" | "th5_bound" => Ok(RateKey::Th5),
            other => Err(Error::Domain(format!("unknown rate key {other:?}"))),
        }
    }
}

/// Evaluates every rate function at `eps`. `v_limit` is the exact limit
/// potential; it is required unless `P = Q = ∞`.
pub fn convergence_rates(
    params: &PerforationParams,
    eps: f64,
    v_limit: Option<f64>,
) -> Result<RateBundle> {
    let num = perforation_numbers(params, eps)?;
    let regime = limit_regime(params);
    let th5_bound = (1.0 / num.p_eps).max(1.0 / num.q_eps).max(eps * eps);
    if regime.scenario == Scenario::VanishingLimit {
        return Ok(RateBundle {
            eta: None,
            eta_prime: None,
            eta_tilde: None,
            eta_dprime: None,
            delta_1: None,
            delta_2: None,
            delta_3: None,
            delta_4: None,
            th5_bound,
        });
    }
    let v = v_limit.ok_or_else(|| {
        Error::Contract("limit potential V is required when P < ∞ or Q < ∞".into())
    })?;

    let n = params.n;
    let nf = n as f64;
    let d = params.d(eps);
    let lam = num.lambda_eps;
    let dv = (num.v_eps - v).abs();
    let eps_log = eps * eps.ln().abs();
    let lam_log = lam * lam.ln().abs();

    let eta = match n {
        2 => dv.max(eps_log).max(lam.ln().abs().powf(-0.5)),
        3 => dv.max(eps).max(lam.sqrt()),
        4 => dv.max(eps).max(lam_log),
        _ => dv.max(eps).max(lam),
    };
    let eta_prime = (num.v_eps / num.q_eps.sqrt()).max(eta);
    let eta_tilde = match n {
        2 | 4 => dv.max(eps_log),
        3 => dv.max(eps),
        _ => dv.max(eps.powf(2.0 / (nf - 2.0))),
    };
    let eta_dprime = regime.p.finite().map(|p| {
        (num.p_eps / num.q_eps.sqrt())
            .max((num.p_eps - p).abs())
            .max(eps)
            .max(lam.powf(nf / 2.0))
    });

    let delta_1 = lam.powf(nf / 2.0).max((eps * d).sqrt());
    let delta_2 = if n == 2 {
        lam.sqrt().max(eps.powf(0.75) * d.powf(0.25))
    } else {
        delta_1
    };
    let delta_3 = match n {
        2 => lam.ln().abs().powf(-0.5),
        3 => lam.sqrt(),
        4 => lam_log,
        _ => lam,
    };
    let delta_4 = if n == 2 { eps_log } else { eps };

    Ok(RateBundle {
        eta: Some(eta),
        eta_prime: Some(eta_prime),
        eta_tilde: Some(eta_tilde),
        eta_dprime,
        delta_1: Some(delta_1),
        delta_2: Some(delta_2),
        delta_3: Some(delta_3),
        delta_4: Some(delta_4),
        th5_bound,
    })
}

/// [`convergence_rates`] against the exact limit from [`limit_regime`].
pub fn rates_at(params: &PerforationParams, eps: f64) -> Result<RateBundle> {
    convergence_rates(params, eps, limit_regime(params).v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area(2).unwrap(), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area(3).unwrap(), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area(4).unwrap(), 2.0 * PI * PI, max_relative = 1e-15);
        // 8π²/3 for n = 5
        assert_relative_eq!(sphere_area(5).unwrap(), 8.0 * PI * PI / 3.0, max_relative = 1e-15);
        assert!(matches!(sphere_area(1), Err(Error::Domain(_))));
    }

    #[test]
    fn p_eps_on_the_dashed_interval() {
        let params = PerforationParams::power_laws(3, 1.5, 0.0).unwrap();
        let num = perforation_numbers(&params, 0.1).unwrap();
        assert_relative_eq!(num.p_eps, 4.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn neumann_holes_have_no_potential() {
        let params = PerforationParams::new(3, ScalingLaw::power(2.0), ScalingLaw::zero()).unwrap();
        let num = perforation_numbers(&params, 0.1).unwrap();
        assert_eq!(num.p_eps, 0.0);
        assert_eq!(num.v_eps, 0.0);
    }

    #[test]
    fn direct_evaluation_n3() {
        // d = ε² = 0.01 at ε = 0.1, γ = 1
        let params = PerforationParams::power_laws(3, 2.0, 0.0).unwrap();
        let num = perforation_numbers(&params, 0.1).unwrap();
        assert_relative_eq!(num.p_eps, 1.256637, epsilon = 1e-6);
        assert_relative_eq!(num.q_eps, 125.6637, epsilon = 1e-4);
        assert_relative_eq!(num.v_eps, 1.244195, epsilon = 1e-6);
        assert!(num.v_eps <= num.p_eps.min(num.q_eps));
        assert_relative_eq!(num.lambda_eps, 0.1, max_relative = 1e-12);
        assert_relative_eq!(num.d_script, 0.01, max_relative = 1e-12);
    }

    #[test]
    fn oversized_hole_is_a_geometry_error() {
        let params = PerforationParams::new(
            3,
            ScalingLaw::new(10.0, 1.5, 0).unwrap(),
            ScalingLaw::power(0.0),
        )
        .unwrap();
        assert!(matches!(perforation_numbers(&params, 0.1), Err(Error::Geometry(_))));
    }

    #[test]
    fn params_reject_non_shrinking_holes() {
        assert!(PerforationParams::power_laws(3, 1.0, 0.0).is_err());
        assert!(PerforationParams::power_laws(1, 2.0, 0.0).is_err());
        // ε/|ln ε| shrinks relative to ε
        let d = ScalingLaw::new(1.0, 1.0, -1).unwrap();
        assert!(PerforationParams::new(2, d, ScalingLaw::power(0.0)).is_ok());
    }

    #[test]
    fn regime_examples() {
        let r = limit_regime(&PerforationParams::power_laws(3, 3.0, -3.0).unwrap());
        assert_eq!(r.p, ExtReal::Finite(4.0 * PI));
        assert_eq!(r.q, ExtReal::Finite(4.0 * PI));
        assert_relative_eq!(r.v.unwrap(), 2.0 * PI, max_relative = 1e-15);
        assert_eq!(r.v_case, VCase::BothPos);

        let r = limit_regime(&PerforationParams::power_laws(3, 2.0, 10.0).unwrap());
        assert!(r.p.is_zero());
        assert_eq!(r.v, Some(0.0));
        assert_eq!(r.v_case, VCase::EitherZero);

        let r = limit_regime(&PerforationParams::power_laws(3, 1.1, -5.0).unwrap());
        assert_eq!(r.scenario, Scenario::VanishingLimit);
        assert_eq!(r.v, None);
        assert_eq!(r.v_case, VCase::NotApplicable);
    }

    #[test]
    fn log_power_breaks_exponent_ties() {
        // P_ε = κ_3 |ln ε| on the dashed line → ∞; Q_ε = ∞ too
        let g = ScalingLaw::new(1.0, 0.0, 1).unwrap();
        let p = PerforationParams::new(3, ScalingLaw::power(1.5), g).unwrap();
        assert_eq!(limit_regime(&p).scenario, Scenario::VanishingLimit);
        let g = ScalingLaw::new(1.0, 0.0, -1).unwrap();
        let p = PerforationParams::new(3, ScalingLaw::power(1.5), g).unwrap();
        assert_eq!(limit_regime(&p).v_case, VCase::EitherZero);
    }

    #[test]
    fn two_dimensional_q_is_infinite() {
        let r = limit_regime(&PerforationParams::power_laws(2, 1.5, 0.5).unwrap());
        assert!(r.q.is_infinite());
        assert_eq!(r.v_case, VCase::PPosQInf);
        assert_relative_eq!(r.v.unwrap(), 2.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn figure2_examples() {
        assert_eq!(figure2_region(3, 1.5, 0.0).unwrap(), Region::PFiniteQInfinite);
        assert_eq!(figure2_region(3, 3.0, -3.0).unwrap(), Region::BothFinite);
        assert_eq!(figure2_region(3, 2.0, 5.0).unwrap(), Region::EitherZero);
        assert_eq!(figure2_region(3, 3.0, -5.0).unwrap(), Region::PInfiniteQFinite);
        assert_eq!(figure2_region(3, 1.1, -5.0).unwrap(), Region::BothInfinite);
        assert!(figure2_region(3, 1.0, 0.0).is_err());
        assert!(figure2_region(2, 1.5, 0.0).is_err());
    }

    #[test]
    fn validate_examples() {
        let p = PerforationParams::power_laws(3, 2.0, 0.0).unwrap();
        assert!(validate_epsilon(&p, 0.2).unwrap().is_empty());

        let p = PerforationParams::power_laws(3, 1.1, 0.0).unwrap();
        let v = validate_epsilon(&p, 0.5).unwrap();
        let lambda = v
            .iter()
            .find_map(|v| match v {
                Violation::LambdaTooLarge { lambda } => Some(*lambda),
                _ => None,
            })
            .unwrap();
        assert_relative_eq!(lambda, 0.5f64.powf(0.1), max_relative = 1e-12);
        // d = 0.5^1.1 also exceeds ε/2
        assert!(v.iter().any(|v| matches!(v, Violation::HoleOutsideCell { .. })));

        let p = PerforationParams::power_laws(2, 1.5, 0.5).unwrap();
        let v = validate_epsilon(&p, 0.3).unwrap();
        let ratio = v
            .iter()
            .find_map(|v| match v {
                Violation::LogRatioTooLarge { ratio } => Some(*ratio),
                _ => None,
            })
            .expect("log-ratio violation");
        assert_relative_eq!(ratio, 1.0 / 1.5, max_relative = 1e-12);

        assert!(validate_epsilon(&p, 1.0).is_err());
        assert!(validate_epsilon(&p, 0.0).is_err());
    }

    #[test]
    fn eta_n3_example() {
        let p = PerforationParams::new(3, ScalingLaw::power(1.5), ScalingLaw::zero()).unwrap();
        let r = convergence_rates(&p, 0.01, Some(0.0)).unwrap();
        assert_relative_eq!(r.eta.unwrap(), 0.1f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn delta4_branches() {
        let p = PerforationParams::power_laws(3, 2.0, 0.0).unwrap();
        assert_eq!(rates_at(&p, 0.1).unwrap().delta_4, Some(0.1));
        let p = PerforationParams::new(
            2,
            ScalingLaw::new(0.2, 2.0, 0).unwrap(),
            ScalingLaw::power(0.0),
        )
        .unwrap();
        let r = rates_at(&p, 0.1).unwrap();
        assert_relative_eq!(r.delta_4.unwrap(), 0.1 * 0.1f64.ln().abs(), max_relative = 1e-15);
    }

    #[test]
    fn vanishing_family_only_has_th5() {
        let p = PerforationParams::power_laws(3, 1.1, -5.0).unwrap();
        let eps = 1e-4;
        let r = convergence_rates(&p, eps, None).unwrap();
        let num = perforation_numbers(&p, eps).unwrap();
        let expected = (1.0 / num.p_eps).max(1.0 / num.q_eps).max(eps * eps);
        assert_eq!(r.th5_bound, expected);
        assert!(r.eta.is_none() && r.eta_dprime.is_none() && r.delta_1.is_none());
    }

    #[test]
    fn missing_limit_potential_is_a_contract_error() {
        let p = PerforationParams::power_laws(3, 2.0, 0.0).unwrap();
        assert!(matches!(convergence_rates(&p, 0.1, None), Err(Error::Contract(_))));
    }
}
