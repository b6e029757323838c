//! Empirical constants in bounds of the form `error ≤ C · rate`.

use perfhom_core::regime::RateKey;
use serde::{Deserialize, Serialize};

use crate::config::ErrorKey;
use crate::error::{HarnessError, Result};
use crate::sweep::SweepRow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// `max error/rate`.
    pub constant: f64,
    /// `max ratio / min ratio`; one when the error is proportional to the rate.
    pub deviation: f64,
    pub ratios: Vec<f64>,
}

pub fn fit_pairs(pairs: &[(f64, f64)]) -> Result<RateFit> {
    if pairs.len() < 3 {
        return Err(HarnessError::Fit(format!("need at least 3 rows, got {}", pairs.len())));
    }
    let mut ratios = Vec::with_capacity(pairs.len());
    for &(err, rate) in pairs {
        if !(err >= 0.0) || !err.is_finite() {
            return Err(HarnessError::Fit(format!("invalid error {err}")));
        }
        if !(rate > 0.0) {
            return Err(HarnessError::Fit(if err > 0.0 {
                format!("rate {rate} with non-zero error {err}")
            } else {
                format!("rate {rate} is not positive")
            }));
        }
        ratios.push(err / rate);
    }
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let deviation = if max == 0.0 { 1.0 } else { max / min };
    Ok(RateFit { constant: max, deviation, ratios })
}

pub fn fit_rate(rows: &[SweepRow], error_key: ErrorKey, rate_key: RateKey) -> Result<RateFit> {
    let pairs = rows
        .iter()
        .map(|row| {
            let err = row.errors.get(error_key).ok_or_else(|| {
                HarnessError::Fit(format!("{} not recorded at ε = {}", error_key.name(), row.eps))
            })?;
            let rate = row.rates.get(rate_key).ok_or_else(|| {
                HarnessError::Fit(format!("{rate_key:?} undefined at ε = {}", row.eps))
            })?;
            Ok((err, rate))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_pairs(&pairs)
}

/// Fixes `C` from the first (coarsest) pair and reports the pairs with
/// `error > factor · C · rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoarseFit {
    pub constant: f64,
    pub factor: f64,
    /// `error / (C · rate)` per pair.
    pub normalized: Vec<f64>,
    pub violations: Vec<usize>,
}

pub fn check_against_coarsest(pairs: &[(f64, f64)], factor: f64) -> Result<CoarseFit> {
    let fit = fit_pairs(pairs)?;
    let constant = fit.ratios[0];
    if !(constant > 0.0) {
        return Err(HarnessError::Fit("coarsest error is zero".into()));
    }
    let normalized: Vec<f64> = fit.ratios.iter().map(|r| r / constant).collect();
    let violations = normalized
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > factor)
        .map(|(i, _)| i)
        .collect();
    Ok(CoarseFit { constant, factor, normalized, violations })
}
