//! Smooth right-hand sides with closed-form `L²(Ω)` norms.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

const BUMP_CENTER: [f64; 2] = [0.37, 0.61];
const BUMP_WIDTH: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Load {
    /// `sin(πx) sin(πy)`.
    Sine,
    /// `exp(−|x − c|²/(2σ²))`.
    Bump,
    /// `(1 − (2x−1)⁸)(1 − (2y−1)⁸)`, one in the bulk and zero on `∂Ω`.
    Taper,
}

impl Load {
    pub const ALL: [Load; 3] = [Load::Sine, Load::Bump, Load::Taper];

    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            Load::Sine => (PI * x).sin() * (PI * y).sin(),
            Load::Bump => {
                let r2 = (x - BUMP_CENTER[0]).powi(2) + (y - BUMP_CENTER[1]).powi(2);
                (-r2 / (2.0 * BUMP_WIDTH * BUMP_WIDTH)).exp()
            }
            Load::Taper => (1.0 - (2.0 * x - 1.0).powi(8)) * (1.0 - (2.0 * y - 1.0).powi(8)),
        }
    }

    /// `‖f‖_{L²((0,1)²)}`.
    pub fn norm(self) -> f64 {
        match self {
            Load::Sine => 0.5,
            Load::Bump => {
                // ∫₀¹ exp(−(x−c)²/σ²) dx = σ√π/2 · [erf((1−c)/σ) + erf(c/σ)]
                let axis = |c: f64| {
                    0.5 * BUMP_WIDTH * PI.sqrt()
                        * (libm::erf((1.0 - c) / BUMP_WIDTH) + libm::erf(c / BUMP_WIDTH))
                };
                (axis(BUMP_CENTER[0]) * axis(BUMP_CENTER[1])).sqrt()
            }
            Load::Taper => 1.0 - 2.0 / 9.0 + 1.0 / 17.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Load::Sine => "sine",
            Load::Bump => "bump",
            Load::Taper => "taper",
        }
    }
}

impl FromStr for Load {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sine" => Ok(Load::Sine),
            "bump" => Ok(Load::Bump),
            "taper" => Ok(Load::Taper),
            other => Err(HarnessError::Config(format!("unknown load {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tensor Simpson rule on a fine grid.
    fn simpson_norm(load: Load) -> f64 {
        let n = 2000;
        let h = 1.0 / n as f64;
        let w = |i: usize| if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let mut s = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                s += w(i) * w(j) * load.eval(i as f64 * h, j as f64 * h).powi(2);
            }
        }
        (s * h * h / 9.0).sqrt()
    }

    #[test]
    fn closed_form_norms() {
        for load in Load::ALL {
            let q = simpson_norm(load);
            assert!((load.norm() - q).abs() < 1e-9, "{load:?}: {} vs {q}", load.norm());
        }
    }

    #[test]
    fn names_round_trip() {
        for load in Load::ALL {
            assert_eq!(load.name().parse::<Load>().unwrap(), load);
        }
        assert!("cosine".parse::<Load>().is_err());
    }
}
