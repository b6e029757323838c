//! Configuration, ε-sweeps, rate fitting and reporting on top of the analytic
//! and finite-element crates.

pub mod checks;
pub mod config;
pub mod error;
pub mod fit;
pub mod loads;
pub mod report;
pub mod sweep;

pub use config::{parse_eps_range, ErrorKey, SweepConfig};
pub use error::{HarnessError, Result};
pub use fit::{check_against_coarsest, fit_pairs, fit_rate, RateFit};
pub use loads::Load;
pub use sweep::{run_sweep, solve_load, LoadSolution, MeasuredErrors, SweepRow};
