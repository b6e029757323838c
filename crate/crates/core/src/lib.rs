//! Analytic side of periodic homogenization for the Robin Laplacian in a
//! domain perforated by small balls.
//!
//! * [`regime`]: the parameter algebra (`P_ε`, `Q_ε`, `V_ε`), limit
//!   classification and every convergence-rate function.
//! * [`corrector`]: lattice geometry, cut-offs, the corrector `G_ε` and the
//!   first-order identification map `J¹_ε`, with their boundary identities.
//! * [`quasiunitary`]: finite-dimensional realisation of the varying Hilbert
//!   space resolvent and spectral estimates.

pub mod corrector;
pub mod error;
pub mod quasiunitary;
pub mod regime;
pub mod sphere;

pub use error::{Error, Result};
