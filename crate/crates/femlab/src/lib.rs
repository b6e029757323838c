//! Two-dimensional P1 finite elements for the Robin problem in a periodically
//! perforated unit square and for its homogenized limit.

pub mod assembly;
pub mod eigen;
pub mod error;
pub mod io;
pub mod mesh;
pub mod norms;
pub mod quadrature;
pub mod solver;
pub mod sparse;

pub use assembly::{assemble, assemble_on, MeshVariant, Problem, SparseSystem};
pub use eigen::{low_eigenpairs, low_eigenvalues, EigenOptions};
pub use error::{FemError, Result};
pub use mesh::{build_mesh, BoundaryTag, PerforatedMesh, TriMesh};
pub use norms::{error_norms, ErrorNorms};
pub use solver::{cg, solve_cg, DiscreteSolution};
