//! Exact minimum-distance projection onto the canonical simplex.
//!
//! The projection of `a` onto `{x : sum(x) = t, x >= 0}` is found by sorting
//! `a` in descending order, locating the largest support size `m` whose gap
//! `S_m = sum_{i<=m} (a_i - a_m)` does not exceed `t`, and shifting the top
//! `m` coordinates by a common `lambda`. See [`simplex`] for the steps,
//! [`matrix`] for row-wise regularization of quasi-stochastic matrices, and
//! [`verify`] for an exhaustive oracle and a KKT checker.
//!
//! ```
//! use simplex_proj::{project, RealVector};
//!
//! let a = RealVector::new(vec![0.7, 0.3, -0.1]).unwrap();
//! let p = project(&a).unwrap();
//! assert_eq!(p.support_size, 2);
//! assert_eq!(p.x[2], 0.0);
//! ```

pub mod cli;
pub mod error;
pub mod matrix;
pub mod simplex;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{
    regularize_matrix, regularize_matrix_with, Execution, MatrixTable, RegularizationReport,
    RowRecord,
};
pub use simplex::{
    assemble_projection, compute_shift, find_support_size, gap_sequence, objective_sequence,
    project, project_onto, sort_descending, squared_distance, GapSequence, ProjectionResult,
    RealVector, SortedView, TargetSum,
};
pub use verify::{kkt_check, oracle_project, KktReport, OracleResult};
