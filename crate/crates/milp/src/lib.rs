//! Mixed-integer linear programming toolkit: a named model representation,
//! a bounded revised simplex, best-bound branch-and-bound, an exhaustive
//! enumeration oracle, a feasibility checker and MPS / LP-text interchange.

pub mod branch;
pub mod check;
pub mod error;
pub mod lp_format;
pub mod model;
pub mod mps;
pub mod names;
pub mod oracle;
pub mod simplex;
pub mod solution_file;

pub use branch::{solve_milp, Branching, SolveStatus, Solution, SolverParams};
pub use check::{check_solution, Violation, ViolationKind, ViolationReport};
pub use error::{FormatError, ModelError, OracleError, SolutionFileError};
pub use model::{
    Constraint, ConstraintSense, LinExpr, ModelIr, Name, Objective, ObjectiveSense, VarId,
    VarKind, Variable,
};
pub use oracle::brute_force_oracle;
pub use simplex::{solve_lp, CompiledLp, LpOptions, LpSolution, LpStatus};

/// Relative comparison used for objective equality throughout the crate:
/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn objectives_match(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
