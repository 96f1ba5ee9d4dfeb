//! Gröbner bases, case-split solution families and the brute-force grid oracle.

mod families;
mod grid;
mod groebner;
mod roots;

use thiserror::Error;

use crate::operators::OperatorError;
use crate::poly::PolyError;

pub use families::{family_contains, solve_families, solve_polynomials, FamilyJson, SolutionFamily, BRANCH_LIMIT};
pub use grid::{default_grid, grid_enumerate, grid_points_in_families, points_text, GridPoint, DEFAULT_GRID};
pub use groebner::{buchberger, reduce, s_polynomial, saturate, vanishes_on, GroebnerBasis};
pub use roots::rational_roots;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("case splitting exceeded {limit} branches ({partial} families found); uncovered branch: {pending}")]
    BranchLimit { limit: usize, partial: usize, pending: String },
    #[error("{0} does not depend on alpha")]
    UnexpectedAlpha(String),
    #[error("{0} has symbolic alpha; give a value")]
    MissingAlpha(String),
    #[error("grid must not be empty")]
    EmptyGrid,
}
