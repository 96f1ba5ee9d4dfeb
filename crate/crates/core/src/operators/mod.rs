//! Operator equations as polynomial systems in the matrix entries, and exact
//! residuals of candidate operators.

mod matrix;
mod residual;
mod system;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::poly::PolyError;
use crate::rational::{format_rational, parse_rational, Rational};

pub use matrix::OperatorMatrix;
pub use residual::{induced_product, morphism_defect, residual, residual_is_zero, ResidualEntry};
pub use system::{build_system, system_variables, AlphaMode, Equation, EquationSystem, EquationSystemJson, Origin};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("operator matrix is {got}x{got} but the algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("induced product is only defined for Rota-Baxter and Nijenhuis operators, not {0}")]
    UnsupportedKind(OperatorKind),
    #[error("operator matrix must be numeric here")]
    NotNumeric,
    #[error("unknown operator `{0}` (expected rota-baxter, reynolds, nijenhuis or averaging)")]
    UnknownOperator(String),
    #[error("a weight is only meaningful for rota-baxter")]
    UnexpectedWeight,
    #[error("malformed equation system: {0}")]
    Malformed(String),
}

/// The four operator identities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// `P(x)P(y) = P(P(x)y + xP(y) + weight*xy)`
    RotaBaxter(Rational),
    /// `P(x)P(y) = P(xP(y) + P(x)y - P(x)P(y))`
    Reynolds,
    /// `P(x)P(y) = P(P(x)y + xP(y) - P(xy))`
    Nijenhuis,
    /// `P(x)P(y) = P(xP(y)) = P(P(x)y)`
    Averaging,
}

impl OperatorKind {
    /// CLI / JSON slug.
    pub fn slug(&self) -> &'static str {
        match self {
            OperatorKind::RotaBaxter(_) => "rota-baxter",
            OperatorKind::Reynolds => "reynolds",
            OperatorKind::Nijenhuis => "nijenhuis",
            OperatorKind::Averaging => "averaging",
        }
    }

    pub fn weight(&self) -> Option<&Rational> {
        match self {
            OperatorKind::RotaBaxter(w) => Some(w),
            _ => None,
        }
    }

    /// Builds a kind from its slug and optional weight (rota-baxter defaults to 0).
    pub fn from_parts(slug: &str, weight: Option<Rational>) -> Result<Self, OperatorError> {
        let kind = match slug.to_ascii_lowercase().as_str() {
            "rota-baxter" | "rotabaxter" | "rb" => return Ok(OperatorKind::RotaBaxter(weight.unwrap_or_else(Rational::zero))),
            "reynolds" => OperatorKind::Reynolds,
            "nijenhuis" => OperatorKind::Nijenhuis,
            "averaging" => OperatorKind::Averaging,
            other => return Err(OperatorError::UnknownOperator(other.to_string())),
        };
        if weight.is_some() {
            return Err(OperatorError::UnexpectedWeight);
        }
        Ok(kind)
    }

    /// The five kinds audited against the published tables.
    pub fn audited() -> Vec<OperatorKind> {
        vec![
            OperatorKind::RotaBaxter(Rational::zero()),
            OperatorKind::RotaBaxter(Rational::from_integer(1.into())),
            OperatorKind::Reynolds,
            OperatorKind::Nijenhuis,
            OperatorKind::Averaging,
        ]
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::RotaBaxter(w) => write!(f, "RB({})", format_rational(w)),
            OperatorKind::Reynolds => f.write_str("Reynolds"),
            OperatorKind::Nijenhuis => f.write_str("Nijenhuis"),
            OperatorKind::Averaging => f.write_str("Averaging"),
        }
    }
}

/// Serialized form `{"kind": "rota-baxter", "weight": "1"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

impl From<&OperatorKind> for OperatorJson {
    fn from(k: &OperatorKind) -> Self {
        Self { kind: k.slug().to_string(), weight: k.weight().map(format_rational) }
    }
}

impl TryFrom<&OperatorJson> for OperatorKind {
    type Error = OperatorError;
    fn try_from(j: &OperatorJson) -> Result<Self, OperatorError> {
        let w = match &j.weight {
            Some(s) => Some(parse_rational(s).map_err(|e| OperatorError::Malformed(e.to_string()))?),
            None => None,
        };
        OperatorKind::from_parts(&j.kind, w)
    }
}

/// How a matrix is read as an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `P(e_i) = sum_j R[i][j] e_j`: rows are images of basis vectors.
    Row,
    /// `P(e_j) = sum_i R[i][j] e_i`: columns are images.
    Column,
}

impl FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "row" => Ok(Convention::Row),
            "column" => Ok(Convention::Column),
            _ => Err(format!("unknown convention `{s}`")),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Row => "row",
            Convention::Column => "column",
        })
    }
}
