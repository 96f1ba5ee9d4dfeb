//! Published operator families, their soundness under both matrix readings,
//! and completeness against the solver.

mod data;
mod report;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::operators::{OperatorError, OperatorKind, OperatorMatrix};
use crate::poly::PolyError;
use crate::solver::SolverError;

pub use data::{all_entries, paper_families, table_code};
pub use report::{
    audit, AuditConfig, CellReport, ClaimEvidence, ClaimReport, DiscrepancyReport, EntryOutside, EntryReport, Summary,
    UncoveredGroup,
};
pub use verify::{
    verify_soundness, AlphaVerdict, Coverage, PointWitness, ReadingCheck, ResidualWitness, SoundnessCheck, VerdictKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("malformed matrix `{0}`")]
    Malformed(String),
}

/// How faithfully an entry follows its printed source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fidelity {
    Verbatim,
    TypoInterpreted,
    Ambiguous,
}

/// A side condition printed next to an entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Restriction {
    NonZero(String),
    /// At least one of the parameters is nonzero.
    AnyNonZero(Vec<String>),
}

impl Restriction {
    pub fn names(&self) -> Vec<&str> {
        match self {
            Restriction::NonZero(n) => vec![n.as_str()],
            Restriction::AnyNonZero(ns) => ns.iter().map(String::as_str).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        self.names().iter().map(|n| format!("{n} != 0")).collect::<Vec<_>>().join(" or ")
    }
}

/// One published matrix, as printed (no convention applied).
#[derive(Debug, Clone, PartialEq)]
pub struct PaperEntry {
    /// Catalog name such as `A5`; parametric algebras are audited for generic alpha.
    pub algebra: String,
    pub kind: OperatorKind,
    /// `RB1/A5/P6`
    pub label: String,
    pub matrix: OperatorMatrix,
    pub restrictions: Vec<Restriction>,
    pub fidelity: Fidelity,
    pub note: Option<String>,
    /// The competing reading of a defective row.
    pub alternative: Option<OperatorMatrix>,
}

impl PaperEntry {
    pub fn param_names(&self) -> &[String] {
        self.matrix.params().names()
    }
}
