//! Finite-dimensional algebras given by structure constants.
//!
//! Basis indices are 0-based in the API (`e_1` is index 0) and 1-based in all
//! text output.

mod catalog;
mod identities;
mod json;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Polynomial, VariableTable};
use crate::rational::{format_rational, Rational};

pub use catalog::{catalog, catalog_names, is_parametric_name, Alpha, CATALOG_NAMES, DEFAULT_ALPHA_SAMPLES};
pub use identities::{
    check_prelie, commutator_algebra, left_prelie_defect, multiply, prelie_defect, right_prelie_defect,
    CommutatorAlgebra, Handedness, PrelieReport,
};
pub use json::{AlgebraJson, ProductTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown algebra `{0}` (expected one of A1..A8)")]
    UnknownAlgebra(String),
    #[error("algebra {0} takes no alpha parameter")]
    UnexpectedAlpha(String),
    #[error("algebra {0} needs an alpha value")]
    MissingAlpha(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("algebra {0} has symbolic alpha; specialize it first")]
    NotSpecialized(String),
    #[error("invalid algebra description: {0}")]
    Invalid(String),
}

/// `constant + coefficient * alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlphaLinear {
    pub constant: Rational,
    pub alpha: Rational,
}

impl AlphaLinear {
    pub fn constant(c: Rational) -> Self {
        Self { constant: c, alpha: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.alpha.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.alpha.is_zero()
    }

    pub fn at(&self, alpha: &Rational) -> Rational {
        &self.constant + &self.alpha * alpha
    }

    /// As a polynomial over `vars`; `alpha_var` must be given when the
    /// coefficient of alpha is nonzero.
    pub fn to_polynomial(&self, vars: &Arc<VariableTable>, alpha_var: Option<usize>) -> Polynomial {
        let mut p = Polynomial::constant(vars, self.constant.clone());
        if !self.alpha.is_zero() {
            let i = alpha_var.expect("alpha-dependent constant needs an alpha variable");
            p = &p + &Polynomial::var(vars, i).scale(&self.alpha);
        }
        p
    }

    /// `a`, `b*alpha` or `a+b*alpha` (unit coefficients on alpha are elided).
    pub fn to_text(&self) -> String {
        let alpha_term = || {
            if self.alpha.is_one() {
                "alpha".to_string()
            } else if (-&self.alpha).is_one() {
                "-alpha".to_string()
            } else {
                format!("{}*alpha", format_rational(&self.alpha))
            }
        };
        match (self.constant.is_zero(), self.alpha.is_zero()) {
            (_, true) => format_rational(&self.constant),
            (true, false) => alpha_term(),
            (false, false) => {
                let b = alpha_term();
                if b.starts_with('-') {
                    format!("{}{}", format_rational(&self.constant), b)
                } else {
                    format!("{}+{}", format_rational(&self.constant), b)
                }
            }
        }
    }
}

/// An algebra of dimension `n` with products `e_i e_j = sum_k c[i][j][k] e_k`.
///
/// Each structure constant is affine in a parameter alpha. When `alpha` is
/// set the algebra is specialized and every constant has a rational value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    name: String,
    dim: usize,
    constants: Vec<AlphaLinear>,
    alpha: Option<Rational>,
}

impl AlgebraSpec {
    /// An algebra with every product zero.
    pub fn zero(name: impl Into<String>, dim: usize) -> Self {
        Self { name: name.into(), dim, constants: vec![AlphaLinear::default(); dim * dim * dim], alpha: None }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> Option<&Rational> {
        self.alpha.as_ref()
    }

    fn slot(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, c: AlphaLinear) {
        let s = self.slot(i, j, k);
        self.constants[s] = c;
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &AlphaLinear {
        &self.constants[self.slot(i, j, k)]
    }

    /// True if some structure constant depends on alpha.
    pub fn is_parametric(&self) -> bool {
        self.constants.iter().any(|c| !c.is_constant())
    }

    /// True if every constant has a rational value (alpha set or unused).
    pub fn is_specialized(&self) -> bool {
        self.alpha.is_some() || !self.is_parametric()
    }

    /// Rational value of `c[i][j][k]`; fails for symbolic alpha.
    pub fn value(&self, i: usize, j: usize, k: usize) -> Result<Rational, AlgebraError> {
        let c = self.constant(i, j, k);
        match (&self.alpha, c.is_constant()) {
            (_, true) => Ok(c.constant.clone()),
            (Some(a), false) => Ok(c.at(a)),
            (None, false) => Err(AlgebraError::NotSpecialized(self.name.clone())),
        }
    }

    /// Dense table of rational constants, indexed `[i][j][k]` flattened.
    pub fn values(&self) -> Result<Vec<Rational>, AlgebraError> {
        let mut out = Vec::with_capacity(self.constants.len());
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    out.push(self.value(i, j, k)?);
                }
            }
        }
        Ok(out)
    }

    /// Fixes alpha. The constants keep their affine form; `value` now resolves.
    pub fn specialize(&self, alpha: Rational) -> Self {
        let mut out = self.clone();
        out.alpha = Some(alpha);
        out
    }

    pub(crate) fn with_alpha(mut self, alpha: Option<Rational>) -> Self {
        self.alpha = alpha;
        self
    }

    /// Display label, e.g. `A5[alpha=1/2]`.
    pub fn label(&self) -> String {
        match &self.alpha {
            Some(a) if self.is_parametric() => format!("{}[alpha={}]", self.name, format_rational(a)),
            _ => self.name.clone(),
        }
    }

    /// Nonzero products as text lines such as `e1*e1 = e1 + e2`.
    pub fn product_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut terms = Vec::new();
                for k in 0..self.dim {
                    let c = self.constant(i, j, k);
                    if c.is_zero() {
                        continue;
                    }
                    let coeff = c.to_text();
                    if coeff == "1" {
                        terms.push(format!("e{}", k + 1));
                    } else if c.is_constant() || c.constant.is_zero() {
                        terms.push(format!("{}*e{}", coeff, k + 1));
                    } else {
                        terms.push(format!("({})*e{}", coeff, k + 1));
                    }
                }
                if !terms.is_empty() {
                    lines.push(format!("e{}*e{} = {}", i + 1, j + 1, terms.join(" + ")));
                }
            }
        }
        lines
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label(), self.product_lines().join(", "))
    }
}

/// Coordinates of an element in the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector(pub Vec<Rational>);

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Rational::from_integer(1.into());
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}
