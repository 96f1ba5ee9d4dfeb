use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Convention, OperatorError};
use crate::algebra::Vector;
use crate::poly::{Polynomial, RationalFunction, VariableTable};
use crate::rational::{format_rational, Rational};

/// An `n x n` operator matrix whose entries are rational functions of named
/// family parameters (plain numbers use an empty parameter table).
///
/// Stored in the row convention `P(e_i) = sum_j R[i][j] e_j`.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    params: Arc<VariableTable>,
    entries: Vec<RationalFunction>,
}

fn empty_table() -> Arc<VariableTable> {
    VariableTable::new(Vec::<String>::new()).expect("empty table")
}

impl OperatorMatrix {
    pub fn new(dim: usize, entries: Vec<RationalFunction>) -> Result<Self, OperatorError> {
        if entries.len() != dim * dim {
            return Err(OperatorError::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        let params = entries.first().map(|e| e.vars().clone()).unwrap_or_else(empty_table);
        if entries.iter().any(|e| e.vars() != &params) {
            return Err(OperatorError::Poly(crate::poly::PolyError::TableMismatch));
        }
        Ok(Self { dim, params, entries })
    }

    pub fn from_rationals(rows: &[Vec<Rational>]) -> Self {
        let dim = rows.len();
        let params = empty_table();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|q| RationalFunction::constant(&params, q.clone())))
            .collect();
        Self { dim, params, entries }
    }

    /// Row-major numeric entries.
    pub fn from_flat(dim: usize, flat: &[Rational]) -> Self {
        let rows: Vec<Vec<Rational>> = flat.chunks(dim).map(<[Rational]>::to_vec).collect();
        Self::from_rationals(&rows)
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_flat(dim, &vec![Rational::zero(); dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Rational::one())
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        let flat: Vec<Rational> =
            (0..dim * dim).map(|s| if s / dim == s % dim { c.clone() } else { Rational::zero() }).collect();
        Self::from_flat(dim, &flat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &Arc<VariableTable> {
        &self.params
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n).map(|s| self.entries[(s % n) * n + s / n].clone()).collect();
        Self { dim: n, params: self.params.clone(), entries }
    }

    /// The matrix as a row-convention operator.
    pub fn in_convention(&self, c: Convention) -> Self {
        match c {
            Convention::Row => self.clone(),
            Convention::Column => self.transpose(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { dim: self.dim, params: self.params.clone(), entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    /// Row-major rational entries, if every entry is a constant.
    pub fn numeric(&self) -> Option<Vec<Rational>> {
        self.entries.iter().map(RationalFunction::constant_value).collect()
    }

    /// Substitutes values for the family parameters.
    pub fn specialize(&self, values: &HashMap<usize, Rational>) -> Result<Self, OperatorError> {
        let target = empty_table();
        let bindings: HashMap<usize, RationalFunction> =
            values.iter().map(|(&i, q)| (i, RationalFunction::constant(&target, q.clone()))).collect();
        let entries = self
            .entries
            .iter()
            .map(|e| e.substitute(&bindings, &target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { dim: self.dim, params: target, entries })
    }

    /// Re-expresses the entries over a wider parameter table.
    pub fn remap(&self, target: &Arc<VariableTable>) -> Result<Self, OperatorError> {
        let entries = self.entries.iter().map(|e| e.remap(target)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { dim: self.dim, params: target.clone(), entries })
    }

    /// `P(v)` for a numeric matrix (row convention).
    pub fn apply(&self, v: &Vector) -> Result<Vector, OperatorError> {
        let m = self.numeric().ok_or(OperatorError::NotNumeric)?;
        if v.dim() != self.dim {
            return Err(OperatorError::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        let n = self.dim;
        let mut out = Vector::zero(n);
        for (mi, vm) in v.0.iter().enumerate() {
            if vm.is_zero() {
                continue;
            }
            for k in 0..n {
                out.0[k] += vm * &m[mi * n + k];
            }
        }
        Ok(out)
    }

    pub fn rows_text(&self) -> Vec<Vec<String>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry(i, j).to_text()).collect()).collect()
    }

    /// Parameter-free polynomial entries evaluate to `p/q` strings.
    pub fn numeric_text(&self) -> Option<Vec<Vec<String>>> {
        let m = self.numeric()?;
        Some(m.chunks(self.dim).map(|r| r.iter().map(format_rational).collect()).collect())
    }

    pub fn constant_entry(params: &Arc<VariableTable>, q: Rational) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::constant(params, q))
    }
}

impl fmt::Display for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows_text().into_iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorMatrix{self}")
    }
}
