use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, AlgebraSpec, AlphaLinear};
use crate::poly::{parse_polynomial, MonomialOrder, VariableTable};
use crate::rational::{format_rational, parse_rational};

/// `"i,j" -> {"k": "a+b*alpha"}` with 1-based indices; absent entries are zero.
pub type ProductTable = BTreeMap<String, BTreeMap<String, String>>;

/// On-disk description of a custom algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub name: String,
    pub dim: usize,
    pub products: ProductTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
}

fn parse_index(s: &str, dim: usize) -> Result<usize, AlgebraError> {
    let i: usize = s.trim().parse().map_err(|_| AlgebraError::Invalid(format!("bad basis index `{s}`")))?;
    if i == 0 || i > dim {
        return Err(AlgebraError::IndexOutOfRange { index: i, dim });
    }
    Ok(i - 1)
}

fn parse_alpha_linear(text: &str) -> Result<AlphaLinear, AlgebraError> {
    let vars = VariableTable::new(["alpha"]).expect("static table");
    let p = parse_polynomial(text, &vars).map_err(|e| AlgebraError::Invalid(e.to_string()))?;
    if p.total_degree() > 1 {
        return Err(AlgebraError::Invalid(format!("`{text}` is not affine in alpha")));
    }
    let mut out = AlphaLinear::default();
    for (m, c) in p.terms_by(MonomialOrder::Lex) {
        if m.is_one() {
            out.constant = c.clone();
        } else {
            out.alpha = c.clone();
        }
    }
    Ok(out)
}

impl AlgebraJson {
    pub fn from_spec(a: &AlgebraSpec) -> Self {
        let n = a.dim();
        let mut products = ProductTable::new();
        for i in 0..n {
            for j in 0..n {
                let mut row = BTreeMap::new();
                for k in 0..n {
                    let c = a.constant(i, j, k);
                    if !c.is_zero() {
                        row.insert((k + 1).to_string(), c.to_text());
                    }
                }
                if !row.is_empty() {
                    products.insert(format!("{},{}", i + 1, j + 1), row);
                }
            }
        }
        Self { name: a.name().to_string(), dim: n, products, alpha: a.alpha().map(format_rational) }
    }

    pub fn to_spec(&self) -> Result<AlgebraSpec, AlgebraError> {
        if self.dim == 0 {
            return Err(AlgebraError::Invalid("dimension must be positive".into()));
        }
        let mut a = AlgebraSpec::zero(self.name.clone(), self.dim);
        for (pair, row) in &self.products {
            let (i, j) = pair
                .split_once(',')
                .ok_or_else(|| AlgebraError::Invalid(format!("product key `{pair}` is not `i,j`")))?;
            let (i, j) = (parse_index(i, self.dim)?, parse_index(j, self.dim)?);
            for (k, text) in row {
                let k = parse_index(k, self.dim)?;
                a.set(i, j, k, parse_alpha_linear(text)?);
            }
        }
        let alpha = match &self.alpha {
            Some(s) => Some(parse_rational(s).map_err(|e| AlgebraError::Invalid(e.to_string()))?),
            None => None,
        };
        if alpha.is_some() && !a.is_parametric() {
            return Err(AlgebraError::UnexpectedAlpha(self.name.clone()));
        }
        Ok(a.with_alpha(alpha))
    }

    pub fn from_json(text: &str) -> Result<AlgebraSpec, AlgebraError> {
        let j: Self = serde_json::from_str(text).map_err(|e| AlgebraError::Invalid(e.to_string()))?;
        j.to_spec()
    }
}
