use num_traits::{One, Zero};

use super::{AlgebraError, AlgebraSpec, AlphaLinear};
use crate::rational::{int, ratio, Rational};

/// Names of the eight classified two-dimensional pre-Lie algebras.
pub const CATALOG_NAMES: [&str; 8] = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"];

/// Default alpha sample set for the parametric families A5 and A6.
pub const DEFAULT_ALPHA_SAMPLES: [(i64, i64); 5] = [(-1, 1), (0, 1), (1, 2), (1, 1), (2, 1)];

pub fn catalog_names() -> &'static [&'static str] {
    &CATALOG_NAMES
}

pub fn is_parametric_name(name: &str) -> bool {
    matches!(name, "A5" | "A6")
}

/// How alpha is supplied for a parametric catalog algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alpha {
    Symbolic,
    Value(Rational),
}

fn c(x: Rational) -> AlphaLinear {
    AlphaLinear::constant(x)
}

/// Structure constants of `name` read off the classification list; products
/// not listed there are zero.
pub fn catalog(name: &str, alpha: Option<Alpha>) -> Result<AlgebraSpec, AlgebraError> {
    if !CATALOG_NAMES.contains(&name) {
        return Err(AlgebraError::UnknownAlgebra(name.to_string()));
    }
    let parametric = is_parametric_name(name);
    let alpha_value = match (parametric, alpha) {
        (false, Some(_)) => return Err(AlgebraError::UnexpectedAlpha(name.to_string())),
        (true, None) => return Err(AlgebraError::MissingAlpha(name.to_string())),
        (true, Some(Alpha::Value(a))) => Some(a),
        _ => None,
    };
    let one = Rational::one();
    let alpha_e2 = AlphaLinear { constant: Rational::zero(), alpha: Rational::one() };
    let mut a = AlgebraSpec::zero(name, 2);
    // indices: e1 -> 0, e2 -> 1
    match name {
        "A1" => {
            a.set(0, 0, 0, c(one.clone()));
            a.set(0, 0, 1, c(one.clone()));
            a.set(1, 0, 1, c(one));
        }
        "A2" => {
            a.set(0, 0, 0, c(one.clone()));
            a.set(0, 0, 1, c(one.clone()));
            a.set(0, 1, 1, c(one));
        }
        "A3" => a.set(0, 0, 1, c(one)),
        "A4" => a.set(1, 0, 0, c(one)),
        "A5" => {
            a.set(0, 0, 0, c(one));
            a.set(0, 1, 1, alpha_e2);
        }
        "A6" => {
            a.set(0, 0, 0, c(one.clone()));
            a.set(0, 1, 1, alpha_e2);
            a.set(1, 0, 1, c(one));
        }
        "A7" => {
            a.set(0, 0, 0, c(one.clone()));
            a.set(1, 1, 1, c(one));
        }
        "A8" => {
            a.set(0, 0, 0, c(one.clone()));
            a.set(0, 1, 1, c(int(2)));
            a.set(1, 0, 0, c(ratio(1, 2)));
            a.set(1, 0, 1, c(one.clone()));
            a.set(1, 1, 1, c(one));
        }
        _ => unreachable!(),
    }
    Ok(a.with_alpha(alpha_value))
}
