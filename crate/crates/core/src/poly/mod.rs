//! Exact multivariate polynomials and rational functions over the rationals.

mod monomial;
mod parse;
mod polynomial;
mod ratfun;
mod vars;

use thiserror::Error;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_polynomial, parse_rational_function};
pub use polynomial::Polynomial;
pub use ratfun::RationalFunction;
pub use vars::VariableTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live over different variable tables")]
    TableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0:?}`")]
    BadVariableName(String),
    #[error("denominator vanishes identically: {0}")]
    ZeroDenominator(String),
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("cannot parse `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, HashMap};
    use std::sync::Arc;

    use super::*;
    use crate::rational::{int, ratio, Rational};

    fn table() -> Arc<VariableTable> {
        VariableTable::new(["x", "y", "z"]).unwrap()
    }

    fn p(s: &str, t: &Arc<VariableTable>) -> Polynomial {
        parse_polynomial(s, t).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let t = table();
        assert!((&p("x^2", &t) + &p("-x^2", &t)).is_zero());
        assert_eq!(&p("x+y", &t) * &p("x-y", &t), p("x^2 - y^2", &t));
        assert_eq!(p("x+1", &t).pow(2), p("x^2 + 2*x + 1", &t));
        assert_eq!(p("x", &t).pow(0), Polynomial::one(&t));
    }

    #[test]
    fn table_mismatch_is_an_error() {
        let a = table();
        let b = VariableTable::new(["x", "w"]).unwrap();
        assert_eq!(p("x", &a).checked_add(&p("x", &b)), Err(PolyError::TableMismatch));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(VariableTable::new(["a", "a"]).is_err());
    }

    #[test]
    fn text_round_trip_is_canonical() {
        let t = VariableTable::new(["R11", "R12", "R21", "R22"]).unwrap();
        let e = p("-R11^2 - 2*R11*R21 - R12*R21", &t);
        assert_eq!(e.to_text(), "-R11^2 - 2*R11*R21 - R12*R21");
        let q = p("1/2*R22 - 3/4", &t);
        assert_eq!(q.to_text(), "1/2*R22 - 3/4");
        assert_eq!(p(&q.to_text(), &t), q);
    }

    #[test]
    fn substitute_examples() {
        let t = VariableTable::new(["R11", "R12", "R21", "R22", "t"]).unwrap();
        let f = p("R11^2 + R12", &t);
        let mut b = BTreeMap::new();
        b.insert("R11".to_string(), p("t", &t).into());
        b.insert("R12".to_string(), p("-t^2", &t).into());
        assert!(f.substitute_named(&b, &t).unwrap().is_zero());

        let params = VariableTable::new(["r11", "r12"]).unwrap();
        let target = parse_rational_function("-r11^2/r12", &params).unwrap();
        let mut b = BTreeMap::new();
        b.insert("R21".to_string(), target.clone());
        let out = p("R21", &t).substitute_named(&b, &params).unwrap();
        assert!(out.equals(&target).unwrap());

        let a = VariableTable::new(["R22", "alpha"]).unwrap();
        let mut b = BTreeMap::new();
        b.insert("alpha".to_string(), RationalFunction::constant(&a, ratio(1, 2)));
        b.insert("R22".to_string(), RationalFunction::constant(&a, int(2)));
        let v = p("alpha*R22", &a).substitute_named(&b, &a).unwrap();
        assert_eq!(v.constant_value(), Some(int(1)));
    }

    #[test]
    fn substitute_rejects_vanishing_denominator() {
        let t = table();
        assert!(parse_rational_function("x/0", &t).is_err());
        let f = parse_rational_function("x/y", &t).unwrap();
        let mut b = HashMap::new();
        b.insert(1usize, RationalFunction::zero(&t));
        assert!(matches!(f.substitute(&b, &t), Err(PolyError::ZeroDenominator(_))));
    }

    #[test]
    fn evaluate_examples() {
        let t = VariableTable::new(["R11", "R12", "R21", "R22"]).unwrap();
        let mut pt = BTreeMap::new();
        for (n, v) in [("R11", 1), ("R12", 0), ("R21", 0), ("R22", 0)] {
            pt.insert(n.to_string(), int(v));
        }
        assert_eq!(p("-R11^2 - 2*R11*R21 - R12*R21", &t).evaluate(&pt).unwrap(), int(-1));
        assert_eq!(Polynomial::zero(&t).evaluate(&pt).unwrap(), int(0));
        let x = table();
        let mut pt = BTreeMap::new();
        pt.insert("x".to_string(), int(1));
        assert_eq!(p("(x-1)*(x-2)", &x).evaluate(&pt).unwrap(), int(0));
        assert!(matches!(p("y", &x).evaluate(&pt), Err(PolyError::UnboundVariable(_))));
    }

    #[test]
    fn ratfun_equality_examples() {
        let t = table();
        let rf = |s: &str| parse_rational_function(s, &t).unwrap();
        assert!(rf("x/x").equals(&rf("1")).unwrap());
        assert!(rf("(x^2-1)/(x-1)").equals(&rf("x+1")).unwrap());
        assert!(!rf("x/y").equals(&rf("y/x")).unwrap());
    }

    #[test]
    fn ratfun_denominator_is_monic() {
        let t = table();
        let f = parse_rational_function("x/(2*y+4)", &t).unwrap();
        assert_eq!(f.denominator().leading_coefficient(MonomialOrder::GrevLex), Some(&Rational::from_integer(1.into())));
        assert_eq!(f.to_text(), "(1/2*x)/(y + 2)");
    }

    #[test]
    fn exact_division() {
        let t = table();
        let q = p("x^2 - y^2", &t).div_exact(&p("x + y", &t)).unwrap();
        assert_eq!(q, p("x - y", &t));
        assert!(p("x^2 + y", &t).div_exact(&p("x", &t)).is_none());
    }

    #[test]
    fn coefficients_in_variable() {
        let t = table();
        let c = p("x*y^2 + 3*y + x*z - 1", &t).coefficients_in(1);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], p("x*z - 1", &t));
        assert_eq!(c[1], p("3", &t));
        assert_eq!(c[2], p("x", &t));
    }

    #[test]
    fn primitive_clears_denominators() {
        let t = table();
        assert_eq!(p("-1/2*x + 3/4", &t).primitive(), p("2*x - 3", &t));
    }

    #[test]
    fn pure_powers_and_monomial_content() {
        let t = table();
        assert_eq!(p("x^2 - 2*x*y + y^2", &t).pure_power_root(), Some(p("x - y", &t)));
        assert_eq!(p("3*z^3", &t).pure_power_root(), Some(p("z", &t)));
        assert_eq!(p("x^2 - y", &t).pure_power_root(), None);
        let q = p("x^3*y - x^2*y^2", &t);
        assert_eq!(q.div_monomial(&q.monomial_content()), p("x - y", &t));
        let f = parse_rational_function("x^2/(x^2 - 2*x)", &t).unwrap();
        assert_eq!(f.to_text(), "(x)/(x - 2)");
    }
}
