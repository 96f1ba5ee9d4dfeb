use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{MonomialOrder, PolyError, Polynomial, VariableTable};
use crate::rational::Rational;

/// Quotient of two polynomials over the same table.
///
/// The denominator is never the zero polynomial and is scaled so its grevlex
/// leading coefficient is 1. No gcd is taken; equality goes through
/// cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator(num.to_text()));
        }
        if num.vars() != den.vars() {
            return Err(PolyError::TableMismatch);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        Self { num: p, den }
    }

    pub fn zero(vars: &Arc<VariableTable>) -> Self {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn constant(vars: &Arc<VariableTable>, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            let one = Polynomial::one(num.vars());
            return Self { num, den: one };
        }
        if let Some(c) = den.constant_value() {
            let inv = c.recip();
            let one = Polynomial::one(num.vars());
            return Self { num: num.scale(&inv), den: one };
        }
        let common = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if common.is_one() { (num, den) } else { (num.div_monomial(&common), den.div_monomial(&common)) };
        if let Some(c) = den.constant_value() {
            let inv = c.recip();
            let one = Polynomial::one(num.vars());
            return Self { num: num.scale(&inv), den: one };
        }
        if let Some(q) = num.div_exact(&den) {
            let one = Polynomial::one(num.vars());
            return Self { num: q, den: one };
        }
        let lc = den.leading_coefficient(MonomialOrder::GrevLex).unwrap().clone();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        self.num.vars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.constant_value().filter(One::is_one).map(|_| &self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.den == other.den {
            return Ok(Self::normalized(self.num.checked_add(&other.num)?, self.den.clone()));
        }
        let n = self.num.checked_mul(&other.den)?.checked_add(&other.num.checked_mul(&self.den)?)?;
        Ok(Self::normalized(n, self.den.checked_mul(&other.den)?))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.den.is_constant() && other.den.is_constant() {
            return Ok(Self::from_poly(self.num.checked_mul(&other.num)?));
        }
        Ok(Self::normalized(self.num.checked_mul(&other.num)?, self.den.checked_mul(&other.den)?))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PolyError> {
        if other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(self.num.checked_mul(&other.den)?, self.den.checked_mul(&other.num)?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Cross-multiplication test: `f.num * g.den == g.num * f.den`.
    pub fn equals(&self, other: &Self) -> Result<bool, PolyError> {
        Ok(self.num.checked_mul(&other.den)? == other.num.checked_mul(&self.den)?)
    }

    /// Substitutes into numerator and denominator; fails if the image of the
    /// denominator is identically zero.
    pub fn substitute(
        &self,
        bindings: &std::collections::HashMap<usize, RationalFunction>,
        target: &Arc<VariableTable>,
    ) -> Result<Self, PolyError> {
        let n = self.num.substitute(bindings, target)?;
        let d = self.den.substitute(bindings, target)?;
        if d.is_zero() {
            return Err(PolyError::ZeroDenominator(self.den.to_text()));
        }
        n.checked_div(&d)
    }

    pub fn evaluate(&self, point: &std::collections::BTreeMap<String, Rational>) -> Result<Rational, PolyError> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(PolyError::ZeroDenominator(self.den.to_text()));
        }
        Ok(self.num.evaluate(point)? / d)
    }

    pub fn remap(&self, target: &Arc<VariableTable>) -> Result<Self, PolyError> {
        Ok(Self { num: self.num.remap(target)?, den: self.den.remap(target)? })
    }

    pub fn to_text(&self) -> String {
        if self.den.is_one_poly() {
            self.num.to_text()
        } else {
            format!("({})/({})", self.num.to_text(), self.den.to_text())
        }
    }
}

impl Polynomial {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.to_text())
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_add(rhs).expect("rational function variable tables differ")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_add(&-rhs).expect("rational function variable tables differ")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_mul(rhs).expect("rational function variable tables differ")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}
