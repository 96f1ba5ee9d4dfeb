use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::vars::same_table;
use super::{Monomial, MonomialOrder, PolyError, RationalFunction, VariableTable};
use crate::rational::{format_rational, Rational};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms live in a `BTreeMap`, so two polynomials describing the same
/// expression are structurally identical regardless of how they were built.
#[derive(Clone)]
pub struct Polynomial {
    vars: Arc<VariableTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(vars: &Arc<VariableTable>) -> Self {
        Self { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VariableTable>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Arc<VariableTable>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<VariableTable>, index: usize) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial::var(vars.len(), index), Rational::one());
        p
    }

    pub fn var_named(vars: &Arc<VariableTable>, name: &str) -> Result<Self, PolyError> {
        let i = vars.index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, i))
    }

    pub fn from_terms<I>(vars: &Arc<VariableTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            debug_assert_eq!(m.len(), vars.len());
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in the storage (lexicographic, ascending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn terms_by(&self, order: MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.degree_in(index)).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn variables_used(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.degree_in(i) > 0).collect()
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        match order {
            // storage order is lex already
            MonomialOrder::Lex => self.terms.iter().next_back(),
            MonomialOrder::GrevLex => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self, order: MonomialOrder) -> Option<&Rational> {
        self.leading_term(order).map(|(_, c)| c)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(PolyError::TableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact value at a point given by name. Every occurring variable must be bound.
    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, PolyError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match point.get(name) {
                Some(v) => values.push(Some(v.clone())),
                None if self.degree_in(i) == 0 => values.push(None),
                None => return Err(PolyError::UnboundVariable(name.clone())),
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= pow_rational(values[i].as_ref().unwrap(), e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact value at a dense point aligned with the table.
    pub fn eval_dense(&self, values: &[Rational]) -> Rational {
        debug_assert_eq!(values.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= pow_rational(&values[i], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes rational functions for variables (by index into this
    /// polynomial's table). The result lives over `target`; any unbound variable
    /// that occurs must exist in `target` under the same name.
    pub fn substitute(
        &self,
        bindings: &HashMap<usize, RationalFunction>,
        target: &Arc<VariableTable>,
    ) -> Result<RationalFunction, PolyError> {
        let mut images: Vec<Option<RationalFunction>> = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            if let Some(b) = bindings.get(&i) {
                if !same_table(b.vars(), target) {
                    return Err(PolyError::TableMismatch);
                }
                if b.denominator().is_zero() {
                    return Err(PolyError::ZeroDenominator(name.clone()));
                }
                images.push(Some(b.clone()));
            } else if self.degree_in(i) > 0 {
                let j = target.index(name).ok_or_else(|| PolyError::UnknownVariable(name.clone()))?;
                images.push(Some(RationalFunction::from_poly(Polynomial::var(target, j))));
            } else {
                images.push(None);
            }
        }
        // powers are cached per (variable, exponent)
        let mut cache: HashMap<(usize, u32), RationalFunction> = HashMap::new();
        let mut acc = RationalFunction::zero(target);
        for (m, c) in &self.terms {
            let mut t = RationalFunction::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].as_ref().unwrap().pow(e))
                    .clone();
                t = &t * &p;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Convenience form of [`Self::substitute`] keyed by variable name.
    pub fn substitute_named(
        &self,
        bindings: &BTreeMap<String, RationalFunction>,
        target: &Arc<VariableTable>,
    ) -> Result<RationalFunction, PolyError> {
        let mut by_index = HashMap::new();
        for (name, rf) in bindings {
            let i = self.vars.index(name).ok_or_else(|| PolyError::UnknownVariable(name.clone()))?;
            by_index.insert(i, rf.clone());
        }
        self.substitute(&by_index, target)
    }

    /// Re-expresses the polynomial over another table by matching names.
    pub fn remap(&self, target: &Arc<VariableTable>) -> Result<Self, PolyError> {
        if same_table(&self.vars, target) {
            return Ok(self.clone());
        }
        let mut index_map = vec![usize::MAX; self.vars.len()];
        for (i, name) in self.vars.names().iter().enumerate() {
            if let Some(j) = target.index(name) {
                index_map[i] = j;
            } else if self.degree_in(i) > 0 {
                return Err(PolyError::UnknownVariable(name.clone()));
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &x) in m.exponents().iter().enumerate() {
                if x > 0 {
                    e[index_map[i]] = x;
                }
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }

    /// Coefficients as a univariate polynomial in `index`: entry `d` is the
    /// coefficient of `x^d`, itself free of `x`.
    pub fn coefficients_in(&self, index: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(index) as usize;
        let mut out = vec![Self::zero(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let d = m.degree_in(index) as usize;
            out[d].add_term(m.with_exponent(index, 0), c.clone());
        }
        out
    }

    /// Quotient `self / divisor` when the division is exact, `None` otherwise.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() || !same_table(&self.vars, &divisor.vars) {
            return None;
        }
        let order = MonomialOrder::Lex;
        let (dm, dc) = divisor.leading_term(order).map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = Self::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&m) {
                return None;
            }
            let qm = dm.quotient_of(&m);
            let qc = c / &dc;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// Largest monomial dividing every term (`1` for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
            None => Monomial::one(self.vars.len()),
        }
    }

    /// Exact division by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(t, c)| (m.quotient_of(t), c.clone())).collect();
        Self { vars: self.vars.clone(), terms }
    }

    /// If `self = c * (x - f)^d` with `d >= 2` for a variable `x` whose leading
    /// coefficient is constant, returns `x - f`, which has the same zero set.
    pub fn pure_power_root(&self) -> Option<Self> {
        for x in self.variables_used() {
            let d = self.degree_in(x);
            if d < 2 {
                continue;
            }
            let coeffs = self.coefficients_in(x);
            let Some(lc) = coeffs[d as usize].constant_value() else { continue };
            // x - f with f = -coeff_{d-1} / (d * lc)
            let shift = coeffs[d as usize - 1].scale(&(Rational::from_integer(d.into()) * &lc).recip());
            let root = &Self::var(&self.vars, x) + &shift;
            if root.pow(d).scale(&lc) == *self {
                return Some(root);
            }
        }
        None
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_coefficient(order) {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Integer coefficients with unit content and positive leading coefficient
    /// (grevlex). Same zero set, tidier printing.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.leading_coefficient(MonomialOrder::GrevLex).unwrap().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Canonical text: grevlex-descending terms such as `-R11^2 - 2*R11*R21 + 1/2*R22`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms_by(MonomialOrder::GrevLex).into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.monomial_text(m);
            if mono.is_empty() {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    fn monomial_text(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars.name(i).to_string()),
                _ => parts.push(format!("{}^{}", self.vars.name(i), e)),
            }
        }
        parts.join("*")
    }
}

pub(crate) fn pow_rational(x: &Rational, e: u32) -> Rational {
    match e {
        0 => Rational::one(),
        1 => x.clone(),
        2 => x * x,
        _ => num_traits::pow(x.clone(), e as usize),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_text())
    }
}

// Operator impls panic on a table mismatch; use the `checked_*` forms where
// operands may come from different tables.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial variable tables differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial variable tables differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial variable tables differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
