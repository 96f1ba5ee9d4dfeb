use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Polynomial;
use crate::rational::Rational;

/// Dense coefficients (constant term first) of a polynomial in the single
/// variable `x`, scaled to integers.
fn integer_coefficients(p: &Polynomial, x: usize) -> Vec<BigInt> {
    let coeffs: Vec<Rational> = p.coefficients_in(x).iter().map(|c| c.constant_value().expect("univariate")).collect();
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn eval(coeffs: &[BigInt], r: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * r + Rational::from_integer(c.clone()))
}

/// Synthetic division by `(x - r)`; assumes `r` is a root.
fn deflate(coeffs: &[BigInt], r: &Rational) -> Vec<Rational> {
    let n = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = carry * r + Rational::from_integer(coeffs[k].clone());
        out[k - 1] = carry.clone();
    }
    out
}

fn to_integers(coeffs: &[Rational]) -> Vec<BigInt> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

/// Distinct rational roots of a univariate polynomial in `x`, ascending, and the
/// cofactor left after dividing out every rational root (with multiplicity) as
/// dense coefficients, constant term first. The cofactor has no rational roots.
pub fn rational_roots(p: &Polynomial, x: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut coeffs = integer_coefficients(p, x);
    let mut roots = Vec::new();
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    loop {
        if coeffs.len() <= 1 {
            break;
        }
        let lead = coeffs.last().unwrap().clone();
        let mut found = None;
        'search: for q in divisors(&lead) {
            for num in divisors(&coeffs[0]) {
                for sign in [1, -1] {
                    let r = Rational::new(&num * sign, q.clone());
                    if eval(&coeffs, &r).is_zero() {
                        found = Some(r);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                coeffs = to_integers(&deflate(&coeffs, &r));
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            None => break,
        }
    }
    roots.sort();
    let cofactor = coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect();
    (roots, cofactor)
}
