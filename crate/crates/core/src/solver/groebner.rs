use std::sync::Arc;

use crate::poly::{Monomial, MonomialOrder, Polynomial, VariableTable};

/// A reduced Gröbner basis: monic, sorted by leading monomial (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    pub vars: Arc<VariableTable>,
    pub order: MonomialOrder,
    pub polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    /// True when the ideal is the whole ring (empty variety).
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(Polynomial::is_constant)
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        reduce(p, &self.polys, self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

fn lead(p: &Polynomial, order: MonomialOrder) -> (Monomial, crate::Rational) {
    let (m, c) = p.leading_term(order).expect("nonzero polynomial");
    (m.clone(), c.clone())
}

/// Full normal form of `p` modulo `basis` (every term reduced, not just the head).
pub fn reduce(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let leads: Vec<(Monomial, crate::Rational)> = basis.iter().map(|g| lead(g, order)).collect();
    let mut p = p.clone();
    let mut rem = Polynomial::zero(p.vars());
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let (lm, lc) = &leads[k];
                p = &p - &basis[k].mul_term(&lm.quotient_of(&m), &(&c / lc));
            }
            None => {
                p.add_term(m.clone(), -c.clone());
                rem.add_term(m, c);
            }
        }
    }
    rem
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (fm, fc) = lead(f, order);
    let (gm, gc) = lead(g, order);
    let l = fm.lcm(&gm);
    &f.mul_term(&fm.quotient_of(&l), &fc.recip()) - &g.mul_term(&gm.quotient_of(&l), &gc.recip())
}

/// Buchberger's algorithm with the coprime and chain criteria, followed by
/// inter-reduction. All inputs must share one variable table.
pub fn buchberger(input: &[Polynomial], vars: &Arc<VariableTable>, order: MonomialOrder) -> GroebnerBasis {
    let mut basis: Vec<Polynomial> = Vec::new();
    for p in input {
        let r = reduce(p, &basis, order);
        if !r.is_zero() {
            basis.push(r.monic(order));
        }
    }
    if basis.iter().any(Polynomial::is_constant) {
        return GroebnerBasis { vars: vars.clone(), order, polys: vec![Polynomial::one(vars)] };
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let lcm_of = |&(i, j): &(usize, usize), b: &[Polynomial]| {
            lead(&b[i], order).0.lcm(&lead(&b[j], order).0)
        };
        let best = (0..pairs.len())
            .min_by(|&a, &b| order.cmp(&lcm_of(&pairs[a], &basis), &lcm_of(&pairs[b], &basis)))
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        done.insert((i, j));
        let (mi, mj) = (lead(&basis[i], order).0, lead(&basis[j], order).0);
        if mi.coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lead(&basis[k], order).0.divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j], order), &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return GroebnerBasis { vars: vars.clone(), order, polys: vec![Polynomial::one(vars)] };
        }
        let n = basis.len();
        basis.push(r.monic(order));
        for k in 0..n {
            pairs.push((k, n));
        }
    }
    GroebnerBasis { vars: vars.clone(), order, polys: interreduce(basis, order) }
}

fn interreduce(mut basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    // drop elements whose leading monomial is a multiple of another's
    basis.sort_by(|a, b| order.cmp(&lead(a, order).0, &lead(b, order).0));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in basis {
        let m = lead(&p, order).0;
        if !minimal.iter().any(|q| lead(q, order).0.divides(&m)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, q)| q.clone()).collect();
        let head = lead(&minimal[k], order);
        let mut tail = minimal[k].clone();
        tail.add_term(head.0.clone(), -head.1.clone());
        let mut r = reduce(&tail, &others, order);
        r.add_term(head.0, head.1);
        out.push(r.monic(order));
    }
    out.sort_by(|a, b| order.cmp(&lead(a, order).0, &lead(b, order).0));
    out
}

/// Radical membership by the Rabinowitsch trick: is `g` nonzero nowhere on the
/// variety of `eqs`? Equivalently, does `g` vanish identically there?
pub fn vanishes_on(eqs: &[Polynomial], g: &Polynomial, vars: &Arc<VariableTable>) -> bool {
    if g.is_zero() {
        return true;
    }
    let (ext, lifted) = with_slack(eqs, vars);
    let s = Polynomial::var(&ext, 0);
    let g = g.remap(&ext).expect("same names");
    let mut sys = lifted;
    sys.push(&Polynomial::one(&ext) - &(&s * &g));
    buchberger(&sys, &ext, MonomialOrder::GrevLex).is_unit()
}

/// Prepends a slack variable `_s` (largest in every order) to the table.
pub(crate) fn with_slack(eqs: &[Polynomial], vars: &Arc<VariableTable>) -> (Arc<VariableTable>, Vec<Polynomial>) {
    let names = std::iter::once("_s".to_string()).chain(vars.names().iter().cloned());
    let ext = VariableTable::new(names).expect("fresh slack name");
    let lifted = eqs.iter().map(|p| p.remap(&ext).expect("same names")).collect();
    (ext, lifted)
}

/// Generators of the saturation `(eqs) : g^inf`, computed with lex elimination
/// of a slack variable. Returns the reduced lex basis over `vars`.
pub fn saturate(eqs: &[Polynomial], g: &Polynomial, vars: &Arc<VariableTable>) -> GroebnerBasis {
    if g.is_constant() && !g.is_zero() {
        return buchberger(eqs, vars, MonomialOrder::Lex);
    }
    let (ext, mut sys) = with_slack(eqs, vars);
    let s = Polynomial::var(&ext, 0);
    let g = g.remap(&ext).expect("same names");
    sys.push(&Polynomial::one(&ext) - &(&s * &g));
    let gb = buchberger(&sys, &ext, MonomialOrder::Lex);
    let kept: Vec<Polynomial> = gb
        .polys
        .iter()
        .filter(|p| p.degree_in(0) == 0)
        .map(|p| p.remap(vars).expect("slack eliminated"))
        .collect();
    let polys = if kept.iter().any(|p| p.is_constant()) { vec![Polynomial::one(vars)] } else { kept };
    GroebnerBasis { vars: vars.clone(), order: MonomialOrder::Lex, polys }
}

/// Product of polynomials, `1` for an empty list.
pub(crate) fn product(ps: &[Polynomial], vars: &Arc<VariableTable>) -> Polynomial {
    ps.iter().fold(Polynomial::one(vars), |acc, p| &acc * p)
}
