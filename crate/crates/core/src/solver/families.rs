use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::groebner::{product, reduce, saturate};
use super::roots::rational_roots;
use super::SolverError;
use crate::operators::EquationSystem;
use crate::poly::{Monomial, MonomialOrder, Polynomial, RationalFunction, VariableTable};
use crate::rational::Rational;

/// Case splits allowed per system before giving up.
pub const BRANCH_LIMIT: usize = 64;

/// One component of a solution set: the points satisfying every implicit
/// equation and no inequation, optionally with an explicit parametrization by
/// the free coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily {
    pub vars: Arc<VariableTable>,
    /// Coordinates left free (parametric families) or left implicit.
    pub free_params: Vec<String>,
    /// Value of every coordinate in terms of the free ones, in table order.
    pub parametric: Option<Vec<RationalFunction>>,
    pub implicit: Vec<Polynomial>,
    pub inequations: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub free_params: Vec<String>,
    /// `{"R11": "0", "R21": "R21", ...}`, absent for implicit-only families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parametric: Option<std::collections::BTreeMap<String, String>>,
    pub implicit: Vec<String>,
    pub inequations: Vec<String>,
}

impl SolutionFamily {
    pub fn constraint_count(&self) -> usize {
        self.implicit.len() + self.inequations.len()
    }

    /// `R11 = 0, R12 = 0, R22 != 0` style summary used for sorting and display.
    pub fn constraint_text(&self) -> String {
        let mut parts: Vec<String> = self.implicit.iter().map(|p| format!("{} = 0", p.to_text())).collect();
        parts.extend(self.inequations.iter().map(|p| format!("{} != 0", p.to_text())));
        if parts.is_empty() {
            "(no constraints)".into()
        } else {
            parts.join(", ")
        }
    }

    /// Membership of a point given as values for every table variable.
    pub fn contains(&self, point: &[Rational]) -> bool {
        self.implicit.iter().all(|p| p.eval_dense(point).is_zero())
            && self.inequations.iter().all(|p| !p.eval_dense(point).is_zero())
    }

    /// The point obtained by giving the free coordinates the listed values (in
    /// `free_params` order). `None` if an inequation fails or the family is
    /// implicit-only.
    pub fn point_at(&self, values: &[Rational]) -> Option<Vec<Rational>> {
        let par = self.parametric.as_ref()?;
        let mut dense = vec![Rational::zero(); self.vars.len()];
        for (name, v) in self.free_params.iter().zip(values) {
            dense[self.vars.index(name)?] = v.clone();
        }
        if self.inequations.iter().any(|p| p.eval_dense(&dense).is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(par.len());
        for f in par {
            let d = f.denominator().eval_dense(&dense);
            if d.is_zero() {
                return None;
            }
            out.push(f.numerator().eval_dense(&dense) / d);
        }
        Some(out)
    }

    /// Parametric form substituted into `polys`: every image must vanish
    /// identically for a sound family.
    pub fn satisfies(&self, polys: &[Polynomial]) -> Result<bool, SolverError> {
        let Some(par) = &self.parametric else { return Ok(false) };
        let bindings: HashMap<usize, RationalFunction> = par.iter().cloned().enumerate().collect();
        for p in polys {
            let p = p.remap(&self.vars)?;
            if !p.substitute(&bindings, &self.vars)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            free_params: self.free_params.clone(),
            parametric: self.parametric.as_ref().map(|par| {
                self.vars.names().iter().cloned().zip(par.iter().map(RationalFunction::to_text)).collect()
            }),
            implicit: self.implicit.iter().map(Polynomial::to_text).collect(),
            inequations: self.inequations.iter().map(Polynomial::to_text).collect(),
        }
    }
}

#[derive(Clone)]
struct Branch {
    eqs: Vec<Polynomial>,
    ineqs: Vec<Polynomial>,
    values: Vec<Option<RationalFunction>>,
}

enum Step {
    Dead,
    Done(SolutionFamily),
    /// Child branches plus, possibly, a finished implicit-only family.
    Split(Vec<Branch>, Option<SolutionFamily>),
}

/// Same zero set, simpler generator.
fn tidy(p: &Polynomial) -> Polynomial {
    p.pure_power_root().unwrap_or_else(|| p.clone()).primitive()
}

fn push_unique(list: &mut Vec<Polynomial>, p: Polynomial) {
    if !list.contains(&p) {
        list.push(p);
    }
}

impl Branch {
    /// Adds an inequation; `false` if it is identically zero.
    fn add_ineq(&mut self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return false;
        }
        // p != 0 splits into one inequation per variable of its monomial content
        let content = p.monomial_content();
        for (x, &e) in content.exponents().iter().enumerate() {
            if e > 0 {
                push_unique(&mut self.ineqs, Polynomial::var(p.vars(), x));
            }
        }
        let rest = p.div_monomial(&content);
        if !rest.is_constant() {
            push_unique(&mut self.ineqs, tidy(&rest));
        }
        true
    }

    /// Replaces variable `x` by `f` everywhere. `false` if the branch dies.
    fn substitute(&mut self, x: usize, f: RationalFunction, vars: &Arc<VariableTable>) -> Result<bool, SolverError> {
        let bind = HashMap::from([(x, f.clone())]);
        for v in self.values.iter_mut().flatten() {
            *v = v.substitute(&bind, vars)?;
        }
        self.values[x] = Some(f.clone());
        let mut eqs = Vec::with_capacity(self.eqs.len());
        for p in &self.eqs {
            let r = p.substitute(&bind, vars)?;
            if !r.numerator().is_zero() {
                push_unique(&mut eqs, tidy(r.numerator()));
            }
        }
        self.eqs = eqs;
        let old = std::mem::take(&mut self.ineqs);
        for p in &old {
            if !self.add_ineq(p.substitute(&bind, vars)?.numerator()) {
                return Ok(false);
            }
        }
        Ok(self.add_ineq(f.denominator()))
    }

    fn relations(&self, vars: &Arc<VariableTable>) -> Vec<Polynomial> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(x, v)| {
                let v = v.as_ref()?;
                let lhs = &v.denominator().clone() * &Polynomial::var(vars, x);
                Some(tidy(&(&lhs - v.numerator())))
            })
            .collect()
    }

    fn family(&self, vars: &Arc<VariableTable>, parametric: bool) -> SolutionFamily {
        let free: Vec<usize> = (0..vars.len()).filter(|&x| self.values[x].is_none()).collect();
        let mut implicit = self.relations(vars);
        if !parametric {
            implicit.extend(self.eqs.iter().map(tidy));
        }
        let mut ineqs = self.ineqs.clone();
        ineqs.sort_by_key(Polynomial::to_text);
        SolutionFamily {
            vars: vars.clone(),
            free_params: free.iter().map(|&x| vars.name(x).to_string()).collect(),
            parametric: parametric.then(|| {
                (0..vars.len())
                    .map(|x| {
                        self.values[x]
                            .clone()
                            .unwrap_or_else(|| RationalFunction::from_poly(Polynomial::var(vars, x)))
                    })
                    .collect()
            }),
            implicit,
            inequations: ineqs,
        }
    }
}

/// Coefficient of `x` when `p` is linear in `x`.
fn linear_split(p: &Polynomial, x: usize) -> Option<(Polynomial, Polynomial)> {
    if p.degree_in(x) != 1 {
        return None;
    }
    let mut c = p.coefficients_in(x);
    let coeff = c.pop().unwrap();
    Some((coeff, c.pop().unwrap()))
}

fn univariate_in(p: &Polynomial) -> Option<usize> {
    match p.variables_used().as_slice() {
        [x] => Some(*x),
        _ => None,
    }
}

fn step(mut b: Branch, vars: &Arc<VariableTable>) -> Result<Step, SolverError> {
    loop {
        let gb = saturate(&b.eqs, &product(&b.ineqs, vars), vars);
        if gb.is_unit() {
            return Ok(Step::Dead);
        }
        b.eqs = gb.polys.clone();
        if b.eqs.is_empty() {
            return Ok(Step::Done(b.family(vars, true)));
        }
        // linear in some variable with a constant coefficient: eliminate it
        let easy = b.eqs.iter().find_map(|p| {
            (0..vars.len()).find_map(|x| {
                let (c, rest) = linear_split(p, x)?;
                let c = c.constant_value()?;
                Some((x, rest.scale(&(-c.recip()))))
            })
        });
        if let Some((x, f)) = easy {
            if !b.substitute(x, RationalFunction::from_poly(f), vars)? {
                return Ok(Step::Dead);
            }
            continue;
        }
        // univariate: one branch per rational root, one implicit branch for the rest
        if let Some((p, x)) = b.eqs.iter().find_map(|p| univariate_in(p).map(|x| (p.clone(), x))) {
            let (roots, cofactor) = rational_roots(&p, x);
            let mut children = Vec::new();
            for r in roots {
                let mut child = b.clone();
                if child.substitute(x, RationalFunction::constant(vars, r), vars)? {
                    children.push(child);
                }
            }
            let mut implicit = None;
            if cofactor.len() > 1 {
                // the irrational component cannot be parametrized over the rationals
                let q = Polynomial::from_terms(
                    vars,
                    cofactor.into_iter().enumerate().map(|(d, c)| (Monomial::one(vars.len()).with_exponent(x, d as u32), c)),
                );
                let mut eqs: Vec<Polynomial> = b.eqs.iter().filter(|e| **e != p).cloned().collect();
                eqs.push(q);
                let gb = saturate(&eqs, &product(&b.ineqs, vars), vars);
                if !gb.is_unit() {
                    let rest = Branch { eqs: gb.polys, ..b.clone() };
                    implicit = Some(rest.family(vars, false));
                }
            }
            return Ok(Step::Split(children, implicit));
        }
        // linear with a polynomial coefficient: split on its vanishing
        let hard = b.eqs.iter().find_map(|p| {
            (0..vars.len()).find_map(|x| {
                let (c, rest) = linear_split(p, x)?;
                (!reduce(&c, &gb.polys, MonomialOrder::Lex).is_zero()).then_some((x, c, rest))
            })
        });
        if let Some((x, c, rest)) = hard {
            let mut vanish = b.clone();
            vanish.eqs.push(c.clone());
            let mut other = b;
            let f = RationalFunction::new(-rest, c.clone())?;
            let mut children = vec![vanish];
            if other.add_ineq(&c) && other.substitute(x, f, vars)? {
                children.push(other);
            }
            return Ok(Step::Split(children, None));
        }
        return Ok(Step::Done(b.family(vars, false)));
    }
}

/// Decomposes the zero set of `eqs` minus the zero sets of `ineqs` into
/// families. Variables are eliminated in table order.
pub fn solve_polynomials(
    vars: &Arc<VariableTable>,
    eqs: &[Polynomial],
    ineqs: &[Polynomial],
) -> Result<Vec<SolutionFamily>, SolverError> {
    let n = vars.len();
    let mut root = Branch { eqs: Vec::new(), ineqs: Vec::new(), values: vec![None; n] };
    for p in eqs {
        let p = p.remap(vars)?;
        if !p.is_zero() {
            push_unique(&mut root.eqs, tidy(&p));
        }
    }
    for p in ineqs {
        if !root.add_ineq(&p.remap(vars)?) {
            return Ok(Vec::new());
        }
    }
    let mut stack = vec![root];
    let mut branches = 1usize;
    let mut out: Vec<SolutionFamily> = Vec::new();
    while let Some(b) = stack.pop() {
        match step(b, vars)? {
            Step::Dead => {}
            Step::Done(f) => out.push(f),
            Step::Split(children, implicit) => {
                out.extend(implicit);
                branches += children.len().saturating_sub(1);
                if branches > BRANCH_LIMIT {
                    let pending = children.first().map(|c| describe(c, vars)).unwrap_or_default();
                    return Err(SolverError::BranchLimit { limit: BRANCH_LIMIT, partial: out.len(), pending });
                }
                // first child (vanishing case) is explored first
                stack.extend(children.into_iter().rev());
            }
        }
    }
    Ok(finish(out))
}

fn describe(b: &Branch, vars: &Arc<VariableTable>) -> String {
    b.family(vars, false).constraint_text()
}

fn finish(families: Vec<SolutionFamily>) -> Vec<SolutionFamily> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<SolutionFamily> = families.into_iter().filter(|f| seen.insert(f.constraint_text())).collect();
    out.sort_by(|a, b| {
        a.constraint_count().cmp(&b.constraint_count()).then_with(|| a.constraint_text().cmp(&b.constraint_text()))
    });
    out
}

/// Solution families of an operator system. A symbolic-alpha system is
/// specialized when `alpha` is given; otherwise alpha is solved for like any
/// other unknown (the "generic" mode).
pub fn solve_families(system: &EquationSystem, alpha: Option<&Rational>) -> Result<Vec<SolutionFamily>, SolverError> {
    let system = match alpha {
        Some(_) if !system.is_symbolic() => return Err(SolverError::UnexpectedAlpha(system.algebra.clone())),
        Some(q) => system.specialize(q)?,
        None => system.clone(),
    };
    solve_polynomials(&system.vars, &system.polynomials(), &[])
}

/// `family_contains` on a row-major matrix (plus alpha for generic families).
pub fn family_contains(family: &SolutionFamily, point: &[Rational]) -> bool {
    point.len() == family.vars.len() && family.contains(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::operators::{build_system, OperatorKind};
    use crate::poly::parse_polynomial;
    use crate::rational::{int, ratio};

    fn vars(names: &[&str]) -> Arc<VariableTable> {
        VariableTable::new(names.iter().copied()).unwrap()
    }

    fn polys(texts: &[&str], v: &Arc<VariableTable>) -> Vec<Polynomial> {
        texts.iter().map(|t| parse_polynomial(t, v).unwrap()).collect()
    }

    fn texts(fams: &[SolutionFamily]) -> Vec<String> {
        fams.iter().map(SolutionFamily::constraint_text).collect()
    }

    #[test]
    fn inconsistent_system_has_no_families() {
        let v = vars(&["R11"]);
        assert!(solve_polynomials(&v, &polys(&["R11", "R11 - 1"], &v), &[]).unwrap().is_empty());
    }

    #[test]
    fn empty_system_is_one_free_family() {
        let v = vars(&["x", "y"]);
        let f = solve_polynomials(&v, &[], &[]).unwrap();
        assert_eq!(texts(&f), vec!["(no constraints)"]);
        assert_eq!(f[0].free_params, vec!["x", "y"]);
    }

    #[test]
    fn splits_on_roots_and_coefficients() {
        let v = vars(&["x", "y"]);
        let f = solve_polynomials(&v, &polys(&["x*y - 1"], &v), &[]).unwrap();
        assert_eq!(texts(&f), vec!["x*y - 1 = 0, y != 0"]);
        let f = solve_polynomials(&v, &polys(&["x^2 - x", "x*y"], &v), &[]).unwrap();
        assert_eq!(texts(&f), vec!["x = 0", "x - 1 = 0, y = 0"]);
    }

    #[test]
    fn irrational_component_stays_implicit() {
        let v = vars(&["x", "y"]);
        let f = solve_polynomials(&v, &polys(&["x^3 - 2*x", "y - x"], &v), &[]).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().any(|f| f.parametric.is_none() && f.implicit.iter().any(|p| p.to_text() == "y^2 - 2")));
        assert!(f.iter().any(|f| f.contains(&[int(0), int(0)])));
    }

    #[test]
    fn a1_rota_baxter_zero_is_one_line() {
        let sys = build_system(&catalog("A1", None).unwrap(), &OperatorKind::RotaBaxter(int(0))).unwrap();
        let f = solve_families(&sys, None).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].free_params, vec!["R12"]);
        assert!(f[0].satisfies(&sys.polynomials()).unwrap());
        assert!(family_contains(&f[0], &[int(0), int(5), int(0), int(0)]));
        assert!(!family_contains(&f[0], &[int(1), int(0), int(0), int(1)]));
    }

    #[test]
    fn a1_reynolds_includes_identity() {
        let sys = build_system(&catalog("A1", None).unwrap(), &OperatorKind::Reynolds).unwrap();
        let f = solve_families(&sys, None).unwrap();
        let identity = [int(1), int(0), int(0), int(1)];
        assert!(f.iter().any(|f| f.contains(&identity)));
        assert!(f.iter().any(|f| f.free_params == vec!["R12"] && f.contains(&[int(0), int(3), int(0), int(0)])));
        for fam in &f {
            assert!(fam.satisfies(&sys.polynomials()).unwrap(), "{}", fam.constraint_text());
        }
    }

    #[test]
    fn inequation_excludes_points() {
        let v = vars(&["R11", "R12"]);
        let fam = SolutionFamily {
            vars: v.clone(),
            free_params: vec!["R12".into()],
            parametric: None,
            implicit: polys(&["R11"], &v),
            inequations: polys(&["R12"], &v),
        };
        assert!(fam.contains(&[int(0), ratio(1, 2)]));
        assert!(!fam.contains(&[int(0), int(0)]));
    }

    #[test]
    fn alpha_only_for_symbolic_systems() {
        let sys = build_system(&catalog("A1", None).unwrap(), &OperatorKind::Nijenhuis).unwrap();
        assert!(matches!(solve_families(&sys, Some(&int(1))), Err(SolverError::UnexpectedAlpha(_))));
    }
}
