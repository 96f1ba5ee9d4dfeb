use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{AlgebraError, AlgebraSpec, AlphaLinear, Vector};
use crate::poly::{Polynomial, VariableTable};
use crate::rational::Rational;

/// Which pre-Lie identity a defect refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    /// `x(yz) - (xy)z` symmetric in `x, y`.
    Left,
    /// `x(yz) - (xy)z` symmetric in `y, z`.
    Right,
}

fn check_index(a: &AlgebraSpec, i: usize) -> Result<(), AlgebraError> {
    if i < a.dim() {
        Ok(())
    } else {
        Err(AlgebraError::IndexOutOfRange { index: i, dim: a.dim() })
    }
}

/// `u . v` with coordinate `k` equal to `sum_{i,j} u_i v_j c[i][j][k]`.
pub fn multiply(u: &Vector, v: &Vector, a: &AlgebraSpec) -> Result<Vector, AlgebraError> {
    let n = a.dim();
    for w in [u, v] {
        if w.dim() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, got: w.dim() });
        }
    }
    let mut out = Vector::zero(n);
    for i in 0..n {
        if u.0[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if v.0[j].is_zero() {
                continue;
            }
            let uv = &u.0[i] * &v.0[j];
            for k in 0..n {
                let c = a.value(i, j, k)?;
                if !c.is_zero() {
                    out.0[k] += &uv * c;
                }
            }
        }
    }
    Ok(out)
}

/// Left defect `(x(yz) - (xy)z) - (y(xz) - (yx)z)` or right defect
/// `(x(yz) - (xy)z) - (x(zy) - (xz)y)` on basis vectors `x=e_i, y=e_j, z=e_k`.
pub fn prelie_defect(
    a: &AlgebraSpec,
    i: usize,
    j: usize,
    k: usize,
    side: Handedness,
) -> Result<Vector, AlgebraError> {
    for idx in [i, j, k] {
        check_index(a, idx)?;
    }
    let n = a.dim();
    let (x, y, z) = (Vector::basis(n, i), Vector::basis(n, j), Vector::basis(n, k));
    let assoc = |p: &Vector, q: &Vector, r: &Vector| -> Result<Vector, AlgebraError> {
        let left = multiply(p, &multiply(q, r, a)?, a)?;
        let right = multiply(&multiply(p, q, a)?, r, a)?;
        Ok(left.sub(&right))
    };
    let first = assoc(&x, &y, &z)?;
    let second = match side {
        Handedness::Left => assoc(&y, &x, &z)?,
        Handedness::Right => assoc(&x, &z, &y)?,
    };
    Ok(first.sub(&second))
}

pub fn left_prelie_defect(a: &AlgebraSpec, i: usize, j: usize, k: usize) -> Result<Vector, AlgebraError> {
    prelie_defect(a, i, j, k, Handedness::Left)
}

pub fn right_prelie_defect(a: &AlgebraSpec, i: usize, j: usize, k: usize) -> Result<Vector, AlgebraError> {
    prelie_defect(a, i, j, k, Handedness::Right)
}

/// Per-algebra tally of both pre-Lie identities over all basis triples.
///
/// For an algebra with symbolic alpha the defects are polynomials in alpha
/// and a triple passes only if its defect vanishes identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrelieReport {
    pub algebra: String,
    pub triples: usize,
    pub left_pass: usize,
    pub right_pass: usize,
    /// `(i, j, k)` (1-based) with the nonzero left defect coordinates.
    pub left_failures: Vec<([usize; 3], Vec<String>)>,
    pub right_failures: Vec<([usize; 3], Vec<String>)>,
}

impl PrelieReport {
    pub fn is_left(&self) -> bool {
        self.left_pass == self.triples
    }

    pub fn is_right(&self) -> bool {
        self.right_pass == self.triples
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        vec![
            format!("left pre-Lie: {} ({}/{} triples)", verdict(self.is_left()), self.left_pass, self.triples),
            format!("right pre-Lie: {} ({}/{} triples)", verdict(self.is_right()), self.right_pass, self.triples),
        ]
    }
}

// Symbolic route: constants as polynomials in alpha.
fn sym_multiply(u: &[Polynomial], v: &[Polynomial], a: &AlgebraSpec, vars: &Arc<VariableTable>) -> Vec<Polynomial> {
    let n = a.dim();
    let mut out = vec![Polynomial::zero(vars); n];
    for i in 0..n {
        for j in 0..n {
            let uv = &u[i] * &v[j];
            if uv.is_zero() {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate() {
                let c = a.constant(i, j, k).to_polynomial(vars, Some(0));
                *slot = &*slot + &(&uv * &c);
            }
        }
    }
    out
}

fn sym_defect(a: &AlgebraSpec, i: usize, j: usize, k: usize, side: Handedness, vars: &Arc<VariableTable>) -> Vec<Polynomial> {
    let n = a.dim();
    let basis = |t: usize| -> Vec<Polynomial> {
        (0..n).map(|s| if s == t { Polynomial::one(vars) } else { Polynomial::zero(vars) }).collect()
    };
    let (x, y, z) = (basis(i), basis(j), basis(k));
    let assoc = |p: &[Polynomial], q: &[Polynomial], r: &[Polynomial]| -> Vec<Polynomial> {
        let l = sym_multiply(p, &sym_multiply(q, r, a, vars), a, vars);
        let rr = sym_multiply(&sym_multiply(p, q, a, vars), r, a, vars);
        l.iter().zip(&rr).map(|(s, t)| s - t).collect()
    };
    let first = assoc(&x, &y, &z);
    let second = match side {
        Handedness::Left => assoc(&y, &x, &z),
        Handedness::Right => assoc(&x, &z, &y),
    };
    first.iter().zip(&second).map(|(s, t)| s - t).collect()
}

/// Evaluates both identities on all `n^3` basis triples.
pub fn check_prelie(a: &AlgebraSpec) -> Result<PrelieReport, AlgebraError> {
    let n = a.dim();
    let mut report = PrelieReport {
        algebra: a.label(),
        triples: n * n * n,
        left_pass: 0,
        right_pass: 0,
        left_failures: Vec::new(),
        right_failures: Vec::new(),
    };
    let vars = VariableTable::new(["alpha"]).expect("static table");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for side in [Handedness::Left, Handedness::Right] {
                    let defect: Vec<String> = if a.is_specialized() {
                        let d = prelie_defect(a, i, j, k, side)?;
                        if d.is_zero() { Vec::new() } else { d.to_strings() }
                    } else {
                        let d = sym_defect(a, i, j, k, side, &vars);
                        if d.iter().all(Polynomial::is_zero) { Vec::new() } else { d.iter().map(|p| p.to_text()).collect() }
                    };
                    let (pass, failures) = match side {
                        Handedness::Left => (&mut report.left_pass, &mut report.left_failures),
                        Handedness::Right => (&mut report.right_pass, &mut report.right_failures),
                    };
                    if defect.is_empty() {
                        *pass += 1;
                    } else {
                        failures.push(([i + 1, j + 1, k + 1], defect));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The commutator algebra `[x, y] = xy - yx` with its Lie-identity audit.
#[derive(Debug, Clone)]
pub struct CommutatorAlgebra {
    pub bracket: AlgebraSpec,
    pub antisymmetric: bool,
    /// Largest absolute coordinate of `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` over basis triples.
    pub jacobi_defect: Rational,
}

impl CommutatorAlgebra {
    pub fn jacobi_holds(&self) -> bool {
        self.jacobi_defect.is_zero()
    }

    pub fn is_lie(&self) -> bool {
        self.antisymmetric && self.jacobi_holds()
    }
}

pub fn commutator_algebra(a: &AlgebraSpec) -> Result<CommutatorAlgebra, AlgebraError> {
    if !a.is_specialized() {
        return Err(AlgebraError::NotSpecialized(a.name().to_string()));
    }
    let n = a.dim();
    let mut bracket = AlgebraSpec::zero(format!("[{}]", a.label()), n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let b = a.value(i, j, k)? - a.value(j, i, k)?;
                bracket.set(i, j, k, AlphaLinear::constant(b));
            }
        }
    }
    let mut antisymmetric = true;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !(bracket.value(i, j, k)? + bracket.value(j, i, k)?).is_zero() {
                    antisymmetric = false;
                }
            }
        }
    }
    let mut jacobi_defect = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (Vector::basis(n, i), Vector::basis(n, j), Vector::basis(n, k));
                let t1 = multiply(&x, &multiply(&y, &z, &bracket)?, &bracket)?;
                let t2 = multiply(&y, &multiply(&z, &x, &bracket)?, &bracket)?;
                let t3 = multiply(&z, &multiply(&x, &y, &bracket)?, &bracket)?;
                for c in t1.add(&t2).add(&t3).0 {
                    if c.abs() > jacobi_defect {
                        jacobi_defect = c.abs();
                    }
                }
            }
        }
    }
    Ok(CommutatorAlgebra { bracket, antisymmetric, jacobi_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, Alpha};
    use crate::rational::{int, ratio};

    fn v(x: &[Rational]) -> Vector {
        Vector(x.to_vec())
    }

    #[test]
    fn a1_products() {
        let a = catalog("A1", None).unwrap();
        let e1 = Vector::basis(2, 0);
        let e2 = Vector::basis(2, 1);
        assert_eq!(multiply(&e2, &e1, &a).unwrap(), e2);
        assert!(multiply(&e1, &e2, &a).unwrap().is_zero());
        assert_eq!(multiply(&e1.add(&e2), &e1, &a).unwrap(), v(&[int(1), int(2)]));
    }

    #[test]
    fn multiply_checks_dimension() {
        let a = catalog("A1", None).unwrap();
        let bad = Vector(vec![int(1)]);
        assert!(matches!(multiply(&bad, &bad, &a), Err(AlgebraError::DimensionMismatch { .. })));
    }

    #[test]
    fn defect_examples() {
        let a1 = catalog("A1", None).unwrap();
        assert!(left_prelie_defect(&a1, 0, 1, 0).unwrap().is_zero());
        let a8 = catalog("A8", None).unwrap();
        assert!(left_prelie_defect(&a8, 0, 1, 0).unwrap().is_zero());
        for i in 0..2 {
            for k in 0..2 {
                assert!(left_prelie_defect(&a8, i, i, k).unwrap().is_zero());
            }
        }
        assert!(matches!(left_prelie_defect(&a8, 0, 2, 0), Err(AlgebraError::IndexOutOfRange { .. })));
    }

    #[test]
    fn a8_associator_matches_hand_expansion() {
        // e1(e2 e1) - (e1 e2) e1 = e1(1/2 e1 + e2) - 2 e2 e1 = 1/2 e1 + 2 e2 - (e1 + 2 e2) = -1/2 e1
        let a = catalog("A8", None).unwrap();
        let (e1, e2) = (Vector::basis(2, 0), Vector::basis(2, 1));
        let lhs = multiply(&e1, &multiply(&e2, &e1, &a).unwrap(), &a).unwrap();
        let rhs = multiply(&multiply(&e1, &e2, &a).unwrap(), &e1, &a).unwrap();
        assert_eq!(lhs.sub(&rhs), v(&[ratio(-1, 2), int(0)]));
    }

    #[test]
    fn commutator_examples() {
        let a1 = commutator_algebra(&catalog("A1", None).unwrap()).unwrap();
        let (e1, e2) = (Vector::basis(2, 0), Vector::basis(2, 1));
        assert_eq!(multiply(&e1, &e2, &a1.bracket).unwrap(), v(&[int(0), int(-1)]));
        assert!(a1.is_lie());
        let a8 = commutator_algebra(&catalog("A8", None).unwrap()).unwrap();
        assert_eq!(multiply(&e1, &e2, &a8.bracket).unwrap(), v(&[ratio(-1, 2), int(1)]));
        let a7 = commutator_algebra(&catalog("A7", None).unwrap()).unwrap();
        assert!(a7.bracket.values().unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn symbolic_alpha_check_matches_specialized() {
        let sym = catalog("A6", Some(Alpha::Symbolic)).unwrap();
        let r = check_prelie(&sym).unwrap();
        assert!(r.is_left());
        for a in [int(-1), int(0), ratio(1, 2), int(1), int(2)] {
            let spec = catalog("A6", Some(Alpha::Value(a))).unwrap();
            assert_eq!(check_prelie(&spec).unwrap().left_pass, 8);
        }
    }

    #[test]
    fn commutator_needs_specialized_alpha() {
        let sym = catalog("A5", Some(Alpha::Symbolic)).unwrap();
        assert!(commutator_algebra(&sym).is_err());
    }
}
