use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{OperatorError, OperatorJson, OperatorKind};
use crate::algebra::AlgebraSpec;
use crate::poly::{parse_polynomial, Polynomial, RationalFunction, VariableTable};
use crate::rational::{format_rational, parse_rational, Rational};

/// How alpha enters a system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlphaMode {
    /// The algebra does not depend on alpha.
    Absent,
    Value(Rational),
    /// Alpha is an extra ring variable after the matrix entries.
    Symbolic,
}

/// Where an equation comes from: basis pair `(i, j)`, output coordinate `k`
/// (all 0-based) and, for averaging, which equality of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origin {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub branch: Option<usize>,
}

impl Origin {
    /// 1-based `(i,j,k)` or `(i,j,k,b)` label.
    pub fn label(&self) -> String {
        match self.branch {
            Some(b) => format!("({},{},{},{})", self.i + 1, self.j + 1, self.k + 1, b + 1),
            None => format!("({},{},{})", self.i + 1, self.j + 1, self.k + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub origin: Origin,
    pub poly: Polynomial,
}

/// The polynomial system in `R11..Rnn` (and alpha when symbolic) whose zero
/// set is exactly the set of operators of the given kind on the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSystem {
    pub algebra: String,
    pub alpha: AlphaMode,
    pub kind: OperatorKind,
    pub dim: usize,
    pub vars: Arc<VariableTable>,
    pub equations: Vec<Equation>,
}

/// `R11, R12, ..., Rnn` followed by `alpha` when requested.
pub fn system_variables(dim: usize, symbolic_alpha: bool) -> Arc<VariableTable> {
    let mut names = Vec::new();
    for i in 1..=dim {
        for j in 1..=dim {
            names.push(if dim < 10 { format!("R{i}{j}") } else { format!("R{i}_{j}") });
        }
    }
    if symbolic_alpha {
        names.push("alpha".to_string());
    }
    VariableTable::new(names).expect("generated names are unique")
}

struct Builder {
    n: usize,
    vars: Arc<VariableTable>,
    consts: Vec<Polynomial>,
}

impl Builder {
    fn c(&self, i: usize, j: usize, k: usize) -> &Polynomial {
        &self.consts[(i * self.n + j) * self.n + k]
    }

    fn r(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::var(&self.vars, i * self.n + j)
    }

    /// `P(e_i)` as a coordinate vector.
    fn p_basis(&self, i: usize) -> Vec<Polynomial> {
        (0..self.n).map(|j| self.r(i, j)).collect()
    }

    fn basis(&self, i: usize) -> Vec<Polynomial> {
        (0..self.n)
            .map(|j| if i == j { Polynomial::one(&self.vars) } else { Polynomial::zero(&self.vars) })
            .collect()
    }

    fn mul(&self, u: &[Polynomial], v: &[Polynomial]) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(&self.vars); self.n];
        for a in 0..self.n {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..self.n {
                if v[b].is_zero() {
                    continue;
                }
                let uv = &u[a] * &v[b];
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.c(a, b, k);
                    if !c.is_zero() {
                        *slot = &*slot + &(&uv * c);
                    }
                }
            }
        }
        out
    }

    /// `P(w)`: coordinate k is `sum_m w_m R[m][k]`.
    fn apply(&self, w: &[Polynomial]) -> Vec<Polynomial> {
        (0..self.n)
            .map(|k| {
                let mut acc = Polynomial::zero(&self.vars);
                for (m, wm) in w.iter().enumerate() {
                    if !wm.is_zero() {
                        acc = &acc + &(wm * &self.r(m, k));
                    }
                }
                acc
            })
            .collect()
    }
}

fn add(u: &[Polynomial], v: &[Polynomial]) -> Vec<Polynomial> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn sub(u: &[Polynomial], v: &[Polynomial]) -> Vec<Polynomial> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// Expands the operator identity on every basis pair into `LHS_k - RHS_k`,
/// with `LHS = P(e_i) P(e_j)` and `RHS = P(inner)`.
pub fn build_system(a: &AlgebraSpec, kind: &OperatorKind) -> Result<EquationSystem, OperatorError> {
    let n = a.dim();
    let symbolic = !a.is_specialized();
    let vars = system_variables(n, symbolic);
    let alpha_var = symbolic.then(|| vars.index("alpha").unwrap());
    let mut consts = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = if symbolic {
                    a.constant(i, j, k).to_polynomial(&vars, alpha_var)
                } else {
                    Polynomial::constant(&vars, a.value(i, j, k)?)
                };
                consts.push(p);
            }
        }
    }
    let b = Builder { n, vars: vars.clone(), consts };
    let mut equations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (pi, pj) = (b.p_basis(i), b.p_basis(j));
            let (ei, ej) = (b.basis(i), b.basis(j));
            let lhs = b.mul(&pi, &pj);
            let mixed = || add(&b.mul(&pi, &ej), &b.mul(&ei, &pj));
            let rhs_branches: Vec<Vec<Polynomial>> = match kind {
                OperatorKind::RotaBaxter(w) => {
                    let xy: Vec<Polynomial> = b.mul(&ei, &ej).iter().map(|p| p.scale(w)).collect();
                    vec![b.apply(&add(&mixed(), &xy))]
                }
                OperatorKind::Reynolds => vec![b.apply(&sub(&mixed(), &lhs))],
                OperatorKind::Nijenhuis => vec![b.apply(&sub(&mixed(), &b.apply(&b.mul(&ei, &ej))))],
                OperatorKind::Averaging => vec![b.apply(&b.mul(&ei, &pj)), b.apply(&b.mul(&pi, &ej))],
            };
            let branched = rhs_branches.len() > 1;
            for k in 0..n {
                for (br, rhs) in rhs_branches.iter().enumerate() {
                    equations.push(Equation {
                        origin: Origin { i, j, k, branch: branched.then_some(br) },
                        poly: &lhs[k] - &rhs[k],
                    });
                }
            }
        }
    }
    let alpha = match (a.is_parametric(), a.alpha()) {
        (false, _) => AlphaMode::Absent,
        (true, Some(q)) => AlphaMode::Value(q.clone()),
        (true, None) => AlphaMode::Symbolic,
    };
    Ok(EquationSystem { algebra: a.label(), alpha, kind: kind.clone(), dim: n, vars, equations })
}

impl EquationSystem {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.equations.iter().map(|e| e.poly.clone()).collect()
    }

    pub fn num_matrix_vars(&self) -> usize {
        self.dim * self.dim
    }

    pub fn is_symbolic(&self) -> bool {
        self.alpha == AlphaMode::Symbolic
    }

    /// Values of every equation at a row-major numeric matrix (alpha must not
    /// be symbolic).
    pub fn evaluate(&self, matrix: &[Rational]) -> Vec<Rational> {
        assert_eq!(matrix.len(), self.vars.len(), "point must bind every system variable");
        self.equations.iter().map(|e| e.poly.eval_dense(matrix)).collect()
    }

    pub fn is_solution(&self, matrix: &[Rational]) -> bool {
        self.equations.iter().all(|e| e.poly.eval_dense(matrix).is_zero())
    }

    /// Substitutes a value for symbolic alpha; other systems are returned as is.
    pub fn specialize(&self, alpha: &Rational) -> Result<Self, OperatorError> {
        if !self.is_symbolic() {
            return Ok(self.clone());
        }
        let vars = system_variables(self.dim, false);
        let a = self.vars.index("alpha").expect("symbolic systems carry alpha");
        let bindings = std::collections::HashMap::from([(a, RationalFunction::constant(&vars, alpha.clone()))]);
        let equations = self
            .equations
            .iter()
            .map(|e| {
                let p = e.poly.substitute(&bindings, &vars)?;
                Ok(Equation { origin: e.origin, poly: p.as_polynomial().expect("polynomial image").clone() })
            })
            .collect::<Result<Vec<_>, OperatorError>>()?;
        let base = self.algebra.split('[').next().unwrap_or(&self.algebra);
        Ok(Self {
            algebra: format!("{base}[alpha={}]", format_rational(alpha)),
            alpha: AlphaMode::Value(alpha.clone()),
            kind: self.kind.clone(),
            dim: self.dim,
            vars,
            equations,
        })
    }

    /// The same system with `Rij` and `Rji` swapped, so that solutions read as
    /// column-convention matrices.
    pub fn transposed(&self) -> Result<Self, OperatorError> {
        let n = self.dim;
        let bindings: std::collections::HashMap<usize, RationalFunction> = (0..n * n)
            .map(|s| (s, RationalFunction::from_poly(Polynomial::var(&self.vars, (s % n) * n + s / n))))
            .collect();
        let equations = self
            .equations
            .iter()
            .map(|e| {
                let p = e.poly.substitute(&bindings, &self.vars)?;
                Ok(Equation { origin: e.origin, poly: p.as_polynomial().expect("polynomial image").clone() })
            })
            .collect::<Result<Vec<_>, OperatorError>>()?;
        Ok(Self { equations, ..self.clone() })
    }

    pub fn to_json(&self) -> EquationSystemJson {
        EquationSystemJson {
            algebra: self.algebra.clone(),
            alpha: match &self.alpha {
                AlphaMode::Absent => None,
                AlphaMode::Value(q) => Some(format_rational(q)),
                AlphaMode::Symbolic => Some("symbolic".to_string()),
            },
            operator: OperatorJson::from(&self.kind),
            dim: self.dim,
            variables: self.vars.names().to_vec(),
            equations: self
                .equations
                .iter()
                .map(|e| EquationJson {
                    origin: [e.origin.i + 1, e.origin.j + 1, e.origin.k + 1],
                    branch: e.origin.branch.map(|b| b + 1),
                    poly: e.poly.to_text(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &EquationSystemJson) -> Result<Self, OperatorError> {
        let kind = OperatorKind::try_from(&j.operator)?;
        let vars = VariableTable::new(j.variables.iter().cloned())?;
        let expected = system_variables(j.dim, j.alpha.as_deref() == Some("symbolic"));
        if vars != expected {
            return Err(OperatorError::Malformed(format!("variables {:?} do not match dimension {}", j.variables, j.dim)));
        }
        let alpha = match j.alpha.as_deref() {
            None => AlphaMode::Absent,
            Some("symbolic") => AlphaMode::Symbolic,
            Some(s) => AlphaMode::Value(parse_rational(s).map_err(|e| OperatorError::Malformed(e.to_string()))?),
        };
        let mut equations = Vec::with_capacity(j.equations.len());
        for e in &j.equations {
            if e.origin.iter().any(|&x| x == 0 || x > j.dim) {
                return Err(OperatorError::Malformed(format!("origin {:?} out of range", e.origin)));
            }
            equations.push(Equation {
                origin: Origin {
                    i: e.origin[0] - 1,
                    j: e.origin[1] - 1,
                    k: e.origin[2] - 1,
                    branch: e.branch.map(|b| b.saturating_sub(1)),
                },
                poly: parse_polynomial(&e.poly, &vars)?,
            });
        }
        Ok(Self { algebra: j.algebra.clone(), alpha, kind, dim: j.dim, vars, equations })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationJson {
    /// 1-based `(i, j, k)`.
    pub origin: [usize; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
    pub poly: String,
}

/// JSON dump of an [`EquationSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSystemJson {
    pub algebra: String,
    /// `null` for non-parametric algebras, `"p/q"` or `"symbolic"` otherwise.
    pub alpha: Option<String>,
    pub operator: OperatorJson,
    pub dim: usize,
    pub variables: Vec<String>,
    pub equations: Vec<EquationJson>,
}
