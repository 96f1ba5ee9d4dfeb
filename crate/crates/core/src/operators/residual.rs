use std::collections::HashMap;

use super::{build_system, OperatorError, OperatorKind, OperatorMatrix, Origin};
use crate::algebra::{multiply, AlgebraSpec, AlphaLinear, Vector};
use crate::poly::RationalFunction;

/// One equation of the system after substituting a candidate operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualEntry {
    pub origin: Origin,
    pub value: RationalFunction,
}

/// Substitutes `m` (row convention) into every equation of the operator
/// system. The candidate satisfies the identity iff every value is the zero
/// rational function in the matrix parameters (and alpha, when symbolic).
pub fn residual(a: &AlgebraSpec, kind: &OperatorKind, m: &OperatorMatrix) -> Result<Vec<ResidualEntry>, OperatorError> {
    if m.dim() != a.dim() {
        return Err(OperatorError::DimensionMismatch { expected: a.dim(), got: m.dim() });
    }
    let system = build_system(a, kind)?;
    let target = if system.is_symbolic() { m.params().extended(["alpha"])? } else { m.params().clone() };
    let m = m.remap(&target)?;
    let n = a.dim();
    let bindings: HashMap<usize, RationalFunction> =
        (0..n * n).map(|s| (s, m.entry(s / n, s % n).clone())).collect();
    system
        .equations
        .iter()
        .map(|e| Ok(ResidualEntry { origin: e.origin, value: e.poly.substitute(&bindings, &target)? }))
        .collect()
}

pub fn residual_is_zero(a: &AlgebraSpec, kind: &OperatorKind, m: &OperatorMatrix) -> Result<bool, OperatorError> {
    Ok(residual(a, kind, m)?.iter().all(|r| r.value.is_zero()))
}

fn inner_product_vector(
    a: &AlgebraSpec,
    kind: &OperatorKind,
    m: &OperatorMatrix,
    i: usize,
    j: usize,
) -> Result<Vector, OperatorError> {
    let n = a.dim();
    let (ei, ej) = (Vector::basis(n, i), Vector::basis(n, j));
    let (pi, pj) = (m.apply(&ei)?, m.apply(&ej)?);
    let mixed = multiply(&pi, &ej, a)?.add(&multiply(&ei, &pj, a)?);
    let xy = multiply(&ei, &ej, a)?;
    match kind {
        OperatorKind::RotaBaxter(w) => Ok(mixed.add(&xy.scale(w))),
        OperatorKind::Nijenhuis => Ok(mixed.sub(&m.apply(&xy)?)),
        other => Err(OperatorError::UnsupportedKind(other.clone())),
    }
}

/// Structure constants of the derived product `x * y`, built from the inner
/// expression of the Rota-Baxter or Nijenhuis identity.
pub fn induced_product(a: &AlgebraSpec, kind: &OperatorKind, m: &OperatorMatrix) -> Result<AlgebraSpec, OperatorError> {
    if m.dim() != a.dim() {
        return Err(OperatorError::DimensionMismatch { expected: a.dim(), got: m.dim() });
    }
    if !matches!(kind, OperatorKind::RotaBaxter(_) | OperatorKind::Nijenhuis) {
        return Err(OperatorError::UnsupportedKind(kind.clone()));
    }
    let n = a.dim();
    let mut out = AlgebraSpec::zero(format!("{}*{}", a.label(), kind), n);
    for i in 0..n {
        for j in 0..n {
            let v = inner_product_vector(a, kind, m, i, j)?;
            for (k, c) in v.0.into_iter().enumerate() {
                out.set(i, j, k, AlphaLinear::constant(c));
            }
        }
    }
    Ok(out)
}

/// `P(e_i * e_j) - P(e_i) P(e_j)` for every basis pair, i-major. Computed via
/// vector products rather than the equation system.
pub fn morphism_defect(a: &AlgebraSpec, kind: &OperatorKind, m: &OperatorMatrix) -> Result<Vec<Vector>, OperatorError> {
    let star = induced_product(a, kind, m)?;
    let n = a.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (Vector::basis(n, i), Vector::basis(n, j));
            let left = m.apply(&multiply(&ei, &ej, &star)?)?;
            let right = multiply(&m.apply(&ei)?, &m.apply(&ej)?, a)?;
            out.push(left.sub(&right));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::algebra::{catalog, Alpha, CATALOG_NAMES};
    use crate::poly::{parse_rational_function, VariableTable};
    use crate::rational::{int, Rational};

    fn mat(rows: &[[i64; 2]; 2]) -> OperatorMatrix {
        OperatorMatrix::from_rationals(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
    }

    fn all_catalog() -> Vec<AlgebraSpec> {
        CATALOG_NAMES
            .iter()
            .map(|n| {
                let alpha = crate::algebra::is_parametric_name(n).then_some(Alpha::Symbolic);
                catalog(n, alpha).unwrap()
            })
            .collect()
    }

    fn t_matrix(template: [&str; 4]) -> OperatorMatrix {
        let params = VariableTable::new(["t"]).unwrap();
        OperatorMatrix::new(2, template.iter().map(|s| parse_rational_function(s, &params).unwrap()).collect()).unwrap()
    }

    #[test]
    fn a1_rb0_lower_left_family_needs_column_reading() {
        let a1 = catalog("A1", None).unwrap();
        let rb0 = OperatorKind::RotaBaxter(int(0));
        let m = t_matrix(["0", "0", "t", "0"]);
        // Row reading: P(e2) = t e1, and the pair (2,2) leaves t^2 e2 behind.
        let r = residual(&a1, &rb0, &m).unwrap();
        let nonzero: Vec<String> = r.iter().filter(|e| !e.value.is_zero()).map(|e| e.value.to_text()).collect();
        assert_eq!(nonzero, vec!["-t^2", "-t^2", "t^2"]);
        assert!(residual_is_zero(&a1, &rb0, &m.transpose()).unwrap());
    }

    #[test]
    fn a1_rb0_identity_residual() {
        let a1 = catalog("A1", None).unwrap();
        let r = residual(&a1, &OperatorKind::RotaBaxter(int(0)), &OperatorMatrix::identity(2)).unwrap();
        assert_eq!(r[0].origin.label(), "(1,1,1)");
        assert_eq!(r[0].value.constant_value(), Some(int(-1)));
    }

    #[test]
    fn identity_satisfies_reynolds_and_nijenhuis_everywhere() {
        for a in all_catalog() {
            for kind in [OperatorKind::Reynolds, OperatorKind::Nijenhuis] {
                assert!(residual_is_zero(&a, &kind, &OperatorMatrix::identity(2)).unwrap(), "{} {kind}", a.label());
            }
            assert!(residual_is_zero(&a, &OperatorKind::Averaging, &t_matrix(["t", "0", "0", "t"])).unwrap());
        }
    }

    #[test]
    fn zero_satisfies_everything() {
        for a in all_catalog() {
            for kind in OperatorKind::audited() {
                assert!(residual_is_zero(&a, &kind, &OperatorMatrix::zero(2)).unwrap());
            }
        }
    }

    #[test]
    fn induced_product_examples() {
        let a1 = catalog("A1", None).unwrap();
        // P(e1) = e2, P(e2) = 0
        let m = mat(&[[0, 1], [0, 0]]);
        let star = induced_product(&a1, &OperatorKind::RotaBaxter(int(0)), &m).unwrap();
        assert_eq!(star.value(0, 0, 0).unwrap(), int(0));
        assert_eq!(star.value(0, 0, 1).unwrap(), int(1));
        let nij = induced_product(&a1, &OperatorKind::Nijenhuis, &OperatorMatrix::identity(2)).unwrap();
        assert_eq!(nij.values().unwrap(), a1.values().unwrap());
        let zero = induced_product(&a1, &OperatorKind::Nijenhuis, &OperatorMatrix::zero(2)).unwrap();
        assert!(zero.values().unwrap().iter().all(|c| *c == Rational::from_integer(0.into())));
        assert!(matches!(
            induced_product(&a1, &OperatorKind::Averaging, &m),
            Err(OperatorError::UnsupportedKind(_))
        ));
    }

    #[test]
    fn morphism_defect_examples() {
        let a1 = catalog("A1", None).unwrap();
        let rb0 = OperatorKind::RotaBaxter(int(0));
        assert!(morphism_defect(&a1, &rb0, &mat(&[[0, 1], [0, 0]])).unwrap().iter().all(Vector::is_zero));
        let d = morphism_defect(&a1, &rb0, &OperatorMatrix::identity(2)).unwrap();
        assert!(!d[0].is_zero());
        assert_eq!(d[0].0[0], int(1));
        assert!(morphism_defect(&a1, &OperatorKind::Nijenhuis, &OperatorMatrix::zero(2)).unwrap().iter().all(Vector::is_zero));
    }

    #[test]
    fn residual_dimension_mismatch() {
        let a1 = catalog("A1", None).unwrap();
        assert!(matches!(
            residual(&a1, &OperatorKind::Reynolds, &OperatorMatrix::identity(3)),
            Err(OperatorError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn specialize_parameters() {
        let m = t_matrix(["0", "0", "t", "0"]);
        let mut v = HashMap::new();
        v.insert(0, int(5));
        assert_eq!(m.specialize(&v).unwrap().numeric().unwrap(), vec![int(0), int(0), int(5), int(0)]);
    }
}
