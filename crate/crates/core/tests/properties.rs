use std::sync::Arc;

use proptest::prelude::*;

use prelie_rota::algebra::{catalog, multiply, Alpha, Vector, CATALOG_NAMES};
use prelie_rota::operators::{build_system, OperatorKind};
use prelie_rota::poly::{parse_polynomial, Monomial, MonomialOrder, Polynomial, VariableTable};
use prelie_rota::rational::{format_rational, parse_rational, ratio};
use prelie_rota::solver::{buchberger, reduce, s_polynomial, solve_families};
use prelie_rota::Rational;

fn vars() -> Arc<VariableTable> {
    VariableTable::new(["x", "y", "z"]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), rational()), 0..5).prop_map(|terms| {
        let v = vars();
        Polynomial::from_terms(&v, terms.into_iter().map(|((a, b, c), q)| (Monomial::from_exponents(vec![a, b, c]), q)))
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 3)
}

fn vector() -> impl Strategy<Value = Vector> {
    prop::collection::vec(rational(), 2).prop_map(Vector)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(&vars()), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in polynomial(), b in polynomial(), p in point()) {
        prop_assert_eq!((&a + &b).eval_dense(&p), a.eval_dense(&p) + b.eval_dense(&p));
        prop_assert_eq!((&a * &b).eval_dense(&p), a.eval_dense(&p) * b.eval_dense(&p));
    }

    #[test]
    fn canonical_form_round_trips(a in polynomial(), b in polynomial()) {
        let v = vars();
        prop_assert_eq!(parse_polynomial(&a.to_text(), &v).unwrap(), a.clone());
        // same expression built in two operation orders
        let left = &(&a * &b) - &(&b * &b);
        let right = &b * &(&a - &b);
        prop_assert_eq!(left.to_text(), right.to_text());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rationals_round_trip(q in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn multiplication_is_bilinear(
        k in 0usize..8,
        u in vector(), w in vector(), x in vector(), c in rational(),
    ) {
        let name = CATALOG_NAMES[k];
        let alpha = (name == "A5" || name == "A6").then(|| Alpha::Value(ratio(1, 2)));
        let a = catalog(name, alpha).unwrap();
        let left = multiply(&u.add(&w).scale(&c), &x, &a).unwrap();
        let expect = multiply(&u, &x, &a).unwrap().add(&multiply(&w, &x, &a).unwrap()).scale(&c);
        prop_assert_eq!(left, expect);
        let right = multiply(&x, &u.add(&w), &a).unwrap();
        prop_assert_eq!(right, multiply(&x, &u, &a).unwrap().add(&multiply(&x, &w, &a).unwrap()));
    }

    #[test]
    fn groebner_bases_are_complete(gens in prop::collection::vec(polynomial(), 1..4), lex in any::<bool>()) {
        let v = vars();
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::GrevLex };
        let gb = buchberger(&gens, &v, order);
        // every generator lies in the ideal of the basis
        for g in &gens {
            prop_assert!(reduce(g, &gb.polys, order).is_zero());
        }
        // Buchberger's criterion
        for i in 0..gb.polys.len() {
            for j in (i + 1)..gb.polys.len() {
                let s = s_polynomial(&gb.polys[i], &gb.polys[j], order);
                prop_assert!(reduce(&s, &gb.polys, order).is_zero());
            }
        }
        // reduced: monic, and no term divisible by another leading monomial
        for (i, p) in gb.polys.iter().enumerate() {
            prop_assert_eq!(p.leading_coefficient(order).cloned(), Some(ratio(1, 1)));
            for (j, q) in gb.polys.iter().enumerate() {
                if i == j { continue; }
                let lm = q.leading_monomial(order).unwrap();
                prop_assert!(p.terms().all(|(m, _)| !lm.divides(m)));
            }
        }
    }
}

/// Every explicit family is sound: substituting its parametrization into the
/// system gives zero, and sampled points are solutions.
#[test]
fn solver_families_are_sound() {
    let samples: Vec<Rational> = [(-2, 1), (1, 3), (3, 1)].iter().map(|&(n, d)| ratio(n, d)).collect();
    for name in CATALOG_NAMES {
        let alpha = (name == "A5" || name == "A6").then(|| Alpha::Value(ratio(2, 1)));
        let a = catalog(name, alpha).unwrap();
        for kind in OperatorKind::audited() {
            let system = build_system(&a, &kind).unwrap();
            for f in solve_families(&system, None).unwrap() {
                if f.parametric.is_none() {
                    continue;
                }
                assert!(f.satisfies(&system.polynomials()).unwrap(), "{name} {kind} {}", f.constraint_text());
                let k = f.free_params.len();
                for s in 0..samples.len().pow(k as u32) {
                    let vals: Vec<Rational> =
                        (0..k).map(|t| samples[(s / samples.len().pow(t as u32)) % samples.len()].clone()).collect();
                    if let Some(p) = f.point_at(&vals) {
                        assert!(system.is_solution(&p), "{name} {kind} {p:?}");
                        assert!(f.contains(&p));
                    }
                }
            }
        }
    }
}

/// Solving a symbolic system at a sample alpha gives families of the specialized system.
#[test]
fn sampled_alpha_families_are_sound() {
    for name in ["A5", "A6"] {
        let a = catalog(name, Some(Alpha::Symbolic)).unwrap();
        for kind in OperatorKind::audited() {
            let system = build_system(&a, &kind).unwrap();
            let generic = solve_families(&system, None).unwrap();
            assert!(!generic.is_empty());
            for q in [ratio(3, 1), ratio(-5, 2)] {
                let specialized = system.specialize(&q).unwrap();
                let fams = solve_families(&system, Some(&q)).unwrap();
                for f in fams.iter().filter(|f| f.parametric.is_some()) {
                    assert!(f.satisfies(&specialized.polynomials()).unwrap());
                }
            }
        }
    }
}
