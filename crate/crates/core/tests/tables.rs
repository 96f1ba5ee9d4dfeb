//! Report invariants: verdicts reproduce, witnesses re-check exactly, and
//! sound entries stay inside the solver output.

use std::sync::OnceLock;

use prelie_rota::algebra::{catalog, Alpha};
use prelie_rota::operators::{build_system, residual, Convention, OperatorKind, OperatorMatrix};
use prelie_rota::rational::parse_rational;
use prelie_rota::tables::{all_entries, audit, paper_families, verify_soundness, AuditConfig, DiscrepancyReport, VerdictKind};
use prelie_rota::Rational;

fn report() -> &'static DiscrepancyReport {
    static REPORT: OnceLock<DiscrepancyReport> = OnceLock::new();
    REPORT.get_or_init(|| audit(&AuditConfig::default()).unwrap())
}

fn matrix(text: &[Vec<String>]) -> Vec<Rational> {
    text.iter().flatten().map(|s| parse_rational(s).unwrap()).collect()
}

/// `A5[alpha=1/2]` back to a catalog algebra.
fn instance(label: &str) -> prelie_rota::algebra::AlgebraSpec {
    match label.split_once("[alpha=") {
        Some((name, rest)) => {
            catalog(name, Some(Alpha::Value(parse_rational(rest.trim_end_matches(']')).unwrap()))).unwrap()
        }
        None => catalog(label, None).unwrap(),
    }
}

fn kind_of(text: &str) -> OperatorKind {
    match text {
        "Reynolds" => OperatorKind::Reynolds,
        "Nijenhuis" => OperatorKind::Nijenhuis,
        "Averaging" => OperatorKind::Averaging,
        rb => OperatorKind::RotaBaxter(parse_rational(&rb[3..rb.len() - 1]).unwrap()),
    }
}

#[test]
fn verdicts_reproduce() {
    for e in all_entries() {
        for c in [Convention::Row, Convention::Column] {
            assert_eq!(verify_soundness(&e, c).unwrap(), verify_soundness(&e, c).unwrap(), "{}", e.label);
        }
    }
}

#[test]
fn residual_witnesses_are_exact_and_nonzero() {
    for e in &report().entries {
        for check in &e.checks {
            let sound = check.verdict == VerdictKind::Sound;
            assert_eq!(sound, check.primary.residuals.is_empty() || check.verdict == VerdictKind::Ambiguous);
            if let Some(w) = &check.primary.point {
                let a = match &w.alpha {
                    Some(q) => catalog(&e.algebra, Some(Alpha::Value(parse_rational(q).unwrap()))).unwrap(),
                    None => catalog(&e.algebra, None).unwrap(),
                };
                let m = OperatorMatrix::from_flat(2, &matrix(&w.operator));
                let res = residual(&a, &kind_of(&e.operator), &m).unwrap();
                let hit = res.iter().find(|r| r.origin.label() == w.origin).unwrap();
                assert_eq!(hit.value.constant_value().unwrap(), parse_rational(&w.value).unwrap());
                assert_ne!(w.value, "0");
            }
        }
    }
}

#[test]
fn completeness_witnesses_are_solutions() {
    for cell in &report().cells {
        let system = build_system(&instance(&cell.algebra), &kind_of(&cell.operator)).unwrap();
        for g in &cell.uncovered {
            for w in &g.witnesses {
                assert!(system.is_solution(&matrix(w)), "{} {}", cell.algebra, cell.operator);
            }
        }
        for o in &cell.entries_outside_solver {
            for w in &o.witnesses {
                assert!(!system.is_solution(&matrix(w)));
            }
        }
    }
}

#[test]
fn sound_entries_stay_inside_the_solver_output() {
    let r = report();
    for e in &r.entries {
        for c in &e.sound_under {
            for cell in r.cells.iter().filter(|x| x.convention == *c && x.entries.contains(&e.label)) {
                assert!(cell.entries_outside_solver.iter().all(|o| o.label != e.label), "{} {c}", e.label);
            }
        }
    }
}

#[test]
fn identity_is_missing_from_a1_reynolds_and_nijenhuis() {
    let id = vec![vec!["1".to_string(), "0".into()], vec!["0".into(), "1".into()]];
    for op in ["Reynolds", "Nijenhuis"] {
        for cell in report().cells.iter().filter(|c| c.algebra == "A1" && c.operator == op) {
            assert!(cell.uncovered.iter().any(|g| g.witnesses.contains(&id)), "{op} {}", cell.convention);
        }
    }
}

#[test]
fn solver_matches_oracle_everywhere() {
    assert!(report().summary.solver_oracle_mismatches.is_empty());
    assert!(report().has_discrepancies());
}

#[test]
fn published_entries_by_hand() {
    let a1 = paper_families("A1", &OperatorKind::RotaBaxter(Rational::from_integer(0.into())));
    assert_eq!(a1.len(), 1);
    assert_eq!(a1[0].matrix.rows_text(), vec![vec!["0", "0"], vec!["r21", "0"]]);
    let a4 = paper_families("A4", &OperatorKind::Reynolds);
    let rows: Vec<_> = a4.iter().map(|e| e.matrix.rows_text()).collect();
    assert_eq!(rows, vec![vec![vec!["0", "0"], vec!["0", "R22"]], vec![vec!["0", "-R22"], vec!["0", "R22"]]]);
    assert!(a4.iter().all(|e| e.restrictions.iter().map(|r| r.to_text()).collect::<Vec<_>>() == ["R22 != 0"]));
}
