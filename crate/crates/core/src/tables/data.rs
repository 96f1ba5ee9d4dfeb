use super::{Fidelity, PaperEntry, Restriction, TableError};
use crate::operators::{OperatorKind, OperatorMatrix};
use crate::poly::{parse_rational_function, VariableTable};
use crate::rational::int;

/// One published matrix as transcribed: rows separated by `;`, entries by `,`.
struct Raw {
    op: &'static str,
    algebra: &'static str,
    name: &'static str,
    matrix: &'static str,
    /// Row-level restriction cell: groups separated by `,`; `a|b` means "a or b nonzero".
    restrict: &'static str,
    fidelity: Fidelity,
    note: &'static str,
    alternative: &'static str,
}

const fn e(op: &'static str, algebra: &'static str, name: &'static str, matrix: &'static str, restrict: &'static str) -> Raw {
    Raw { op, algebra, name, matrix, restrict, fidelity: Fidelity::Verbatim, note: "", alternative: "" }
}

const RAW: &[Raw] = &[
    // Rota-Baxter, weight 0
    e("RB0", "A1", "P", "0, 0; r21, 0", ""),
    e("RB0", "A2", "P", "0, 0; r21, 0", ""),
    e("RB0", "A3", "P1", "0, 0; r21, r22", ""),
    e("RB0", "A3", "P2", "r11, 0; r21, 1/2*r11", ""),
    e("RB0", "A4", "P1", "0, r12; 0, 0", ""),
    e("RB0", "A4", "P2", "0, 0; 0, r22", ""),
    e("RB0", "A5", "P1", "0, 0; r21, 0", ""),
    e("RB0", "A5", "P2", "0, 0; 0, 0", ""),
    e("RB0", "A6", "P", "0, 0; r21, 0", ""),
    e("RB0", "A7", "P", "0, 0; 0, 0", ""),
    e("RB0", "A8", "P", "0, 0; 0, 0", ""),
    // Rota-Baxter, weight 1
    e("RB1", "A1", "P1", "0, r12; 0, 0", ""),
    e("RB1", "A1", "P2", "0, 0; 0, 0", ""),
    e("RB1", "A2", "P1", "0, r12; 0, 0", ""),
    e("RB1", "A2", "P2", "0, 0; 0, 0", ""),
    e("RB1", "A3", "P1", "r11, r12; 0, 1/2*r11", ""),
    e("RB1", "A3", "P2", "0, r12; 0, r22", ""),
    e("RB1", "A3", "P3", "0, -r22; 0, r22", ""),
    e("RB1", "A4", "P1", "0, 0; 0, r22", ""),
    e("RB1", "A4", "P2", "0, 0; r21, 0", ""),
    e("RB1", "A4", "P3", "0, 0; 0, 0", ""),
    e("RB1", "A5", "P1", "0, -r22; 0, r22", ""),
    e("RB1", "A5", "P2", "0, r21; 0, r22", ""),
    e("RB1", "A5", "P3", "0, r12; 0, 0", ""),
    e("RB1", "A5", "P4", "0, 0; 0, 0", ""),
    e("RB1", "A5", "P5", "-r21, -r21; r21, r21", ""),
    e("RB1", "A5", "P6", "r11, r12; -r11^2/r12, -r11", ""),
    e("RB1", "A5", "P7", "0, 0; r21, 0", ""),
    e("RB1", "A6", "P1", "0, r12; 0, 0", ""),
    e("RB1", "A6", "P2", "0, 0; 0, 0", ""),
    e("RB1", "A6", "P3", "-r22, r12; -r22^2/r12, r22", ""),
    e("RB1", "A6", "P4", "-r22, -r22; r22, r22", ""),
    e("RB1", "A6", "P5", "r21, 0; r21, 0", ""),
    e("RB1", "A7", "P1", "0, 0; 0, 0", ""),
    e("RB1", "A7", "P2", "r12, r12; r12, r12", ""),
    e("RB1", "A8", "P", "0, 0; 0, 0", ""),
    // Reynolds
    e("Rey", "A1", "P1", "0, 0; R21, 0", "R21"),
    e("Rey", "A2", "P1", "0, 0; 0, 0", ""),
    e("Rey", "A3", "P1", "0, 0; R21, R22", "R21, R22"),
    e("Rey", "A4", "P1", "0, 0; 0, R22", "R22"),
    e("Rey", "A4", "P2", "0, -R22; 0, R22", "R22"),
    e("Rey", "A5", "P1", "0, 0; R21, 0", "R21"),
    e("Rey", "A6", "P1", "0, 0; 0, 0", ""),
    e("Rey", "A7", "P1", "0, 0; 0, 0", ""),
    e("Rey", "A8", "P1", "0, 0; 0, 0", ""),
    // Nijenhuis
    e("Nij", "A1", "P", "0, 0; N21, 0", "N21|N11"),
    e("Nij", "A2", "P", "0, 0; N21, 0", "N21"),
    e("Nij", "A3", "P", "1/2*N22, 0; N21, N22", "N21|N22"),
    e("Nij", "A4", "P1", "N11, 0; 0, 0", "N11|N12|N22"),
    e("Nij", "A4", "P2", "N11, 0; N11, 0", "N11|N12|N22"),
    e("Nij", "A4", "P3", "0, N12; N11, 0", "N11|N12|N22"),
    e("Nij", "A4", "P4", "0, 0; 0, N22", "N11|N12|N22"),
    e("Nij", "A5", "P1", "0, 0; 0, N22", "N21|N22"),
    e("Nij", "A5", "P2", "0, 0; N21, 0", "N21|N22"),
    e("Nij", "A6", "P1", "0, 0; 0, N22", "N21|N22"),
    e("Nij", "A6", "P2", "0, 0; N21, 0", "N21|N22"),
    e("Nij", "A7", "P1", "-N12, N12; -N12, N12", "N12"),
    e("Nij", "A8", "P1", "N11, 0; -2*N11, 0", "N11"),
    // Averaging
    e("Avg", "A1", "P1", "theta22, 0; 0, theta22", "theta22, theta21"),
    e("Avg", "A1", "P2", "0, 0; theta21, 0", "theta22, theta21"),
    e("Avg", "A2", "P1", "theta22, 0; 0, theta22", "theta22, theta21"),
    e("Avg", "A2", "P2", "0, 0; theta21, 0", "theta22, theta21"),
    Raw {
        fidelity: Fidelity::Ambiguous,
        note: "top-left cell reads \"0\\vartheta_{11}\"; read as theta11 (a stray 0), alternative reading is the literal product 0",
        alternative: "0, 0; theta21, theta11",
        ..e("Avg", "A3", "P1", "theta11, 0; theta21, theta11", "theta11, theta21, theta22")
    },
    e("Avg", "A3", "P2", "0, 0; theta21, theta22", "theta11, theta21, theta22"),
    e("Avg", "A4", "P1", "theta11, 0; 0, theta11", "theta11, theta12, theta22"),
    Raw {
        fidelity: Fidelity::TypoInterpreted,
        note: "first column is blank (\"&\\vartheta_{12} \\\\ &\\vartheta_{22}\"); read as zeros, alternative reading shifts the entries into the first column",
        alternative: "theta12, 0; theta22, 0",
        ..e("Avg", "A4", "P2", "0, theta12; 0, theta22", "theta11, theta12, theta22")
    },
    e("Avg", "A5", "P1", "theta22, 0; 0, theta22", "theta11, theta21, theta22"),
    e("Avg", "A5", "P2", "0, 0; theta21, 0", "theta11, theta21, theta22"),
    e("Avg", "A5", "P3", "theta11, 0; 0, 0", "theta11, theta21, theta22"),
    e("Avg", "A6", "P1", "theta22, 0; 0, theta22", "theta11, theta21, theta22"),
    e("Avg", "A6", "P2", "0, 0; theta21, 0", "theta11, theta21, theta22"),
    e("Avg", "A6", "P3", "theta11, 0; 0, 0", "theta11, theta21, theta22"),
    e("Avg", "A7", "P1", "theta11, 0; 0, theta22", "theta11, theta22, theta12"),
    e("Avg", "A7", "P2", "theta11, theta12; theta11, theta22", "theta11, theta22, theta12"),
    e("Avg", "A8", "P1", "theta22, 0; 0, theta22", "theta22"),
    e("Avg", "A8", "P2", "0, 0; 2*theta22, theta22", "theta22"),
];

/// Table code of an operator kind, if the kind was tabulated.
pub fn table_code(kind: &OperatorKind) -> Option<&'static str> {
    match kind {
        OperatorKind::RotaBaxter(w) if *w == int(0) => Some("RB0"),
        OperatorKind::RotaBaxter(w) if *w == int(1) => Some("RB1"),
        OperatorKind::RotaBaxter(_) => None,
        OperatorKind::Reynolds => Some("Rey"),
        OperatorKind::Nijenhuis => Some("Nij"),
        OperatorKind::Averaging => Some("Avg"),
    }
}

fn kind_of(code: &str) -> OperatorKind {
    match code {
        "RB0" => OperatorKind::RotaBaxter(int(0)),
        "RB1" => OperatorKind::RotaBaxter(int(1)),
        "Rey" => OperatorKind::Reynolds,
        "Nij" => OperatorKind::Nijenhuis,
        "Avg" => OperatorKind::Averaging,
        _ => unreachable!("table codes are fixed"),
    }
}

/// Identifiers in a matrix text, in order of first appearance.
fn identifiers(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphanumeric() && (!cur.is_empty() || ch.is_ascii_alphabetic()) {
            cur.push(ch);
        } else {
            if !cur.is_empty() && !out.contains(&cur) {
                out.push(cur.clone());
            }
            cur.clear();
        }
    }
    out
}

fn parse_matrix(text: &str, params: &[String]) -> Result<OperatorMatrix, TableError> {
    let table = VariableTable::new(params.iter().cloned())?;
    let rows: Vec<&str> = text.split(';').collect();
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != n {
            return Err(TableError::Malformed(text.to_string()));
        }
        for c in cells {
            entries.push(parse_rational_function(c.trim(), &table)?);
        }
    }
    Ok(OperatorMatrix::new(n, entries)?)
}

/// Restriction groups that mention at least one parameter of the entry,
/// trimmed to those parameters.
fn restrictions(cell: &str, params: &[String]) -> Vec<Restriction> {
    cell.split(',')
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .filter_map(|g| {
            let names: Vec<String> = g.split('|').map(|s| s.trim().to_string()).filter(|s| params.contains(s)).collect();
            match names.len() {
                0 => None,
                1 => Some(Restriction::NonZero(names[0].clone())),
                _ => Some(Restriction::AnyNonZero(names)),
            }
        })
        .collect()
}

fn build(raw: &Raw) -> Result<PaperEntry, TableError> {
    let mut params = identifiers(raw.matrix);
    for p in identifiers(raw.alternative) {
        if !params.contains(&p) {
            params.push(p);
        }
    }
    params.sort();
    let matrix = parse_matrix(raw.matrix, &params)?;
    let alternative = if raw.alternative.is_empty() { None } else { Some(parse_matrix(raw.alternative, &params)?) };
    Ok(PaperEntry {
        algebra: raw.algebra.to_string(),
        kind: kind_of(raw.op),
        label: format!("{}/{}/{}", raw.op, raw.algebra, raw.name),
        restrictions: restrictions(raw.restrict, &identifiers(raw.matrix)),
        matrix,
        fidelity: raw.fidelity,
        note: (!raw.note.is_empty()).then(|| raw.note.to_string()),
        alternative,
    })
}

/// Every transcribed entry, in table order.
pub fn all_entries() -> Vec<PaperEntry> {
    RAW.iter().map(|r| build(r).expect("transcribed tables parse")).collect()
}

/// Entries published for one algebra (catalog name, e.g. `A5`) and kind.
pub fn paper_families(algebra: &str, kind: &OperatorKind) -> Vec<PaperEntry> {
    let Some(code) = table_code(kind) else { return Vec::new() };
    RAW.iter()
        .filter(|r| r.op == code && r.algebra == algebra)
        .map(|r| build(r).expect("transcribed tables parse"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_parses() {
        let all = all_entries();
        assert_eq!(all.len(), RAW.len());
        for e in &all {
            assert_eq!(e.matrix.dim(), 2, "{}", e.label);
            if e.fidelity != Fidelity::Verbatim {
                assert!(e.note.is_some() && e.alternative.is_some(), "{}", e.label);
            }
        }
    }

    #[test]
    fn a1_rota_baxter_zero() {
        let es = paper_families("A1", &OperatorKind::RotaBaxter(int(0)));
        assert_eq!(es.len(), 1);
        assert_eq!(es[0].matrix.rows_text(), vec![vec!["0", "0"], vec!["r21", "0"]]);
        assert!(es[0].restrictions.is_empty());
    }

    #[test]
    fn a4_reynolds_restrictions() {
        let es = paper_families("A4", &OperatorKind::Reynolds);
        assert_eq!(es.len(), 2);
        assert_eq!(es[1].matrix.rows_text(), vec![vec!["0", "-R22"], vec!["0", "R22"]]);
        for e in &es {
            assert_eq!(e.restrictions, vec![Restriction::NonZero("R22".into())]);
        }
    }

    #[test]
    fn defective_rows_are_flagged() {
        let a3 = paper_families("A3", &OperatorKind::Averaging);
        assert_eq!(a3[0].fidelity, Fidelity::Ambiguous);
        assert!(a3[0].note.as_ref().unwrap().contains("0\\vartheta_{11}"));
        let a4 = paper_families("A4", &OperatorKind::Averaging);
        assert_eq!(a4[1].fidelity, Fidelity::TypoInterpreted);
        assert_eq!(a4[1].matrix.rows_text(), vec![vec!["0", "theta12"], vec!["0", "theta22"]]);
    }

    #[test]
    fn disjunctive_restrictions_trimmed_to_entry() {
        let a4 = paper_families("A4", &OperatorKind::Nijenhuis);
        assert_eq!(a4[0].restrictions, vec![Restriction::NonZero("N11".into())]);
        assert_eq!(a4[2].restrictions, vec![Restriction::AnyNonZero(vec!["N11".into(), "N12".into()])]);
        let a1 = paper_families("A1", &OperatorKind::Nijenhuis);
        assert_eq!(a1[0].restrictions, vec![Restriction::NonZero("N21".into())]);
    }

    #[test]
    fn rational_entry() {
        let p6 = paper_families("A5", &OperatorKind::RotaBaxter(int(1))).remove(5);
        assert_eq!(p6.label, "RB1/A5/P6");
        assert_eq!(p6.matrix.entry(1, 0).to_text(), "(-r11^2)/(r12)");
    }

    #[test]
    fn untabulated_weight_is_empty() {
        assert!(paper_families("A1", &OperatorKind::RotaBaxter(int(2))).is_empty());
    }
}
