use std::sync::Arc;

use super::PolyError;

/// Ordered variable names shared by every polynomial built over them.
///
/// Index 0 is the largest variable under every monomial order used here, so
/// `R11 > R12 > R21 > R22 > alpha > parameters` is expressed by listing the
/// names in that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableTable {
    names: Vec<String>,
}

impl VariableTable {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(PolyError::BadVariableName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(Self { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A new table with `extra` names appended (names already present are skipped).
    pub fn extended<I, S>(&self, extra: I) -> Result<Arc<Self>, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = self.names.clone();
        for n in extra {
            let n = n.into();
            if !names.contains(&n) {
                names.push(n);
            }
        }
        Self::new(names)
    }
}

pub(crate) fn same_table(a: &Arc<VariableTable>, b: &Arc<VariableTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
