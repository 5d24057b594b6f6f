use std::collections::HashMap;
use std::sync::Arc;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Ordered list of variable names. The order fixes the grlex tie-break:
/// earlier variables are more significant.
#[derive(Debug, PartialEq, Eq)]
pub struct VarUniverse {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub const STANDARD_VARS: [&str; 26] = [
    "r", "s", "t", "x", "R", "S", "T", "c_r", "c_s", "c_t", "v0", "v1", "v2", "v3", "u0", "u1",
    "u2", "u3", "eta0", "eta1", "eta2", "mu0", "mu1", "mu2", "x1", "x2",
];

static STANDARD: Lazy<Arc<VarUniverse>> =
    Lazy::new(|| VarUniverse::new(STANDARD_VARS.iter().copied()).expect("standard universe"));

impl VarUniverse {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VarUniverse { names, index }))
    }

    /// The universe shared by every formula in this crate.
    pub fn standard() -> Arc<Self> {
        STANDARD.clone()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

pub(crate) fn same_universe(a: &Arc<VarUniverse>, b: &Arc<VarUniverse>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
