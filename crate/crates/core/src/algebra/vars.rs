//! Variable tables shared by polynomials.

use std::fmt;
use std::sync::{Arc, OnceLock};

/// Index of a variable inside a [`VarTable`].
pub type Var = usize;

pub const BETA: Var = 0;
pub const GAMMA: Var = 1;
pub const MU: Var = 2;
pub const OMEGA: Var = 3;
pub const KAPPA1: Var = 4;
pub const XI_BETA: Var = 5;
pub const XI_GAMMA: Var = 6;

/// Fixture names of the canonical variables, in precedence order.
pub const CANONICAL_NAMES: [&str; 7] = ["b", "g", "m", "w", "k", "xb", "xg"];

/// An ordered list of unique variable symbols.
///
/// The position of a symbol is its precedence in the monomial order: earlier
/// symbols rank higher when total degrees tie.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    /// Builds a table, rejecting duplicate or empty names.
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err("empty variable name".into());
            }
            if names[..i].contains(n) {
                return Err(format!("duplicate variable `{n}`"));
            }
        }
        Ok(Arc::new(VarTable { names }))
    }

    /// The table `[b, g, m, w, k, xb, xg]` for β, γ, μ, ω, κ₁, ξβ, ξγ.
    pub fn canonical() -> Arc<Self> {
        static TABLE: OnceLock<Arc<VarTable>> = OnceLock::new();
        TABLE.get_or_init(|| VarTable::new(CANONICAL_NAMES).expect("canonical names are unique")).clone()
    }

    /// Canonical table followed by `extra` symbols not already present.
    pub fn canonical_with<S: AsRef<str>>(extra: &[S]) -> Arc<Self> {
        let mut names: Vec<String> = CANONICAL_NAMES.iter().map(|s| s.to_string()).collect();
        for e in extra {
            let e = e.as_ref();
            if !names.iter().any(|n| n == e) {
                names.push(e.to_string());
            }
        }
        VarTable::new(names).expect("names deduplicated above")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

/// Two tables are interchangeable when they list the same symbols in order.
pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}
