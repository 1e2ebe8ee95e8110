use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{parse_poly, MPoly, ParseError, VarTable};
use crate::derivation::{DerivationError, DerivationTable};

/// Environment variable that overrides the fixtures directory.
pub const FIXTURES_ENV: &str = "HYPERSURF_FIXTURES";

/// Derivation-table file inside the fixtures directory.
pub const TABLE_FILE: &str = "derivation_case_b.tbl";

/// Every polynomial fixture the pipeline reads, relative to the fixtures root
/// and without the `.poly` extension.
pub const POLY_FIXTURES: &[&str] = &[
    "premises/codazzi_e3_gamma",
    "premises/codazzi_e3_beta",
    "premises/codazzi_kappa1_kappa3",
    "premises/codazzi_e3_mu_minus_gamma",
    "golden/kappa1_relation",
    "golden/e3_mu",
    "golden/e3_beta",
    "golden/a11",
    "golden/a12",
    "golden/a21",
    "golden/a22",
    "golden/p1",
    "golden/p2",
    "golden/p3",
    "golden/kappa1_coeff",
    "golden/kappa1_coeff_literal",
    "golden/kappa1_rest",
    "golden/q1",
    "golden/q2",
    "golden/q3",
    "golden/q4",
    "golden/r1_prefactor",
    "golden/f_leading",
    "golden/g0",
    "golden/g1",
    "golden/g2",
    "golden/g3",
    "golden/g4",
    "golden/g5",
    "golden/g6",
    "golden/g7",
    "golden/b2i_intermediate",
    "golden/b2i_final",
    "golden/b2ii_intermediate",
    "golden/b2ii_final",
    "golden/f_derivative_w_coeff",
    "golden/f_derivative_w_coeff_literal",
    "golden/f_derivative_rest",
    "golden/h0",
    "golden/h1",
    "golden/h2",
    "golden/h3",
    "golden/h4",
    "golden/h5",
    "golden/h6",
    "golden/h7",
    "golden/h8",
    "golden/h9",
    "golden/h10",
    "golden/h11",
    "golden/h12",
    "golden/h13",
    "golden/h14",
    "golden/h15",
    "golden/h16",
    "golden/h17",
    "golden/h18",
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture file not found: {}", path.display())]
    Missing { path: PathBuf },

    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("corrupt fixture {}: {source}", path.display())]
    Corrupt { path: PathBuf, source: ParseError },

    #[error("corrupt derivation table {}: {source}", path.display())]
    Table { path: PathBuf, source: DerivationError },
}

/// Variables of the premise relations: the canonical table plus κ₃ and the
/// e₃-derivatives of β, γ, μ as plain symbols.
pub fn premise_vars() -> Arc<VarTable> {
    VarTable::canonical_with(&["k3", "e3b", "e3g", "e3m"])
}

/// Fixture texts loaded from disk and validated.
#[derive(Clone, Debug)]
pub struct Fixtures {
    root: PathBuf,
    texts: BTreeMap<String, String>,
    hashes: BTreeMap<String, String>,
    table: DerivationTable,
}

impl Fixtures {
    /// `$HYPERSURF_FIXTURES` if set, else the directory shipped with this crate.
    pub fn default_dir() -> PathBuf {
        match std::env::var_os(FIXTURES_ENV) {
            Some(p) if !p.is_empty() => PathBuf::from(p),
            _ => Self::bundled_dir(),
        }
    }

    pub fn bundled_dir() -> PathBuf {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
    }

    pub fn load(root: &Path) -> Result<Self, FixtureError> {
        let vars = premise_vars();
        let mut texts = BTreeMap::new();
        let mut hashes = BTreeMap::new();
        for name in POLY_FIXTURES {
            let path = root.join(format!("{name}.poly"));
            let text = read(&path)?;
            parse_poly(&text, &vars).map_err(|source| FixtureError::Corrupt { path: path.clone(), source })?;
            hashes.insert(format!("{name}.poly"), sha256_hex(&text));
            texts.insert(name.to_string(), text);
        }
        let path = root.join(TABLE_FILE);
        let text = read(&path)?;
        let table = DerivationTable::parse(&text, &VarTable::canonical())
            .map_err(|source| FixtureError::Table { path: path.clone(), source })?;
        hashes.insert(TABLE_FILE.to_string(), sha256_hex(&text));
        Ok(Fixtures { root: root.to_path_buf(), texts, hashes, table })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Parses fixture `name` over `vars`.
    ///
    /// Panics if `name` is not in [`POLY_FIXTURES`] or uses a variable outside
    /// `vars`; both are programming errors once loading succeeded.
    pub fn poly(&self, name: &str, vars: &Arc<VarTable>) -> MPoly {
        let text = self.texts.get(name).unwrap_or_else(|| panic!("fixture `{name}` is not registered"));
        parse_poly(text, vars).unwrap_or_else(|e| panic!("fixture `{name}` over {vars:?}: {e}"))
    }

    pub fn canonical(&self, name: &str) -> MPoly {
        self.poly(name, &VarTable::canonical())
    }

    pub fn table(&self) -> &DerivationTable {
        &self.table
    }

    /// SHA-256 of each fixture file keyed by its relative path.
    pub fn hashes(&self) -> &BTreeMap<String, String> {
        &self.hashes
    }
}

fn read(path: &Path) -> Result<String, FixtureError> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            FixtureError::Missing { path: path.to_path_buf() }
        } else {
            FixtureError::Io { path: path.to_path_buf(), source }
        }
    })
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}
