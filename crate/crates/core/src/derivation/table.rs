use std::fmt;
use std::sync::Arc;

use crate::algebra::{format_poly, parse_poly, LaurentElement, Var, VarTable};

use super::DerivationError;

/// A frame direction acting as a derivation on the generator variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    #[serde(rename = "e3")]
    E3,
    #[serde(rename = "xi")]
    Xi,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::E3 => "e3",
            Direction::Xi => "xi",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The image of each generator under e₃ and under ξ.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationTable {
    vars: Arc<VarTable>,
    e3: Vec<Option<LaurentElement>>,
    xi: Vec<Option<LaurentElement>>,
}

const CASE_B: &str = include_str!("../../fixtures/derivation_case_b.tbl");

impl DerivationTable {
    pub fn empty(vars: &Arc<VarTable>) -> Self {
        DerivationTable { vars: vars.clone(), e3: vec![None; vars.len()], xi: vec![None; vars.len()] }
    }

    /// Rules valid where κ₃ = γ: e₃ images from the Codazzi/Gauss
    /// consequences, ξμ = 0, ξκ₁ = −ξβ, with ξβ and ξγ as indeterminates.
    pub fn case_b() -> Self {
        Self::parse(CASE_B, &VarTable::canonical()).expect("bundled table parses")
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn rule(&self, v: Var, dir: Direction) -> Option<&LaurentElement> {
        match dir {
            Direction::E3 => self.e3[v].as_ref(),
            Direction::Xi => self.xi[v].as_ref(),
        }
    }

    pub fn set_rule(&mut self, v: Var, dir: Direction, rule: LaurentElement) {
        assert_eq!(rule.vars(), &self.vars, "rule over a different table");
        match dir {
            Direction::E3 => self.e3[v] = Some(rule),
            Direction::Xi => self.xi[v] = Some(rule),
        }
    }

    pub fn clear_rule(&mut self, v: Var, dir: Direction) {
        match dir {
            Direction::E3 => self.e3[v] = None,
            Direction::Xi => self.xi[v] = None,
        }
    }

    /// Reads `<var> e3: <expr>` / `<var> xi: <expr>` lines.
    pub fn parse(text: &str, vars: &Arc<VarTable>) -> Result<Self, DerivationError> {
        let mut table = Self::empty(vars);
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| DerivationError::TableFixture { line: line_no, message };
            let (head, body) = line.split_once(':').ok_or_else(|| bad("expected `<var> <e3|xi>: <expr>`".into()))?;
            let mut parts = head.split_whitespace();
            let (Some(name), Some(dir), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected `<var> <e3|xi>` before `:`".into()));
            };
            let v = vars.index_of(name).ok_or_else(|| bad(format!("unknown variable `{name}`")))?;
            let dir = match dir {
                "e3" => Direction::E3,
                "xi" => Direction::Xi,
                other => return Err(bad(format!("unknown direction `{other}`"))),
            };
            if table.rule(v, dir).is_some() {
                return Err(bad(format!("duplicate {dir} rule for `{name}`")));
            }
            let poly = parse_poly(body, vars)
                .map_err(|e| bad(format!("column {}: {}", e.column + head.len() + 1, e.message)))?;
            table.set_rule(v, dir, LaurentElement::from_poly(poly));
        }
        Ok(table)
    }

    /// Fixture text; Laurent rules are not representable and are skipped.
    pub fn to_fixture_text(&self) -> String {
        let mut out = String::new();
        for dir in [Direction::E3, Direction::Xi] {
            for v in 0..self.vars.len() {
                if let Some(p) = self.rule(v, dir).and_then(LaurentElement::as_poly) {
                    out.push_str(&format!("{} {}: {}\n", self.vars.name(v), dir, format_poly(p)));
                }
            }
        }
        out
    }
}
