//! Formal frame-derivative engine.
//!
//! Expressions are β-Laurent polynomials in β, γ, μ, κ₁, ξβ, ξγ (and ω = β²).
//! A [`DerivationTable`] gives the image of each generator under e₃ and ξ;
//! the derivation of a general expression follows from the chain rule.

mod table;

use thiserror::Error;

use crate::algebra::{
    parse_canonical, substitute, AlgebraError, LaurentElement, MPoly, ParseError, BETA, KAPPA1, OMEGA,
};

pub use table::{DerivationTable, Direction};

#[derive(Debug, Error)]
pub enum DerivationError {
    #[error("no {direction} rule for variable `{var}`")]
    MissingRule { var: String, direction: Direction },

    #[error("mixed β-parity after clearing denominators ({even} even terms, {odd} odd terms)")]
    Parity { even: usize, odd: usize },

    #[error("every term has odd β-degree; parity completion was not permitted")]
    OddParity,

    #[error("derivation table line {line}: {message}")]
    TableFixture { line: usize, message: String },

    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A polynomial relation `lhs = 0` with the label of the equation it encodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    lhs: MPoly,
    provenance: String,
}

impl Relation {
    pub fn new(lhs: MPoly, provenance: impl Into<String>) -> Result<Self, DerivationError> {
        if lhs.is_zero() {
            return Err(AlgebraError::Usage("a relation needs a nonzero left-hand side".into()).into());
        }
        Ok(Relation { lhs, provenance: provenance.into() })
    }

    pub fn lhs(&self) -> &MPoly {
        &self.lhs
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }
}

/// Applies the derivation for `dir` to a polynomial.
pub fn differentiate_poly(
    p: &MPoly,
    dir: Direction,
    table: &DerivationTable,
) -> Result<LaurentElement, DerivationError> {
    let mut acc = LaurentElement::zero(p.vars());
    for v in p.used_vars() {
        let rule = table
            .rule(v, dir)
            .ok_or_else(|| DerivationError::MissingRule { var: p.vars().name(v).to_string(), direction: dir })?;
        if rule.is_zero() {
            continue;
        }
        let partial = LaurentElement::from_poly(p.partial_derivative(v)?);
        acc = acc.checked_add(&partial.checked_mul(rule)?)?;
    }
    Ok(acc)
}

/// Chain rule on `P/β^k`: `D(P)/β^k − k·P·D(β)/β^(k+1)`.
pub fn differentiate_along(
    expr: &LaurentElement,
    dir: Direction,
    table: &DerivationTable,
) -> Result<LaurentElement, DerivationError> {
    let k = expr.beta_power();
    let num = expr.numerator();
    let dnum = differentiate_poly(num, dir, table)?;
    let first = LaurentElement::new(dnum.numerator().clone(), dnum.beta_power() + k);
    if k == 0 || num.is_zero() {
        return Ok(first);
    }
    let dbeta = table
        .rule(BETA, dir)
        .ok_or_else(|| DerivationError::MissingRule { var: expr.vars().name(BETA).to_string(), direction: dir })?;
    let second = LaurentElement::new(num.scale(&crate::algebra::rat(k as i64)), k + 1).checked_mul(dbeta)?;
    Ok(first.checked_sub(&second)?)
}

/// κ₁ = (β² + 2γ² − μγ − 1)/β.
pub fn kappa1_value() -> LaurentElement {
    LaurentElement::new(parse_canonical("b^2 + 2*g^2 - m*g - 1").expect("static"), 1)
}

/// Substitutes κ₁ = (β²+2γ²−μγ−1)/β and normalizes.
pub fn eliminate_kappa1(expr: &LaurentElement) -> Result<LaurentElement, DerivationError> {
    if !expr.numerator().uses_var(KAPPA1) {
        return Ok(expr.clone());
    }
    let sub = substitute(expr.numerator(), KAPPA1, &kappa1_value())?;
    Ok(LaurentElement::new(sub.numerator().clone(), sub.beta_power() + expr.beta_power()))
}

/// A β-free polynomial in ω with the power of β used to clear the input.
///
/// `expr · β^beta_multiplier` equals `poly` after ω ↦ β².
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaForm {
    pub poly: MPoly,
    pub beta_multiplier: u32,
}

/// Clears the β-denominator and rewrites even β-powers through ω = β².
///
/// When every term is odd in β and `allow_completion` is set, one extra β is
/// multiplied in (recorded in `beta_multiplier`).
pub fn to_omega(expr: &LaurentElement, allow_completion: bool) -> Result<OmegaForm, DerivationError> {
    let mut poly = expr.numerator().clone();
    let mut mult = expr.beta_power();
    let (mut even, mut odd) = (0usize, 0usize);
    for (m, _) in poly.terms() {
        if m.exp(BETA) % 2 == 0 {
            even += 1;
        } else {
            odd += 1;
        }
    }
    if even > 0 && odd > 0 {
        return Err(DerivationError::Parity { even, odd });
    }
    if odd > 0 {
        if !allow_completion {
            return Err(DerivationError::OddParity);
        }
        poly = poly.shift_up(BETA, 1);
        mult += 1;
    }
    let vars = poly.vars().clone();
    let rewritten = MPoly::from_terms(
        &vars,
        poly.terms().map(|(m, c)| {
            let e = m.exp(BETA);
            (c.clone(), m.with_exp(BETA, 0).with_exp(OMEGA, m.exp(OMEGA) + e / 2))
        }),
    );
    Ok(OmegaForm { poly: rewritten, beta_multiplier: mult })
}

/// Inverse rewrite ω ↦ β².
pub fn from_omega(p: &MPoly) -> MPoly {
    let vars = p.vars().clone();
    MPoly::from_terms(
        &vars,
        p.terms().map(|(m, c)| (c.clone(), m.with_exp(OMEGA, 0).with_exp(BETA, m.exp(BETA) + 2 * m.exp(OMEGA)))),
    )
}

/// The κ₁ relation in β-form: βκ₁ − (β² + 2γ² − μγ − 1).
pub fn kappa1_relation() -> Relation {
    Relation::new(parse_canonical("b*k - (b^2 + 2*g^2 - m*g - 1)").expect("static"), "kappa1-relation")
        .expect("nonzero")
}

/// Outcome of differentiating the κ₁ relation along e₃ and reducing modulo it.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    /// e₃ applied to βκ₁ − (β²+2γ²−μγ−1), before κ₁ elimination.
    pub derivative: LaurentElement,
    /// The same after κ₁ elimination; zero when the table is consistent.
    pub residual: LaurentElement,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn residual_text(&self) -> String {
        self.residual.to_string()
    }
}

/// Checks that the e₃-rules are compatible with the κ₁ relation.
pub fn check_derivation_consistency(table: &DerivationTable) -> Result<ConsistencyReport, DerivationError> {
    let rel = LaurentElement::from_poly(kappa1_relation().lhs().clone());
    let derivative = differentiate_along(&rel, Direction::E3, table)?;
    let residual = eliminate_kappa1(&derivative)?;
    Ok(ConsistencyReport { derivative, residual })
}
