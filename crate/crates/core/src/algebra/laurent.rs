use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use super::error::AlgebraError;
use super::poly::MPoly;
use super::vars::{Var, VarTable};

/// `numerator / β^beta_power`, kept with β-powers cancelled.
///
/// β is the table symbol named `b`. Tables without it only admit
/// `beta_power == 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentElement {
    numerator: MPoly,
    beta_power: u32,
}

pub(crate) fn beta_of(vars: &Arc<VarTable>) -> Option<Var> {
    vars.index_of("b")
}

impl LaurentElement {
    pub fn new(numerator: MPoly, beta_power: u32) -> Self {
        let mut e = LaurentElement { numerator, beta_power };
        e.normalize();
        e
    }

    pub fn from_poly(p: MPoly) -> Self {
        LaurentElement { numerator: p, beta_power: 0 }
    }

    pub fn zero(vars: &Arc<VarTable>) -> Self {
        Self::from_poly(MPoly::zero(vars))
    }

    pub fn numerator(&self) -> &MPoly {
        &self.numerator
    }

    pub fn beta_power(&self) -> u32 {
        self.beta_power
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.numerator.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The polynomial value when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&MPoly> {
        (self.beta_power == 0).then_some(&self.numerator)
    }

    fn beta(&self) -> Var {
        beta_of(self.vars()).expect("β-denominator requires a `b` variable")
    }

    fn normalize(&mut self) {
        if self.beta_power == 0 {
            return;
        }
        if self.numerator.is_zero() {
            self.beta_power = 0;
            return;
        }
        let b = self.beta();
        let cancel = self.numerator.valuation_in(b).min(self.beta_power);
        if cancel > 0 {
            self.numerator = self.numerator.shift_down(b, cancel);
            self.beta_power -= cancel;
        }
    }

    /// Numerator rewritten over the denominator `β^k` (`k ≥ beta_power`).
    pub(crate) fn numerator_over(&self, k: u32) -> MPoly {
        debug_assert!(k >= self.beta_power);
        if k == self.beta_power {
            self.numerator.clone()
        } else {
            self.numerator.shift_up(self.beta(), k - self.beta_power)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let k = self.beta_power.max(other.beta_power);
        Ok(Self::new(self.numerator_over(k).checked_add(&other.numerator_over(k))?, k))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        let k = self.beta_power.max(other.beta_power);
        Ok(Self::new(self.numerator_over(k).checked_sub(&other.numerator_over(k))?, k))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(Self::new(self.numerator.checked_mul(&other.numerator)?, self.beta_power + other.beta_power))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.numerator.scale(c), self.beta_power)
    }

    pub fn mul_poly(&self, p: &MPoly) -> Self {
        Self::new(&self.numerator * p, self.beta_power)
    }

    pub fn pow(&self, n: u32) -> Self {
        Self::new(self.numerator.pow(n), self.beta_power * n)
    }
}

/// Replaces `v` in `a` by `value`, returning a normalized element.
pub fn substitute(a: &MPoly, v: Var, value: &LaurentElement) -> Result<LaurentElement, AlgebraError> {
    a.check_var(v)?;
    let coeffs = a.coefficients_in(v);
    let d = (coeffs.len() - 1) as u32;
    let k = value.beta_power;
    if k == 0 {
        return Ok(LaurentElement::from_poly(a.substitute_poly(v, &value.numerator)?));
    }
    // Common denominator β^(k·d): Σ c_e N^e β^{k(d−e)}.
    let beta = value.beta();
    let mut num = MPoly::zero(a.vars());
    let mut npow = MPoly::one(a.vars());
    for (e, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let lifted = c.shift_up(beta, k * (d - e as u32));
            num = num + lifted.checked_mul(&npow)?;
        }
        if (e as u32) < d {
            npow = npow.checked_mul(&value.numerator)?;
        }
    }
    Ok(LaurentElement::new(num, k * d))
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.beta_power {
            0 => write!(f, "{}", self.numerator),
            1 => write!(f, "({})/b", self.numerator),
            k => write!(f, "({})/b^{}", self.numerator, k),
        }
    }
}

impl fmt::Debug for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl Add for &LaurentElement {
    type Output = LaurentElement;
    fn add(self, rhs: &LaurentElement) -> LaurentElement {
        self.checked_add(rhs).expect("polynomials over different variable tables")
    }
}

impl Sub for &LaurentElement {
    type Output = LaurentElement;
    fn sub(self, rhs: &LaurentElement) -> LaurentElement {
        self.checked_sub(rhs).expect("polynomials over different variable tables")
    }
}

impl Mul for &LaurentElement {
    type Output = LaurentElement;
    fn mul(self, rhs: &LaurentElement) -> LaurentElement {
        self.checked_mul(rhs).expect("polynomials over different variable tables")
    }
}

impl Neg for &LaurentElement {
    type Output = LaurentElement;
    fn neg(self) -> LaurentElement {
        LaurentElement { numerator: -&self.numerator, beta_power: self.beta_power }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_canonical as p;
    use crate::algebra::vars::KAPPA1;

    fn kappa1() -> LaurentElement {
        LaurentElement::new(p("b^2 + 2*g^2 - m*g - 1").unwrap(), 1)
    }

    #[test]
    fn normalization_cancels_beta() {
        let e = LaurentElement::new(p("b^3*g + b^2").unwrap(), 3);
        assert_eq!(e.beta_power(), 1);
        assert_eq!(e.numerator(), &p("b*g + 1").unwrap());
        let z = LaurentElement::new(p("0").unwrap(), 4);
        assert_eq!(z.beta_power(), 0);
    }

    #[test]
    fn identity_substitution() {
        let r = substitute(&p("k").unwrap(), KAPPA1, &kappa1()).unwrap();
        assert_eq!(r, kappa1());
    }

    #[test]
    fn denominator_cancels() {
        let r = substitute(&p("b*k").unwrap(), KAPPA1, &kappa1()).unwrap();
        assert_eq!(r.beta_power(), 0);
        assert_eq!(r.numerator(), &p("b^2 + 2*g^2 - m*g - 1").unwrap());
    }

    #[test]
    fn square_substitution_matches_pow() {
        let r = substitute(&p("k^2").unwrap(), KAPPA1, &kappa1()).unwrap();
        let n = p("b^2 + 2*g^2 - m*g - 1").unwrap();
        assert_eq!(r, LaurentElement::new(n.pow(2), 2));
        assert_eq!(r, kappa1().pow(2));
    }

    #[test]
    fn mixed_degree_substitution() {
        // κ₁ − 3β with κ₁ = N/β gives (N − 3β²)/β
        let r = substitute(&p("k - 3*b").unwrap(), KAPPA1, &kappa1()).unwrap();
        assert_eq!(r, LaurentElement::new(p("-2*b^2 + 2*g^2 - m*g - 1").unwrap(), 1));
    }

    #[test]
    fn arithmetic_aligns_denominators() {
        let a = LaurentElement::new(p("g").unwrap(), 1);
        let b = LaurentElement::new(p("m").unwrap(), 2);
        let s = &a + &b;
        assert_eq!(s, LaurentElement::new(p("b*g + m").unwrap(), 2));
        let d = &s - &b;
        assert_eq!(d, a);
    }
}
