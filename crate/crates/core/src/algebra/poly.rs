//! Sparse multivariate polynomials over exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::error::AlgebraError;
use super::monomial::Monomial;
use super::vars::{same_table, Var, VarTable};

/// Product with a shortcut for integer coefficients (the common case).
pub(crate) fn cmul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

pub(crate) fn cadd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() + b.numer())
    } else {
        a + b
    }
}

pub(crate) fn cdiv(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        let (q, r) = a.numer().div_rem(b.numer());
        if r.is_zero() {
            return BigRational::from_integer(q);
        }
    }
    a / b
}

/// Binary operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// A polynomial over ℚ whose terms are keyed by graded-revlex monomials.
///
/// Zero coefficients are never stored.
#[derive(Clone)]
pub struct MPoly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        MPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Arc<VarTable>, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn from_int(vars: &Arc<VarTable>, c: i64) -> Self {
        Self::constant(vars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The polynomial `v`.
    pub fn var(vars: &Arc<VarTable>, v: Var) -> Self {
        Self::term(vars, Monomial::var(vars.len(), v, 1), BigRational::one())
    }

    pub fn term(vars: &Arc<VarTable>, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.exponents().len(), vars.len(), "monomial arity");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs, merging repeats.
    pub fn from_terms<I>(vars: &Arc<VarTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Monomial)>,
    {
        let mut p = Self::zero(vars);
        for (c, m) in terms {
            assert_eq!(m.exponents().len(), vars.len(), "monomial arity");
            p.accumulate(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(BigRational::zero))
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`MPoly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub(crate) fn leading_display(&self) -> String {
        match self.leading_term() {
            Some((m, c)) => Self::term(&self.vars, m.clone(), c.clone()).to_string(),
            None => "0".into(),
        }
    }

    pub fn check_var(&self, v: Var) -> Result<(), AlgebraError> {
        if v < self.vars.len() {
            Ok(())
        } else {
            Err(AlgebraError::UnknownVariable(format!("#{v}")))
        }
    }

    pub fn var_by_name(&self, name: &str) -> Result<Var, AlgebraError> {
        self.vars.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Smallest exponent of `v` over all terms (0 for the zero polynomial).
    pub fn valuation_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Variables that occur in at least one term, in table order.
    pub fn used_vars(&self) -> Vec<Var> {
        (0..self.vars.len()).filter(|&v| self.uses_var(v)).collect()
    }

    fn accumulate(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = cadd(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn ensure_same(&self, other: &MPoly) -> Result<(), AlgebraError> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(AlgebraError::TableMismatch { left: self.vars.names().to_vec(), right: other.vars.names().to_vec() })
        }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly, AlgebraError> {
        self.ensure_same(other)?;
        let (mut acc, rest) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &rest.terms {
            acc.accumulate(m.clone(), c.clone());
        }
        Ok(acc)
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly, AlgebraError> {
        self.ensure_same(other)?;
        let mut acc = self.clone();
        for (m, c) in &other.terms {
            acc.accumulate(m.clone(), -c);
        }
        Ok(acc)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly, AlgebraError> {
        self.ensure_same(other)?;
        let mut acc: std::collections::HashMap<Monomial, BigRational> =
            std::collections::HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = cmul(ca, cb);
                match acc.get_mut(&m) {
                    Some(slot) => *slot = cadd(slot, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(MPoly { vars: self.vars.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), cmul(a, c))).collect() }
    }

    /// Multiplies by a single term.
    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, a)| (k.mul(m), cmul(a, c))).collect() }
    }

    /// `self^n` by binary powering; `a⁰ = 1`.
    pub fn pow(&self, n: u32) -> MPoly {
        let mut result = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial_derivative(&self, v: Var) -> Result<MPoly, AlgebraError> {
        self.check_var(v)?;
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                let k = BigRational::from_integer(BigInt::from(e));
                out.accumulate(m.with_exp(v, e - 1), cmul(c, &k));
            }
        }
        Ok(out)
    }

    /// Coefficients of `self` viewed as a polynomial in `v`, index = degree.
    pub fn coefficients_in(&self, v: Var) -> Vec<MPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(&self.vars); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(vars: &Arc<VarTable>, v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(vars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.accumulate(m.with_exp(v, m.exp(v) + e as u32), a.clone());
            }
        }
        out
    }

    /// Replaces `v` by a rational number.
    pub fn eval_var(&self, v: Var, value: &BigRational) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        let mut powers: Vec<BigRational> = vec![BigRational::one()];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = cmul(powers.last().unwrap(), value);
                powers.push(next);
            }
            out.accumulate(m.with_exp(v, 0), cmul(c, &powers[e]));
        }
        out
    }

    /// Evaluates at a full point (one value per table variable).
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len());
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = cmul(&t, x);
                }
            }
            sum = cadd(&sum, &t);
        }
        sum
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(m.exponents()) {
                    t *= x.powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Replaces `v` by another polynomial (Horner in `v`).
    pub fn substitute_poly(&self, v: Var, value: &MPoly) -> Result<MPoly, AlgebraError> {
        self.check_var(v)?;
        self.ensure_same(value)?;
        let coeffs = self.coefficients_in(v);
        let mut acc = MPoly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        Ok(acc)
    }

    /// Divides by `v^k`; every term must carry at least that power.
    pub fn shift_down(&self, v: Var, k: u32) -> MPoly {
        debug_assert!(self.valuation_in(v) >= k || self.is_zero());
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.with_exp(v, m.exp(v) - k), c.clone())).collect(),
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift_up(&self, v: Var, k: u32) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.with_exp(v, m.exp(v) + k), c.clone())).collect(),
        }
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Runs multivariate division by the leading term. When the division is
    /// not exact the full remainder is returned inside the error.
    pub fn exact_divide(&self, divisor: &MPoly) -> Result<MPoly, AlgebraError> {
        self.ensure_same(divisor)?;
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(AlgebraError::DivisionByZero),
        };
        if let Some(c) = divisor.constant_value() {
            return Ok(self.scale(&(BigRational::one() / c)));
        }
        let mut rem = self.clone();
        let mut quotient = MPoly::zero(&self.vars);
        let mut leftover = MPoly::zero(&self.vars);
        while let Some((m, c)) = rem.terms.iter().next_back() {
            let (m, c) = (m.clone(), c.clone());
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = cdiv(&c, &lc);
                for (dm, dc) in &divisor.terms {
                    rem.accumulate(dm.mul(&qm), -cmul(dc, &qc));
                }
                debug_assert!(!rem.terms.contains_key(&m));
                quotient.accumulate(qm, qc);
            } else {
                rem.terms.remove(&m);
                leftover.accumulate(m, c);
            }
        }
        if leftover.is_zero() {
            Ok(quotient)
        } else {
            Err(AlgebraError::NotDivisible { remainder: leftover })
        }
    }

    /// Pseudo-remainder of `self` by `divisor` in `v`:
    /// `lc(divisor)^(deg self − deg divisor + 1) · self` reduced modulo `divisor`.
    pub fn pseudo_remainder(&self, divisor: &MPoly, v: Var) -> Result<MPoly, AlgebraError> {
        self.check_var(v)?;
        self.ensure_same(divisor)?;
        let dd = divisor.degree_in(v);
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let d_coeffs = divisor.coefficients_in(v);
        let lc = d_coeffs[dd as usize].clone();
        let tail = &MPoly::from_coefficients_in(&self.vars, v, &d_coeffs[..dd as usize]);
        let mut r = self.clone();
        let mut steps = 0u32;
        let total = (self.degree_in(v) + 1).saturating_sub(dd);
        while !r.is_zero() && r.degree_in(v) >= dd {
            let e = r.degree_in(v);
            let lr = r.coefficients_in(v).pop().expect("nonzero");
            let low = MPoly::from_coefficients_in(&self.vars, v, &r.coefficients_in(v)[..e as usize]);
            r = &(&low * &lc) - &(&lr * tail).shift_up(v, e - dd);
            steps += 1;
        }
        Ok(if steps < total { r * lc.pow(total - steps) } else { r })
    }

    /// Largest monomial dividing every term (`1` for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.vars.len());
        };
        let mut e = first.exponents().to_vec();
        for m in it {
            for (x, &y) in e.iter_mut().zip(m.exponents()) {
                *x = (*x).min(y);
            }
        }
        Monomial::from_exponents(e)
    }

    /// Divides every term by a monomial that divides all of them.
    pub fn divide_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, c)| (m.quotient_of(t), c.clone())).collect(),
        }
    }

    /// Integer content over ℚ: gcd of numerators over lcm of denominators.
    pub fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        BigRational::new(num, den)
    }

    /// Returns `(self / c, c)` with the quotient integral, content one, and a
    /// positive leading coefficient.
    pub fn normalize_primitive(&self) -> Result<(MPoly, BigRational), AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::Usage("cannot normalize the zero polynomial".into()));
        }
        let mut c = self.content();
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        let inv = BigRational::one() / &c;
        Ok((self.scale(&inv), c))
    }

    /// If `self = s · other` for a nonzero rational `s`, returns `s`.
    pub fn scalar_multiple_of(&self, other: &MPoly) -> Option<BigRational> {
        if !same_table(&self.vars, &other.vars) || self.len() != other.len() || self.is_zero() {
            return None;
        }
        let (m0, c0) = self.leading_term()?;
        let s = c0 / other.terms.get(m0)?;
        for (m, c) in &self.terms {
            match other.terms.get(m) {
                Some(o) if &cmul(o, &s) == c => {}
                _ => return None,
            }
        }
        Some(s)
    }

    /// Re-expresses the polynomial over another table by matching names.
    pub fn rebase(&self, target: &Arc<VarTable>) -> Result<MPoly, AlgebraError> {
        let mut map = vec![None; self.vars.len()];
        for v in self.used_vars() {
            let name = self.vars.name(v);
            map[v] = Some(target.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?);
        }
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (v, &x) in m.exponents().iter().enumerate() {
                if x > 0 {
                    e[map[v].expect("used var mapped")] = x;
                }
            }
            out.accumulate(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }
}

/// `a op b` with a table check.
pub fn poly_arith(a: &MPoly, b: &MPoly, op: ArithOp) -> Result<MPoly, AlgebraError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_poly(self))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", super::parse::format_poly(self))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                self.$checked(rhs).expect("polynomials over different variable tables")
            }
        }
        impl $trait<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_canonical as p;
    use crate::algebra::vars::{GAMMA, MU};

    #[test]
    fn single_term_product() {
        assert_eq!(p("g").unwrap() * p("m").unwrap(), p("g*m").unwrap());
    }

    #[test]
    fn additive_inverse_cancels() {
        let s = p("16*g - 4*m").unwrap() + p("4*m - 16*g").unwrap();
        assert!(s.is_zero());
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn square_of_quadratic_factor() {
        let f = p("2*g^2 - g*m - 1").unwrap();
        let expect = p("4*g^4 - 4*g^3*m + g^2*m^2 - 4*g^2 + 2*g*m + 1").unwrap();
        assert_eq!(&f * &f, expect);
        assert_eq!(f.pow(2), expect);
        assert_eq!(f.pow(0), MPoly::one(f.vars()));
        assert_eq!(p("b").unwrap().pow(2), p("b^2").unwrap());
    }

    #[test]
    fn mismatched_tables_rejected() {
        let other = VarTable::new(["x", "y"]).unwrap();
        let a = MPoly::var(&other, 0);
        let b = p("g").unwrap();
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul] {
            assert!(matches!(poly_arith(&a, &b, op), Err(AlgebraError::TableMismatch { .. })));
        }
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(p("g^3").unwrap().partial_derivative(GAMMA).unwrap(), p("3*g^2").unwrap());
        assert_eq!(p("16*g - 4*m").unwrap().partial_derivative(MU).unwrap(), p("-4").unwrap());
        let p2 = p("16*g^3 - 24*g^2*m + 8*g*m^2 - m^3 - 2*m").unwrap();
        assert_eq!(p2.partial_derivative(GAMMA).unwrap(), p("48*g^2 - 48*g*m + 8*m^2").unwrap());
        assert!(matches!(p2.partial_derivative(42), Err(AlgebraError::UnknownVariable(_))));
    }

    #[test]
    fn exact_division_cases() {
        let q = p("g^2 - m^2").unwrap().exact_divide(&p("g - m").unwrap()).unwrap();
        assert_eq!(q, p("g + m").unwrap());
        let z = MPoly::zero(q.vars()).exact_divide(&p("3*g*b + 1").unwrap()).unwrap();
        assert!(z.is_zero());
        match p("g^2 + 1").unwrap().exact_divide(&p("g - m").unwrap()) {
            Err(AlgebraError::NotDivisible { remainder }) => assert!(!remainder.is_zero()),
            other => panic!("expected NotDivisible, got {other:?}"),
        }
        assert!(matches!(q.exact_divide(&MPoly::zero(q.vars())), Err(AlgebraError::DivisionByZero)));
    }

    #[test]
    fn r1_factor_divides_out() {
        let f = p("1536*g^8 - 4480*m*g^7 + 32*g^4 + 3*m^8").unwrap();
        let lin = p("4*g - m").unwrap();
        let quad = p("2*g^2 - g*m - 1").unwrap();
        let full = p("32").unwrap() * &lin * quad.pow(3) * &f;
        let q = full.exact_divide(&lin).unwrap();
        assert_eq!(q, p("32").unwrap() * quad.pow(3) * f);
    }

    #[test]
    fn normalize_examples() {
        let (n, c) = p("4*m - 16*g").unwrap().normalize_primitive().unwrap();
        assert_eq!(n, p("4*g - m").unwrap());
        assert_eq!(c, BigRational::from_integer((-4).into()));

        let (n, c) = p("7").unwrap().normalize_primitive().unwrap();
        assert_eq!(n, p("1").unwrap());
        assert_eq!(c, BigRational::from_integer(7.into()));

        let (n, c) = p("-3/2*g*m + 3*g^2").unwrap().normalize_primitive().unwrap();
        assert_eq!(n, p("2*g^2 - g*m").unwrap());
        assert_eq!(c, BigRational::new(3.into(), 2.into()));

        assert!(MPoly::zero(n.vars()).normalize_primitive().is_err());
    }

    #[test]
    fn coefficient_split_roundtrip() {
        let a = p("g^2*w^2 + 3*w*m - m + 7*g").unwrap();
        let cs = a.coefficients_in(crate::algebra::vars::OMEGA);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], p("g^2").unwrap());
        assert_eq!(MPoly::from_coefficients_in(a.vars(), crate::algebra::vars::OMEGA, &cs), a);
    }

    #[test]
    fn scalar_multiple_detection() {
        let a = p("2*g - 4*m").unwrap();
        let b = p("-g + 2*m").unwrap();
        assert_eq!(a.scalar_multiple_of(&b), Some(BigRational::from_integer((-2).into())));
        assert_eq!(a.scalar_multiple_of(&p("g - m").unwrap()), None);
    }

    #[test]
    fn pseudo_remainder_against_quadratic() {
        use crate::algebra::vars::GAMMA;
        let a = p("6*g^4 - 11*g^3*m + (6*m^2 + 6*b^2 - 3)*g^2 + (4*m + 3*b^2*m - m^3)*g - m^2 - b^2*m^2").unwrap();
        let c = p("2*g^2 - g*m - 1").unwrap();
        let r = a.pseudo_remainder(&c, GAMMA).unwrap();
        assert_eq!(r, p("8*b^2*(6*g*m - m^2 + 3)").unwrap());
        assert_eq!(r.monomial_content(), Monomial::var(7, 0, 2));
        assert_eq!(r.divide_monomial(&r.monomial_content()), p("48*g*m - 8*m^2 + 24").unwrap());
        // degree drop by more than one still applies the full lc power
        let q = p("4*g^3 + m").unwrap().pseudo_remainder(&p("2*g - m").unwrap(), GAMMA).unwrap();
        assert_eq!(q, p("4*m^3 + 8*m").unwrap());
    }
}
