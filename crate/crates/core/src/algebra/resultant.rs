//! Resultants by two independent routes.
//!
//! * [`Strategy::SylvesterBareiss`] builds the Sylvester matrix with
//!   polynomial entries and takes its determinant by fraction-free Bareiss
//!   elimination over the polynomial ring.
//! * [`Strategy::EvalInterpolate`] specializes the remaining variables at
//!   integer points (one variable per recursion level), takes numeric
//!   determinants over ℚ by Gaussian elimination, and rebuilds the result by
//!   Newton interpolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::error::AlgebraError;
use super::poly::MPoly;
use super::vars::Var;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    SylvesterBareiss,
    EvalInterpolate,
}

/// `Res_v(a, b)` with the Sylvester convention (rows of `a` first).
pub fn resultant(a: &MPoly, b: &MPoly, v: Var, strategy: Strategy) -> Result<MPoly, AlgebraError> {
    a.check_var(v)?;
    a.ensure_same(b)?;
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 || db == 0 {
        return Err(AlgebraError::Usage(format!(
            "resultant in `{}` needs positive degree in both inputs (got {da} and {db})",
            a.vars().name(v)
        )));
    }
    Ok(match strategy {
        Strategy::SylvesterBareiss => bareiss_determinant(sylvester_matrix(a, b, v)),
        Strategy::EvalInterpolate => interpolated(a, b, v),
    })
}

/// Sylvester matrix of `a`, `b` in `v`; entries are coefficients free of `v`.
pub fn sylvester_matrix(a: &MPoly, b: &MPoly, v: Var) -> Vec<Vec<MPoly>> {
    let ca = a.coefficients_in(v);
    let cb = b.coefficients_in(v);
    let (m, n) = (ca.len() - 1, cb.len() - 1);
    let size = m + n;
    let zero = MPoly::zero(a.vars());
    let mut rows = vec![vec![zero; size]; size];
    for i in 0..n {
        for (j, c) in ca.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in cb.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    rows
}

/// Fraction-free determinant; every division is exact in the polynomial ring.
pub fn bareiss_determinant(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    assert!(n > 0, "empty matrix");
    let vars = m[0][0].vars().clone();
    let mut negate = false;
    let mut prev = MPoly::one(&vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MPoly::zero(&vars),
            }
        }
        let pivot = m[k][k].clone();
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        bottom.par_iter_mut().for_each(|row| {
            let lead = row[k].clone();
            for j in k + 1..n {
                let mut x = &row[j] * &pivot;
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    x = x - &lead * &pivot_row[j];
                }
                row[j] = if prev.is_constant() {
                    x.scale(&(BigRational::one() / prev.constant_value().unwrap()))
                } else {
                    x.exact_divide(&prev).expect("Bareiss step divides exactly")
                };
            }
            row[k] = MPoly::zero(&pivot.vars().clone());
        });
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant over ℚ by Gaussian elimination with row swaps.
#[allow(clippy::needless_range_loop)]
pub fn rational_determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k + 1..n {
                if !m[k][j].is_zero() {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
            }
            m[i][k] = BigRational::zero();
        }
    }
    det
}

/// Integer sample points 0, 1, −1, 2, −2, …
fn sample_points() -> impl Iterator<Item = BigRational> {
    (0i64..)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .map(|x| BigRational::from_integer(BigInt::from(x)))
}

fn interpolated(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
    let vars = a.vars().clone();
    let mut others: Vec<Var> = a.used_vars();
    for w in b.used_vars() {
        if !others.contains(&w) {
            others.push(w);
        }
    }
    others.retain(|&w| w != v);
    others.sort_unstable();

    let Some(&u) = others.first() else {
        let rows = sylvester_matrix(a, b, v)
            .into_iter()
            .map(|r| r.into_iter().map(|e| e.constant_value().expect("all other variables specialized")).collect())
            .collect();
        return MPoly::constant(&vars, rational_determinant(rows));
    };

    let (da, db) = (a.degree_in(v), b.degree_in(v));
    let bound = (da * b.degree_in(u) + db * a.degree_in(u)) as usize;
    let lca = a.coefficients_in(v).pop().expect("positive degree");
    let lcb = b.coefficients_in(v).pop().expect("positive degree");

    let points: Vec<BigRational> = sample_points()
        .filter(|t| !lca.eval_var(u, t).is_zero() && !lcb.eval_var(u, t).is_zero())
        .take(bound + 1)
        .collect();
    let values: Vec<MPoly> = points.par_iter().map(|t| interpolated(&a.eval_var(u, t), &b.eval_var(u, t), v)).collect();
    newton_interpolate(&points, values, u)
}

/// Polynomial in `u` through `(points[i], values[i])`; values are free of `u`.
pub fn newton_interpolate(points: &[BigRational], mut coeffs: Vec<MPoly>, u: Var) -> MPoly {
    let n = points.len();
    assert_eq!(n, coeffs.len());
    for level in 1..n {
        for i in (level..n).rev() {
            let denom = &points[i] - &points[i - level];
            let diff = &coeffs[i] - &coeffs[i - 1];
            coeffs[i] = diff.scale(&(BigRational::one() / denom));
        }
    }
    let vars = coeffs[0].vars().clone();
    let x = MPoly::var(&vars, u);
    let mut acc = coeffs[n - 1].clone();
    for i in (0..n - 1).rev() {
        let shift = &x - &MPoly::constant(&vars, points[i].clone());
        acc = &(&acc * &shift) + &coeffs[i];
    }
    acc
}
