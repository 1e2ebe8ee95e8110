//! Exact arithmetic kernel: rationals, sparse polynomials, β-Laurent
//! elements, and resultants.

mod error;
mod laurent;
mod monomial;
mod parse;
mod poly;
mod resultant;
mod vars;

pub use error::{AlgebraError, ParseError};
pub use laurent::{substitute, LaurentElement};
pub use monomial::Monomial;
pub use num_rational::BigRational;
pub use parse::{format_poly, identifiers, parse_canonical, parse_poly};
pub use poly::{poly_arith, ArithOp, MPoly};
pub use resultant::{
    bareiss_determinant, newton_interpolate, rational_determinant, resultant, sylvester_matrix, Strategy,
};
pub use vars::{Var, VarTable, BETA, CANONICAL_NAMES, GAMMA, KAPPA1, MU, OMEGA, XI_BETA, XI_GAMMA};

/// Integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
