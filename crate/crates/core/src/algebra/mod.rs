//! Exact algebra: sparse polynomials over Q, reduced rational functions,
//! formal square-root extensions and small matrices.

pub mod gcd;
pub mod linsolve;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod sqrt_ext;
pub mod universe;

pub use gcd::gcd;
pub use linsolve::{rank, solve_exact};
pub use matrix::{Matrix, ProjPoint4};
pub use parse::parse_expr;
pub use poly::{Monomial, PolyExpr};
pub use ratfunc::RatExpr;
pub use scalar::{int, rat, Scalar};
pub use sqrt_ext::{SqrtContext, SqrtExt, SqrtGen};
pub use universe::VarUniverse;

/// `b^2 - 4ac`.
pub fn quadratic_discriminant<C: Scalar>(a: &C, b: &C, c: &C) -> C {
    b.mul_ref(b).sub_ref(&a.mul_ref(c).mul_ref(&a.embed_int(4)))
}
