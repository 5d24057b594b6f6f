use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::PolyExpr;
use super::scalar::Scalar;
use super::universe::VarUniverse;
use crate::error::{Error, Result};

/// Reduced quotient of polynomials. The denominator is nonzero, coprime to the
/// numerator and has leading coefficient 1 in grlex order, so equal rational
/// functions have identical representations.
#[derive(Clone, PartialEq, Eq)]
pub struct RatExpr {
    num: PolyExpr,
    den: PolyExpr,
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatExpr({})", self)
    }
}

impl RatExpr {
    pub fn new(num: PolyExpr, den: PolyExpr) -> Result<Self> {
        if num.universe() != den.universe() {
            return Err(Error::UniverseMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: PolyExpr, den: PolyExpr) -> Self {
        if num.is_zero() {
            let one = PolyExpr::one(den.universe());
            return RatExpr { num, den: one };
        }
        if let Some(c) = den.constant_value() {
            let one = PolyExpr::one(den.universe());
            return RatExpr { num: num.scale(&c.recip()), den: one };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatExpr { num, den }
        } else {
            let inv = lc.recip();
            RatExpr { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: PolyExpr) -> Self {
        let one = PolyExpr::one(p.universe());
        RatExpr { num: p, den: one }
    }

    pub fn zero(uni: &Arc<VarUniverse>) -> Self {
        Self::from_poly(PolyExpr::zero(uni))
    }

    pub fn one(uni: &Arc<VarUniverse>) -> Self {
        Self::from_poly(PolyExpr::one(uni))
    }

    pub fn constant(uni: &Arc<VarUniverse>, c: BigRational) -> Self {
        Self::from_poly(PolyExpr::constant(uni, c))
    }

    pub fn var(uni: &Arc<VarUniverse>, name: &str) -> Result<Self> {
        Ok(Self::from_poly(PolyExpr::var(uni, name)?))
    }

    pub fn numer(&self) -> &PolyExpr {
        &self.num
    }

    pub fn denom(&self) -> &PolyExpr {
        &self.den
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        self.num.universe()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&PolyExpr> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn checked_add(&self, other: &RatExpr) -> Result<RatExpr> {
        if self.universe() != other.universe() {
            return Err(Error::UniverseMismatch);
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            return Ok(Self::normalize(&self.num + &other.num, self.den.clone()));
        }
        if self.den.is_one() {
            return Ok(RatExpr { num: &(&self.num * &other.den) + &other.num, den: other.den.clone() });
        }
        if other.den.is_one() {
            return Ok(RatExpr { num: &self.num + &(&other.num * &self.den), den: self.den.clone() });
        }
        let g = gcd(&self.den, &other.den);
        let (bd, dd) = if g.is_constant() {
            (self.den.clone(), other.den.clone())
        } else {
            (self.den.div_exact(&g)?, other.den.div_exact(&g)?)
        };
        let num = &(&self.num * &dd) + &(&other.num * &bd);
        let den = &self.den * &dd;
        if g.is_constant() {
            // coprime denominators: the sum is already reduced
            return Ok(Self::normalize_lc(num, den));
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize_lc(num: PolyExpr, den: PolyExpr) -> Self {
        if num.is_zero() {
            return Self::zero(den.universe());
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatExpr { num, den }
        } else {
            let inv = lc.recip();
            RatExpr { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn checked_mul(&self, other: &RatExpr) -> Result<RatExpr> {
        if self.universe() != other.universe() {
            return Err(Error::UniverseMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.universe()));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(RatExpr::from_poly(&self.num * &other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let a = if g1.is_constant() { self.num.clone() } else { self.num.div_exact(&g1)? };
        let d = if g1.is_constant() { other.den.clone() } else { other.den.div_exact(&g1)? };
        let c = if g2.is_constant() { other.num.clone() } else { other.num.div_exact(&g2)? };
        let b = if g2.is_constant() { self.den.clone() } else { self.den.div_exact(&g2)? };
        Ok(Self::normalize_lc(&a * &c, &b * &d))
    }

    pub fn neg(&self) -> RatExpr {
        RatExpr { num: -&self.num, den: self.den.clone() }
    }

    pub fn checked_sub(&self, other: &RatExpr) -> Result<RatExpr> {
        self.checked_add(&other.neg())
    }

    pub fn inv(&self) -> Result<RatExpr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatExpr) -> Result<RatExpr> {
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, c: &BigRational) -> RatExpr {
        RatExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> RatExpr {
        RatExpr { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn derivative(&self, var: usize) -> RatExpr {
        let dn = self.num.derivative(var);
        if self.den.is_one() {
            return RatExpr::from_poly(dn);
        }
        let dd = self.den.derivative(var);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalize(num, &self.den * &self.den)
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<RatExpr> {
        Ok(self.derivative(self.universe().index_of(name)?))
    }

    /// Evaluate in a scalar ring; fails when the denominator vanishes.
    pub fn eval_with<C, F>(&self, template: &C, mut value: F) -> Result<C>
    where
        C: Scalar,
        F: FnMut(usize) -> Option<C>,
    {
        let n = self.num.eval_with(template, &mut value)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = self.den.eval_with(template, &mut value)?;
        if d.vanishes() {
            return Err(Error::DivisionByZero);
        }
        let inv = d.try_inv().ok_or(Error::ZeroDivisor)?;
        Ok(n.mul_ref(&inv))
    }

    pub fn eval_rational(&self, values: &[(&str, BigRational)]) -> Result<BigRational> {
        let n = self.num.eval_rational(values)?;
        let d = self.den.eval_rational(values)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(n / d)
    }

    /// Substitute rational functions for variables (simultaneously).
    pub fn substitute_many(&self, subs: &[(usize, RatExpr)]) -> Result<RatExpr> {
        let uni = self.universe().clone();
        let lookup = |i: usize| {
            Some(
                subs.iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(|| RatExpr::from_poly(PolyExpr::var_index(&uni, i))),
            )
        };
        self.eval_with(&RatExpr::zero(&uni), lookup)
    }

    pub fn to_latex(&self) -> String {
        if self.den.is_one() {
            self.num.to_latex()
        } else {
            format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "canonical": self.to_string(),
            "numerator": self.num.to_json(),
            "denominator": self.den.to_json(),
        })
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<PolyExpr> for RatExpr {
    fn from(p: PolyExpr) -> Self {
        RatExpr::from_poly(p)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&RatExpr> for &RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: &RatExpr) -> RatExpr {
                self.$checked(rhs).expect("rational function operation failed")
            }
        }
        impl $tr<RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: RatExpr) -> RatExpr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: &RatExpr) -> RatExpr {
                (&self).$method(rhs)
            }
        }
        impl $tr<RatExpr> for &RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: RatExpr) -> RatExpr {
                self.$method(&rhs)
            }
        }
    };
}

rat_binop!(Add, add, checked_add);
rat_binop!(Sub, sub, checked_sub);
rat_binop!(Mul, mul, checked_mul);
rat_binop!(Div, div, checked_div);

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr::neg(self)
    }
}

impl Neg for RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr::neg(&self)
    }
}

impl Scalar for RatExpr {
    fn zero_like(&self) -> Self {
        RatExpr::zero(self.universe())
    }
    fn one_like(&self) -> Self {
        RatExpr::one(self.universe())
    }
    fn embed(&self, q: &BigRational) -> Self {
        RatExpr::constant(self.universe(), q.clone())
    }
    fn vanishes(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        RatExpr::neg(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn is_unity(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
}
