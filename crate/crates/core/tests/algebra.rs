use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use g2hitchin::algebra::scalar::{format_rational, parse_rational};
use g2hitchin::algebra::{Monomial, PolyExpr, RatExpr, Scalar, SqrtContext, SqrtExt, SqrtGen, VarUniverse};
use g2hitchin::formula::{poly, vidx};

const VARS: [&str; 3] = ["r", "s", "x"];

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn polynomial() -> impl Strategy<Value = PolyExpr> {
    prop::collection::vec((prop::array::uniform3(0u16..3), rational()), 0..5).prop_map(|terms| {
        let uni = VarUniverse::standard();
        let terms = terms.into_iter().map(|(e, c)| {
            let mut ex = vec![0u16; uni.len()];
            for (k, name) in VARS.iter().enumerate() {
                ex[vidx(name)] = e[k];
            }
            (Monomial::from_exps(ex), c)
        });
        PolyExpr::from_terms(&uni, terms)
    })
}

fn point() -> impl Strategy<Value = [BigRational; 3]> {
    prop::array::uniform3(rational())
}

fn at(p: &PolyExpr, v: &[BigRational; 3]) -> BigRational {
    p.eval_rational(&[("r", v[0].clone()), ("s", v[1].clone()), ("x", v[2].clone())]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert!(a.sub_ref(&a).is_zero());
        prop_assert_eq!(a.add_ref(&a.neg_ref()), PolyExpr::zero(a.universe()));
    }

    #[test]
    fn canonical_text_round_trips(a in polynomial()) {
        prop_assert_eq!(poly(&a.to_string()), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in polynomial(), b in polynomial(), v in point()) {
        prop_assert_eq!(at(&a.mul_ref(&b), &v), at(&a, &v) * at(&b, &v));
        prop_assert_eq!(at(&a.add_ref(&b), &v), at(&a, &v) + at(&b, &v));
    }

    #[test]
    fn product_rule(a in polynomial(), b in polynomial()) {
        let x = vidx("x");
        let lhs = a.mul_ref(&b).derivative(x);
        let rhs = a.derivative(x).mul_ref(&b).add_ref(&a.mul_ref(&b.derivative(x)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in polynomial(), b in polynomial(), c in polynomial()) {
        let x = vidx("x");
        let lhs = a.mul_ref(&b).substitute(x, &c).unwrap();
        let rhs = a.substitute(x, &c).unwrap().mul_ref(&b.substitute(x, &c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division(a in polynomial(), b in polynomial()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul_ref(&b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn rational_functions_are_reduced(a in polynomial(), b in polynomial(), g in polynomial()) {
        prop_assume!(!b.is_zero() && !g.is_zero());
        let plain = RatExpr::new(a.clone(), b.clone()).unwrap();
        let padded = RatExpr::new(a.mul_ref(&g), b.mul_ref(&g)).unwrap();
        prop_assert_eq!(&padded, &plain);
        // reduced form has a monic denominator
        prop_assert!(plain.denom().leading_coeff().is_one());
    }

    #[test]
    fn rational_function_field(a in polynomial(), b in polynomial(), c in polynomial(), d in polynomial()) {
        prop_assume!(!b.is_zero() && !d.is_zero() && !a.is_zero());
        let x = RatExpr::new(a.clone(), b.clone()).unwrap();
        let y = RatExpr::new(c.clone(), d.clone()).unwrap();
        let sum = RatExpr::new(a.mul_ref(&d).add_ref(&b.mul_ref(&c)), b.mul_ref(&d)).unwrap();
        prop_assert_eq!(x.checked_add(&y).unwrap(), sum);
        prop_assert_eq!(x.checked_mul(&x.inv().unwrap()).unwrap(), RatExpr::one(x.universe()));
    }

    #[test]
    fn square_root_relation(r1 in rational(), r2 in rational(), cs in prop::collection::vec(rational(), 4), ds in prop::collection::vec(rational(), 4)) {
        prop_assume!(!r1.is_zero() && !r2.is_zero());
        let ctx = SqrtContext::new(vec![(SqrtGen::Y1, r1.clone()), (SqrtGen::Y2, r2.clone())]).unwrap();
        let z = BigRational::zero();
        let y1 = SqrtExt::generator(&ctx, SqrtGen::Y1, &z).unwrap();
        let y2 = SqrtExt::generator(&ctx, SqrtGen::Y2, &z).unwrap();
        prop_assert_eq!(y1.mul_ref(&y1).base_value().cloned(), Some(r1.clone()));
        prop_assert_eq!(y1.mul_ref(&y2).mul_ref(&y1.mul_ref(&y2)).base_value().cloned(), Some(&r1 * &r2));
        let a = SqrtExt::from_coeffs(&ctx, cs).unwrap();
        let b = SqrtExt::from_coeffs(&ctx, ds).unwrap();
        // conjugation is a ring automorphism
        let conj = |x: &SqrtExt<BigRational>| x.conjugate(SqrtGen::Y1).unwrap();
        prop_assert_eq!(conj(&a.mul_ref(&b)), conj(&a).mul_ref(&conj(&b)));
        if let Ok(inv) = a.inverse() {
            prop_assert!(a.mul_ref(&inv).is_unity());
        }
    }

    #[test]
    fn rational_text_round_trips(x in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)), Some(x));
    }
}

#[test]
fn canonical_serialization_examples() {
    assert_eq!(poly("3/2*x^2*r - 1").to_string(), "3/2*r*x^2 - 1");
    assert_eq!(poly("(r - s)*(r + s)").to_string(), "r^2 - s^2");
    assert_eq!(poly("0").to_string(), "0");
    assert_eq!(format_rational(&q(-6, 4)), "-3/2");
    assert!(parse_rational("1/0").is_none());
}

#[test]
fn zero_divisors_are_reported() {
    // y^2 = 4, so (2 + y)(2 - y) = 0
    let ctx = SqrtContext::new(vec![(SqrtGen::Y1, q(4, 1))]).unwrap();
    let x = SqrtExt::from_coeffs(&ctx, vec![q(2, 1), q(1, 1)]).unwrap();
    assert!(x.inverse().is_err());
}
