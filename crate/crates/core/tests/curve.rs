use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use g2hitchin::algebra::Matrix;
use g2hitchin::curve::{CurveParams, TorsionElement, WeierstrassLabel};
use g2hitchin::nr_moduli::{kummer_u_at, torsion_generator_u};
use g2hitchin::Error;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn symmetric_functions_at_two_three_five() {
    let p = CurveParams::from_ints(2, 3, 5).unwrap();
    assert_eq!(p.sigma(1).unwrap(), q(10));
    assert_eq!(p.sigma(2).unwrap(), q(31));
    assert_eq!(p.sigma(3).unwrap(), q(30));
    assert_eq!(p.curve_derivative_value(&q(0)), q(30));
    for x in [0, 1, 2, 3, 5] {
        assert!(p.curve_value(&q(x)).is_zero());
    }
    assert_eq!(p.curve_value(&q(4)), q(4 * 3 * 2 * 1 * -1));
}

#[test]
fn non_generic_parameters_are_rejected() {
    for (r, s, t) in [(1, 1, 2), (2, 2, 3), (0, 2, 3), (2, 3, 1), (2, 3, 3)] {
        assert!(matches!(CurveParams::from_ints(r, s, t), Err(Error::NonGenericParams(_))), "{r} {s} {t}");
    }
    assert!(CurveParams::parse("1/2", "-3", "7/5").is_ok());
    assert!(CurveParams::parse("a", "2", "3").is_err());
}

#[test]
fn weierstrass_abscissae() {
    let p = CurveParams::parse("1/2", "-3", "7").unwrap();
    assert_eq!(WeierstrassLabel::W0.x_value(&p), Some(q(0)));
    assert_eq!(WeierstrassLabel::W1.x_value(&p), Some(q(1)));
    assert_eq!(WeierstrassLabel::Wt.x_value(&p), Some(q(7)));
    assert_eq!(WeierstrassLabel::WInf.x_value(&p), None);
}

#[test]
fn torsion_group_law() {
    use WeierstrassLabel::*;
    let e = |l: &[WeierstrassLabel]| TorsionElement::from_labels(l).unwrap();
    assert_eq!(e(&[W0, WInf]).add(e(&[W1, WInf])), e(&[W0, W1]));
    assert_eq!(TorsionElement::all().len(), 16);
    assert!(e(&[W0, W1]).add(e(&[W0, W1])).is_identity());
    // an odd number of points is not a 2-torsion class
    assert!(TorsionElement::from_labels(&[W0]).is_err());
    // the six points sum to zero
    assert!(e(&[W0, W1, Wr, Ws, Wt, WInf]).is_identity());
}

#[test]
fn u_chart_generator_is_diagonal() {
    let z = BigRational::zero();
    let m = torsion_generator_u(&z, 2).unwrap();
    let want = Matrix::from_fn(4, 4, |i, j| if i != j { q(0) } else if i == 1 || i == 2 { q(-1) } else { q(1) });
    assert_eq!(m, want);
    for k in 0..4 {
        let g = torsion_generator_u(&z, k).unwrap();
        assert!(g.mul(&g).unwrap().scalar_value().is_some());
    }
}

#[test]
fn kummer_u_at_first_coordinate_point() {
    let p = CurveParams::from_ints(2, 3, 5).unwrap();
    let env = p.env(&BigRational::zero());
    let z = q(0);
    assert_eq!(kummer_u_at(&env, &[q(1), z.clone(), z.clone(), z]).unwrap(), q(1));
}
