use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use g2hitchin::algebra::Scalar;
use g2hitchin::bun_chart::{classify, fiber, fiber_discriminant, galois_involution, weddle_quartic, ChartPoint, FiberKind, FiberPoints};
use g2hitchin::curve::CurveParams;
use g2hitchin::nr_moduli::{kummer_v_at, NrPoint};
use g2hitchin::Error;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=15).prop_map(|(n, d)| q(n, d))
}

fn params() -> CurveParams {
    CurveParams::parse("-2", "3/5", "7").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fiber_is_the_point_and_its_partner(r in rational(), s in rational(), t in rational()) {
        let params = params();
        let env = params.env(&BigRational::zero());
        let p = ChartPoint::new(r, s, t);
        let (Ok(v), Ok(p2)) = (classify(&env, &p), galois_involution(&env, &p)) else { return Ok(()) };
        prop_assume!(p2 != p);
        prop_assert_eq!(galois_involution(&env, &p2).unwrap(), p.clone());
        let Ok(f) = fiber(&params, &v) else { return Ok(()) };
        prop_assert_eq!(f.kind, FiberKind::Generic);
        let pts = f.rational().unwrap();
        prop_assert!(pts.contains(&p) && pts.contains(&p2));
        prop_assert!(classify(&env, &p2).unwrap().point.projectively_equal(&v.point));
        // two distinct preimages, so the image is off the quartic
        prop_assert!(!fiber_discriminant(&env, &v.point.coords).unwrap().is_zero());
    }

    #[test]
    fn discriminant_vanishes_exactly_on_the_quartic(v in prop::array::uniform4(rational())) {
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let env = params().env(&BigRational::zero());
        let d = fiber_discriminant(&env, &v).unwrap();
        let k = kummer_v_at(&env, &v).unwrap();
        prop_assert_eq!(d.is_zero(), k.is_zero());
    }
}

#[test]
fn gunning_points_are_named() {
    let params = CurveParams::from_ints(2, 3, 5).unwrap();
    let env = params.env(&BigRational::zero());
    let pt = |r: i64, s: i64, t: i64| ChartPoint::new(q(r, 1), q(s, 1), q(t, 1));
    for (p, name) in [(pt(0, 0, 0), "E_[w1]"), (pt(1, 1, 1), "E_[w0]"), (pt(2, 3, 5), "E_[winf]")] {
        match classify(&env, &p) {
            Err(Error::Indeterminate(n)) => assert_eq!(n, name),
            other => panic!("expected indeterminacy, got {other:?}"),
        }
    }
}

#[test]
fn irrational_fiber_lives_in_a_quadratic_extension() {
    let params = CurveParams::from_ints(2, 3, 5).unwrap();
    let env = params.env(&BigRational::zero());
    let v = NrPoint::v([1, 2, 3, 4].map(|n| q(n, 1))).unwrap();
    let f = fiber(&params, &v).unwrap();
    let FiberPoints::Quadratic { radicand, points } = &f.points else { panic!("expected Q(d) points") };
    assert_eq!(points.len(), 2);
    assert!(!radicand.is_zero());
    let z = points[0].coords[0].zero_like();
    let lift = |x: &BigRational| z.embed(x);
    let ext = env.map(z.clone(), lift);
    for p in points {
        let image = classify(&ext, p).unwrap();
        let target = NrPoint::v(v.point.coords.clone().map(|x| lift(&x))).unwrap();
        assert!(image.point.projectively_equal(&target.point));
    }
}

#[test]
fn weddle_vanishes_at_the_gunning_points() {
    let params = CurveParams::parse("1/3", "-4", "9/2").unwrap();
    let env = params.env(&BigRational::zero());
    let [r, s, t] = params.values();
    let one = q(1, 1);
    let zero = q(0, 1);
    for p in [ChartPoint::new(zero.clone(), zero.clone(), zero), ChartPoint::new(one.clone(), one.clone(), one), ChartPoint::new(r, s, t)] {
        assert!(weddle_quartic(&env, &p).unwrap().is_zero());
    }
}
