use g2hitchin::algebra::{Matrix, PolyExpr, Scalar, SqrtExt};
use g2hitchin::curve::TorsionElement;
use g2hitchin::formula::{poly, poly_env};
use g2hitchin::nr_moduli::*;

#[test]
fn trivial_bundle_is_singular_point_of_kummer() {
    let e0 = [poly("1"), poly("0"), poly("0"), poly("0")];
    let env = poly_env();
    assert!(kummer_v_at(env, &e0).unwrap().is_zero());
    let e = env.clone().with("v0", poly("1")).with("v1", poly("0")).with("v2", poly("0")).with("v3", poly("0"));
    for g in kummer_v_gradient() {
        assert!(e.eval_poly(&g).unwrap().is_zero());
    }
}

#[test]
fn parametrized_kummer_vanishes() {
    assert!(parametrized_kummer_residual().unwrap().vanishes());
}

fn omega_sym() -> g2hitchin::formula::Env<SqrtExt<PolyExpr>> {
    let ctx = omega_context(poly_env()).unwrap();
    omega_env(poly_env(), &ctx).unwrap()
}

#[test]
fn conjugation_to_regular_representation() {
    let om = omega_sym();
    let m = nice_basis_matrix(&om, NiceBasis::Corrected).unwrap();
    let lambdas: Vec<String> =
        TorsionElement::basis().iter().map(|tau| conjugation_factor(&m, &om, *tau).unwrap().unwrap().to_string()).collect();
    assert_eq!(lambdas, ["(1)*w0", "(1)*w1", "(-1)*wr", "(1)*ws"]);
    let mt = nice_basis_matrix(&om, NiceBasis::Literal).unwrap();
    let fails = TorsionElement::basis().iter().filter(|t| conjugation_factor(&mt, &om, **t).unwrap().is_none()).count();
    assert_eq!(fails, 4);
}

#[test]
fn generators_square_to_scalars_and_commute() {
    let env = poly_env();
    let g: Vec<Matrix<PolyExpr>> = (0..4).map(|k| torsion_generator_v(env, k).unwrap()).collect();
    for a in &g {
        assert!(a.trace().is_zero());
        assert!(a.mul(a).unwrap().scalar_value().is_some());
        for b in &g {
            assert!(a.mul(b).unwrap().projectively_equal(&b.mul(a).unwrap()));
        }
    }
}
