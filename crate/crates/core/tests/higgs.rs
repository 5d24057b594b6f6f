use g2hitchin::algebra::{PolyExpr, Scalar};
use g2hitchin::bun_chart::ChartPoint;
use g2hitchin::curve::WeierstrassLabel;
use g2hitchin::formula::{poly, poly_env};
use g2hitchin::higgs::*;

fn symbolic_point() -> ChartPoint<PolyExpr> {
    ChartPoint::new(poly("R"), poly("S"), poly("T"))
}

#[test]
fn basis_fields_are_parabolic_and_traceless() {
    let p = symbolic_point();
    for d in Direction::ALL {
        let field = higgs_basis_field(d, &p);
        for (w, res) in &field.residues {
            assert!(res.trace().is_zero(), "trace at {w}");
            assert!(res.det().unwrap().is_zero(), "det at {w}");
            assert!(residue_kernel_check(&field, *w).unwrap(), "kernel at {w}");
        }
        // the residue at infinity is minus the sum; it is nilpotent and kills (1, 0)
        let mut total = res_zero();
        for (_, res) in &field.residues {
            total = total.add(res).unwrap();
        }
        assert!(total.get(0, 0).is_zero() && total.get(1, 0).is_zero() && total.get(1, 1).is_zero());
        assert!(field.parabolic_direction(WeierstrassLabel::WInf).is_err());
    }
}

fn res_zero() -> g2hitchin::algebra::Matrix<PolyExpr> {
    g2hitchin::algebra::Matrix::from_fn(2, 2, |_, _| poly("0"))
}

#[test]
fn signed_pairing_is_dual() {
    let p = symbolic_point();
    for d in Direction::ALL {
        let field = higgs_basis_field(d, &p);
        for e in Direction::ALL {
            let want = if d == e { poly("1") } else { poly("0") };
            assert_eq!(serre_pairing(e, &field), want);
            assert_eq!(serre_pairing_raw(e, &field), want.neg_ref());
        }
    }
}

#[test]
fn table_is_minus_determinant() {
    let det = determinant_hamiltonians();
    let table = hamiltonians_rst();
    for i in 0..3 {
        assert_eq!(table[i], det[i].neg_ref(), "h{i}");
    }
}

#[test]
fn quadratic_forms_reconstruct() {
    let forms = quadratic_forms(RstSource::Determinant).unwrap();
    let env = poly_env();
    let c = [poly("c_r"), poly("c_s"), poly("c_t")];
    for i in 0..3 {
        let hc = forms[i].apply(&c).unwrap();
        let mut acc = poly("0");
        for k in 0..3 {
            acc = acc.add_ref(&c[k].mul_ref(&hc[k]));
        }
        assert_eq!(acc, env.eval_poly(&determinant_hamiltonians()[i]).unwrap());
    }
}

#[test]
fn hamiltonians_commute() {
    let hs = determinant_hamiltonians();
    for i in 0..3 {
        for j in (i + 1)..3 {
            assert!(poisson_bracket_poly(&hs[i], &hs[j]).unwrap().is_zero(), "{{h{i}, h{j}}}");
        }
    }
}

#[test]
fn field_interpolation_matches_polynomials() {
    use g2hitchin::sampling::Sampler;
    use num_rational::BigRational;
    use num_traits::Zero;
    let mut smp = Sampler::new(4);
    for _ in 0..20 {
        let params = smp.params();
        let env = params.env(&BigRational::zero());
        let q = CotangentPoint { base: smp.chart_point(), c: smp.rationals() };
        let want = hamiltonians_at(&env, &q, RstSource::Determinant).unwrap();
        assert_eq!(hamiltonians_from_field(&env, &q).unwrap(), want);
        assert_eq!(hamiltonians_via_forms(&env, &q).unwrap(), want);
    }
}
