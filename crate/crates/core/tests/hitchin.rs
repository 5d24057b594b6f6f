use num_rational::BigRational;
use num_traits::Zero;

use g2hitchin::algebra::{rank, Scalar, SqrtExt};
use g2hitchin::bun_chart::{classify, galois_involution, ChartPoint};
use g2hitchin::curve::CurveParams;
use g2hitchin::higgs::{hamiltonians_at, hamiltonians_via_forms, CotangentPoint, HamiltonianTriple, RstSource};
use g2hitchin::hitchin::*;
use g2hitchin::nr_moduli::{NrChart, NrPoint};
use g2hitchin::sampling::Sampler;

type W = SqrtExt<BigRational>;

#[test]
fn derived_table_matches_fixed_literal_table() {
    let derived = derive_u_table(&DerivationConfig::default()).unwrap();
    assert_eq!(derived.degree, 3);
    let fixed = u_table_numerators(USource::Corrected).unwrap();
    assert_eq!(&derived.numerators, fixed);
    let literal = u_table_numerators(USource::Literal).unwrap();
    let diff = term_diff(literal, &derived.numerators);
    assert!(!diff.is_empty());
    assert!(diff.iter().all(|d| d.hamiltonian == "h2"));
    assert!(term_diff(fixed, &derived.numerators).is_empty());
}

/// A u-chart cotangent point lying over a rational chart point, so both
/// preimages are rational.
fn u_point_over(params: &CurveParams, p: &ChartPoint<BigRational>, eta: [BigRational; 3]) -> Option<(NrCotangentPoint<W>, g2hitchin::formula::Env<W>, g2hitchin::algebra::Matrix<W>)> {
    let (oenv, m) = numeric_nice_basis(params).ok()?;
    let env = params.env(&BigRational::zero());
    let v = classify(&env, p).ok()?;
    let t = oenv.template().clone();
    let vl = NrPoint::v(v.point.coords.clone().map(|x| t.embed(&x))).ok()?;
    let u = m.apply(&vl.point.coords).ok()?;
    let q = NrCotangentPoint::new(NrPoint::u([u[0].clone(), u[1].clone(), u[2].clone(), u[3].clone()]).ok()?, eta.map(|x| t.embed(&x))).ok()?;
    Some((q, oenv, m))
}

#[test]
fn table_agrees_with_chart_path_at_both_preimages() {
    let mut smp = Sampler::new(11);
    let mut done = 0;
    while done < 12 {
        let params = smp.params();
        let p = smp.chart_point();
        let eta = smp.rationals();
        let Some((q, oenv, m)) = u_point_over(&params, &p, eta) else { continue };
        let env = params.env(&BigRational::zero());
        let Ok(p2) = galois_involution(&env, &p) else { continue };
        let qv = covector_change_u_v(&q, &m).unwrap();
        let t = oenv.template().clone();
        let mut vals = Vec::new();
        let mut ok = true;
        for pre in [&p, &p2] {
            match covector_pullback_at(&oenv, &qv, &pre.map(|x| t.embed(x))) {
                Ok(cot) => vals.push(hamiltonians_via_forms(&oenv, &cot).unwrap()),
                Err(_) => ok = false,
            }
        }
        if !ok {
            continue;
        }
        assert_eq!(vals[0], vals[1]);
        let fixed = hamiltonians_u(&oenv, &q, USource::Corrected).unwrap();
        assert_eq!(fixed, vals[0]);
        let literal = hamiltonians_u(&oenv, &q, USource::Literal).unwrap();
        assert_ne!(literal.h[2], vals[0].h[2]);
        assert_eq!(literal.h[..2], vals[0].h[..2]);
        done += 1;
    }
}

#[test]
fn general_oracle_through_formal_fiber() {
    // small heights keep the nested extension cheap
    let mut smp = Sampler::with_bound(5, 4);
    let mut done = 0;
    while done < 1 {
        let params = smp.params();
        let Ok((oenv, m)) = numeric_nice_basis(&params) else { continue };
        let t = oenv.template().clone();
        let u: [BigRational; 4] = smp.rationals();
        let eta: [BigRational; 3] = smp.rationals();
        let Ok(q) = NrCotangentPoint::new(NrPoint::u(u.map(|x| t.embed(&x))).unwrap(), eta.map(|x| t.embed(&x))) else { continue };
        let Ok(h) = hamiltonians_u_oracle(&oenv, &m, &q) else { continue };
        assert_eq!(h, hamiltonians_u(&oenv, &q, USource::Corrected).unwrap());
        done += 1;
    }
}

#[test]
fn covector_change_round_trip_and_pairing() {
    let mut smp = Sampler::new(3);
    let mut done = 0;
    while done < 10 {
        let params = smp.params();
        let (oenv, m) = numeric_nice_basis(&params).unwrap();
        let t = oenv.template().clone();
        let v: [BigRational; 3] = smp.rationals();
        let mu: [BigRational; 3] = smp.rationals();
        let tangent: [BigRational; 3] = smp.rationals();
        let base = NrPoint::v([v[0].clone(), v[1].clone(), v[2].clone(), BigRational::from_integer(1.into())].map(|x| t.embed(&x))).unwrap();
        let q = NrCotangentPoint::new(base, mu.map(|x| t.embed(&x))).unwrap();
        let Ok(qu) = covector_change_u_v(&q, &m) else { continue };
        assert_eq!(qu.base.chart, NrChart::U);
        let back = covector_change_u_v(&qu, &m).unwrap();
        assert_eq!(back, q);
        // <eta, K w> = <mu, w>
        let va = q.base.point.affine().unwrap();
        let (k, _) = nr_jacobian(&m, &va).unwrap();
        let w = tangent.map(|x| t.embed(&x));
        let kw = k.apply(&w).unwrap();
        let lhs = (0..3).fold(t.zero_like(), |a, i| a.add_ref(&qu.covector[i].mul_ref(&kw[i])));
        let rhs = (0..3).fold(t.zero_like(), |a, i| a.add_ref(&q.covector[i].mul_ref(&w[i])));
        assert_eq!(lhs, rhs);
        let zero = NrCotangentPoint::new(q.base.clone(), [t.zero_like(), t.zero_like(), t.zero_like()]).unwrap();
        assert!(covector_change_u_v(&zero, &m).unwrap().covector.iter().all(|x| x.vanishes()));
        done += 1;
    }
}

#[test]
fn pullback_pushforward_and_galois_lift() {
    let mut smp = Sampler::new(17);
    let mut done = 0;
    while done < 10 {
        let params = smp.params();
        let env = params.env(&BigRational::zero());
        let p = smp.chart_point();
        let c: [BigRational; 3] = smp.rationals();
        let cot = CotangentPoint { base: p.clone(), c };
        let Ok(q) = covector_pushforward(&env, &cot) else { continue };
        let Ok(back) = covector_pullback_at(&env, &q, &p) else { continue };
        assert_eq!(back, cot);
        let Ok(lifted) = galois_covector(&env, &cot) else { continue };
        let Ok(other) = covector_pullback_at(&env, &q, &lifted.base) else { continue };
        assert_eq!(other, lifted);
        let h = hamiltonians_at(&env, &cot, RstSource::Determinant).unwrap();
        assert_eq!(h, hamiltonians_at(&env, &lifted, RstSource::Determinant).unwrap());
        assert_eq!(h, hamiltonians_via_forms(&env, &cot).unwrap());
        // fiber pullback returns both lifts
        let Ok(pulled) = covector_pullback_to_chart(&params, &q) else { continue };
        assert_eq!(pulled.len(), 2);
        let down: Vec<CotangentPoint<BigRational>> = pulled
            .iter()
            .map(|x| CotangentPoint {
                base: x.base.map(|y| y.base_value().unwrap().clone()),
                c: x.c.clone().map(|y| y.base_value().unwrap().clone()),
            })
            .collect();
        assert!(down.contains(&cot) && down.contains(&lifted));
        done += 1;
    }
}

#[test]
fn vgp_values() {
    let [.., h6] = vgp_symbolic().unwrap();
    assert!(h6.is_zero());
    let params = CurveParams::from_ints(2, 3, 5).unwrap();
    let env = params.env(&BigRational::zero());
    let h0 = BigRational::from_integer(7.into());
    let z = BigRational::zero();
    let hs = vgp_hamiltonians(&env, &HamiltonianTriple { h: [h0.clone(), z.clone(), z] }).unwrap();
    assert_eq!(hs[0], BigRational::from_integer(4.into()) * h0 / BigRational::from_integer(30.into()));
    let mut smp = Sampler::new(2);
    for _ in 0..20 {
        let params = smp.params();
        let env = params.env(&BigRational::zero());
        let m = vgp_matrix(&env).unwrap();
        let rows: Vec<Vec<BigRational>> = (0..5).map(|i| m.row(i)).collect();
        assert_eq!(rank(&rows), 3);
    }
    assert!(vgp_matrix(&CurveParams::from_ints(2, 3, 5).unwrap().env(&BigRational::zero()).with("t", BigRational::zero())).is_err());
}
