//! The Hitchin Hamiltonians on P^3: cotangent coordinate changes between the
//! v and u charts, pullback to the canonical chart, the u-chart table with its
//! independent derivation, and the evaluations at the Weierstrass points.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::algebra::scalar::format_rational;
use crate::algebra::{rank, solve_exact, Matrix, Monomial, PolyExpr, ProjPoint4, RatExpr, Scalar, SqrtContext, SqrtExt, SqrtGen, VarUniverse};
use crate::bun_chart::{classify_polys, fiber, fiber_formal, galois_involution, ChartPoint, FiberPoints, INVOLUTION_LAMBDA_TEXT, INVOLUTION_TEXT};
use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::formula::{poly, vidx, Env};
use crate::higgs::{forms_at, hamiltonians_from_field, CotangentPoint, HamiltonianTriple};
use crate::nr_moduli::{nice_basis_matrix, omega_context, omega_env, NiceBasis, NrChart, NrPoint};
use crate::sampling::Sampler;

/// A covector on P^3 in the affine chart where the last coordinate is 1:
/// `(eta0, eta1, eta2)` on the u chart, `(mu0, mu1, mu2)` on the v chart.
#[derive(Clone, Debug, PartialEq)]
pub struct NrCotangentPoint<C> {
    pub base: NrPoint<C>,
    pub covector: [C; 3],
}

impl<C: Scalar> NrCotangentPoint<C> {
    pub fn new(base: NrPoint<C>, covector: [C; 3]) -> Result<Self> {
        if base.point.coords[3].vanishes() {
            return Err(Error::OutsideChart(format!("{}3 vanishes", base.chart)));
        }
        Ok(NrCotangentPoint { base, covector })
    }

    pub fn map<D: Scalar, F: Fn(&C) -> D>(&self, f: F) -> NrCotangentPoint<D> {
        NrCotangentPoint {
            base: NrPoint { chart: self.base.chart, point: ProjPoint4 { coords: self.base.point.coords.clone().map(|x| f(&x)) } },
            covector: self.covector.clone().map(|x| f(&x)),
        }
    }
}

fn array3<C: Clone>(v: &[C]) -> [C; 3] {
    [v[0].clone(), v[1].clone(), v[2].clone()]
}

fn inv_or<C: Scalar>(x: &C, what: &str) -> Result<C> {
    x.try_inv().ok_or_else(|| Error::OutsideChart(format!("{what} vanishes")))
}

/// Jacobian of the affine u coordinates with respect to the affine v
/// coordinates at `v = (va, 1)`, together with `u = M v`.
pub fn nr_jacobian<C: Scalar>(m: &Matrix<C>, va: &[C; 3]) -> Result<(Matrix<C>, [C; 4])> {
    let one = va[0].one_like();
    let v = [va[0].clone(), va[1].clone(), va[2].clone(), one];
    let uv = m.apply(&v)?;
    let u = [uv[0].clone(), uv[1].clone(), uv[2].clone(), uv[3].clone()];
    let inv = inv_or(&u[3], "u3")?;
    let inv2 = inv.mul_ref(&inv);
    let k = Matrix::from_fn(3, 3, |i, j| m.get(i, j).mul_ref(&u[3]).sub_ref(&u[i].mul_ref(m.get(3, j))).mul_ref(&inv2));
    Ok((k, u))
}

fn last_one<C: Scalar>(x: &[C; 4], what: &str) -> Result<[C; 4]> {
    let inv = inv_or(&x[3], what)?;
    Ok(x.clone().map(|c| c.mul_ref(&inv)))
}

/// Move a covector between the v and u charts through `u = M v`. The
/// direction follows the chart of `q`. The result is normalized so the last
/// coordinate is 1.
pub fn covector_change_u_v<C: Scalar>(q: &NrCotangentPoint<C>, m: &Matrix<C>) -> Result<NrCotangentPoint<C>> {
    match q.base.chart {
        NrChart::V => {
            let va = q.base.point.affine()?;
            let (k, u) = nr_jacobian(m, &va)?;
            let eta = k.transpose().inverse()?.apply(&q.covector)?;
            NrCotangentPoint::new(NrPoint::u(last_one(&u, "u3")?)?, array3(&eta))
        }
        NrChart::U => {
            let vv = m.inverse()?.apply(&q.base.point.coords)?;
            let v = last_one(&[vv[0].clone(), vv[1].clone(), vv[2].clone(), vv[3].clone()], "v3")?;
            let (k, _) = nr_jacobian(m, &array3(&v))?;
            let mu = k.transpose().apply(&q.covector)?;
            NrCotangentPoint::new(NrPoint::v(v)?, array3(&mu))
        }
    }
}

static CLASSIFY_GRADIENT: Lazy<[[PolyExpr; 3]; 4]> =
    Lazy::new(|| classify_polys().clone().map(|v| ["R", "S", "T"].map(|x| v.derivative(vidx(x)))));

/// Jacobian of `(R, S, T) -> (v0/v3, v1/v3, v2/v3)` and the homogeneous image.
pub fn classify_jacobian<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<(Matrix<C>, [C; 4])> {
    let e = p.bind(env);
    let v = classify_polys().clone().map(|q| e.eval_poly(&q));
    let v = [v[0].clone()?, v[1].clone()?, v[2].clone()?, v[3].clone()?];
    let mut g = Vec::with_capacity(4);
    for row in CLASSIFY_GRADIENT.iter() {
        g.push(row.iter().map(|q| e.eval_poly(q)).collect::<Result<Vec<C>>>()?);
    }
    let inv = inv_or(&v[3], "v3 at the chart point")?;
    let inv2 = inv.mul_ref(&inv);
    let j = Matrix::from_fn(3, 3, |i, k| g[i][k].mul_ref(&v[3]).sub_ref(&v[i].mul_ref(&g[3][k])).mul_ref(&inv2));
    Ok((j, v))
}

/// Pull a v-chart covector back to the chart point `p`, which must lie over
/// its base.
pub fn covector_pullback_at<C: Scalar>(env: &Env<C>, q: &NrCotangentPoint<C>, p: &ChartPoint<C>) -> Result<CotangentPoint<C>> {
    q.base.require_chart(NrChart::V)?;
    let (j, v) = classify_jacobian(env, p)?;
    let image = ProjPoint4 { coords: v };
    if !image.projectively_equal(&q.base.point) {
        return Err(Error::NoPreimage(format!("({p}) does not lie over the base point")));
    }
    if j.det()?.vanishes() {
        return Err(Error::SingularMatrix);
    }
    let c = j.transpose().apply(&q.covector)?;
    Ok(CotangentPoint { base: p.clone(), c: array3(&c) })
}

/// Push a chart covector forward to the v chart; needs an invertible Jacobian.
pub fn covector_pushforward<C: Scalar>(env: &Env<C>, q: &CotangentPoint<C>) -> Result<NrCotangentPoint<C>> {
    let (j, v) = classify_jacobian(env, &q.base)?;
    let mu = j.transpose().inverse()?.apply(&q.c)?;
    NrCotangentPoint::new(NrPoint::v(last_one(&v, "v3")?)?, array3(&mu))
}

/// Pull back to every chart preimage of a rational v-point. Rational
/// preimages come back in the trivial extension, irrational ones in the
/// extension by the discriminant root.
pub fn covector_pullback_to_chart(
    params: &CurveParams,
    q: &NrCotangentPoint<BigRational>,
) -> Result<Vec<CotangentPoint<SqrtExt<BigRational>>>> {
    let fib = fiber(params, &q.base)?;
    let (ctx, points) = match fib.points {
        FiberPoints::Rational(pts) => {
            let ctx = SqrtContext::new(Vec::new())?;
            let lifted = pts.iter().map(|p| p.map(|x| SqrtExt::from_base(&ctx, x.clone()))).collect();
            (ctx, lifted)
        }
        FiberPoints::Quadratic { points, .. } => (points[0].coords[0].context().clone(), points),
    };
    let zero = BigRational::zero();
    let lift = |x: &BigRational| SqrtExt::from_base(&ctx, x.clone());
    let env = params.env(&zero).map(lift(&zero), lift);
    let ql = q.map(lift);
    points.iter().map(|p| covector_pullback_at(&env, &ql, p)).collect()
}

static INVOLUTION_PARTS: Lazy<[(PolyExpr, PolyExpr); 3]> = Lazy::new(|| {
    let (ln, ld) = (poly(INVOLUTION_LAMBDA_TEXT.0), poly(INVOLUTION_LAMBDA_TEXT.1));
    INVOLUTION_TEXT.map(|(n, d)| (ln.mul_ref(&poly(n)), ld.mul_ref(&poly(d))))
});

/// Differential of the Galois involution at `p`, rows indexed by the image
/// coordinate.
pub fn involution_jacobian<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<Matrix<C>> {
    let e = p.bind(env);
    let mut rows = Vec::with_capacity(3);
    for (num, den) in INVOLUTION_PARTS.iter() {
        let n = e.eval_poly(num)?;
        let d = e.eval_poly(den)?;
        let dinv = d.try_inv().ok_or_else(|| Error::Pole("involution denominator".into()))?;
        let dinv2 = dinv.mul_ref(&dinv);
        let mut row = Vec::with_capacity(3);
        for x in ["R", "S", "T"] {
            let dn = e.eval_poly(&num.derivative(vidx(x)))?;
            let dd = e.eval_poly(&den.derivative(vidx(x)))?;
            row.push(dn.mul_ref(&d).sub_ref(&n.mul_ref(&dd)).mul_ref(&dinv2));
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

/// The cotangent lift of the involution: the point goes to its image and the
/// covector is transported by the inverse transpose of the differential.
pub fn galois_covector<C: Scalar>(env: &Env<C>, q: &CotangentPoint<C>) -> Result<CotangentPoint<C>> {
    let image = galois_involution(env, &q.base)?;
    let d = involution_jacobian(env, &q.base)?;
    let c = d.transpose().inverse()?.apply(&q.c)?;
    Ok(CotangentPoint { base: image, c: array3(&c) })
}

/// Numerators of the u-chart table, inside the common factor 1/(4 u3^4), in
/// their literal stored form.
pub const TABLE_U_TEXT: [&str; 3] = [
    "r*s*t*(eta0*(u0^2-u3^2)+eta1*(u0*u1+u2*u3)+eta2*(u0*u2+u1*u3))^2 \
     - s*t*(eta0*(u0*u1-u2*u3)+eta1*(u1^2+u3^2)+eta2*(u0*u3+u1*u2))^2 \
     + 4*r*s*(eta0*u0+eta1*u1)^2*u3^2 \
     - r*t*(eta0*(u0^2+u3^2)+eta1*(u0*u1+u2*u3)+eta2*(u0*u2-u1*u3))^2",
    "t*(u0^2+u1^2+u2^2+u3^2)*((eta0^2+eta1^2+eta2^2)*u3^2+(eta0*u0+eta1*u1+eta2*u2)^2) \
     + s*t*(u0^2-u1^2+u2^2-u3^2)*((eta0^2-eta1^2+eta2^2)*u3^2-(eta0*u0+eta1*u1+eta2*u2)^2) \
     + 4*r*(u0*u2-u1*u3)*u3*(eta0*eta2*u3+(eta0*u0+eta1*u1+eta2*u2)*eta1) \
     + 4*s*r*(u0*u2+u1*u3)*u3*(eta0*eta2*u3-(eta0*u0+eta1*u1+eta2*u2)*eta1) \
     + 4*s*(u0*u3+u1*u2)*u3*(eta1*eta2*u3-(eta0*u0+eta1*u1+eta2*u2)*eta0) \
     + 4*r*t*(u0*u1+u2*u3)*u3*(eta0*eta1*u3-(eta0*u0+eta1*u1+eta2*u2)*eta2)",
    "s*(eta0*(u0*u2+u1*u3)+eta1*(u0*u3+u1*u2)+eta2*(u2^2-u3^2))^2 \
     - (eta0*(u0*u2-u1*u3)+eta1*(u0*u3+u1*u2)+eta2*(u2^2+u3^2))^2 \
     - t*(eta0*(u0*u1+u3*u3)-eta2*(u0*u3-u1*u2)+eta1*(u2^2+u3^2))^2 \
     + 4*r*(eta1*u1+eta2*u2)^2*u3^2",
];

/// The third square of h2 with u2*u3 and u1^2 in place of u3*u3 and u2^2.
pub const TABLE_U_H2_FIXED: &str = "s*(eta0*(u0*u2+u1*u3)+eta1*(u0*u3+u1*u2)+eta2*(u2^2-u3^2))^2 \
     - (eta0*(u0*u2-u1*u3)+eta1*(u0*u3+u1*u2)+eta2*(u2^2+u3^2))^2 \
     - t*(eta0*(u0*u1+u2*u3)-eta2*(u0*u3-u1*u2)+eta1*(u1^2+u3^2))^2 \
     + 4*r*(eta1*u1+eta2*u2)^2*u3^2";

pub const TABLE_U_DENOMINATOR: &str = "4*u3^4";

/// Which u-chart formulas to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum USource {
    /// The literal stored table.
    Literal,
    /// The literal table with the h2 fix applied.
    Corrected,
    /// Interpolated from the chart path; the shipped formulas.
    Derived,
}

static TABLE_U: Lazy<[PolyExpr; 3]> = Lazy::new(|| TABLE_U_TEXT.map(poly));
static TABLE_U_FIXED: Lazy<[PolyExpr; 3]> =
    Lazy::new(|| [poly(TABLE_U_TEXT[0]), poly(TABLE_U_TEXT[1]), poly(TABLE_U_H2_FIXED)]);
static DERIVED_U: Lazy<Result<DerivedTable>> = Lazy::new(|| derive_u_table(&DerivationConfig::default()));

/// The table derived with the default configuration, computed once.
pub fn derived_u_table() -> Result<&'static DerivedTable> {
    DERIVED_U.as_ref().map_err(Clone::clone)
}

/// Numerators N_i with h_i = N_i / (4 u3^4).
pub fn u_table_numerators(source: USource) -> Result<&'static [PolyExpr; 3]> {
    Ok(match source {
        USource::Literal => &TABLE_U,
        USource::Corrected => &TABLE_U_FIXED,
        USource::Derived => &DERIVED_U.as_ref().map_err(Clone::clone)?.numerators,
    })
}

/// `h_i = N_i / (4 u3^4)` as rational functions.
pub fn hamiltonians_u_rat(source: USource) -> Result<[RatExpr; 3]> {
    let den = poly(TABLE_U_DENOMINATOR);
    let n = u_table_numerators(source)?;
    Ok([
        RatExpr::new(n[0].clone(), den.clone())?,
        RatExpr::new(n[1].clone(), den.clone())?,
        RatExpr::new(n[2].clone(), den)?,
    ])
}

/// Evaluate the u-chart formulas at `q`; `env` binds r, s, t.
pub fn hamiltonians_u<C: Scalar>(env: &Env<C>, q: &NrCotangentPoint<C>, source: USource) -> Result<HamiltonianTriple<C>> {
    q.base.require_chart(NrChart::U)?;
    let nums = match source {
        USource::Derived => Some(u_table_numerators(source)?),
        _ => None,
    };
    let mut e = env.clone();
    for (i, x) in q.base.point.coords.iter().enumerate() {
        e.set(&format!("u{i}"), x.clone());
    }
    for (i, x) in q.covector.iter().enumerate() {
        e.set(&format!("eta{i}"), x.clone());
    }
    let den = e.eval(TABLE_U_DENOMINATOR)?;
    let inv = inv_or(&den, "u3")?;
    // the factored text is much cheaper to evaluate than its expansion
    let texts = match source {
        USource::Literal => Some(TABLE_U_TEXT),
        USource::Corrected => Some([TABLE_U_TEXT[0], TABLE_U_TEXT[1], TABLE_U_H2_FIXED]),
        USource::Derived => None,
    };
    let mut h = Vec::with_capacity(3);
    for i in 0..3 {
        let n = match texts {
            Some(t) => e.eval(t[i])?,
            None => e.eval_poly(&nums.expect("derived numerators")[i])?,
        };
        h.push(n.mul_ref(&inv));
    }
    Ok(HamiltonianTriple { h: array3(&h) })
}

/// Chart-path values at both preimages of the base point, in the extension
/// by the fiber discriminant root d. `m` is the nice-basis matrix over the
/// ring of `env`. The second preimage is the d-conjugate of the first and
/// every other input is free of d, so its values are the conjugates of the
/// first.
pub fn hamiltonians_u_oracle_pair<C: Scalar>(
    env: &Env<C>,
    m: &Matrix<C>,
    q: &NrCotangentPoint<C>,
) -> Result<[HamiltonianTriple<SqrtExt<C>>; 2]> {
    q.base.require_chart(NrChart::U)?;
    let qv = covector_change_u_v(q, m)?;
    let (ctx, pts) = fiber_formal(env, &qv.base.point.coords)?;
    let lift = |x: &C| SqrtExt::from_base(&ctx, x.clone());
    let lenv = env.map(lift(&env.template().zero_like()), lift);
    let lq = qv.map(lift);
    let cot = covector_pullback_at(&lenv, &lq, &pts[0])?;
    let first = hamiltonians_from_field(&lenv, &cot)?;
    let mut conj = Vec::with_capacity(3);
    for x in &first.h {
        conj.push(x.conjugate(SqrtGen::Disc)?);
    }
    Ok([first, HamiltonianTriple { h: array3(&conj) }])
}

/// Ground-truth u-chart values: both preimages must agree and the result must
/// not involve the discriminant root.
pub fn hamiltonians_u_oracle<C: Scalar>(env: &Env<C>, m: &Matrix<C>, q: &NrCotangentPoint<C>) -> Result<HamiltonianTriple<C>> {
    let [a, b] = hamiltonians_u_oracle_pair(env, m, q)?;
    if a != b {
        return Err(Error::Derivation("the two chart preimages give different Hamiltonians".into()));
    }
    let mut h = Vec::with_capacity(3);
    for x in &a.h {
        h.push(x.base_value().cloned().ok_or_else(|| Error::Derivation("Hamiltonian depends on the fiber root".into()))?);
    }
    Ok(HamiltonianTriple { h: array3(&h) })
}

/// The nice-basis matrix at numeric parameters with formal omegas.
pub fn numeric_nice_basis(params: &CurveParams) -> Result<(Env<SqrtExt<BigRational>>, Matrix<SqrtExt<BigRational>>)> {
    let env = params.env(&BigRational::zero());
    let ctx = omega_context(&env)?;
    let oenv = omega_env(&env, &ctx)?;
    let m = nice_basis_matrix(&oenv, NiceBasis::Corrected)?;
    Ok((oenv, m))
}

/// Interpolation settings for the u-chart derivation.
#[derive(Clone, Debug)]
pub struct DerivationConfig {
    pub max_degree: usize,
    pub seed: u64,
    pub checks_per_node: usize,
}

impl Default for DerivationConfig {
    fn default() -> Self {
        DerivationConfig { max_degree: 5, seed: 20240611, checks_per_node: 3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivedTable {
    pub numerators: [PolyExpr; 3],
    /// Total degree in (r, s, t) that reproduced the chart path.
    pub degree: usize,
}

const R_NODES: [i64; 6] = [2, 3, 4, 5, 6, 8];
const S_NODES: [i64; 6] = [7, 11, 13, 17, 19, 23];
const T_NODES: [i64; 6] = [-2, -3, -5, -7, -11, -13];
const CHECK_NODES: [(&str, &str, &str); 2] = [("9/2", "-7/3", "31"), ("-5", "13/4", "2/7")];
const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn quartic_exponents() -> Vec<[u16; 4]> {
    let mut out = Vec::new();
    for a in (0..=4u16).rev() {
        for b in (0..=4 - a).rev() {
            for c in (0..=4 - a - b).rev() {
                out.push([a, b, c, 4 - a - b - c]);
            }
        }
    }
    out
}

fn lower_set(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for total in 0..=d {
        for i in (0..=total).rev() {
            for j in (0..=total - i).rev() {
                out.push([i, j, total - i - j]);
            }
        }
    }
    out
}

/// One chart-path sample at numeric parameters: `u = M v` with `v` the image
/// of the chart point `p`, and the 3x3 matrices Q_i with h_i = eta^T Q_i eta.
struct PathSample {
    u: [SqrtExt<BigRational>; 4],
    q: [Matrix<SqrtExt<BigRational>>; 3],
}

fn path_sample(
    params: &CurveParams,
    oenv: &Env<SqrtExt<BigRational>>,
    m: &Matrix<SqrtExt<BigRational>>,
    p: &ChartPoint<BigRational>,
) -> Result<PathSample> {
    let env = params.env(&BigRational::zero());
    let (j, v) = classify_jacobian(&env, p)?;
    if j.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let va = last_one(&v, "v3")?;
    let t = oenv.template();
    let lift = |x: &BigRational| t.embed(x);
    let (k, u) = nr_jacobian(m, &[lift(&va[0]), lift(&va[1]), lift(&va[2])])?;
    let forms = forms_at(&env, p)?;
    let mut q = Vec::with_capacity(3);
    for h in &forms {
        let g = j.mul(h)?.mul(&j.transpose())?.map(lift);
        q.push(k.mul(&g)?.mul(&k.transpose())?);
    }
    Ok(PathSample { u, q: [q[0].clone(), q[1].clone(), q[2].clone()] })
}

fn mono_value<C: Scalar>(u: &[C; 4], e: &[u16; 4]) -> C {
    (0..4).fold(u[0].one_like(), |acc, i| acc.mul_ref(&u[i].pow_u(e[i] as u32)))
}

/// Coefficients of 4 u3^4 Q_i[j][k] as quartic forms in u at one parameter
/// value: a 35 x 18 matrix, columns ordered (i, pair).
fn fit_node(params: &CurveParams, sampler: &mut Sampler) -> Result<Vec<Vec<BigRational>>> {
    let (oenv, m) = numeric_nice_basis(params)?;
    let exps = quartic_exponents();
    let mut rows_a: Vec<Vec<BigRational>> = Vec::new();
    let mut rows_b: Vec<Vec<BigRational>> = Vec::new();
    let mut attempts = 0;
    while rows_a.is_empty() || rank(&rows_a) < exps.len() {
        attempts += 1;
        if attempts > 64 {
            return Err(Error::Derivation(format!("no full-rank sample set at {params}")));
        }
        let p = sampler.chart_point();
        let Ok(s) = path_sample(params, &oenv, &m, &p) else { continue };
        let monos: Vec<_> = exps.iter().map(|e| mono_value(&s.u, e)).collect();
        let scale = s.u[3].pow_u(4).mul_ref(&s.u[3].embed_int(4));
        let targets: Vec<_> =
            (0..3).flat_map(|i| PAIRS.iter().map(move |&(j, k)| (i, j, k))).map(|(i, j, k)| s.q[i].get(j, k).mul_ref(&scale)).collect();
        for comp in 0..monos[0].coeffs().len() {
            rows_a.push(monos.iter().map(|x| x.coeff(comp).clone()).collect());
            rows_b.push(targets.iter().map(|x| x.coeff(comp).clone()).collect());
        }
    }
    solve_exact(&rows_a, &rows_b)
}

fn node_params(n: &[usize; 3]) -> Result<CurveParams> {
    CurveParams::from_ints(R_NODES[n[0]], S_NODES[n[1]], T_NODES[n[2]])
}

fn assemble(exps: &[[u16; 4]], rst: &[[usize; 3]], coeffs: &[Vec<BigRational>]) -> [PolyExpr; 3] {
    let uni = VarUniverse::standard();
    let uidx = ["u0", "u1", "u2", "u3"].map(vidx);
    let eidx = ["eta0", "eta1", "eta2"].map(vidx);
    let pidx = ["r", "s", "t"].map(vidx);
    let ncols = exps.len() * 18;
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let mut terms = Vec::new();
        for (pi, &(j, k)) in PAIRS.iter().enumerate() {
            let mult = if j == k { BigRational::one() } else { BigRational::from_integer(2.into()) };
            for (a, e) in exps.iter().enumerate() {
                let col = a * 18 + i * 6 + pi;
                debug_assert!(col < ncols);
                for (b, d) in rst.iter().enumerate() {
                    let c = &coeffs[b][col];
                    if c.is_zero() {
                        continue;
                    }
                    let mut ex = vec![0u16; uni.len()];
                    for q in 0..4 {
                        ex[uidx[q]] += e[q];
                    }
                    ex[eidx[j]] += 1;
                    ex[eidx[k]] += 1;
                    for q in 0..3 {
                        ex[pidx[q]] += d[q] as u16;
                    }
                    terms.push((Monomial::from_exps(ex), c * &mult));
                }
            }
        }
        out.push(PolyExpr::from_terms(&uni, terms));
    }
    [out[0].clone(), out[1].clone(), out[2].clone()]
}

fn check_numerators(nums: &[PolyExpr; 3], sampler: &mut Sampler, per_node: usize) -> Result<bool> {
    for (r, s, t) in CHECK_NODES {
        let params = CurveParams::parse(r, s, t)?;
        let (oenv, m) = numeric_nice_basis(&params)?;
        let mut done = 0;
        let mut attempts = 0;
        while done < per_node {
            attempts += 1;
            if attempts > 64 {
                return Err(Error::Derivation(format!("no usable check sample at {params}")));
            }
            let p = sampler.chart_point();
            let Ok(s) = path_sample(&params, &oenv, &m, &p) else { continue };
            let eta: [BigRational; 3] = sampler.rationals();
            let eta = eta.map(|x| oenv.template().embed(&x));
            let q = NrCotangentPoint::new(NrPoint::u(s.u.clone())?, eta.clone())?;
            let mut e = oenv.clone();
            for (i, x) in q.base.point.coords.iter().enumerate() {
                e.set(&format!("u{i}"), x.clone());
            }
            for (i, x) in eta.iter().enumerate() {
                e.set(&format!("eta{i}"), x.clone());
            }
            let scale = e.eval(TABLE_U_DENOMINATOR)?;
            for i in 0..3 {
                let want = crate::higgs::apply_form(&s.q[i], &eta)?.mul_ref(&scale);
                if e.eval_poly(&nums[i])? != want {
                    return Ok(false);
                }
            }
            done += 1;
        }
    }
    Ok(true)
}

/// Recover the u-chart numerators from the chart path alone: fit quartic
/// forms in u at a grid of numeric parameters, interpolate in (r, s, t) on a
/// lower-set grid of rising degree, and accept the first degree that
/// reproduces the chart path at parameters off the grid.
pub fn derive_u_table(cfg: &DerivationConfig) -> Result<DerivedTable> {
    let exps = quartic_exponents();
    let mut sampler = Sampler::new(cfg.seed);
    let mut fits: HashMap<[usize; 3], Vec<Vec<BigRational>>> = HashMap::new();
    for d in 0..=cfg.max_degree.min(R_NODES.len() - 1) {
        let nodes = lower_set(d);
        for n in &nodes {
            if !fits.contains_key(n) {
                let params = node_params(n)?;
                fits.insert(*n, fit_node(&params, &mut sampler)?);
            }
        }
        let vander: Vec<Vec<BigRational>> = nodes
            .iter()
            .map(|n| {
                let vals = [R_NODES[n[0]], S_NODES[n[1]], T_NODES[n[2]]].map(|x| BigRational::from_integer(x.into()));
                nodes.iter().map(|e| (0..3).fold(BigRational::one(), |acc, q| acc * num_traits::pow(vals[q].clone(), e[q]))).collect()
            })
            .collect();
        let rhs: Vec<Vec<BigRational>> = nodes.iter().map(|n| fits[n].iter().flatten().cloned().collect()).collect();
        let coeffs = solve_exact(&vander, &rhs)?;
        let nums = assemble(&exps, &nodes, &coeffs);
        if check_numerators(&nums, &mut sampler, cfg.checks_per_node)? {
            return Ok(DerivedTable { numerators: nums, degree: d });
        }
    }
    Err(Error::Derivation(format!("no interpolant of degree <= {} reproduces the chart path", cfg.max_degree)))
}

/// One monomial on which two numerators disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermDiff {
    pub hamiltonian: String,
    pub monomial: String,
    pub table: String,
    pub derived: String,
}

/// Every monomial whose coefficient differs between `table` and `derived`.
pub fn term_diff(table: &[PolyExpr; 3], derived: &[PolyExpr; 3]) -> Vec<TermDiff> {
    let mut out = Vec::new();
    for i in 0..3 {
        let diff = table[i].sub_ref(&derived[i]);
        for (m, _) in diff.terms().rev() {
            out.push(TermDiff {
                hamiltonian: format!("h{i}"),
                monomial: PolyExpr::monomial(diff.universe(), m.clone(), BigRational::one()).to_string(),
                table: format_rational(&table[i].coeff(m)),
                derived: format_rational(&derived[i].coeff(m)),
            });
        }
    }
    out
}

/// Weierstrass x-values and prefactors of H1..H5; H6 is identically zero.
pub const VGP_TEXT: [(&str, &str); 5] = [
    ("0", "4/(r*s*t)"),
    ("t", "-4/(t*(t-1)*(t-r)*(t-s))"),
    ("1", "4/((r-1)*(s-1)*(t-1))"),
    ("s", "4/(s*(s-1)*(s-r)*(s-t))"),
    ("r", "4/(r*(r-1)*(r-s)*(r-t))"),
];

fn vgp_nodes<C: Scalar>(env: &Env<C>) -> Result<Vec<(C, C)>> {
    VGP_TEXT
        .iter()
        .map(|(x, f)| {
            let factor = env.eval(f).map_err(|e| match e {
                Error::DivisionByZero => Error::NonGenericParams(format!("prefactor {f} has a vanishing denominator")),
                e => e,
            })?;
            Ok((env.eval(x)?, factor))
        })
        .collect()
}

/// (H1, ..., H6) from h0, h1, h2; `env` binds r, s, t.
pub fn vgp_hamiltonians<C: Scalar>(env: &Env<C>, h: &HamiltonianTriple<C>) -> Result<[C; 6]> {
    let nodes = vgp_nodes(env)?;
    let mut out: Vec<C> = nodes.iter().map(|(x, f)| f.mul_ref(&h.at(x))).collect();
    out.push(env.template().zero_like());
    Ok(std::array::from_fn(|i| out[i].clone()))
}

/// The 5 x 3 matrix taking (h0, h1, h2) to (H1, ..., H5).
pub fn vgp_matrix<C: Scalar>(env: &Env<C>) -> Result<Matrix<C>> {
    let nodes = vgp_nodes(env)?;
    Ok(Matrix::from_fn(5, 3, |k, j| nodes[k].1.mul_ref(&nodes[k].0.pow_u(j as u32))))
}

static VGP_UNIVERSE: Lazy<Arc<VarUniverse>> =
    Lazy::new(|| VarUniverse::new(["r", "s", "t", "h0", "h1", "h2"]).expect("distinct names"));

/// H1..H6 as rational functions of (r, s, t, h0, h1, h2).
pub fn vgp_symbolic() -> Result<[RatExpr; 6]> {
    let uni = &*VGP_UNIVERSE;
    let var = |n: &str| RatExpr::var(uni, n);
    let env = Env::new(RatExpr::zero(uni)).with("r", var("r")?).with("s", var("s")?).with("t", var("t")?);
    let h = HamiltonianTriple { h: [var("h0")?, var("h1")?, var("h2")?] };
    vgp_hamiltonians(&env, &h)
}
