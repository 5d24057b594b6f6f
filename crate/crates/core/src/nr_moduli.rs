//! Coordinates on P^3 = M_NR: theta-basis functions, the Kummer quartic in
//! both coordinate systems, twist matrices and the change to nice coordinates.

use std::fmt;
use std::sync::Arc;

use once_cell::sync::Lazy;

use crate::algebra::{Matrix, PolyExpr, ProjPoint4, RatExpr, Scalar, SqrtContext, SqrtExt, SqrtGen};
use crate::curve::{curve_at, curve_derivative_at, TorsionElement, WeierstrassLabel};
use crate::error::{Error, Result};
use crate::formula::{poly, poly_env, rat_env, var, Env};

pub const DIAG_TEXT: &str = "((y2-y1)/(x2-x1))^2 - (x1+x2)^3 + (1+r+s+t)*(x1+x2)^2 \
     + x1*x2*(x1+x2) - (r+s+t+r*s+s*t+t*r)*(x1+x2)";

pub const KUMMER_V_TEXT: &str = "(v0*v2-v1^2)^2 \
    - 2*(((sigma1+sigma2)*v1+(sigma2+sigma3)*v2)*(v0*v2-v1^2) \
         + 2*(v0+sigma1*v1)*(v0+v1)*v1 + 2*(sigma2*v1+sigma3*v2)*(v1+v2)*v1)*v3 \
    + (-2*sigma3*(v0*v2-v1^2) + ((sigma1+sigma2)^2*v1+(sigma2+sigma3)^2*v2)*(v1+v2) \
         - (sigma1+sigma3)^2*v1*v2 + 4*((sigma2+sigma3)*v0-sigma3*v2)*v1)*v3^2 \
    - 2*sigma3*((sigma1+sigma2)*v1-(sigma2+sigma3)*v2)*v3^3 \
    + sigma3^2*v3^4";

pub const KUMMER_U_TEXT: &str = "(u0^4+u1^4+u2^4+u3^4) \
    - 8*(r*s-r*t+r-s)/(t*(s-1))*u0*u1*u2*u3 \
    - 2*(s*t+t-2*s)/(t*(s-1))*(u0^2*u3^2+u1^2*u2^2) \
    - 2*(2*r-t)/t*(u1^2*u3^2+u0^2*u2^2) \
    + 2*(2*r-s-1)/(s-1)*(u2^2*u3^2+u0^2*u1^2)";

const SIGMA_TEXTS: [(&str, &str); 3] = [("sigma1", "r+s+t"), ("sigma2", "r*s+s*t+r*t"), ("sigma3", "r*s*t")];

/// Twist matrices of the generators `[w]-[winf]` for w = w0, w1, wr, ws.
pub const TORSION_V_TEXT: [[[&str; 4]; 4]; 4] = [
    [
        ["0", "r*s+s*t+r*t+r*s*t", "r*s*t", "0"],
        ["0", "0", "0", "r*s*t"],
        ["1", "0", "0", "-(r*s+s*t+r*t+r*s*t)"],
        ["0", "1", "0", "0"],
    ],
    [
        ["1", "r+s+t+r*s*t", "r*s+s*t+r*t", "0"],
        ["-1", "-1", "0", "r*s+s*t+r*t"],
        ["1", "0", "-1", "-(r+s+t+r*s*t)"],
        ["0", "1", "1", "1"],
    ],
    [
        ["r^2", "r^2*(1+s+t)+s*t", "r^2*(s+t+s*t)", "0"],
        ["-r", "-r^2", "0", "r^2*(s+t+s*t)"],
        ["1", "0", "-r^2", "-r^2*(1+s+t)-s*t"],
        ["0", "1", "r", "r^2"],
    ],
    [
        ["s^2", "s^2*(1+r+t)+r*t", "s^2*(r+t+r*t)", "0"],
        ["-s", "-s^2", "0", "s^2*(r+t+r*t)"],
        ["1", "0", "-s^2", "-s^2*(1+r+t)-r*t"],
        ["0", "1", "s", "s^2"],
    ],
];

/// Regular-representation matrices for the same generators.
pub const TORSION_U: [[[i64; 4]; 4]; 4] = [
    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]],
];

pub const NICE_A_TEXT: [(&str, &str); 4] = [
    ("a", "r*s*t*(r-s)*w1 + t*wr*ws - r*t*(r-1)*ws - s*t*w1*wr"),
    ("b", "-s*t*(s-1)*wr + r*t*w1*ws"),
    ("c", "t*(r-s)*w0*w1 - t*(r-1)*w0*ws"),
    ("d", "-t*(r-1)*(s-1)*(r-s)*w0 + t*(s-1)*w0*wr"),
];

const NICE_A_SHAPE: [[&str; 4]; 4] =
    [["a", "b", "c", "d"], ["-b", "a", "d", "-c"], ["c", "d", "a", "b"], ["d", "-c", "-b", "a"]];

/// Right factor of the nice-basis matrix, entry (0,3) left open.
const NICE_B_SHAPE: [[&str; 4]; 4] =
    [["1", "1", "0", "B03"], ["0", "w1", "0", "0"], ["0", "w0", "w0", "w0"], ["0", "0", "0", "w0*w1"]];

/// Which entry (0,3) to use in the right factor of the nice-basis matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceBasis {
    /// `-(rs+st+rt)`: conjugates every twist generator to its regular form.
    Corrected,
    /// `-w0`, the literal stored entry; fails the conjugation check.
    Literal,
}

impl NiceBasis {
    fn b03(self) -> &'static str {
        match self {
            NiceBasis::Corrected => "-(r*s+s*t+r*t)",
            NiceBasis::Literal => "-w0",
        }
    }
}

/// Which coordinate system a point of P^3 is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NrChart {
    V,
    U,
}

impl fmt::Display for NrChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NrChart::V => "v",
            NrChart::U => "u",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NrPoint<C> {
    pub chart: NrChart,
    pub point: ProjPoint4<C>,
}

impl<C: Scalar> NrPoint<C> {
    pub fn v(coords: [C; 4]) -> Result<Self> {
        Ok(NrPoint { chart: NrChart::V, point: ProjPoint4::new(coords)? })
    }

    pub fn u(coords: [C; 4]) -> Result<Self> {
        Ok(NrPoint { chart: NrChart::U, point: ProjPoint4::new(coords)? })
    }

    pub fn require_chart(&self, chart: NrChart) -> Result<()> {
        if self.chart == chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch { expected: chart.to_string(), found: self.chart.to_string() })
        }
    }
}

/// A point (x, y) of the curve with coordinates in some ring.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint<C> {
    pub x: C,
    pub y: C,
}

/// `(1, Sum, Prod, Diag)` at a pair of curve points. `env` binds r, s, t.
pub fn theta_basis<C: Scalar>(env: &Env<C>, p1: &CurvePoint<C>, p2: &CurvePoint<C>) -> Result<[C; 4]> {
    let e = env.clone().with("x1", p1.x.clone()).with("y1", p1.y.clone()).with("x2", p2.x.clone()).with("y2", p2.y.clone());
    let sum = e.eval("x1+x2")?;
    let prod = e.eval("x1*x2")?;
    if p2.x.sub_ref(&p1.x).try_inv().is_none() {
        return Err(Error::Pole("x2 - x1 in Diag".into()));
    }
    let diag = e.eval(DIAG_TEXT)?;
    Ok([env.template().one_like(), sum, prod, diag])
}

/// `(-Diag : Prod : -Sum : 1)`, the point of the decomposable bundle L + L^-1.
pub fn decomposable_point<C: Scalar>(env: &Env<C>, q1: &CurvePoint<C>, q2: &CurvePoint<C>) -> Result<NrPoint<C>> {
    let [one, sum, prod, diag] = theta_basis(env, q1, q2)?;
    NrPoint::v([diag.neg_ref(), prod, sum.neg_ref(), one])
}

fn with_sigmas<C: Scalar>(env: &Env<C>) -> Result<Env<C>> {
    let mut e = env.clone();
    for (name, text) in SIGMA_TEXTS {
        let v = env.eval(text)?;
        e.set(name, v);
    }
    Ok(e)
}

fn bind_coords<C: Scalar>(env: &Env<C>, prefix: &str, coords: &[C]) -> Env<C> {
    let mut e = env.clone();
    for (i, c) in coords.iter().enumerate() {
        e.set(&format!("{prefix}{i}"), c.clone());
    }
    e
}

/// The Kummer quartic in v-coordinates evaluated at `p`.
pub fn kummer_quartic_v<C: Scalar>(env: &Env<C>, p: &NrPoint<C>) -> Result<C> {
    p.require_chart(NrChart::V)?;
    kummer_v_at(env, &p.point.coords)
}

pub fn kummer_v_at<C: Scalar>(env: &Env<C>, v: &[C; 4]) -> Result<C> {
    with_sigmas(&bind_coords(env, "v", v))?.eval(KUMMER_V_TEXT)
}

/// The Kummer quartic in u-coordinates; needs t != 0 and s != 1.
pub fn kummer_quartic_u<C: Scalar>(env: &Env<C>, p: &NrPoint<C>) -> Result<C> {
    p.require_chart(NrChart::U)?;
    kummer_u_at(env, &p.point.coords)
}

pub fn kummer_u_at<C: Scalar>(env: &Env<C>, u: &[C; 4]) -> Result<C> {
    bind_coords(env, "u", u).eval(KUMMER_U_TEXT)
}

static KUMMER_V_POLY: Lazy<PolyExpr> =
    Lazy::new(|| with_sigmas(poly_env()).and_then(|e| e.eval(KUMMER_V_TEXT)).expect("built-in quartic"));

static KUMMER_U_RAT: Lazy<RatExpr> = Lazy::new(|| rat_env().eval(KUMMER_U_TEXT).expect("built-in quartic"));

/// Kummer quartic as a polynomial in v0..v3, r, s, t.
pub fn kummer_v_poly() -> &'static PolyExpr {
    &KUMMER_V_POLY
}

/// Kummer quartic in u0..u3 with coefficients in Q(r, s, t).
pub fn kummer_u_rat() -> &'static RatExpr {
    &KUMMER_U_RAT
}

/// Gradient of the v-quartic with respect to v0..v3.
pub fn kummer_v_gradient() -> [PolyExpr; 4] {
    ["v0", "v1", "v2", "v3"].map(|n| KUMMER_V_POLY.derivative(crate::formula::vidx(n)))
}

fn generator_index(tau: TorsionElement) -> Option<usize> {
    TorsionElement::basis().iter().position(|g| *g == tau)
}

/// Displayed twist matrix of a basis generator, evaluated in `env`.
pub fn torsion_generator_v<C: Scalar>(env: &Env<C>, k: usize) -> Result<Matrix<C>> {
    let rows = TORSION_V_TEXT
        .get(k)
        .ok_or_else(|| Error::Dimension(format!("generator index {k}")))?
        .iter()
        .map(|row| row.iter().map(|e| env.eval(e)).collect::<Result<Vec<C>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn torsion_generator_u<C: Scalar>(template: &C, k: usize) -> Result<Matrix<C>> {
    let g = TORSION_U.get(k).ok_or_else(|| Error::Dimension(format!("generator index {k}")))?;
    Ok(Matrix::from_fn(4, 4, |i, j| template.embed_int(g[i][j])))
}

fn ordered_product<C: Scalar, F>(tau: TorsionElement, template: &C, mut gen: F) -> Result<Matrix<C>>
where
    F: FnMut(usize) -> Result<Matrix<C>>,
{
    let mut acc = Matrix::identity_like(4, template);
    for (k, used) in tau.decompose().iter().enumerate() {
        if *used {
            acc = acc.mul(&gen(k)?)?;
        }
    }
    Ok(acc)
}

/// Representative of the projective twist class of `tau` in v-coordinates:
/// the displayed matrix for a generator, else the ordered product of the
/// generators in its decomposition.
pub fn torsion_matrix_v<C: Scalar>(env: &Env<C>, tau: TorsionElement) -> Result<Matrix<C>> {
    if let Some(k) = generator_index(tau) {
        return torsion_generator_v(env, k);
    }
    ordered_product(tau, env.template(), |k| torsion_generator_v(env, k))
}

pub fn torsion_matrix_u<C: Scalar>(template: &C, tau: TorsionElement) -> Result<Matrix<C>> {
    ordered_product(tau, template, |k| torsion_generator_u(template, k))
}

/// Images of the trivial bundle (1:0:0:0) under all sixteen twists.
pub fn torsion_orbit_singular_points<C: Scalar>(env: &Env<C>) -> Result<Vec<(TorsionElement, NrPoint<C>)>> {
    let t = env.template();
    let e0 = [t.one_like(), t.zero_like(), t.zero_like(), t.zero_like()];
    TorsionElement::all()
        .into_iter()
        .map(|tau| {
            let m = torsion_matrix_v(env, tau)?;
            let img = m.apply(&e0)?;
            Ok((tau, NrPoint::v([img[0].clone(), img[1].clone(), img[2].clone(), img[3].clone()])?))
        })
        .collect()
}

/// The square-root context w0, w1, wr, ws with radicands F'(0), -F'(1), F'(r), F'(s).
pub fn omega_context<C: Scalar>(env: &Env<C>) -> Result<Arc<SqrtContext<C>>> {
    let rad = |at: PolyExpr, sign: i64| -> Result<C> {
        let p = curve_derivative_at(&at).scale(&crate::algebra::int(sign));
        env.eval_poly(&p)
    };
    SqrtContext::new(vec![
        (SqrtGen::Omega0, rad(poly("0"), 1)?),
        (SqrtGen::Omega1, rad(poly("1"), -1)?),
        (SqrtGen::OmegaR, rad(var("r"), 1)?),
        (SqrtGen::OmegaS, rad(var("s"), 1)?),
    ])
}

/// Lift an environment into the extension and bind w0, w1, wr, ws.
pub fn omega_env<C: Scalar>(env: &Env<C>, ctx: &Arc<SqrtContext<C>>) -> Result<Env<SqrtExt<C>>> {
    let t = env.template();
    let zero = SqrtExt::from_base(ctx, t.zero_like());
    let mut e = env.map(zero, |c| SqrtExt::from_base(ctx, c.clone()));
    for (name, g) in [("w0", SqrtGen::Omega0), ("w1", SqrtGen::Omega1), ("wr", SqrtGen::OmegaR), ("ws", SqrtGen::OmegaS)] {
        e.set(name, SqrtExt::generator(ctx, g, t)?);
    }
    Ok(e)
}

/// The change of basis u = M v, computed as the product of the (a,b,c,d)
/// block matrix and the w-matrix.
pub fn nice_basis_matrix<C: Scalar>(omega: &Env<SqrtExt<C>>, variant: NiceBasis) -> Result<Matrix<SqrtExt<C>>> {
    let mut e = omega.clone();
    for (name, text) in NICE_A_TEXT {
        let v = omega.eval(text)?;
        e.set(name, v);
    }
    e.set("B03", omega.eval(variant.b03())?);
    let build = |shape: &[[&str; 4]; 4]| -> Result<Matrix<SqrtExt<C>>> {
        let rows = shape
            .iter()
            .map(|row| row.iter().map(|x| e.eval(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    };
    build(&NICE_A_SHAPE)?.mul(&build(&NICE_B_SHAPE)?)
}

/// `lambda` with `M * M_tau = lambda * Mtilde_tau * M`, if the classes agree.
pub fn conjugation_factor<C: Scalar>(
    m: &Matrix<SqrtExt<C>>,
    omega: &Env<SqrtExt<C>>,
    tau: TorsionElement,
) -> Result<Option<SqrtExt<C>>> {
    let mv = torsion_matrix_v(omega, tau)?;
    let mu = torsion_matrix_u(omega.template(), tau)?;
    let lhs = m.mul(&mv)?;
    let rhs = mu.mul(m)?;
    Ok(lhs.monomial_ratio_to(&rhs))
}

/// Transport a v-point to u-coordinates.
pub fn to_u_chart<C: Scalar>(m: &Matrix<C>, p: &NrPoint<C>) -> Result<NrPoint<C>> {
    p.require_chart(NrChart::V)?;
    Ok(NrPoint { chart: NrChart::U, point: p.point.transform(m)? })
}

pub fn weierstrass_point<C: Scalar>(env: &Env<C>, w: WeierstrassLabel) -> Result<CurvePoint<C>> {
    let x = w
        .x_coordinate()
        .ok_or_else(|| Error::OutsideChart("w-infinity has no affine x-coordinate".into()))?;
    Ok(CurvePoint { x: env.eval_poly(&x)?, y: env.template().zero_like() })
}

/// The v-quartic at the decomposable point of a pair of generic curve points
/// (x1, y1), (x2, y2), with y1, y2 formal roots of F(x1), F(x2). Computed
/// over Q(r, s, t, x1, x2), cleared of the (x2 - x1)^2 denominator and then
/// evaluated over polynomials; the identity holds iff the result vanishes.
pub fn parametrized_kummer_residual() -> Result<SqrtExt<PolyExpr>> {
    let env = rat_env();
    let x1 = var("x1");
    let x2 = var("x2");
    let uni = x1.universe().clone();
    let ctx = SqrtContext::new(vec![
        (SqrtGen::Y1, RatExpr::from_poly(curve_at(&x1))),
        (SqrtGen::Y2, RatExpr::from_poly(curve_at(&x2))),
    ])?;
    let zero = RatExpr::zero(&uni);
    let lift = |q: &RatExpr| SqrtExt::from_base(&ctx, q.clone());
    let ext = env.map(lift(&zero), lift);
    let q1 = CurvePoint { x: ext.eval("x1")?, y: SqrtExt::generator(&ctx, SqrtGen::Y1, &zero)? };
    let q2 = CurvePoint { x: ext.eval("x2")?, y: SqrtExt::generator(&ctx, SqrtGen::Y2, &zero)? };
    let p = decomposable_point(&ext, &q1, &q2)?;
    let d = ext.eval("(x2-x1)^2")?;
    let pctx = SqrtContext::new(vec![(SqrtGen::Y1, curve_at(&x1)), (SqrtGen::Y2, curve_at(&x2))])?;
    let to_poly = |z: &SqrtExt<RatExpr>| -> Result<SqrtExt<PolyExpr>> {
        let z = z.mul_ref(&d);
        let coeffs = z
            .coeffs()
            .iter()
            .map(|c| c.as_polynomial().cloned().ok_or(Error::InexactDivision))
            .collect::<Result<Vec<_>>>()?;
        SqrtExt::from_coeffs(&pctx, coeffs)
    };
    let c = &p.point.coords;
    let v = [to_poly(&c[0])?, to_poly(&c[1])?, to_poly(&c[2])?, to_poly(&c[3])?];
    let pz = PolyExpr::zero(&uni);
    let penv = poly_env().map(SqrtExt::from_base(&pctx, pz), |q| SqrtExt::from_base(&pctx, q.clone()));
    kummer_v_at(&penv, &v)
}
