//! The canonical (R, S, T) chart of parabolic bundles and its 2:1 map to P^3.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::algebra::scalar::rational_sqrt;
use crate::algebra::{quadratic_discriminant, PolyExpr, RatExpr, Scalar, SqrtContext, SqrtExt, SqrtGen};
use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::formula::{poly, ratf, vidx, Env};
use crate::nr_moduli::NrPoint;

pub const CLASSIFY_TEXT: [&str; 4] = [
    "s^2*t^2*(r^2-1)*(s-t)*R - r^2*t^2*(s^2-1)*(r-t)*S + s^2*r^2*(t^2-1)*(r-s)*T \
     + t^2*(t-1)*(r^2-s^2)*R*S - s^2*(s-1)*(r^2-t^2)*R*T + r^2*(r-1)*(s^2-t^2)*S*T",
    "r*s*t*((r-1)*(s-t)*R - (s-1)*(r-t)*S + (t-1)*(r-s)*T \
     + (t-1)*(r-s)*R*S - (s-1)*(r-t)*R*T + (r-1)*(s-t)*S*T)",
    "-s*t*(r^2-1)*(s-t)*R + r*t*(s^2-1)*(r-t)*S - r*s*(t^2-1)*(r-s)*T \
     - t*(t-1)*(r^2-s^2)*R*S + s*(s-1)*(r^2-t^2)*R*T - r*(r-1)*(s^2-t^2)*S*T",
    "s*t*(r-1)*(s-t)*R - r*t*(s-1)*(r-t)*S + s*r*(t-1)*(r-s)*T \
     + t*(t-1)*(r-s)*R*S - s*(s-1)*(r-t)*R*T + r*(r-1)*(s-t)*S*T",
];

/// Coefficients of a*T^2 + b*t*T + c*t^2 = 0.
pub const FIBER_A_TEXT: &str = "(v1+v2*t+v3*t^2)*(v0+v1-(r*s+s*t+r*t)*v3)";
pub const FIBER_B_TEXT: &str = "-(1+t)*(v0*v2+v1^2+t*v1*v3) - 2*(v0*v1+t*v0*v3+t*v1*v2) \
     + (r*s+s*t+r*t)*(t*v1+v2+t*v3)*v3 + (r+s+r*s)*(v1+t^2*v2+t^2*v3)*v3";
pub const FIBER_C_TEXT: &str = "(v1+v2+v3)*(v0+t*v1-t*(r+s+r*s)*v3)";

/// Numerator and denominator of R and S as functions of T on the fiber.
pub const FIBER_R_TEXT: (&str, &str) = (
    "r*(t-1)*(v0+r*v1-r*(s+t+s*t)*v3)*T",
    "t*(r-1)*(v0+t*v1-t*(r+s+r*s)*v3) - (r-t)*(v0+v1-(r*s+s*t+r*t)*v3)*T",
);
pub const FIBER_S_TEXT: (&str, &str) = (
    "s*(t-1)*(v0+s*v1-s*(r+t+r*t)*v3)*T",
    "t*(s-1)*(v0+t*v1-t*(r+s+r*s)*v3) - (s-t)*(v0+v1-(r*s+s*t+r*t)*v3)*T",
);

pub const INVOLUTION_LAMBDA_TEXT: (&str, &str) =
    ("t*(r-s)*R*S - s*(r-t)*R*T + r*(s-t)*S*T", "(s-t)*R - (r-t)*S + (r-s)*T");
pub const INVOLUTION_TEXT: [(&str, &str); 3] = [
    ("(s-t) + (t-1)*S - (s-1)*T", "-t*(s-1)*S + s*(t-1)*T + (s-t)*S*T"),
    ("(r-t) + (t-1)*R - (r-1)*T", "-t*(r-1)*R + r*(t-1)*T + (r-t)*R*T"),
    ("(r-s) + (s-1)*R - (r-1)*S", "-s*(r-1)*R + r*(s-1)*S + (r-s)*R*S"),
];

pub const WEDDLE_TEXT: &str = "((s-t)*R + (t-r)*S + (r-s)*T)*R*S*T + t*((r-1)*S - (s-1)*R)*R*S \
     + r*((s-1)*T - (t-1)*S)*S*T + s*((t-1)*R - (r-1)*T)*R*T \
     - t*(r-s)*R*S - r*(s-t)*S*T - s*(t-r)*R*T";

static CLASSIFY_POLYS: Lazy<[PolyExpr; 4]> = Lazy::new(|| CLASSIFY_TEXT.map(poly));
static WEDDLE_POLY: Lazy<PolyExpr> = Lazy::new(|| poly(WEDDLE_TEXT));
static INVOLUTION_RATS: Lazy<[RatExpr; 3]> = Lazy::new(|| {
    let lambda = ratf(&format!("({})/({})", INVOLUTION_LAMBDA_TEXT.0, INVOLUTION_LAMBDA_TEXT.1));
    INVOLUTION_TEXT.map(|(n, d)| &lambda * &ratf(&format!("({n})/({d})")))
});

/// v0..v3 as polynomials in R, S, T, r, s, t.
pub fn classify_polys() -> &'static [PolyExpr; 4] {
    &CLASSIFY_POLYS
}

pub fn weddle_poly() -> &'static PolyExpr {
    &WEDDLE_POLY
}

/// The involution as rational functions (R~, S~, T~) of R, S, T.
pub fn involution_rats() -> &'static [RatExpr; 3] {
    &INVOLUTION_RATS
}

/// A point (R, S, T) of the canonical chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint<C> {
    pub coords: [C; 3],
}

impl<C: Scalar> ChartPoint<C> {
    pub fn new(r: C, s: C, t: C) -> Self {
        ChartPoint { coords: [r, s, t] }
    }

    pub fn bind(&self, env: &Env<C>) -> Env<C> {
        env.clone()
            .with("R", self.coords[0].clone())
            .with("S", self.coords[1].clone())
            .with("T", self.coords[2].clone())
    }

    pub fn map<D: Scalar, F: Fn(&C) -> D>(&self, f: F) -> ChartPoint<D> {
        ChartPoint { coords: [f(&self.coords[0]), f(&self.coords[1]), f(&self.coords[2])] }
    }
}

impl<C: Scalar> std::fmt::Display for ChartPoint<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.coords[0], self.coords[1], self.coords[2])
    }
}

fn bind_v<C: Scalar>(env: &Env<C>, v: &[C; 4]) -> Env<C> {
    let mut e = env.clone();
    for (i, c) in v.iter().enumerate() {
        e.set(&format!("v{i}"), c.clone());
    }
    e
}

/// Homogeneous coordinates (v0, ..., v3) at `p`, without the projective check.
pub fn classify_coords<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<[C; 4]> {
    let e = p.bind(env);
    let v: Vec<C> = CLASSIFY_POLYS.iter().map(|q| e.eval_poly(q)).collect::<Result<_>>()?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

/// The classifying map. At an indeterminacy point the error names the odd
/// Gunning bundle sitting there.
pub fn classify<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<NrPoint<C>> {
    let v = classify_coords(env, p)?;
    if v.iter().all(|c| c.vanishes()) {
        return Err(Error::Indeterminate(gunning_name(env, p)?));
    }
    NrPoint::v(v)
}

fn gunning_name<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<String> {
    let t = env.template();
    let candidates = [
        ([t.zero_like(), t.zero_like(), t.zero_like()], "E_[w1]"),
        ([t.one_like(), t.one_like(), t.one_like()], "E_[w0]"),
        ([env.eval("r")?, env.eval("s")?, env.eval("t")?], "E_[winf]"),
    ];
    for (c, name) in candidates {
        if c == p.coords {
            return Ok(name.to_string());
        }
    }
    Ok(format!("unlisted point ({p})"))
}

/// `(a, b, c)` of the fiber quadratic a*T^2 + b*t*T + c*t^2.
pub fn fiber_coefficients<C: Scalar>(env: &Env<C>, v: &[C; 4]) -> Result<[C; 3]> {
    let e = bind_v(env, v);
    Ok([e.eval(FIBER_A_TEXT)?, e.eval(FIBER_B_TEXT)?, e.eval(FIBER_C_TEXT)?])
}

/// Discriminant of the fiber quadratic in T.
pub fn fiber_discriminant<C: Scalar>(env: &Env<C>, v: &[C; 4]) -> Result<C> {
    let [a, b, c] = fiber_coefficients(env, v)?;
    let t = env.eval("t")?;
    Ok(quadratic_discriminant(&a, &b.mul_ref(&t), &c.mul_ref(&t).mul_ref(&t)))
}

fn ratio<C: Scalar>(e: &Env<C>, (num, den): (&str, &str), what: &str) -> Result<C> {
    let d = e.eval(den)?;
    let inv = d.try_inv().ok_or_else(|| Error::Pole(format!("{what} denominator {den}")))?;
    Ok(e.eval(num)?.mul_ref(&inv))
}

/// Chart point over `v` with the given T.
pub fn fiber_point<C: Scalar>(env: &Env<C>, v: &[C; 4], t_value: C) -> Result<ChartPoint<C>> {
    let e = bind_v(env, v).with("T", t_value.clone());
    let r = ratio(&e, FIBER_R_TEXT, "R(T)")?;
    let s = ratio(&e, FIBER_S_TEXT, "S(T)")?;
    Ok(ChartPoint::new(r, s, t_value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberKind {
    /// Two distinct preimages.
    Generic,
    /// Vanishing discriminant: one preimage counted twice.
    DoubleRoot,
    /// Leading coefficient a = 0: one preimage.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiberPoints {
    Rational(Vec<ChartPoint<BigRational>>),
    /// Roots in Q(d) with d^2 the stored radicand.
    Quadratic { radicand: BigRational, points: Vec<ChartPoint<SqrtExt<BigRational>>> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fiber {
    pub kind: FiberKind,
    pub points: FiberPoints,
}

impl Fiber {
    pub fn len(&self) -> usize {
        match &self.points {
            FiberPoints::Rational(p) => p.len(),
            FiberPoints::Quadratic { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rational(&self) -> Option<&[ChartPoint<BigRational>]> {
        match &self.points {
            FiberPoints::Rational(p) => Some(p),
            _ => None,
        }
    }
}

/// Preimages of a rational point of P^3 in the canonical chart.
pub fn fiber(params: &CurveParams, v: &NrPoint<BigRational>) -> Result<Fiber> {
    if v.chart != crate::nr_moduli::NrChart::V {
        return Err(Error::ChartMismatch { expected: "v".into(), found: v.chart.to_string() });
    }
    let zero = BigRational::zero();
    let env = params.env(&zero);
    let vc = &v.point.coords;
    let [a, b, c] = fiber_coefficients(&env, vc)?;
    let t = params.t.clone();
    if a.is_zero() {
        if b.is_zero() {
            return Err(Error::NoPreimage("the fiber equation degenerates (a = b = 0)".into()));
        }
        let root = -(&c * &t) / &b;
        let p = fiber_point(&env, vc, root)?;
        return Ok(Fiber { kind: FiberKind::Degenerate, points: FiberPoints::Rational(vec![p]) });
    }
    let disc = &b * &b - BigRational::from_integer(4.into()) * &a * &c;
    let two_a = &a + &a;
    if let Some(q) = rational_sqrt(&disc) {
        let roots = if q.is_zero() {
            vec![-(&b * &t) / &two_a]
        } else {
            vec![&t * (-&b + &q) / &two_a, &t * (-&b - &q) / &two_a]
        };
        let kind = if roots.len() == 1 { FiberKind::DoubleRoot } else { FiberKind::Generic };
        let pts = roots.into_iter().map(|x| fiber_point(&env, vc, x)).collect::<Result<Vec<_>>>()?;
        return Ok(Fiber { kind, points: FiberPoints::Rational(pts) });
    }
    let ctx = SqrtContext::new(vec![(SqrtGen::Disc, disc.clone())])?;
    let lift = |x: &BigRational| SqrtExt::from_base(&ctx, x.clone());
    let ext_env = env.map(lift(&zero), lift);
    let ext_v = vc.clone().map(|x| lift(&x));
    let d = SqrtExt::generator(&ctx, SqrtGen::Disc, &zero)?;
    let scale = lift(&(&t / &two_a));
    let mut pts = Vec::new();
    for sign in [1, -1] {
        let root = lift(&-&b).add_ref(&d.mul_ref(&lift(&BigRational::from_integer(sign.into())))).mul_ref(&scale);
        pts.push(fiber_point(&ext_env, &ext_v, root)?);
    }
    Ok(Fiber { kind: FiberKind::Generic, points: FiberPoints::Quadratic { radicand: disc, points: pts } })
}

/// The Galois involution of the 2:1 cover. Poles are reported, not resolved.
pub fn galois_involution<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<ChartPoint<C>> {
    let e = p.bind(env);
    let lambda = ratio(&e, INVOLUTION_LAMBDA_TEXT, "lambda")?;
    let names = ["R~", "S~", "T~"];
    let mut out = Vec::with_capacity(3);
    for (k, text) in INVOLUTION_TEXT.iter().enumerate() {
        out.push(lambda.mul_ref(&ratio(&e, *text, names[k])?));
    }
    Ok(ChartPoint::new(out[0].clone(), out[1].clone(), out[2].clone()))
}

pub fn weddle_quartic<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<C> {
    p.bind(env).eval_poly(&WEDDLE_POLY)
}

/// Points of the Weddle surface over (R, S): roots of its quadratic in T.
/// Irrational roots live in Q(d) with d^2 the returned radicand.
pub fn weddle_points_over(
    params: &CurveParams,
    r_val: &BigRational,
    s_val: &BigRational,
) -> Result<(Arc<SqrtContext<BigRational>>, Vec<ChartPoint<SqrtExt<BigRational>>>)> {
    let zero = BigRational::zero();
    let env = params.env(&zero).with("R", r_val.clone()).with("S", s_val.clone());
    let coeffs = WEDDLE_POLY.coefficients_in(vidx("T"));
    if coeffs.keys().any(|&k| k > 2) {
        return Err(Error::Dimension("Weddle quartic is not quadratic in T".into()));
    }
    let get = |k: u16| -> Result<BigRational> {
        coeffs.get(&k).map_or(Ok(zero.clone()), |c| env.eval_poly(c))
    };
    let (alpha, beta, gamma) = (get(2)?, get(1)?, get(0)?);
    if alpha.is_zero() {
        return Err(Error::NoPreimage("Weddle equation is not quadratic in T over this (R, S)".into()));
    }
    let disc = quadratic_discriminant(&alpha, &beta, &gamma);
    let two_alpha = &alpha + &alpha;
    let (ctx, d) = match rational_sqrt(&disc) {
        Some(q) => {
            // rational roots, kept in the same ring type as the irrational case
            let ctx = SqrtContext::new(vec![(SqrtGen::Disc, disc.clone())])?;
            let d = SqrtExt::from_base(&ctx, q);
            (ctx, d)
        }
        None => {
            let ctx = SqrtContext::new(vec![(SqrtGen::Disc, disc.clone())])?;
            let d = SqrtExt::generator(&ctx, SqrtGen::Disc, &zero)?;
            (ctx, d)
        }
    };
    let lift = |x: &BigRational| SqrtExt::from_base(&ctx, x.clone());
    let mut pts = Vec::new();
    for sign in [1i64, -1] {
        let t_val = lift(&-&beta).add_ref(&d.mul_ref(&lift(&BigRational::from_integer(sign.into())))).mul_ref(&lift(&two_alpha.recip()));
        pts.push(ChartPoint::new(lift(r_val), lift(s_val), t_val));
    }
    Ok((ctx, pts))
}

/// Both preimages of `v` over any coefficient ring, in the extension by a
/// formal root d of b^2 - 4ac. The root stays formal even when it is a square,
/// so conjugating d swaps the two points.
pub fn fiber_formal<C: Scalar>(
    env: &Env<C>,
    v: &[C; 4],
) -> Result<(Arc<SqrtContext<C>>, [ChartPoint<SqrtExt<C>>; 2])> {
    let [a, b, c] = fiber_coefficients(env, v)?;
    let inv_2a = a
        .add_ref(&a)
        .try_inv()
        .ok_or_else(|| Error::NoPreimage("leading coefficient of the fiber equation is not invertible".into()))?;
    let t = env.eval("t")?;
    let ctx = SqrtContext::new(vec![(SqrtGen::Disc, quadratic_discriminant(&a, &b, &c))])?;
    let lift = |x: &C| SqrtExt::from_base(&ctx, x.clone());
    let ext_env = env.map(lift(&t.zero_like()), lift);
    let ext_v = v.clone().map(|x| lift(&x));
    let d = SqrtExt::generator(&ctx, SqrtGen::Disc, &t)?;
    let scale = lift(&t.mul_ref(&inv_2a));
    let minus_b = lift(&b.neg_ref());
    let p1 = fiber_point(&ext_env, &ext_v, minus_b.add_ref(&d).mul_ref(&scale))?;
    let p2 = fiber_point(&ext_env, &ext_v, minus_b.sub_ref(&d).mul_ref(&scale))?;
    Ok((ctx, [p1, p2]))
}
