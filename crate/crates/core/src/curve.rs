//! The genus-2 curve y^2 = F(x), its Weierstrass points and the 2-torsion group.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::algebra::scalar::{format_rational, parse_rational};
use crate::algebra::{int, PolyExpr, Scalar};
use crate::error::{Error, Result};
use crate::formula::{poly, var, vidx, Env};

pub const CURVE_TEXT: &str = "x*(x-1)*(x-r)*(x-s)*(x-t)";

static CURVE: Lazy<PolyExpr> = Lazy::new(|| poly(CURVE_TEXT));
static CURVE_DERIVATIVE: Lazy<PolyExpr> = Lazy::new(|| CURVE.derivative(vidx("x")));

/// F(x) expanded, in r, s, t, x.
pub fn curve_poly() -> &'static PolyExpr {
    &CURVE
}

pub fn curve_derivative() -> &'static PolyExpr {
    &CURVE_DERIVATIVE
}

/// F with x replaced by `at`.
pub fn curve_at(at: &PolyExpr) -> PolyExpr {
    CURVE.substitute(vidx("x"), at).expect("standard universe")
}

/// F' with x replaced by `at`.
pub fn curve_derivative_at(at: &PolyExpr) -> PolyExpr {
    CURVE_DERIVATIVE.substitute(vidx("x"), at).expect("standard universe")
}

/// Elementary symmetric polynomial of degree `k` in r, s, t.
pub fn sigma(k: u8) -> Result<PolyExpr> {
    let text = match k {
        1 => "r+s+t",
        2 => "r*s+s*t+r*t",
        3 => "r*s*t",
        _ => return Err(Error::Dimension(format!("sigma_{k} is not defined; k must be 1, 2 or 3"))),
    };
    Ok(poly(text))
}

/// Numeric branch-point parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveParams {
    #[serde(serialize_with = "ser_rat")]
    pub r: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub s: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub t: BigRational,
}

fn ser_rat<S: serde::Serializer>(q: &BigRational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(q))
}

impl CurveParams {
    /// Rejects values making two of 0, 1, r, s, t coincide.
    pub fn new(r: BigRational, s: BigRational, t: BigRational) -> Result<Self> {
        let pts = [BigRational::zero(), BigRational::one(), r.clone(), s.clone(), t.clone()];
        let names = ["0", "1", "r", "s", "t"];
        for i in 0..5 {
            for j in (i + 1)..5 {
                if pts[i] == pts[j] {
                    return Err(Error::NonGenericParams(format!(
                        "{} = {} (r, s, t must be distinct and differ from 0 and 1)",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(CurveParams { r, s, t })
    }

    pub fn from_ints(r: i64, s: i64, t: i64) -> Result<Self> {
        Self::new(int(r), int(s), int(t))
    }

    pub fn parse(r: &str, s: &str, t: &str) -> Result<Self> {
        let p = |x: &str| parse_rational(x).ok_or_else(|| Error::Parse(format!("not a rational number: `{x}`")));
        Self::new(p(r)?, p(s)?, p(t)?)
    }

    pub fn values(&self) -> [BigRational; 3] {
        [self.r.clone(), self.s.clone(), self.t.clone()]
    }

    /// Environment binding r, s, t in the ring of `template`.
    pub fn env<C: Scalar>(&self, template: &C) -> Env<C> {
        Env::new(template.zero_like())
            .with("r", template.embed(&self.r))
            .with("s", template.embed(&self.s))
            .with("t", template.embed(&self.t))
    }

    pub fn eval(&self, p: &PolyExpr) -> Result<BigRational> {
        self.env(&BigRational::zero()).eval_poly(p)
    }

    pub fn sigma(&self, k: u8) -> Result<BigRational> {
        self.eval(&sigma(k)?)
    }

    pub fn curve_value(&self, x: &BigRational) -> BigRational {
        self.env(&BigRational::zero()).with("x", x.clone()).eval_poly(&CURVE).expect("bound")
    }

    pub fn curve_derivative_value(&self, x: &BigRational) -> BigRational {
        self.env(&BigRational::zero()).with("x", x.clone()).eval_poly(&CURVE_DERIVATIVE).expect("bound")
    }
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r, s, t) = ({}, {}, {})", format_rational(&self.r), format_rational(&self.s), format_rational(&self.t))
    }
}

/// The six Weierstrass points; `WInf` lies over x = infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeierstrassLabel {
    W0,
    W1,
    Wr,
    Ws,
    Wt,
    WInf,
}

impl WeierstrassLabel {
    pub const ALL: [WeierstrassLabel; 6] = [Self::W0, Self::W1, Self::Wr, Self::Ws, Self::Wt, Self::WInf];
    pub const FINITE: [WeierstrassLabel; 5] = [Self::W0, Self::W1, Self::Wr, Self::Ws, Self::Wt];

    pub fn name(self) -> &'static str {
        match self {
            Self::W0 => "w0",
            Self::W1 => "w1",
            Self::Wr => "wr",
            Self::Ws => "ws",
            Self::Wt => "wt",
            Self::WInf => "winf",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    /// x-coordinate as a polynomial in r, s, t; `None` at infinity.
    pub fn x_coordinate(self) -> Option<PolyExpr> {
        Some(match self {
            Self::W0 => poly("0"),
            Self::W1 => poly("1"),
            Self::Wr => var("r"),
            Self::Ws => var("s"),
            Self::Wt => var("t"),
            Self::WInf => return None,
        })
    }

    pub fn x_value(self, params: &CurveParams) -> Option<BigRational> {
        Some(match self {
            Self::W0 => BigRational::zero(),
            Self::W1 => BigRational::one(),
            Self::Wr => params.r.clone(),
            Self::Ws => params.s.clone(),
            Self::Wt => params.t.clone(),
            Self::WInf => return None,
        })
    }
}

impl fmt::Display for WeierstrassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeierstrassLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "w0" => Self::W0,
            "w1" => Self::W1,
            "wr" => Self::Wr,
            "ws" => Self::Ws,
            "wt" => Self::Wt,
            "winf" | "w∞" | "w_inf" => Self::WInf,
            _ => return Err(Error::Parse(format!("unknown Weierstrass label `{s}`"))),
        })
    }
}

const ALL_BITS: u8 = 0b11_1111;
const INF_BIT: u8 = 1 << 5;

/// A 2-torsion class, stored as an even subset of Weierstrass points modulo
/// complement. The stored subset never contains w-infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionElement(u8);

impl TorsionElement {
    pub fn identity() -> Self {
        TorsionElement(0)
    }

    fn canonical(mask: u8) -> Self {
        let m = mask & ALL_BITS;
        TorsionElement(if m & INF_BIT != 0 { m ^ ALL_BITS } else { m })
    }

    /// Class of the divisor sum of `labels`; the count must be even.
    pub fn from_labels(labels: &[WeierstrassLabel]) -> Result<Self> {
        let mut m = 0u8;
        for l in labels {
            m ^= l.bit();
        }
        if m.count_ones() % 2 != 0 {
            return Err(Error::Parse("a 2-torsion class needs an even number of Weierstrass points".into()));
        }
        Ok(Self::canonical(m))
    }

    /// [w] - [w_inf].
    pub fn generator(w: WeierstrassLabel) -> Self {
        Self::canonical(w.bit() | INF_BIT)
    }

    /// The four generators used to build every twist matrix.
    pub fn basis() -> [TorsionElement; 4] {
        use WeierstrassLabel::*;
        [Self::generator(W0), Self::generator(W1), Self::generator(Wr), Self::generator(Ws)]
    }

    pub fn add(self, other: Self) -> Self {
        Self::canonical(self.0 ^ other.0)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn labels(self) -> Vec<WeierstrassLabel> {
        WeierstrassLabel::ALL.iter().copied().filter(|l| self.0 & l.bit() != 0).collect()
    }

    /// Coordinates in the basis `[w0]-[winf], [w1]-[winf], [wr]-[winf], [ws]-[winf]`.
    pub fn decompose(self) -> [bool; 4] {
        let wt = self.0 & WeierstrassLabel::Wt.bit() != 0;
        [0, 1, 2, 3].map(|i| ((self.0 >> i) & 1 == 1) ^ wt)
    }

    /// All sixteen elements, identity first.
    pub fn all() -> Vec<TorsionElement> {
        let mut out: Vec<TorsionElement> = (0u8..32)
            .filter(|m| m.count_ones() % 2 == 0)
            .map(TorsionElement)
            .collect();
        out.sort_by_key(|e| (e.0.count_ones(), e.labels()));
        out
    }

    pub fn index(self) -> u8 {
        self.0
    }
}

impl fmt::Display for TorsionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.labels().iter().map(|l| l.name()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl FromStr for TorsionElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected `{{...}}`, got `{s}`")))?;
        let labels = inner
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<WeierstrassLabel>>>()?;
        Self::from_labels(&labels)
    }
}

pub fn torsion_group() -> Vec<TorsionElement> {
    TorsionElement::all()
}

pub fn torsion_add(a: TorsionElement, b: TorsionElement) -> TorsionElement {
    a.add(b)
}
