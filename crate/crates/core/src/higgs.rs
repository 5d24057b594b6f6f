//! Logarithmic Higgs fields on the canonical chart, their determinant and the
//! Hamiltonians h0, h1, h2 with the Darboux bracket.

use once_cell::sync::Lazy;

use crate::algebra::{Matrix, PolyExpr, RatExpr, Scalar};
use crate::bun_chart::ChartPoint;
use crate::curve::{curve_poly, WeierstrassLabel};
use crate::error::{Error, Result};
use crate::formula::{poly, poly_env, vidx, Env};

/// Cotangent directions of the chart, paired with the pole that carries them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    R,
    S,
    T,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::R, Direction::S, Direction::T];

    pub fn pole(self) -> WeierstrassLabel {
        match self {
            Direction::R => WeierstrassLabel::Wr,
            Direction::S => WeierstrassLabel::Ws,
            Direction::T => WeierstrassLabel::Wt,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn coordinate(self) -> &'static str {
        ["R", "S", "T"][self.index()]
    }

    pub fn momentum(self) -> &'static str {
        ["c_r", "c_s", "c_t"][self.index()]
    }
}

/// Sum of `residue / (x - pole) dx` over finite poles, attached to a chart point.
#[derive(Clone, PartialEq)]
pub struct HiggsField<C> {
    pub base: ChartPoint<C>,
    pub residues: Vec<(WeierstrassLabel, Matrix<C>)>,
}

impl<C: Scalar> std::fmt::Debug for HiggsField<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HiggsField").field("base", &self.base).field("residues", &self.residues).finish()
    }
}

impl<C: Scalar> HiggsField<C> {
    pub fn residue(&self, w: WeierstrassLabel) -> Option<&Matrix<C>> {
        self.residues.iter().find(|(l, _)| *l == w).map(|(_, m)| m)
    }

    fn add_residue(&mut self, w: WeierstrassLabel, m: Matrix<C>) -> Result<()> {
        if let Some(slot) = self.residues.iter_mut().find(|(l, _)| *l == w) {
            slot.1 = slot.1.add(&m)?;
        } else {
            self.residues.push((w, m));
        }
        Ok(())
    }

    fn scaled(&self, c: &C) -> Self {
        HiggsField { base: self.base.clone(), residues: self.residues.iter().map(|(l, m)| (*l, m.scale(c))).collect() }
    }

    /// Parabolic direction at a finite Weierstrass point in the chart normalization.
    pub fn parabolic_direction(&self, w: WeierstrassLabel) -> Result<[C; 2]> {
        let t = &self.base.coords[0];
        let one = t.one_like();
        Ok(match w {
            WeierstrassLabel::W0 => [t.zero_like(), one],
            WeierstrassLabel::W1 => [one.clone(), one],
            WeierstrassLabel::Wr => [self.base.coords[0].clone(), one],
            WeierstrassLabel::Ws => [self.base.coords[1].clone(), one],
            WeierstrassLabel::Wt => [self.base.coords[2].clone(), one],
            WeierstrassLabel::WInf => {
                return Err(Error::OutsideChart("the fiber at infinity is normalized differently".into()))
            }
        })
    }
}

fn m2<C: Scalar>(rows: [[C; 2]; 2]) -> Matrix<C> {
    Matrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect()).expect("2x2")
}

/// One of the three dual basis fields at a chart point.
pub fn higgs_basis_field<C: Scalar>(which: Direction, p: &ChartPoint<C>) -> HiggsField<C> {
    let x = p.coords[which.index()].clone();
    let zero = x.zero_like();
    let one = x.one_like();
    let res0 = m2([[zero.clone(), zero.clone()], [one.sub_ref(&x), zero]]);
    let res1 = m2([[x.clone(), x.neg_ref()], [x.clone(), x.neg_ref()]]);
    let resp = m2([[x.neg_ref(), x.mul_ref(&x)], [one.neg_ref(), x.clone()]]);
    HiggsField {
        base: p.clone(),
        residues: vec![(WeierstrassLabel::W0, res0), (WeierstrassLabel::W1, res1), (which.pole(), resp)],
    }
}

/// `c_r theta_r + c_s theta_s + c_t theta_t`.
pub fn universal_higgs<C: Scalar>(p: &ChartPoint<C>, c: &[C; 3]) -> Result<HiggsField<C>> {
    let mut out = HiggsField { base: p.clone(), residues: Vec::new() };
    for d in Direction::ALL {
        for (w, m) in higgs_basis_field(d, p).scaled(&c[d.index()]).residues {
            out.add_residue(w, m)?;
        }
    }
    Ok(out)
}

/// Whether the residue at `w` kills the parabolic direction there. A missing
/// residue counts as zero.
pub fn residue_kernel_check<C: Scalar>(field: &HiggsField<C>, w: WeierstrassLabel) -> Result<bool> {
    let dir = field.parabolic_direction(w)?;
    match field.residue(w) {
        None => Ok(true),
        Some(m) => Ok(m.apply(&dir)?.iter().all(|c| c.vanishes())),
    }
}

/// Residue at the pole of `d` of trace(phi01 * field), with phi01 = [[0,1],[0,0]].
pub fn serre_pairing_raw<C: Scalar>(d: Direction, field: &HiggsField<C>) -> C {
    match field.residue(d.pole()) {
        None => field.base.coords[0].zero_like(),
        Some(m) => m.get(1, 0).clone(),
    }
}

/// Sign convention under which the basis fields are dual to dR, dS, dT.
pub const PAIRING_SIGN: i64 = -1;

pub fn serre_pairing<C: Scalar>(d: Direction, field: &HiggsField<C>) -> C {
    let raw = serre_pairing_raw(d, field);
    raw.mul_ref(&raw.embed_int(PAIRING_SIGN))
}

pub const TABLE_RST_TEXT: [&str; 3] = [
    "(c_r*(R-1)+c_s*(S-1)+c_t*(T-1))*(c_r*s*t*(R-r)*R+c_s*r*t*(S-s)*S+c_t*r*s*(T-t)*T)",
    "c_r*(c_r*(s+t)*(r+1)+c_s*s*(t+1)+c_t*t*(s+1))*R^2 - c_r^2*(t+s)*R^3 \
     + c_s*(c_s*(r+t)*(s+1)+c_r*r*(t+1)+c_t*t*(r+1))*S^2 - c_s^2*(t+r)*S^3 \
     + c_t*(c_t*(r+s)*(t+1)+c_r*r*(s+1)+c_s*s*(r+1))*T^2 - c_t^2*(r+s)*T^3 \
     - c_r*c_s*(t*(R-1+S-1)+r*(S-s)+s*(R-r))*R*S \
     - c_r*c_t*(s*(R-1+T-1)+r*(T-t)+t*(R-r))*R*T \
     - c_s*c_t*(r*(S-1+T-1)+s*(T-t)+t*(S-s))*S*T \
     - (c_t*t*(r+s)+c_r*r*(s+t)+c_s*s*(r+t))*(c_r*R+c_s*S+c_t*T)",
    "(c_r*(R-1)*R+c_s*(S-1)*S+c_t*(T-1)*T)*(c_r*(R-r)+c_s*(S-s)+c_t*(T-t))",
];

static TABLE_RST: Lazy<[PolyExpr; 3]> = Lazy::new(|| TABLE_RST_TEXT.map(poly));
static DETERMINANT_HS: Lazy<[PolyExpr; 3]> = Lazy::new(|| expand_determinant().expect("determinant expansion"));

/// The tabulated h0, h1, h2 in (R, S, T, c_r, c_s, c_t; r, s, t), stored literally.
pub fn hamiltonians_rst() -> &'static [PolyExpr; 3] {
    &TABLE_RST
}

/// h0, h1, h2 read off from F(x) * det(theta) = h2 x^2 + h1 x + h0.
pub fn determinant_hamiltonians() -> &'static [PolyExpr; 3] {
    &DETERMINANT_HS
}

/// Expand F(x) det(theta) from scratch. `F * theta` has polynomial entries;
/// its determinant is divisible by F once.
pub fn expand_determinant() -> Result<[PolyExpr; 3]> {
    let env = poly_env();
    let p = ChartPoint::new(env.eval("R")?, env.eval("S")?, env.eval("T")?);
    let c = [env.eval("c_r")?, env.eval("c_s")?, env.eval("c_t")?];
    let field = universal_higgs(&p, &c)?;
    let f = curve_poly();
    let zero = f.zero_like();
    let mut a = Matrix::from_fn(2, 2, |_, _| zero.clone());
    for (w, res) in &field.residues {
        let xw = w.x_coordinate().ok_or_else(|| Error::OutsideChart("pole at infinity".into()))?;
        let cofactor = f.div_exact(&poly("x").sub_ref(&xw))?;
        a = a.add(&res.scale(&cofactor))?;
    }
    let det = a.det()?.div_exact(f)?;
    let coeffs = det.coefficients_in(vidx("x"));
    if coeffs.keys().any(|&k| k > 2) {
        return Err(Error::Derivation("F * det(theta) is not quadratic in x".into()));
    }
    Ok([0u16, 1, 2].map(|k| coeffs.get(&k).cloned().unwrap_or_else(|| zero.clone())))
}

/// Values (h0, h1, h2).
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianTriple<C> {
    pub h: [C; 3],
}

impl<C: Scalar> HamiltonianTriple<C> {
    /// h(x) = h2 x^2 + h1 x + h0.
    pub fn at(&self, x: &C) -> C {
        self.h[2].mul_ref(x).add_ref(&self.h[1]).mul_ref(x).add_ref(&self.h[0])
    }
}

/// A cotangent point (R, S, T; c_r, c_s, c_t).
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentPoint<C> {
    pub base: ChartPoint<C>,
    pub c: [C; 3],
}

impl<C: Scalar> CotangentPoint<C> {
    pub fn bind(&self, env: &Env<C>) -> Env<C> {
        self.base.bind(env).with("c_r", self.c[0].clone()).with("c_s", self.c[1].clone()).with("c_t", self.c[2].clone())
    }
}

/// Which formula for h0, h1, h2 to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RstSource {
    /// The literal stored table.
    Table,
    /// The determinant expansion.
    Determinant,
}

pub fn rst_polys(source: RstSource) -> &'static [PolyExpr; 3] {
    match source {
        RstSource::Table => hamiltonians_rst(),
        RstSource::Determinant => determinant_hamiltonians(),
    }
}

/// Evaluate h0, h1, h2 at `q`; `env` binds r, s, t.
pub fn hamiltonians_at<C: Scalar>(env: &Env<C>, q: &CotangentPoint<C>, source: RstSource) -> Result<HamiltonianTriple<C>> {
    let e = q.bind(env);
    let hs = rst_polys(source);
    Ok(HamiltonianTriple { h: [e.eval_poly(&hs[0])?, e.eval_poly(&hs[1])?, e.eval_poly(&hs[2])?] })
}

/// Symmetric 3x3 matrices `H_i` over Q[R, S, T, r, s, t] with h_i = c^T H_i c.
pub fn quadratic_forms(source: RstSource) -> Result<[Matrix<PolyExpr>; 3]> {
    let names = ["c_r", "c_s", "c_t"];
    let idx = names.map(vidx);
    let zero = poly("0");
    let hs = rst_polys(source);
    let mut out = Vec::with_capacity(3);
    for h in hs.iter() {
        let mut m = Matrix::from_fn(3, 3, |_, _| zero.clone());
        for (mono, coeff) in h.terms() {
            let degs: Vec<u16> = idx.iter().map(|&i| mono.exp(i)).collect();
            if degs.iter().sum::<u16>() != 2 {
                return Err(Error::Derivation("Hamiltonian is not a quadratic form in c".into()));
            }
            let mut rest = mono.exps().to_vec();
            for &i in &idx {
                rest[i] = 0;
            }
            let term = PolyExpr::monomial(h.universe(), crate::algebra::Monomial::from_exps(rest), coeff.clone());
            let mut pair = Vec::new();
            for (k, d) in degs.iter().enumerate() {
                for _ in 0..*d {
                    pair.push(k);
                }
            }
            let (j, k) = (pair[0], pair[1]);
            if j == k {
                m.set(j, j, m.get(j, j).add_ref(&term));
            } else {
                let half = term.scale(&crate::algebra::rat(1, 2));
                m.set(j, k, m.get(j, k).add_ref(&half));
                m.set(k, j, m.get(k, j).add_ref(&half));
            }
        }
        out.push(m);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Darboux bracket with positions (R, S, T) and momenta (c_r, c_s, c_t):
/// sum over i of df/dp_i dg/dq_i - df/dq_i dg/dp_i, p = (R, S, T), q = c.
pub fn poisson_bracket(f: &RatExpr, g: &RatExpr) -> Result<RatExpr> {
    let mut acc = RatExpr::zero(f.universe());
    for d in Direction::ALL {
        let p = f.universe().index_of(d.coordinate())?;
        let q = f.universe().index_of(d.momentum())?;
        let a = f.derivative(p).checked_mul(&g.derivative(q))?;
        let b = f.derivative(q).checked_mul(&g.derivative(p))?;
        acc = acc.checked_add(&a.checked_sub(&b)?)?;
    }
    Ok(acc)
}

/// Polynomial version of [`poisson_bracket`].
pub fn poisson_bracket_poly(f: &PolyExpr, g: &PolyExpr) -> Result<PolyExpr> {
    let mut acc = PolyExpr::zero(f.universe());
    for d in Direction::ALL {
        let p = f.universe().index_of(d.coordinate())?;
        let q = f.universe().index_of(d.momentum())?;
        let a = f.derivative(p).checked_mul(&g.derivative(q))?;
        let b = f.derivative(q).checked_mul(&g.derivative(p))?;
        acc = acc.checked_add(&a.checked_sub(&b)?)?;
    }
    Ok(acc)
}

static DETERMINANT_FORMS: Lazy<[Matrix<PolyExpr>; 3]> =
    Lazy::new(|| quadratic_forms(RstSource::Determinant).expect("determinant Hamiltonians are quadratic in c"));

/// Cached `quadratic_forms(RstSource::Determinant)`.
pub fn determinant_forms() -> &'static [Matrix<PolyExpr>; 3] {
    &DETERMINANT_FORMS
}

/// The forms evaluated at a chart point; `env` binds r, s, t.
pub fn forms_at<C: Scalar>(env: &Env<C>, p: &ChartPoint<C>) -> Result<[Matrix<C>; 3]> {
    let e = p.bind(env);
    let mut out = Vec::with_capacity(3);
    for m in determinant_forms() {
        out.push(m.try_map(|x| e.eval_poly(x))?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// `c^T H c`.
pub fn apply_form<C: Scalar>(h: &Matrix<C>, c: &[C; 3]) -> Result<C> {
    let hc = h.apply(c)?;
    Ok(c.iter().zip(hc.iter()).fold(c[0].zero_like(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b))))
}

/// Determinant Hamiltonians through the quadratic forms; same values as
/// `hamiltonians_at(.., RstSource::Determinant)`, far fewer ring operations.
pub fn hamiltonians_via_forms<C: Scalar>(env: &Env<C>, q: &CotangentPoint<C>) -> Result<HamiltonianTriple<C>> {
    let forms = forms_at(env, &q.base)?;
    Ok(HamiltonianTriple {
        h: [apply_form(&forms[0], &q.c)?, apply_form(&forms[1], &q.c)?, apply_form(&forms[2], &q.c)?],
    })
}

/// h0, h1, h2 straight from the field: F(x) det(theta(x)) at three rational
/// x away from the poles, then the interpolating quadratic. Cheap in large
/// extension rings, where expanding the polynomials is not.
pub fn hamiltonians_from_field<C: Scalar>(env: &Env<C>, q: &CotangentPoint<C>) -> Result<HamiltonianTriple<C>> {
    let field = universal_higgs(&q.base, &q.c)?;
    let t = env.template();
    let f = curve_poly();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 1..=12i64 {
        if xs.len() == 3 {
            break;
        }
        let x = t.embed_int(-k);
        let e = env.clone().with("x", x.clone());
        let fx = e.eval_poly(f)?;
        if fx.try_inv().is_none() {
            continue;
        }
        let mut theta = Matrix::from_fn(2, 2, |_, _| t.zero_like());
        for (w, res) in &field.residues {
            let xw = w.x_coordinate().ok_or_else(|| Error::OutsideChart("pole at infinity".into()))?;
            let inv = x.sub_ref(&e.eval_poly(&xw)?).try_inv().ok_or(Error::DivisionByZero)?;
            theta = theta.add(&res.scale(&inv))?;
        }
        xs.push(-k);
        ys.push(fx.mul_ref(&theta.det()?));
    }
    if xs.len() < 3 {
        return Err(Error::Derivation("no three sample abscissae avoid the poles".into()));
    }
    let vander = Matrix::from_fn(3, 3, |i, j| crate::algebra::int(xs[i].pow(j as u32)));
    let inv = vander.inverse()?;
    let h = std::array::from_fn(|i| {
        (0..3).fold(t.zero_like(), |acc, k| acc.add_ref(&ys[k].mul_ref(&t.embed(inv.get(i, k)))))
    });
    Ok(HamiltonianTriple { h })
}
