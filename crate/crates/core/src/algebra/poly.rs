use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{format_rational, Scalar};
use super::universe::{same_universe, VarUniverse};
use crate::error::{Error, Result};

/// Exponent vector with cached total degree. Ordered by graded lex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    deg: u32,
    exps: Box<[u16]>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { deg: 0, exps: vec![0; n].into_boxed_slice() }
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { deg, exps: exps.into_boxed_slice() }
    }

    pub fn var(n: usize, i: usize, e: u16) -> Self {
        let mut exps = vec![0; n];
        exps[i] = e;
        Monomial::from_exps(exps)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u16> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps: exps.into_boxed_slice() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u16> = other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Monomial { deg: other.deg - self.deg, exps: exps.into_boxed_slice() }
    }

    pub fn min(&self, other: &Monomial) -> Monomial {
        Monomial::from_exps(self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    fn with_exp(&self, i: usize, e: u16) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[i] = e;
        Monomial::from_exps(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over Q in the variables of a universe.
#[derive(Clone)]
pub struct PolyExpr {
    uni: Arc<VarUniverse>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for PolyExpr {
    fn eq(&self, other: &Self) -> bool {
        same_universe(&self.uni, &other.uni) && self.terms == other.terms
    }
}

impl Eq for PolyExpr {}

impl fmt::Debug for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyExpr({})", self)
    }
}

impl PolyExpr {
    pub fn zero(uni: &Arc<VarUniverse>) -> Self {
        PolyExpr { uni: uni.clone(), terms: BTreeMap::new() }
    }

    pub fn one(uni: &Arc<VarUniverse>) -> Self {
        Self::constant(uni, BigRational::one())
    }

    pub fn constant(uni: &Arc<VarUniverse>, c: BigRational) -> Self {
        let mut p = Self::zero(uni);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(uni.len()), c);
        }
        p
    }

    pub fn int(uni: &Arc<VarUniverse>, n: i64) -> Self {
        Self::constant(uni, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(uni: &Arc<VarUniverse>, name: &str) -> Result<Self> {
        let i = uni.index_of(name)?;
        Ok(Self::var_index(uni, i))
    }

    pub fn var_index(uni: &Arc<VarUniverse>, i: usize) -> Self {
        Self::monomial(uni, Monomial::var(uni.len(), i, 1), BigRational::one())
    }

    pub fn monomial(uni: &Arc<VarUniverse>, m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(uni);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(uni: &Arc<VarUniverse>, it: I) -> Self {
        let mut p = Self::zero(uni);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.uni
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Leading term in grlex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(var)).min().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn variables(&self) -> Vec<usize> {
        let n = self.uni.len();
        let mut seen = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &PolyExpr) -> Result<()> {
        if same_universe(&self.uni, &other.uni) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn checked_add(&self, other: &PolyExpr) -> Result<PolyExpr> {
        self.check(other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &PolyExpr) -> Result<PolyExpr> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &PolyExpr) -> Result<PolyExpr> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(PolyExpr::zero(&self.uni));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(PolyExpr {
            uni: self.uni.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> PolyExpr {
        if c.is_zero() {
            return PolyExpr::zero(&self.uni);
        }
        PolyExpr {
            uni: self.uni.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> PolyExpr {
        if c.is_zero() {
            return PolyExpr::zero(&self.uni);
        }
        PolyExpr {
            uni: self.uni.clone(),
            terms: self.terms.iter().map(|(a, x)| (a.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> PolyExpr {
        let mut acc = PolyExpr::one(&self.uni);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divide by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> PolyExpr {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / d`; fails if `d` does not divide `self`.
    pub fn div_exact(&self, d: &PolyExpr) -> Result<PolyExpr> {
        self.check(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = d.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dinv = dc.recip();
        let mut rem = self.clone();
        let mut quot = PolyExpr::zero(&self.uni);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&m) {
                return Err(Error::InexactDivision);
            }
            let qm = dm.quotient_of(&m);
            let qc = &c * &dinv;
            for (tm, tc) in &d.terms {
                rem.add_term(tm.mul(&qm), -(tc * &qc));
            }
            quot.terms.insert(qm, qc);
        }
        Ok(quot)
    }

    /// `Some(q)` when `d` divides `self`.
    pub fn divides_into(&self, d: &PolyExpr) -> Option<PolyExpr> {
        let sv = self.variables();
        for v in d.variables() {
            if !sv.contains(&v) || d.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        self.div_exact(d).ok()
    }

    pub fn derivative(&self, var: usize) -> PolyExpr {
        let mut out = PolyExpr::zero(&self.uni);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                out.add_term(m.with_exp(var, e - 1), c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Coefficients with respect to one variable: `self = sum_k coeffs[k] * var^k`.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<u16, PolyExpr> {
        let mut out: BTreeMap<u16, PolyExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            out.entry(e)
                .or_insert_with(|| PolyExpr::zero(&self.uni))
                .terms
                .insert(m.with_exp(var, 0), c.clone());
        }
        out
    }

    /// Leading coefficient with respect to `var`.
    pub fn lead_in(&self, var: usize) -> PolyExpr {
        let d = self.degree_in(var);
        let mut out = PolyExpr::zero(&self.uni);
        for (m, c) in &self.terms {
            if m.exp(var) == d {
                out.terms.insert(m.with_exp(var, 0), c.clone());
            }
        }
        out
    }

    /// Largest monomial dividing every term, and the cofactor.
    pub fn split_monomial_content(&self) -> (Monomial, PolyExpr) {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return (Monomial::one(self.uni.len()), self.clone()),
            Some(m) => m.clone(),
        };
        let g = it.fold(first, |acc, m| Monomial::min(&acc, m));
        if g.is_one() {
            return (g, self.clone());
        }
        let p = PolyExpr {
            uni: self.uni.clone(),
            terms: self.terms.iter().map(|(m, c)| (g.quotient_of(m), c.clone())).collect(),
        };
        (g, p)
    }

    /// Evaluate with values in any scalar ring. `value(i)` supplies variable `i`.
    pub fn eval_with<C, F>(&self, template: &C, mut value: F) -> Result<C>
    where
        C: Scalar,
        F: FnMut(usize) -> Option<C>,
    {
        let vars = self.variables();
        let mut powers: HashMap<usize, Vec<C>> = HashMap::new();
        for &v in &vars {
            let x = value(v).ok_or_else(|| Error::Unbound(self.uni.name(v).to_string()))?;
            let d = self.degree_in(v) as usize;
            let mut pw = Vec::with_capacity(d + 1);
            pw.push(template.one_like());
            for k in 1..=d {
                let next = pw[k - 1].mul_ref(&x);
                pw.push(next);
            }
            powers.insert(v, pw);
        }
        // recursive Horner: terms sorted so that equal exponent prefixes are contiguous
        let mut terms: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| vars.iter().map(|&v| b.0.exp(v)).cmp(vars.iter().map(|&v| a.0.exp(v))));
        Ok(horner(&terms, &vars, 0, &powers, template))
    }

    /// Evaluate at rationals given by name.
    pub fn eval_rational(&self, values: &[(&str, BigRational)]) -> Result<BigRational> {
        let mut map = HashMap::new();
        for (n, v) in values {
            map.insert(self.uni.index_of(n)?, v.clone());
        }
        self.eval_with(&BigRational::zero(), |i| map.get(&i).cloned())
    }

    /// Replace variable `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &PolyExpr) -> Result<PolyExpr> {
        self.check(value)?;
        let coeffs = self.coefficients_in(var);
        let mut acc = PolyExpr::zero(&self.uni);
        let mut pw = PolyExpr::one(&self.uni);
        let mut k = 0u16;
        for (e, c) in coeffs {
            while k < e {
                pw = &pw * value;
                k += 1;
            }
            acc = &acc + &(&c * &pw);
        }
        Ok(acc)
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_many(&self, subs: &[(usize, PolyExpr)]) -> Result<PolyExpr> {
        for (_, p) in subs {
            self.check(p)?;
        }
        let map: HashMap<usize, PolyExpr> = subs.iter().cloned().collect();
        let uni = self.uni.clone();
        self.eval_with(&PolyExpr::zero(&uni), |i| {
            Some(map.get(&i).cloned().unwrap_or_else(|| PolyExpr::var_index(&uni, i)))
        })
    }

    /// Move to another universe by variable name.
    pub fn rename_into(&self, target: &Arc<VarUniverse>) -> Result<PolyExpr> {
        let vars = self.variables();
        let mut map = vec![usize::MAX; self.uni.len()];
        for &v in &vars {
            map[v] = target.index_of(self.uni.name(v))?;
        }
        let mut out = PolyExpr::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.len()];
            for &v in &vars {
                exps[map[v]] = m.exp(v);
            }
            out.add_term(Monomial::from_exps(exps), c.clone());
        }
        Ok(out)
    }

    pub fn map_coeffs<F: FnMut(&BigRational) -> BigRational>(&self, mut f: F) -> PolyExpr {
        let mut out = PolyExpr::zero(&self.uni);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn fmt_monomial(&self, m: &Monomial, out: &mut String) {
        let mut first = true;
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(self.uni.name(i));
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }

    /// LaTeX rendering, terms in the same order as the canonical form.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = !a.is_one() || m.is_one();
            if show_coeff {
                if a.is_integer() {
                    out.push_str(&a.numer().to_string());
                } else {
                    out.push_str(&format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom()));
                }
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !out.ends_with(' ') && !out.ends_with('-') && !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(&latex_name(self.uni.name(i)));
                if e > 1 {
                    out.push_str(&format!("^{{{}}}", e));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let exps: serde_json::Map<String, serde_json::Value> = m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (self.uni.name(i).to_string(), serde_json::Value::from(e)))
                    .collect();
                serde_json::json!({ "coeff": format_rational(c), "exponents": exps })
            })
            .collect();
        serde_json::json!({ "canonical": self.to_string(), "terms": terms })
    }
}

pub(crate) fn latex_name(name: &str) -> String {
    if let Some(rest) = name.strip_prefix("eta") {
        return format!("\\eta_{}", rest);
    }
    if let Some(rest) = name.strip_prefix("mu") {
        return format!("\\mu_{}", rest);
    }
    let mut chars = name.chars();
    match (chars.next(), chars.as_str()) {
        (Some(c), rest) if !rest.is_empty() && rest.chars().all(|d| d.is_ascii_digit()) => {
            format!("{}_{}", c, rest)
        }
        _ => name.to_string(),
    }
}

/// Canonical text: terms in descending grlex order, e.g. `3/2*x^2*r - 1`.
fn horner<C: Scalar>(
    terms: &[(&Monomial, &BigRational)],
    vars: &[usize],
    k: usize,
    powers: &HashMap<usize, Vec<C>>,
    template: &C,
) -> C {
    if k == vars.len() {
        return terms.iter().fold(template.zero_like(), |acc, (_, c)| acc.add_ref(&template.embed(c)));
    }
    let v = vars[k];
    let pw = &powers[&v];
    let mut acc: Option<C> = None;
    let mut prev = 0usize;
    let mut i = 0;
    while i < terms.len() {
        let e = terms[i].0.exp(v) as usize;
        let mut j = i + 1;
        while j < terms.len() && terms[j].0.exp(v) as usize == e {
            j += 1;
        }
        let val = horner(&terms[i..j], vars, k + 1, powers, template);
        acc = Some(match acc {
            None => val,
            Some(a) => a.mul_ref(&pw[prev - e]).add_ref(&val),
        });
        prev = e;
        i = j;
    }
    let acc = acc.unwrap_or_else(|| template.zero_like());
    if prev == 0 {
        acc
    } else {
        acc.mul_ref(&pw[prev])
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&format_rational(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&format_rational(&a));
                    out.push('*');
                }
                self.fmt_monomial(m, &mut out);
            }
        }
        f.write_str(&out)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&PolyExpr> for &PolyExpr {
            type Output = PolyExpr;
            fn $method(self, rhs: &PolyExpr) -> PolyExpr {
                self.$checked(rhs).expect("polynomial universe mismatch")
            }
        }
        impl $tr<PolyExpr> for PolyExpr {
            type Output = PolyExpr;
            fn $method(self, rhs: PolyExpr) -> PolyExpr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PolyExpr> for PolyExpr {
            type Output = PolyExpr;
            fn $method(self, rhs: &PolyExpr) -> PolyExpr {
                (&self).$method(rhs)
            }
        }
        impl $tr<PolyExpr> for &PolyExpr {
            type Output = PolyExpr;
            fn $method(self, rhs: PolyExpr) -> PolyExpr {
                self.$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        PolyExpr { uni: self.uni.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        -&self
    }
}

impl Scalar for PolyExpr {
    fn zero_like(&self) -> Self {
        PolyExpr::zero(&self.uni)
    }
    fn one_like(&self) -> Self {
        PolyExpr::one(&self.uni)
    }
    fn embed(&self, q: &BigRational) -> Self {
        PolyExpr::constant(&self.uni, q.clone())
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        match self.constant_value() {
            Some(c) if !c.is_zero() => Some(PolyExpr::constant(&self.uni, c.recip())),
            _ => None,
        }
    }
    /// Exact polynomial quotient when one exists.
    fn try_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        self.div_exact(other).ok()
    }
}
