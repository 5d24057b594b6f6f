//! Multivariate gcd over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Monomial, PolyExpr};

const P: u64 = (1u64 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn bigmod(n: &BigInt) -> u64 {
    let m = n.mod_floor(&BigInt::from(P));
    m.to_u64().unwrap()
}

/// Gcd of two polynomials, normalized to leading coefficient 1 (zero if both are zero).
pub fn gcd(a: &PolyExpr, b: &PolyExpr) -> PolyExpr {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let uni = a.universe().clone();
    if a.is_constant() || b.is_constant() {
        return PolyExpr::one(&uni);
    }
    let (ma, a1) = a.split_monomial_content();
    let (mb, b1) = b.split_monomial_content();
    let m = Monomial::min(&ma, &mb);
    let g = gcd_core(&a1, &b1);
    g.mul_monomial(&m, &num_rational::BigRational::one()).monic()
}

fn gcd_many(first: PolyExpr, rest: impl IntoIterator<Item = PolyExpr>) -> PolyExpr {
    let mut items: Vec<PolyExpr> = rest.into_iter().collect();
    items.sort_by_key(|p| p.num_terms());
    let mut g = first;
    for p in items {
        if g.is_constant() {
            break;
        }
        g = gcd(&g, &p);
    }
    if g.is_constant() {
        PolyExpr::one(g.universe())
    } else {
        g
    }
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &PolyExpr, var: usize) -> PolyExpr {
    let mut coeffs: Vec<PolyExpr> = p.coefficients_in(var).into_values().collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let first = coeffs.remove(0);
    gcd_many(first.monic(), coeffs)
}

fn gcd_core(a: &PolyExpr, b: &PolyExpr) -> PolyExpr {
    let uni = a.universe().clone();
    if a.is_constant() || b.is_constant() {
        return PolyExpr::one(&uni);
    }
    let va = a.variables();
    let vb = b.variables();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_many(b.monic(), a.coefficients_in(v).into_values());
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_many(a.monic(), b.coefficients_in(v).into_values());
    }
    let (small, big) = if a.num_terms() <= b.num_terms() { (a, b) } else { (b, a) };
    if big.divides_into(small).is_some() {
        return small.monic();
    }
    let var = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), a.degree_in(v).min(b.degree_in(v))))
        .unwrap();
    if modular_degree_zero(a, b, var) {
        let ca = content_in(a, var);
        let cb = content_in(b, var);
        return gcd(&ca, &cb);
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let gc = gcd(&ca, &cb);
    let gp = subresultant(&pa, &pb, var);
    (&gc * &gp).monic()
}

/// Evaluate every variable except `var` at pseudo-random points mod P and
/// check whether the univariate images are coprime. A `true` answer proves
/// the true gcd has degree zero in `var`.
fn modular_degree_zero(a: &PolyExpr, b: &PolyExpr, var: usize) -> bool {
    let n = a.universe().len();
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    for _attempt in 0..2 {
        let mut point = vec![0u64; n];
        for x in point.iter_mut() {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            *x = seed % P;
        }
        let ia = match image(a, var, &point) {
            Some(v) => v,
            None => continue,
        };
        let ib = match image(b, var, &point) {
            Some(v) => v,
            None => continue,
        };
        if ia.len() != a.degree_in(var) as usize + 1 || ib.len() != b.degree_in(var) as usize + 1 {
            continue;
        }
        return unigcd_degree(ia, ib) == 0;
    }
    false
}

/// Univariate image in `var`; `None` if a denominator vanishes mod P.
fn image(p: &PolyExpr, var: usize, point: &[u64]) -> Option<Vec<u64>> {
    let d = p.degree_in(var) as usize;
    let mut out = vec![0u64; d + 1];
    for (m, c) in p.terms() {
        let den = bigmod(c.denom());
        if den == 0 {
            return None;
        }
        let mut v = mulmod(bigmod(c.numer()), invmod(den));
        for (i, &e) in m.exps().iter().enumerate() {
            if i != var && e > 0 {
                v = mulmod(v, powmod(point[i], e as u64));
            }
        }
        let k = m.exp(var) as usize;
        out[k] = (out[k] + v) % P;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    Some(out)
}

fn unigcd_degree(a: Vec<u64>, b: Vec<u64>) -> usize {
    fn trim(v: &mut Vec<u64>) {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    }
    fn is_zero(v: &[u64]) -> bool {
        v.iter().all(|&x| x == 0)
    }
    fn rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
        let inv = invmod(*b.last().unwrap());
        while a.len() >= b.len() && !is_zero(&a) {
            let f = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + P - mulmod(f, bc)) % P;
            }
            a.pop();
            trim(&mut a);
        }
        a
    }
    let (mut a, mut b) = (a, b);
    trim(&mut a);
    trim(&mut b);
    while !is_zero(&b) {
        let r = rem(a, &b);
        a = b;
        b = r;
    }
    a.len() - 1
}

fn pseudo_rem(a: &PolyExpr, b: &PolyExpr, var: usize) -> PolyExpr {
    let db = b.degree_in(var);
    let lb = b.lead_in(var);
    let uni = a.universe().clone();
    let mut r = a.clone();
    let mut e = a.degree_in(var) as i32 - db as i32 + 1;
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.lead_in(var);
        let shift = PolyExpr::monomial(
            &uni,
            super::poly::Monomial::var(uni.len(), var, dr - db),
            num_rational::BigRational::one(),
        );
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
        e -= 1;
    }
    if e > 0 {
        r = &lb.pow(e as u32) * &r;
    }
    r
}

fn primitive_in(p: &PolyExpr, var: usize) -> PolyExpr {
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides").monic()
}

/// Subresultant PRS for polynomials primitive in `var`; returns the primitive gcd.
fn subresultant(a: &PolyExpr, b: &PolyExpr, var: usize) -> PolyExpr {
    let uni = a.universe().clone();
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if b.degree_in(var) == 0 {
        return PolyExpr::one(&uni);
    }
    let mut g = PolyExpr::one(&uni);
    let mut h = PolyExpr::one(&uni);
    loop {
        let d = (a.degree_in(var) - b.degree_in(var)) as u32;
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(var) == 0 {
            return PolyExpr::one(&uni);
        }
        a = b;
        let div = &g * &h.pow(d);
        b = r.div_exact(&div).expect("subresultant division");
        g = a.lead_in(var);
        h = if d == 0 {
            h
        } else {
            let num = g.pow(d);
            if d == 1 {
                num
            } else {
                num.div_exact(&h.pow(d - 1)).expect("subresultant h update")
            }
        };
    }
    primitive_in(&b, var)
}

/// Integer content of the numerators after clearing denominators; used by tests.
pub fn integer_content(p: &PolyExpr) -> BigInt {
    let l = p.denominator_lcm();
    p.terms()
        .map(|(_, c)| (c * num_rational::BigRational::from_integer(l.clone())).to_integer().abs())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x))
}
