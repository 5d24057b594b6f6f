use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Formal square roots used across the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SqrtGen {
    /// sqrt(F'(0))
    Omega0,
    /// sqrt(-F'(1))
    Omega1,
    /// sqrt(F'(r))
    OmegaR,
    /// sqrt(F'(s))
    OmegaS,
    /// y-coordinate of the first point of a divisor
    Y1,
    /// y-coordinate of the second point of a divisor
    Y2,
    /// square root of a fiber discriminant
    Disc,
}

impl SqrtGen {
    pub fn label(self) -> &'static str {
        match self {
            SqrtGen::Omega0 => "w0",
            SqrtGen::Omega1 => "w1",
            SqrtGen::OmegaR => "wr",
            SqrtGen::OmegaS => "ws",
            SqrtGen::Y1 => "y1",
            SqrtGen::Y2 => "y2",
            SqrtGen::Disc => "d",
        }
    }
}

/// Generators with their squares. Element coefficients are indexed by bitmask
/// over the generator list.
#[derive(Debug, PartialEq)]
pub struct SqrtContext<C> {
    gens: Vec<(SqrtGen, C)>,
    rel_prod: Vec<C>,
}

impl<C: Scalar> SqrtContext<C> {
    pub fn new(gens: Vec<(SqrtGen, C)>) -> Result<Arc<Self>> {
        for (i, (g, _)) in gens.iter().enumerate() {
            if gens[..i].iter().any(|(h, _)| h == g) {
                return Err(Error::DuplicateGenerator(g.label().into()));
            }
        }
        let mut rel_prod = Vec::new();
        if let Some((_, first)) = gens.first() {
            let one = first.one_like();
            rel_prod.push(one);
            for mask in 1usize..(1 << gens.len()) {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                let v = rel_prod[rest].mul_ref(&gens[low].1);
                rel_prod.push(v);
            }
        }
        Ok(Arc::new(SqrtContext { gens, rel_prod }))
    }

    pub fn generators(&self) -> impl Iterator<Item = &(SqrtGen, C)> {
        self.gens.iter()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn position(&self, g: SqrtGen) -> Option<usize> {
        self.gens.iter().position(|(h, _)| *h == g)
    }

    pub fn radicand(&self, g: SqrtGen) -> Option<&C> {
        self.gens.iter().find(|(h, _)| *h == g).map(|(_, c)| c)
    }

    fn dim(&self) -> usize {
        1 << self.gens.len()
    }

    /// Product of the radicands in `mask`.
    pub fn relation(&self, mask: usize) -> &C {
        &self.rel_prod[mask]
    }
}

/// Element of C[g_1,...,g_k]/(g_i^2 - a_i) in multilinear normal form.
#[derive(Clone)]
pub struct SqrtExt<C> {
    ctx: Arc<SqrtContext<C>>,
    coeffs: Vec<C>,
}

impl<C: Scalar> PartialEq for SqrtExt<C> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.gens == other.ctx.gens) && self.coeffs == other.coeffs
    }
}

impl<C: Scalar> fmt::Debug for SqrtExt<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SqrtExt({})", self)
    }
}

impl<C: Scalar> SqrtExt<C> {
    pub fn from_base(ctx: &Arc<SqrtContext<C>>, c: C) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; ctx.dim()];
        coeffs[0] = c;
        SqrtExt { ctx: ctx.clone(), coeffs }
    }

    pub fn generator(ctx: &Arc<SqrtContext<C>>, g: SqrtGen, template: &C) -> Result<Self> {
        let i = ctx.position(g).ok_or_else(|| Error::UnknownVariable(g.label().into()))?;
        Ok(Self::monomial(ctx, template.one_like(), 1 << i))
    }

    pub fn monomial(ctx: &Arc<SqrtContext<C>>, c: C, mask: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; ctx.dim()];
        coeffs[mask] = c;
        SqrtExt { ctx: ctx.clone(), coeffs }
    }

    pub fn from_coeffs(ctx: &Arc<SqrtContext<C>>, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != ctx.dim() {
            return Err(Error::Dimension(format!("expected {} coefficients", ctx.dim())));
        }
        Ok(SqrtExt { ctx: ctx.clone(), coeffs })
    }

    pub fn context(&self) -> &Arc<SqrtContext<C>> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> &C {
        &self.coeffs[mask]
    }

    /// Coefficient of the product of the listed generators.
    pub fn coeff_of(&self, gens: &[SqrtGen]) -> Result<&C> {
        let mut mask = 0;
        for g in gens {
            mask |= 1 << self.ctx.position(*g).ok_or(Error::ContextMismatch)?;
        }
        Ok(&self.coeffs[mask])
    }

    /// The base-ring value when no generator occurs.
    pub fn base_value(&self) -> Option<&C> {
        if self.coeffs[1..].iter().all(|c| c.vanishes()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Masks with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&m| !self.coeffs[m].vanishes()).collect()
    }

    /// Image under g -> -g.
    pub fn conjugate(&self, g: SqrtGen) -> Result<Self> {
        let i = self.ctx.position(g).ok_or(Error::ContextMismatch)?;
        Ok(self.flip_mask(1 << i))
    }

    /// Image under the sign automorphism flipping every generator in `flips`.
    pub fn flip_mask(&self, flips: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| if (m & flips).count_ones() % 2 == 1 { c.neg_ref() } else { c.clone() })
            .collect();
        SqrtExt { ctx: self.ctx.clone(), coeffs }
    }

    pub fn map_coeffs<F: FnMut(&C) -> C>(&self, f: F) -> Self {
        SqrtExt { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul_ref(c))
    }

    fn same_ctx(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.gens == other.ctx.gens
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if !self.same_ctx(other) {
            return Err(Error::ContextMismatch);
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len()];
        let sa = self.support();
        let sb = other.support();
        for &i in &sa {
            for &j in &sb {
                let mut p = self.coeffs[i].mul_ref(&other.coeffs[j]);
                let common = i & j;
                if common != 0 {
                    p = p.mul_ref(self.ctx.relation(common));
                }
                out[i ^ j] = out[i ^ j].add_ref(&p);
            }
        }
        Ok(SqrtExt { ctx: self.ctx.clone(), coeffs: out })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !self.same_ctx(other) {
            return Err(Error::ContextMismatch);
        }
        let coeffs = self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a.add_ref(b)).collect();
        Ok(SqrtExt { ctx: self.ctx.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if !self.same_ctx(other) {
            return Err(Error::ContextMismatch);
        }
        let coeffs = self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a.sub_ref(b)).collect();
        Ok(SqrtExt { ctx: self.ctx.clone(), coeffs })
    }

    /// Inverse via successive conjugates; `ZeroDivisor` when the norm vanishes.
    pub fn inverse(&self) -> Result<Self> {
        let mut z = self.clone();
        let mut acc = SqrtExt::from_base(&self.ctx, self.coeffs[0].one_like());
        for i in 0..self.ctx.len() {
            let w = z.flip_mask(1 << i);
            acc = acc.checked_mul(&w)?;
            z = z.checked_mul(&w)?;
        }
        let norm = z.base_value().ok_or(Error::ZeroDivisor)?.clone();
        let inv = norm.try_inv().ok_or(Error::ZeroDivisor)?;
        Ok(acc.scale(&inv))
    }

    /// Re-express in a context whose generators include those of `self`.
    pub fn embed_into(&self, target: &Arc<SqrtContext<C>>) -> Result<Self> {
        let mut map = Vec::with_capacity(self.ctx.len());
        for (g, a) in &self.ctx.gens {
            let j = target.position(*g).ok_or(Error::ContextMismatch)?;
            if &target.gens[j].1 != a {
                return Err(Error::ContextMismatch);
            }
            map.push(j);
        }
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; target.dim()];
        for (m, c) in self.coeffs.iter().enumerate() {
            let mut tm = 0;
            for (i, &j) in map.iter().enumerate() {
                if m & (1 << i) != 0 {
                    tm |= 1 << j;
                }
            }
            coeffs[tm] = c.clone();
        }
        Ok(SqrtExt { ctx: target.clone(), coeffs })
    }

    pub fn display_with<F: Fn(&C) -> String>(&self, fmt_coeff: F) -> String {
        let mut parts = Vec::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            let gens: Vec<&str> =
                (0..self.ctx.len()).filter(|i| m & (1 << i) != 0).map(|i| self.ctx.gens[i].0.label()).collect();
            if m == 0 {
                parts.push(fmt_coeff(c));
            } else {
                parts.push(format!("({})*{}", fmt_coeff(c), gens.join("*")));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<C: Scalar> fmt::Display for SqrtExt<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|c| c.to_string()))
    }
}

impl<C: Scalar> Scalar for SqrtExt<C> {
    fn zero_like(&self) -> Self {
        SqrtExt::from_base(&self.ctx, self.coeffs[0].zero_like())
    }
    fn one_like(&self) -> Self {
        SqrtExt::from_base(&self.ctx, self.coeffs[0].one_like())
    }
    fn embed(&self, q: &BigRational) -> Self {
        SqrtExt::from_base(&self.ctx, self.coeffs[0].embed(q))
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(|c| c.vanishes())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.checked_add(other).expect("extension context mismatch")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("extension context mismatch")
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("extension context mismatch")
    }
    fn neg_ref(&self) -> Self {
        self.map_coeffs(|c| c.neg_ref())
    }
    fn try_inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}
