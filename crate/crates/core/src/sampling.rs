//! Seeded rational sampling for the randomized checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bun_chart::ChartPoint;
use crate::curve::CurveParams;

pub const DEFAULT_BOUND: i64 = 50;
pub const DEFAULT_SEED: u64 = 1;

/// Draws rationals p/q with |p| <= bound and 1 <= q <= bound.
pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_bound(seed, DEFAULT_BOUND)
    }

    pub fn with_bound(seed: u64, bound: i64) -> Self {
        assert!(bound >= 1, "sampling bound must be positive");
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), bound }
    }

    pub fn rational(&mut self) -> BigRational {
        let p = self.rng.gen_range(-self.bound..=self.bound);
        let q = self.rng.gen_range(1..=self.bound);
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn nonzero_rational(&mut self) -> BigRational {
        loop {
            let x = self.rational();
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn rationals<const N: usize>(&mut self) -> [BigRational; N] {
        std::array::from_fn(|_| self.rational())
    }

    /// Generic branch-point parameters; coincidences are redrawn.
    pub fn params(&mut self) -> CurveParams {
        loop {
            let [r, s, t] = self.rationals();
            if let Ok(p) = CurveParams::new(r, s, t) {
                return p;
            }
        }
    }

    pub fn chart_point(&mut self) -> ChartPoint<BigRational> {
        let [r, s, t] = self.rationals();
        ChartPoint::new(r, s, t)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Independent stream for a sub-check, so adding draws in one check does
    /// not shift the others.
    pub fn fork(&mut self) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(self.rng.gen()), bound: self.bound }
    }
}
