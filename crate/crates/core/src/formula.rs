//! Named-value environments for evaluating stored formulas in any scalar ring.

use std::collections::HashMap;

use once_cell::sync::Lazy;

use crate::algebra::{parse_expr, PolyExpr, RatExpr, Scalar, VarUniverse};
use crate::error::Result;

/// Values for identifiers, plus a template element fixing the target ring.
#[derive(Clone, Debug)]
pub struct Env<C> {
    template: C,
    vals: HashMap<String, C>,
}

impl<C: Scalar> Env<C> {
    pub fn new(template: C) -> Self {
        Env { template, vals: HashMap::new() }
    }

    pub fn template(&self) -> &C {
        &self.template
    }

    pub fn set(&mut self, name: &str, v: C) {
        self.vals.insert(name.to_string(), v);
    }

    pub fn with(mut self, name: &str, v: C) -> Self {
        self.set(name, v);
        self
    }

    pub fn get(&self, name: &str) -> Option<&C> {
        self.vals.get(name)
    }

    pub fn eval(&self, text: &str) -> Result<C> {
        parse_expr(text, &self.template, |n| self.vals.get(n).cloned())
    }

    pub fn eval_poly(&self, p: &PolyExpr) -> Result<C> {
        let uni = p.universe().clone();
        p.eval_with(&self.template, |i| self.vals.get(uni.name(i)).cloned())
    }

    pub fn eval_rat(&self, q: &RatExpr) -> Result<C> {
        let uni = q.universe().clone();
        q.eval_with(&self.template, |i| self.vals.get(uni.name(i)).cloned())
    }

    /// Same bindings pushed through a ring map.
    pub fn map<D: Scalar, F: Fn(&C) -> D>(&self, template: D, f: F) -> Env<D> {
        Env { template, vals: self.vals.iter().map(|(k, v)| (k.clone(), f(v))).collect() }
    }
}

static POLY_ENV: Lazy<Env<PolyExpr>> = Lazy::new(|| {
    let uni = VarUniverse::standard();
    let mut env = Env::new(PolyExpr::zero(&uni));
    for i in 0..uni.len() {
        env.set(uni.name(i), PolyExpr::var_index(&uni, i));
    }
    env
});

static RAT_ENV: Lazy<Env<RatExpr>> = Lazy::new(|| POLY_ENV.map(RatExpr::zero(&VarUniverse::standard()), |p| RatExpr::from_poly(p.clone())));

/// Every standard variable bound to itself, as polynomials.
pub fn poly_env() -> &'static Env<PolyExpr> {
    &POLY_ENV
}

/// Every standard variable bound to itself, as rational functions.
pub fn rat_env() -> &'static Env<RatExpr> {
    &RAT_ENV
}

/// Parse a polynomial over the standard universe; panics on malformed built-in text.
pub fn poly(text: &str) -> PolyExpr {
    POLY_ENV.eval(text).unwrap_or_else(|e| panic!("built-in formula `{text}`: {e}"))
}

pub fn ratf(text: &str) -> RatExpr {
    RAT_ENV.eval(text).unwrap_or_else(|e| panic!("built-in formula `{text}`: {e}"))
}

pub fn var(name: &str) -> PolyExpr {
    POLY_ENV.get(name).cloned().unwrap_or_else(|| panic!("no standard variable `{name}`"))
}

pub fn vidx(name: &str) -> usize {
    VarUniverse::standard().index_of(name).unwrap_or_else(|_| panic!("no standard variable `{name}`"))
}
