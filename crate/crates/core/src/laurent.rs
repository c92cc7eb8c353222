//! Truncated Laurent series `sum_{i >= v} c_i u^i` over a finite field, the
//! completion of `F_q(T)` at a prime `l` with uniformizer `u = a_l`.
//!
//! Every element carries an absolute precision `M`: the true value is known
//! modulo `u^M`. Exact elements (finite Laurent polynomials) carry no bound.
//! Precision is tracked pessimistically, so a coefficient below the stated
//! precision is never wrong.

use std::fmt;

use crate::error::{Error, Result};
use crate::gfq::{FqElem, FqPoly, Kp, PrimeOfA};
use crate::ring::{impl_ring_ops, FqAlgebra, FqField, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentCtx<F: FqField> {
    pub residue: F::Ctx,
    /// Relative precision used when a division or a lift has no natural
    /// precision of its own.
    pub rel_prec: i64,
}

#[derive(Clone)]
pub struct LaurentSeries<F: FqField> {
    ctx: LaurentCtx<F>,
    val: i64,
    coeffs: Vec<F>,
    prec: Option<i64>,
}

/// Series over the residue field of a prime of A.
pub type LocalElem = LaurentSeries<Kp>;

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<F: FqField> LaurentSeries<F> {
    pub fn new(ctx: &LaurentCtx<F>, val: i64, coeffs: Vec<F>, prec: Option<i64>) -> Self {
        let mut s = LaurentSeries { ctx: ctx.clone(), val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.val).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.val += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.val = self.prec.unwrap_or(0);
        }
    }

    /// `c u^k`, exact.
    pub fn monomial(ctx: &LaurentCtx<F>, c: F, k: i64) -> Self {
        Self::new(ctx, k, vec![c], None)
    }

    /// The uniformizer `u`.
    pub fn uniformizer(ctx: &LaurentCtx<F>) -> Self {
        Self::monomial(ctx, F::one(&ctx.residue), 1)
    }

    pub fn constant(ctx: &LaurentCtx<F>, c: F) -> Self {
        Self::monomial(ctx, c, 0)
    }

    /// `O(u^p)`.
    pub fn big_o(ctx: &LaurentCtx<F>, p: i64) -> Self {
        Self::new(ctx, p, Vec::new(), Some(p))
    }

    pub fn lctx(&self) -> &LaurentCtx<F> {
        &self.ctx
    }

    /// Absolute precision, `None` when exact.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Valuation, `None` when the series is zero to its known precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// `prec - val`, `None` when exact.
    pub fn relative_precision(&self) -> Option<i64> {
        self.prec.map(|p| p - self.val)
    }

    pub fn coeff(&self, i: i64) -> F {
        let z = F::zero(&self.ctx.residue);
        if i < self.val {
            return z;
        }
        self.coeffs.get((i - self.val) as usize).cloned().unwrap_or(z)
    }

    /// Whether every known coefficient vanishes.
    pub fn is_zero_within_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self - other` vanishes to the common precision.
    pub fn agrees(&self, other: &Self) -> bool {
        self.sub(other).is_zero_within_precision()
    }

    /// Drops information beyond absolute precision `p`.
    pub fn with_precision(&self, p: i64) -> Self {
        Self::new(&self.ctx, self.val, self.coeffs.clone(), min_prec(self.prec, Some(p)))
    }

    /// Multiplicative inverse. Exact monomials invert exactly; other exact
    /// series to relative precision `ctx.rel_prec`.
    pub fn inv(&self) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| {
            Error::PrecisionExhausted(format!("inverting a series known only as O(u^{})", self.val))
        })?;
        let c0_inv = self.coeffs[0].inv().ok_or(Error::DivisionByZero)?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(&self.ctx, c0_inv, -v));
        }
        let rp = self.relative_precision().unwrap_or(self.ctx.rel_prec).max(0) as usize;
        // b_0 = 1/c_0, b_n = -(sum_{k=1}^n c_k b_{n-k}) / c_0.
        let mut b: Vec<F> = Vec::with_capacity(rp);
        for n in 0..rp {
            if n == 0 {
                b.push(c0_inv.clone());
                continue;
            }
            let mut acc = F::zero(&self.ctx.residue);
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc = acc.add(&self.coeffs[k].mul(&b[n - k]));
            }
            b.push(acc.neg().mul(&c0_inv));
        }
        Ok(Self::new(&self.ctx, -v, b, Some(-v + rp as i64)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Evaluation of a polynomial with coefficients embedded by `embed`.
    pub fn eval_poly<G: crate::ring::Field>(&self, f: &crate::gfq::Poly<G>, embed: impl Fn(&G) -> Self) -> Self {
        f.coeffs().iter().rev().fold(Self::zero(&self.ctx), |acc, c| acc.mul(self).add(&embed(c)))
    }
}

impl<F: FqField> PartialEq for LaurentSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        self.val == other.val && self.prec == other.prec && self.coeffs == other.coeffs
    }
}

impl<F: FqField> fmt::Debug for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c:?})*u^{}", self.val + i as i64))
            .collect();
        if let Some(p) = self.prec {
            parts.push(format!("O(u^{p})"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        f.write_str(&parts.join(" + "))
    }
}

impl<F: FqField> Ring for LaurentSeries<F> {
    type Ctx = LaurentCtx<F>;

    fn ctx(&self) -> Self::Ctx {
        self.ctx.clone()
    }

    fn zero(ctx: &Self::Ctx) -> Self {
        LaurentSeries { ctx: ctx.clone(), val: 0, coeffs: Vec::new(), prec: None }
    }

    fn one(ctx: &Self::Ctx) -> Self {
        Self::constant(ctx, F::one(&ctx.residue))
    }

    /// Exact zero only; see [`LaurentSeries::is_zero_within_precision`].
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    fn add(&self, rhs: &Self) -> Self {
        let prec = min_prec(self.prec, rhs.prec);
        let lo = match (self.coeffs.is_empty(), rhs.coeffs.is_empty()) {
            (true, true) => return Self::new(&self.ctx, 0, Vec::new(), prec),
            (true, false) => rhs.val,
            (false, true) => self.val,
            (false, false) => self.val.min(rhs.val),
        };
        let hi = (self.val + self.coeffs.len() as i64).max(rhs.val + rhs.coeffs.len() as i64);
        let hi = prec.map_or(hi, |p| hi.min(p));
        let coeffs = (lo..hi.max(lo)).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect();
        Self::new(&self.ctx, lo, coeffs, prec)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn neg(&self) -> Self {
        LaurentSeries {
            ctx: self.ctx.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ctx);
        }
        // With a = a' + O(u^pa), v(a') >= va: ab is known modulo u^{min(va+pb, vb+pa)}.
        let prec = min_prec(self.prec.map(|p| p + rhs.val), rhs.prec.map(|p| p + self.val));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            let p = prec.expect("an inexact zero factor bounds the precision");
            return Self::big_o(&self.ctx, p);
        }
        let val = self.val + rhs.val;
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let len = prec.map_or(full, |p| ((p - val).max(0) as usize).min(full));
        let mut out = vec![F::zero(&self.ctx.residue); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.ctx, val, out, prec)
    }
}

impl_ring_ops!([F: FqField] LaurentSeries<F>);

impl<F: FqField> FqAlgebra for LaurentSeries<F> {
    fn q_of(ctx: &Self::Ctx) -> u64 {
        F::q_of(&ctx.residue)
    }

    /// `(sum c_i u^i + O(u^M))^q = sum c_i^q u^{qi} + O(u^{qM})`.
    fn frob(&self) -> Self {
        let q = Self::q_of(&self.ctx) as usize;
        let z = F::zero(&self.ctx.residue);
        let mut coeffs = vec![z; self.coeffs.len().saturating_sub(1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * q] = c.frob();
        }
        if self.coeffs.is_empty() {
            coeffs.clear();
        }
        Self::new(&self.ctx, self.val * q as i64, coeffs, self.prec.map(|p| p * q as i64))
    }

    fn scale(&self, c: &FqElem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        Self::new(&self.ctx, self.val, coeffs, self.prec)
    }
}

/// The embedding `A -> F_l = k_l((u))` at a prime `l`, with `u = a_l`.
#[derive(Clone, Debug)]
pub struct LocalEmbedding {
    pub prime: PrimeOfA,
    pub ctx: LaurentCtx<Kp>,
    /// The image of `T`: the root of `a_l(X) = u` lifting the class of `T`.
    pub t: LocalElem,
}

impl LocalEmbedding {
    /// Lifts `T` by Newton iteration; exact when `deg l = 1`.
    pub fn new(prime: &PrimeOfA, rel_prec: i64) -> Result<Self> {
        let kp = prime.residue_field().clone();
        let ctx = LaurentCtx { residue: kp.clone(), rel_prec };
        let l = prime.gen();
        let dl = l.derivative();
        let u = LocalElem::uniformizer(&ctx);
        let embed = |c: &FqElem| LocalElem::constant(&ctx, Kp::from_fq(&kp, c));
        let mut x = LocalElem::constant(&ctx, kp.gen());
        for _ in 0..64 {
            let f = x.eval_poly(l, embed).sub(&u);
            if f.is_zero_within_precision() && (f.is_exact() || f.precision() >= Some(rel_prec)) {
                break;
            }
            let step = f.div(&x.eval_poly(&dl, embed))?;
            x = x.sub(&step);
            if let Some(p) = x.precision() {
                if p > rel_prec {
                    x = x.with_precision(rel_prec);
                }
            }
        }
        Ok(LocalEmbedding { prime: prime.clone(), ctx, t: x })
    }

    pub fn embed_fq(&self, c: &FqElem) -> LocalElem {
        LocalElem::constant(&self.ctx, Kp::from_fq(&self.ctx.residue, c))
    }

    pub fn embed(&self, f: &FqPoly) -> LocalElem {
        self.t.eval_poly(f, |c| self.embed_fq(c))
    }

    pub fn residue(&self, c: &Kp) -> LocalElem {
        LocalElem::constant(&self.ctx, c.clone())
    }

    pub fn u(&self) -> LocalElem {
        LocalElem::uniformizer(&self.ctx)
    }
}
