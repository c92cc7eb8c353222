//! Dense univariate polynomials over a finite field.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gfq::{FieldSpec, FqElem};
use crate::ring::{impl_ring_ops, Field, FqAlgebra, Ring};

/// A polynomial `sum coeffs[i] T^i`, trimmed so that the last stored
/// coefficient is nonzero. The zero polynomial stores no coefficients and has
/// degree `None`.
#[derive(Clone)]
pub struct Poly<F: Field> {
    ctx: F::Ctx,
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(ctx: &F::Ctx, mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::constant(F::one(ctx))
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.ctx();
        Self::new(&ctx, vec![c])
    }

    /// The variable `T`.
    pub fn x(ctx: &F::Ctx) -> Self {
        Self::monomial(F::one(ctx), 1)
    }

    /// `c T^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![F::zero(&ctx); k];
        coeffs.push(c);
        Self::new(&ctx, coeffs)
    }

    pub fn ctx_ref(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `T^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// The monic associate; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![F::zero(&self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    /// Quotient and remainder: `self = q b + r` with `deg r < deg b`.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv_lc = b.coeffs[db].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut quot = vec![F::zero(&self.ctx); rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = rem[i + db].mul(&inv_lc);
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].sub(&c.mul(bj));
            }
            quot[i] = c;
        }
        rem.truncate(db);
        Ok((Self::new(&self.ctx, quot), Self::new(&self.ctx, rem)))
    }

    pub fn rem(&self, b: &Self) -> Result<Self> {
        Ok(self.divrem(b)?.1)
    }

    /// Exact quotient, or `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        let (q, r) = self.divrem(b).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Self) -> bool {
        !self.is_zero() && f.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, b: &Self) -> Self {
        let mut a = self.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `g = s a + t b` monic.
    pub fn xgcd(&self, b: &Self) -> (Self, Self, Self) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(ctx), Self::zero(ctx));
        let (mut t0, mut t1) = (Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("r1 nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = Ring::sub(&s0, &Ring::mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = Ring::sub(&t0, &Ring::mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let u = lc.inv().expect("nonzero");
                (r0.scale(&u), s0.scale(&u), t0.scale(&u))
            }
        }
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.xgcd(m);
        (g.degree() == Some(0)).then(|| s.rem(m).expect("m nonzero"))
    }

    pub fn mul_mod(&self, b: &Self, m: &Self) -> Result<Self> {
        Ring::mul(self, b).rem(m)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Result<Self> {
        let base = self.rem(m)?;
        let mut acc = Self::one(&self.ctx).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m)?;
            if e.bit(i) {
                acc = acc.mul_mod(&base, m)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&F::from_u64(&self.ctx, i as u64)))
            .collect();
        Self::new(&self.ctx, coeffs)
    }

    /// Horner evaluation at a point of the coefficient field.
    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    /// Horner evaluation in any ring receiving the coefficients via `embed`.
    pub fn eval_with<R: Ring>(&self, x: &R, embed: impl Fn(&F) -> R) -> R {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&embed(c));
        }
        acc
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        self.eval_with(g, |c| Self::constant(c.clone()))
    }

    /// Largest `k` with `l^k | self`.
    pub fn valuation_at(&self, l: &Self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if l.is_constant() {
            return Err(Error::Unsupported("valuation at a unit".into()));
        }
        let mut k = 0;
        let mut f = self.clone();
        while let Some(q) = f.div_exact(l) {
            f = q;
            k += 1;
        }
        Ok(k)
    }

    /// Lowest index with a nonzero coefficient (the T-adic valuation).
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Truncation modulo `T^k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().take(k).cloned().collect())
    }
}

impl<F: Field + FqAlgebra> Poly<F> {
    /// `f -> f^q`, i.e. coefficients raised to the q-th power and `T -> T^q`.
    pub fn frob_q(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let q = F::q_of(&self.ctx) as usize;
        let mut coeffs = vec![F::zero(&self.ctx); (self.coeffs.len() - 1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * q] = c.frob();
        }
        Self::new(&self.ctx, coeffs)
    }
}

impl Poly<FqElem> {
    /// The polynomial whose coefficient digits, base q, spell `index`.
    pub fn from_index(fq: &'static FieldSpec, mut index: u64) -> Self {
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push(fq.elem(index % fq.q()));
            index /= fq.q();
        }
        Self::new(&fq, coeffs)
    }

    /// Inverse of [`Poly::from_index`].
    pub fn index(&self) -> u64 {
        let q = self.ctx.q();
        self.coeffs.iter().rev().fold(0, |acc, c| acc * q + c.index())
    }

    /// All polynomials of degree `< x` (including zero), in index order.
    pub fn all_below_degree(fq: &'static FieldSpec, x: usize) -> impl Iterator<Item = Self> {
        (0..fq.q().pow(x as u32)).map(move |i| Self::from_index(fq, i))
    }

    /// All monic polynomials of degree exactly `n`, in index order.
    pub fn monic_of_degree(fq: &'static FieldSpec, n: usize) -> impl Iterator<Item = Self> {
        let base = fq.q().pow(n as u32);
        (0..base).map(move |i| Self::from_index(fq, base + i))
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.coeffs.is_empty() || self.ctx == other.ctx)
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> Hash for Poly<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<F: Field + Ord> PartialOrd for Poly<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree, then coefficients compared from the top down.
impl<F: Field + Ord> Ord for Poly<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::gfq::text::format_poly_with(self, "T", |c| format!("{c:?}")))
    }
}

impl fmt::Display for Poly<FqElem> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::gfq::text::format_poly(self, "T"))
    }
}

impl<F: Field> Ring for Poly<F> {
    type Ctx = F::Ctx;

    fn ctx(&self) -> Self::Ctx {
        self.ctx.clone()
    }

    fn zero(ctx: &Self::Ctx) -> Self {
        Poly::zero(ctx)
    }

    fn one(ctx: &Self::Ctx) -> Self {
        Poly::one(ctx)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = c.add(s);
        }
        Poly::new(&self.ctx, coeffs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Ring::add(self, &Ring::neg(rhs))
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut coeffs = vec![F::zero(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly::new(&self.ctx, coeffs)
    }

    fn neg(&self) -> Self {
        Poly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }
}

impl_ring_ops!([F: Field] Poly<F>);

impl<F: Field + FqAlgebra> FqAlgebra for Poly<F> {
    fn q_of(ctx: &Self::Ctx) -> u64 {
        F::q_of(ctx)
    }

    fn frob(&self) -> Self {
        self.frob_q()
    }

    fn scale(&self, c: &FqElem) -> Self {
        Poly::new(&self.ctx, self.coeffs.iter().map(|a| a.scale(c)).collect())
    }
}
