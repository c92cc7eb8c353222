//! Twisted polynomials `sum a_i τ^i` over an F_q-algebra `C`, with
//! multiplication `(a τ^i)(b τ^j) = a b^{q^i} τ^{i+j}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gfq::{FqElem, FqPoly, Poly};
use crate::ring::{Field, FqAlgebra};

#[derive(Clone, PartialEq)]
pub struct TauPoly<C: FqAlgebra> {
    ctx: C::Ctx,
    coeffs: Vec<C>,
}

impl<C: FqAlgebra> TauPoly<C> {
    pub fn new(ctx: &C::Ctx, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TauPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &C::Ctx) -> Self {
        TauPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &C::Ctx) -> Self {
        Self::constant(C::one(ctx))
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `τ`.
    pub fn tau(ctx: &C::Ctx) -> Self {
        Self::monomial(C::one(ctx), 1)
    }

    /// `c τ^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![C::zero(&ctx); k];
        coeffs.push(c);
        Self::new(&ctx, coeffs)
    }

    pub fn ctx_ref(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `deg_τ`, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `ht_τ`, the index of the lowest nonzero coefficient.
    pub fn height(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn height_degree(&self) -> Result<(usize, usize)> {
        match (self.height(), self.degree()) {
            (Some(h), Some(d)) => Ok((h, d)),
            _ => Err(Error::ZeroPolynomial),
        }
    }

    /// Separable means `ht_τ = 0`.
    pub fn is_separable(&self) -> bool {
        self.height() == Some(0)
    }

    /// `∂(sum a_i τ^i) = a_0`.
    pub fn derivative(&self) -> C {
        self.coeff(0)
    }

    pub fn map<D: FqAlgebra>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> TauPoly<D> {
        TauPoly::new(ctx, self.coeffs.iter().map(f).collect())
    }

    /// Evaluation `sum a_i x^{q^i}` in an algebra receiving the coefficients
    /// through `embed`.
    pub fn eval_with<R: FqAlgebra>(&self, x: &R, embed: impl Fn(&C) -> R) -> R {
        let mut acc = x.zero_like();
        let mut xp = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = xp.frob();
            }
            if !a.is_zero() {
                acc = acc.add(&embed(a).mul(&xp));
            }
        }
        acc
    }

    pub fn eval(&self, x: &C) -> C {
        self.eval_with(x, |a| a.clone())
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(&self.ctx, (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        TauPoly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    /// Left multiplication by a scalar of `C`.
    pub fn scale_left(&self, c: &C) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| c.mul(a)).collect())
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![C::zero(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        // twisted[j] = b_j^{q^i} for the current i.
        let mut twisted = rhs.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted.iter_mut().for_each(|b| *b = b.frob());
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.ctx, out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(&self.ctx), |acc, _| acc.mul_ref(self))
    }
}

impl<C: FqAlgebra + Field> TauPoly<C> {
    /// The commutative polynomial `sum a_i x^{q^i}` over a field, dense.
    /// Intended for small degrees.
    pub fn to_commutative(&self) -> Poly<C> {
        let q = C::q_of(&self.ctx) as usize;
        let Some(d) = self.degree() else { return Poly::zero(&self.ctx) };
        let mut coeffs = vec![C::zero(&self.ctx); q.pow(d as u32) + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[q.pow(i as u32)] = a.clone();
        }
        Poly::new(&self.ctx, coeffs)
    }
}

macro_rules! tau_ops {
    ($tr:ident, $method:ident, $impl:ident) => {
        impl<C: FqAlgebra> $tr for TauPoly<C> {
            type Output = TauPoly<C>;
            fn $method(self, rhs: Self) -> Self {
                self.$impl(&rhs)
            }
        }
        impl<'a, C: FqAlgebra> $tr<&'a TauPoly<C>> for &'a TauPoly<C> {
            type Output = TauPoly<C>;
            fn $method(self, rhs: Self) -> TauPoly<C> {
                self.$impl(rhs)
            }
        }
    };
}

tau_ops!(Add, add, add_ref);
tau_ops!(Sub, sub, sub_ref);
tau_ops!(Mul, mul, mul_ref);

impl<C: FqAlgebra> Neg for TauPoly<C> {
    type Output = TauPoly<C>;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<C: FqAlgebra> fmt::Debug for TauPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c:?}"),
                1 => format!("({c:?})*t"),
                _ => format!("({c:?})*t^{k}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

impl fmt::Display for TauPoly<FqPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::gfq::format_tau(&self.coeffs))
    }
}

impl TauPoly<FqPoly> {
    pub fn parse(s: &str, fq: &'static crate::gfq::FieldSpec) -> Result<Self> {
        Ok(Self::new(&fq, crate::gfq::parse_tau(s, fq)?))
    }
}

/// Action of F_q scalars on twisted polynomials: `c · f` for constant `c`.
pub fn scale_fq<C: FqAlgebra>(f: &TauPoly<C>, c: &FqElem) -> TauPoly<C> {
    TauPoly::new(f.ctx_ref(), f.coeffs().iter().map(|a| a.scale(c)).collect())
}
