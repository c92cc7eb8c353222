//! Finite extensions `F[θ]/(h(θ))` of a finite field `F` that is itself an
//! extension of F_q. Used for residue fields `k_P = F_q[T]/(P)` and for the
//! splitting fields of torsion polynomials over them.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gfq::factor::is_irreducible;
use crate::gfq::{FieldSpec, FqElem, Poly};
use crate::ring::{impl_ring_ops, Field, FqAlgebra, FqField, Ring};

pub struct ExtSpec<F: FqField> {
    base: F::Ctx,
    modulus: Poly<F>,
    m: usize,
    /// Coordinates of `θ^{q i}` for `i < m`.
    frob_images: Vec<Vec<F>>,
}

/// Handle to an extension field; cheap to clone.
pub type ExtCtx<F> = Arc<ExtSpec<F>>;

impl<F: FqField> PartialEq for ExtSpec<F> {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl<F: FqField> fmt::Debug for ExtSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ext({:?})", self.modulus)
    }
}

impl<F: FqField> ExtSpec<F> {
    /// `F[θ]/(modulus)`; the modulus must be monic irreducible of degree >= 1.
    pub fn new(modulus: &Poly<F>) -> Result<ExtCtx<F>> {
        modulus.degree().filter(|&m| m >= 1).ok_or(Error::ZeroPolynomial)?;
        if !modulus.is_monic() || !is_irreducible(modulus) {
            return Err(Error::NotPrime(format!("{modulus:?}")));
        }
        Ok(Self::new_unchecked(modulus))
    }

    /// As [`ExtSpec::new`] without the irreducibility test.
    pub fn new_unchecked(modulus: &Poly<F>) -> ExtCtx<F> {
        let base = modulus.ctx();
        let m = modulus.degree().expect("nonzero modulus");
        let q = BigUint::from(F::q_of(&base));
        let theta_q = Poly::x(&base).pow_mod(&q, modulus).expect("nonzero modulus");
        let mut frob_images = Vec::with_capacity(m);
        let mut acc = Poly::one(&base);
        for _ in 0..m {
            let mut c = acc.coeffs().to_vec();
            c.resize(m, F::zero(&base));
            frob_images.push(c);
            acc = acc.mul_mod(&theta_q, modulus).expect("nonzero modulus");
        }
        Arc::new(ExtSpec { base, modulus: modulus.clone(), m, frob_images })
    }

    /// The extension of degree `m` defined by the least monic irreducible
    /// polynomial of that degree, in the canonical order of [`Poly`].
    pub fn of_degree(base: &F::Ctx, m: usize) -> ExtCtx<F>
    where
        F: Ord,
    {
        Self::new_unchecked(&crate::gfq::factor::first_irreducible(base, m))
    }

    pub fn base(&self) -> &F::Ctx {
        &self.base
    }

    pub fn modulus(&self) -> &Poly<F> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn zero(self: &Arc<Self>) -> ExtElem<F> {
        ExtElem { spec: self.clone(), c: vec![F::zero(&self.base); self.m] }
    }

    pub fn one(self: &Arc<Self>) -> ExtElem<F> {
        self.embed(&F::one(&self.base))
    }

    pub fn embed(self: &Arc<Self>, a: &F) -> ExtElem<F> {
        let mut c = vec![F::zero(&self.base); self.m];
        c[0] = a.clone();
        ExtElem { spec: self.clone(), c }
    }

    /// The class of `θ`.
    pub fn gen(self: &Arc<Self>) -> ExtElem<F> {
        self.from_poly(&Poly::x(&self.base))
    }

    /// Image of a polynomial in `θ`.
    pub fn from_poly(self: &Arc<Self>, f: &Poly<F>) -> ExtElem<F> {
        let r = f.rem(&self.modulus).expect("nonzero modulus");
        let mut c = r.into_coeffs();
        c.resize(self.m, F::zero(&self.base));
        ExtElem { spec: self.clone(), c }
    }
}

/// An element of an extension field, in the power basis of `θ`.
#[derive(Clone)]
pub struct ExtElem<F: FqField> {
    spec: ExtCtx<F>,
    c: Vec<F>,
}

impl<F: FqField> ExtElem<F> {
    pub fn spec(&self) -> &ExtCtx<F> {
        &self.spec
    }

    /// Power-basis coordinates over the base field (length = degree).
    pub fn base_coords(&self) -> &[F] {
        &self.c
    }

    pub fn to_poly(&self) -> Poly<F> {
        Poly::new(&self.spec.base, self.c.clone())
    }

    /// The element as a constant of the base field, if it is one.
    pub fn as_base(&self) -> Option<F> {
        self.c[1..].iter().all(|x| x.is_zero()).then(|| self.c[0].clone())
    }
}

impl<F: FqField> PartialEq for ExtElem<F> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec)
    }
}

impl<F: FqField> Eq for ExtElem<F> {}

impl<F: FqField> Hash for ExtElem<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl<F: FqField + Ord> PartialOrd for ExtElem<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: FqField + Ord> Ord for ExtElem<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.iter().rev().cmp(other.c.iter().rev())
    }
}

impl<F: FqField> fmt::Debug for ExtElem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_poly();
        f.write_str(&crate::gfq::text::format_poly_with(&p, "θ", |c| format!("{c:?}")))
    }
}

impl<F: FqField> Ring for ExtElem<F> {
    type Ctx = ExtCtx<F>;

    fn ctx(&self) -> Self::Ctx {
        self.spec.clone()
    }

    fn zero(ctx: &Self::Ctx) -> Self {
        ctx.zero()
    }

    fn one(ctx: &Self::Ctx) -> Self {
        ctx.one()
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    fn add(&self, rhs: &Self) -> Self {
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| a.add(b)).collect();
        ExtElem { spec: self.spec.clone(), c }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| a.sub(b)).collect();
        ExtElem { spec: self.spec.clone(), c }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let m = self.spec.m;
        let base = &self.spec.base;
        let mut prod = vec![F::zero(base); 2 * m - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        // The modulus is monic: eliminate from the top.
        let h = self.spec.modulus.coeffs();
        for k in (m..prod.len()).rev() {
            let top = std::mem::replace(&mut prod[k], F::zero(base));
            if top.is_zero() {
                continue;
            }
            for (i, hi) in h[..m].iter().enumerate() {
                prod[k - m + i] = prod[k - m + i].sub(&top.mul(hi));
            }
        }
        prod.truncate(m);
        ExtElem { spec: self.spec.clone(), c: prod }
    }

    fn neg(&self) -> Self {
        ExtElem { spec: self.spec.clone(), c: self.c.iter().map(|a| a.neg()).collect() }
    }
}

impl_ring_ops!([F: FqField] ExtElem<F>);

impl<F: FqField> Field for ExtElem<F> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let s = self.to_poly().inv_mod(&self.spec.modulus)?;
        Some(self.spec.from_poly(&s))
    }

    fn characteristic(ctx: &Self::Ctx) -> u64 {
        F::characteristic(&ctx.base)
    }

    fn order(ctx: &Self::Ctx) -> BigUint {
        F::order(&ctx.base).pow(ctx.m as u32)
    }

    fn random<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self {
        ExtElem { spec: ctx.clone(), c: (0..ctx.m).map(|_| F::random(&ctx.base, rng)).collect() }
    }

    fn pth_root(&self) -> Self {
        let p = Self::characteristic(&self.spec);
        self.pow_big(&(Self::order(&self.spec) / BigUint::from(p)))
    }

    fn from_u64(ctx: &Self::Ctx, n: u64) -> Self {
        ctx.embed(&F::from_u64(&ctx.base, n))
    }
}

impl<F: FqField> FqAlgebra for ExtElem<F> {
    fn q_of(ctx: &Self::Ctx) -> u64 {
        F::q_of(&ctx.base)
    }

    /// Semilinear: `(sum c_i θ^i)^q = sum c_i^q (θ^q)^i`.
    fn frob(&self) -> Self {
        let base = &self.spec.base;
        let mut out = vec![F::zero(base); self.spec.m];
        for (ci, img) in self.c.iter().zip(&self.spec.frob_images) {
            if ci.is_zero() {
                continue;
            }
            let cq = ci.frob();
            for (o, x) in out.iter_mut().zip(img) {
                *o = o.add(&cq.mul(x));
            }
        }
        ExtElem { spec: self.spec.clone(), c: out }
    }

    fn scale(&self, c: &FqElem) -> Self {
        ExtElem { spec: self.spec.clone(), c: self.c.iter().map(|a| a.scale(c)).collect() }
    }
}

impl<F: FqField> FqField for ExtElem<F> {
    fn fq_dim(ctx: &Self::Ctx) -> usize {
        ctx.m * F::fq_dim(&ctx.base)
    }

    fn to_coords(&self) -> Vec<FqElem> {
        self.c.iter().flat_map(|a| a.to_coords()).collect()
    }

    fn from_coords(ctx: &Self::Ctx, coords: &[FqElem]) -> Self {
        let d = F::fq_dim(&ctx.base);
        let c = coords.chunks(d).map(|ch| F::from_coords(&ctx.base, ch)).collect();
        ExtElem { spec: ctx.clone(), c }
    }

    fn base_fq(ctx: &Self::Ctx) -> &'static FieldSpec {
        F::base_fq(&ctx.base)
    }
}

/// The residue field `k_P = F_q[T]/(P)`.
pub type ResidueField = ExtCtx<FqElem>;
/// An element of a residue field of A.
pub type Kp = ExtElem<FqElem>;
/// An element of an extension of a residue field.
pub type KpExt = ExtElem<Kp>;
