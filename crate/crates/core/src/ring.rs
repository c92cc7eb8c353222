//! Algebraic capability traits shared by every coefficient domain.
//!
//! Elements carry a handle to their parent structure (`Ring::Ctx`), so that
//! zeros and ones can be produced without global state. Everything in the
//! crate that is "generic over the scalar" is generic over these traits:
//! polynomials over a field, twisted polynomials over an F_q-algebra, linear
//! algebra over a field.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use rand::Rng;

use crate::gfq::FqElem;

/// A commutative ring with identity.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + Sized {
    /// Handle to the parent structure.
    type Ctx: Clone + Debug + PartialEq + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx())
    }

    fn one_like(&self) -> Self {
        Self::one(&self.ctx())
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = self.one_like();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }
}

/// An F_q-algebra of characteristic p, equipped with the q-power Frobenius
/// endomorphism `x -> x^q`. This is the coefficient capability required by
/// twisted polynomials.
pub trait FqAlgebra: Ring {
    /// The size q of the constant field F_q.
    fn q_of(ctx: &Self::Ctx) -> u64;

    /// `x -> x^q`.
    fn frob(&self) -> Self;

    /// Action of a constant `c` in F_q.
    fn scale(&self, c: &FqElem) -> Self;

    /// Image of a constant of F_q in this algebra.
    fn from_fq(ctx: &Self::Ctx, c: &FqElem) -> Self {
        Self::one(ctx).scale(c)
    }
}

/// A finite field.
pub trait Field: Ring + Eq + Hash {
    fn inv(&self) -> Option<Self>;
    fn characteristic(ctx: &Self::Ctx) -> u64;
    fn order(ctx: &Self::Ctx) -> BigUint;
    fn random<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self;
    /// The unique `y` with `y^p = self`.
    fn pth_root(&self) -> Self;
    /// Image of the integer `n` under `Z -> F`.
    fn from_u64(ctx: &Self::Ctx, n: u64) -> Self;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
}

/// A finite extension of F_q, viewed as an F_q-vector space with fixed
/// coordinates.
pub trait FqField: Field + FqAlgebra {
    fn fq_dim(ctx: &Self::Ctx) -> usize;
    fn to_coords(&self) -> Vec<FqElem>;
    fn from_coords(ctx: &Self::Ctx, coords: &[FqElem]) -> Self;
    /// The constant field F_q underlying `ctx`.
    fn base_fq(ctx: &Self::Ctx) -> &'static crate::gfq::FieldSpec;

    /// The F_q-basis dual to `to_coords`.
    fn fq_basis(ctx: &Self::Ctx) -> Vec<Self> {
        let dim = Self::fq_dim(ctx);
        let fq = Self::base_fq(ctx);
        (0..dim)
            .map(|i| {
                let coords: Vec<FqElem> = (0..dim)
                    .map(|j| if i == j { fq.one() } else { fq.zero() })
                    .collect();
                Self::from_coords(ctx, &coords)
            })
            .collect()
    }
}

/// Implements the `std::ops` arithmetic operators for a type implementing
/// [`Ring`], both by value and by reference.
macro_rules! impl_ring_ops {
    ([$($gen:tt)*] $ty:ty) => {
        impl<$($gen)*> std::ops::Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty { $crate::ring::Ring::add(&self, &rhs) }
        }
        impl<'a, $($gen)*> std::ops::Add<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn add(self, rhs: &'a $ty) -> $ty { $crate::ring::Ring::add(self, rhs) }
        }
        impl<$($gen)*> std::ops::Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty { $crate::ring::Ring::sub(&self, &rhs) }
        }
        impl<'a, $($gen)*> std::ops::Sub<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn sub(self, rhs: &'a $ty) -> $ty { $crate::ring::Ring::sub(self, rhs) }
        }
        impl<$($gen)*> std::ops::Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty { $crate::ring::Ring::mul(&self, &rhs) }
        }
        impl<'a, $($gen)*> std::ops::Mul<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn mul(self, rhs: &'a $ty) -> $ty { $crate::ring::Ring::mul(self, rhs) }
        }
        impl<$($gen)*> std::ops::Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty { $crate::ring::Ring::neg(&self) }
        }
        impl<'a, $($gen)*> std::ops::Neg for &'a $ty {
            type Output = $ty;
            fn neg(self) -> $ty { $crate::ring::Ring::neg(self) }
        }
    };
}
pub(crate) use impl_ring_ops;
