//! The constant field F_q = F_{p^n}.
//!
//! Every supported field is small (q <= 256), so all operations are table
//! lookups. Field specifications are interned: constructing the same field
//! twice yields the same `&'static FieldSpec`, which keeps [`FqElem`] a
//! two-word `Copy` value.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{impl_ring_ops, Field, FqAlgebra, FqField, Ring};

/// Largest field size supported by the table-driven implementation.
pub const MAX_Q: u64 = 256;

/// Reference moduli, ascending coefficients over F_p. These are the Conway
/// polynomials for the listed (p, n); for n = 1 the modulus is `x - g` with
/// `g` the least primitive root.
const MODULUS_TABLE: &[(u64, usize, &[u64])] = &[
    (3, 1, &[1, 1]),
    (5, 1, &[3, 1]),
    (7, 1, &[4, 1]),
    (3, 2, &[2, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (3, 3, &[1, 2, 0, 1]),
];

/// Description of F_q = F_p[w]/(modulus(w)).
pub struct FieldSpec {
    p: u64,
    n: usize,
    q: u64,
    modulus: Vec<u64>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    pth_root: Vec<u16>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)?;
        if self.n > 1 {
            write!(f, "[w]/({:?})", self.modulus)?;
        }
        Ok(())
    }
}

fn registry() -> &'static Mutex<Vec<&'static FieldSpec>> {
    static REGISTRY: OnceLock<Mutex<Vec<&'static FieldSpec>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(Vec::new()))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Reduces `a` modulo the monic `m` over F_p, in place.
fn fp_rem(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let top = a.pop().unwrap() % p;
        if top != 0 {
            let shift = a.len() - dm;
            for (i, &mi) in m[..dm].iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - top * mi % p) % p;
            }
        }
    }
}

fn fp_is_irreducible(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    // Trial division by every monic polynomial of degree 1..=n/2.
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut div: Vec<u64> = (0..d).map(|i| idx / p.pow(i as u32) % p).collect();
            div.push(1);
            let mut r = m.to_vec();
            fp_rem(&mut r, &div, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// The field with `p^n` elements, using the reference modulus when one is
    /// tabulated and otherwise the least monic irreducible polynomial in the
    /// base-p ordering of its coefficient vector.
    pub fn new(p: u64, n: usize) -> Result<&'static FieldSpec> {
        if p == 2 || !is_prime(p) {
            return Err(Error::UnsupportedField(format!("p = {p} is not an odd prime")));
        }
        if n == 0 {
            return Err(Error::UnsupportedField("extension degree must be >= 1".into()));
        }
        let q = p.checked_pow(n as u32).filter(|&q| q <= MAX_Q).ok_or_else(|| {
            Error::UnsupportedField(format!("q = {p}^{n} exceeds the supported maximum {MAX_Q}"))
        })?;
        if let Some((_, _, m)) = MODULUS_TABLE.iter().find(|(tp, tn, _)| *tp == p && *tn == n) {
            return Self::with_modulus(p, m);
        }
        let modulus = (0..q)
            .map(|idx| {
                let mut m: Vec<u64> = (0..n).map(|i| idx / p.pow(i as u32) % p).collect();
                m.push(1);
                m
            })
            .find(|m| (n == 1 || m[0] != 0) && fp_is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");
        Self::with_modulus(p, &modulus)
    }

    /// The field of size `q`, which must be a power of an odd prime.
    pub fn from_q(q: u64) -> Result<&'static FieldSpec> {
        let p = (2..=q)
            .find(|d| q % d == 0)
            .ok_or_else(|| Error::UnsupportedField(format!("q = {q}")))?;
        let mut n = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            n += 1;
        }
        if rest != 1 {
            return Err(Error::UnsupportedField(format!("q = {q} is not a prime power")));
        }
        Self::new(p, n)
    }

    /// F_p[w]/(modulus), checking that the modulus is monic and irreducible.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<&'static FieldSpec> {
        if p == 2 || !is_prime(p) {
            return Err(Error::UnsupportedField(format!("p = {p} is not an odd prime")));
        }
        let mut modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::UnsupportedField("modulus must be monic of degree >= 1".into()));
        }
        let n = modulus.len() - 1;
        let q = p
            .checked_pow(n as u32)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::UnsupportedField(format!("{p}^{n} exceeds {MAX_Q}")))?;
        if !fp_is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }

        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(spec) = reg.iter().find(|s| s.p == p && s.modulus == modulus) {
            return Ok(spec);
        }
        let spec: &'static FieldSpec = Box::leak(Box::new(Self::build(p, n, q, modulus)));
        reg.push(spec);
        Ok(spec)
    }

    fn build(p: u64, n: usize, q: u64, modulus: Vec<u64>) -> FieldSpec {
        let digits = |v: u64| -> Vec<u64> { (0..n).map(|i| v / p.pow(i as u32) % p).collect() };
        let pack = |d: &[u64]| -> u16 {
            d.iter().rev().fold(0u64, |acc, &c| acc * p + c % p) as u16
        };
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        for a in 0..q {
            let da = digits(a);
            neg[a as usize] = pack(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>());
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = pack(&s);
                let mut prod = vec![0u64; 2 * n - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                fp_rem(&mut prod, &modulus, p);
                prod.resize(n, 0);
                mul[a as usize * qs + b as usize] = pack(&prod);
            }
        }
        let mut inv = vec![0u16; qs];
        for a in 1..qs {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).expect("field has inverses") as u16;
        }
        let mut pth_root = vec![0u16; qs];
        for a in 0..qs {
            let mut x = 1usize;
            for _ in 0..p {
                x = mul[x * qs + a] as usize;
            }
            pth_root[x] = a as u16;
        }
        FieldSpec { p, n, q, modulus, add, mul, neg, inv, pth_root }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Ascending coefficients of the defining polynomial of `w` over F_p.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&'static self) -> FqElem {
        FqElem { spec: self, v: 0 }
    }

    pub fn one(&'static self) -> FqElem {
        FqElem { spec: self, v: 1 }
    }

    /// The element with table index `v` (base-p digits are the power-basis
    /// coordinates, least significant first).
    pub fn elem(&'static self, v: u64) -> FqElem {
        assert!(v < self.q, "index {v} out of range for F_{}", self.q);
        FqElem { spec: self, v: v as u16 }
    }

    /// The element `sum c_i w^i`.
    pub fn from_w_coeffs(&'static self, coeffs: &[u64]) -> FqElem {
        let mut acc = self.zero();
        let mut wpow = self.one();
        let w = self.w();
        for &c in coeffs {
            acc = acc + wpow * self.elem(c % self.p);
            wpow = wpow * w;
        }
        acc
    }

    /// The generator `w` (equal to the root of an n = 1 modulus).
    pub fn w(&'static self) -> FqElem {
        if self.n == 1 {
            self.elem((self.p - self.modulus[0]) % self.p)
        } else {
            self.elem(self.p)
        }
    }

    pub fn elements(&'static self) -> impl Iterator<Item = FqElem> + Clone {
        (0..self.q).map(move |v| self.elem(v))
    }

    pub fn nonzero_elements(&'static self) -> impl Iterator<Item = FqElem> + Clone {
        (1..self.q).map(move |v| self.elem(v))
    }

    /// The least (by index) generator of the cyclic group F_q^x.
    pub fn primitive_element(&'static self) -> FqElem {
        self.nonzero_elements()
            .find(|x| x.multiplicative_order() == self.q - 1)
            .expect("F_q^x is cyclic")
    }
}

/// An element of F_q.
#[derive(Clone, Copy)]
pub struct FqElem {
    spec: &'static FieldSpec,
    v: u16,
}

impl FqElem {
    pub fn spec(&self) -> &'static FieldSpec {
        self.spec
    }

    /// Table index; base-p digits are the power-basis coordinates.
    pub fn index(&self) -> u64 {
        self.v as u64
    }

    /// Power-basis coordinates over F_p, length exactly n.
    pub fn w_coeffs(&self) -> Vec<u64> {
        let p = self.spec.p;
        (0..self.spec.n).map(|i| self.v as u64 / p.pow(i as u32) % p).collect()
    }

    /// True when the element lies in the prime field F_p.
    pub fn is_prime_field(&self) -> bool {
        self.w_coeffs().iter().skip(1).all(|&c| c == 0)
    }

    pub fn multiplicative_order(&self) -> u64 {
        assert!(self.v != 0, "zero has no multiplicative order");
        let mut x = *self;
        let mut k = 1;
        while x.v != 1 {
            x = x * *self;
            k += 1;
        }
        k
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(std::ptr::eq(self.spec, other.spec), "mixing elements of different fields");
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.spec, other.spec) && self.v == other.v
    }
}

impl Eq for FqElem {}

impl Hash for FqElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.spec.q.hash(state);
        self.v.hash(state);
    }
}

impl PartialOrd for FqElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by table index, which is the canonical order used for
/// lexicographic comparisons of polynomials.
impl Ord for FqElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v.cmp(&other.v)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::gfq::text::format_fq(self))
    }
}

impl Ring for FqElem {
    type Ctx = &'static FieldSpec;

    fn ctx(&self) -> Self::Ctx {
        self.spec
    }

    fn zero(ctx: &Self::Ctx) -> Self {
        ctx.zero()
    }

    fn one(ctx: &Self::Ctx) -> Self {
        ctx.one()
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn is_one(&self) -> bool {
        self.v == 1
    }

    fn add(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        let q = self.spec.q as usize;
        FqElem { spec: self.spec, v: self.spec.add[self.v as usize * q + rhs.v as usize] }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Ring::add(self, &Ring::neg(rhs))
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        let q = self.spec.q as usize;
        FqElem { spec: self.spec, v: self.spec.mul[self.v as usize * q + rhs.v as usize] }
    }

    fn neg(&self) -> Self {
        FqElem { spec: self.spec, v: self.spec.neg[self.v as usize] }
    }
}

impl_ring_ops!([] FqElem);

impl Field for FqElem {
    fn inv(&self) -> Option<Self> {
        (self.v != 0).then(|| FqElem { spec: self.spec, v: self.spec.inv[self.v as usize] })
    }

    fn characteristic(ctx: &Self::Ctx) -> u64 {
        ctx.p
    }

    fn order(ctx: &Self::Ctx) -> BigUint {
        BigUint::from(ctx.q)
    }

    fn random<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self {
        ctx.elem(rng.gen_range(0..ctx.q))
    }

    fn pth_root(&self) -> Self {
        FqElem { spec: self.spec, v: self.spec.pth_root[self.v as usize] }
    }

    fn from_u64(ctx: &Self::Ctx, n: u64) -> Self {
        ctx.elem(n % ctx.p)
    }
}

impl FqAlgebra for FqElem {
    fn q_of(ctx: &Self::Ctx) -> u64 {
        ctx.q
    }

    fn frob(&self) -> Self {
        *self
    }

    fn scale(&self, c: &FqElem) -> Self {
        Ring::mul(self, c)
    }
}

impl FqField for FqElem {
    fn fq_dim(_: &Self::Ctx) -> usize {
        1
    }

    fn to_coords(&self) -> Vec<FqElem> {
        vec![*self]
    }

    fn from_coords(_: &Self::Ctx, coords: &[FqElem]) -> Self {
        coords[0]
    }

    fn base_fq(ctx: &Self::Ctx) -> &'static FieldSpec {
        ctx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_moduli_are_irreducible_and_interned() {
        for &(p, n, m) in MODULUS_TABLE {
            let a = FieldSpec::with_modulus(p, m).unwrap();
            let b = FieldSpec::new(p, n).unwrap();
            assert!(std::ptr::eq(a, b));
            assert_eq!(a.q(), p.pow(n as u32));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldSpec::new(2, 1).is_err());
        assert!(FieldSpec::new(9, 1).is_err());
        assert!(FieldSpec::new(3, 6).is_err());
        assert!(FieldSpec::from_q(12).is_err());
        // x^2 + 1 = (x + 2)^2 + ... is reducible over F_5 (2^2 = -1).
        assert_eq!(FieldSpec::with_modulus(5, &[1, 0, 1]), Err(Error::ReducibleModulus { p: 5 }));
    }

    #[test]
    fn field_axioms_exhaustive_small_fields() {
        for q in [3, 5, 7, 9, 25, 27] {
            let f = FieldSpec::from_q(q).unwrap();
            for a in f.elements() {
                assert_eq!(a + f.zero(), a);
                assert_eq!(a * f.one(), a);
                assert_eq!(a + (-a), f.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
                assert_eq!(a.pth_root().pow(f.p()), a);
                for b in f.elements().step_by(2) {
                    assert_eq!(a * b, b * a);
                    for c in f.elements().step_by(3) {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_field() {
        for q in [9, 25, 27] {
            let f = FieldSpec::from_q(q).unwrap();
            for a in f.elements() {
                assert_eq!(a.pow(f.p()) == a, a.is_prime_field(), "{a:?}");
                assert_eq!(a.pow(q), a);
            }
            // x -> x^p is additive.
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!((a + b).pow(f.p()), a.pow(f.p()) + b.pow(f.p()));
                }
            }
        }
    }

    #[test]
    fn generator_satisfies_modulus() {
        for q in [3, 5, 7, 9, 25, 27] {
            let f = FieldSpec::from_q(q).unwrap();
            let w = f.w();
            let value = f
                .modulus()
                .iter()
                .enumerate()
                .fold(f.zero(), |acc, (i, &c)| acc + f.elem(c) * w.pow(i as u64));
            assert!(value.is_zero());
            assert_eq!(f.primitive_element().multiplicative_order(), q - 1);
        }
    }
}
