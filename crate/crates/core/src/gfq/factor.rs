//! Factorization over finite fields and primes of A = F_q[T].
//!
//! Factorization is square-free decomposition, then distinct-degree
//! splitting, then Cantor–Zassenhaus equal-degree splitting driven by a
//! seeded ChaCha generator.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfq::ext::{ExtSpec, ResidueField};
use crate::gfq::{FieldSpec, FqElem, Poly};
use crate::ring::{Field, FqField, Ring};

/// Seed used when callers do not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_d41f;

/// `f = unit * prod factor^mult`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<F: Field> {
    pub unit: F,
    pub factors: Vec<(Poly<F>, usize)>,
}

impl<F: Field> Factorization<F> {
    pub fn expand(&self) -> Poly<F> {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, e)| acc * f.pow(*e as u64))
    }
}

/// Square-free decomposition: pairs `(s_i, i)` with `f/lc = prod s_i^i`,
/// each `s_i` square-free, monic and nonconstant.
pub fn squarefree_decomposition<F: Field>(f: &Poly<F>) -> Result<Vec<(Poly<F>, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = F::characteristic(f.ctx_ref()) as usize;
    let mut out = Vec::new();
    sqf_rec(&f.monic(), 1, p, &mut out);
    out.sort_by_key(|(_, e)| *e);
    Ok(out)
}

fn sqf_rec<F: Field>(f: &Poly<F>, mult: usize, p: usize, out: &mut Vec<(Poly<F>, usize)>) {
    if f.is_constant() {
        return;
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = g(T^p) = h^p with h having p-th roots of the coefficients.
        let ctx = f.ctx_ref();
        let coeffs = f.coeffs().iter().step_by(p).map(|c| c.pth_root()).collect();
        sqf_rec(&Poly::new(ctx, coeffs), mult * p, p, out);
        return;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_constant() {
            out.push((z, i * mult));
        }
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        // The remaining part is a p-th power.
        let ctx = c.ctx_ref().clone();
        let coeffs = c.coeffs().iter().step_by(p).map(|x| x.pth_root()).collect();
        sqf_rec(&Poly::new(&ctx, coeffs), mult * p, p, out);
    }
}

/// Splits a monic square-free `f` into `(g_d, d)` where `g_d` is the product
/// of the irreducible factors of degree `d`.
pub fn distinct_degree<F: Field>(f: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let ctx = f.ctx_ref().clone();
    let order = F::order(&ctx);
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = Poly::x(&ctx);
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (d + 1) {
            if deg > 0 {
                out.push((rest.clone(), deg));
            }
            break;
        }
        d += 1;
        h = h.pow_mod(&order, &rest).expect("nonzero");
        let g = rest.gcd(&(&h - &Poly::x(&ctx)));
        if !g.is_constant() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
    }
    out
}

/// Splits a monic square-free `f` whose irreducible factors all have degree
/// `d` (odd characteristic).
pub fn equal_degree<F: Field>(f: &Poly<F>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<F>> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.monic()];
    }
    let ctx = f.ctx_ref().clone();
    let e = (F::order(&ctx).pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let a = Poly::new(&ctx, (0..n).map(|_| F::random(&ctx, rng)).collect());
        if a.is_constant() {
            continue;
        }
        let mut g = a.gcd(f);
        if g.is_constant() {
            let b = a.pow_mod(&e, f).expect("nonzero") - Poly::one(&ctx);
            g = b.gcd(f);
        }
        if !g.is_constant() && g.degree() != f.degree() {
            let h = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Complete factorization with the given seed for the randomized step.
pub fn factor_seeded<F: Field + Ord>(f: &Poly<F>, seed: u64) -> Result<Factorization<F>> {
    let unit = f.leading().cloned().ok_or(Error::ZeroPolynomial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (s, mult) in squarefree_decomposition(f)? {
        for (g, d) in distinct_degree(&s) {
            for h in equal_degree(&g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort();
    // Square-free parts of different multiplicities are coprime, so no merging
    // is needed; assert it in debug builds.
    debug_assert!(factors.windows(2).all(|w| w[0].0 != w[1].0));
    Ok(Factorization { unit, factors })
}

pub fn factor<F: Field + Ord>(f: &Poly<F>) -> Result<Factorization<F>> {
    factor_seeded(f, DEFAULT_SEED)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: Field>(f: &Poly<F>) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let ctx = f.ctx_ref().clone();
    let f = f.monic();
    let order = F::order(&ctx);
    let x = Poly::x(&ctx);
    // x^{Q^k} mod f for k = 0..=n, by repeated Q-th powering.
    let mut pows = vec![x.clone()];
    for _ in 0..n {
        let next = pows.last().unwrap().pow_mod(&order, &f).expect("nonzero");
        pows.push(next);
    }
    if pows[n] != x.rem(&f).expect("nonzero") {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| f.gcd(&(&pows[n / r] - &x)).is_constant())
}

/// Least monic irreducible polynomial of degree `m` in the canonical order.
pub fn first_irreducible<F: FqField + Ord>(ctx: &F::Ctx, m: usize) -> Poly<F> {
    assert!(m >= 1);
    if m == 1 {
        return Poly::x(ctx);
    }
    // Canonical order on monic degree-m polynomials compares coefficients from
    // the top, so enumerate candidates in that order via the mixed-radix
    // counter over an enumeration of the base field.
    let elems = field_elements::<F>(ctx);
    let k = elems.len();
    let mut digits = vec![0usize; m];
    loop {
        let mut coeffs: Vec<F> = digits.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(F::one(ctx));
        let f = Poly::new(ctx, coeffs);
        if !f.coeff(0).is_zero() && is_irreducible(&f) {
            return f;
        }
        // Increment, least significant = lowest-degree coefficient.
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < m, "an irreducible polynomial of degree {m} exists");
        }
    }
}

/// All elements of a (small) finite field in ascending canonical order.
pub fn field_elements<F: FqField + Ord>(ctx: &F::Ctx) -> Vec<F> {
    let dim = F::fq_dim(ctx);
    let fq = F::base_fq(ctx);
    let q = fq.q();
    let count = q.checked_pow(dim as u32).filter(|&c| c <= 1 << 20).expect("small field");
    let mut v: Vec<F> = (0..count)
        .map(|i| {
            let coords: Vec<FqElem> =
                (0..dim).map(|j| fq.elem(i / q.pow(j as u32) % q)).collect();
            F::from_coords(ctx, &coords)
        })
        .collect();
    v.sort();
    v
}

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducible polynomials of degree `n` over F_q.
pub fn count_irreducibles(q: u64, n: u64) -> BigUint {
    assert!(n >= 1);
    let mut sum = BigInt::zero();
    for d in (1..=n).filter(|d| n % d == 0) {
        let term = BigInt::from(q).pow((n / d) as u32);
        match mobius(d) {
            1 => sum += term,
            -1 => sum -= term,
            _ => {}
        }
    }
    (sum / BigInt::from(n)).to_biguint().expect("nonnegative count")
}

/// All monic irreducible polynomials of degree `n` over F_q, in index order.
pub fn enumerate_irreducibles(fq: &'static FieldSpec, n: usize) -> Vec<Poly<FqElem>> {
    let q = fq.q();
    let size = q.checked_pow(n as u32).filter(|&s| s <= 1 << 24);
    let Some(size) = size else {
        return Poly::monic_of_degree(fq, n).filter(is_irreducible).collect();
    };
    // Sieve: strike every product of a monic irreducible of degree k <= n/2
    // with a monic polynomial of degree n - k.
    let mut composite = vec![false; size as usize];
    for k in 1..=n / 2 {
        let cofactors: Vec<_> = Poly::monic_of_degree(fq, n - k).collect();
        for g in enumerate_irreducibles(fq, k) {
            for h in &cofactors {
                let idx = (&g * h).index() - size;
                composite[idx as usize] = true;
            }
        }
    }
    (0..size)
        .filter(|&i| !composite[i as usize])
        .map(|i| Poly::from_index(fq, size + i))
        .collect()
}

/// A prime of A: a monic irreducible `a_l` with its residue field.
#[derive(Clone)]
pub struct PrimeOfA {
    gen: Poly<FqElem>,
    residue: ResidueField,
}

impl PrimeOfA {
    pub fn new(gen: Poly<FqElem>) -> Result<Self> {
        if !gen.is_monic() || !is_irreducible(&gen) {
            return Err(Error::NotPrime(gen.to_string()));
        }
        let residue = ExtSpec::new_unchecked(&gen);
        Ok(PrimeOfA { gen, residue })
    }

    pub fn gen(&self) -> &Poly<FqElem> {
        &self.gen
    }

    pub fn degree(&self) -> usize {
        self.gen.degree().expect("nonzero")
    }

    pub fn fq(&self) -> &'static FieldSpec {
        *self.gen.ctx_ref()
    }

    /// `q_l = q^{deg l}`.
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.fq().q()).pow(self.degree() as u32)
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    /// Whether this is the prime (T).
    pub fn is_t(&self) -> bool {
        self.degree() == 1 && self.gen.coeff(0).is_zero()
    }

    /// Reduction `A -> k_l`.
    pub fn reduce(&self, f: &Poly<FqElem>) -> crate::gfq::Kp {
        self.residue.from_poly(f)
    }

    pub fn valuation(&self, f: &Poly<FqElem>) -> Result<usize> {
        f.valuation_at(&self.gen)
    }

    /// Primes of degree exactly `n`, in index order.
    pub fn of_degree(fq: &'static FieldSpec, n: usize) -> Vec<PrimeOfA> {
        enumerate_irreducibles(fq, n)
            .into_iter()
            .map(|g| {
                let residue = ExtSpec::new_unchecked(&g);
                PrimeOfA { gen: g, residue }
            })
            .collect()
    }

    /// Primes of degree `1..=max_degree`, ordered by degree then index.
    pub fn up_to_degree(fq: &'static FieldSpec, max_degree: usize) -> Vec<PrimeOfA> {
        (1..=max_degree).flat_map(|n| Self::of_degree(fq, n)).collect()
    }
}

impl PartialEq for PrimeOfA {
    fn eq(&self, other: &Self) -> bool {
        self.gen == other.gen
    }
}

impl Eq for PrimeOfA {}

impl std::hash::Hash for PrimeOfA {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.gen.hash(state);
    }
}

impl PartialOrd for PrimeOfA {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeOfA {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.gen.cmp(&other.gen)
    }
}

impl fmt::Debug for PrimeOfA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

impl fmt::Display for PrimeOfA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen)
    }
}

/// Factorization of an element of A into primes of A.
pub fn factor_in_a(f: &Poly<FqElem>) -> Result<(FqElem, Vec<(PrimeOfA, usize)>)> {
    let fac = factor(f)?;
    let primes = fac
        .factors
        .into_iter()
        .map(|(g, e)| {
            let residue = ExtSpec::new_unchecked(&g);
            (PrimeOfA { gen: g, residue }, e)
        })
        .collect();
    Ok((fac.unit, primes))
}
