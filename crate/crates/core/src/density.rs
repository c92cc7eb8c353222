//! Coefficient boxes `C_r(X)`, the congruence sieves `Π_r`, `Ω_r`, `Ω_r^S`,
//! local densities and Euler products.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfq::{count_irreducibles, factor_in_a, FieldSpec, FqPoly, PrimeOfA};
use crate::ring::Ring;

/// Largest box size `q^{rX}` a sweep will enumerate.
pub const SWEEP_BUDGET: u64 = 100_000_000;

/// `#C_r(X) = q^{rX} - q^{(r-1)X}`.
pub fn box_count(q: u64, r: usize, x: usize) -> BigUint {
    let q = BigUint::from(q);
    q.pow((r * x) as u32) - q.pow(((r - 1) * x) as u32)
}

/// The tuples `(g_1, ..., g_r)` with `deg g_i < X` and `g_r ≠ 0`, ordered
/// lexicographically by coefficient index with `g_1` most significant.
pub fn enumerate_box(fq: &'static FieldSpec, r: usize, x: usize) -> impl Iterator<Item = Vec<FqPoly>> {
    let per = fq.q().pow(x as u32);
    let total = per.pow(r as u32);
    (0..total).filter_map(move |idx| box_element(fq, r, x, idx))
}

/// The tuple with mixed-radix index `idx`, or `None` when `g_r = 0`.
pub fn box_element(fq: &'static FieldSpec, r: usize, x: usize, idx: u64) -> Option<Vec<FqPoly>> {
    let per = fq.q().pow(x as u32);
    let digits: Vec<u64> = (0..r).rev().map(|i| idx / per.pow(i as u32) % per).collect();
    if digits[r - 1] == 0 {
        return None;
    }
    Some(digits.into_iter().map(|d| FqPoly::from_index(fq, d)).collect())
}

/// First prime `l ≠ (T)` (by degree, then canonical order) with
/// `v_l(g_{r-1}) = 0` and `p ∤ v_l(g_r)`. Only primes dividing `g_r` can qualify.
pub fn pi_r_membership(g: &[FqPoly]) -> Option<PrimeOfA> {
    let r = g.len();
    if r < 2 || g[r - 1].is_zero() {
        return None;
    }
    let p = g[r - 1].ctx_ref().p() as usize;
    let (_, mut primes) = factor_in_a(&g[r - 1]).ok()?;
    primes.sort_by(|a, b| a.0.cmp(&b.0));
    primes
        .into_iter()
        .find(|(l, e)| !l.is_t() && e % p != 0 && !l.gen().divides(&g[r - 2]))
        .map(|(l, _)| l)
}

/// Whether `l` is a witness for `g`.
pub fn is_witness_at(g: &[FqPoly], l: &PrimeOfA) -> bool {
    let r = g.len();
    if r < 2 || l.is_t() || g[r - 1].is_zero() {
        return false;
    }
    let p = l.fq().p() as usize;
    let e = l.valuation(&g[r - 1]).unwrap_or(0);
    e % p != 0 && !l.gen().divides(&g[r - 2])
}

/// `l`-local condition of `Ω_r`: `v_l(g_r) = 0` or `v_l(g_r) >= p`.
pub fn in_omega_at(g: &[FqPoly], l: &PrimeOfA) -> bool {
    let gr = &g[g.len() - 1];
    let p = l.fq().p() as usize;
    match l.valuation(gr) {
        Ok(v) => v == 0 || v >= p,
        Err(_) => true,
    }
}

/// Membership in `Ω_r`: the local condition at every prime `l ≠ (T)`.
pub fn in_omega(g: &[FqPoly]) -> bool {
    let gr = &g[g.len() - 1];
    let p = gr.ctx_ref().p() as usize;
    match factor_in_a(gr) {
        Ok((_, primes)) => primes.iter().all(|(l, e)| l.is_t() || *e >= p),
        Err(_) => true,
    }
}

pub fn in_omega_s(g: &[FqPoly], s: &[PrimeOfA]) -> bool {
    s.iter().all(|l| in_omega_at(g, l))
}

fn check_s(s: &[PrimeOfA]) -> Result<()> {
    if s.iter().any(|l| l.is_t()) {
        return Err(Error::PrimeIsT);
    }
    Ok(())
}

/// `𝔡(l) = 1 - 1/q_l + 1/q_l^p`.
pub fn local_density(l: &PrimeOfA) -> BigRational {
    let ql = BigInt::from(l.norm());
    let p = l.fq().p() as u32;
    <BigRational as One>::one() - BigRational::new(BigInt::one(), ql.clone()) + BigRational::new(BigInt::one(), ql.pow(p))
}

/// `𝔡_S = prod_{l ∈ S} 𝔡(l)`.
pub fn omega_s_density(s: &[PrimeOfA]) -> Result<BigRational> {
    check_s(s)?;
    let distinct: BTreeSet<&PrimeOfA> = s.iter().collect();
    Ok(distinct.into_iter().fold(<BigRational as One>::one(), |acc, l| acc * local_density(l)))
}

/// `#Ω_r(l) / #C_r(l)` by counting all residue tuples modulo `l^p`.
/// Intended for small `q_l^{pr}`.
pub fn local_density_by_count(l: &PrimeOfA, r: usize) -> Result<BigRational> {
    if l.is_t() {
        return Err(Error::PrimeIsT);
    }
    let fq = l.fq();
    let p = fq.p() as usize;
    let lp = l.gen().pow(p as u64);
    let n = lp.degree().expect("nonzero");
    let residues = fq.q().pow(n as u32);
    let total = residues.pow(r as u32);
    if total > SWEEP_BUDGET {
        return Err(Error::BudgetExceeded(format!("{total} residue tuples")));
    }
    let good = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let gr = FqPoly::from_index(fq, idx % residues);
            gr.is_zero() || !l.gen().divides(&gr)
        })
        .count();
    Ok(BigRational::new(BigInt::from(good), BigInt::from(total)))
}

/// Scalars for Euler products: exact rationals or floats.
pub trait EulerScalar: Clone + PartialOrd + Send + Sync {
    fn ratio(n: &BigInt, d: &BigInt) -> Self;
    fn one() -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn powu(&self, e: u64) -> Self;
    fn to_f64(&self) -> f64;
}

impl EulerScalar for f64 {
    fn ratio(n: &BigInt, d: &BigInt) -> Self {
        ToPrimitive::to_f64(&BigRational::new(n.clone(), d.clone())).unwrap_or(f64::NAN)
    }
    fn one() -> Self {
        1.0
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn powu(&self, e: u64) -> Self {
        self.powf(e as f64)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl EulerScalar for BigRational {
    fn ratio(n: &BigInt, d: &BigInt) -> Self {
        BigRational::new(n.clone(), d.clone())
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn powu(&self, e: u64) -> Self {
        num_traits::pow::Pow::pow(self, BigUint::from(e))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug)]
pub struct EulerRow<S> {
    pub degree: usize,
    /// Number of primes of that degree.
    pub c_n: BigUint,
    /// `prod_{n <= degree} (1 - q^{-n} + q^{-np})^{c_n}`.
    pub partial: S,
    /// `-sum c_n log(1 - q^{-n} + q^{-np})`.
    pub log_sum: f64,
    /// `sum c_n (q^{-n} - q^{-np})`, a lower bound for `log_sum`.
    pub linear_bound: f64,
}

/// Partial Euler products over the primes of degree `<= b`.
pub fn euler_product_partial<S: EulerScalar>(q: u64, p: u64, b: usize) -> Vec<EulerRow<S>> {
    let mut partial = S::one();
    let mut log_sum = 0.0;
    let mut linear_bound = 0.0;
    (1..=b)
        .map(|n| {
            let qn = BigInt::from(q).pow(n as u32);
            let qnp = qn.pow(p as u32);
            let factor = S::ratio(&(&qnp - &qnp / &qn + 1), &qnp);
            let c_n = count_irreducibles(q, n as u64);
            let c = c_n.to_u64().expect("c_n fits in u64 at desk scale");
            partial = partial.mul(&factor.powu(c));
            let y = (q as f64).powi(-(n as i32)) - (q as f64).powi(-((n as u64 * p) as i32));
            log_sum -= c as f64 * (-y).ln_1p();
            linear_bound += c as f64 * y;
            EulerRow { degree: n, c_n, partial: partial.clone(), log_sum, linear_bound }
        })
        .collect()
}

/// Exact counts for one box.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoxCounts {
    pub total: u64,
    pub pi_r: u64,
    pub omega: u64,
    pub omega_s: u64,
    /// Tuples with no witness among the primes of `S`.
    pub no_witness_s: u64,
    /// Complement of `Π_r` that also lies outside `Ω_r`; zero when the
    /// containment `complement ⊆ Ω_r` holds.
    pub complement_outside_omega: u64,
    /// Complement of `Π_r` with a witness in `S`; always zero.
    pub complement_outside_no_witness_s: u64,
}

impl BoxCounts {
    fn merge(mut self, o: BoxCounts) -> BoxCounts {
        self.total += o.total;
        self.pi_r += o.pi_r;
        self.omega += o.omega;
        self.omega_s += o.omega_s;
        self.no_witness_s += o.no_witness_s;
        self.complement_outside_omega += o.complement_outside_omega;
        self.complement_outside_no_witness_s += o.complement_outside_no_witness_s;
        self
    }

    pub fn complement(&self) -> u64 {
        self.total - self.pi_r
    }

    pub fn pi_r_ratio(&self) -> BigRational {
        BigRational::new(self.pi_r.into(), self.total.max(1).into())
    }
}

/// Counts over `C_r(X)`, sharded over the index range and merged in order.
pub fn count_box(fq: &'static FieldSpec, r: usize, x: usize, s: &[PrimeOfA]) -> Result<BoxCounts> {
    check_s(s)?;
    if r < 2 {
        return Err(Error::Unsupported("Π_r requires r >= 2".into()));
    }
    let size = fq.q().checked_pow((r * x) as u32).filter(|&n| n <= SWEEP_BUDGET);
    let Some(size) = size else {
        return Err(Error::BudgetExceeded(format!("q^(rX) = {}^{} exceeds {SWEEP_BUDGET}", fq.q(), r * x)));
    };
    let shard = (fq.q().pow(x as u32)).max(64);
    let starts: Vec<u64> = (0..size).step_by(shard as usize).collect();
    let counts = starts
        .par_iter()
        .map(|&start| {
            let mut c = BoxCounts::default();
            for idx in start..(start + shard).min(size) {
                let Some(g) = box_element(fq, r, x, idx) else { continue };
                c.total += 1;
                let pi = pi_r_membership(&g).is_some();
                let omega = in_omega(&g);
                let no_wit = !s.iter().any(|l| is_witness_at(&g, l));
                c.pi_r += pi as u64;
                c.omega += omega as u64;
                c.omega_s += in_omega_s(&g, s) as u64;
                c.no_witness_s += no_wit as u64;
                c.complement_outside_omega += (!pi && !omega) as u64;
                c.complement_outside_no_witness_s += (!pi && !no_wit) as u64;
            }
            c
        })
        .collect::<Vec<_>>();
    Ok(counts.into_iter().fold(BoxCounts::default(), BoxCounts::merge))
}

/// The primes `l ≠ (T)` of degree `<= n`.
pub fn primes_excluding_t(fq: &'static FieldSpec, n: usize) -> Vec<PrimeOfA> {
    PrimeOfA::up_to_degree(fq, n).into_iter().filter(|l| !l.is_t()).collect()
}

/// One line of the sweep CSV.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub x: usize,
    pub counts: BoxCounts,
    /// `S` is the set of primes `≠ (T)` of degree `<= euler_bound`.
    pub euler_bound: usize,
    /// Exact `𝔡_S`; the CSV shows it as a float.
    pub euler_partial: BigRational,
}

pub const CSV_HEADER: &str = "X,total,pi_r_count,pi_r_ratio,euler_bound_B,euler_partial";

impl SweepRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.x,
            self.counts.total,
            self.counts.pi_r,
            self.counts.pi_r_ratio(),
            self.euler_bound,
            ToPrimitive::to_f64(&self.euler_partial).unwrap_or(f64::NAN)
        )
    }
}

/// `Π_r` counts for each `X`, with `𝔡_S` for `S` the primes `≠ (T)` of
/// degree `<= X`.
pub fn density_sweep(
    fq: &'static FieldSpec,
    r: usize,
    xs: impl IntoIterator<Item = usize>,
) -> Result<Vec<SweepRow>> {
    xs.into_iter()
        .map(|x| {
            let s = primes_excluding_t(fq, x);
            let counts = count_box(fq, r, x, &s)?;
            Ok(SweepRow { x, counts, euler_bound: x, euler_partial: omega_s_density(&s)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::parse_poly;

    fn f3() -> &'static FieldSpec {
        FieldSpec::new(3, 1).unwrap()
    }

    fn prime(s: &str) -> PrimeOfA {
        PrimeOfA::new(parse_poly(s, f3()).unwrap()).unwrap()
    }

    fn g(parts: &[&str]) -> Vec<FqPoly> {
        parts.iter().map(|s| parse_poly(s, f3()).unwrap()).collect()
    }

    #[test]
    fn small_box_counts() {
        assert_eq!(box_count(3, 2, 1), BigUint::from(6u32));
        assert_eq!(box_count(3, 2, 2), BigUint::from(72u32));
        assert_eq!(box_count(3, 1, 1), BigUint::from(2u32));
        assert_eq!(enumerate_box(f3(), 2, 2).count(), 72);
    }

    #[test]
    fn witnesses() {
        assert_eq!(pi_r_membership(&g(&["1", "T+1"])), Some(prime("T+1")));
        assert_eq!(pi_r_membership(&g(&["1", "(T+1)^3"])), None);
        assert_eq!(pi_r_membership(&g(&["T+1", "(T+1)*(T+2)"])), Some(prime("T+2")));
        assert_eq!(pi_r_membership(&g(&["1", "2"])), None);
        assert_eq!(pi_r_membership(&g(&["1", "T"])), None);
    }

    #[test]
    fn densities() {
        let d = omega_s_density(&[prime("T+1")]).unwrap();
        assert_eq!(d, BigRational::new(19.into(), 27.into()));
        assert_eq!(omega_s_density(&[]).unwrap(), <BigRational as One>::one());
        assert!(omega_s_density(&[prime("T")]).is_err());
    }
}
