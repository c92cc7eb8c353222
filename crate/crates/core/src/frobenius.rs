//! Frobenius data at a prime P of good reduction.
//!
//! Torsion points are found by linear algebra: `φ_{T^k}` is F_q-linear, so
//! its roots in an extension `L` of `k_P` form the kernel of an F_q-matrix.
//! The characteristic polynomial of `π = τ^d` is found independently by
//! solving `π^r + φ_{c_{r-1}} π^{r-1} + ... + φ_{c_0} = 0` in `k_P{τ}` for
//! `c_i ∈ A` of bounded degree.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::drinfeld::{DrinfeldModule, ReducedModule, ReductionClass};
use crate::error::{Error, Result};
use crate::gfq::{format_poly, ExtCtx, ExtSpec, FqElem, FqPoly, Kp, KpExt, PrimeOfA};
use crate::linalg::Matrix;
use crate::ring::{Field, FqAlgebra, FqField, Ring};
use crate::tau::TauPoly;

/// Largest extension degree `m` over `k_P` searched for split torsion.
pub const DEFAULT_SPLIT_CAP: usize = 12;

/// A basis of `φ[T^k]` over `A/(T^k)`, inside `L = k_P(θ)` with `[L : k_P] = m`.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    pub prime: PrimeOfA,
    pub level: usize,
    pub ext_degree: usize,
    pub field: ExtCtx<Kp>,
    /// `r` elements generating `φ[T^k]` as an `A/(T^k)`-module.
    pub basis: Vec<KpExt>,
    /// F_q-basis `T^j · basis[i]`, ordered by `j` then `i`.
    pub fq_basis: Vec<KpExt>,
    phi_t: TauPoly<Kp>,
}

impl TorsionBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `φ_T(x)` evaluated in `L`.
    pub fn apply_phi_t(&self, x: &KpExt) -> KpExt {
        eval_in(&self.phi_t, &self.field, x)
    }

    /// Every point of `φ[T^k]`, as F_q-combinations of `fq_basis`.
    pub fn all_points(&self) -> Vec<KpExt> {
        let fq = self.prime.fq();
        let n = self.fq_basis.len();
        let q = fq.q();
        (0..q.pow(n as u32))
            .map(|idx| {
                self.fq_basis.iter().enumerate().fold(self.field.zero(), |acc, (i, b)| {
                    acc + b.scale(&fq.elem(idx / q.pow(i as u32) % q))
                })
            })
            .collect()
    }
}

fn eval_in(tau: &TauPoly<Kp>, l: &ExtCtx<Kp>, x: &KpExt) -> KpExt {
    tau.eval_with(x, |c| l.embed(c))
}

/// Matrix over F_q of an F_q-linear map on `L`, columns indexed by the
/// coordinate basis.
fn linear_map_matrix(l: &ExtCtx<Kp>, f: impl Fn(&KpExt) -> KpExt) -> Matrix<FqElem> {
    let fq = KpExt::base_fq(l);
    let cols = KpExt::fq_basis(l).iter().map(|e| f(e).to_coords()).collect();
    Matrix::from_cols(&fq, cols)
}

fn kernel_points(l: &ExtCtx<Kp>, tau: &TauPoly<Kp>) -> Vec<KpExt> {
    linear_map_matrix(l, |x| eval_in(tau, l, x))
        .kernel()
        .into_iter()
        .map(|v| KpExt::from_coords(l, &v))
        .collect()
}

fn check_prime(phi: &DrinfeldModule, prime: &PrimeOfA) -> Result<ReducedModule> {
    if prime.is_t() {
        return Err(Error::PrimeIsT);
    }
    let (info, red) = phi.reduce_at(prime);
    if info.class != ReductionClass::Good {
        return Err(Error::BadReduction(prime.to_string()));
    }
    Ok(red)
}

/// `x -> x^{q^d}` on `L`, the arithmetic Frobenius at a prime of degree `d`.
pub fn frob_at(x: &KpExt, d: usize) -> KpExt {
    (0..d).fold(x.clone(), |acc, _| acc.frob())
}

pub fn torsion_basis(
    phi: &DrinfeldModule,
    prime: &PrimeOfA,
    level: usize,
    cap: usize,
) -> Result<TorsionBasis> {
    if level == 0 {
        return Err(Error::Unsupported("torsion level must be at least 1".into()));
    }
    let red = check_prime(phi, prime)?;
    let r = phi.rank();
    let fq = phi.fq();
    let t_k = red.phi(&FqPoly::monomial(fq.one(), level));
    for m in 1..=cap {
        let l = ExtSpec::<Kp>::of_degree(red.residue_field(), m);
        let points = kernel_points(&l, &t_k);
        if points.len() != r * level {
            continue;
        }
        let phi_t = red.phi_t().clone();
        let tb = if level == 1 {
            TorsionBasis {
                prime: prime.clone(),
                level,
                ext_degree: m,
                field: l,
                basis: points.clone(),
                fq_basis: points,
                phi_t,
            }
        } else {
            // Greedy choice of elements independent modulo φ[T^{k-1}].
            let lower = kernel_points(&l, &red.phi(&FqPoly::monomial(fq.one(), level - 1)));
            let mut span: Vec<Vec<FqElem>> = lower.iter().map(|x| x.to_coords()).collect();
            let mut rank = span.len();
            let mut basis = Vec::new();
            for w in points {
                span.push(w.to_coords());
                let new_rank = Matrix::from_rows(&fq, span.clone()).rank();
                if new_rank > rank {
                    rank = new_rank;
                    basis.push(w);
                } else {
                    span.pop();
                }
            }
            debug_assert_eq!(basis.len(), r);
            let mut fq_basis = basis.clone();
            let mut layer = basis.clone();
            for _ in 1..level {
                layer = layer.iter().map(|x| eval_in(&phi_t, &l, x)).collect();
                fq_basis.extend(layer.iter().cloned());
            }
            TorsionBasis { prime: prime.clone(), level, ext_degree: m, field: l, basis, fq_basis, phi_t }
        };
        return Ok(tb);
    }
    Err(Error::SplittingCapExceeded { level, cap })
}

/// A square matrix over `A/(T^k)`, entries stored as truncated polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMatrix {
    pub level: usize,
    pub size: usize,
    pub entries: Vec<FqPoly>,
}

impl LevelMatrix {
    pub fn get(&self, i: usize, j: usize) -> &FqPoly {
        &self.entries[i * self.size + j]
    }

    /// Reduction to `A/(T^k')` for `k' <= k`.
    pub fn reduce(&self, level: usize) -> LevelMatrix {
        assert!(level <= self.level);
        LevelMatrix {
            level,
            size: self.size,
            entries: self.entries.iter().map(|e| e.truncate(level)).collect(),
        }
    }

    pub fn mod_t(&self) -> Matrix<FqElem> {
        let fq = self.entries[0].ctx_ref();
        let rows = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j).coeff(0)).collect())
            .collect();
        Matrix::from_rows(fq, rows)
    }

    pub fn mul(&self, other: &LevelMatrix) -> LevelMatrix {
        assert_eq!((self.level, self.size), (other.level, other.size));
        let n = self.size;
        let fq = *self.entries[0].ctx_ref();
        let entries = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                (0..n)
                    .fold(FqPoly::zero(&fq), |acc, k| acc + self.get(i, k) * other.get(k, j))
                    .truncate(self.level)
            })
            .collect();
        LevelMatrix { level: self.level, size: n, entries }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| {
                let e = self.get(i, j);
                if i == j { e.is_one() } else { e.is_zero() }
            })
        })
    }
}

impl fmt::Display for LevelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.size)
            .map(|i| {
                let row: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Matrix of `x -> x^{q^d}` on the torsion basis: column `j` holds the
/// `A/(T^k)`-coordinates of `Frob(basis[j])`.
pub fn frobenius_matrix(tb: &TorsionBasis) -> Result<LevelMatrix> {
    let fq = tb.prime.fq();
    let d = tb.prime.degree();
    let r = tb.rank();
    let k = tb.level;
    let b = Matrix::from_cols(&fq, tb.fq_basis.iter().map(|x| x.to_coords()).collect());
    let mut entries = vec![FqPoly::zero(&fq); r * r];
    for (j, w) in tb.basis.iter().enumerate() {
        let image = frob_at(w, d);
        let (c, kernel_dim) = b
            .solve(&image.to_coords())
            .ok_or_else(|| Error::Inconsistent("Frobenius image left the torsion module".into()))?;
        debug_assert_eq!(kernel_dim, 0);
        for i in 0..r {
            let coeffs = (0..k).map(|t| c[t * r + i]).collect();
            entries[i * r + j] = FqPoly::new(&fq, coeffs);
        }
    }
    Ok(LevelMatrix { level: k, size: r, entries })
}

/// `X^r + c_{r-1} X^{r-1} + ... + c_0` with `c_i ∈ A`, annihilating `π = τ^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobCharPoly {
    pub prime: PrimeOfA,
    /// `c_0, ..., c_{r-1}`.
    pub coeffs: Vec<FqPoly>,
}

impl FrobCharPoly {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Reduction modulo T, a monic polynomial over F_q.
    pub fn mod_t(&self) -> FqPoly {
        let fq = self.prime.fq();
        let mut c: Vec<FqElem> = self.coeffs.iter().map(|ci| ci.coeff(0)).collect();
        c.push(fq.one());
        FqPoly::new(&fq, c)
    }

    /// `(-1)^r c_0 mod T`, the determinant of Frobenius on `φ[T]`.
    pub fn det_mod_t(&self) -> FqElem {
        let c0 = self.coeffs[0].coeff(0);
        if self.rank() % 2 == 0 { c0 } else { -c0 }
    }

    /// Checks `π^r + sum φ_{c_i} π^i = 0` in `k_P{τ}` directly.
    pub fn annihilates(&self, phi: &DrinfeldModule) -> bool {
        let (_, red) = phi.reduce_at(&self.prime);
        let d = self.prime.degree();
        let r = self.rank();
        let kp = red.residue_field();
        let mut total = TauPoly::monomial(kp.one(), r * d);
        for (i, c) in self.coeffs.iter().enumerate() {
            total = &total + &shift(&red.phi(c), i * d);
        }
        total.is_zero()
    }
}

impl fmt::Display for FrobCharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rank();
        let mut parts = vec![format!("X^{r}")];
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let s = if c.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            };
            parts.push(match i {
                0 => s,
                1 => format!("{s}*X"),
                _ => format!("{s}*X^{i}"),
            });
        }
        f.write_str(&parts.join("+"))
    }
}

/// Right multiplication by `τ^n`.
fn shift(f: &TauPoly<Kp>, n: usize) -> TauPoly<Kp> {
    let ctx = f.ctx_ref();
    let mut coeffs = vec![Kp::zero(ctx); n];
    coeffs.extend(f.coeffs().iter().cloned());
    TauPoly::new(ctx, coeffs)
}

/// `N_{k_P/F_q}(x) = x^{(q^d - 1)/(q - 1)}`.
fn norm_to_fq(x: &Kp, q: u64, d: usize) -> FqElem {
    let e = (BigUint::from(q).pow(d as u32) - 1u32) / BigUint::from(q - 1);
    x.pow_big(&e).as_base().expect("norms lie in F_q")
}

pub fn frob_charpoly(phi: &DrinfeldModule, prime: &PrimeOfA) -> Result<FrobCharPoly> {
    let red = check_prime(phi, prime)?;
    let fq = phi.fq();
    let q = fq.q();
    let r = phi.rank();
    let d = prime.degree();
    let kp = red.residue_field();
    let bounds: Vec<usize> = (0..r).map(|i| ((r - i) * d).div_ceil(r)).collect();

    // φ_{T^j} for j up to the largest bound.
    let max_b = *bounds.iter().max().expect("r >= 1");
    let mut powers = vec![TauPoly::one(kp)];
    for _ in 0..max_b {
        let next = powers.last().unwrap() * red.phi_t();
        powers.push(next);
    }
    // Unknown (i, j) contributes c_{ij} φ_{T^j} τ^{i d}.
    let mut unknowns = Vec::new();
    let mut columns = Vec::new();
    for (i, &b) in bounds.iter().enumerate() {
        for (j, pw) in powers.iter().enumerate().take(b + 1) {
            unknowns.push((i, j));
            columns.push(shift(pw, i * d));
        }
    }
    let top = r * d;
    let len = columns.iter().filter_map(|c| c.degree()).chain([top]).max().unwrap() + 1;
    let flatten = |f: &TauPoly<Kp>| -> Vec<FqElem> {
        (0..len).flat_map(|k| f.coeff(k).to_coords()).collect()
    };
    let rhs: Vec<FqElem> = flatten(&TauPoly::monomial(kp.one(), top)).iter().map(|x| -*x).collect();
    let cols: Vec<Vec<FqElem>> = columns.iter().map(flatten).collect();
    let a = Matrix::from_cols(&fq, cols.clone());

    let (mut sol, kernel_dim) = a
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem(format!("no solution at {prime}")))?;
    if kernel_dim > 0 {
        // Pin c_0 = ε P with ε = (-1)^{rd-r-d} N(ḡ_r)^{-1}.
        let gr = prime.reduce(phi.g(r));
        let sign_odd = (r * d + r + d) % 2 == 1;
        let mut eps = norm_to_fq(&gr, q, d).inv().expect("good reduction");
        if sign_odd {
            eps = -eps;
        }
        let c0 = prime.gen().scale(&eps);
        let fixed: Vec<usize> = (0..unknowns.len()).filter(|&u| unknowns[u].0 == 0).collect();
        let free: Vec<usize> = (0..unknowns.len()).filter(|&u| unknowns[u].0 != 0).collect();
        let mut rhs2 = rhs.clone();
        for &u in &fixed {
            let c = c0.coeff(unknowns[u].1);
            for (row, x) in rhs2.iter_mut().enumerate() {
                *x = *x - c * cols[u][row];
            }
        }
        if c0.degree().unwrap_or(0) > bounds[0] {
            return Err(Error::SingularSystem("norm constraint exceeds the degree bound".into()));
        }
        let a2 = Matrix::from_cols(&fq, free.iter().map(|&u| cols[u].clone()).collect());
        let (sol2, kd2) = a2
            .solve(&rhs2)
            .ok_or_else(|| Error::SingularSystem(format!("norm constraint inconsistent at {prime}")))?;
        if kd2 > 0 {
            return Err(Error::SingularSystem(format!("non-unique solution at {prime}")));
        }
        for &u in &fixed {
            sol[u] = c0.coeff(unknowns[u].1);
        }
        for (k, &u) in free.iter().enumerate() {
            sol[u] = sol2[k];
        }
    }
    let mut coeffs = vec![Vec::new(); r];
    for (u, &(i, j)) in unknowns.iter().enumerate() {
        if coeffs[i].len() <= j {
            coeffs[i].resize(j + 1, fq.zero());
        }
        coeffs[i][j] = sol[u];
    }
    let coeffs = coeffs.into_iter().map(|c| FqPoly::new(&fq, c)).collect();
    Ok(FrobCharPoly { prime: prime.clone(), coeffs })
}

/// Per-prime Frobenius data.
#[derive(Clone, Debug)]
pub struct FrobSample {
    /// `None` for synthetic samples.
    pub prime: Option<PrimeOfA>,
    pub d: usize,
    pub charpoly: Option<FrobCharPoly>,
    pub charpoly_mod_t: FqPoly,
    pub det_mod_t: FqElem,
    /// Present when `φ[T]` splits within the extension cap.
    pub matrix_mod_t: Option<Matrix<FqElem>>,
    /// Present when `φ[T^2]` splits within the cap and level 2 was requested.
    pub matrix_mod_t2: Option<LevelMatrix>,
}

impl FrobSample {
    /// A sample with a prescribed Frobenius matrix and no prime attached.
    pub fn synthetic(m: &Matrix<FqElem>) -> FrobSample {
        FrobSample {
            prime: None,
            d: 0,
            charpoly: None,
            charpoly_mod_t: m.charpoly(),
            det_mod_t: m.det(),
            matrix_mod_t: Some(m.clone()),
            matrix_mod_t2: None,
        }
    }

    /// JSON line `{"P":..,"d":..,"charpoly_modT":..,"det":..}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "P": self.prime.as_ref().map(|p| p.to_string()),
            "d": self.d,
            "charpoly_modT": format_poly(&self.charpoly_mod_t, "x"),
            "det": self.det_mod_t.to_string(),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    pub cap: usize,
    pub level2: bool,
    /// Compute the Frobenius matrix from torsion (otherwise only the
    /// characteristic polynomial).
    pub matrices: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { cap: DEFAULT_SPLIT_CAP, level2: false, matrices: true }
    }
}

pub fn frob_sample(phi: &DrinfeldModule, prime: &PrimeOfA, opts: SampleOptions) -> Result<FrobSample> {
    let cp = frob_charpoly(phi, prime)?;
    let charpoly_mod_t = cp.mod_t();
    let det_mod_t = cp.det_mod_t();
    let mut matrix_mod_t = None;
    let mut matrix_mod_t2 = None;
    if opts.matrices {
        if opts.level2 {
            match torsion_basis(phi, prime, 2, opts.cap) {
                Ok(tb) => {
                    let m2 = frobenius_matrix(&tb)?;
                    matrix_mod_t = Some(m2.mod_t());
                    matrix_mod_t2 = Some(m2);
                }
                Err(Error::SplittingCapExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if matrix_mod_t.is_none() {
            match torsion_basis(phi, prime, 1, opts.cap) {
                Ok(tb) => matrix_mod_t = Some(frobenius_matrix(&tb)?.mod_t()),
                Err(Error::SplittingCapExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if let Some(m) = &matrix_mod_t {
        if m.charpoly() != charpoly_mod_t {
            return Err(Error::Inconsistent(format!(
                "Frobenius charpoly mismatch at {prime}: matrix {} vs linear system {}",
                format_poly(&m.charpoly(), "x"),
                format_poly(&charpoly_mod_t, "x")
            )));
        }
    }
    Ok(FrobSample {
        prime: Some(prime.clone()),
        d: prime.degree(),
        charpoly: Some(cp),
        charpoly_mod_t,
        det_mod_t,
        matrix_mod_t,
        matrix_mod_t2,
    })
}

/// Samples at every good prime `P ≠ (T)` of degree `<= max_degree`, ordered
/// by degree then canonical order. Computed in parallel.
pub fn sample_frobenius(
    phi: &DrinfeldModule,
    max_degree: usize,
    opts: SampleOptions,
) -> Result<Vec<FrobSample>> {
    let primes: Vec<PrimeOfA> = PrimeOfA::up_to_degree(phi.fq(), max_degree)
        .into_iter()
        .filter(|p| !p.is_t() && phi.reduction_info(p).class == ReductionClass::Good)
        .collect();
    primes.par_iter().map(|p| frob_sample(phi, p, opts)).collect()
}

/// The scalar by which Frobenius acts on `ψ[T]` for a rank-one module,
/// computed from an explicit torsion point.
pub fn rank_one_frobenius_scalar(psi: &DrinfeldModule, prime: &PrimeOfA) -> Result<FqElem> {
    if psi.rank() != 1 {
        return Err(Error::InvalidModule("rank one required".into()));
    }
    let tb = torsion_basis(psi, prime, 1, (psi.fq().q() - 1) as usize)?;
    Ok(frobenius_matrix(&tb)?.get(0, 0).coeff(0))
}
