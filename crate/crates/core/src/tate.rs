//! Truncated exponentials `e(x) = x prod_{0 ≠ λ ∈ Λ_N} (1 - x/λ)` of a rank-1
//! lattice `Λ = {ϕ_a(γ)}` for a rank-1 module `ϕ_T = T + b τ` over the local
//! field `F_l`, with good reduction (`v(b) = 0`) and `v(γ) < 0`.

use num_bigint::BigUint;

use crate::drinfeld::phi_horner;
use crate::error::{Error, Result};
use crate::gfq::{FqPoly, Kp, PrimeOfA};
use crate::laurent::{LocalElem, LocalEmbedding};
use crate::ring::{Field, Ring};
use crate::tau::TauPoly;

#[derive(Clone, Debug)]
pub struct LatticeDatum {
    pub local: LocalEmbedding,
    /// `ϕ_T = T + b τ`.
    pub varphi_t: TauPoly<LocalElem>,
    pub gamma: LocalElem,
    /// Largest `deg a` in the truncated lattice.
    pub cutoff: usize,
}

impl LatticeDatum {
    /// `γ = u^{-e}` and `ϕ_T = T + b τ` with `b ∈ A` a unit at `l`.
    pub fn new(prime: &PrimeOfA, b: &FqPoly, gamma_val: u32, cutoff: usize, precision: i64) -> Result<Self> {
        let local = LocalEmbedding::new(prime, precision)?;
        let gamma = LocalElem::monomial(&local.ctx, local.ctx.residue.one(), -(gamma_val as i64));
        Self::with_gamma(local.clone(), local.embed(b), gamma, cutoff)
    }

    pub fn with_gamma(local: LocalEmbedding, b: LocalElem, gamma: LocalElem, cutoff: usize) -> Result<Self> {
        if b.valuation() != Some(0) {
            return Err(Error::InvalidModule("good reduction needs v(b) = 0".into()));
        }
        if !gamma.valuation().is_some_and(|v| v < 0) {
            return Err(Error::InvalidModule("the lattice generator needs v(γ) < 0".into()));
        }
        let varphi_t = TauPoly::new(&local.ctx, vec![local.t.clone(), b]);
        Ok(LatticeDatum { local, varphi_t, gamma, cutoff })
    }

    pub fn prime(&self) -> &PrimeOfA {
        &self.local.prime
    }

    pub fn q(&self) -> u64 {
        self.prime().fq().q()
    }

    pub fn varphi(&self, a: &FqPoly) -> TauPoly<LocalElem> {
        phi_horner(&self.varphi_t, a, |c| self.local.embed_fq(c))
    }

    /// `ϕ_a(γ)` for every `a` with `deg a <= n`, in index order (`a = 0` first).
    pub fn lattice_upto(&self, n: usize) -> Vec<LocalElem> {
        FqPoly::all_below_degree(self.prime().fq(), n + 1).map(|a| self.varphi(&a).eval(&self.gamma)).collect()
    }

    /// `Λ_N`, of size `q^{N+1}`.
    pub fn lattice(&self) -> Vec<LocalElem> {
        self.lattice_upto(self.cutoff)
    }

    pub fn nonzero_lattice(&self) -> Vec<LocalElem> {
        self.lattice().into_iter().skip(1).collect()
    }
}

/// The expanded product together with its F_q-linear form.
#[derive(Clone, Debug)]
pub struct TruncatedExp {
    /// Coefficient of `x^k` for `k = 0..=|Λ_N|`.
    pub dense: Vec<LocalElem>,
    /// Coefficient of `τ^i` is that of `x^{q^i}`.
    pub tau: TauPoly<LocalElem>,
}

impl TruncatedExp {
    pub fn eval(&self, x: &LocalElem) -> LocalElem {
        self.tau.eval(x)
    }

    /// Exponents `k` off the powers of `q` with a coefficient that is not
    /// zero to its precision.
    pub fn off_power_support(&self, q: u64) -> Vec<usize> {
        self.dense
            .iter()
            .enumerate()
            .filter(|(k, c)| !is_q_power(*k as u64, q) && !c.is_zero_within_precision())
            .map(|(k, _)| k)
            .collect()
    }
}

fn is_q_power(mut k: u64, q: u64) -> bool {
    if k == 0 {
        return false;
    }
    while k % q == 0 {
        k /= q;
    }
    k == 1
}

pub fn exp_truncated(datum: &LatticeDatum) -> Result<TruncatedExp> {
    let ctx = datum.local.ctx.clone();
    let q = datum.q();
    let inverses = datum.nonzero_lattice().iter().map(|l| l.inv()).collect::<Result<Vec<_>>>()?;
    let mut dense = vec![LocalElem::zero(&ctx), LocalElem::one(&ctx)];
    for y in &inverses {
        // Multiply by (1 - y x).
        let mut next = dense.clone();
        next.push(LocalElem::zero(&ctx));
        for k in 1..next.len() {
            next[k] = next[k].sub(&y.mul(&dense[k - 1]));
        }
        dense = next;
    }
    let tmp = TruncatedExp { dense, tau: TauPoly::zero(&ctx) };
    let off = tmp.off_power_support(q);
    if !off.is_empty() {
        return Err(Error::Inconsistent(format!("nonzero coefficients off q-powers at {off:?}")));
    }
    let mut coeffs = Vec::new();
    let mut k = 1usize;
    while k < tmp.dense.len() {
        let c = &tmp.dense[k];
        if c.valuation().is_none() && !c.is_zero() {
            return Err(Error::PrecisionExhausted(format!("coefficient of x^{k} is known only as {c:?}")));
        }
        coeffs.push(c.clone());
        k *= q as usize;
    }
    Ok(TruncatedExp { tau: TauPoly::new(&ctx, coeffs), dense: tmp.dense })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCheck {
    pub i: usize,
    /// Against `(-1)^{q^i - 1} e_{q^i - 1}(1/λ)` over distinct nonzero points.
    pub subsets: bool,
    /// The same sum with sign `(-1)^i`.
    pub subsets_sign_i: bool,
    /// Against the sum over ordered tuples with repetition, `(sum 1/λ)^{q^i - 1}`, with sign `(-1)^i`.
    pub ordered_tuples: bool,
}

/// Elementary symmetric functions `e_0..=e_k` of `ys`.
pub fn elementary_symmetric(ys: &[LocalElem], k: usize, ctx: &crate::laurent::LaurentCtx<Kp>) -> Vec<LocalElem> {
    let mut e = vec![LocalElem::zero(ctx); k + 1];
    e[0] = LocalElem::one(ctx);
    for y in ys {
        for j in (1..=k).rev() {
            e[j] = e[j].add(&y.mul(&e[j - 1]));
        }
    }
    e
}

pub fn check_coefficient_formula(datum: &LatticeDatum, exp: &TruncatedExp, i: usize) -> Result<CoefficientCheck> {
    let q = datum.q() as usize;
    let k = q.pow(i as u32) - 1;
    let n = exp.dense.len() - 1;
    if k > n - 1 {
        return Err(Error::IndexOutOfRange(format!("x^{} exceeds the truncated lattice", k + 1)));
    }
    let ctx = &datum.local.ctx;
    let ys = datum.nonzero_lattice().iter().map(|l| l.inv()).collect::<Result<Vec<_>>>()?;
    let ek = elementary_symmetric(&ys, k, ctx).pop().expect("k + 1 entries");
    let sign = |odd: bool, x: &LocalElem| if odd { x.neg() } else { x.clone() };
    let target = &exp.dense[k + 1];
    let power_sum = ys.iter().fold(LocalElem::zero(ctx), |acc, y| acc.add(y));
    let tuples = sign(i % 2 == 1, &power_sum.pow(k as u64));
    Ok(CoefficientCheck {
        i,
        subsets: target.agrees(&sign(k % 2 == 1, &ek)),
        subsets_sign_i: target.agrees(&sign(i % 2 == 1, &ek)),
        ordered_tuples: target.agrees(&tuples) && !target.is_zero_within_precision(),
    })
}

#[derive(Clone, Debug)]
pub struct FunctionalReport {
    /// `ϕ_T(Λ_{N-1}) ⊆ Λ_N`.
    pub lattice_stable: bool,
    /// `e(ϕ_T(λ)) = ϕ_T(e(λ)) = 0` for `λ ∈ Λ_{N-1}`.
    pub kernel: bool,
    /// `e(x + λ) = e(x)` at the sample points.
    pub periodic: bool,
    /// `(v(w), v(e(w)))` for the test points.
    pub valuations: Vec<(i64, Option<i64>)>,
    /// Torsion points of `ϕ[T]` found in `F_l` (excluding 0).
    pub torsion_points: usize,
}

impl FunctionalReport {
    pub fn valuations_preserved(&self) -> bool {
        self.valuations.iter().all(|(v, w)| Some(*v) == *w)
    }

    pub fn holds(&self) -> bool {
        self.lattice_stable && self.kernel && self.periodic && self.valuations_preserved()
    }
}

/// Nonzero roots of `ϕ_T(x) = T x + b x^q` in `F_l`: `x^{q-1} = -T/b`, lifted
/// from residue roots by Newton iteration.
pub fn rational_torsion(datum: &LatticeDatum) -> Result<Vec<LocalElem>> {
    let ctx = &datum.local.ctx;
    let q = datum.q();
    let t = &datum.varphi_t.coeffs()[0];
    let b = &datum.varphi_t.coeffs()[1];
    let target = t.neg().div(b)?;
    if target.valuation() != Some(0) {
        return Ok(Vec::new());
    }
    let residue = target.coeff(0);
    let qm1 = BigUint::from(q - 1);
    let mut out = Vec::new();
    for c in crate::gfq::factor::field_elements::<Kp>(&ctx.residue) {
        if c.is_zero() || c.pow_big(&qm1) != residue {
            continue;
        }
        let mut x = LocalElem::constant(ctx, c);
        let m = LocalElem::constant(ctx, Kp::from_u64(&ctx.residue, q - 1));
        for _ in 0..64 {
            let f = x.pow(q - 1).sub(&target);
            if f.is_zero_within_precision() {
                break;
            }
            x = x.sub(&f.div(&m.mul(&x.pow(q - 2)))?);
            if let Some(p) = x.precision() {
                x = x.with_precision(p.min(ctx.rel_prec));
            }
        }
        out.push(x);
    }
    Ok(out)
}

pub fn check_functional_equation(datum: &LatticeDatum, exp: &TruncatedExp) -> Result<FunctionalReport> {
    if datum.cutoff < 1 {
        return Err(Error::IndexOutOfRange("the functional equation needs N >= 1".into()));
    }
    let ctx = &datum.local.ctx;
    let full = datum.lattice();
    let inner = datum.lattice_upto(datum.cutoff - 1);
    let lattice_stable = inner
        .iter()
        .all(|l| {
            let image = datum.varphi_t.eval(l);
            full.iter().any(|m| m.agrees(&image))
        });
    let kernel = inner.iter().all(|l| {
        let lhs = exp.eval(&datum.varphi_t.eval(l));
        let rhs = datum.varphi_t.eval(&exp.eval(l));
        lhs.is_zero_within_precision() && rhs.is_zero_within_precision()
    });

    let u = datum.local.u();
    let one = LocalElem::one(ctx);
    let gen = LocalElem::constant(ctx, ctx.residue.gen());
    let mut points = vec![one.clone(), gen.clone(), u.clone(), u.mul(&u).add(&gen), one.add(&u)];
    let torsion = rational_torsion(datum)?;
    points.extend(torsion.iter().cloned());
    let periodic = points.iter().take(3).all(|x| {
        let ex = exp.eval(x);
        full.iter().skip(1).take(4).all(|l| exp.eval(&x.add(l)).agrees(&ex))
    });
    let valuations = points
        .iter()
        .map(|w| (w.valuation().expect("nonzero test point"), exp.eval(w).valuation()))
        .collect();
    Ok(FunctionalReport { lattice_stable, kernel, periodic, valuations, torsion_points: torsion.len() })
}

/// `v(e(z))` for test points `z = u^k`.
pub fn valuation_profile(exp: &TruncatedExp, datum: &LatticeDatum, ks: &[i64]) -> Vec<(i64, Option<i64>)> {
    let one = datum.local.ctx.residue.one();
    ks.iter()
        .map(|&k| {
            let z = LocalElem::monomial(&datum.local.ctx, one.clone(), k);
            (k, exp.eval(&z).valuation())
        })
        .collect()
}
