//! Drinfeld modules `φ_T = T + g_1 τ + ... + g_r τ^r` over A = F_q[T].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::{parse_poly, FieldSpec, FqPoly, Kp, PrimeOfA, ResidueField};
use crate::ring::{FqAlgebra, Ring};
use crate::tau::TauPoly;

/// JSON form `{"q":3,"r":2,"g":["1","T+1"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub q: u64,
    pub r: usize,
    pub g: Vec<String>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct DrinfeldModule {
    fq: &'static FieldSpec,
    g: Vec<FqPoly>,
}

impl DrinfeldModule {
    pub fn new(fq: &'static FieldSpec, g: Vec<FqPoly>) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::InvalidModule("rank must be at least 1".into()));
        }
        if g.last().is_some_and(|gr| gr.is_zero()) {
            return Err(Error::InvalidModule("leading coefficient g_r is zero".into()));
        }
        if g.iter().any(|gi| !gi.is_zero() && *gi.ctx_ref() != fq) {
            return Err(Error::DomainMismatch);
        }
        Ok(DrinfeldModule { fq, g })
    }

    pub fn from_descriptor(d: &Descriptor) -> Result<Self> {
        let fq = FieldSpec::from_q(d.q)?;
        if d.r == 0 {
            return Err(Error::InvalidModule("rank must be at least 1".into()));
        }
        if d.g.len() != d.r {
            return Err(Error::InvalidModule(format!(
                "expected {} coefficients, found {}",
                d.r,
                d.g.len()
            )));
        }
        let g = d.g.iter().map(|s| parse_poly(s, fq)).collect::<Result<Vec<_>>>()?;
        Self::new(fq, g)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Descriptor = serde_json::from_str(s)
            .map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
        Self::from_descriptor(&d)
    }

    pub fn descriptor(&self) -> Descriptor {
        Descriptor { q: self.fq.q(), r: self.rank(), g: self.g.iter().map(|x| x.to_string()).collect() }
    }

    pub fn fq(&self) -> &'static FieldSpec {
        self.fq
    }

    pub fn rank(&self) -> usize {
        self.g.len()
    }

    /// `(g_1, ..., g_r)`.
    pub fn coeffs(&self) -> &[FqPoly] {
        &self.g
    }

    /// `g_i` for `1 <= i <= r`.
    pub fn g(&self, i: usize) -> &FqPoly {
        &self.g[i - 1]
    }

    pub fn phi_t(&self) -> TauPoly<FqPoly> {
        let mut coeffs = vec![FqPoly::x(&self.fq)];
        coeffs.extend(self.g.iter().cloned());
        TauPoly::new(&self.fq, coeffs)
    }

    /// `φ_a`, by Horner's rule in `φ_T`.
    pub fn phi(&self, a: &FqPoly) -> TauPoly<FqPoly> {
        phi_horner(&self.phi_t(), a, |c| FqPoly::constant(*c))
    }

    pub fn det_module(&self) -> DetModule {
        let r = self.rank();
        let gr = self.g[r - 1].clone();
        let delta = if r % 2 == 1 { gr } else { -gr };
        let psi = DrinfeldModule { fq: self.fq, g: vec![delta.clone()] };
        DetModule { delta, psi }
    }

    /// `φ_a(x)` as an F_q-linear polynomial in `x`.
    pub fn torsion_poly(&self, a: &FqPoly) -> Result<TorsionPoly> {
        if a.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidModule("torsion requires a nonconstant a".into()));
        }
        Ok(TorsionPoly { q: self.fq.q(), tau: self.phi(a) })
    }

    pub fn reduction_info(&self, prime: &PrimeOfA) -> ReductionInfo {
        let rank = (1..=self.rank())
            .rev()
            .find(|&i| prime.valuation(self.g(i)).map_or(false, |v| v == 0))
            .unwrap_or(0);
        let class = if rank == self.rank() {
            ReductionClass::Good
        } else if rank >= 1 {
            ReductionClass::Stable
        } else {
            ReductionClass::Unclassified
        };
        ReductionInfo { prime: prime.clone(), class, reduction_rank: rank, integral: true }
    }

    /// Reduction modulo a prime together with its classification.
    pub fn reduce_at(&self, prime: &PrimeOfA) -> (ReductionInfo, ReducedModule) {
        let info = self.reduction_info(prime);
        let kp = prime.residue_field().clone();
        let phi_t = self.phi_t().map(&kp, |c| prime.reduce(c));
        (info, ReducedModule { prime: prime.clone(), kp, phi_t })
    }
}

/// Horner evaluation of `a(φ_T)` with constants embedded by `embed`.
pub fn phi_horner<C: FqAlgebra>(
    phi_t: &TauPoly<C>,
    a: &FqPoly,
    embed: impl Fn(&crate::gfq::FqElem) -> C,
) -> TauPoly<C> {
    let ctx = phi_t.ctx_ref();
    let mut acc = TauPoly::zero(ctx);
    for c in a.coeffs().iter().rev() {
        acc = &acc * phi_t;
        if !c.is_zero() {
            acc = &acc + &TauPoly::constant(embed(c));
        }
    }
    acc
}

impl fmt::Debug for DrinfeldModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ_T = {} over F_{}", self.phi_t(), self.fq.q())
    }
}

impl fmt::Display for DrinfeldModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phi_t())
    }
}

/// The rank-one module `ψ_T = T + Δ τ` with `Δ = (-1)^{r-1} g_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetModule {
    pub delta: FqPoly,
    pub psi: DrinfeldModule,
}

/// `φ_a(x) = sum c_i x^{q^i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionPoly {
    q: u64,
    tau: TauPoly<FqPoly>,
}

impl TorsionPoly {
    pub fn as_tau(&self) -> &TauPoly<FqPoly> {
        &self.tau
    }

    /// Pairs `(q^i, c_i)` for nonzero coefficients.
    pub fn terms(&self) -> Vec<(num_bigint::BigUint, FqPoly)> {
        self.tau
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (num_bigint::BigUint::from(self.q).pow(i as u32), c.clone()))
            .collect()
    }

    pub fn x_degree(&self) -> num_bigint::BigUint {
        num_bigint::BigUint::from(self.q).pow(self.tau.degree().unwrap_or(0) as u32)
    }

    pub fn eval(&self, x: &FqPoly) -> FqPoly {
        self.tau.eval(x)
    }
}

impl fmt::Display for TorsionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .into_iter()
            .rev()
            .map(|(e, c)| {
                let s = c.to_string();
                let s = if c.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 {
                    format!("({s})")
                } else {
                    s
                };
                let x = if e == 1u32.into() { "x".to_string() } else { format!("x^{e}") };
                if c.is_one() { x } else { format!("{s}*{x}") }
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionClass {
    Good,
    Stable,
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInfo {
    pub prime: PrimeOfA,
    pub class: ReductionClass,
    pub reduction_rank: usize,
    pub integral: bool,
}

/// `φ` modulo a prime P, with coefficients in `k_P`.
#[derive(Clone, Debug)]
pub struct ReducedModule {
    prime: PrimeOfA,
    kp: ResidueField,
    phi_t: TauPoly<Kp>,
}

impl ReducedModule {
    pub fn prime(&self) -> &PrimeOfA {
        &self.prime
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.kp
    }

    pub fn phi_t(&self) -> &TauPoly<Kp> {
        &self.phi_t
    }

    pub fn phi(&self, a: &FqPoly) -> TauPoly<Kp> {
        phi_horner(&self.phi_t, a, |c| Kp::from_fq(&self.kp, c))
    }
}
