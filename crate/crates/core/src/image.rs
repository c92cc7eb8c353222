//! Certificates that the T-adic image of a rank-2 module is all of
//! `GL_2(F_q[[T]])`.
//!
//! The mod-T leg compares sampled Frobenius characteristic polynomials with
//! the characteristic polynomials realized inside each kind of maximal
//! subgroup of `GL_2(F_q)` with surjective determinant. The determinant leg
//! checks that the sampled determinants generate `F_q^×`. The level-1 leg is
//! the `Π_r` witness together with its Newton-polygon consistency check.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::density::pi_r_membership;
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::frobenius::{sample_frobenius, FrobSample, LevelMatrix, SampleOptions};
use crate::gfq::{FieldSpec, FqElem, FqPoly, PrimeOfA};
use crate::newton::{verify_vz_formula, VzReport};
use crate::ring::{Field, Ring};

/// Field sizes covered by the hard-coded classification tables.
pub const TABLE_Q: [u64; 4] = [3, 5, 7, 9];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionKind {
    Borel,
    SplitCartanNormalizer,
    NonsplitCartanNormalizer,
    ExceptionalA4,
    ExceptionalS4,
    ExceptionalA5,
}

impl ObstructionKind {
    pub const ALL: [ObstructionKind; 6] = [
        ObstructionKind::Borel,
        ObstructionKind::SplitCartanNormalizer,
        ObstructionKind::NonsplitCartanNormalizer,
        ObstructionKind::ExceptionalA4,
        ObstructionKind::ExceptionalS4,
        ObstructionKind::ExceptionalA5,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ObstructionKind::Borel => "borel",
            ObstructionKind::SplitCartanNormalizer => "split-cartan-normalizer",
            ObstructionKind::NonsplitCartanNormalizer => "nonsplit-cartan-normalizer",
            ObstructionKind::ExceptionalA4 => "exceptional-a4",
            ObstructionKind::ExceptionalS4 => "exceptional-s4",
            ObstructionKind::ExceptionalA5 => "exceptional-a5",
        }
    }
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A characteristic polynomial `x^2 - t x + δ`, keyed as `(t, δ)`.
pub type TraceDet = (FqElem, FqElem);

/// The characteristic polynomials realized by elements of subgroups of one
/// kind with surjective determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupObstruction {
    pub kind: ObstructionKind,
    pub realized: BTreeSet<TraceDet>,
    /// Whether the largest subgroup of this kind with full determinant is a
    /// maximal one among such subgroups.
    pub maximal: bool,
}

impl SubgroupObstruction {
    pub fn realized_charpolys(&self) -> Vec<FqPoly> {
        self.realized.iter().map(|(t, d)| trace_det_poly(t, d)).collect()
    }
}

pub fn trace_det_poly(t: &FqElem, d: &FqElem) -> FqPoly {
    let fq = t.spec();
    FqPoly::new(&fq, vec![*d, -*t, fq.one()])
}

/// `(t, δ)` of a monic quadratic.
pub fn trace_det(cp: &FqPoly) -> Option<TraceDet> {
    (cp.degree() == Some(2) && cp.is_monic()).then(|| (-cp.coeff(1), cp.coeff(0)))
}

fn is_square(a: &FqElem) -> bool {
    let q = a.spec().q();
    a.is_zero() || a.pow((q - 1) / 2).is_one()
}

fn pairs(fq: &'static FieldSpec, f: impl Fn(FqElem, FqElem) -> bool) -> BTreeSet<TraceDet> {
    let mut out = BTreeSet::new();
    for t in fq.elements() {
        for d in fq.nonzero_elements() {
            if f(t, d) {
                out.insert((t, d));
            }
        }
    }
    out
}

/// Dickson tables for `GL_2(F_q)`, `q ∈ {3, 5, 7, 9}`.
///
/// A4 and A5 have no subgroup of index 2, so their preimages have square
/// determinants only. The S4 preimage has full determinant exactly when
/// `S4 ⊄ PSL_2(F_q)`, i.e. `q ≡ ±3 mod 8`; for `q = 3` it is all of
/// `GL_2(F_3)` and so not a proper subgroup.
pub fn dickson_table(fq: &'static FieldSpec) -> Result<Vec<SubgroupObstruction>> {
    let q = fq.q();
    if !TABLE_Q.contains(&q) {
        return Err(Error::Unsupported(format!("no classification table for q = {q}")));
    }
    let two = fq.elem(2);
    let four = two * two;
    let split = |t: FqElem, d: FqElem| is_square(&(t * t - four * d));
    let scalar = |t: FqElem, d: FqElem| fq.nonzero_elements().any(|a| t == two * a && d == a * a);

    let borel = pairs(fq, split);
    let split_normalizer = pairs(fq, |t, d| split(t, d) || t.is_zero());
    let nonsplit_normalizer = pairs(fq, |t, d| !split(t, d) || t.is_zero() || scalar(t, d));
    let s4_full_det = q % 8 == 3 || q % 8 == 5;
    let s4 = if s4_full_det && q > 3 {
        // Orders 1, 2, 3, 4 in PGL_2 have t^2/δ = 4, 0, 1, 2.
        pairs(fq, |t, d| {
            let u = t * t * d.inv().expect("nonzero");
            t.is_zero() || scalar(t, d) || u.is_one() || u == two
        })
    } else {
        BTreeSet::new()
    };
    let s4_maximal = !s4.is_empty();
    Ok(vec![
        SubgroupObstruction { kind: ObstructionKind::Borel, realized: borel, maximal: true },
        SubgroupObstruction {
            kind: ObstructionKind::SplitCartanNormalizer,
            realized: split_normalizer,
            // Inside the nonsplit normalizer for q = 3 and the S4 preimage for q = 5.
            maximal: q > 5,
        },
        SubgroupObstruction {
            kind: ObstructionKind::NonsplitCartanNormalizer,
            realized: nonsplit_normalizer,
            maximal: true,
        },
        SubgroupObstruction { kind: ObstructionKind::ExceptionalA4, realized: BTreeSet::new(), maximal: false },
        SubgroupObstruction { kind: ObstructionKind::ExceptionalS4, realized: s4, maximal: s4_maximal },
        SubgroupObstruction { kind: ObstructionKind::ExceptionalA5, realized: BTreeSet::new(), maximal: false },
    ])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModTReport {
    pub status: Status,
    pub unexcluded: Vec<ObstructionKind>,
    /// For each excluded kind, the index of the first sample outside it.
    pub excluded_by: Vec<(ObstructionKind, usize)>,
    pub reason: Option<String>,
}

/// Certifies that the mod-T image is `GL_2(F_q)`.
pub fn certify_mod_t(samples: &[FrobSample], fq: &'static FieldSpec, r: usize) -> ModTReport {
    let unknown = |reason: &str| ModTReport {
        status: Status::Unknown,
        unexcluded: ObstructionKind::ALL.to_vec(),
        excluded_by: Vec::new(),
        reason: Some(reason.to_string()),
    };
    if r != 2 {
        return unknown("evidence mode only");
    }
    let table = match dickson_table(fq) {
        Ok(t) => t,
        Err(e) => return unknown(&e.to_string()),
    };
    let keys: Vec<Option<TraceDet>> = samples.iter().map(|s| trace_det(&s.charpoly_mod_t)).collect();
    let mut unexcluded = Vec::new();
    let mut excluded_by = Vec::new();
    for ob in &table {
        match keys.iter().position(|k| k.as_ref().is_some_and(|k| !ob.realized.contains(k))) {
            Some(i) => excluded_by.push((ob.kind, i)),
            None => unexcluded.push(ob.kind),
        }
    }
    let det = certify_det(samples, fq);
    let reason = if !unexcluded.is_empty() {
        Some("some subgroup kinds are not excluded".to_string())
    } else if det.status != Status::Certified {
        Some("sampled determinants do not generate F_q^×".to_string())
    } else {
        None
    };
    let status = if reason.is_none() { Status::Certified } else { Status::Unknown };
    ModTReport { status, unexcluded, excluded_by, reason }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetReport {
    pub status: Status,
    /// Order of the subgroup of `F_q^×` generated by the sampled determinants.
    pub generated_order: u64,
}

pub fn certify_det(samples: &[FrobSample], fq: &'static FieldSpec) -> DetReport {
    let generated_order = samples
        .iter()
        .filter(|s| !s.det_mod_t.is_zero() && s.det_mod_t.spec() == fq)
        .map(|s| s.det_mod_t.multiplicative_order())
        .fold(1, num_integer::lcm);
    let status = if generated_order == fq.q() - 1 { Status::Certified } else { Status::Unknown };
    DetReport { status, generated_order }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModT2Report {
    pub status: Status,
    pub witness: Option<PrimeOfA>,
    pub vz: Option<VzReport>,
}

/// The level-1 leg: a `Π_r` witness, cross-checked against the Newton polygon
/// of `φ_{T^2}`. A witness whose torsion valuations contradict the
/// ramification divisibility is an internal error.
pub fn certify_mod_t2_nonscalar(phi: &DrinfeldModule) -> Result<ModT2Report> {
    let Some(l) = pi_r_membership(phi.coeffs()) else {
        return Ok(ModT2Report { status: Status::Unknown, witness: None, vz: None });
    };
    let vz = verify_vz_formula(phi, &l)?;
    if !(vz.formula_match && vz.divisible) {
        return Err(Error::Inconsistent(format!(
            "witness {l}: v(z) = {} but expected {}",
            vz.v_z, vz.expected
        )));
    }
    Ok(ModT2Report { status: Status::Certified, witness: Some(l), vz: Some(vz) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Surjective,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ImageCertificate {
    pub mod_t: ModTReport,
    pub det: DetReport,
    pub mod_t2: ModT2Report,
    pub verdict: Verdict,
    pub samples_used: usize,
    /// Primes whose samples excluded some subgroup kind.
    pub witnesses: Vec<PrimeOfA>,
}

impl ImageCertificate {
    /// Combines the three legs; SURJECTIVE only when all are certified.
    pub fn combine(samples: &[FrobSample], mod_t: ModTReport, det: DetReport, mod_t2: ModT2Report) -> Self {
        let all = [mod_t.status, det.status, mod_t2.status].iter().all(|s| *s == Status::Certified);
        let mut witnesses: Vec<PrimeOfA> = mod_t
            .excluded_by
            .iter()
            .filter_map(|(_, i)| samples[*i].prime.clone())
            .collect();
        witnesses.sort();
        witnesses.dedup();
        ImageCertificate {
            verdict: if all { Verdict::Surjective } else { Verdict::Unknown },
            samples_used: samples.len(),
            mod_t,
            det,
            mod_t2,
            witnesses,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.verdict,
            "modT_surjective": self.mod_t.status,
            "modT_unexcluded": self.mod_t.unexcluded,
            "modT_reason": self.mod_t.reason,
            "det_surjective": self.det.status,
            "det_generated_order": self.det.generated_order,
            "modT2_nonscalar": self.mod_t2.status,
            "modT2_witness": self.mod_t2.witness.as_ref().map(|l| l.to_string()),
            "v_z": self.mod_t2.vz.as_ref().map(|v| v.v_z.to_string()),
            "samples_used": self.samples_used,
            "witnesses": self.witnesses.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Runs all three certifiers on externally supplied samples.
pub fn verdict_from_samples(phi: &DrinfeldModule, samples: &[FrobSample]) -> Result<ImageCertificate> {
    let fq = phi.fq();
    let mod_t = certify_mod_t(samples, fq, phi.rank());
    let det = certify_det(samples, fq);
    let mod_t2 = certify_mod_t2_nonscalar(phi)?;
    Ok(ImageCertificate::combine(samples, mod_t, det, mod_t2))
}

/// Samples Frobenius at the good primes of degree `<= max_degree` and
/// combines the three certifiers. Refused for `q < 5`.
pub fn surjectivity_verdict(phi: &DrinfeldModule, max_degree: usize) -> Result<ImageCertificate> {
    if phi.fq().q() < 5 {
        return Err(Error::Unsupported("verdicts require q >= 5".into()));
    }
    if phi.rank() < 2 {
        return Err(Error::Unsupported("verdicts require r >= 2".into()));
    }
    let opts = SampleOptions { matrices: false, ..SampleOptions::default() };
    let samples = sample_frobenius(phi, max_degree, opts)?;
    verdict_from_samples(phi, &samples)
}

/// The matrix groups of the level filtration: `U_n ⊂ GL_r(A/(T^n))` of
/// matrices `[[Id, m], [0, m_r]]` with `m ∈ (A/(T^n))^{r-1}`,
/// `m_r ∈ (A/(T^n))^×`, and `W = ker(U_2 → U_1)`.
#[derive(Clone, Debug)]
pub struct FiltrationShape {
    pub fq: &'static FieldSpec,
    pub r: usize,
}

impl FiltrationShape {
    pub fn new(fq: &'static FieldSpec, r: usize) -> Self {
        FiltrationShape { fq, r }
    }

    /// `|U_n| = (q-1) q^{nr-1}`.
    pub fn u_order(&self, n: usize) -> u64 {
        let q = self.fq.q();
        (q - 1) * q.pow((n * self.r - 1) as u32)
    }

    /// `|W| = q^r`.
    pub fn w_order(&self) -> u64 {
        self.fq.q().pow(self.r as u32)
    }

    /// `Φ_n(m, m_r)`.
    pub fn phi_n(&self, n: usize, m: &[FqPoly], m_r: &FqPoly) -> Result<LevelMatrix> {
        let r = self.r;
        if m.len() != r - 1 || m_r.coeff(0).is_zero() {
            return Err(Error::Inconsistent("Φ_n needs r-1 entries and a unit".into()));
        }
        let mut entries = vec![FqPoly::zero(&self.fq); r * r];
        for i in 0..r - 1 {
            entries[i * r + i] = FqPoly::one(&self.fq);
            entries[i * r + r - 1] = m[i].truncate(n);
        }
        entries[r * r - 1] = m_r.truncate(n);
        Ok(LevelMatrix { level: n, size: r, entries })
    }

    pub fn is_in_u(&self, m: &LevelMatrix) -> bool {
        let r = self.r;
        m.size == r
            && (0..r).all(|i| {
                (0..r).all(|j| {
                    let e = m.get(i, j);
                    if j == r - 1 {
                        i < r - 1 || !e.coeff(0).is_zero()
                    } else if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Every element of `U_n`, as the image of `Φ_n`.
    pub fn u(&self, n: usize) -> Vec<LevelMatrix> {
        let residues: Vec<FqPoly> = FqPoly::all_below_degree(self.fq, n).collect();
        let units: Vec<&FqPoly> = residues.iter().filter(|a| !a.coeff(0).is_zero()).collect();
        let k = residues.len();
        let mut out = Vec::new();
        for idx in 0..k.pow((self.r - 1) as u32) {
            let m: Vec<FqPoly> =
                (0..self.r - 1).map(|i| residues[idx / k.pow(i as u32) % k].clone()).collect();
            for u in &units {
                out.push(self.phi_n(n, &m, u).expect("valid shape"));
            }
        }
        out
    }

    /// `W`: elements of `U_2` that are the identity modulo T.
    pub fn w(&self) -> Vec<LevelMatrix> {
        self.u(2).into_iter().filter(|m| m.reduce(1).is_identity()).collect()
    }

    pub fn describe(&self) -> Vec<String> {
        let (q, r) = (self.fq.q(), self.r);
        vec![
            format!("G = GL_{r}(F_{q}[[T]])"),
            format!("G^i = Id + T^i M_{r}(F_{q}[[T]])"),
            format!("G^[0] = GL_{r}(F_{q}), G^[i] = M_{r}(F_{q}) for i > 0"),
            format!("|U_1| = {}, |U_2| = {}, |W| = {}", self.u_order(1), self.u_order(2), self.w_order()),
        ]
    }
}
