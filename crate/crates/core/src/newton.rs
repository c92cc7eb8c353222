//! Newton polygons of F_q-linear polynomials `sum c_i x^{q^i}` over the
//! valuation `v_l` of a prime of A, and the ramification data read off
//! from `φ_{T^2}` at a witness prime.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::gfq::{FqPoly, PrimeOfA};
use crate::ring::Ring;

/// Points `(q^i, v_l(c_i))` for the nonzero coefficients of a linear polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedCoeffs {
    pub prime: Option<PrimeOfA>,
    pub points: Vec<(BigInt, BigInt)>,
}

impl ValuedCoeffs {
    /// Points must have strictly increasing abscissae.
    pub fn new(points: Vec<(BigInt, BigInt)>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Inconsistent("abscissae must be strictly increasing".into()));
        }
        Ok(ValuedCoeffs { prime: None, points })
    }

    pub fn from_i64(points: &[(i64, i64)]) -> Result<Self> {
        Self::new(points.iter().map(|&(x, y)| (x.into(), y.into())).collect())
    }

    /// The points of `φ_a(x)` at `l`.
    pub fn of_torsion(phi: &DrinfeldModule, a: &FqPoly, prime: &PrimeOfA) -> Result<Self> {
        let q = BigInt::from(phi.fq().q());
        let tau = phi.phi(a);
        let mut points = Vec::new();
        for (i, c) in tau.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            points.push((q.pow(i as u32), BigInt::from(prime.valuation(c)?)));
        }
        Ok(ValuedCoeffs { prime: Some(prime.clone()), points })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: BigRational,
    pub length: BigInt,
}

impl Segment {
    /// Valuation of the roots on this segment.
    pub fn root_valuation(&self) -> BigRational {
        -self.slope.clone()
    }
}

/// Lower convex hull, vertices at corners only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(BigInt, BigInt)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// `(valuation, multiplicity)` of the nonzero roots, most negative last.
    pub fn root_valuations(&self) -> Vec<(BigRational, BigInt)> {
        self.segments.iter().map(|s| (s.root_valuation(), s.length.clone())).collect()
    }

    /// `sum slope * length`, which equals the total rise of the hull.
    pub fn total_rise(&self) -> BigRational {
        self.segments
            .iter()
            .fold(BigRational::zero(), |acc, s| acc + &s.slope * BigRational::from(s.length.clone()))
    }

    /// Hull height at abscissa `x` within the hull's range.
    pub fn height_at(&self, x: &BigInt) -> Option<BigRational> {
        let first = self.vertices.first()?;
        let last = self.vertices.last()?;
        if x < &first.0 || x > &last.0 {
            return None;
        }
        for w in self.vertices.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x <= x1 {
                let slope = BigRational::new(y1 - y0, x1 - x0);
                return Some(BigRational::from(y0.clone()) + slope * BigRational::from(x - x0));
            }
        }
        Some(BigRational::from(first.1.clone()))
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
        writeln!(f, "vertices: {}", v.join(" "))?;
        for s in &self.segments {
            writeln!(f, "slope {} length {}", s.slope, s.length)?;
        }
        Ok(())
    }
}

fn cross(o: &(BigInt, BigInt), a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> BigInt {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

pub fn newton_polygon(vc: &ValuedCoeffs) -> Result<NewtonPolygon> {
    if vc.points.len() < 2 {
        return Err(Error::Inconsistent("a Newton polygon needs at least two points".into()));
    }
    let mut hull: Vec<(BigInt, BigInt)> = Vec::new();
    for p in &vc.points {
        while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive() {
            hull.pop();
        }
        hull.push(p.clone());
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: BigRational::new(&w[1].1 - &w[0].1, &w[1].0 - &w[0].0),
            length: &w[1].0 - &w[0].0,
        })
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

/// Checks the witness conditions `v_l(g_{r-1}) = 0`, `p ∤ v_l(g_r)`, `l ≠ (T)`
/// and returns `e = v_l(g_r)`.
pub fn witness_valuation(phi: &DrinfeldModule, prime: &PrimeOfA) -> Result<u64> {
    let r = phi.rank();
    if r < 2 {
        return Err(Error::NotAWitness(format!("{prime} (rank {r} < 2)")));
    }
    if prime.is_t() {
        return Err(Error::NotAWitness("(T)".into()));
    }
    let p = phi.fq().p();
    let e = prime.valuation(phi.g(r))? as u64;
    let ok = prime.valuation(phi.g(r - 1)).is_ok_and(|v| v == 0) && e % p != 0;
    if !ok {
        return Err(Error::NotAWitness(prime.to_string()));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VzReport {
    pub polygon: NewtonPolygon,
    pub e: u64,
    /// Valuation of `z` with `φ_{T^2}`-root layer just above `φ[T]`.
    pub v_z: BigRational,
    pub expected: BigRational,
    pub formula_match: bool,
    pub denominator: BigInt,
    pub p_part_denominator: BigInt,
    /// `q^{2(r-1)}` divides the denominator.
    pub divisible: bool,
    /// Root valuations of the layers `deg_T b = i` for `i = 0, 1`, which
    /// should equal `v_z · q^{(r-1) i}`.
    pub layers: Vec<BigRational>,
    pub layers_match: bool,
}

/// p-part of a positive integer.
pub fn p_part(n: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut out = BigInt::one();
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        out *= &p;
    }
    out
}

pub fn verify_vz_formula(phi: &DrinfeldModule, prime: &PrimeOfA) -> Result<VzReport> {
    let e = witness_valuation(phi, prime)?;
    let fq = phi.fq();
    let (q, p, r) = (fq.q(), fq.p(), phi.rank() as u32);
    let t2 = FqPoly::x(&fq).pow(2);
    let polygon = newton_polygon(&ValuedCoeffs::of_torsion(phi, &t2, prime)?)?;

    let qb = BigInt::from(q);
    let frac = |den: BigInt| BigRational::new(-BigInt::from(e), den);
    let expected = frac((&qb - 1) * qb.pow(2 * (r - 1)));
    let t_layer = frac((&qb - 1) * qb.pow(r - 1));

    // Distinct root valuations, ascending; the most negative is the φ[T] layer.
    let mut vals: Vec<BigRational> = polygon.root_valuations().into_iter().map(|(v, _)| v).collect();
    vals.sort();
    let v_z = vals.iter().find(|v| **v > t_layer).cloned().unwrap_or_else(BigRational::zero);
    let has_t_layer = vals.first() == Some(&t_layer);

    let denominator = v_z.denom().clone();
    let p_part_denominator = p_part(&denominator, p);
    let divisible = (&p_part_denominator % qb.pow(2 * (r - 1))).is_zero();
    let layers: Vec<BigRational> = (0..2u32).map(|i| &v_z * BigRational::from(qb.pow((r - 1) * i))).collect();
    let layers_match = has_t_layer && layers[1] == t_layer && layers[0] == expected;
    Ok(VzReport {
        polygon,
        e,
        formula_match: v_z == expected,
        v_z,
        expected,
        denominator,
        p_part_denominator,
        divisible,
        layers,
        layers_match,
    })
}

/// The valuation bookkeeping behind `-(1+q^r) v(g_r) = sum v(...)`: the hull of
/// `φ_{T^2}` rises by exactly `(1+q^r) v(g_r)` from the constant term `T^2`,
/// a unit at `l`, to the leading coefficient `g_r^{1+q^r}`.
pub fn check_long_equation(phi: &DrinfeldModule, prime: &PrimeOfA) -> Result<bool> {
    let e = witness_valuation(phi, prime)?;
    let fq = phi.fq();
    let t2 = FqPoly::x(&fq).pow(2);
    let vc = ValuedCoeffs::of_torsion(phi, &t2, prime)?;
    let polygon = newton_polygon(&vc)?;
    let q = BigUint::from(fq.q());
    let total = BigInt::from(e) * (BigInt::one() + BigInt::from(q.pow(phi.rank() as u32)));
    let starts_at_unit = vc.points.first().is_some_and(|(x, y)| x.is_one() && y.is_zero());
    Ok(starts_at_unit && polygon.total_rise() == BigRational::from(total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn hull_drops_collinear_points() {
        let vc = ValuedCoeffs::from_i64(&[(1, 0), (3, 0), (9, 0), (27, 1), (81, 10)]).unwrap();
        let np = newton_polygon(&vc).unwrap();
        let xs: Vec<i64> = np.vertices.iter().map(|(x, _)| x.try_into().unwrap()).collect();
        assert_eq!(xs, vec![1, 9, 27, 81]);
        let slopes: Vec<BigRational> = np.segments.iter().map(|s| s.slope.clone()).collect();
        assert_eq!(slopes, vec![rat(0, 1), rat(1, 18), rat(1, 6)]);
        assert_eq!(np.total_rise(), rat(10, 1));
    }

    #[test]
    fn too_few_points() {
        assert!(newton_polygon(&ValuedCoeffs::from_i64(&[(1, 0)]).unwrap()).is_err());
        assert!(ValuedCoeffs::from_i64(&[(3, 0), (1, 0)]).is_err());
    }

    #[test]
    fn p_parts() {
        assert_eq!(p_part(&BigInt::from(18), 3), BigInt::from(9));
        assert_eq!(p_part(&BigInt::from(20), 3), BigInt::from(1));
    }
}
