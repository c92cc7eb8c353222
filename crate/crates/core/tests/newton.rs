use drinfeld::drinfeld::DrinfeldModule;
use drinfeld::gfq::{factor_in_a, parse_poly, FieldSpec, FqPoly, PrimeOfA};
use drinfeld::newton::{
    check_long_equation, newton_polygon, verify_vz_formula, witness_valuation, ValuedCoeffs,
};
use drinfeld::ring::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn module(q: u64, g: &[&str]) -> DrinfeldModule {
    let fq = FieldSpec::from_q(q).unwrap();
    DrinfeldModule::new(fq, g.iter().map(|s| parse_poly(s, fq).unwrap()).collect()).unwrap()
}

fn prime(q: u64, s: &str) -> PrimeOfA {
    PrimeOfA::new(parse_poly(s, FieldSpec::from_q(q).unwrap()).unwrap()).unwrap()
}

#[test]
fn torsion_points_of_the_basic_example() {
    let phi = module(3, &["1", "T+1"]);
    let l = prime(3, "T+1");
    let t2 = FqPoly::x(&phi.fq()).pow(2);
    let vc = ValuedCoeffs::of_torsion(&phi, &t2, &l).unwrap();
    let pts: Vec<(i64, i64)> = vc.points.iter().map(|(x, y)| (x.try_into().unwrap(), y.try_into().unwrap())).collect();
    assert_eq!(pts, vec![(1, 0), (3, 0), (9, 0), (27, 1), (81, 10)]);

    let rep = verify_vz_formula(&phi, &l).unwrap();
    assert_eq!(rep.v_z, rat(-1, 18));
    assert!(rep.formula_match);
    assert_eq!(rep.denominator, BigInt::from(18));
    assert_eq!(rep.p_part_denominator, BigInt::from(9));
    assert!(rep.divisible && rep.layers_match);
    assert!(check_long_equation(&phi, &l).unwrap());
}

#[test]
fn valuation_two_example() {
    let phi = module(3, &["1", "(T+1)^2"]);
    let l = prime(3, "T+1");
    let rep = verify_vz_formula(&phi, &l).unwrap();
    assert_eq!(rep.v_z, rat(-1, 9));
    assert_eq!(rep.denominator, BigInt::from(9));
    assert_eq!(rep.p_part_denominator, BigInt::from(9));
    assert!(rep.formula_match);
    assert_eq!(rep.polygon.total_rise(), rat(20, 1));
    assert!(check_long_equation(&phi, &l).unwrap());
}

#[test]
fn invalid_witnesses_are_errors() {
    let l = prime(3, "T+1");
    assert!(verify_vz_formula(&module(3, &["1", "(T+1)^3"]), &l).is_err());
    assert!(verify_vz_formula(&module(3, &["T+1", "T+1"]), &l).is_err());
    assert!(verify_vz_formula(&module(3, &["1", "T"]), &prime(3, "T")).is_err());
    assert!(check_long_equation(&module(3, &["T+1"]), &l).is_err());
}

#[test]
fn rank_three_layers() {
    let phi = module(3, &["T", "1", "T+2"]);
    let l = prime(3, "T+2");
    let rep = verify_vz_formula(&phi, &l).unwrap();
    // -1/((q-1) q^4) and the φ[T] layer -1/((q-1) q^2).
    assert_eq!(rep.v_z, rat(-1, 162));
    assert_eq!(rep.layers, vec![rat(-1, 162), rat(-1, 18)]);
    assert!(rep.formula_match && rep.layers_match && rep.divisible);
    assert_eq!(rep.p_part_denominator, BigInt::from(81));
    assert!(check_long_equation(&phi, &l).unwrap());
}

// Every q = 3, r = 2 module with deg g_i <= 2, at every witness prime.
#[test]
fn ramification_formula_exhaustive() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let polys: Vec<FqPoly> = FqPoly::all_below_degree(f3, 3).collect();
    let mut witnesses = 0;
    for g1 in &polys {
        for g2 in polys.iter().filter(|g| !g.is_zero()) {
            let phi = DrinfeldModule::new(f3, vec![g1.clone(), g2.clone()]).unwrap();
            if g2.degree() == Some(0) {
                continue;
            }
            for (l, _) in factor_in_a(g2).unwrap().1 {
                if witness_valuation(&phi, &l).is_err() {
                    continue;
                }
                witnesses += 1;
                let rep = verify_vz_formula(&phi, &l).unwrap();
                let e = rep.e as i64;
                assert_eq!(rep.v_z, rat(-e, 18), "{phi:?} at {l}");
                assert!(rep.formula_match && rep.layers_match);
                assert_eq!(rep.p_part_denominator, BigInt::from(9), "{phi:?} at {l}");
                assert!(check_long_equation(&phi, &l).unwrap(), "{phi:?} at {l}");
            }
        }
    }
    assert!(witnesses > 200, "{witnesses}");
}

fn brute_height(points: &[(i64, i64)], x: i64) -> BigRational {
    let mut best: Option<BigRational> = None;
    for a in points {
        for b in points {
            if a.0 <= x && x <= b.0 && a.0 < b.0 || a == b && a.0 == x {
                let h = if a == b {
                    rat(a.1, 1)
                } else {
                    rat(a.1, 1) + rat((b.1 - a.1) * (x - a.0), b.0 - a.0)
                };
                best = Some(match best {
                    Some(v) if v <= h => v,
                    _ => h,
                });
            }
        }
    }
    best.unwrap()
}

#[test]
fn hull_matches_pairwise_oracle_on_torsion_data() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let t2 = FqPoly::x(&f3).pow(2);
    for (g, l) in [(["1", "T+1"], "T+1"), (["T+2", "(T+1)^2*T"], "T+1"), (["T", "T^2+1"], "T^2+1")] {
        let phi = module(3, &g);
        let vc = ValuedCoeffs::of_torsion(&phi, &t2, &prime(3, l)).unwrap();
        let pts: Vec<(i64, i64)> = vc.points.iter().map(|(x, y)| (x.try_into().unwrap(), y.try_into().unwrap())).collect();
        let np = newton_polygon(&vc).unwrap();
        for &(x, _) in &pts {
            assert_eq!(np.height_at(&x.into()).unwrap(), brute_height(&pts, x));
        }
    }
}

fn point_sets() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((1i64..6, -20i64..20), 2..12).prop_map(|steps| {
        let mut x = 0;
        steps
            .into_iter()
            .map(|(dx, y)| {
                x += dx;
                (x, y)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn hull_is_convex_and_below_points(pts in point_sets()) {
        let vc = ValuedCoeffs::from_i64(&pts).unwrap();
        let np = newton_polygon(&vc).unwrap();
        for w in np.segments.windows(2) {
            prop_assert!(w[0].slope < w[1].slope);
        }
        let span: BigInt = np.segments.iter().map(|s| s.length.clone()).sum();
        prop_assert_eq!(span, BigInt::from(pts.last().unwrap().0 - pts[0].0));
        for &(x, y) in &pts {
            let h = np.height_at(&x.into()).unwrap();
            prop_assert!(h <= rat(y, 1));
            prop_assert_eq!(h, brute_height(&pts, x));
        }
        for v in &np.vertices {
            let (x, y): (i64, i64) = ((&v.0).try_into().unwrap(), (&v.1).try_into().unwrap());
            prop_assert!(pts.contains(&(x, y)));
        }
    }
}
