mod common;

use std::collections::BTreeSet;

use common::{oracle, synthetic, Gl2};

use drinfeld::drinfeld::DrinfeldModule;
use drinfeld::frobenius::{sample_frobenius, FrobSample, LevelMatrix, SampleOptions};
use drinfeld::gfq::{parse_poly, FieldSpec, FqPoly};
use drinfeld::image::{
    certify_det, certify_mod_t, certify_mod_t2_nonscalar, dickson_table, surjectivity_verdict,
    verdict_from_samples, FiltrationShape, ObstructionKind, Status, TraceDet, Verdict,
};
use drinfeld::ring::Ring;

fn check_tables_against_oracle(q: u64) {
    let fq = FieldSpec::new(q, 1).unwrap();
    let table = dickson_table(fq).unwrap();
    let o = oracle(q);
    let from_table: BTreeSet<BTreeSet<TraceDet>> =
        table.iter().filter(|ob| ob.maximal).map(|ob| ob.realized.clone()).collect();
    let from_oracle: BTreeSet<BTreeSet<TraceDet>> = o.maximal_full_det.iter().cloned().collect();
    assert_eq!(from_table, from_oracle, "q = {q}");
    // Every proper subgroup with full determinant is caught by some table entry.
    for cp in &o.proper_full_det {
        assert!(table.iter().any(|ob| cp.is_subset(&ob.realized)));
    }
    // Samples drawn from all of a maximal subgroup never certify.
    for elems in &o.maximal_elements {
        let samples: Vec<FrobSample> = elems.iter().map(|m| synthetic(fq, m)).collect();
        assert_eq!(certify_mod_t(&samples, fq, 2).status, Status::Unknown);
    }
}

#[test]
fn dickson_tables_q5_match_subgroup_enumeration() {
    check_tables_against_oracle(5);
}

#[test]
fn dickson_tables_q3_match_subgroup_enumeration() {
    check_tables_against_oracle(3);
}

#[test]
fn whole_group_certifies_for_q5_only() {
    for (q, expected) in [(3, Status::Unknown), (5, Status::Certified)] {
        let fq = FieldSpec::new(q, 1).unwrap();
        let g = Gl2::new(q);
        let samples: Vec<FrobSample> = g.elems.iter().map(|m| synthetic(fq, m)).collect();
        assert_eq!(certify_mod_t(&samples, fq, 2).status, expected, "q = {q}");
        assert_eq!(certify_det(&samples, fq).status, Status::Certified);
    }
}

#[test]
fn borel_negative_control() {
    let f5 = FieldSpec::new(5, 1).unwrap();
    let borel: Vec<FrobSample> = Gl2::new(5)
        .elems
        .iter()
        .filter(|m| m[2] == 0)
        .map(|m| synthetic(f5, m))
        .collect();
    let rep = certify_mod_t(&borel, f5, 2);
    assert_eq!(rep.status, Status::Unknown);
    assert!(rep.unexcluded.contains(&ObstructionKind::Borel));
    let phi = DrinfeldModule::from_json(r#"{"q":5,"r":2,"g":["1","T+1"]}"#).unwrap();
    let cert = verdict_from_samples(&phi, &borel).unwrap();
    assert_eq!(cert.verdict, Verdict::Unknown);
    assert_eq!(cert.mod_t2.status, Status::Certified);
}

#[test]
fn spec_module_is_surjective_and_monotone() {
    let phi = DrinfeldModule::from_json(r#"{"q":5,"r":2,"g":["1","T+1"]}"#).unwrap();
    let cert = surjectivity_verdict(&phi, 3).unwrap();
    assert_eq!(cert.verdict, Verdict::Surjective);
    assert_eq!(cert.mod_t2.witness.as_ref().unwrap().to_string(), "T+1");
    let opts = SampleOptions { matrices: false, ..SampleOptions::default() };
    let samples = sample_frobenius(&phi, 3, opts).unwrap();
    let mut seen_surjective = false;
    for k in 0..=samples.len() {
        let v = verdict_from_samples(&phi, &samples[..k]).unwrap().verdict;
        if seen_surjective {
            assert_eq!(v, Verdict::Surjective, "prefix {k}");
        }
        seen_surjective |= v == Verdict::Surjective;
    }
    assert!(seen_surjective);
}

#[test]
fn constant_leading_coefficient_is_unknown() {
    let phi = DrinfeldModule::from_json(r#"{"q":5,"r":2,"g":["T","2"]}"#).unwrap();
    let cert = surjectivity_verdict(&phi, 2).unwrap();
    assert_eq!(cert.verdict, Verdict::Unknown);
    assert_eq!(cert.mod_t2.status, Status::Unknown);
}

#[test]
fn verdict_guards() {
    let phi3 = DrinfeldModule::from_json(r#"{"q":3,"r":2,"g":["1","T+1"]}"#).unwrap();
    assert!(surjectivity_verdict(&phi3, 2).is_err());
    let rank3 = DrinfeldModule::from_json(r#"{"q":5,"r":3,"g":["1","1","T+1"]}"#).unwrap();
    let cert = surjectivity_verdict(&rank3, 1).unwrap();
    assert_eq!(cert.verdict, Verdict::Unknown);
    assert_eq!(cert.mod_t.reason.as_deref(), Some("evidence mode only"));
    assert!(certify_mod_t(&[], FieldSpec::new(11, 1).unwrap(), 2).reason.is_some());
}

#[test]
fn witness_examples() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let m = |g1: &str, g2: &str| DrinfeldModule::new(f3, vec![parse_poly(g1, f3).unwrap(), parse_poly(g2, f3).unwrap()]).unwrap();
    let rep = certify_mod_t2_nonscalar(&m("1", "T+1")).unwrap();
    assert_eq!(rep.witness.unwrap().to_string(), "T+1");
    assert_eq!(certify_mod_t2_nonscalar(&m("1", "(T+1)^3")).unwrap().status, Status::Unknown);
    let rep = certify_mod_t2_nonscalar(&m("T+1", "(T+1)*(T+2)")).unwrap();
    assert_eq!(rep.witness.unwrap().to_string(), "T+2");
}

fn all_level_matrices(fq: &'static FieldSpec, r: usize, n: usize) -> Vec<LevelMatrix> {
    let residues: Vec<FqPoly> = FqPoly::all_below_degree(fq, n).collect();
    let k = residues.len();
    (0..k.pow((r * r) as u32))
        .map(|idx| LevelMatrix {
            level: n,
            size: r,
            entries: (0..r * r).map(|i| residues[idx / k.pow(i as u32) % k].clone()).collect(),
        })
        .collect()
}

#[test]
fn filtration_orders() {
    for q in [3u64, 5] {
        let fq = FieldSpec::new(q, 1).unwrap();
        for r in [2usize, 3] {
            let shape = FiltrationShape::new(fq, r);
            for n in [1, 2] {
                let u = shape.u(n);
                let distinct: BTreeSet<Vec<FqPoly>> = u.iter().map(|m| m.entries.clone()).collect();
                assert_eq!(distinct.len() as u64, (q - 1) * q.pow((n * r - 1) as u32));
                assert_eq!(u.len() as u64, shape.u_order(n));
                assert!(u.iter().all(|m| shape.is_in_u(m)));
            }
            let w = shape.w();
            assert_eq!(w.len() as u64, q.pow(r as u32));
            assert_eq!(w.len() as u64, shape.w_order());
            // The only scalar matrix in W is the identity.
            for m in &w {
                let d = m.get(0, 0).clone();
                let scalar = (0..r).all(|i| (0..r).all(|j| *m.get(i, j) == if i == j { d.clone() } else { FqPoly::zero(&fq) }));
                assert!(!scalar || m.is_identity());
            }
        }
    }
}

#[test]
fn phi_2_is_a_bijection_for_q3_r2() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let shape = FiltrationShape::new(f3, 2);
    let image: BTreeSet<Vec<FqPoly>> = shape.u(2).into_iter().map(|m| m.entries).collect();
    assert_eq!(image.len(), 54);
    let unit = |a: &FqPoly| !a.coeff(0).is_zero();
    let shaped: BTreeSet<Vec<FqPoly>> = all_level_matrices(f3, 2, 2)
        .into_iter()
        .filter(|m| m.get(0, 0).is_one() && m.get(1, 0).is_zero() && unit(m.get(1, 1)))
        .map(|m| m.entries)
        .collect();
    assert_eq!(image, shaped);
    // Closed under products, so U_2 is a group.
    let u = shape.u(2);
    for a in u.iter().step_by(7) {
        for b in &u {
            assert!(image.contains(&a.mul(b).entries));
        }
    }
}

#[test]
fn subgroup_enumeration_counts() {
    // GL_2(F_3) has 55 subgroups; SL_2(F_3) has 15.
    let g = Gl2::new(3);
    let subs = g.all_subgroups();
    assert_eq!(subs.len(), 55);
    let sl2 = subs.iter().filter(|h| g.members(h).iter().all(|&i| g.trace_det(i).1 == 1)).count();
    assert_eq!(sl2, 15);
}
