use drinfeld::density::{
    box_count, count_box, density_sweep, enumerate_box, euler_product_partial, local_density,
    local_density_by_count, omega_s_density, pi_r_membership, primes_excluding_t, EulerRow,
};
use drinfeld::drinfeld::DrinfeldModule;
use drinfeld::gfq::{is_irreducible, parse_poly, FieldSpec, FqPoly, PrimeOfA};
use drinfeld::image::{certify_mod_t2_nonscalar, Status};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn box_count_matches_enumeration() {
    for q in [3u64, 5] {
        let fq = FieldSpec::from_q(q).unwrap();
        for r in [1usize, 2, 3] {
            for x in 1..=3usize {
                if q.pow((r * x) as u32) > 1_000_000 {
                    continue;
                }
                let n = enumerate_box(fq, r, x).count() as u64;
                let expected = q.pow((r * x) as u32) - q.pow(((r - 1) * x) as u32);
                assert_eq!(n, expected, "q={q} r={r} X={x}");
                assert_eq!(box_count(q, r, x), BigUint::from(expected));
            }
        }
    }
}

#[test]
fn enumeration_has_no_repeats_and_respects_degrees() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let all: Vec<Vec<FqPoly>> = enumerate_box(f3, 2, 2).collect();
    let distinct: std::collections::BTreeSet<Vec<FqPoly>> = all.iter().cloned().collect();
    assert_eq!(distinct.len(), all.len());
    assert!(all.iter().all(|g| !g[1].is_zero() && g.iter().all(|p| p.degree().unwrap_or(0) < 2)));
}

#[test]
fn local_densities_against_residue_counts() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    for l in primes_excluding_t(f3, 1) {
        assert_eq!(local_density(&l), rat(19, 27));
        for r in [1, 2] {
            assert_eq!(local_density_by_count(&l, r).unwrap(), rat(19, 27));
        }
    }
    let f5 = FieldSpec::new(5, 1).unwrap();
    let l = &primes_excluding_t(f5, 1)[0];
    assert_eq!(local_density_by_count(l, 1).unwrap(), local_density(l));
    assert_eq!(local_density(l), rat(5u32.pow(5) as i64 - 5u32.pow(4) as i64 + 1, 5u32.pow(5) as i64));
    assert!(local_density_by_count(&PrimeOfA::new(FqPoly::x(&f3)).unwrap(), 1).is_err());
}

#[test]
fn omega_s_products() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let s = primes_excluding_t(f3, 1);
    assert_eq!(s.len(), 2);
    assert_eq!(omega_s_density(&s).unwrap(), rat(361, 729));
    assert_eq!(omega_s_density(&s[..1]).unwrap(), rat(19, 27));
    let doubled = vec![s[0].clone(), s[0].clone()];
    assert_eq!(omega_s_density(&doubled).unwrap(), rat(19, 27));
    let l2 = PrimeOfA::new(parse_poly("T^2+1", f3).unwrap()).unwrap();
    assert_eq!(omega_s_density(&[l2]).unwrap(), rat(9i64.pow(3) - 9i64.pow(2) + 1, 9i64.pow(3)));
}

fn mobius(n: u64) -> i64 {
    let (mut m, mut k, mut sign) = (n, 2, 1);
    while k * k <= m {
        if m % k == 0 {
            m /= k;
            if m % k == 0 {
                return 0;
            }
            sign = -sign;
        }
        k += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn c_n_oracle(q: u64, n: u64) -> i64 {
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(n / d) * (q as i64).pow(d as u32)).sum();
    s / n as i64
}

#[test]
fn c_n_against_mobius_and_enumeration() {
    let rows: Vec<EulerRow<BigRational>> = euler_product_partial(3, 3, 8);
    let f3 = FieldSpec::new(3, 1).unwrap();
    for row in &rows {
        let n = row.degree as u64;
        assert_eq!(row.c_n, BigUint::from(c_n_oracle(3, n) as u64), "n={n}");
        if n <= 6 {
            let counted = FqPoly::monic_of_degree(f3, n as usize).filter(is_irreducible).count();
            assert_eq!(row.c_n, BigUint::from(counted));
        }
    }
}

#[test]
fn euler_partials_decrease_and_agree() {
    let exact: Vec<EulerRow<BigRational>> = euler_product_partial(3, 3, 10);
    let float: Vec<EulerRow<f64>> = euler_product_partial(3, 3, 10);
    assert_eq!(exact[0].partial, rat(19, 27).pow(3));
    for w in exact.windows(2) {
        assert!(w[1].partial < w[0].partial);
    }
    for (e, f) in exact.iter().zip(&float) {
        let ef = e.partial.to_f64().unwrap();
        assert!((ef - f.partial).abs() <= 1e-12 * ef.max(1e-300));
        assert!((-ef.ln() - e.log_sum).abs() < 1e-9);
        assert!(e.log_sum >= e.linear_bound);
    }
    // Pinned value at B = 10.
    let b10 = exact[9].partial.to_f64().unwrap();
    assert!((b10 - 0.06317446672899882).abs() < 1e-12, "{b10}");
}

#[test]
fn membership_agrees_with_certifier_on_small_boxes() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    for x in 1..=3 {
        for g in enumerate_box(f3, 2, x) {
            let phi = DrinfeldModule::new(f3, g.clone()).unwrap();
            let rep = certify_mod_t2_nonscalar(&phi).unwrap();
            let w = pi_r_membership(&g);
            assert_eq!(rep.status == Status::Certified, w.is_some(), "{phi:?}");
            assert_eq!(rep.witness, w);
        }
    }
}

#[test]
fn box_counts_and_sieve_consistency() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let s = primes_excluding_t(f3, 1);
    let expect = [(1, 6, 0), (2, 72, 24), (3, 702, 408)];
    for (x, total, pi) in expect {
        let c = count_box(f3, 2, x, &s).unwrap();
        assert_eq!((c.total, c.pi_r), (total, pi));
        assert!(c.omega <= c.omega_s && c.omega_s <= c.no_witness_s);
        assert!(c.complement() <= c.no_witness_s);
        assert_eq!(c.complement_outside_no_witness_s, 0);
    }
    // The box (T+2, T+2) is outside Π_2 and outside Ω_2 as well.
    let g = vec![parse_poly("T+2", f3).unwrap(), parse_poly("T+2", f3).unwrap()];
    assert!(pi_r_membership(&g).is_none());
    assert!(!drinfeld::density::in_omega(&g));
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| density_sweep(f3, 2, 1..=3).unwrap())
    };
    let a: Vec<String> = run(1).iter().map(|r| r.csv()).collect();
    let b: Vec<String> = run(4).iter().map(|r| r.csv()).collect();
    assert_eq!(a, b);
    let d2 = omega_s_density(&primes_excluding_t(f3, 2)).unwrap().to_f64().unwrap();
    assert_eq!(a[1], format!("2,72,24,1/3,2,{d2}"));
}

#[test]
fn budget_and_t_guards() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    assert!(count_box(f3, 2, 20, &[]).is_err());
    assert!(count_box(f3, 2, 1, &[PrimeOfA::new(FqPoly::x(&f3)).unwrap()]).is_err());
    assert!(omega_s_density(&[PrimeOfA::new(FqPoly::x(&f3)).unwrap()]).is_err());
}
