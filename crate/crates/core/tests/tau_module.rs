use drinfeld::drinfeld::{DrinfeldModule, ReductionClass};
use drinfeld::gfq::{FieldSpec, FqElem, FqPoly, PrimeOfA};
use drinfeld::ring::{Field, Ring};
use drinfeld::tau::TauPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tau_polys(fq: &'static FieldSpec, max_deg: u32) -> Vec<TauPoly<FqElem>> {
    let n = fq.q().pow(max_deg + 1);
    (0..n)
        .map(|idx| {
            let mut k = idx;
            let coeffs = (0..=max_deg)
                .map(|_| {
                    let c = fq.elem(k % fq.q());
                    k /= fq.q();
                    c
                })
                .collect();
            TauPoly::new(&fq, coeffs)
        })
        .collect()
}

fn random_tau(fq: &'static FieldSpec, rng: &mut ChaCha8Rng, max_deg: usize) -> TauPoly<FqElem> {
    let d = rng.gen_range(0..=max_deg);
    TauPoly::new(&fq, (0..=d).map(|_| FqElem::random(&fq, rng)).collect())
}

fn random_poly(fq: &'static FieldSpec, rng: &mut ChaCha8Rng, max_deg: usize) -> FqPoly {
    let d = rng.gen_range(0..=max_deg);
    FqPoly::new(&fq, (0..=d).map(|_| FqElem::random(&fq, rng)).collect())
}

// Action of a twisted polynomial over F_q on A = F_q[T], where τ is x -> x^q.
fn act(f: &TauPoly<FqElem>, x: &FqPoly) -> FqPoly {
    f.eval_with(x, |c| FqPoly::constant(*c))
}

#[test]
fn ring_axioms_exhaustive_over_f3() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let all = tau_polys(f3, 2);
    assert_eq!(all.len(), 27);
    let one = TauPoly::one(&f3);
    let zero = TauPoly::zero(&f3);
    for a in &all {
        assert_eq!(&(a * &one), a);
        assert_eq!(&(&one * a), a);
        assert_eq!(a + &zero, a.clone());
        assert!((a - a).is_zero());
        for b in &all {
            assert_eq!(a + b, b + a);
            let ab = a * b;
            if !a.is_zero() && !b.is_zero() {
                assert_eq!(ab.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
            }
            for c in &all {
                assert_eq!(&ab * c, a * &(b * c));
                assert_eq!(a * &(b + c), &ab + &(a * c));
                assert_eq!(&(a + b) * c, &(a * c) + &(b * c));
            }
        }
    }
}

#[test]
fn evaluation_is_composition_exhaustive_over_f3() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let all = tau_polys(f3, 2);
    let points: Vec<FqPoly> = FqPoly::all_below_degree(f3, 3).collect();
    for f in &all {
        for g in &all {
            let fg = f * g;
            for x in &points {
                assert_eq!(act(&fg, x), act(f, &act(g, x)));
            }
        }
        // F_q-linearity of the action.
        for x in &points {
            for y in points.iter().step_by(5) {
                assert_eq!(act(f, &(x + y)), act(f, x) + act(f, y));
            }
        }
    }
}

#[test]
fn random_cases_over_f9() {
    let f9 = FieldSpec::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let f = random_tau(f9, &mut rng, 3);
        let g = random_tau(f9, &mut rng, 3);
        let h = random_tau(f9, &mut rng, 3);
        let x = random_poly(f9, &mut rng, 3);
        assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        assert_eq!(act(&(&f * &g), &x), act(&f, &act(&g, &x)));
        // τ c = c^q τ with q = 9.
        let c = FqElem::random(&f9, &mut rng);
        let tau = TauPoly::tau(&f9);
        assert_eq!(&tau * &TauPoly::constant(c), &TauPoly::constant(c.pow(9)) * &tau);
    }
}

fn random_module(fq: &'static FieldSpec, rng: &mut ChaCha8Rng, r: usize) -> DrinfeldModule {
    let mut g: Vec<FqPoly> = (0..r).map(|_| random_poly(fq, rng, 2)).collect();
    while g[r - 1].is_zero() {
        g[r - 1] = random_poly(fq, rng, 2);
    }
    DrinfeldModule::new(fq, g).unwrap()
}

#[test]
fn drinfeld_functoriality_over_a() {
    // Coefficients of φ_a over A have T-degree about q^{r deg a}, so keep a, b small.
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let f3 = FieldSpec::new(3, 1).unwrap();
    for r in [2usize, 3] {
        for _ in 0..100 {
            let phi = random_module(f3, &mut rng, r);
            let a = random_poly(f3, &mut rng, 1);
            let b = random_poly(f3, &mut rng, 1);
            let (pa, pb) = (phi.phi(&a), phi.phi(&b));
            assert_eq!(&pa * &pb, phi.phi(&(&a * &b)));
            assert_eq!(&pa + &pb, phi.phi(&(&a + &b)));
            if let Some(d) = a.degree() {
                assert_eq!(pa.degree(), Some(r * d));
                assert_eq!(pa.coeff(0), a);
            }
        }
    }
}

#[test]
fn drinfeld_functoriality_on_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for fq in [FieldSpec::new(3, 1).unwrap(), FieldSpec::new(5, 1).unwrap()] {
        let primes = PrimeOfA::of_degree(fq, 2);
        for r in [2usize, 3] {
            let mut done = 0;
            while done < 100 {
                let phi = random_module(fq, &mut rng, r);
                let prime = &primes[rng.gen_range(0..primes.len())];
                if phi.reduction_info(prime).class != ReductionClass::Good {
                    continue;
                }
                let (_, red) = phi.reduce_at(prime);
                let a = random_poly(fq, &mut rng, 3);
                let b = random_poly(fq, &mut rng, 3);
                let (pa, pb) = (red.phi(&a), red.phi(&b));
                assert_eq!(&pa * &pb, red.phi(&(&a * &b)));
                assert_eq!(&pa * &pb, &pb * &pa);
                if let Some(d) = a.degree() {
                    assert_eq!(pa.degree(), Some(r * d));
                }
                done += 1;
            }
        }
    }
}

#[test]
fn invalid_modules_rejected() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    assert!(DrinfeldModule::new(f3, vec![]).is_err());
    assert!(DrinfeldModule::new(f3, vec![FqPoly::one(&f3), FqPoly::zero(&f3)]).is_err());
    assert!(DrinfeldModule::from_json(r#"{"q":3,"r":0,"g":[]}"#).is_err());
    assert!(DrinfeldModule::from_json(r#"{"q":3,"r":2,"g":["1","0"]}"#).is_err());
    assert!(DrinfeldModule::from_json(r#"{"q":6,"r":1,"g":["1"]}"#).is_err());
}
