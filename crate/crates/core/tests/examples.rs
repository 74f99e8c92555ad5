use abmod_core::fixpoint::submodule_closure;
use abmod_core::{
    bernstein, biggest_simple_pole_sub, dual_bernstein, e_delta, e_lambda, is_regular,
    jordan_module, pham, random_regular, rat, saturate, AbModule, FixedPointConfig, PhamSpec,
    RandomProfile, Rational, RationalPolynomial, Series, SeriesMatrix,
};

fn cfg() -> FixedPointConfig {
    FixedPointConfig::default()
}

fn e2(n: usize) -> AbModule {
    let s = |t: &str| Series::parse(t, n).unwrap();
    AbModule::new(SeriesMatrix::from_rows(vec![
        vec![s("0"), s("b^2")],
        vec![s("1"), s("0")],
    ]))
    .unwrap()
}

fn roots(r: &[(i64, i64, usize)]) -> RationalPolynomial {
    let r: Vec<(Rational, usize)> = r.iter().map(|&(n, d, m)| (rat(n, d), m)).collect();
    RationalPolynomial::from_roots(&r)
}

#[test]
fn pham_bernstein_polynomials() {
    for (exps, expected) in [
        (vec![2, 2], roots(&[(-1, 1, 1)])),
        (vec![2, 3], roots(&[(-5, 6, 1), (-7, 6, 1)])),
        (vec![3, 3], roots(&[(-2, 3, 1), (-1, 1, 1), (-4, 3, 1)])),
    ] {
        let m = pham(&PhamSpec::new(exps).unwrap(), 20);
        let sat = saturate(&m, &cfg()).unwrap();
        assert!(sat.is_identity());
        assert_eq!(bernstein(&m, &cfg()).unwrap().poly, expected);
        assert_eq!(dual_bernstein(&m, &cfg()).unwrap().poly, expected);
    }
}

#[test]
fn rank_one_and_jordan_polynomials() {
    let p = bernstein(&e_delta(&rat(5, 6), 10), &cfg()).unwrap();
    assert_eq!(p.poly, roots(&[(-5, 6, 1)]));
    assert_eq!(
        dual_bernstein(&e_lambda(&rat(1, 1), 10), &cfg())
            .unwrap()
            .poly,
        roots(&[(-1, 1, 1)])
    );
    for (b, d) in [((1, 2), 1), ((-3, 4), 2), ((1, 1), 3)] {
        let beta = rat(b.0, b.1);
        let p = bernstein(&jordan_module(&beta, d, 16), &cfg()).unwrap();
        assert_eq!(p.poly, RationalPolynomial::linear(&-beta).pow(d));
    }
}

#[test]
fn closure_of_f_generators_in_the_saturation() {
    let m = e2(24);
    let sat = saturate(&m, &cfg()).unwrap();
    let f = biggest_simple_pole_sub(&m, &cfg()).unwrap();
    // (b e1, e2) in the saturation basis (e1, b^{-1} e2) is (b f1, b f2).
    let n = sat.module.trunc();
    let b = Series::monomial(rat(1, 1), 1, n);
    let gens = vec![
        abmod_core::LaurentVector::from_series(vec![b.clone(), Series::zero(n)]),
        abmod_core::LaurentVector::from_series(vec![Series::zero(n), b]),
    ];
    let closure = submodule_closure(&sat.module, &gens, &cfg()).unwrap();
    let n2 = closure.module.trunc().min(f.module.trunc());
    assert_eq!(
        closure.module.a_matrix().with_trunc(n2),
        f.module.a_matrix().with_trunc(n2)
    );
}

#[test]
fn random_rank_one_is_shifted_e_lambda() {
    for seed in 0..10 {
        let m = random_regular(1, seed, 14, &RandomProfile::default()).unwrap();
        let p = bernstein(&m, &cfg()).unwrap();
        assert_eq!(p.degree(), 1);
        // The root is -(lambda + m) for the residue lambda of the ambient
        // simple-pole module and some m >= 0; the module itself has simple
        // pole with that same residue.
        assert!(m.is_simple_pole());
        assert_eq!(
            p.rational_roots[0].0,
            -m.residue_endomorphism().unwrap().get(0, 0).clone()
        );
    }
}

#[test]
fn regularity_verdicts() {
    assert_eq!(is_regular(&e2(18), &cfg()), Ok(true));
    for seed in 0..5 {
        let m = random_regular(2, seed, 18, &RandomProfile::default()).unwrap();
        assert_eq!(is_regular(&m, &cfg()), Ok(true));
    }
}
