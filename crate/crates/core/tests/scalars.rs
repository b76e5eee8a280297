use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qmv_core::scalars::*;

fn c64_eval(x: &CycScalar) -> (f64, f64) {
    let ell = x.ell() as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for (k, c) in x.coeffs().iter().enumerate() {
        let v = c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap();
        let ang = 2.0 * std::f64::consts::PI * k as f64 / ell;
        re += v * ang.cos();
        im += v * ang.sin();
    }
    (re, im)
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-6 * (1.0 + b.0.abs()) && (a.1 - b.1).abs() < 1e-6 * (1.0 + b.1.abs())
}

fn cyc_from(ell: u32, v: &[i64]) -> CycScalar {
    let coeffs: Vec<BigRational> = v.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(1 + (x.abs() % 3)))).collect();
    CycScalar::from_coeffs(ell, &coeffs)
}

fn arb_cyc(ell: u32) -> impl Strategy<Value = CycScalar> {
    prop::collection::vec(-9i64..=9, 1..(ell as usize + 2)).prop_map(move |v| cyc_from(ell, &v))
}

fn arb_laurent(ell: u32) -> impl Strategy<Value = LaurentScalar> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(-5i64..=5, 1..3)), 0..4)
        .prop_map(move |ts| LaurentScalar::from_terms(ell, ts.into_iter().map(|(k, v)| (k, cyc_from(ell, &v)))))
}

#[test]
fn cyclotomic_polynomials() {
    let show = |n| cyclotomic_poly(n).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    assert_eq!(show(3), "1,1,1");
    assert_eq!(show(9), "1,0,0,1,0,0,1");
    assert_eq!(show(15), "1,-1,0,1,-1,1,0,-1,1");
    assert_eq!(totient(5), 4);
}

#[test]
fn zeta_power_reduces() {
    for ell in [3u32, 5, 7, 9, 15] {
        let z = CycScalar::zeta(ell);
        assert_eq!(z.pow_i(ell as i64).unwrap(), CycScalar::one(ell));
        assert_ne!(z.pow_i(1).unwrap(), CycScalar::one(ell));
        assert_eq!(z.pow_i(-1).unwrap(), CycScalar::zeta_pow(ell, ell as i64 - 1));
    }
}

#[test]
fn canonical_text_round_trip() {
    let x = cyc_from(5, &[3, -2, 0, 7, 1]);
    let s = x.to_string();
    assert_eq!(CycScalar::parse(5, &s).unwrap(), x);
    assert_eq!(CycScalar::zero(3).to_string(), "(0)");
    assert_eq!(CycScalar::zeta(3).to_string(), "(1*z)");
    let f = LaurentScalar::from_terms(5, [(-2, x.clone()), (0, CycScalar::one(5)), (3, CycScalar::zeta(5))]);
    assert_eq!(LaurentScalar::parse(5, &f.to_string()).unwrap(), f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn field_axioms(a in arb_cyc(5), b in arb_cyc(5), c in arb_cyc(5)) {
        prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero_val() {
            prop_assert_eq!(&a * &a.inv_ref().unwrap(), CycScalar::one(5));
        }
        let (x, y) = (c64_eval(&a), c64_eval(&b));
        let expected = (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        prop_assert!(close(c64_eval(&(&a * &b)), expected));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn first_order_leibniz(f in arb_laurent(3), g in arb_laurent(3)) {
        let fg = &f * &g;
        let lhs = first_order(&fg);
        let rhs = &(&first_order(&f) * &eval_at_root(&g)) + &(&eval_at_root(&f) * &first_order(&g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_by_linear(f in arb_laurent(3)) {
        let z = CycScalar::zeta(3);
        let lin = LaurentScalar::from_terms(3, [(1, CycScalar::one(3)), (0, z.neg_ref())]);
        let prod = &f * &lin;
        prop_assert_eq!(prod.div_linear(&z).unwrap(), f.clone());
        prop_assert_eq!(prod.div_exact_by(&lin).unwrap(), f.clone());
        let divisible = f.div_linear(&z).is_some();
        prop_assert_eq!(divisible, eval_at_root(&f).is_zero_val());
    }

    #[test]
    fn inverse_in_other_orders(a in arb_cyc(9)) {
        if !a.is_zero_val() {
            prop_assert_eq!(&a * &a.inv_ref().unwrap(), CycScalar::one(9));
        }
    }
}

#[test]
fn qint_examples() {
    assert_eq!(qint(1, Mode::Generic), Scalar::Laurent(LaurentScalar::one(1)));
    let t = |k| LaurentScalar::t_pow(1, k);
    assert_eq!(qint(2, Mode::Generic), Scalar::Laurent(&t(1) + &t(-1)));
    assert_eq!(qint(3, Mode::Root(3)), Scalar::Cyc(CycScalar::zero(3)));
    assert_eq!(qint(-2, Mode::Generic), Scalar::Laurent(-(&t(1) + &t(-1))));
}

#[test]
fn qbinom_examples() {
    let t = |k| LaurentScalar::t_pow(1, k);
    let expected = &(&(&(&t(-4) + &t(-2)) + &LaurentScalar::from_int(1, 2)) + &t(2)) + &t(4);
    assert_eq!(qbinom(4, 2, Mode::Generic).unwrap(), Scalar::Laurent(expected));
    assert_eq!(qbinom(7, 0, Mode::Root(5)).unwrap(), Scalar::Cyc(CycScalar::one(5)));
    assert_eq!(qbinom(3, 1, Mode::Root(3)).unwrap(), Scalar::Cyc(CycScalar::zero(3)));
    assert!(qbinom(2, 3, Mode::Generic).is_err());
}

fn binom(n: u64, k: u64) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[test]
fn qbinom_lucas_factorization() {
    for ell in [3u64, 5] {
        let z = CycScalar::zeta(ell as u32);
        for r in 0..=3 * ell {
            for s in 0..=r {
                let lhs = qbinom_in(r, s, &z).unwrap();
                let (r0, r1, s0, s1) = (r % ell, r / ell, s % ell, s / ell);
                let small = if s0 <= r0 { qbinom_in(r0, s0, &z).unwrap() } else { CycScalar::zero(ell as u32) };
                assert_eq!(lhs, small.scale_int(binom(r1, s1)), "r={r} s={s} ell={ell}");
            }
        }
    }
}

#[test]
fn qbinom_matches_factorial_formula_generically() {
    let t = LaurentScalar::t_pow(1, 1);
    for r in 0..7u64 {
        for s in 0..=r {
            let b = qbinom_in(r, s, &t).unwrap();
            let fact = |n: u64| (1..=n as i64).fold(LaurentScalar::one(1), |acc, k| &acc * &qint_in(k, &t));
            assert_eq!(&b * &(&fact(s) * &fact(r - s)), fact(r));
        }
    }
}

#[test]
fn eval_and_first_order_examples() {
    let t3 = LaurentScalar::t_pow(3, 3);
    assert_eq!(eval_at_root(&t3), CycScalar::one(3));
    let z = CycScalar::zeta(3);
    let lin = LaurentScalar::from_terms(3, [(1, CycScalar::one(3)), (0, z.neg_ref())]);
    assert_eq!(first_order(&lin), CycScalar::one(3));
    let f = &LaurentScalar::one(3) - &LaurentScalar::t_pow(3, 6);
    assert_eq!(first_order(&f), CycScalar::zeta_pow(3, 2).scale_int(-6));
}

#[test]
fn jet_matches_value_and_derivative() {
    let f = LaurentScalar::from_terms(5, [(-3, CycScalar::from_int(5, 2)), (4, CycScalar::zeta(5)), (1, CycScalar::from_int(5, -7))]);
    let g = LaurentScalar::from_terms(5, [(2, CycScalar::from_int(5, 3)), (-1, CycScalar::one(5))]);
    let jf = JetScalar::from_laurent(&f);
    let jg = JetScalar::from_laurent(&g);
    assert_eq!(&jf * &jg, JetScalar::from_laurent(&(&f * &g)));
    assert_eq!(jf.value, eval_at_root(&f));
    assert_eq!(jf.deriv, first_order(&f));
    let t = JetScalar::t(5);
    assert_eq!(&t * &Coeff::inverse(&t).unwrap(), JetScalar::constant(CycScalar::one(5)));
}


#[test]
fn assumption_examples() {
    for ell in (3..=15).step_by(2) {
        for g in expand_label("GLn").unwrap() {
            assert!(check_assumption(&g, ell).unwrap().holds, "GL fails at {ell}");
        }
    }
    let a2ad = CartanData::parse("A2-adjoint").unwrap();
    let rep = check_assumption(&a2ad, 3).unwrap();
    assert!(!rep.holds);
    assert_eq!(rep.offending_primes, vec![3]);
    assert!(check_assumption(&CartanData::parse("A1").unwrap(), 5).unwrap().holds);
    let g2 = check_assumption(&CartanData::parse("G2").unwrap(), 9).unwrap();
    assert!(!g2.holds && g2.g2_exclusion);
    assert!(check_assumption(&CartanData::parse("G2").unwrap(), 5).unwrap().holds);
    assert!(CartanData::parse("E6").is_err());
    assert!(check_assumption(&a2ad, 4).is_err());
}

#[test]
fn cartan_data_invariants() {
    for label in ["A3", "B3", "C3", "D4", "G2", "B2", "C2"] {
        let g = CartanData::parse(label).unwrap();
        let n = g.cartan.len();
        for i in 0..n {
            assert_eq!(g.cartan[i][i], 2);
            for j in 0..n {
                if i != j {
                    assert!(g.cartan[i][j] <= 0);
                }
                assert_eq!(g.root_gram[i][j], g.root_gram[j][i]);
                assert_eq!(g.symmetrizers[i] * g.cartan[i][j], g.root_gram[i][j]);
            }
        }
    }
    let dets: Vec<String> = ["A1", "A2", "B3", "C3", "D4", "G2"].iter().map(|l| CartanData::parse(l).unwrap().cartan_det().to_string()).collect();
    assert_eq!(dets, vec!["2", "3", "2", "2", "4", "1"]);
}
