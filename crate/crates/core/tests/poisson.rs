use proptest::prelude::*;
use qmv_core::ncalg::NCElement;
use qmv_core::poisson::*;
use qmv_core::scalars::*;

fn ctx11() -> PoissonOrderCtx {
    PoissonOrderCtx::kronecker(1, 1, 3).unwrap()
}

#[test]
fn hayashi_small_values() {
    let ctx = ctx11();
    let s = ctx.root_spec();
    let x3 = s.normal_form(&[(0, 3)]).unwrap();
    let x = s.gen(0);
    let d = s.gen(1);
    assert!(hayashi_derivation(&ctx, &x3, &x).unwrap().is_zero());
    assert!(hayashi_derivation(&ctx, &s.one(), &d).unwrap().is_zero());

    // ∂x³ = t⁶x³∂ + (t⁵+t³+t)x², so x³∂ − ∂x³ = (1−t⁶)x³∂ − (t⁵+t³+t)x²;
    // the first-order parts at ζ are −6ζ⁵ and −(5ζ⁴+3ζ²+1).
    let z = CycScalar::zeta(3);
    let c1 = CycScalar::from_int(3, -6).times(&z.pow_i(2).unwrap());
    let kappa = z.minus(&z.inverse().unwrap());
    let c2 = CycScalar::from_int(3, -6).times(&z.pow_i(2).unwrap()).times(&kappa.inverse().unwrap());
    let want = s.normal_form(&[(0, 3), (1, 1)]).unwrap().scale(&c1).add(&s.normal_form(&[(0, 2)]).unwrap().scale(&c2));
    assert_eq!(hayashi_derivation(&ctx, &x3, &d).unwrap(), want);
}

#[test]
fn specialization_is_multiplicative() {
    assert!(ctx11().check_specialization(40, 7).unwrap());
    assert!(PoissonOrderCtx::kronecker(2, 1, 3).unwrap().check_specialization(40, 11).unwrap());
}

#[test]
fn bracket_of_generators_has_witness() {
    let ctx = ctx11();
    let rep = verify_hayashi_closure(&ctx).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert_eq!(rep.pairs.len(), 1);
    assert!(!rep.pairs[0].witness.is_empty());
    let zs = &ctx.z_gens;
    assert!(bracket_on_z(&ctx, &zs[0], &zs[0]).unwrap().is_zero());
}

#[test]
fn closure_on_2x2_edge() {
    let ctx = PoissonOrderCtx::kronecker(2, 2, 3).unwrap();
    let rep = verify_hayashi_closure(&ctx).unwrap();
    assert_eq!(rep.generators.len(), 8);
    assert_eq!(rep.pairs.len(), 28);
    assert!(rep.passed(), "{:?}", rep.failures);
}

#[test]
fn induced_bracket_is_lift_independent() {
    let ctx = PoissonOrderCtx::kronecker(2, 1, 3).unwrap();
    let g = &ctx.generic.spec;
    let zeta = LaurentScalar::constant(CycScalar::zeta(3));
    let t_minus = LaurentScalar::t_pow(3, 1).minus(&zeta);
    let w = g.normal_form(&[(0, 1), (2, 2)]).unwrap().add(&g.gen(3));
    for (a, z1) in ctx.z_gens.iter().enumerate() {
        let lift = ctx.lift(z1).unwrap().add(&w.scale(&t_minus));
        for z2 in &ctx.z_gens {
            let base = bracket_on_z(&ctx, z1, z2).unwrap();
            let other = hayashi_with_lift(&ctx, &lift, z2).unwrap();
            assert_eq!(base, other, "lift of generator {a}");
        }
    }
}

#[test]
fn bivector_diagonal_term_is_off_by_two() {
    for (n, m) in [(1, 1), (2, 1), (2, 2)] {
        let printed = compare_with_degeneration(n, m, 3).unwrap();
        assert!(!printed.proportional);
        let fixed = compare_bivector_form(n, m, 3, BivectorForm::HalvedDiagonal).unwrap();
        assert!(fixed.proportional, "({n},{m})");
        // ℓ²ζ^{-1}
        let c = CycScalar::from_int(3, 9).times(&CycScalar::zeta(3).inverse().unwrap());
        assert_eq!(fixed.constant, Some(c.to_string()));
    }
}

#[test]
fn bivector_table_is_antisymmetric() {
    let t = bivector_bracket(2, 2, 3, BivectorForm::Printed).unwrap();
    for ((a, b), p) in &t {
        let q = t.get(&(*b, *a)).unwrap();
        for (k, c) in p {
            assert_eq!(&q[k], &c.negated());
        }
        assert!(a != b);
    }
}

#[test]
fn torus_scaling() {
    for skew in [
        vec![vec![0, 1], vec![-1, 0]],
        vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]],
        vec![vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]],
    ] {
        let rep = torus_bracket_scaling(&skew, &[3, 5]).unwrap();
        assert!(rep.proportional, "{:?}", rep.failures);
        for (ell, c) in &rep.scalars {
            let l = *ell as i64;
            let want = CycScalar::from_int(*ell, l * l).times(&CycScalar::zeta(*ell).inverse().unwrap());
            assert_eq!(c.as_deref(), Some(want.to_string().as_str()));
        }
    }
    let zero = torus_bracket_scaling(&[vec![0, 0], vec![0, 0]], &[3]).unwrap();
    assert!(zero.proportional);
    assert_eq!(zero.scalars[0].1, None);
}

#[test]
fn moment_shadow_rank_one() {
    for ell in [3, 5] {
        let sh = classical_shadow_of_moment(ell).unwrap();
        assert!(sh.in_center);
        let z = CycScalar::zeta(ell);
        let kappa = z.minus(&z.inverse().unwrap());
        assert_eq!(sh.linear_constant, Some(kappa.pow_i(ell as i64).unwrap().to_string()));
    }
    let f = fused_shadow(3).unwrap();
    assert!(f.fused_in_center && f.product_of_shadows);
}

#[test]
fn generic_moment_at_t_one() {
    // κ = t − t^{-1} vanishes at t = 1, so g^α specializes to 1.
    let kappa = LaurentScalar::t_pow(1, 1).minus(&LaurentScalar::t_pow(1, -1));
    assert!(kappa.eval_at(&CycScalar::one(1)).is_zero_val());
}

fn random_element(ctx: &PoissonOrderCtx, words: &[(u8, u8, i8)]) -> NCElement<CycScalar> {
    let s = ctx.root_spec();
    let mut out = s.zero();
    for &(a, b, c) in words {
        let w = [(a as usize % s.ngens(), 1), (b as usize % s.ngens(), 1)];
        out = out.add(&s.normal_form(&w).unwrap().scale(&CycScalar::from_int(3, c as i64)));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn hayashi_is_a_derivation(
        u in prop::collection::vec((0u8..4, 0u8..4, -3i8..4), 1..3),
        v in prop::collection::vec((0u8..4, 0u8..4, -3i8..4), 1..3),
        k in 0usize..4,
    ) {
        let ctx = PoissonOrderCtx::kronecker(2, 1, 3).unwrap();
        let s = ctx.root_spec();
        let (a, b) = (random_element(&ctx, &u), random_element(&ctx, &v));
        let z = &ctx.z_gens[k];
        let lhs = hayashi_derivation(&ctx, z, &s.multiply(&a, &b).unwrap()).unwrap();
        let rhs = s.multiply(&hayashi_derivation(&ctx, z, &a).unwrap(), &b).unwrap()
            .add(&s.multiply(&a, &hayashi_derivation(&ctx, z, &b).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
