use proptest::prelude::*;
use qmv_core::azumaya::*;
use qmv_core::linalg::Mat;
use qmv_core::qalgebras::*;
use qmv_core::scalars::*;

fn zeta(ell: u32) -> CycScalar {
    CycScalar::zeta(ell)
}

/// d_r = (ζ^{2r} − 1)/(ζ − ζ^{-1}), from ∂x^r = q^{2r}x^r∂ + d_r x^{r−1}.
fn d(ell: u32, r: i64) -> CycScalar {
    let z = zeta(ell);
    let kappa = z.minus(&z.inverse().unwrap());
    z.pow_i(2 * r).unwrap().minus(&CycScalar::one(ell)).times(&kappa.inverse().unwrap())
}

#[test]
fn rank_one_module_matrices() {
    for ell in [3u32, 5] {
        let m = build_module(1, 1, ell).unwrap();
        assert_eq!(m.dim(), ell as usize);
        let one = CycScalar::one(ell);
        let l = ell as usize;
        let mut x = Mat::zeros(l, l, &one);
        let mut del = Mat::zeros(l, l, &one);
        for r in 1..l {
            x.set(r, r - 1, one.clone());
            del.set(r - 1, r, d(ell, r as i64));
        }
        assert_eq!(m.rep.actions[0], x);
        assert_eq!(m.rep.actions[1], del);
        // x is nilpotent of order exactly ℓ
        let mut p = Mat::identity(l, &one);
        for k in 1..=l {
            p = p.mul(&x);
            assert_eq!(p.is_zero(), k == l);
        }
        assert!(m.relations.passed());
    }
}

#[test]
fn module_relations_hold() {
    for (n, mm) in [(1, 2), (2, 1)] {
        let m = build_module(n, mm, 3).unwrap();
        assert_eq!(m.dim(), 9);
        assert!(m.relations.passed(), "{:?}", m.relations.failures);
        // 6 rules plus 4 truncations
        assert_eq!(m.relations.identities, 10);
    }
}

#[test]
fn leading_index_order() {
    use LeadingIndex::*;
    let a = At { upper: 1, lower: 2 };
    let b = At { upper: 2, lower: 2 };
    let c = At { upper: 1, lower: 1 };
    assert!(a > b && b > c && c > Zero);
    let m = build_module(1, 1, 3).unwrap();
    assert!(m.leading_index(&Vector::new()).is_err());
    assert_eq!(m.leading_index(&m.basis_vector(0)).unwrap(), Zero);
}

#[test]
fn reduce_x_squared() {
    let m = build_module(1, 1, 3).unwrap();
    let one = m.reduce_to_one(&m.basis_vector(0)).unwrap();
    assert!(one.word.is_empty() && one.succeeded());
    let v = m.vector_of(&["x1_1", "x1_1"]).unwrap();
    let w = m.reduce_to_one(&v).unwrap();
    assert_eq!(w.word, vec![1, 1]);
    assert_eq!(w.value, Some(d(3, 2).times(&d(3, 1))));
    assert!(m.replay(&w, &v));
}

#[test]
fn two_step_witness() {
    let m = build_module(1, 2, 3).unwrap();
    let v = m.vector_of(&["x1_1", "x2_1"]).unwrap();
    let w = m.reduce_to_one(&v).unwrap();
    assert!(w.succeeded(), "{w:?}");
    assert_eq!(w.steps.len(), 2);
    assert_eq!(w.steps[0].index, LeadingIndex::At { upper: 1, lower: 1 });
    assert!(m.replay(&w, &v));
}

#[test]
fn zero_fibers_are_matrix_algebras() {
    for (n, mm, ell, dim) in [(1, 1, 3, 3), (1, 1, 5, 5), (1, 2, 3, 9), (2, 1, 3, 9)] {
        let m = build_module(n, mm, ell).unwrap();
        let cert = is_matrix_algebra(&m).unwrap();
        assert_eq!(cert.module_dim, dim);
        assert_eq!(cert.span_dim, dim * dim, "({n},{mm},{ell})");
        assert!(cert.is_matrix_algebra);
        assert_eq!(cert.witnesses.len(), dim);
        assert!(cert.all_reduced, "({n},{mm},{ell})");
    }
}

#[test]
fn zero_fiber_presentation() {
    let f = build_zero_fiber(1, 1, 3).unwrap();
    assert_eq!(f.dim(), 9);
    let rep = f.regular_representation().unwrap();
    let chk = rep.check_relations(f.spec(), &f.character);
    assert!(chk.passed(), "{:?}", chk.failures);
}

#[test]
fn commutative_torus_is_not_a_matrix_algebra() {
    let t = quantum_torus(&[vec![0, 0], vec![0, 0]], &zeta(3)).unwrap();
    let f = FiberAlgebra::new(t, 3, vec![CycScalar::one(3); 2]).unwrap();
    let rep = f.regular_representation().unwrap();
    let cert = matrix_certificate(&rep, 2);
    assert_eq!(cert.module_dim, 9);
    assert_eq!(cert.span_dim, 9);
    assert!(!cert.is_matrix_algebra);
    assert!(cert.span.stabilized);
}

#[test]
fn boundary_obstructions() {
    let t = quantum_torus(&[vec![0, 1], vec![-1, 0]], &zeta(3)).unwrap();
    let x1 = t.spec.gen(0);
    let f = FiberAlgebra::new(t, 3, vec![CycScalar::zero(3), CycScalar::one(3)]).unwrap();
    let rep = boundary_obstruction(&f, &x1).unwrap();
    assert!(rep.nonzero && rep.proper && rep.obstruction);
    // X1·(X1^a X2^b) spans the monomials with a ≥ 1.
    assert_eq!(rep.ideal_dim, 6);
    assert!(boundary_obstruction(&f, &f.spec().zero()).is_err());

    let z = build_zero_fiber(1, 1, 3).unwrap();
    let c = z.spec().scalar(CycScalar::from_int(3, 5));
    let rep = boundary_obstruction(&z, &c).unwrap();
    assert!(!rep.proper && !rep.obstruction);
    let x = z.spec().gen(0);
    assert!(matches!(boundary_obstruction(&z, &x), Err(qmv_core::Error::NotQCentral(_))));
}

fn quiver(dims: Vec<usize>, edges: &[(usize, usize)]) -> Quiver {
    Quiver {
        name: String::new(),
        dims,
        edges: edges.iter().map(|&(source, target)| QuiverEdge { source, target, is_loop: source == target }).collect(),
        ell: 3,
        mode: QuiverMode::Root,
    }
}

#[test]
fn trivial_and_loop_reductions() {
    let one = CycScalar::one(3);
    let q = build_quiver(&quiver(vec![1], &[]), &zeta(3)).unwrap();
    let rep = abelian_reduction(&q, &[], &[one.clone()], 3).unwrap();
    assert_eq!(rep.dim, 1);
    assert!(rep.associative && rep.center_central);

    let q = build_quiver(&quiver(vec![1], &[(0, 0)]), &zeta(3)).unwrap();
    let chi = vec![one.clone(); 2];
    let rep = abelian_reduction(&q, &chi, &[one.clone()], 3).unwrap();
    assert_eq!(rep.weight_zero_dim, 9);
    assert_eq!(rep.dim, 0);
    // a·d·a^{-1}·d^{-1} = ζ², so ξ = ζ² imposes nothing.
    let rep = abelian_reduction(&q, &chi, &[zeta(3).pow_i(2).unwrap()], 3).unwrap();
    assert_eq!(rep.dim, 9);
    assert!(rep.associative && rep.center_central);
    assert!(abelian_reduction(&q, &chi, &[CycScalar::zero(3)], 3).is_err());
}

/// dim of {v : g^β v = ξ_t v, ξ_s g^α v = v} on the rank-one module, read off
/// the module matrices.
fn coinvariant_dim(xs: &CycScalar, xt: &CycScalar) -> usize {
    let m = build_module(1, 1, 3).unwrap();
    let one = CycScalar::one(3);
    let z = zeta(3);
    let kappa = z.minus(&z.inverse().unwrap());
    let (x, del) = (&m.rep.actions[0], &m.rep.actions[1]);
    let id = Mat::identity(3, &one);
    let beta = id.add(&x.mul(del).scale(&kappa));
    let alpha = id.add(&del.mul(x).scale(&kappa));
    let t1 = beta.sub(&id.scale(xt));
    let t2 = id.sub(&alpha.scale(xs));
    let mut rows: Vec<Vec<CycScalar>> = (0..3).map(|i| t1.row(i).to_vec()).collect();
    rows.extend((0..3).map(|i| t2.row(i).to_vec()));
    3 - Mat::from_rows(rows).rank()
}

#[test]
fn matrix_fiber_reduction_matches_coinvariants() {
    let q = build_quiver(&quiver(vec![1, 1], &[(0, 1)]), &zeta(3)).unwrap();
    let chi = vec![CycScalar::zero(3); 2];
    let z = zeta(3);
    let mut cases = Vec::new();
    for r in 0..3i64 {
        let xt = z.pow_i(2 * r).unwrap();
        let xs = if r == 2 { CycScalar::one(3) } else { z.pow_i(-2 * (r + 1)).unwrap() };
        cases.push((xs, xt));
    }
    cases.push((CycScalar::from_int(3, 2), CycScalar::one(3)));
    let mut nonzero = 0;
    for (xs, xt) in cases {
        let k = coinvariant_dim(&xs, &xt);
        let rep = abelian_reduction(&q, &chi, &[xs, xt], 3).unwrap();
        assert_eq!(rep.dim, k * k);
        assert!(rep.associative && rep.center_central);
        nonzero += k;
    }
    assert_eq!(nonzero, 3);
}

#[test]
fn braided_product_of_matrix_fibers() {
    let q = build_quiver(&quiver(vec![1, 1, 1], &[(0, 1), (1, 2)]), &zeta(3)).unwrap();
    let m = build_module_for(q.alg.clone(), 3).unwrap();
    assert_eq!(m.dim(), 9);
    let whole = is_matrix_algebra(&m).unwrap();
    assert!(whole.is_matrix_algebra);
    let part = is_matrix_algebra(&build_module(1, 1, 3).unwrap()).unwrap();
    assert!(part.is_matrix_algebra);
}

#[test]
fn module_budget() {
    assert!(matches!(build_module(3, 3, 5), Err(qmv_core::Error::DegreeBudget(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn every_vector_reduces(coeffs in prop::collection::vec(-3i64..4, 9)) {
        let m = build_module(1, 2, 3).unwrap();
        let v: Vector = coeffs.iter().enumerate().filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, CycScalar::from_int(3, c))).collect();
        prop_assume!(!v.is_empty());
        let w = m.reduce_to_one(&v).unwrap();
        prop_assert!(w.succeeded(), "{:?}", w.stalled);
        prop_assert!(m.replay(&w, &v));
    }
}

#[test]
fn two_by_two_module_reduces() {
    let m = build_module(2, 2, 3).unwrap();
    assert_eq!(m.dim(), 81);
    assert!(m.relations.passed(), "{:?}", m.relations.failures);
    for i in 0..m.dim() {
        let v = m.basis_vector(i);
        let w = m.reduce_to_one(&v).unwrap();
        assert!(w.succeeded() && m.replay(&w, &v), "basis vector {i}: {:?}", w.stalled);
    }
    let cert = matrix_certificate(&m.rep, 8);
    assert_eq!(cert.span_dim, 81 * 81);
}
