use num_rational::BigRational;
use std::collections::BTreeMap;

use qmv_core::linalg::{EchelonBasis, SparseVec};
use qmv_core::ncalg::*;
use qmv_core::qalgebras::*;
use qmv_core::scalars::*;

fn z3() -> CycScalar {
    CycScalar::zeta(3)
}

fn generic() -> LaurentScalar {
    LaurentScalar::t_pow(3, 1)
}

#[test]
fn kronecker_1x1_single_rule() {
    let q = z3();
    let k = build_kronecker(1, 1, &q).unwrap();
    assert_eq!(k.spec.rules().len(), 1);
    let dx = k.spec.normal_form_labels(&["del1_1", "x1_1"]).unwrap();
    let q2 = q.pow_i(2).unwrap();
    let xd = k.spec.normal_form_labels(&["x1_1", "del1_1"]).unwrap();
    let want = xd.scale(&q2).add(&k.spec.scalar(q.clone()));
    assert_eq!(dx, want);
    // ∂x² = q⁴x²∂ + (q³ + q)x
    let dxx = k.spec.normal_form_labels(&["del1_1", "x1_1", "x1_1"]).unwrap();
    let xxd = k.spec.normal_form_labels(&["x1_1", "x1_1", "del1_1"]).unwrap();
    let x = k.spec.normal_form_labels(&["x1_1"]).unwrap();
    let want = xxd.scale(&q.pow_i(4).unwrap()).add(&x.scale(&q.pow_i(3).unwrap().plus(&q)));
    assert_eq!(dxx, want);
}

#[test]
fn kronecker_confluence_generic_and_root() {
    for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let k = build_kronecker(n, m, &generic()).unwrap();
        let rep = k.spec.confluence_report().unwrap();
        assert!(rep.passed(), "({n},{m}) generic: {:?}", rep.failures);
        let k = build_kronecker(n, m, &z3()).unwrap();
        assert!(k.spec.confluence_report().unwrap().passed());
        k.spec.check_termination().unwrap();
    }
}

#[test]
fn kronecker_2x1_rule_count() {
    let k = build_kronecker(2, 1, &generic()).unwrap();
    // 4 generators: 6 out-of-order pairs.
    assert_eq!(k.spec.ngens(), 4);
    assert_eq!(k.spec.rules().len(), 6);
}

#[test]
fn kronecker_matches_matrix_relations() {
    for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let q = generic();
        let k = build_kronecker(n, m, &q).unwrap();
        let derived = kronecker_rules_from_matrix_relations(n, m, &q).unwrap();
        assert_eq!(derived.len(), k.spec.rules().len(), "({n},{m})");
        // Printed right-hand sides may contain words that straighten further.
        let eval = |rhs: &Rhs<LaurentScalar>| {
            let mut acc = k.spec.zero();
            for (w, c) in rhs {
                acc = acc.add(&k.spec.normal_form_letters(w).unwrap().scale(c));
            }
            acc
        };
        for (key, rhs) in k.spec.rules() {
            let other = derived.get(key).unwrap_or_else(|| panic!("missing {key:?}"));
            assert_eq!(eval(rhs), eval(other), "({n},{m}) rule {key:?}");
        }
    }
}

#[test]
fn frobenius_center_is_central() {
    let k = build_kronecker(1, 1, &z3()).unwrap();
    let (zs, rep) = frobenius_center(&k, 3).unwrap();
    assert_eq!(zs.len(), 2);
    assert!(rep.iter().all(|e| e.central));
    let k = build_kronecker(2, 2, &z3()).unwrap();
    let (zs, _) = frobenius_center(&k, 3).unwrap();
    assert_eq!(zs.len(), 8);
    for a in &zs {
        for b in &zs {
            assert!(k.spec.commutator(a, b).unwrap().is_zero());
        }
    }
    let z5 = CycScalar::zeta(5);
    let t = quantum_torus(&[vec![0, 1, 2], vec![-1, 0, 1], vec![-2, -1, 0]], &z5).unwrap();
    let (zs, _) = frobenius_center(&t, 5).unwrap();
    assert_eq!(zs.len(), 3);
}

#[test]
fn generic_powers_not_central() {
    let k = build_kronecker(1, 1, &generic()).unwrap();
    let x3 = k.spec.normal_form(&[(0, 3)]).unwrap();
    assert!(!k.spec.is_central(&x3).unwrap());
}

#[test]
fn straighten_power_matches_iteration() {
    for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let k = build_kronecker(n, m, &generic()).unwrap();
        let spec = &k.spec;
        for g in 0..spec.ngens() {
            for h in 0..spec.ngens() {
                if PowerPair::classify(spec, g, h).is_none() {
                    continue;
                }
                for (r, s) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3)] {
                    let closed = match straighten_power(spec, g, h, r, s) {
                        Ok(c) => c,
                        Err(qmv_core::Error::Unsupported(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    let direct = spec.normal_form(&[(g, r as i64), (h, s as i64)]).unwrap();
                    assert_eq!(
                        closed,
                        direct,
                        "({n},{m}) {}^{r} {}^{s}: closed {} vs {}",
                        spec.gens()[g].label(),
                        spec.gens()[h].label(),
                        spec.element_text(&closed),
                        spec.element_text(&direct)
                    );
                }
            }
        }
    }
}

#[test]
fn r_matrix_identities() {
    for n in 1..=3 {
        let r = standard_r(n, &generic());
        assert!(r.satisfies_qybe(), "QYBE n={n}");
        assert!(r.satisfies_hecke(&generic()), "Hecke n={n}");
    }
    let r1 = standard_r(1, &generic());
    assert_eq!(r1.r.get(0, 0), &generic());
    let rep = verify_r_degeneration(2, 3);
    assert!(rep.classical_limit);
    assert!(rep.root_of_unity, "{rep:?}");
}

#[test]
fn rea_and_loop() {
    let q = generic();
    let rea1 = build_rea(1, &q).unwrap();
    assert_eq!(rea1.spec.ngens(), 1);
    let rea2 = build_rea(2, &q).unwrap();
    let rep = rea2.spec.confluence_report().unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    let det = quantum_det(&rea2.spec, 2).unwrap();
    assert!(rea2.spec.is_central(&det).unwrap(), "{}", rea2.spec.element_text(&det));

    let lp1 = build_loop(1, &q).unwrap();
    assert!(lp1.spec.gens().iter().all(|g| g.invertible));
    let ad = lp1.spec.normal_form(&[(0, 1), (1, 1)]).unwrap();
    let da = lp1.spec.normal_form(&[(1, 1), (0, 1)]).unwrap();
    assert_eq!(ad, da.scale(&q.pow_i(2).unwrap()));

    let lp2 = build_loop(2, &q).unwrap();
    let rep = lp2.spec.confluence_report().unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    let cert = loop_localization_certificate(&lp2).unwrap();
    assert!(cert.det_a_q_central, "{cert:?}");
    assert!(cert.q_central, "{cert:?}");
}

#[test]
fn rea_commutative_at_one() {
    let one = BigRational::from_integer(1.into());
    let rea = build_rea(2, &one).unwrap();
    for ((_, _), rhs) in rea.spec.rules() {
        assert_eq!(rhs.len(), 1);
        assert_eq!(rhs[0].1, one);
    }
}

#[test]
fn moment_maps() {
    for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        for q in [LaurentScalar::constant(z3()), generic()] {
            let k = build_kronecker(n, m, &q).unwrap();
            let chk = verify_moment_algebra_map(&k, 0).unwrap();
            assert!(chk.passed(), "({n},{m}) {:?}", chk.failures);
        }
    }
}

#[test]
fn braided_tori() {
    let q = z3();
    let t1 = quantum_torus(&[vec![0, 1], vec![-1, 0]], &q).unwrap();
    let t2 = quantum_torus(&[vec![0, 1], vec![-1, 0]], &q).unwrap();
    let tt = braided_tensor(&[TensorFactor::new(&t1, vec![]), TensorFactor::new(&t2, vec![])], &[]).unwrap();
    assert_eq!(tt.spec.ngens(), 4);
    assert!(tt.spec.confluence_report().unwrap().passed());
    let triv = quantum_torus(&[], &q).unwrap();
    let same = braided_tensor(&[TensorFactor::new(&t1, vec![]), TensorFactor::new(&triv, vec![])], &[]).unwrap();
    assert_eq!(same.spec.to_text(), t1.spec.to_text());
}

/// Dimension of the span of all products of at most d generators, read off
/// the normal forms.
fn filtered_dim(spec: &AlgebraSpec<CycScalar>, d: usize) -> usize {
    let k = spec.ngens();
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut span = EchelonBasis::new();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for len in 0..=d {
        if len > 0 {
            words = words.iter().flat_map(|w| (0..k).map(move |g| [w.clone(), vec![g]].concat())).collect();
        }
        for w in &words {
            let word: Vec<(usize, i64)> = w.iter().map(|&g| (g, 1)).collect();
            let nf = spec.normal_form(&word).unwrap();
            let v: SparseVec<CycScalar> = nf
                .terms()
                .iter()
                .map(|(m, c)| {
                    let n = index.len();
                    (*index.entry(m.clone()).or_insert(n), c.clone())
                })
                .collect();
            span.insert(v);
        }
    }
    span.dim()
}

/// Dimension of the degree-d piece of the associated graded algebra.
fn graded_dim(spec: &AlgebraSpec<CycScalar>, d: usize) -> usize {
    filtered_dim(spec, d) - if d == 0 { 0 } else { filtered_dim(spec, d - 1) }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn pbw_graded_dimensions() {
    assert_eq!(graded_dim(&build_kronecker(1, 2, &z3()).unwrap().spec, 2), 10);
    for (n, m) in [(1, 1), (2, 1), (1, 2)] {
        let k = build_kronecker(n, m, &z3()).unwrap();
        let vars = 2 * n * m;
        for d in 0..=3 {
            assert_eq!(graded_dim(&k.spec, d), binomial(vars + d - 1, d), "({n},{m}) degree {d}");
        }
    }
}

#[test]
fn one_by_one_moment_entries() {
    let q = generic();
    let k = build_kronecker(1, 1, &q).unwrap();
    let s = &k.spec;
    let kappa = q.minus(&q.inverse().unwrap());
    let mm = moment_map(&k, 0).unwrap();
    let dx = s.normal_form(&[(1, 1), (0, 1)]).unwrap();
    let xd = s.normal_form(&[(0, 1), (1, 1)]).unwrap();
    assert_eq!(mm.alpha.get(0, 0), &s.one().add(&dx.scale(&kappa)));
    assert_eq!(mm.beta.get(0, 0), &s.one().add(&xd.scale(&kappa)));
}

#[test]
fn quantum_torus_relations() {
    let z = z3();
    let t = quantum_torus(&[vec![0, 1], vec![-1, 0]], &z).unwrap();
    let s = &t.spec;
    let x1x2 = s.normal_form(&[(0, 1), (1, 1)]).unwrap();
    let x2x1 = s.normal_form(&[(1, 1), (0, 1)]).unwrap();
    assert_eq!(x1x2, x2x1.scale(&z));
    let x1cubed = s.normal_form(&[(0, 3)]).unwrap();
    assert!(s.is_central(&x1cubed).unwrap());
    assert!(!s.is_central(&s.gen(0)).unwrap());

    let flat = quantum_torus(&[vec![0, 0], vec![0, 0]], &z).unwrap();
    let s = &flat.spec;
    assert_eq!(s.normal_form(&[(0, 1), (1, 1)]).unwrap(), s.normal_form(&[(1, 1), (0, 1)]).unwrap());
    let inv = s.normal_form(&[(0, 1), (0, -1)]).unwrap();
    assert_eq!(inv, s.one());
}

#[test]
fn quiver_files() {
    let k = Quiver::builtin("kronecker_2x1").unwrap();
    assert_eq!(k.dims, vec![2, 1]);
    assert_eq!(k.edges, vec![QuiverEdge { source: 0, target: 1, is_loop: false }]);
    assert_eq!((k.ell, k.mode), (3, QuiverMode::Root));
    let l = Quiver::builtin("loop_1").unwrap();
    assert!(l.edges[0].is_loop && l.rank_one());
    for name in Quiver::builtin_names() {
        let q = Quiver::builtin(name).unwrap();
        assert_eq!(Quiver::from_toml(&q.to_toml()).unwrap(), q);
        assert_eq!(q.name, name);
    }
    let generic = Quiver::from_toml("dims = [1]\nell = 5\nmode = \"generic\"\n").unwrap();
    assert_eq!(generic.mode, QuiverMode::Generic);
    assert!(generic.edges.is_empty());
    for bad in [
        "dims = [1, 1]\nell = 3\n[[edges]]\nsource = 0\ntarget = 2\n",
        "dims = [1]\nell = 3\n[[edges]]\nsource = 0\ntarget = 0\n",
        "dims = [0]\nell = 3\n",
        "dims = [1]\nell = 1\n",
        "dims = [1\n",
    ] {
        assert!(Quiver::from_toml(bad).is_err(), "{bad}");
    }
}

#[test]
fn quiver_algebras() {
    let path = build_quiver(&Quiver::builtin("path_3").unwrap(), &z3()).unwrap();
    assert_eq!(path.alg.spec.ngens(), 4);
    assert!(path.alg.spec.confluence_report().unwrap().passed());
    let (zs, entries) = frobenius_center(&path.alg, 3).unwrap();
    assert_eq!(zs.len(), 4);
    assert!(entries.iter().all(|e| e.central));
    // μ at the middle vertex: g^β of the first edge over g^α of the second
    let (num, den) = path.rank_one_moment(1).unwrap();
    assert_eq!(&num, moment_map(&path.alg, 0).unwrap().beta.get(0, 0));
    assert_eq!(&den, moment_map(&path.alg, 1).unwrap().alpha.get(0, 0));

    let mut q = Quiver::builtin("kronecker_1x1").unwrap();
    q.edges.push(QuiverEdge { source: 1, target: 1, is_loop: true });
    let mixed = build_quiver(&q, &z3()).unwrap();
    assert_eq!(mixed.alg.spec.ngens(), 4);
    assert!(mixed.alg.spec.confluence_report().unwrap().passed());
    assert!(build_quiver(&Quiver::builtin("kronecker_2x2").unwrap(), &z3()).is_ok());
    let mut two = Quiver::builtin("kronecker_2x1").unwrap();
    two.edges.push(QuiverEdge { source: 0, target: 1, is_loop: false });
    assert!(matches!(build_quiver(&two, &z3()), Err(qmv_core::Error::Unsupported(_))));
}
