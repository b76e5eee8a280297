use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qmv_core::classical::*;
use qmv_core::linalg::{rat, Mat};
use qmv_core::qalgebras::{Quiver, QuiverEdge, QuiverMode};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn m(rows: &[&[i64]]) -> QMat {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
}

fn frac(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
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
fn single_edge_moment() {
    let rep = QuiverRep::new(quiver(vec![1, 1], &[(0, 1)]), vec![m(&[&[2]])], vec![m(&[&[3]])]).unwrap();
    let mu = classical_moment(&rep).unwrap();
    assert_eq!(mu.blocks, vec![m(&[&[7]]), Mat::from_rows(vec![vec![frac(1, 7)]])]);

    let zero = QuiverRep::zero(quiver(vec![2, 3], &[(0, 1), (1, 1)])).unwrap();
    assert_eq!(classical_moment(&zero).unwrap(), GroupPoint::identity(&[2, 3]));

    let bad = QuiverRep::new(quiver(vec![1, 1], &[(0, 1)]), vec![m(&[&[1]])], vec![m(&[&[-1]])]).unwrap();
    assert!(classical_moment(&bad).is_err());
}

#[test]
fn moment_equivariance() {
    let q = quiver(vec![2, 1, 2], &[(0, 1), (1, 2), (2, 2), (0, 2)]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 100 {
        let rep = QuiverRep::random(q.clone(), &mut rng).unwrap();
        let g = GroupPoint::new(q.dims.iter().map(|&d| random_invertible(&mut rng, d)).collect()).unwrap();
        let Ok(mu) = classical_moment(&rep) else { continue };
        let moved = classical_moment(&rep.act(&g).unwrap()).unwrap();
        assert_eq!(moved, g.conjugate(&mu).unwrap());
        checked += 1;
    }
}

#[test]
fn big_cell_examples() {
    assert!(big_cell_test(&identity(3)));
    let f = gstar_factor(&identity(3)).unwrap();
    assert_eq!(f.b_plus, identity(3));
    assert_eq!(f.b_minus_inv, identity(3));

    let anti = m(&[&[0, 1], &[1, 0]]);
    assert!(!big_cell_test(&anti));
    assert!(gstar_factor(&anti).is_none());

    // [[2,1],[1,1]] = L·D·U with L = [[1,0],[1/2,1]], D = (2, 1/2), U = Lᵀ.
    let g = m(&[&[2, 1], &[1, 1]]);
    assert!(big_cell_test(&g));
    let f = gstar_factor(&g).unwrap();
    assert_eq!(f.l, Mat::from_rows(vec![vec![rat(1), rat(0)], vec![frac(1, 2), rat(1)]]));
    assert_eq!(f.d, vec![rat(2), frac(1, 2)]);
    assert_eq!(f.u, f.l.transpose());
    assert!(f.needs_extension);
    // √2 and √(1/2) = (1/2)√2
    assert_eq!((f.sqrt_d[0].coeff.as_str(), f.sqrt_d[0].radicand.as_str()), ("1", "2"));
    assert_eq!((f.sqrt_d[1].coeff.as_str(), f.sqrt_d[1].radicand.as_str()), ("1/2", "2"));
    assert_eq!(f.product(), g);
    assert!(f.balanced());

    let h = m(&[&[4, 2], &[2, 10]]);
    let f = gstar_factor(&h).unwrap();
    assert!(!f.needs_extension);
    assert_eq!(f.b_plus.mul(&f.b_minus_inv), h);
}

fn adversarial(k: usize) -> QMat {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + k as u64);
    let n = 2 + k % 3;
    let mut g = random_invertible(&mut rng, n);
    // kill the leading minor of size r + 1 by replacing row r with a
    // combination of the rows above it in the first r + 1 columns
    let r = k % (n - 1);
    for j in 0..=r {
        let v = (0..r).fold(BigRational::zero(), |acc, i| acc + g.get(i, j) * rat(i as i64 + 1));
        g.set(r, j, v);
    }
    if g.det().is_zero() {
        return adversarial(k + 3);
    }
    g
}

#[test]
fn big_cell_matches_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut mats: Vec<QMat> = (0..1000).map(|k| random_matrix(&mut rng, 2 + k % 3, 2 + k % 3)).collect();
    let adv: Vec<QMat> = (0..20).map(adversarial).collect();
    assert!(adv.iter().all(|g| !big_cell_test(g) && !g.det().is_zero()));
    mats.extend(adv);
    for g in &mats {
        let f = gstar_factor(g);
        assert_eq!(big_cell_test(g), f.is_some());
        if let Some(f) = f {
            assert_eq!(f.product(), *g);
            assert!(f.balanced());
            let n = g.rows;
            for i in 0..n {
                for j in 0..n {
                    if j > i {
                        assert!(f.b_plus.get(i, j).is_zero());
                    }
                    if i > j {
                        assert!(f.b_minus_inv.get(i, j).is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn printed_entries_at_rank_one() {
    for (y, z) in [(0, 0), (1, 2), (-3, 5), (2, -1)] {
        let got = nondeg_matrix(&m(&[&[y]]), &m(&[&[z]]));
        let want = m(&[&[-y * y, -1], &[2 * z * y + 1, -z * z]]);
        assert_eq!(got, want);
        assert_eq!(got.det(), rat((1 + y * z) * (1 + y * z)));
    }
    assert!(nondeg_symbolic_1x1());
}

#[test]
fn nondeg_identity_samples() {
    assert_eq!(nondeg_matrix(&Mat::zeros(2, 2, &rat(1)), &Mat::zeros(2, 2, &rat(1))).det(), BigRational::one());
    for (n, mm) in [(2, 2), (3, 2), (1, 3)] {
        let rep = nondeg_identity_check(n, mm, 100, 3);
        assert!(rep.passed(), "({n},{mm}): {:?}", rep.failures);
    }
}

#[test]
fn fusion() {
    let a = GroupPoint::new(vec![m(&[&[2]]), m(&[&[3]])]).unwrap();
    let b = GroupPoint::new(vec![m(&[&[5]]), m(&[&[7]])]).unwrap();
    let f = fusion_moment(&[a.clone(), b.clone()]).unwrap();
    assert_eq!(f.blocks, vec![m(&[&[10]]), m(&[&[21]])]);
    assert_eq!(fusion_moment(&[GroupPoint::identity(&[1, 1]), b.clone()]).unwrap(), b);
    assert_eq!(fusion_moment(&[b.clone(), a.clone()]).unwrap(), f);
    let c = GroupPoint::new(vec![identity(2)]).unwrap();
    assert!(fusion_moment(&[a, c]).is_err());
}

#[test]
fn fusion_is_associative_and_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let p: Vec<GroupPoint> =
            (0..3).map(|_| GroupPoint::new(vec![random_invertible(&mut rng, 2)]).unwrap()).collect();
        let left = fusion_moment(&[fusion_moment(&p[..2]).unwrap(), p[2].clone()]).unwrap();
        let right = fusion_moment(&[p[0].clone(), fusion_moment(&p[1..]).unwrap()]).unwrap();
        assert_eq!(left, right);
        let g = GroupPoint::new(vec![random_invertible(&mut rng, 2)]).unwrap();
        let conj: Vec<GroupPoint> = p.iter().map(|x| g.conjugate(x).unwrap()).collect();
        assert_eq!(fusion_moment(&conj).unwrap(), g.conjugate(&fusion_moment(&p).unwrap()).unwrap());
    }
}

#[test]
fn character_variety() {
    let id = identity(2);
    let mu = char_moment(&[id.clone(), id.clone()]).unwrap();
    assert_eq!(mu, id);
    let r = good_point_report(&[id.clone(), id.clone()]).unwrap();
    assert!(!r.good);
    assert_eq!(r.centralizer_dim, 4);

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let t: Vec<QMat> = (0..4).map(|_| random_invertible(&mut rng, 2)).collect();
        assert_eq!(char_moment(&t).unwrap().det(), BigRational::one());
    }
    let t: Vec<QMat> = (0..4).map(|_| random_invertible(&mut rng, 2)).collect();
    let r = good_point_report(&t).unwrap();
    assert_eq!((r.span_dim, r.centralizer_dim), (4, 1));
    assert!(is_good_point(&t).unwrap());

    // a diagonal pair generates only the diagonal algebra
    let d = [m(&[&[1, 0], &[0, 2]]), m(&[&[3, 0], &[0, 5]])];
    let r = good_point_report(&d).unwrap();
    assert_eq!((r.span_dim, r.centralizer_dim, r.good), (2, 2, false));
    assert!(char_moment(&[m(&[&[0, 0], &[0, 1]]), id]).is_err());
}

#[test]
fn simplicity_and_stability() {
    let q = quiver(vec![1, 1], &[(0, 1)]);
    let zero = QuiverRep::zero(q.clone()).unwrap();
    assert!(!is_simple_rep(&zero));
    let one = QuiverRep::new(q.clone(), vec![m(&[&[1]])], vec![m(&[&[1]])]).unwrap();
    assert!(is_simple_rep(&one));

    assert_eq!(theta_stability(&one, &[0, 0], 4, 1).unwrap().verdict, Stability::Stable);
    let st = theta_stability(&zero, &[0, 0], 4, 1).unwrap();
    assert!(matches!(st.verdict, Stability::Unstable { .. }));
    assert_eq!(st.subreps_found, vec![vec![0, 1], vec![1, 0]]);

    // X_e only: the target vertex spans a subrepresentation of dimension (0,1).
    let half = QuiverRep::new(q.clone(), vec![m(&[&[1]])], vec![m(&[&[0]])]).unwrap();
    let st = theta_stability(&half, &[1, -1], 4, 1).unwrap();
    assert_eq!(st.subreps_found, vec![vec![0, 1]]);
    assert_eq!(st.verdict, Stability::Inconclusive);
    let st = theta_stability(&half, &[-1, 1], 4, 1).unwrap();
    assert_eq!(st.verdict, Stability::Unstable { witness: vec![0, 1] });
}

#[test]
fn leaves() {
    let q = quiver(vec![2, 2], &[(0, 1)]);
    assert_eq!(leaf_label(&QuiverRep::zero(q.clone()).unwrap()).unwrap(), Leaf::OpenLeaf);
    // Id + X∨X = [[0,1],[1,0]] at the source, its inverse at the target
    let rep = QuiverRep::new(q, vec![identity(2)], vec![m(&[&[-1, 1], &[1, -1]])]).unwrap();
    assert_eq!(leaf_label(&rep).unwrap(), Leaf::Boundary { vanishing_minors: vec![vec![1], vec![1]] });
}

#[test]
fn samples_are_open_and_reproducible() {
    let q = quiver(vec![1, 1], &[(0, 1)]);
    let a = classical_samples(&q, &[0, 0], 1000, 7).unwrap();
    assert!(a.iter().all(|s| s.leaf == Leaf::OpenLeaf && s.big_cell));
    let b = classical_samples(&q, &[0, 0], 1000, 7).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn theta_zero_stable_iff_simple(entries in prop::collection::vec(-2i64..3, 4)) {
        let q = quiver(vec![1, 1], &[(0, 1), (0, 1)]);
        let x = vec![m(&[&[entries[0]]]), m(&[&[entries[1]]])];
        let xd = vec![m(&[&[entries[2]]]), m(&[&[entries[3]]])];
        let rep = QuiverRep::new(q, x, xd).unwrap();
        let st = theta_stability(&rep, &[0, 0], 8, 3).unwrap();
        prop_assert_eq!(st.verdict == Stability::Stable, is_simple_rep(&rep));
    }

    #[test]
    fn surd_squares_back(p in -50i64..50, q in 1i64..50) {
        prop_assume!(p != 0);
        let x = frac(p, q);
        let s = Surd::sqrt(&x);
        prop_assert_eq!(&s.a * &s.a * BigRational::from(s.s.clone()), x);
    }
}
