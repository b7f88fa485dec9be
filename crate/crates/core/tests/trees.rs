use navol_core::generate::{self, random_tree, random_vertex_measure};
use navol_core::linalg::solve;
use navol_core::rational::{int, rat};
use navol_core::tree::{curvature, ma_solve, tree_laplacian, MetricTree, TreeFunction, VertexId};
use navol_core::{CoreError, DiscreteMeasure, Rational};
use proptest::prelude::*;
use rand::Rng;

/// Dense weighted Laplacian solve with `φ(root) = 0` replacing the root row.
fn dense_solve(target: &DiscreteMeasure<VertexId>, reference: &DiscreteMeasure<VertexId>, tree: &MetricTree) -> Vec<Rational> {
    let n = tree.len();
    let mut a = vec![vec![int(0); n]; n];
    for e in tree.edges() {
        let w = int(1) / &e.length;
        // Δφ(v) = Σ (φ(u) − φ(v))/ℓ
        a[e.a][e.b] += &w;
        a[e.a][e.a] -= &w;
        a[e.b][e.a] += &w;
        a[e.b][e.b] -= &w;
    }
    let mut b: Vec<Rational> = (0..n).map(|v| target.mass_at(&v) - reference.mass_at(&v)).collect();
    let r = tree.root();
    a[r] = vec![int(0); n];
    a[r][r] = int(1);
    b[r] = int(0);
    solve(&a, &b).expect("the grounded Laplacian is invertible")
}

fn same_measure(a: &DiscreteMeasure<VertexId>, b: &DiscreteMeasure<VertexId>, n: usize) -> bool {
    (0..n).all(|v| a.mass_at(&v) == b.mass_at(&v))
}

#[test]
fn solver_matches_dense_elimination() {
    for seed in 0..10 {
        let mut rng = generate::rng(seed);
        let tree = random_tree(&mut rng, 20);
        let total = rat(rng.gen_range(1..=5), rng.gen_range(1..=3));
        let mu0 = random_vertex_measure(&tree, &mut rng, &total);
        let mu = random_vertex_measure(&tree, &mut rng, &total);
        let phi = ma_solve(&mu, &mu0, &tree).unwrap();
        assert_eq!(phi.values(), dense_solve(&mu, &mu0, &tree).as_slice());
        let curv = curvature(&phi, &mu0, &tree).unwrap();
        assert!(same_measure(&curv.measure, &mu, tree.len()));
        assert!(curv.semipositive);
    }
}

#[test]
fn mass_mismatch_is_rejected() {
    let mut rng = generate::rng(3);
    let tree = random_tree(&mut rng, 10);
    let mu0 = random_vertex_measure(&tree, &mut rng, &int(1));
    let mu = random_vertex_measure(&tree, &mut rng, &rat(3, 2));
    assert!(matches!(ma_solve(&mu, &mu0, &tree), Err(CoreError::MassMismatch { .. })));
}

#[test]
fn signed_targets_give_non_semipositive_solutions() {
    let tree = MetricTree::from_named(
        vec!["a".into(), "b".into(), "c".into()],
        &[("a".into(), "b".into(), rat(1, 2)), ("b".into(), "c".into(), int(2))],
        "a",
    )
    .unwrap();
    let mu0 = DiscreteMeasure::new([(0, int(1))]);
    let mu = DiscreteMeasure::new([(0, int(2)), (1, int(-2)), (2, int(1))]);
    let phi = ma_solve(&mu, &mu0, &tree).unwrap();
    let curv = curvature(&phi, &mu0, &tree).unwrap();
    assert!(same_measure(&curv.measure, &mu, 3));
    assert!(!curv.semipositive);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_has_zero_mass(seed in 0u64..1_000_000) {
        let mut rng = generate::rng(seed);
        let tree = random_tree(&mut rng, 20);
        let phi = TreeFunction::new((0..tree.len()).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect());
        let lap = tree_laplacian(&phi, &tree).unwrap();
        prop_assert_eq!(lap.total_mass(), &int(0));
    }

    #[test]
    fn laplacian_is_linear(seed in 0u64..1_000_000, a in -5i64..=5, b in -5i64..=5) {
        let mut rng = generate::rng(seed);
        let tree = random_tree(&mut rng, 15);
        let mut draw = || TreeFunction::new((0..tree.len()).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect());
        let (f, g) = (draw(), draw());
        let (a, b) = (rat(a, 2), rat(b, 3));
        let lhs = tree_laplacian(&TreeFunction::linear_combination(&a, &f, &b, &g), &tree).unwrap();
        let rhs = tree_laplacian(&f, &tree).unwrap().scaled(&a).plus(&tree_laplacian(&g, &tree).unwrap().scaled(&b));
        prop_assert!(same_measure(&lhs, &rhs, tree.len()));
    }

    #[test]
    fn subdivision_leaves_the_laplacian_unchanged(seed in 0u64..1_000_000, num in 1i64..7) {
        let mut rng = generate::rng(seed);
        let tree = random_tree(&mut rng, 15);
        let phi = TreeFunction::new((0..tree.len()).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect());
        let edge = rng.gen_range(0..tree.edges().len());
        let t = rat(num, 7);
        let (fine, new) = tree.subdivide_edge(edge, &t, "new").unwrap();
        let fine_phi = phi.refine(&tree, edge, &t);
        let coarse = tree_laplacian(&phi, &tree).unwrap();
        let refined = tree_laplacian(&fine_phi, &fine).unwrap();
        prop_assert_eq!(refined.mass_at(&new), int(0));
        prop_assert!(same_measure(&coarse, &refined, tree.len()));
    }

    #[test]
    fn solve_then_curvature_roundtrips(seed in 0u64..1_000_000) {
        let mut rng = generate::rng(seed);
        let tree = random_tree(&mut rng, 20);
        let mu0 = random_vertex_measure(&tree, &mut rng, &int(2));
        let mu = random_vertex_measure(&tree, &mut rng, &int(2));
        let phi = ma_solve(&mu, &mu0, &tree).unwrap();
        prop_assert_eq!(phi.value(tree.root()), &int(0));
        prop_assert!(same_measure(&curvature(&phi, &mu0, &tree).unwrap().measure, &mu, tree.len()));
    }
}
