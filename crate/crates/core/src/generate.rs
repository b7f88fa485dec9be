//! Seeded instance generators and the small named instances used throughout
//! the tests, the CLI suite and the benchmarks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::DiscreteMeasure;
use crate::metric::{AffinePiece, PLFunction, PLMetric};
use crate::polytope::{Point, Polytope};
use crate::rational::{int, rat, Rational};
use crate::tree::{Edge, MetricTree, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_interval() -> Arc<Polytope> {
    Arc::new(Polytope::from_vertices(&[Point::from_ints(&[0]), Point::from_ints(&[1])]).expect("segment"))
}

pub fn unit_square() -> Arc<Polytope> {
    let pts: Vec<Point> = [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|p| Point::from_ints(p)).collect();
    Arc::new(Polytope::from_vertices(&pts).expect("square"))
}

/// `max(0, v/2 + 1/2, v)` on `[0,1]`.
pub fn tent() -> PLMetric {
    let p = |s: Rational, c: Rational| AffinePiece::new(Point(vec![s]), c);
    PLMetric::from_max(unit_interval(), vec![p(int(0), int(0)), p(rat(1, 2), rat(1, 2)), p(int(1), int(0))])
        .expect("tent")
}

/// The non-convex metric on `[0,1]` with graph breakpoints `(−1,0), (0,3/4), (1,1)`;
/// its envelope is [`tent`].
pub fn bump() -> PLMetric {
    let p = |s: Rational, c: Rational| AffinePiece::new(Point(vec![s]), c);
    PLMetric::new(
        unit_interval(),
        vec![
            vec![p(int(0), int(0)), p(rat(3, 4), rat(3, 4)), p(int(1), int(0))],
            vec![p(int(0), int(0)), p(rat(1, 4), rat(3, 4)), p(int(1), int(0))],
        ],
    )
    .expect("bump")
}

/// Canonical metric of `[0,1]²` with a flat-topped pyramid bump at the origin.
pub fn pyramid_bump() -> PLMetric {
    let square = unit_square();
    let canonical: Vec<AffinePiece> = square
        .vertices()
        .iter()
        .map(|w| AffinePiece::new(w.clone(), int(0)))
        .collect();
    let mut peak = canonical.clone();
    peak.push(AffinePiece::new(Point(vec![rat(1, 2), rat(1, 2)]), int(1)));
    let plateau: Vec<AffinePiece> = canonical
        .iter()
        .map(|p| AffinePiece::new(p.slope.clone(), rat(1, 2)))
        .collect();
    PLMetric::new(square, vec![peak, plateau]).expect("pyramid bump")
}

fn small_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    let q = rng.gen_range(1..=4);
    rat(rng.gen_range(-bound * q..=bound * q), q)
}

/// A point of `P` with denominator at most 4: `Σ (k_i/q) w_i` over the vertices.
fn random_point(poly: &Polytope, rng: &mut impl Rng) -> Point {
    let q: i64 = rng.gen_range(1..=4);
    let verts = poly.vertices();
    let mut weights = vec![0i64; verts.len()];
    for _ in 0..q {
        weights[rng.gen_range(0..verts.len())] += 1;
    }
    let mut acc = Point::origin(poly.dim());
    for (w, v) in weights.iter().zip(verts) {
        acc = acc.add(&v.scale(&rat(*w, q)));
    }
    acc
}

fn random_block(poly: &Polytope, rng: &mut impl Rng, extra: usize) -> Vec<AffinePiece> {
    let mut pieces: Vec<AffinePiece> = poly
        .vertices()
        .iter()
        .map(|w| AffinePiece::new(w.clone(), small_rational(rng, 1)))
        .collect();
    for _ in 0..extra {
        let u = random_point(poly, rng);
        pieces.push(AffinePiece::new(u, small_rational(rng, 2)));
    }
    pieces
}

/// Convex metric with the vertices of `P` and `extra` random rational points of
/// `P` as slopes, and random constants with denominators at most 4.
pub fn random_convex_metric(poly: &Arc<Polytope>, rng: &mut impl Rng, extra: usize) -> PLMetric {
    PLMetric::from_max(poly.clone(), random_block(poly, rng, extra)).expect("generated slopes lie in P")
}

/// Minimum of two or three random convex potentials, redrawn until the
/// result is not convex.
pub fn random_nonconvex_metric(poly: &Arc<Polytope>, rng: &mut impl Rng, extra: usize) -> PLMetric {
    loop {
        let blocks = (0..rng.gen_range(2..=3)).map(|_| random_block(poly, rng, extra)).collect();
        let psi = PLMetric::new(poly.clone(), blocks).expect("generated slopes lie in P");
        if !psi.is_semipositive().expect("full-dimensional polytope") {
            return psi;
        }
    }
}

/// A random metric, convex or not.
pub fn random_metric(poly: &Arc<Polytope>, rng: &mut impl Rng, extra: usize) -> PLMetric {
    if rng.gen_bool(0.5) {
        random_convex_metric(poly, rng, extra)
    } else {
        let blocks = (0..2).map(|_| random_block(poly, rng, extra)).collect();
        PLMetric::new(poly.clone(), blocks).expect("generated slopes lie in P")
    }
}

/// `g₁ − g₂` for two random convex metrics.
pub fn random_pl_function(poly: &Arc<Polytope>, rng: &mut impl Rng, extra: usize) -> PLFunction {
    let g1 = random_convex_metric(poly, rng, extra);
    let g2 = random_convex_metric(poly, rng, extra);
    PLFunction::difference(g1, g2).expect("same polytope")
}

/// Random recursive tree on `2..=max_vertices` vertices with lengths `a/q`.
pub fn random_tree(rng: &mut impl Rng, max_vertices: usize) -> MetricTree {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (1..n)
        .map(|v| Edge {
            a: rng.gen_range(0..v),
            b: v,
            length: rat(rng.gen_range(1..=6), rng.gen_range(1..=4)),
        })
        .collect();
    let root = rng.gen_range(0..n);
    MetricTree::new(names, edges, root).expect("recursive trees are trees")
}

/// Nonnegative measure on the vertices with the given total mass.
pub fn random_vertex_measure(tree: &MetricTree, rng: &mut impl Rng, total: &Rational) -> DiscreteMeasure<VertexId> {
    let weights: Vec<i64> = (0..tree.len()).map(|_| rng.gen_range(0..=3)).collect();
    let sum: i64 = weights.iter().sum();
    if sum == 0 {
        return DiscreteMeasure::new([(tree.root(), total.clone())]);
    }
    DiscreteMeasure::new(
        weights
            .iter()
            .enumerate()
            .map(|(v, &w)| (v, total * rat(w, sum))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let sq = unit_square();
        let a = random_convex_metric(&sq, &mut rng(7), 3);
        let b = random_convex_metric(&sq, &mut rng(7), 3);
        assert_eq!(a, b);
        let t1 = random_tree(&mut rng(3), 20);
        let t2 = random_tree(&mut rng(3), 20);
        assert_eq!(t1, t2);
    }

    #[test]
    fn named_instances() {
        assert!(!bump().is_semipositive().unwrap());
        assert_eq!(bump().envelope().unwrap(), tent());
        assert!(!pyramid_bump().is_semipositive().unwrap());
        let psi = random_nonconvex_metric(&unit_interval(), &mut rng(1), 2);
        assert!(!psi.is_semipositive().unwrap());
    }
}
