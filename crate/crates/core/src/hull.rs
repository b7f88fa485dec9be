//! Lower convex hulls of lifted point sets.
//!
//! Given points `u_i ∈ ℚⁿ` with heights `h_i`, [`lower_hull`] returns affine
//! functions whose maximum is the lower convex hull `u ↦ min{Σλ_i h_i : Σλ_i u_i = u}`
//! on `conv{u_i}`. One-dimensional inputs use a monotone chain; planar inputs an
//! exact incremental 3-D hull. When the `u_i` span a lower-dimensional affine
//! subspace, the hull is computed in a coordinate chart of that subspace and the
//! returned functions ignore the remaining coordinates.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg;
use crate::metric::AffinePiece;
use crate::polytope::Point;
use crate::rational::{lcm_of_denominators, Rational};

pub fn lower_hull(points: &[(Point, Rational)]) -> Vec<AffinePiece> {
    assert!(!points.is_empty(), "lower hull of an empty set");
    let n = points[0].0.dim();
    let base = &points[0].0;
    let mut diffs: Vec<Vec<Rational>> = points[1..].iter().map(|(u, _)| u.sub(base).0).collect();
    let chart = if diffs.is_empty() {
        Vec::new()
    } else {
        linalg::rref(&mut diffs)
    };

    let projected: Vec<(Vec<Rational>, Rational)> = points
        .iter()
        .map(|(u, h)| (chart.iter().map(|&c| u.0[c].clone()).collect(), h.clone()))
        .collect();

    let local = match chart.len() {
        0 => {
            let h = projected.iter().map(|(_, h)| h).min().expect("points").clone();
            vec![(Vec::new(), h)]
        }
        1 => lower_chain(&projected),
        2 => lower_hull_3d(&projected),
        d => panic!("lower hull in chart dimension {d} is not supported"),
    };

    let mut pieces: Vec<AffinePiece> = local
        .into_iter()
        .map(|(grad, constant)| {
            let mut slope = vec![Rational::zero(); n];
            for (&c, g) in chart.iter().zip(grad) {
                slope[c] = g;
            }
            AffinePiece::new(Point(slope), constant)
        })
        .collect();
    pieces.sort();
    pieces.dedup();
    pieces
}

fn lower_chain(points: &[(Vec<Rational>, Rational)]) -> Vec<(Vec<Rational>, Rational)> {
    let mut pts: Vec<(Rational, Rational)> = points.iter().map(|(u, h)| (u[0].clone(), h.clone())).collect();
    pts.sort();
    // keep the lowest height per abscissa
    pts.dedup_by(|later, earlier| later.0 == earlier.0);
    let mut chain: Vec<(Rational, Rational)> = Vec::new();
    for p in pts {
        while chain.len() >= 2 {
            let a = &chain[chain.len() - 2];
            let b = &chain[chain.len() - 1];
            let turn = (&b.0 - &a.0) * (&p.1 - &a.1) - (&b.1 - &a.1) * (&p.0 - &a.0);
            if turn <= Rational::zero() {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    if chain.len() == 1 {
        return vec![(vec![Rational::zero()], chain[0].1.clone())];
    }
    chain
        .windows(2)
        .map(|w| {
            let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            let constant = &w[0].1 - &slope * &w[0].0;
            (vec![slope], constant)
        })
        .collect()
}

type Vec3 = [BigInt; 3];

fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot3(a: &Vec3, b: &Vec3) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn orient(p: &[Vec3], a: usize, b: usize, c: usize, d: usize) -> BigInt {
    let n = cross3(&sub3(&p[b], &p[a]), &sub3(&p[c], &p[a]));
    dot3(&n, &sub3(&p[d], &p[a]))
}

fn plane_through(points: &[(Vec<Rational>, Rational)], tri: [usize; 3]) -> Option<(Vec<Rational>, Rational)> {
    let a: Vec<Vec<Rational>> = tri
        .iter()
        .map(|&i| vec![points[i].0[0].clone(), points[i].0[1].clone(), Rational::from_integer(1.into())])
        .collect();
    let b: Vec<Rational> = tri.iter().map(|&i| points[i].1.clone()).collect();
    linalg::solve(&a, &b).map(|x| (vec![x[0].clone(), x[1].clone()], x[2].clone()))
}

fn lower_hull_3d(points: &[(Vec<Rational>, Rational)]) -> Vec<(Vec<Rational>, Rational)> {
    // Scaling each axis by a positive integer preserves the hull; it lets the
    // orientation predicates run on integers.
    let scale: Vec<BigInt> = (0..3)
        .map(|axis| {
            lcm_of_denominators(points.iter().map(|(u, h)| if axis < 2 { &u[axis] } else { h }))
        })
        .collect();
    let p: Vec<Vec3> = points
        .iter()
        .map(|(u, h)| {
            let c = |x: &Rational, s: &BigInt| (x * Rational::from_integer(s.clone())).to_integer();
            [c(&u[0], &scale[0]), c(&u[1], &scale[1]), c(h, &scale[2])]
        })
        .collect();

    let n = p.len();
    let i0 = 0;
    let Some(i1) = (1..n).find(|&i| p[i] != p[i0]) else {
        unreachable!("chart dimension 2 implies distinct points")
    };
    let Some(i2) = (0..n).find(|&i| {
        let c = cross3(&sub3(&p[i1], &p[i0]), &sub3(&p[i], &p[i0]));
        !c.iter().all(Zero::is_zero)
    }) else {
        unreachable!("chart dimension 2 implies non-collinear points")
    };
    let Some(i3) = (0..n).find(|&i| !orient(&p, i0, i1, i2, i).is_zero()) else {
        // all lifted points coplanar: a single non-vertical plane
        let tri = (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
            .find_map(|t| plane_through(points, t))
            .expect("affinely spanning chart");
        return vec![tri];
    };

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let tet = [i0, i1, i2, i3];
    for skip in 0..4 {
        let mut f: Vec<usize> = tet.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
        if orient(&p, f[0], f[1], f[2], tet[skip]).is_positive() {
            f.swap(1, 2);
        }
        faces.push([f[0], f[1], f[2]]);
    }

    for q in 0..n {
        if tet.contains(&q) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| orient(&p, f[0], f[1], f[2], q).is_positive()).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut visible_edges: Vec<(usize, usize)> = Vec::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            visible_edges.extend([(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]);
        }
        let horizon: Vec<(usize, usize)> = visible_edges
            .iter()
            .filter(|(a, b)| !visible_edges.contains(&(*b, *a)))
            .copied()
            .collect();
        let mut kept: Vec<[usize; 3]> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        kept.extend(horizon.into_iter().map(|(a, b)| [a, b, q]));
        faces = kept;
    }

    let mut planes: Vec<(Vec<Rational>, Rational)> = faces
        .iter()
        .filter(|f| {
            let normal = cross3(&sub3(&p[f[1]], &p[f[0]]), &sub3(&p[f[2]], &p[f[0]]));
            normal[2].is_negative()
        })
        .filter_map(|f| plane_through(points, *f))
        .collect();
    planes.sort();
    planes.dedup();
    planes
}
