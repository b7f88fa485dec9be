//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the hull, roof or envelope code of the crate.

#![allow(dead_code)]

use navol_core::rational::{int, rat};
use navol_core::{AffinePiece, PLMetric, Point, Polytope, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub fn pieces(psi: &PLMetric) -> Vec<AffinePiece> {
    psi.blocks().iter().flatten().cloned().collect()
}

/// Vertices of the arrangement of all equality loci `ℓ_i = ℓ_j`.
pub fn breakpoints(ps: &[AffinePiece], n: usize) -> Vec<Point> {
    let mut out = Vec::new();
    if n == 1 {
        for (i, a) in ps.iter().enumerate() {
            for b in &ps[i + 1..] {
                let ds = &a.slope.0[0] - &b.slope.0[0];
                if !ds.is_zero() {
                    out.push(Point(vec![(&b.constant - &a.constant) / ds]));
                }
            }
        }
    } else {
        let mut lines: Vec<(Rational, Rational, Rational)> = Vec::new();
        for (i, a) in ps.iter().enumerate() {
            for b in &ps[i + 1..] {
                let d = a.slope.sub(&b.slope);
                if !(d.0[0].is_zero() && d.0[1].is_zero()) {
                    lines.push((d.0[0].clone(), d.0[1].clone(), &b.constant - &a.constant));
                }
            }
        }
        for (i, (a1, b1, c1)) in lines.iter().enumerate() {
            for (a2, b2, c2) in &lines[i + 1..] {
                let det = a1 * b2 - a2 * b1;
                if !det.is_zero() {
                    out.push(Point(vec![(c1 * b2 - c2 * b1) / &det, (a1 * c2 - a2 * c1) / &det]));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        out.push(Point::origin(n));
    }
    out
}

/// `ψ*(u) = max_v ⟨u, v⟩ − ψ(v)` over the arrangement vertices.
pub fn legendre_oracle(psi: &PLMetric, u: &Point) -> Rational {
    breakpoints(&pieces(psi), psi.dim())
        .iter()
        .map(|v| u.dot(v) - psi.eval(v))
        .max()
        .expect("nonempty")
}

/// Convex minorant of `ψ` at `v`: the lowest point above `v` in the convex
/// hull of the lifted breakpoints plus the recession rays of the graph.
pub fn envelope_oracle(psi: &PLMetric, v: &Point) -> Rational {
    let n = psi.dim();
    let pts: Vec<(Point, Rational)> = breakpoints(&pieces(psi), n)
        .into_iter()
        .filter(|b| n == 1 || !affine_along_some_line(psi, b))
        .map(|b| {
            let h = psi.eval(&b);
            (b, h)
        })
        .collect();
    let poly = psi.polytope();
    let rays: Vec<(Point, Rational)> = if n == 1 {
        let lo = poly.vertices().iter().map(|w| w.0[0].clone()).min().unwrap();
        let hi = poly.vertices().iter().map(|w| w.0[0].clone()).max().unwrap();
        vec![(Point(vec![int(-1)]), -lo), (Point(vec![int(1)]), hi)]
    } else {
        poly.facets()
            .iter()
            .map(|f| {
                let d: Vec<Rational> = f.normal.iter().map(|c| Rational::from_integer(c.clone())).collect();
                let h = poly.support(&d);
                (Point(d), h)
            })
            .collect()
    };
    let mut best: Option<Rational> = None;
    let mut consider = |t: Rational| {
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    };
    if n == 1 {
        for (p, hp) in &pts {
            for (r, hr) in &rays {
                let mu = (&v.0[0] - &p.0[0]) / &r.0[0];
                if !mu.is_negative() {
                    consider(hp + &mu * hr);
                }
            }
            for (q, hq) in &pts {
                if p.0[0] < v.0[0] && v.0[0] < q.0[0] {
                    let lam = (&q.0[0] - &v.0[0]) / (&q.0[0] - &p.0[0]);
                    consider(&lam * hp + (int(1) - &lam) * hq);
                }
            }
        }
        return best.expect("rays always reach v");
    }
    // Generators: points (weight sums to one) and rays (nonnegative weight).
    let gens: Vec<(&Point, &Rational, bool)> = pts
        .iter()
        .map(|(p, h)| (p, h, true))
        .chain(rays.iter().map(|(r, h)| (r, h, false)))
        .collect();
    let k = gens.len();
    for i in 0..k {
        for j in i..k {
            for l in j..k {
                let trio = [gens[i], gens[j], gens[l]];
                if !trio.iter().any(|g| g.2) {
                    continue;
                }
                // Rows: x-coordinate, y-coordinate, point-weight sum.
                let a: Vec<Vec<Rational>> = (0..3)
                    .map(|row| {
                        trio.iter()
                            .map(|g| match row {
                                0 | 1 => g.0 .0[row].clone(),
                                _ => if g.2 { int(1) } else { int(0) },
                            })
                            .collect()
                    })
                    .collect();
                let b = [v.0[0].clone(), v.0[1].clone(), int(1)];
                if let Some(w) = solve3(&a, &b) {
                    if w.iter().all(|x| !x.is_negative()) {
                        consider(w.iter().zip(&trio).map(|(x, g)| x * g.1).sum());
                    }
                }
            }
        }
    }
    best.expect("some generator triple spans v")
}

/// Whether `ψ` restricted to some line through `b` is affine near `b`; such
/// points are never extreme in the epigraph. Planar metrics only.
fn affine_along_some_line(psi: &PLMetric, b: &Point) -> bool {
    let value = psi.eval(b);
    let active: Vec<Vec<&AffinePiece>> = psi
        .blocks()
        .iter()
        .filter_map(|block| {
            let top = block.iter().map(|p| p.eval(b)).max().unwrap();
            (top == value).then(|| block.iter().filter(|p| p.eval(b) == top).collect())
        })
        .collect();
    // Local potential around b, homogeneous in the direction d.
    let local = |d: &Point| -> Rational {
        active
            .iter()
            .map(|blk| blk.iter().map(|p| p.slope.dot(d)).max().unwrap())
            .min()
            .unwrap()
    };
    let slopes: Vec<&Point> = active.iter().flatten().map(|p| &p.slope).collect();
    let mut rays: Vec<Point> = Vec::new();
    for (i, s) in slopes.iter().enumerate() {
        for t in &slopes[i + 1..] {
            let w = s.sub(t);
            if w.0.iter().all(|c| c.is_zero()) {
                continue;
            }
            rays.push(Point(vec![-w.0[1].clone(), w.0[0].clone()]));
            rays.push(Point(vec![w.0[1].clone(), -w.0[0].clone()]));
        }
    }
    if rays.is_empty() {
        return true;
    }
    let upper = |p: &Point| p.0[1].is_positive() || (p.0[1].is_zero() && p.0[0].is_positive());
    let cross = |p: &Point, q: &Point| &p.0[0] * &q.0[1] - &p.0[1] * &q.0[0];
    rays.sort_by(|p, q| {
        upper(q).cmp(&upper(p)).then_with(|| int(0).cmp(&cross(p, q)))
    });
    rays.dedup_by(|q, p| cross(p, q).is_zero() && upper(p) == upper(q));
    let g: Vec<Rational> = rays
        .iter()
        .map(|d| local(d) + local(&d.scale(&int(-1))))
        .collect();
    (0..g.len()).any(|i| {
        let (a, c) = (&g[i], &g[(i + 1) % g.len()]);
        a.is_zero() || (a.is_positive() != c.is_positive() && !c.is_zero())
    })
}

/// Solves a 3×3 system, also handling repeated columns by dropping them.
fn solve3(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    // Try all column subsets; a unique solution on a subset is a valid weight vector.
    for mask in [0b111u8, 0b011, 0b101, 0b110, 0b001, 0b010, 0b100] {
        let cols: Vec<usize> = (0..3).filter(|c| mask & (1 << c) != 0).collect();
        if let Some(x) = least_exact(a, b, &cols) {
            let mut w = vec![int(0); 3];
            for (c, v) in cols.iter().zip(x) {
                w[*c] = v;
            }
            return Some(w);
        }
    }
    None
}

/// Exact solution of `A[:, cols] x = b` when it exists and is unique.
fn least_exact(a: &[Vec<Rational>], b: &[Rational], cols: &[usize]) -> Option<Vec<Rational>> {
    let k = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..3)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|&c| a[r][c].clone()).collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut rank = 0;
    for c in 0..k {
        let p = (rank..3).find(|&r| !m[r][c].is_zero())?;
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..3 {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let src = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&src) {
                    *x = &*x - &f * y;
                }
            }
        }
        rank += 1;
    }
    if (rank..3).any(|r| !m[r][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|r| m[r][k].clone()).collect())
}

/// Lattice points of `mP` by scanning the bounding box.
pub fn lattice_points_oracle(poly: &Polytope, m: u64) -> Vec<Vec<i64>> {
    let n = poly.dim();
    let mr = int(m as i64);
    let bounds: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let cs = poly.vertices().iter().map(|v| &v.0[i] * &mr);
            let lo = cs.clone().min().unwrap().floor().to_integer();
            let hi = cs.max().unwrap().ceil().to_integer();
            (i64::try_from(lo).unwrap(), i64::try_from(hi).unwrap())
        })
        .collect();
    let mut out = vec![Vec::new()];
    for (lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo..=hi).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out.into_iter()
        .filter(|x| {
            let u = Point(x.iter().map(|&c| rat(c, m as i64)).collect());
            poly.contains(&u)
        })
        .collect()
}

pub fn ceil(x: &Rational) -> BigInt {
    let (q, r) = x.numer().div_rem(x.denom());
    if r.is_positive() { q + 1 } else { q }
}

/// `Σ_{u ∈ mP ∩ ℤⁿ} ⌈m ψ₂*(u/m)⌉ − ⌈m ψ₁*(u/m)⌉` straight from the definition.
pub fn length_oracle(psi1: &PLMetric, psi2: &PLMetric, m: u64) -> BigInt {
    let mr = int(m as i64);
    lattice_points_oracle(psi1.polytope(), m)
        .iter()
        .map(|x| {
            let u = Point(x.iter().map(|&c| rat(c, m as i64)).collect());
            ceil(&(legendre_oracle(psi2, &u) * &mr)) - ceil(&(legendre_oracle(psi1, &u) * &mr))
        })
        .sum()
}

/// A few rational points of `P`: vertices, the barycenter and edge midpoints.
pub fn sample_points(poly: &Polytope) -> Vec<Point> {
    let vs = poly.vertices();
    let mut out: Vec<Point> = vs.to_vec();
    let k = int(vs.len() as i64);
    let bary = vs.iter().fold(Point::origin(poly.dim()), |a, v| a.add(v)).scale(&(int(1) / k));
    for v in vs {
        out.push(v.add(&bary).scale(&rat(1, 2)));
        out.push(v.scale(&rat(1, 3)).add(&bary.scale(&rat(2, 3))));
    }
    out.push(bary);
    out
}

/// Rational points around `P` where a metric can be compared pointwise.
pub fn probe_points(n: usize) -> Vec<Point> {
    let grid: Vec<Rational> = [-7, -3, -1, 0, 1, 2, 5, 11].iter().map(|&k| rat(k, 3)).collect();
    if n == 1 {
        grid.iter().map(|x| Point(vec![x.clone()])).collect()
    } else {
        grid.iter()
            .flat_map(|x| grid.iter().map(move |y| Point(vec![x.clone(), y.clone()])))
            .collect()
    }
}
