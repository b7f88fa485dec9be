//! Exact rational polytopes: hulls, facets, lattice points, volumes.
//!
//! A [`Polytope`] keeps both descriptions. The vertex list is the set of
//! extreme points sorted lexicographically; each facet is `⟨normal, x⟩ ≤ offset`
//! with a primitive integer normal. Lower-dimensional polytopes additionally
//! carry equalities cutting out their affine hull.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};
use crate::linalg;
use crate::rational::{
    ceil_int, factorial, floor_int, format_rational, lcm_of_denominators, parse_rational, to_i128,
    Rational,
};

/// A point of ℚⁿ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn dot(&self, other: &Point) -> Rational {
        linalg::dot(&self.0, &other.0)
    }

    pub fn dot_int(&self, other: &[BigInt]) -> Rational {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| a * Rational::from_integer(b.clone()))
            .sum()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<String> = self.0.iter().map(format_rational).collect();
        coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<String>::deserialize(deserializer)?;
        coords
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map(Point)
            .map_err(serde::de::Error::custom)
    }
}

/// `⟨normal, x⟩ ≤ offset`; `vertices` indexes the polytope vertices on the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
    pub vertices: Vec<usize>,
}

/// `⟨normal, x⟩ = value`, present only for lower-dimensional polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equality {
    pub normal: Vec<BigInt>,
    pub value: Rational,
}

/// Half-space `⟨normal, x⟩ ≤ offset` with rational data, used as input to
/// [`Polytope::from_halfspaces`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    affine_dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    equalities: Vec<Equality>,
}

impl Polytope {
    /// Convex hull of a nonempty finite point set.
    pub fn from_vertices(points: &[Point]) -> Result<Polytope> {
        let first = points
            .first()
            .ok_or_else(|| CoreError::Empty("polytope needs at least one point".into()))?;
        let dim = first.dim();
        if dim == 0 {
            return Err(CoreError::InvalidArgument("ambient dimension must be ≥ 1".into()));
        }
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();

        let p0 = pts[0].clone();
        let diffs: Vec<Vec<Rational>> = pts[1..].iter().map(|p| p.sub(&p0).0).collect();
        let mut basis = diffs.clone();
        let pivots = if basis.is_empty() {
            Vec::new()
        } else {
            linalg::rref(&mut basis)
        };
        let affine_dim = pivots.len();
        basis.truncate(affine_dim);

        let equalities = if affine_dim < dim {
            let normals = if basis.is_empty() {
                (0..dim)
                    .map(|i| {
                        let mut e = vec![Rational::zero(); dim];
                        e[i] = Rational::one();
                        e
                    })
                    .collect()
            } else {
                linalg::nullspace(&basis, dim)
            };
            normals
                .into_iter()
                .map(|n| {
                    let normal = primitive_integer(&n);
                    let value = p0.dot_int(&normal);
                    Equality { normal, value }
                })
                .collect()
        } else {
            Vec::new()
        };

        let (vertices, facet_normals) = match affine_dim {
            0 => (vec![p0.clone()], Vec::new()),
            1 => hull_on_line(&pts, &basis[0]),
            2 if dim == 2 => hull_planar(&pts),
            _ => hull_brute_force(&pts, &basis, affine_dim),
        };

        let facets = facet_normals
            .into_iter()
            .map(|normal| {
                let offset = vertices
                    .iter()
                    .map(|v| v.dot_int(&normal))
                    .max()
                    .expect("nonempty vertex list");
                let on: Vec<usize> = vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.dot_int(&normal) == offset)
                    .map(|(i, _)| i)
                    .collect();
                Facet {
                    normal,
                    offset,
                    vertices: on,
                }
            })
            .collect();

        let poly = Polytope {
            dim,
            affine_dim,
            vertices,
            facets,
            equalities,
        };
        debug_assert!(poly.descriptions_agree(&pts));
        Ok(poly)
    }

    /// Bounded intersection of half-spaces; `None` when empty. The system must
    /// define a bounded set (callers include a bounding polytope's facets).
    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Option<Polytope>> {
        if halfspaces.iter().any(|h| h.normal.len() != dim) {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                found: halfspaces
                    .iter()
                    .map(|h| h.normal.len())
                    .find(|&l| l != dim)
                    .unwrap_or(dim),
            });
        }
        let mut found = Vec::new();
        for subset in combinations(halfspaces.len(), dim) {
            let a: Vec<Vec<Rational>> = subset.iter().map(|&i| halfspaces[i].normal.clone()).collect();
            let b: Vec<Rational> = subset.iter().map(|&i| halfspaces[i].offset.clone()).collect();
            if let Some(x) = linalg::solve(&a, &b) {
                if halfspaces
                    .iter()
                    .all(|h| linalg::dot(&h.normal, &x) <= h.offset)
                {
                    found.push(Point(x));
                }
            }
        }
        if found.is_empty() {
            return Ok(None);
        }
        Polytope::from_vertices(&found).map(Some)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim
            && self.facets.iter().all(|f| p.dot_int(&f.normal) <= f.offset)
            && self.equalities.iter().all(|e| p.dot_int(&e.normal) == e.value)
    }

    pub fn scale(&self, factor: &Rational) -> Result<Polytope> {
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.scale(factor)).collect();
        Polytope::from_vertices(&pts)
    }

    pub fn translate(&self, by: &Point) -> Result<Polytope> {
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.add(by)).collect();
        Polytope::from_vertices(&pts)
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| a.add(b)))
            .collect();
        Polytope::from_vertices(&pts)
    }

    /// Support function `max_{u ∈ P} ⟨u, d⟩`.
    pub fn support(&self, direction: &[Rational]) -> Rational {
        self.vertices
            .iter()
            .map(|v| linalg::dot(&v.0, direction))
            .max()
            .expect("nonempty vertex list")
    }

    /// Vertices of a full-dimensional polygon in counter-clockwise order.
    pub fn boundary_cycle(&self) -> Vec<Point> {
        assert!(self.dim == 2 && self.affine_dim == 2, "boundary_cycle needs a polygon");
        monotone_chain(&self.vertices)
    }

    /// Pulling triangulation into full-dimensional simplices, each given by
    /// `dim + 1` vertex indices. Empty for lower-dimensional polytopes.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        if !self.is_full_dimensional() {
            return Vec::new();
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let facet_sets: Vec<Vec<usize>> = self.facets.iter().map(|f| f.vertices.clone()).collect();
        self.pull(&all, self.dim, &facet_sets)
    }

    fn pull(&self, face: &[usize], face_dim: usize, facet_sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
        if face_dim == 0 {
            return vec![vec![face[0]]];
        }
        let apex = face[0];
        let mut subfaces: Vec<Vec<usize>> = Vec::new();
        for f in facet_sets {
            let sub: Vec<usize> = face.iter().copied().filter(|i| f.contains(i)).collect();
            if sub.len() < face_dim || sub.len() == face.len() || subfaces.contains(&sub) {
                continue;
            }
            if self.index_affine_dim(&sub) == face_dim - 1 {
                subfaces.push(sub);
            }
        }
        let mut simplices = Vec::new();
        for sub in subfaces.iter().filter(|s| !s.contains(&apex)) {
            for mut simplex in self.pull(sub, face_dim - 1, facet_sets) {
                simplex.insert(0, apex);
                simplices.push(simplex);
            }
        }
        simplices
    }

    fn index_affine_dim(&self, idx: &[usize]) -> usize {
        let base = &self.vertices[idx[0]];
        let rows: Vec<Vec<Rational>> = idx[1..]
            .iter()
            .map(|&i| self.vertices[i].sub(base).0)
            .collect();
        if rows.is_empty() {
            0
        } else {
            linalg::rank(&rows)
        }
    }

    /// Euclidean volume, exact; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> Rational {
        let scale = Rational::from_integer(factorial(self.dim));
        self.triangulate()
            .iter()
            .map(|s| simplex_det(&self.vertices, s).abs())
            .sum::<Rational>()
            / scale
    }

    /// `n! · vol(P)`, the lattice-normalized volume.
    pub fn normalized_volume(&self) -> Rational {
        self.triangulate()
            .iter()
            .map(|s| simplex_det(&self.vertices, s).abs())
            .sum()
    }

    /// Exact integral of `x ↦ ⟨gradient, x⟩ + constant` over the polytope.
    pub fn integrate_affine(&self, gradient: &[Rational], constant: &Rational) -> Rational {
        let denom = Rational::from_integer(factorial(self.dim));
        let k = Rational::from_integer(BigInt::from(self.dim + 1));
        self.triangulate()
            .iter()
            .map(|s| {
                let vol = simplex_det(&self.vertices, s).abs() / &denom;
                let mut centroid = vec![Rational::zero(); self.dim];
                for &i in s {
                    for (c, x) in centroid.iter_mut().zip(&self.vertices[i].0) {
                        *c += x;
                    }
                }
                let value = linalg::dot(gradient, &centroid) / &k + constant;
                vol * value
            })
            .sum()
    }

    /// Integer points of the dilate `m·P` in lexicographic order.
    pub fn lattice_points(&self, m: u64) -> Result<Vec<Vec<i64>>> {
        let tester = LatticeTester::new(self, m)?;
        let mut out = Vec::new();
        tester.for_each(|p| out.push(p.to_vec()));
        Ok(out)
    }

    pub fn count_lattice_points(&self, m: u64) -> Result<u64> {
        let tester = LatticeTester::new(self, m)?;
        let mut count = 0u64;
        tester.for_each(|_| count += 1);
        Ok(count)
    }

    fn descriptions_agree(&self, inputs: &[Point]) -> bool {
        inputs.iter().all(|p| self.contains(p))
            && self.facets.iter().all(|f| {
                f.vertices.len() >= self.affine_dim && self.index_affine_dim(&f.vertices) + 1 == self.affine_dim
            })
    }
}

/// Integer constraint form of `m·P`, used by lattice enumeration.
struct LatticeTester {
    lo: Vec<i64>,
    hi: Vec<i64>,
    // q·⟨a, x⟩ ≤ m·p  (facets)  and  q·⟨a, x⟩ = m·p  (equalities)
    inequalities: Vec<(Vec<i128>, i128, i128)>,
    equations: Vec<(Vec<i128>, i128, i128)>,
}

impl LatticeTester {
    fn new(poly: &Polytope, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(CoreError::InvalidArgument("dilation factor must be ≥ 1".into()));
        }
        let mr = Rational::from_integer(BigInt::from(m));
        let mut lo = Vec::with_capacity(poly.dim);
        let mut hi = Vec::with_capacity(poly.dim);
        for i in 0..poly.dim {
            let min = poly.vertices.iter().map(|v| &v.0[i]).min().expect("vertices") * &mr;
            let max = poly.vertices.iter().map(|v| &v.0[i]).max().expect("vertices") * &mr;
            lo.push(i64::try_from(to_i128(&ceil_int(&min))?).map_err(|_| CoreError::Overflow)?);
            hi.push(i64::try_from(to_i128(&floor_int(&max))?).map_err(|_| CoreError::Overflow)?);
        }
        let convert = |normal: &[BigInt], offset: &Rational| -> Result<(Vec<i128>, i128, i128)> {
            let a = normal.iter().map(to_i128).collect::<Result<Vec<_>>>()?;
            let q = to_i128(offset.denom())?;
            let p = to_i128(&(offset.numer() * BigInt::from(m)))?;
            Ok((a, q, p))
        };
        let inequalities = poly
            .facets
            .iter()
            .map(|f| convert(&f.normal, &f.offset))
            .collect::<Result<_>>()?;
        let equations = poly
            .equalities
            .iter()
            .map(|e| convert(&e.normal, &e.value))
            .collect::<Result<_>>()?;
        Ok(LatticeTester {
            lo,
            hi,
            inequalities,
            equations,
        })
    }

    fn accepts(&self, x: &[i64]) -> bool {
        let lhs = |a: &[i128], q: i128| -> i128 {
            q * a.iter().zip(x).map(|(ai, &xi)| ai * xi as i128).sum::<i128>()
        };
        self.inequalities.iter().all(|(a, q, p)| lhs(a, *q) <= *p)
            && self.equations.iter().all(|(a, q, p)| lhs(a, *q) == *p)
    }

    fn for_each(&self, mut f: impl FnMut(&[i64])) {
        if self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return;
        }
        let mut x = self.lo.clone();
        loop {
            if self.accepts(&x) {
                f(&x);
            }
            // odometer with the last coordinate fastest: lexicographic order
            let mut i = x.len();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if x[i] < self.hi[i] {
                    x[i] += 1;
                    x[i + 1..].copy_from_slice(&self.lo[i + 1..]);
                    break;
                }
            }
        }
    }
}

fn simplex_det(vertices: &[Point], simplex: &[usize]) -> Rational {
    let base = &vertices[simplex[0]];
    let rows: Vec<Vec<Rational>> = simplex[1..].iter().map(|&i| vertices[i].sub(base).0).collect();
    linalg::determinant(&rows)
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn hull_on_line(pts: &[Point], direction: &[Rational]) -> (Vec<Point>, Vec<Vec<BigInt>>) {
    let key = |p: &Point| linalg::dot(&p.0, direction);
    let min = pts.iter().min_by_key(|p| key(p)).expect("points").clone();
    let max = pts.iter().max_by_key(|p| key(p)).expect("points").clone();
    let normal = primitive_integer(direction);
    let neg: Vec<BigInt> = normal.iter().map(|x| -x).collect();
    let mut vertices = vec![min, max];
    vertices.sort();
    (vertices, vec![normal, neg])
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0[0] - &o.0[0]) * (&b.0[1] - &o.0[1]) - (&a.0[1] - &o.0[1]) * (&b.0[0] - &o.0[0])
}

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
fn monotone_chain(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Rational::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Rational::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull_planar(pts: &[Point]) -> (Vec<Point>, Vec<Vec<BigInt>>) {
    let cycle = monotone_chain(pts);
    let normals = (0..cycle.len())
        .map(|i| {
            let a = &cycle[i];
            let b = &cycle[(i + 1) % cycle.len()];
            let d = b.sub(a);
            // outward normal of a counter-clockwise edge
            primitive_integer(&[d.0[1].clone(), -d.0[0].clone()])
        })
        .collect();
    let mut vertices = cycle;
    vertices.sort();
    (vertices, normals)
}

fn hull_brute_force(pts: &[Point], basis: &[Vec<Rational>], affine_dim: usize) -> (Vec<Point>, Vec<Vec<BigInt>>) {
    let mut normals: Vec<Vec<BigInt>> = Vec::new();
    for subset in combinations(pts.len(), affine_dim) {
        let base = &pts[subset[0]];
        let dirs: Vec<Vec<Rational>> = subset[1..].iter().map(|&i| pts[i].sub(base).0).collect();
        // normal = Σ α_k basis_k orthogonal to every facet direction
        let system: Vec<Vec<Rational>> = dirs
            .iter()
            .map(|d| basis.iter().map(|w| linalg::dot(w, d)).collect())
            .collect();
        let ns = if system.is_empty() {
            continue;
        } else {
            linalg::nullspace(&system, affine_dim)
        };
        if ns.len() != 1 {
            continue;
        }
        let mut normal = vec![Rational::zero(); base.dim()];
        for (alpha, w) in ns[0].iter().zip(basis) {
            for (n, x) in normal.iter_mut().zip(w) {
                *n += alpha * x;
            }
        }
        let normal = primitive_integer(&normal);
        let at = base.dot_int(&normal);
        let values: Vec<Rational> = pts.iter().map(|p| p.dot_int(&normal)).collect();
        let candidate = if values.iter().all(|v| v <= &at) {
            normal
        } else if values.iter().all(|v| v >= &at) {
            normal.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        if !normals.contains(&candidate) {
            normals.push(candidate);
        }
    }
    let offsets: Vec<Rational> = normals
        .iter()
        .map(|n| pts.iter().map(|p| p.dot_int(n)).max().expect("points"))
        .collect();
    let vertices = pts
        .iter()
        .filter(|p| {
            let tight: Vec<Vec<Rational>> = normals
                .iter()
                .zip(&offsets)
                .filter(|(n, o)| &p.dot_int(n) == *o)
                .map(|(n, _)| n.iter().map(|x| Rational::from_integer(x.clone())).collect())
                .collect();
            !tight.is_empty() && linalg::rank(&tight) == affine_dim
        })
        .cloned()
        .collect();
    (vertices, normals)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(c: &[(i64, i64)]) -> Point {
        Point(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub(crate) fn square() -> Polytope {
        Polytope::from_vertices(&[
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
            Point::from_ints(&[1, 1]),
        ])
        .unwrap()
    }

    #[test]
    fn segment_and_simplex_volumes() {
        let seg = Polytope::from_vertices(&[Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap();
        assert_eq!(seg.volume(), int(1));
        let simplex = Polytope::from_vertices(&[
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
        ])
        .unwrap();
        assert_eq!(simplex.volume(), rat(1, 2));
        assert_eq!(square().volume(), int(1));
        assert_eq!(square().normalized_volume(), int(2));
    }

    #[test]
    fn interior_point_dropped() {
        let tri = Polytope::from_vertices(&[
            p(&[(0, 1), (0, 1)]),
            p(&[(1, 1), (0, 1)]),
            p(&[(0, 1), (1, 1)]),
            p(&[(1, 2), (1, 2)]),
        ])
        .unwrap();
        assert_eq!(tri.vertices().len(), 3);
        assert_eq!(tri.facets().len(), 3);
        assert!(tri.contains(&p(&[(1, 2), (1, 2)])));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = Polytope::from_vertices(&[Point::from_ints(&[0]), Point::from_ints(&[1, 0])]).unwrap_err();
        assert!(matches!(err, CoreError::DimensionMismatch { .. }));
        assert!(Polytope::from_vertices(&[]).is_err());
    }

    #[test]
    fn lattice_points_examples() {
        let seg = Polytope::from_vertices(&[Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap();
        assert_eq!(seg.lattice_points(3).unwrap(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(square().lattice_points(1).unwrap().len(), 4);
        let simplex = Polytope::from_vertices(&[
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
        ])
        .unwrap();
        let pts = simplex.lattice_points(2).unwrap();
        assert_eq!(pts.len(), 6);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted, "lexicographic order");
    }

    #[test]
    fn lower_dimensional_segment_in_plane() {
        let seg = Polytope::from_vertices(&[
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[2, 2]),
            Point::from_ints(&[1, 1]),
        ])
        .unwrap();
        assert!(!seg.is_full_dimensional());
        assert_eq!(seg.affine_dim(), 1);
        assert_eq!(seg.vertices().len(), 2);
        assert_eq!(seg.equalities().len(), 1);
        assert_eq!(seg.volume(), int(0));
        assert_eq!(seg.count_lattice_points(3).unwrap(), 7);
    }

    #[test]
    fn three_dimensional_cube_and_simplex() {
        let mut cube = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    cube.push(Point::from_ints(&[x, y, z]));
                }
            }
        }
        cube.push(p(&[(1, 2), (1, 2), (1, 2)]));
        let cube = Polytope::from_vertices(&cube).unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.facets().len(), 6);
        assert_eq!(cube.volume(), int(1));
        assert_eq!(cube.count_lattice_points(2).unwrap(), 27);
        let simplex = Polytope::from_vertices(&[
            Point::from_ints(&[0, 0, 0]),
            Point::from_ints(&[1, 0, 0]),
            Point::from_ints(&[0, 1, 0]),
            Point::from_ints(&[0, 0, 1]),
        ])
        .unwrap();
        assert_eq!(simplex.volume(), rat(1, 6));
        // C(m+3, 3)
        assert_eq!(simplex.count_lattice_points(3).unwrap(), 20);
    }

    #[test]
    fn halfspace_intersection() {
        let hs = vec![
            Halfspace { normal: vec![int(-1), int(0)], offset: int(0) },
            Halfspace { normal: vec![int(0), int(-1)], offset: int(0) },
            Halfspace { normal: vec![int(1), int(1)], offset: int(2) },
        ];
        let tri = Polytope::from_halfspaces(2, &hs).unwrap().unwrap();
        assert_eq!(tri.volume(), int(2));
        let empty = vec![
            Halfspace { normal: vec![int(1)], offset: int(-1) },
            Halfspace { normal: vec![int(-1)], offset: int(0) },
        ];
        assert!(Polytope::from_halfspaces(1, &empty).unwrap().is_none());
    }

    #[test]
    fn affine_integral_over_square() {
        // ∫_{[0,1]²} (x + 2y + 1) = 1/2 + 1 + 1
        let v = square().integrate_affine(&[int(1), int(2)], &int(1));
        assert_eq!(v, rat(5, 2));
    }
}
