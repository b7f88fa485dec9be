//! Roof functions: concave-side Legendre duals of PL metrics, stored as the
//! maximum of finitely many affine pieces on a polytope.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::metric::{AffinePiece, PLMetric};
use crate::polytope::{Point, Polytope};
use crate::rational::{ceil_div_i128, lcm_of_denominators, to_i128, Rational};

/// `u ↦ max_k (⟨a_k, u⟩ + b_k)` on `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoofFunction {
    polytope: Arc<Polytope>,
    pieces: Vec<AffinePiece>,
}

impl RoofFunction {
    pub fn new(polytope: Arc<Polytope>, mut pieces: Vec<AffinePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(CoreError::Empty("roof function without pieces".into()));
        }
        for p in &pieces {
            if p.slope.dim() != polytope.dim() {
                return Err(CoreError::DimensionMismatch {
                    expected: polytope.dim(),
                    found: p.slope.dim(),
                });
            }
        }
        pieces.sort();
        pieces.dedup();
        Ok(RoofFunction { polytope, pieces })
    }

    /// Drops pieces that attain the maximum only on a null set of `P`.
    pub(crate) fn pruned(self) -> Self {
        if !self.polytope.is_full_dimensional() || self.pieces.len() == 1 {
            return self;
        }
        match max_cells(&self.polytope, &self.pieces) {
            Ok(cells) if !cells.is_empty() => RoofFunction {
                pieces: cells.into_iter().map(|(k, _)| self.pieces[k].clone()).collect(),
                polytope: self.polytope,
            },
            _ => self,
        }
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn eval(&self, u: &Point) -> Rational {
        self.pieces.iter().map(|p| p.eval(u)).max().expect("nonempty roof")
    }

    /// Maximal regions of linearity: each piece with the full-dimensional
    /// part of `P` where it attains the maximum.
    pub fn cells(&self) -> Result<Vec<(AffinePiece, Polytope)>> {
        Ok(max_cells(&self.polytope, &self.pieces)?
            .into_iter()
            .map(|(k, cell)| (self.pieces[k].clone(), cell))
            .collect())
    }

    /// Vertices of the polyhedral complex induced on `P`.
    pub fn vertices(&self) -> Result<Vec<Point>> {
        let mut out: Vec<Point> = self
            .cells()?
            .into_iter()
            .flat_map(|(_, cell)| cell.vertices().to_vec())
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// `∫_P ϑ(u) du`.
    pub fn integral(&self) -> Result<Rational> {
        Ok(self
            .cells()?
            .iter()
            .map(|(piece, cell)| cell.integrate_affine(&piece.slope.0, &piece.constant))
            .sum())
    }

    /// The convex metric `v ↦ max_{u ∈ P} (⟨u, v⟩ − ϑ(u))`.
    pub fn conjugate(&self) -> Result<PLMetric> {
        let pieces = self
            .vertices()?
            .into_iter()
            .map(|w| {
                let c = -self.eval(&w);
                AffinePiece::new(w, c)
            })
            .collect();
        PLMetric::from_max(self.polytope.clone(), pieces)
    }

    /// `sup_P |ϑ − ϑ'|`, exact, by evaluating on the common refinement of the
    /// two linearity complexes.
    pub fn sup_distance(&self, other: &RoofFunction) -> Result<Rational> {
        if self.polytope != other.polytope {
            return Err(CoreError::PolytopeMismatch);
        }
        let mine = self.cells()?;
        let theirs = other.cells()?;
        let mut best = Rational::zero();
        for (_, a) in &mine {
            for (_, b) in &theirs {
                let constraints: Vec<Constraint> = b
                    .facets()
                    .iter()
                    .map(|f| {
                        let g: Vec<Rational> =
                            f.normal.iter().map(|x| -Rational::from_integer(x.clone())).collect();
                        (g, f.offset.clone())
                    })
                    .collect();
                for v in clip(a, &constraints) {
                    let d = (self.eval(&v) - other.eval(&v)).abs();
                    if d > best {
                        best = d;
                    }
                }
            }
        }
        Ok(best)
    }

    /// Integer form of the pieces for fast lattice evaluation; `None` when the
    /// common denominator or numerators do not fit in 64 bits.
    pub fn compile(&self) -> Option<CompiledRoof> {
        let denom = lcm_of_denominators(
            self.pieces
                .iter()
                .flat_map(|p| p.slope.0.iter().chain(std::iter::once(&p.constant))),
        );
        let scale = Rational::from_integer(denom.clone());
        let fits = |x: &BigInt| to_i128(x).ok().filter(|v| v.unsigned_abs() < 1 << 62);
        let rows = self
            .pieces
            .iter()
            .map(|p| {
                let slope = p
                    .slope
                    .0
                    .iter()
                    .map(|a| fits(&(a * &scale).to_integer()))
                    .collect::<Option<Vec<i128>>>()?;
                let constant = fits(&(&p.constant * &scale).to_integer())?;
                Some((slope, constant))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(CompiledRoof {
            denom: fits(&denom)?,
            rows,
        })
    }
}

/// Roof pieces scaled to integers: `ϑ(u) = max_k (⟨A_k, u⟩ + B_k) / D`.
#[derive(Clone, Debug)]
pub struct CompiledRoof {
    denom: i128,
    rows: Vec<(Vec<i128>, i128)>,
}

impl CompiledRoof {
    /// `⌈m · ϑ(x / m)⌉` for an integer point `x` of `m·P`.
    pub fn ceil_scaled(&self, x: &[i64], m: u64) -> Option<i128> {
        let m = i128::from(m);
        let mut best: Option<i128> = None;
        for (slope, constant) in &self.rows {
            let mut acc = constant.checked_mul(m)?;
            for (a, &xi) in slope.iter().zip(x) {
                acc = acc.checked_add(a.checked_mul(i128::from(xi))?)?;
            }
            best = Some(best.map_or(acc, |b| b.max(acc)));
        }
        best.map(|b| ceil_div_i128(b, self.denom))
    }
}

/// Constraint `⟨g, x⟩ + c ≥ 0`.
pub(crate) type Constraint = (Vec<Rational>, Rational);

fn value(constraint: &Constraint, x: &Point) -> Rational {
    crate::linalg::dot(&constraint.0, &x.0) + &constraint.1
}

/// Vertices of `domain ∩ {constraints}` (possibly degenerate, possibly empty)
/// for full-dimensional domains in dimension one or two.
pub(crate) fn clip(domain: &Polytope, constraints: &[Constraint]) -> Vec<Point> {
    match domain.dim() {
        1 => {
            let vs = domain.vertices();
            let mut lo = vs[0].0[0].clone();
            let mut hi = vs[vs.len() - 1].0[0].clone();
            for (g, c) in constraints {
                let g = &g[0];
                if g.is_zero() {
                    if c.is_negative() {
                        return Vec::new();
                    }
                } else if g.is_positive() {
                    lo = lo.max(-c / g);
                } else {
                    hi = hi.min(-c / g);
                }
                if lo > hi {
                    return Vec::new();
                }
            }
            if lo == hi {
                vec![Point(vec![lo])]
            } else {
                vec![Point(vec![lo]), Point(vec![hi])]
            }
        }
        2 => clip_polygon(domain.boundary_cycle(), constraints),
        _ => Vec::new(),
    }
}

/// Sutherland–Hodgman clipping of a convex polygon, given as a cyclic vertex
/// list, by half-planes.
pub(crate) fn clip_polygon(mut poly: Vec<Point>, constraints: &[Constraint]) -> Vec<Point> {
    for con in constraints {
        if poly.is_empty() {
            break;
        }
        let vals: Vec<Rational> = poly.iter().map(|p| value(con, p)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            continue;
        }
        let mut next = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            let (fc, fnx) = (&vals[i], &vals[j]);
            if !fc.is_negative() {
                next.push(poly[i].clone());
            }
            if (fc.is_positive() && fnx.is_negative()) || (fc.is_negative() && fnx.is_positive()) {
                let t = fc / (fc - fnx);
                next.push(poly[i].add(&poly[j].sub(&poly[i]).scale(&t)));
            }
        }
        next.dedup();
        while next.len() > 1 && next.first() == next.last() {
            next.pop();
        }
        poly = next;
    }
    poly
}

pub(crate) fn twice_area(cycle: &[Point]) -> Rational {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&cycle[i], &cycle[(i + 1) % n]);
            &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0]
        })
        .sum()
}

/// Full-dimensional cells `{u ∈ P : piece_k(u) ≥ piece_l(u) ∀l}` of the
/// maximum of distinct affine pieces, with the piece index.
pub(crate) fn max_cells(domain: &Polytope, pieces: &[AffinePiece]) -> Result<Vec<(usize, Polytope)>> {
    if !domain.is_full_dimensional() {
        return Err(CoreError::LowerDimensional);
    }
    if domain.dim() > 2 {
        return Err(CoreError::Unsupported(format!(
            "cell decomposition in dimension {}",
            domain.dim()
        )));
    }
    let mut out = Vec::new();
    for (k, pk) in pieces.iter().enumerate() {
        let mut constraints = Vec::with_capacity(pieces.len());
        let mut shadowed = false;
        for (l, pl) in pieces.iter().enumerate() {
            if l == k {
                continue;
            }
            let g: Vec<Rational> = pk.slope.0.iter().zip(&pl.slope.0).map(|(a, b)| a - b).collect();
            let c = &pk.constant - &pl.constant;
            if g.iter().all(Zero::is_zero) {
                // identical pieces: only the first one owns the cell
                if c.is_negative() || (c.is_zero() && l < k) {
                    shadowed = true;
                    break;
                }
                continue;
            }
            constraints.push((g, c));
        }
        if shadowed {
            continue;
        }
        let verts = clip(domain, &constraints);
        let full = match domain.dim() {
            1 => verts.len() == 2,
            _ => verts.len() >= 3 && !twice_area(&verts).is_zero(),
        };
        if full {
            out.push((k, Polytope::from_vertices(&verts)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn unit_interval() -> Arc<Polytope> {
        Arc::new(Polytope::from_vertices(&[Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap())
    }

    fn unit_square() -> Arc<Polytope> {
        let pts: Vec<Point> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(x, y)| Point::from_ints(&[x, y]))
            .collect();
        Arc::new(Polytope::from_vertices(&pts).unwrap())
    }

    #[test]
    fn tent_roof_cells_and_integral() {
        // -min(u, 1-u) = max(-u, u-1)
        let roof = RoofFunction::new(
            unit_interval(),
            vec![
                AffinePiece::new(Point::from_ints(&[-1]), int(0)),
                AffinePiece::new(Point::from_ints(&[1]), int(-1)),
            ],
        )
        .unwrap();
        let cells = roof.cells().unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(roof.integral().unwrap(), rat(-1, 4));
        assert_eq!(roof.vertices().unwrap().len(), 3);
        let psi = roof.conjugate().unwrap();
        assert_eq!(psi.eval(&Point(vec![int(0)])), rat(1, 2));
        assert_eq!(psi.eval(&Point(vec![int(-1)])), int(0));
        assert_eq!(psi.eval(&Point(vec![int(1)])), int(1));
        assert_eq!(psi.eval(&Point(vec![rat(1, 3)])), rat(2, 3));
    }

    #[test]
    fn planar_cells_partition_the_square() {
        let roof = RoofFunction::new(
            unit_square(),
            vec![
                AffinePiece::new(Point::from_ints(&[1, 0]), int(0)),
                AffinePiece::new(Point::from_ints(&[0, 1]), int(0)),
                AffinePiece::new(Point::from_ints(&[0, 0]), rat(1, 2)),
            ],
        )
        .unwrap();
        let cells = roof.cells().unwrap();
        let total: Rational = cells.iter().map(|(_, c)| c.volume()).sum();
        assert_eq!(total, int(1));
        assert_eq!(cells.len(), 3);
    }

    #[test]
    fn dominated_pieces_have_no_cell() {
        let roof = RoofFunction::new(
            unit_square(),
            vec![
                AffinePiece::new(Point::from_ints(&[0, 0]), int(1)),
                AffinePiece::new(Point::from_ints(&[0, 0]), int(0)),
                AffinePiece::new(Point(vec![rat(1, 2), int(0)]), int(0)),
            ],
        )
        .unwrap()
        .pruned();
        assert_eq!(roof.pieces().len(), 1);
    }

    #[test]
    fn sup_distance_on_overlay() {
        let a = RoofFunction::new(unit_square(), vec![AffinePiece::new(Point::from_ints(&[1, 0]), int(0))]).unwrap();
        let b = RoofFunction::new(unit_square(), vec![AffinePiece::new(Point::from_ints(&[0, 1]), int(0))]).unwrap();
        assert_eq!(a.sup_distance(&b).unwrap(), int(1));
    }

    #[test]
    fn compiled_roof_matches_exact_ceiling() {
        let roof = RoofFunction::new(
            unit_interval(),
            vec![
                AffinePiece::new(Point(vec![rat(-1, 3)]), rat(1, 7)),
                AffinePiece::new(Point::from_ints(&[2]), rat(-5, 6)),
            ],
        )
        .unwrap();
        let compiled = roof.compile().unwrap();
        for m in 1..12u64 {
            for x in 0..=m as i64 {
                let u = Point(vec![rat(x, m as i64)]);
                let exact = (roof.eval(&u) * int(m as i64)).ceil().to_integer();
                assert_eq!(BigInt::from(compiled.ceil_scaled(&[x], m).unwrap()), exact);
            }
        }
    }
}
