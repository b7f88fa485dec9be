//! Piecewise-linear toric metrics in min-max normal form.
//!
//! A metric on the line bundle of a polytope `P ⊂ ℝⁿ` is stored through its
//! potential `ψ(v) = −log‖s‖`, written as `min_j max_i (⟨u_ji, v⟩ + c_ji)`.
//! Larger potentials mean smaller metrics, so the pointwise minimum of two
//! metrics has the pointwise maximum of their potentials, and a metric is
//! semipositive exactly when `ψ` is convex. The defining invariant is that
//! `ψ − Ψ_P` is bounded, where `Ψ_P(v) = max_{w ∈ P} ⟨w, v⟩` is the canonical
//! potential; equivalently the recession function of `ψ` equals `Ψ_P`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::hull::lower_hull;
use crate::linalg;
use crate::polytope::{Point, Polytope};
use crate::rational::Rational;
use crate::rational::lcm_of_denominators;
use crate::roof::{clip_polygon, max_cells, twice_area, Constraint, RoofFunction};

/// `v ↦ ⟨slope, v⟩ + constant`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePiece {
    pub slope: Point,
    pub constant: Rational,
}

impl AffinePiece {
    pub fn new(slope: Point, constant: Rational) -> Self {
        AffinePiece { slope, constant }
    }

    pub fn eval(&self, v: &Point) -> Rational {
        self.slope.dot(v) + &self.constant
    }

    fn plus(&self, other: &AffinePiece) -> AffinePiece {
        AffinePiece::new(self.slope.add(&other.slope), &self.constant + &other.constant)
    }

    fn scaled(&self, factor: &Rational) -> AffinePiece {
        AffinePiece::new(self.slope.scale(factor), &self.constant * factor)
    }
}

impl fmt::Debug for AffinePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, v> + {}", self.slope, self.constant)
    }
}

/// Cap on the number of max-blocks produced by combining operations.
const MAX_BLOCKS: usize = 4096;

#[derive(Clone)]
pub struct PLMetric {
    polytope: Arc<Polytope>,
    blocks: Vec<Vec<AffinePiece>>,
    convex: OnceLock<bool>,
}

impl fmt::Debug for PLMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PLMetric")
            .field("polytope", &self.polytope.vertices())
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl PartialEq for PLMetric {
    fn eq(&self, other: &Self) -> bool {
        self.polytope == other.polytope && self.blocks == other.blocks
    }
}

impl Eq for PLMetric {}

impl PLMetric {
    pub fn new(polytope: Arc<Polytope>, blocks: Vec<Vec<AffinePiece>>) -> Result<Self> {
        let n = polytope.dim();
        if n == 0 || n > 2 {
            return Err(CoreError::Unsupported(format!("metrics in dimension {n}")));
        }
        if polytope.affine_dim() == 0 {
            return Err(CoreError::InvalidArgument("polytope is a single point".into()));
        }
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(CoreError::Empty("metric needs nonempty blocks".into()));
        }
        for piece in blocks.iter().flatten() {
            if piece.slope.dim() != n {
                return Err(CoreError::DimensionMismatch {
                    expected: n,
                    found: piece.slope.dim(),
                });
            }
        }
        if blocks.len() > MAX_BLOCKS {
            return Err(CoreError::Unsupported(format!("more than {MAX_BLOCKS} max-blocks")));
        }
        let mut blocks: Vec<Vec<AffinePiece>> = blocks.into_iter().map(canonical_block).collect();
        blocks.sort();
        blocks.dedup();
        check_recession(&polytope, &blocks)?;
        let convex = OnceLock::new();
        if blocks.len() == 1 {
            let _ = convex.set(true);
        }
        Ok(PLMetric {
            polytope,
            blocks,
            convex,
        })
    }

    /// Convex potential `max_i (⟨u_i, v⟩ + c_i)`.
    pub fn from_max(polytope: Arc<Polytope>, pieces: Vec<AffinePiece>) -> Result<Self> {
        PLMetric::new(polytope, vec![pieces])
    }

    /// The canonical metric `Ψ_P(v) = max_{w ∈ vert P} ⟨w, v⟩`.
    pub fn canonical(polytope: Arc<Polytope>) -> Result<Self> {
        let pieces = polytope
            .vertices()
            .iter()
            .map(|w| AffinePiece::new(w.clone(), Rational::zero()))
            .collect();
        PLMetric::from_max(polytope, pieces)
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn polytope_arc(&self) -> &Arc<Polytope> {
        &self.polytope
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn blocks(&self) -> &[Vec<AffinePiece>] {
        &self.blocks
    }

    pub fn eval(&self, v: &Point) -> Rational {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|p| p.eval(v)).max().expect("nonempty block"))
            .min()
            .expect("nonempty metric")
    }

    /// Whether `ψ` is convex, i.e. the metric is semipositive.
    pub fn is_semipositive(&self) -> Result<bool> {
        if let Some(&c) = self.convex.get() {
            return Ok(c);
        }
        let env = self.envelope()?;
        let c = self.distance(&env)?.is_zero();
        let _ = self.convex.set(c);
        Ok(c)
    }

    /// The pieces of `ψ` as a single maximum, when `ψ` is convex.
    pub fn convex_pieces(&self) -> Result<Vec<AffinePiece>> {
        if self.blocks.len() == 1 {
            return Ok(self.blocks[0].clone());
        }
        if !self.is_semipositive()? {
            return Err(CoreError::NotSemipositive);
        }
        Ok(self.envelope()?.blocks[0].clone())
    }

    /// The roof function `ψ*` on `P`.
    pub fn legendre(&self) -> RoofFunction {
        let mut pieces = Vec::new();
        for block in &self.blocks {
            let lifted: Vec<(Point, Rational)> =
                block.iter().map(|p| (p.slope.clone(), -p.constant.clone())).collect();
            pieces.extend(lower_hull(&lifted));
        }
        RoofFunction::new(self.polytope.clone(), pieces)
            .expect("blocks are nonempty")
            .pruned()
    }

    /// The largest semipositive metric below `ψ`, namely `ψ**`.
    pub fn envelope(&self) -> Result<PLMetric> {
        if self.blocks.len() == 1 {
            return Ok(self.clone());
        }
        self.legendre().conjugate()
    }

    /// Pointwise minimum of the metrics (maximum of the potentials).
    pub fn metric_min(&self, other: &PLMetric) -> Result<PLMetric> {
        self.same_polytope(other)?;
        let mut blocks = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for a in &self.blocks {
            for b in &other.blocks {
                blocks.push(a.iter().chain(b).cloned().collect());
            }
        }
        PLMetric::new(self.polytope.clone(), blocks)
    }

    /// `ψ + c`.
    pub fn add_constant(&self, c: &Rational) -> PLMetric {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|p| AffinePiece::new(p.slope.clone(), &p.constant + c))
                    .collect()
            })
            .collect();
        PLMetric {
            polytope: self.polytope.clone(),
            blocks,
            convex: self.convex.clone(),
        }
    }

    /// `λψ`, a metric on `λP`, for `λ > 0`.
    pub fn scale(&self, factor: &Rational) -> Result<PLMetric> {
        if !factor.is_positive() {
            return Err(CoreError::InvalidArgument("scale factor must be positive".into()));
        }
        let polytope = Arc::new(self.polytope.scale(factor)?);
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|p| p.scaled(factor)).collect())
            .collect();
        PLMetric::new(polytope, blocks)
    }

    /// `ψ + φ`, a metric on the Minkowski sum of the polytopes.
    pub fn tensor(&self, other: &PLMetric) -> Result<PLMetric> {
        let polytope = Arc::new(self.polytope.minkowski_sum(&other.polytope)?);
        PLMetric::new(polytope, sum_forms(&self.blocks, &other.blocks)?)
    }

    /// `ψ + ε f` for a PL function `f` on the same polytope and `ε ≥ 0`.
    pub fn perturb(&self, epsilon: &Rational, f: &PLFunction) -> Result<PLMetric> {
        self.same_polytope(&f.plus)?;
        if epsilon.is_negative() {
            return Err(CoreError::InvalidArgument("perturbation parameter must be nonnegative".into()));
        }
        if epsilon.is_zero() {
            return Ok(self.clone());
        }
        let scale = |blocks: &[Vec<AffinePiece>], s: &Rational| -> Vec<Vec<AffinePiece>> {
            blocks
                .iter()
                .map(|b| b.iter().map(|p| p.scaled(s)).collect())
                .collect()
        };
        let plus = scale(&f.plus.blocks, epsilon);
        // −ε·min_j max_i ℓ_ji = max_j min_i (−ε ℓ_ji), rewritten as a min over
        // choices of one piece per block
        let negated = scale(&f.minus.blocks, &-epsilon.clone());
        let mut minus: Vec<Vec<AffinePiece>> = vec![Vec::new()];
        for block in &negated {
            if minus.len() * block.len() > MAX_BLOCKS {
                return Err(CoreError::Unsupported("perturbation has too many blocks".into()));
            }
            minus = minus
                .iter()
                .flat_map(|sel| {
                    block.iter().map(move |p| {
                        let mut s = sel.clone();
                        s.push(p.clone());
                        s
                    })
                })
                .collect();
        }
        let blocks = sum_forms(&sum_forms(&self.blocks, &plus)?, &minus)?;
        PLMetric::new(self.polytope.clone(), blocks)
    }

    /// `sup_{ℝⁿ} |ψ − φ|`, exact.
    pub fn distance(&self, other: &PLMetric) -> Result<Rational> {
        self.same_polytope(other)?;
        let candidates = if self.dim() == 1 {
            let mut pieces: Vec<AffinePiece> =
                self.blocks.iter().chain(&other.blocks).flatten().cloned().collect();
            pieces.sort();
            pieces.dedup();
            arrangement_points(&pieces, 1)
        } else {
            refinement_vertices(&[&self.blocks, &other.blocks])
        };
        Ok(candidates
            .iter()
            .map(|v| (self.eval(v) - other.eval(v)).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    fn same_polytope(&self, other: &PLMetric) -> Result<()> {
        if self.polytope == other.polytope {
            Ok(())
        } else {
            Err(CoreError::PolytopeMismatch)
        }
    }
}

/// Blocks of the sum of two min-max forms.
fn sum_forms(a: &[Vec<AffinePiece>], b: &[Vec<AffinePiece>]) -> Result<Vec<Vec<AffinePiece>>> {
    if a.len() * b.len() > MAX_BLOCKS {
        return Err(CoreError::Unsupported(format!("more than {MAX_BLOCKS} max-blocks")));
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut block: Vec<AffinePiece> =
                x.iter().flat_map(|p| y.iter().map(move |q| p.plus(q))).collect();
            block.sort();
            block.dedup();
            out.push(block);
        }
    }
    Ok(out)
}

/// Removes redundant pieces from `max_i ℓ_i`: for equal slopes only the
/// largest constant matters, and in general only slopes that are vertices of
/// the conjugate's linearity complex survive.
fn canonical_block(mut block: Vec<AffinePiece>) -> Vec<AffinePiece> {
    block.sort_by(|a, b| a.slope.cmp(&b.slope).then(b.constant.cmp(&a.constant)));
    block.dedup_by(|later, earlier| later.slope == earlier.slope);
    if block.len() <= 2 {
        return block;
    }
    let slopes: Vec<Point> = block.iter().map(|p| p.slope.clone()).collect();
    let Ok(hull) = Polytope::from_vertices(&slopes) else {
        return block;
    };
    if !hull.is_full_dimensional() {
        return block;
    }
    let lifted: Vec<(Point, Rational)> = block.iter().map(|p| (p.slope.clone(), -p.constant.clone())).collect();
    let planes = lower_hull(&lifted);
    let Ok(cells) = max_cells(&hull, &planes) else {
        return block;
    };
    let mut keep: Vec<Point> = cells
        .iter()
        .flat_map(|(_, cell)| cell.vertices().iter().cloned())
        .collect();
    keep.sort();
    keep.dedup();
    block.retain(|p| keep.binary_search(&p.slope).is_ok());
    block.sort();
    block
}

/// Directions on the boundary of the unit cube where the ordering of the
/// linear forms `⟨u, ·⟩` (for the given slopes) can change.
fn recession_directions(slopes: &[Point], n: usize) -> Vec<Vec<Rational>> {
    let one = Rational::from_integer(1.into());
    if n == 1 {
        return vec![vec![one.clone()], vec![-one]];
    }
    let signs = [one.clone(), -one.clone()];
    let mut dirs: Vec<Vec<Rational>> = Vec::new();
    for sx in &signs {
        for sy in &signs {
            dirs.push(vec![sx.clone(), sy.clone()]);
        }
    }
    for (i, a) in slopes.iter().enumerate() {
        for b in &slopes[i + 1..] {
            let d = a.sub(b);
            let (dx, dy) = (&d.0[0], &d.0[1]);
            for s in &signs {
                // edge x = s: dx·s + dy·t = 0
                if !dy.is_zero() {
                    let t = -(dx * s) / dy;
                    if t.abs() <= one {
                        dirs.push(vec![s.clone(), t]);
                    }
                }
                // edge y = s
                if !dx.is_zero() {
                    let t = -(dy * s) / dx;
                    if t.abs() <= one {
                        dirs.push(vec![t, s.clone()]);
                    }
                }
            }
        }
    }
    dirs.sort();
    dirs.dedup();
    dirs
}

fn check_recession(polytope: &Polytope, blocks: &[Vec<AffinePiece>]) -> Result<()> {
    let mut slopes: Vec<Point> = blocks.iter().flatten().map(|p| p.slope.clone()).collect();
    slopes.extend(polytope.vertices().iter().cloned());
    slopes.sort();
    slopes.dedup();
    for d in recession_directions(&slopes, polytope.dim()) {
        let rec = blocks
            .iter()
            .map(|b| b.iter().map(|p| linalg::dot(&p.slope.0, &d)).max().expect("nonempty"))
            .min()
            .expect("nonempty");
        let support = polytope.support(&d);
        if rec != support {
            let dir: Vec<String> = d.iter().map(ToString::to_string).collect();
            return Err(CoreError::RecessionViolation(format!(
                "growth {} instead of {} in direction ({})",
                rec,
                support,
                dir.join(", ")
            )));
        }
    }
    Ok(())
}

/// Vertices of the common refinement of the linearity complexes of planar
/// min-max forms, cut off by a square that contains every vertex of the
/// arrangement of `{ℓ_a = ℓ_b}`. Each form is affine on every resulting cell.
fn refinement_vertices(forms: &[&[Vec<AffinePiece>]]) -> Vec<Point> {
    let pieces: Vec<&AffinePiece> = forms.iter().flat_map(|f| f.iter().flatten()).collect();
    let r = vertex_bound(&pieces);
    let corner = |x: &Rational, y: &Rational| Point(vec![x.clone(), y.clone()]);
    let neg = -r.clone();
    let mut cells: Vec<Vec<Point>> = vec![vec![
        corner(&neg, &neg),
        corner(&r, &neg),
        corner(&r, &r),
        corner(&neg, &r),
    ]];
    let ge = |a: &AffinePiece, b: &AffinePiece| -> Constraint {
        (a.slope.sub(&b.slope).0, &a.constant - &b.constant)
    };
    let keep = |cell: &Vec<Point>| cell.len() >= 3 && !twice_area(cell).is_zero();
    for form in forms {
        let mut tagged: Vec<(Vec<Point>, Vec<&AffinePiece>)> = cells.into_iter().map(|c| (c, Vec::new())).collect();
        for block in form.iter() {
            let mut next = Vec::new();
            for (cell, active) in &tagged {
                for a in block {
                    let cons: Vec<Constraint> = block.iter().filter(|b| *b != a).map(|b| ge(a, b)).collect();
                    let piece = clip_polygon(cell.clone(), &cons);
                    if keep(&piece) {
                        let mut act = active.clone();
                        act.push(a);
                        next.push((piece, act));
                    }
                }
            }
            tagged = next;
        }
        cells = Vec::new();
        for (cell, active) in tagged {
            for (j, a) in active.iter().enumerate() {
                if active[..j].contains(a) {
                    continue;
                }
                let cons: Vec<Constraint> = active.iter().filter(|b| *b != a).map(|b| ge(b, a)).collect();
                let piece = clip_polygon(cell.clone(), &cons);
                if keep(&piece) {
                    cells.push(piece);
                }
            }
        }
    }
    let mut out: Vec<Point> = cells.into_iter().flatten().collect();
    out.sort();
    out.dedup();
    out
}

/// A bound on the coordinates of every intersection point of two lines
/// `⟨s_a − s_b, v⟩ = c_b − c_a`, plus one.
fn vertex_bound(pieces: &[&AffinePiece]) -> Rational {
    let l = Rational::from_integer(lcm_of_denominators(pieces.iter().flat_map(|p| p.slope.0.iter())));
    let smax = pieces.iter().flat_map(|p| p.slope.0.iter()).map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
    let cmax = pieces.iter().map(|p| p.constant.abs()).max().unwrap_or_else(Rational::zero);
    let two = Rational::from_integer(2.into());
    // |numerator| ≤ 2·(2 cmax)(2 smax) and |det| ≥ 1/l²
    &two * (&two * cmax) * (&two * smax) * &l * &l + Rational::from_integer(1.into())
}

/// Points where every function that is affine on the cells of the
/// arrangement of `{ℓ_a = ℓ_b}` and bounded attains its extrema.
pub(crate) fn arrangement_points(pieces: &[AffinePiece], n: usize) -> Vec<Point> {
    let mut lines: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i + 1..] {
            let normal: Vec<Rational> = a.slope.0.iter().zip(&b.slope.0).map(|(x, y)| x - y).collect();
            let Some(lead) = normal.iter().find(|x| !x.is_zero()).cloned() else {
                continue;
            };
            let rhs = (&b.constant - &a.constant) / &lead;
            lines.push((normal.iter().map(|x| x / &lead).collect(), rhs));
        }
    }
    lines.sort();
    lines.dedup();
    let mut points: Vec<Point> = Vec::new();
    if n == 1 {
        points.extend(lines.iter().map(|(_, r)| Point(vec![r.clone()])));
    } else {
        for (i, (n1, r1)) in lines.iter().enumerate() {
            for (n2, r2) in &lines[i + 1..] {
                let a = vec![n1.clone(), n2.clone()];
                if let Some(x) = linalg::solve(&a, &[r1.clone(), r2.clone()]) {
                    points.push(Point(x));
                }
            }
        }
        if points.is_empty() {
            // all lines parallel: walk along their common normal
            for (normal, r) in &lines {
                let t = r / linalg::dot(normal, normal);
                points.push(Point(normal.iter().map(|x| x * &t).collect()));
            }
        }
    }
    if points.is_empty() {
        points.push(Point::origin(n));
    }
    points.sort();
    points.dedup();
    points
}

/// Difference of two metrics on the same polytope: a bounded PL function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    plus: PLMetric,
    minus: PLMetric,
}

impl PLFunction {
    pub fn difference(plus: PLMetric, minus: PLMetric) -> Result<Self> {
        plus.same_polytope(&minus)?;
        Ok(PLFunction { plus, minus })
    }

    pub fn constant(polytope: Arc<Polytope>, c: &Rational) -> Result<Self> {
        let canonical = PLMetric::canonical(polytope)?;
        PLFunction::difference(canonical.add_constant(c), canonical)
    }

    pub fn plus(&self) -> &PLMetric {
        &self.plus
    }

    pub fn minus(&self) -> &PLMetric {
        &self.minus
    }

    pub fn eval(&self, v: &Point) -> Rational {
        self.plus.eval(v) - self.minus.eval(v)
    }

    /// `sup |f|`.
    pub fn sup_norm(&self) -> Result<Rational> {
        self.plus.distance(&self.minus)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{int, rat};

    pub(crate) fn interval() -> Arc<Polytope> {
        Arc::new(Polytope::from_vertices(&[Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap())
    }

    pub(crate) fn piece1(slope: Rational, c: Rational) -> AffinePiece {
        AffinePiece::new(Point(vec![slope]), c)
    }

    /// max(0, v/2 + 1/2, v)
    pub(crate) fn tent() -> PLMetric {
        PLMetric::from_max(
            interval(),
            vec![piece1(int(0), int(0)), piece1(rat(1, 2), rat(1, 2)), piece1(int(1), int(0))],
        )
        .unwrap()
    }

    #[test]
    fn tent_evaluates_and_distance_to_canonical() {
        let psi = tent();
        let v = |x: Rational| Point(vec![x]);
        assert_eq!(psi.eval(&v(int(0))), rat(1, 2));
        assert_eq!(psi.eval(&v(int(5))), int(5));
        let canonical = PLMetric::canonical(interval()).unwrap();
        assert_eq!(psi.distance(&canonical).unwrap(), rat(1, 2));
    }

    #[test]
    fn legendre_of_tent() {
        let roof = tent().legendre();
        let u = |x: Rational| Point(vec![x]);
        assert_eq!(roof.eval(&u(int(0))), int(0));
        assert_eq!(roof.eval(&u(rat(1, 2))), rat(-1, 2));
        assert_eq!(roof.eval(&u(rat(1, 4))), rat(-1, 4));
        assert_eq!(roof.eval(&u(int(1))), int(0));
    }

    #[test]
    fn redundant_pieces_are_removed() {
        let psi = PLMetric::from_max(
            interval(),
            vec![
                piece1(int(0), int(0)),
                piece1(rat(1, 2), int(-3)),
                piece1(int(1), int(0)),
                piece1(int(1), int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(psi.blocks()[0].len(), 2);
    }

    #[test]
    fn recession_is_enforced() {
        let err = PLMetric::from_max(interval(), vec![piece1(int(2), int(0))]).unwrap_err();
        assert!(matches!(err, CoreError::RecessionViolation(_)));
        // slopes beyond P are allowed when the growth still matches
        let ok = PLMetric::new(
            interval(),
            vec![
                vec![piece1(int(-1), int(0)), piece1(int(1), int(0))],
                vec![piece1(int(0), int(0)), piece1(int(1), int(0))],
            ],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn bump_is_not_semipositive_and_its_envelope_is_the_tent() {
        let bump = PLMetric::new(
            interval(),
            vec![
                vec![piece1(int(0), int(0)), piece1(rat(3, 4), rat(3, 4)), piece1(int(1), int(0))],
                vec![piece1(int(0), int(0)), piece1(rat(1, 4), rat(3, 4)), piece1(int(1), int(0))],
            ],
        )
        .unwrap();
        assert!(!bump.is_semipositive().unwrap());
        assert_eq!(bump.envelope().unwrap(), tent());
        assert!(tent().is_semipositive().unwrap());
    }

    #[test]
    fn min_of_metrics_is_max_of_potentials() {
        let canonical = PLMetric::canonical(interval()).unwrap();
        let shifted = canonical.add_constant(&rat(1, 3));
        let m = tent().metric_min(&shifted).unwrap();
        assert_eq!(m.eval(&Point(vec![int(0)])), rat(1, 2));
        assert_eq!(m.eval(&Point(vec![int(1)])), rat(4, 3));
    }

    #[test]
    fn perturbation_stays_a_metric() {
        let canonical = PLMetric::canonical(interval()).unwrap();
        let f = PLFunction::difference(tent(), canonical.clone()).unwrap();
        let eps = rat(1, 3);
        let moved = canonical.perturb(&eps, &f).unwrap();
        for x in -4..6 {
            let v = Point(vec![rat(x, 2)]);
            assert_eq!(moved.eval(&v), canonical.eval(&v) + &eps * f.eval(&v));
        }
        assert_eq!(f.sup_norm().unwrap(), rat(1, 2));
    }
}
