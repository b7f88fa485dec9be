//! Exact sheaf cohomology of torus-invariant divisors on `P¹` and on smooth
//! projective toric surfaces, plus the asymptotic and Morse-type checks built
//! on top of it.
//!
//! `h⁰(E)` is the number of lattice points of `P_E = {x : ⟨x, v_i⟩ ≥ −e_i}`.
//! On surfaces `h²(E) = h⁰(K − E)` and `h¹ = h⁰ + h² − χ` with
//! `χ(E) = 1 + (E² − E·K)/2`; on `P¹`, `h¹(E) = h⁰(K − E)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::par::{self, Execution};
use crate::polytope::{Halfspace, Polytope};
use crate::rational::{binomial, ceil_int, factorial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToricFamily {
    ProjectiveLine,
    ProjectivePlane,
    ProductOfLines,
    Hirzebruch(u32),
}

impl ToricFamily {
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        match lower.as_str() {
            "p1" => Ok(ToricFamily::ProjectiveLine),
            "p2" => Ok(ToricFamily::ProjectivePlane),
            "p1xp1" | "p1p1" => Ok(ToricFamily::ProductOfLines),
            _ => lower
                .strip_prefix('f')
                .and_then(|a| a.parse().ok())
                .map(ToricFamily::Hirzebruch)
                .ok_or_else(|| CoreError::Unsupported(format!("toric family {name:?}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ToricFamily::ProjectiveLine => "P1".into(),
            ToricFamily::ProjectivePlane => "P2".into(),
            ToricFamily::ProductOfLines => "P1xP1".into(),
            ToricFamily::Hirzebruch(a) => format!("F{a}"),
        }
    }
}

/// A smooth complete toric variety of dimension one or two, described by its
/// rays in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricVariety {
    family: ToricFamily,
    rays: Vec<Vec<i64>>,
    intersection: Vec<Vec<i64>>,
}

impl ToricVariety {
    pub fn new(family: ToricFamily) -> Self {
        let rays: Vec<Vec<i64>> = match family {
            ToricFamily::ProjectiveLine => vec![vec![1], vec![-1]],
            ToricFamily::ProjectivePlane => vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            ToricFamily::ProductOfLines => vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            ToricFamily::Hirzebruch(a) => vec![vec![1, 0], vec![0, 1], vec![-1, i64::from(a)], vec![0, -1]],
        };
        let intersection = if rays[0].len() == 2 {
            surface_intersections(&rays)
        } else {
            Vec::new()
        };
        ToricVariety {
            family,
            rays,
            intersection,
        }
    }

    pub fn family(&self) -> ToricFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.rays[0].len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// `D_i · D_j` for the torus-invariant prime divisors (surfaces only).
    pub fn intersection_matrix(&self) -> &[Vec<i64>] {
        &self.intersection
    }

    /// `K = −Σ D_i`.
    pub fn canonical(&self) -> Vec<i64> {
        vec![-1; self.rays.len()]
    }

    /// `D^{n−q}·E^q` for divisors given by coefficients over the rays:
    /// the degree on curves and the intersection pairing on surfaces.
    pub fn intersect(&self, d: &[Rational], e: &[Rational], q: usize) -> Rational {
        match (self.dim(), q) {
            (1, 0) => d.iter().sum(),
            (1, _) => e.iter().sum(),
            (_, 0) => self.pair(d, d),
            (_, 1) => self.pair(d, e),
            _ => self.pair(e, e),
        }
    }

    fn pair(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                total += x * y * Rational::from_integer(self.intersection[i][j].into());
            }
        }
        total
    }

    pub fn is_nef(&self, class: &[Rational]) -> bool {
        match self.dim() {
            1 => !class.iter().sum::<Rational>().is_negative(),
            _ => (0..self.rays.len()).all(|i| {
                let di: Vec<Rational> = (0..self.rays.len())
                    .map(|j| Rational::from_integer(i64::from(i == j).into()))
                    .collect();
                !self.pair(class, &di).is_negative()
            }),
        }
    }

    /// `P_D = {x : ⟨x, v_i⟩ ≥ −d_i}` for rational coefficients; `None` if empty.
    pub fn divisor_polytope(&self, class: &[Rational]) -> Result<Option<Polytope>> {
        let halfspaces: Vec<Halfspace> = self
            .rays
            .iter()
            .zip(class)
            .map(|(v, d)| Halfspace {
                normal: v.iter().map(|&x| Rational::from_integer((-x).into())).collect(),
                offset: d.clone(),
            })
            .collect();
        Polytope::from_halfspaces(self.dim(), &halfspaces)
    }

    pub fn h0(&self, e: &[i64]) -> Result<u64> {
        self.check(e)?;
        let class: Vec<Rational> = e.iter().map(|&x| Rational::from_integer(x.into())).collect();
        match self.divisor_polytope(&class)? {
            Some(p) => p.count_lattice_points(1),
            None => Ok(0),
        }
    }

    /// `χ(O(E))` by Riemann–Roch.
    pub fn euler_characteristic(&self, e: &[i64]) -> Result<i64> {
        self.check(e)?;
        let er: Vec<Rational> = e.iter().map(|&x| Rational::from_integer(x.into())).collect();
        if self.dim() == 1 {
            return Ok(e.iter().sum::<i64>() + 1);
        }
        let k: Vec<Rational> = self.canonical().iter().map(|&x| Rational::from_integer(x.into())).collect();
        let twice = self.pair(&er, &er) - self.pair(&er, &k);
        let chi = Rational::from_integer(1.into()) + twice / Rational::from_integer(2.into());
        chi.to_integer().to_i64().ok_or(CoreError::Overflow)
    }

    /// `h^q(O(E))` for an integral torus-invariant divisor.
    pub fn hq(&self, e: &[i64], q: usize) -> Result<u64> {
        self.check(e)?;
        let dual: Vec<i64> = self.canonical().iter().zip(e).map(|(k, x)| k - x).collect();
        match (self.dim(), q) {
            (_, 0) => self.h0(e),
            (1, 1) => self.h0(&dual),
            (2, 2) => self.h0(&dual),
            (2, 1) => {
                let h0 = i64::try_from(self.h0(e)?).map_err(|_| CoreError::Overflow)?;
                let h2 = i64::try_from(self.h0(&dual)?).map_err(|_| CoreError::Overflow)?;
                let h1 = h0 + h2 - self.euler_characteristic(e)?;
                u64::try_from(h1).map_err(|_| {
                    CoreError::InvalidArgument(format!("negative h1 = {h1}: inconsistent Riemann–Roch data"))
                })
            }
            (n, q) => Err(CoreError::InvalidArgument(format!(
                "cohomological degree {q} on a variety of dimension {n}"
            ))),
        }
    }

    fn check(&self, e: &[i64]) -> Result<()> {
        if e.len() == self.rays.len() {
            Ok(())
        } else {
            Err(CoreError::DimensionMismatch {
                expected: self.rays.len(),
                found: e.len(),
            })
        }
    }
}

fn surface_intersections(rays: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = rays.len();
    let mut m = vec![vec![0i64; r]; r];
    for i in 0..r {
        let prev = &rays[(i + r - 1) % r];
        let next = &rays[(i + 1) % r];
        let sum = [prev[0] + next[0], prev[1] + next[1]];
        let v = &rays[i];
        // v_{i-1} + v_{i+1} = b_i v_i and D_i² = −b_i
        let b = if v[0] != 0 { sum[0] / v[0] } else { sum[1] / v[1] };
        m[i][i] = -b;
        m[i][(i + 1) % r] = 1;
        m[(i + 1) % r][i] = 1;
    }
    m
}

/// `D = Σ a_k B_k` with rational `a_k` and integral torus-invariant `B_k`;
/// the decomposition determines the round-up `⌈mD⌉ = Σ ⌈m a_k⌉ B_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealDivisor {
    terms: Vec<(Rational, Vec<i64>)>,
    rank: usize,
}

impl RealDivisor {
    pub fn new(rank: usize, terms: Vec<(Rational, Vec<i64>)>) -> Result<Self> {
        if let Some((_, b)) = terms.iter().find(|(_, b)| b.len() != rank) {
            return Err(CoreError::DimensionMismatch {
                expected: rank,
                found: b.len(),
            });
        }
        Ok(RealDivisor { terms, rank })
    }

    pub fn integral(e: Vec<i64>) -> Self {
        RealDivisor {
            rank: e.len(),
            terms: vec![(Rational::from_integer(1.into()), e)],
        }
    }

    pub fn zero(rank: usize) -> Self {
        RealDivisor {
            rank,
            terms: Vec::new(),
        }
    }

    pub fn terms(&self) -> &[(Rational, Vec<i64>)] {
        &self.terms
    }

    pub fn class(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rank];
        for (a, b) in &self.terms {
            for (o, &x) in out.iter_mut().zip(b) {
                *o += a * Rational::from_integer(x.into());
            }
        }
        out
    }

    pub fn round_up(&self, m: u64) -> Result<Vec<i64>> {
        let mut out = vec![0i64; self.rank];
        let mr = Rational::from_integer(m.into());
        for (a, b) in &self.terms {
            let c = ceil_int(&(a * &mr)).to_i64().ok_or(CoreError::Overflow)?;
            for (o, &x) in out.iter_mut().zip(b) {
                *o = c
                    .checked_mul(x)
                    .and_then(|t| o.checked_add(t))
                    .ok_or(CoreError::Overflow)?;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        RealDivisor {
            rank: self.rank,
            terms: self.terms.iter().map(|(a, b)| (a * factor, b.clone())).collect(),
        }
    }

    pub fn plus(&self, other: &RealDivisor) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        RealDivisor { rank: self.rank, terms }
    }

    pub fn minus(&self, other: &RealDivisor) -> Self {
        self.plus(&other.scaled(&Rational::from_integer((-1).into())))
    }
}

pub fn h0(x: &ToricVariety, d: &RealDivisor, m: u64) -> Result<u64> {
    x.h0(&d.round_up(m)?)
}

pub fn hq(x: &ToricVariety, d: &RealDivisor, m: u64, q: usize) -> Result<u64> {
    x.hq(&d.round_up(m)?, q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub m: u64,
    pub q: usize,
    pub h: u64,
    /// `h · n! / mⁿ`.
    pub normalized: Rational,
}

pub fn cohomology_table(x: &ToricVariety, d: &RealDivisor, schedule: &[u64], exec: Execution) -> Result<Vec<TableRow>> {
    let cells: Vec<(u64, usize)> = schedule
        .iter()
        .flat_map(|&m| (0..=x.dim()).map(move |q| (m, q)))
        .collect();
    par::map(&cells, exec, |&(m, q)| {
        let h = hq(x, d, m, q)?;
        Ok(TableRow {
            m,
            q,
            h,
            normalized: normalize(h, m, x.dim()),
        })
    })
    .into_iter()
    .collect()
}

fn normalize(h: u64, m: u64, n: usize) -> Rational {
    Rational::new(BigInt::from(h) * factorial(n), BigInt::from(m).pow(n as u32))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticSeries {
    pub q: usize,
    pub rows: Vec<(u64, u64, Rational)>,
    pub estimate: Rational,
    /// `n!·vol(P_D)` when `q = 0` and `D` is nef.
    pub exact: Option<Rational>,
}

pub fn asymptotic_hq(
    x: &ToricVariety,
    d: &RealDivisor,
    q: usize,
    schedule: &[u64],
    exec: Execution,
) -> Result<AsymptoticSeries> {
    if schedule.is_empty() {
        return Err(CoreError::Empty("empty schedule".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CoreError::InvalidArgument("schedule must be increasing".into()));
    }
    let rows = par::map(schedule, exec, |&m| {
        let h = hq(x, d, m, q)?;
        Ok((m, h, normalize(h, m, x.dim())))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let estimate = rows.last().expect("nonempty").2.clone();
    let class = d.class();
    let exact = if q == 0 && x.is_nef(&class) {
        Some(match x.divisor_polytope(&class)? {
            Some(p) => p.normalized_volume(),
            None => Rational::zero(),
        })
    } else {
        None
    };
    Ok(AsymptoticSeries {
        q,
        rows,
        estimate,
        exact,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseRow {
    pub m: u64,
    pub h: u64,
    pub main: Rational,
    pub bound: Rational,
    pub margin: Rational,
    pub fitted: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseReport {
    pub q: usize,
    /// `binom(n,q)·D^{n−q}·E^q / n!`.
    pub leading: Rational,
    pub constant: Rational,
    pub rows: Vec<MorseRow>,
    pub passed: bool,
}

/// Checks `h^q(m(D − E)) ≤ binom(n,q)·D^{n−q}·E^q·mⁿ/n! + C·m^{n−1}` with `C`
/// fitted on the first half of the schedule and verified on the second.
pub fn morse_check(
    x: &ToricVariety,
    d: &RealDivisor,
    e: &RealDivisor,
    q: usize,
    schedule: &[u64],
    exec: Execution,
) -> Result<MorseReport> {
    let n = x.dim();
    if q > n {
        return Err(CoreError::InvalidArgument(format!("q = {q} exceeds dimension {n}")));
    }
    if schedule.len() < 2 {
        return Err(CoreError::InvalidArgument("need at least two schedule entries".into()));
    }
    let (dc, ec) = (d.class(), e.class());
    if !x.is_nef(&dc) || !x.is_nef(&ec) {
        return Err(CoreError::InvalidArgument("Morse inequalities need nef divisors".into()));
    }
    let leading = Rational::from_integer(binomial(n, q)) * x.intersect(&dc, &ec, q)
        / Rational::from_integer(factorial(n));
    let f = d.minus(e);
    let values = par::map(schedule, exec, |&m| hq(x, &f, m, q))
        .into_iter()
        .collect::<Result<Vec<u64>>>()?;
    let split = schedule.len().div_ceil(2);
    let power = |m: u64, k: usize| Rational::from_integer(BigInt::from(m).pow(k as u32));
    let main = |m: u64| &leading * power(m, n);
    let mut constant = Rational::zero();
    for (&m, &h) in schedule[..split].iter().zip(&values) {
        let excess = (Rational::from_integer(h.into()) - main(m)) / power(m, n - 1);
        constant = constant.max(excess);
    }
    let rows: Vec<MorseRow> = schedule
        .iter()
        .zip(&values)
        .enumerate()
        .map(|(i, (&m, &h))| {
            let bound = main(m) + &constant * power(m, n - 1);
            let margin = &bound - Rational::from_integer(h.into());
            MorseRow {
                m,
                h,
                main: main(m),
                holds: !margin.is_negative(),
                bound,
                margin,
                fitted: i < split,
            }
        })
        .collect();
    let passed = rows.iter().all(|r| r.holds);
    Ok(MorseReport {
        q,
        leading,
        constant,
        rows,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationRow {
    pub m: Vec<u64>,
    pub p: Vec<u64>,
    /// `|h^q(F(m,p)) − h^q(F(0,p))|`.
    pub lhs: u64,
    /// `|m|·(|m| + |p|)^{n−1}`.
    pub scale: u64,
    pub fitted: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationReport {
    pub q: usize,
    pub constant: Rational,
    pub rows: Vec<PerturbationRow>,
    pub passed: bool,
}

/// Scans `|h^q(F(m,p)) − h^q(F(0,p))| ≤ C·|m|(|m|+|p|)^{n−1}` for
/// `F(m,p) = Σ m_i M_i + Σ p_j P_j` over the grid `1 ≤ m_i, p_j ≤ max`
/// (plus the trivial `m = 0` rows).
pub fn perturbation_scan(
    x: &ToricVariety,
    twists: &[RealDivisor],
    bases: &[RealDivisor],
    q: usize,
    max: u64,
    exec: Execution,
) -> Result<PerturbationReport> {
    if twists.is_empty() || bases.is_empty() || max == 0 {
        return Err(CoreError::Empty("perturbation scan needs divisors and a grid".into()));
    }
    let n = x.dim();
    let grid = |k: usize, lo: u64| -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = vec![Vec::new()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (lo..=max).map(move |i| {
                        let mut w = v.clone();
                        w.push(i);
                        w
                    })
                })
                .collect();
        }
        out
    };
    let ps = grid(bases.len(), 1);
    let mut cells: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    for p in &ps {
        cells.push((vec![0; twists.len()], p.clone()));
        for m in grid(twists.len(), 1) {
            cells.push((m, p.clone()));
        }
    }
    let combine = |m: &[u64], p: &[u64]| -> Result<Vec<i64>> {
        let mut total = vec![0i64; x.rays().len()];
        for (k, d) in m.iter().zip(twists).chain(p.iter().zip(bases)) {
            for (t, v) in total.iter_mut().zip(d.round_up(*k)?) {
                *t = t.checked_add(v).ok_or(CoreError::Overflow)?;
            }
        }
        Ok(total)
    };
    let base_values = par::map(&ps, exec, |p| x.hq(&combine(&vec![0; twists.len()], p)?, q))
        .into_iter()
        .collect::<Result<Vec<u64>>>()?;
    let mut rows = par::map(&cells, exec, |(m, p)| -> Result<PerturbationRow> {
        let h = x.hq(&combine(m, p)?, q)?;
        let base = base_values[ps.iter().position(|b| b == p).expect("grid member")];
        let (mm, pp): (u64, u64) = (m.iter().sum(), p.iter().sum());
        Ok(PerturbationRow {
            m: m.clone(),
            p: p.clone(),
            lhs: h.abs_diff(base),
            scale: mm * (mm + pp).pow(n as u32 - 1),
            fitted: false,
            holds: false,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.m.iter().sum::<u64>() + r.p.iter().sum::<u64>(), r.m.clone(), r.p.clone()));
    let split = rows.len().div_ceil(2);
    let mut constant = Rational::zero();
    for r in &mut rows[..split] {
        r.fitted = true;
        if r.scale > 0 {
            constant = constant.max(Rational::new(r.lhs.into(), r.scale.into()));
        }
    }
    for r in &mut rows {
        r.holds = if r.scale == 0 {
            r.lhs == 0
        } else {
            Rational::from_integer(r.lhs.into()) <= &constant * Rational::from_integer(r.scale.into())
        };
    }
    let passed = rows.iter().all(|r| r.holds);
    Ok(PerturbationReport {
        q,
        constant,
        rows,
        passed,
    })
}
