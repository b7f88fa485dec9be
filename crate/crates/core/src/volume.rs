//! Non-archimedean volumes as limits of lattice lengths.
//!
//! For metrics `ψ₁, ψ₂` on `P`, the relative length of the spaces of small
//! sections of `L^m` is
//! `Σ_{u ∈ mP ∩ ℤⁿ} (⌈m ψ₂*(u/m)⌉ − ⌈m ψ₁*(u/m)⌉)`, and `n!·length / m^{n+1}`
//! converges to the volume `vol(ψ₁, ψ₂)`. The normalization uses the ambient
//! dimension, so lower-dimensional polytopes have volume zero.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::measure::{energy_with, roof_energy};
use crate::metric::PLMetric;
use crate::par::{self, Execution};
use crate::polytope::Point;
use crate::rational::{ceil_int, factorial, Rational};
use crate::roof::RoofFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthRow {
    pub m: u64,
    pub length: BigInt,
    pub lattice_points: u64,
    pub normalized: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    /// Both metrics semipositive: the energy of the pair.
    Energy,
    /// Otherwise: the energy of the two envelopes.
    EnvelopeEnergy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NavolResult {
    pub rows: Vec<LengthRow>,
    /// Normalized length at the largest `m`.
    pub estimate: Rational,
    /// `a` in `a + b/m` through the two largest schedule entries.
    pub extrapolated: Option<Rational>,
    pub limit: Option<(Rational, LimitKind)>,
}

pub fn hhat0_length(psi1: &PLMetric, psi2: &PLMetric, m: u64) -> Result<BigInt> {
    hhat0_length_with(psi1, psi2, m, Execution::default())
}

pub fn hhat0_length_with(psi1: &PLMetric, psi2: &PLMetric, m: u64, exec: Execution) -> Result<BigInt> {
    Ok(length_row(&psi1.legendre(), &psi2.legendre(), m, exec)?.length)
}

/// `Σ_{u ∈ mP ∩ ℤⁿ} (⌈m ϑ₂(u/m)⌉ − ⌈m ϑ₁(u/m)⌉)` for two roof functions on
/// the same polytope.
pub fn roof_length(roof1: &RoofFunction, roof2: &RoofFunction, m: u64, exec: Execution) -> Result<BigInt> {
    Ok(length_row(roof1, roof2, m, exec)?.length)
}

fn length_row(roof1: &RoofFunction, roof2: &RoofFunction, m: u64, exec: Execution) -> Result<LengthRow> {
    if roof1.polytope() != roof2.polytope() {
        return Err(CoreError::PolytopeMismatch);
    }
    if m == 0 {
        return Err(CoreError::InvalidArgument("m must be positive".into()));
    }
    let points = roof1.polytope().lattice_points(m)?;
    let length = match (roof1.compile(), roof2.compile()) {
        (Some(c1), Some(c2)) => par::sum_i128(&points, exec, |x| {
            c2.ceil_scaled(x, m)?.checked_sub(c1.ceil_scaled(x, m)?)
        })
        .map(BigInt::from),
        _ => None,
    };
    let length = match length {
        Some(l) => l,
        None => exact_length(roof1, roof2, &points, m, exec),
    };
    let d = roof1.polytope().dim();
    let normalized = Rational::new(length.clone() * factorial(d), BigInt::from(m).pow(d as u32 + 1));
    Ok(LengthRow {
        m,
        length,
        lattice_points: points.len() as u64,
        normalized,
    })
}

fn exact_length(roof1: &RoofFunction, roof2: &RoofFunction, points: &[Vec<i64>], m: u64, exec: Execution) -> BigInt {
    let mr = Rational::from_integer(BigInt::from(m));
    par::map(points, exec, |x| {
        let u = Point(x.iter().map(|&c| Rational::from_integer(c.into()) / &mr).collect());
        ceil_int(&(roof2.eval(&u) * &mr)) - ceil_int(&(roof1.eval(&u) * &mr))
    })
    .into_iter()
    .sum()
}

/// The length series on a schedule, with the exact limit when available.
pub fn navol(psi1: &PLMetric, psi2: &PLMetric, schedule: &[u64]) -> Result<NavolResult> {
    navol_with(psi1, psi2, schedule, Execution::default())
}

pub fn navol_with(psi1: &PLMetric, psi2: &PLMetric, schedule: &[u64], exec: Execution) -> Result<NavolResult> {
    if schedule.is_empty() {
        return Err(CoreError::Empty("empty schedule".into()));
    }
    let (r1, r2) = (psi1.legendre(), psi2.legendre());
    let rows = schedule
        .iter()
        .map(|&m| length_row(&r1, &r2, m, exec))
        .collect::<Result<Vec<_>>>()?;
    let last = rows.last().expect("nonempty schedule");
    let estimate = last.normalized.clone();
    let extrapolated = (rows.len() >= 2).then(|| {
        let a = &rows[rows.len() - 2];
        richardson(a.m, &a.normalized, last.m, &last.normalized)
    });
    Ok(NavolResult {
        estimate,
        extrapolated: extrapolated.flatten(),
        limit: exact_limit(psi1, psi2, exec)?,
        rows,
    })
}

/// Exact volume of the pair: the energy when both are semipositive and the
/// energy of the envelopes otherwise. `None` for lower-dimensional polytopes.
pub fn exact_limit(psi1: &PLMetric, psi2: &PLMetric, exec: Execution) -> Result<Option<(Rational, LimitKind)>> {
    if psi1.polytope() != psi2.polytope() {
        return Err(CoreError::PolytopeMismatch);
    }
    if !psi1.polytope().is_full_dimensional() {
        return Ok(None);
    }
    if psi1.is_semipositive()? && psi2.is_semipositive()? {
        Ok(Some((energy_with(psi1, psi2, exec)?, LimitKind::Energy)))
    } else {
        Ok(Some((roof_energy(psi1, psi2)?, LimitKind::EnvelopeEnergy)))
    }
}

/// Fits `v = a + b/m` through two points and returns `a`.
fn richardson(m1: u64, v1: &Rational, m2: u64, v2: &Rational) -> Option<Rational> {
    if m1 == m2 {
        return None;
    }
    let inv = |m: u64| Rational::new(1.into(), m.into());
    let b = (v1 - v2) / (inv(m1) - inv(m2));
    Some(v2 - b * inv(m2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzRow {
    pub m: u64,
    /// `|normalized(ψ₁', ψ₂) − normalized(ψ₁, ψ₂)|`.
    pub difference: Rational,
    /// `n!·N_m·⌈m d⌉ / m^{n+1}` with `N_m` the lattice point count.
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzReport {
    pub distance: Rational,
    pub normalized_volume: Rational,
    pub limit_difference: Rational,
    pub limit_bound: Rational,
    pub rows: Vec<LipschitzRow>,
    pub passed: bool,
}

/// Checks `|vol(ψ₁', ψ₂) − vol(ψ₁, ψ₂)| ≤ n!·vol(P)·d(ψ₁, ψ₁')` in the limit and
/// its finite-`m` analogue along the schedule.
pub fn lipschitz_check(
    psi1: &PLMetric,
    psi1_moved: &PLMetric,
    psi2: &PLMetric,
    schedule: &[u64],
    exec: Execution,
) -> Result<LipschitzReport> {
    let distance = psi1.distance(psi1_moved)?;
    let poly = psi1.polytope();
    let d = poly.dim();
    let nvol = poly.normalized_volume();
    let (r1, r1m, r2) = (psi1.legendre(), psi1_moved.legendre(), psi2.legendre());
    let mut rows = Vec::new();
    for &m in schedule {
        let a = length_row(&r1, &r2, m, exec)?;
        let b = length_row(&r1m, &r2, m, exec)?;
        let difference = (&b.normalized - &a.normalized).abs();
        let steps = ceil_int(&(&distance * Rational::from_integer(m.into())));
        let bound = Rational::new(
            factorial(d) * BigInt::from(a.lattice_points) * steps,
            BigInt::from(m).pow(d as u32 + 1),
        );
        rows.push(LipschitzRow {
            m,
            holds: difference <= bound,
            difference,
            bound,
        });
    }
    let (limit_difference, limit_bound) = if poly.is_full_dimensional() {
        let diff = (roof_energy(psi1_moved, psi2)? - roof_energy(psi1, psi2)?).abs();
        (diff, &nvol * &distance)
    } else {
        (Rational::zero(), Rational::zero())
    };
    let passed = limit_difference <= limit_bound && rows.iter().all(|r| r.holds);
    Ok(LipschitzReport {
        distance,
        normalized_volume: nvol,
        limit_difference,
        limit_bound,
        rows,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::{interval, tent};
    use crate::rational::{int, rat};

    #[test]
    fn tent_lengths_are_quarter_squares() {
        let canonical = PLMetric::canonical(interval()).unwrap();
        let psi = tent();
        for m in 1..=12u64 {
            let expected = BigInt::from(m * m / 4);
            for exec in [Execution::Sequential, Execution::Parallel] {
                assert_eq!(hhat0_length_with(&psi, &canonical, m, exec).unwrap(), expected);
            }
        }
        let res = navol(&psi, &canonical, &[2, 3, 4]).unwrap();
        let normalized: Vec<Rational> = res.rows.iter().map(|r| r.normalized.clone()).collect();
        assert_eq!(normalized, vec![rat(1, 4), rat(2, 9), rat(1, 4)]);
        assert_eq!(res.limit, Some((rat(1, 4), LimitKind::Energy)));
    }

    #[test]
    fn richardson_recovers_affine_in_inverse_m() {
        // v = 2 + 3/m
        let v = |m: i64| int(2) + rat(3, m);
        assert_eq!(richardson(4, &v(4), 10, &v(10)), Some(int(2)));
    }

    #[test]
    fn lipschitz_for_constant_shift() {
        let canonical = PLMetric::canonical(interval()).unwrap();
        let psi = tent();
        let moved = psi.add_constant(&rat(1, 3));
        let report = lipschitz_check(&psi, &moved, &canonical, &[1, 2, 5, 9], Execution::Sequential).unwrap();
        assert_eq!(report.distance, rat(1, 3));
        assert_eq!(report.limit_difference, rat(1, 3));
        assert!(report.passed);
    }
}
