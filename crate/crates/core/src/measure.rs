//! Finite atomic measures with exact rational masses, and the Monge–Ampère
//! type measures of semipositive PL metrics.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::metric::{PLFunction, PLMetric};
use crate::par::{self, Execution};
use crate::polytope::{combinations, Point};
use crate::rational::{factorial, Rational};

/// Atoms `Σ m_k δ_{x_k}` keyed by an ordered support type; zero masses are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure<K: Ord> {
    atoms: BTreeMap<K, Rational>,
    total: Rational,
}

impl<K: Ord> Default for DiscreteMeasure<K> {
    fn default() -> Self {
        DiscreteMeasure {
            atoms: BTreeMap::new(),
            total: Rational::zero(),
        }
    }
}

impl<K: Ord + Clone> DiscreteMeasure<K> {
    pub fn new(atoms: impl IntoIterator<Item = (K, Rational)>) -> Self {
        let mut out = DiscreteMeasure::default();
        for (k, m) in atoms {
            out.add_atom(k, m);
        }
        out
    }

    pub fn add_atom(&mut self, at: K, mass: Rational) {
        if mass.is_zero() {
            return;
        }
        self.total += &mass;
        let entry = self.atoms.entry(at.clone()).or_insert_with(Rational::zero);
        *entry += mass;
        if entry.is_zero() {
            self.atoms.remove(&at);
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> &Rational {
        &self.total
    }

    pub fn mass_at(&self, at: &K) -> Rational {
        self.atoms.get(at).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_positive(&self) -> bool {
        self.atoms.values().all(|m| m.is_positive())
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        DiscreteMeasure::new(self.atoms.iter().map(|(k, m)| (k.clone(), m * factor)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, m) in &other.atoms {
            out.add_atom(k.clone(), m.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&Rational::from_integer((-1).into())))
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, f: impl Fn(&K) -> Rational) -> Rational {
        self.atoms.iter().map(|(k, m)| f(k) * m).sum()
    }
}

/// `MA(ψ) = Σ_k n!·vol(σ_k) δ_{a_k}` over the cells `σ_k` of the roof, where
/// `a_k` is the gradient of the roof on `σ_k` (a vertex of the complex of ψ).
pub fn monge_ampere(psi: &PLMetric) -> Result<DiscreteMeasure<Point>> {
    if !psi.polytope().is_full_dimensional() {
        return Err(CoreError::LowerDimensional);
    }
    if !psi.is_semipositive()? {
        return Err(CoreError::NotSemipositive);
    }
    let roof = psi.legendre();
    Ok(DiscreteMeasure::new(
        roof.cells()?
            .into_iter()
            .map(|(piece, cell)| (piece.slope, cell.normalized_volume())),
    ))
}

/// `MA(ψ_1, …, ψ_n)` by polarization:
/// `(1/n!) Σ_{S ≠ ∅} (−1)^{n−|S|} MA(Σ_{i∈S} ψ_i)`.
pub fn mixed_monge_ampere(metrics: &[&PLMetric]) -> Result<DiscreteMeasure<Point>> {
    mixed_monge_ampere_with(metrics, Execution::default())
}

pub fn mixed_monge_ampere_with(metrics: &[&PLMetric], exec: Execution) -> Result<DiscreteMeasure<Point>> {
    let n = metrics.first().ok_or_else(|| CoreError::Empty("no metrics".into()))?.dim();
    if metrics.len() != n {
        return Err(CoreError::InvalidArgument(format!(
            "mixed Monge–Ampère in dimension {n} takes {n} metrics, got {}",
            metrics.len()
        )));
    }
    let subsets: Vec<Vec<usize>> = (1..=n).flat_map(|k| combinations(n, k)).collect();
    let parts = par::map(&subsets, exec, |s| -> Result<(usize, DiscreteMeasure<Point>)> {
        let mut sum = metrics[s[0]].clone();
        for &i in &s[1..] {
            sum = sum.tensor(metrics[i])?;
        }
        Ok((s.len(), monge_ampere(&sum)?))
    });
    let nf = Rational::from_integer(factorial(n));
    let mut out = DiscreteMeasure::default();
    for part in parts {
        let (size, ma) = part?;
        let sign = if (n - size) % 2 == 0 { 1 } else { -1 };
        out = out.plus(&ma.scaled(&(Rational::from_integer(sign.into()) / &nf)));
    }
    Ok(out)
}

/// `∫ f dμ` for a PL function and an atomic measure on ℝⁿ.
pub fn integrate(f: &PLFunction, mu: &DiscreteMeasure<Point>) -> Rational {
    mu.integrate(|x| f.eval(x))
}

/// Energy `E(ψ₁, ψ₂) = (1/(n+1)) Σ_j ∫ (ψ₁ − ψ₂) dMA(ψ₁^{⊗j}, ψ₂^{⊗(n−j)})`
/// of two semipositive metrics on the same polytope.
pub fn energy(psi1: &PLMetric, psi2: &PLMetric) -> Result<Rational> {
    energy_with(psi1, psi2, Execution::default())
}

pub fn energy_with(psi1: &PLMetric, psi2: &PLMetric, exec: Execution) -> Result<Rational> {
    if psi1.polytope() != psi2.polytope() {
        return Err(CoreError::PolytopeMismatch);
    }
    for psi in [psi1, psi2] {
        if !psi.is_semipositive()? {
            return Err(CoreError::NotSemipositive);
        }
    }
    let n = psi1.dim();
    let f = PLFunction::difference(psi1.clone(), psi2.clone())?;
    let mut total = Rational::zero();
    for j in 0..=n {
        let mut list: Vec<&PLMetric> = vec![psi1; j];
        list.extend(std::iter::repeat_n(psi2, n - j));
        total += integrate(&f, &mixed_monge_ampere_with(&list, exec)?);
    }
    Ok(total / Rational::from_integer((n as i64 + 1).into()))
}

/// `n! ∫_P (ψ₂* − ψ₁*)`, which equals the energy of the envelopes; defined for
/// arbitrary metrics on a full-dimensional polytope.
pub fn roof_energy(psi1: &PLMetric, psi2: &PLMetric) -> Result<Rational> {
    if psi1.polytope() != psi2.polytope() {
        return Err(CoreError::PolytopeMismatch);
    }
    let diff = psi2.legendre().integral()? - psi1.legendre().integral()?;
    Ok(diff * Rational::from_integer(factorial(psi1.dim())))
}

/// `∫ (ψ − ψ**) dMA(ψ**)`; the envelope only moves where its measure vanishes,
/// so this is zero for every metric.
pub fn orthogonality_residual(psi: &PLMetric) -> Result<Rational> {
    let env = psi.envelope()?;
    let f = PLFunction::difference(psi.clone(), env.clone())?;
    Ok(integrate(&f, &monge_ampere(&env)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::{interval, tent};
    use crate::rational::{int, rat};

    #[test]
    fn tent_measure_and_energy() {
        let psi = tent();
        let ma = monge_ampere(&psi).unwrap();
        assert_eq!(ma.mass_at(&Point::from_ints(&[-1])), rat(1, 2));
        assert_eq!(ma.mass_at(&Point::from_ints(&[1])), rat(1, 2));
        assert_eq!(ma.total_mass(), &int(1));
        let canonical = PLMetric::canonical(interval()).unwrap();
        let canonical_ma = monge_ampere(&canonical).unwrap();
        assert_eq!(canonical_ma.mass_at(&Point::from_ints(&[0])), int(1));
        assert_eq!(energy(&psi, &canonical).unwrap(), rat(1, 4));
        assert_eq!(roof_energy(&psi, &canonical).unwrap(), rat(1, 4));
    }

    #[test]
    fn mixed_measure_of_identical_metrics_is_the_measure() {
        let psi = tent();
        let mixed = mixed_monge_ampere(&[&psi]).unwrap();
        assert_eq!(mixed, monge_ampere(&psi).unwrap());
    }

    #[test]
    fn measure_arithmetic() {
        let mut mu = DiscreteMeasure::new([(1u32, int(2)), (2, rat(1, 2))]);
        mu.add_atom(1, int(-2));
        assert_eq!(mu.len(), 1);
        assert_eq!(mu.total_mass(), &rat(1, 2));
        let nu = mu.minus(&mu);
        assert!(nu.is_empty());
        assert_eq!(mu.integrate(|&k| int(k as i64)), int(1));
    }
}
