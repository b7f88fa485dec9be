//! End-to-end verification of the headline identities on concrete instances.
//!
//! Each check produces a [`VerificationReport`] holding exact rows; whether it
//! passed can be recomputed from those rows alone with
//! [`VerificationReport::recheck`].

use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::fit::fit_power_constant;
use crate::measure::{energy_with, integrate, monge_ampere, orthogonality_residual, roof_energy};
use crate::metric::{PLFunction, PLMetric};
use crate::par::Execution;
use crate::rational::Rational;
use crate::volume::{hhat0_length_with, navol_with};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    VolIsEnergy,
    VolIsEnvelopeEnergy,
    Differentiability,
    Orthogonality,
    H0EnvelopeEquality,
}

impl Theorem {
    pub fn id(&self) -> &'static str {
        match self {
            Theorem::VolIsEnergy => "vol-is-energy",
            Theorem::VolIsEnvelopeEnergy => "vol-is-envelope-energy",
            Theorem::Differentiability => "differentiability",
            Theorem::Orthogonality => "orthogonality",
            Theorem::H0EnvelopeEquality => "h0-envelope-equality",
        }
    }
}

/// How the residual column is judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// Every residual is exactly zero.
    ExactZero,
    /// `|r| ≤ C/m` with `C = max m|r|` over the fit rows.
    InverseM,
    /// `|r| ≤ C·ε²` with `C = max |r|/ε²` over the fit rows.
    EpsilonSquared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Fit,
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRow {
    /// `m` or `ε`.
    pub x: Rational,
    pub value: Rational,
    pub reference: Rational,
    pub residual: Rational,
    pub role: Role,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub instance: String,
    pub seed: Option<u64>,
    pub criterion: Criterion,
    /// The exact quantity the series is compared against (energy, derivative).
    pub target: Option<Rational>,
    pub rows: Vec<SeriesRow>,
    pub constant: Option<Rational>,
    pub passed: bool,
    pub runtime: Duration,
}

impl VerificationReport {
    fn finish(
        theorem: Theorem,
        instance: &str,
        criterion: Criterion,
        target: Option<Rational>,
        rows: Vec<SeriesRow>,
        started: Instant,
    ) -> Self {
        let mut report = VerificationReport {
            theorem,
            instance: instance.to_string(),
            seed: None,
            criterion,
            target,
            rows,
            constant: None,
            passed: false,
            runtime: Duration::ZERO,
        };
        let (passed, constant) = report.judge();
        report.passed = passed;
        report.constant = constant;
        report.runtime = started.elapsed();
        report
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn judge(&self) -> (bool, Option<Rational>) {
        let fit = || {
            self.rows
                .iter()
                .filter(|r| r.role == Role::Fit)
                .map(|r| (&r.x, &r.residual))
        };
        let verify = || self.rows.iter().filter(|r| r.role == Role::Verify);
        match self.criterion {
            Criterion::ExactZero => (self.rows.iter().all(|r| r.residual.is_zero()), None),
            Criterion::InverseM => {
                let c = fit_power_constant(fit(), 1);
                let ok = verify().all(|r| fit_power_constant([(&r.x, &r.residual)], 1) <= c);
                (ok, Some(c))
            }
            Criterion::EpsilonSquared => {
                let c = fit_power_constant(fit(), -2);
                let ok = verify().all(|r| fit_power_constant([(&r.x, &r.residual)], -2) <= c);
                (ok, Some(c))
            }
        }
    }

    /// Recomputes the verdict from the stored exact rows.
    pub fn recheck(&self) -> bool {
        let (passed, constant) = self.judge();
        passed && constant == self.constant
    }
}

fn rational(m: u64) -> Rational {
    Rational::from_integer(m.into())
}

/// First third of a schedule (at least one entry) for fitting, rest for verification.
pub fn split_schedule(schedule: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let k = schedule.len().div_ceil(3).max(1).min(schedule.len());
    (schedule[..k].to_vec(), schedule[k..].to_vec())
}

fn length_rows(
    psi1: &PLMetric,
    psi2: &PLMetric,
    fit: &[u64],
    verify: &[u64],
    target: &Rational,
    exec: Execution,
) -> Result<Vec<SeriesRow>> {
    let schedule: Vec<u64> = fit.iter().chain(verify).copied().collect();
    let series = navol_with(psi1, psi2, &schedule, exec)?;
    Ok(series
        .rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| SeriesRow {
            x: rational(row.m),
            residual: &row.normalized - target,
            value: row.normalized,
            reference: target.clone(),
            role: if i < fit.len() { Role::Fit } else { Role::Verify },
        })
        .collect())
}

/// `|n!·length(m)/m^{n+1} − E(ψ₁,ψ₂)| ≤ C/m` for semipositive `ψ₁, ψ₂`.
pub fn verify_vol_is_energy(
    instance: &str,
    psi1: &PLMetric,
    psi2: &PLMetric,
    fit: &[u64],
    verify: &[u64],
    exec: Execution,
) -> Result<VerificationReport> {
    let started = Instant::now();
    for psi in [psi1, psi2] {
        if !psi.is_semipositive()? {
            return Err(CoreError::NotSemipositive);
        }
    }
    let e = energy_with(psi1, psi2, exec)?;
    let rows = length_rows(psi1, psi2, fit, verify, &e, exec)?;
    Ok(VerificationReport::finish(
        Theorem::VolIsEnergy,
        instance,
        Criterion::InverseM,
        Some(e),
        rows,
        started,
    ))
}

/// The same `C/m` criterion against the energy of the two envelopes, for
/// arbitrary metrics.
pub fn verify_vol_is_envelope_energy(
    instance: &str,
    psi1: &PLMetric,
    psi2: &PLMetric,
    fit: &[u64],
    verify: &[u64],
    exec: Execution,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let e = energy_with(&psi1.envelope()?, &psi2.envelope()?, exec)?;
    let rows = length_rows(psi1, psi2, fit, verify, &e, exec)?;
    Ok(VerificationReport::finish(
        Theorem::VolIsEnvelopeEnergy,
        instance,
        Criterion::InverseM,
        Some(e),
        rows,
        started,
    ))
}

/// `|vol(ψ + εf, ψ) − ε∫f dMA(ψ)| ≤ C·ε²`, with `C` fitted on the `fit`
/// values of `ε` and checked on the `verify` values. Zero entries are skipped.
pub fn verify_differentiability(
    instance: &str,
    psi: &PLMetric,
    f: &PLFunction,
    fit: &[Rational],
    verify: &[Rational],
) -> Result<VerificationReport> {
    let started = Instant::now();
    if !psi.is_semipositive()? {
        return Err(CoreError::NotSemipositive);
    }
    let derivative = integrate(f, &monge_ampere(psi)?);
    let mut rows = Vec::new();
    for (eps, role) in fit
        .iter()
        .map(|e| (e, Role::Fit))
        .chain(verify.iter().map(|e| (e, Role::Verify)))
    {
        if eps.is_zero() {
            continue;
        }
        let moved = psi.perturb(eps, f)?;
        let vol = roof_energy(&moved, psi)?;
        let reference = eps * &derivative;
        rows.push(SeriesRow {
            x: eps.clone(),
            residual: &vol - &reference,
            value: vol,
            reference,
            role,
        });
    }
    Ok(VerificationReport::finish(
        Theorem::Differentiability,
        instance,
        Criterion::EpsilonSquared,
        Some(derivative),
        rows,
        started,
    ))
}

/// The largest half of an `ε` schedule for fitting, the rest for verification.
pub fn split_epsilons(schedule: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut sorted: Vec<Rational> = schedule.iter().filter(|e| !e.is_zero()).cloned().collect();
    sorted.sort_by(|a, b| b.cmp(a));
    let k = (sorted.len() / 2).max(1).min(sorted.len());
    let verify = sorted.split_off(k);
    (sorted, verify)
}

/// `∫ (ψ − P(ψ)) dMA(P(ψ)) = 0`.
pub fn verify_orthogonality(instance: &str, psi: &PLMetric) -> Result<VerificationReport> {
    let started = Instant::now();
    let residual = orthogonality_residual(psi)?;
    let rows = vec![SeriesRow {
        x: Rational::zero(),
        value: residual.clone(),
        reference: Rational::zero(),
        residual,
        role: Role::Verify,
    }];
    Ok(VerificationReport::finish(
        Theorem::Orthogonality,
        instance,
        Criterion::ExactZero,
        None,
        rows,
        started,
    ))
}

/// `length(ψ, P(ψ), m) = 0` for every `m` in the schedule.
pub fn verify_h0_envelope_equality(
    instance: &str,
    psi: &PLMetric,
    schedule: &[u64],
    exec: Execution,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let env = psi.envelope()?;
    let rows = schedule
        .iter()
        .map(|&m| {
            let len = Rational::from_integer(hhat0_length_with(psi, &env, m, exec)?);
            Ok(SeriesRow {
                x: rational(m),
                value: len.clone(),
                reference: Rational::zero(),
                residual: len,
                role: Role::Verify,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::finish(
        Theorem::H0EnvelopeEquality,
        instance,
        Criterion::ExactZero,
        None,
        rows,
        started,
    ))
}
