//! The subcommands, each turning an instance into an [`Outcome`].

use std::sync::Arc;
use std::time::Instant;

use navol_core::cohomology::{cohomology_table, morse_check, perturbation_scan, RealDivisor};
use navol_core::generate::{self, random_convex_metric, random_nonconvex_metric, random_pl_function, random_tree, random_vertex_measure};
use navol_core::harness::{
    split_epsilons, split_schedule, verify_differentiability, verify_h0_envelope_equality, verify_orthogonality,
    verify_vol_is_energy, verify_vol_is_envelope_energy,
};
use navol_core::measure::{energy_with, monge_ampere};
use navol_core::rational::{int, rat};
use navol_core::tree::{curvature, ma_solve, tree_laplacian, MetricTree, VertexId};
use navol_core::volume::{navol_with, LimitKind};
use navol_core::{par, CoreError, DiscreteMeasure, Execution, PLFunction, PLMetric, Polytope, Rational};
use num_traits::Zero;
use rand::Rng;

use crate::error::CliError;
use crate::instance::{Instance, Model, SurfaceModel, ToricModel, TreeModel};
use crate::output::{decimal, q, report_outcome, Outcome, Record, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Measure,
    Energy,
    Navol,
    Envelope,
    OrthoCheck,
    DiffCheck,
    H0Check,
    MaSolve,
    Cohomology,
    MorseCheck,
    PerturbScan,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Measure => "measure",
            Command::Energy => "energy",
            Command::Navol => "navol",
            Command::Envelope => "envelope",
            Command::OrthoCheck => "ortho-check",
            Command::DiffCheck => "diff-check",
            Command::H0Check => "h0-check",
            Command::MaSolve => "ma-solve",
            Command::Cohomology => "cohomology",
            Command::MorseCheck => "morse-check",
            Command::PerturbScan => "perturb-scan",
            Command::VerifyAll => "verify-all",
        }
    }
}

/// Flags shared by every command.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub schedule: Option<Vec<u64>>,
    pub seed: Option<u64>,
    pub metric: Option<String>,
}

const DEFAULT_SCHEDULE: std::ops::RangeInclusive<u64> = 1..=20;
const DEFAULT_MAX_VERTICES: usize = 20;

struct Ctx<'a> {
    inst: &'a Instance,
    opts: &'a Options,
    exec: Execution,
}

impl Ctx<'_> {
    fn name(&self) -> &str {
        &self.inst.file.name
    }

    fn schedule(&self) -> Vec<u64> {
        self.opts
            .schedule
            .clone()
            .or_else(|| self.inst.file.experiment.schedule.clone())
            .unwrap_or_else(|| DEFAULT_SCHEDULE.collect())
    }

    fn seed(&self) -> u64 {
        self.opts.seed.or(self.inst.file.experiment.seed).unwrap_or(0)
    }

    /// The explicit fit/verify split when both are given, else the first
    /// third of the schedule for fitting.
    fn split(&self) -> (Vec<u64>, Vec<u64>) {
        let ex = &self.inst.file.experiment;
        match (&ex.fit, &ex.verify, &self.opts.schedule) {
            (Some(fit), Some(verify), None) => (fit.clone(), verify.clone()),
            _ => split_schedule(&self.schedule()),
        }
    }

    fn epsilons(&self) -> Vec<Rational> {
        match &self.inst.file.experiment.epsilons {
            Some(eps) => eps.iter().map(|e| e.0.clone()).collect(),
            None => (1..=5).map(|k| rat(1, 1 << k)).collect(),
        }
    }
}

fn precondition(msg: impl Into<String>) -> CliError {
    CliError::Precondition(msg.into())
}

fn wrong_kind(command: Command, inst: &Instance) -> CliError {
    precondition(format!("{} does not apply to {:?} instances", command.name(), inst.file.kind))
}

/// Runs one command on one instance. `exec` controls the lattice sums inside.
pub fn run(command: Command, inst: &Instance, opts: &Options, exec: Execution) -> Result<Outcome, CliError> {
    let ctx = Ctx { inst, opts, exec };
    match (&inst.model, command) {
        (_, Command::VerifyAll) => verify_all(std::slice::from_ref(inst), opts, exec),
        (Model::Toric(m), Command::Measure) => measure(&ctx, m),
        (Model::Toric(m), Command::Energy) => energy(&ctx, m),
        (Model::Toric(m), Command::Navol) => navol(&ctx, m),
        (Model::Toric(m), Command::Envelope) => envelope(&ctx, m),
        (Model::Toric(m), Command::OrthoCheck) => run_jobs(ortho_jobs(&ctx, m, true), exec),
        (Model::Toric(m), Command::H0Check) => run_jobs(h0_jobs(&ctx, m, true), exec),
        (Model::Toric(m), Command::DiffCheck) => run_jobs(diff_jobs(&ctx, m, true)?, exec),
        (Model::Tree(m), Command::MaSolve) => run_jobs(tree_jobs(&ctx, m)?, exec),
        (Model::Surface(m), Command::Cohomology) => cohomology(&ctx, m),
        (Model::Surface(m), Command::MorseCheck) => run_jobs(morse_jobs(&ctx, m)?, exec),
        (Model::Surface(m), Command::PerturbScan) => perturb(&ctx, m),
        _ => Err(wrong_kind(command, inst)),
    }
}

/// `verify-all` over several instances, with all their checks run
/// concurrently and each check sequential inside.
pub fn verify_all(instances: &[Instance], opts: &Options, exec: Execution) -> Result<Outcome, CliError> {
    let ctxs: Vec<Ctx> = instances
        .iter()
        .map(|inst| Ctx {
            inst,
            opts,
            exec: Execution::Sequential,
        })
        .collect();
    let mut all: Vec<Job> = Vec::new();
    for ctx in &ctxs {
        all.extend(jobs(ctx)?);
    }
    run_jobs(all, exec)
}

type Job<'a> = Box<dyn Fn() -> Result<Outcome, CliError> + Send + Sync + 'a>;

fn run_jobs(jobs: Vec<Job>, exec: Execution) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for result in par::map(&jobs, exec, |job| job()) {
        out.extend(result?);
    }
    Ok(out)
}

fn jobs<'a>(ctx: &'a Ctx<'a>) -> Result<Vec<Job<'a>>, CliError> {
    let ex = &ctx.inst.file.experiment;
    let mut all = Vec::new();
    match &ctx.inst.model {
        Model::Toric(m) => {
            all.extend(vol_jobs(ctx, m));
            all.extend(ortho_jobs(ctx, m, false));
            all.extend(h0_jobs(ctx, m, false));
            if ex.direction.is_some() || ex.random_directions.is_some() {
                all.extend(diff_jobs(ctx, m, false)?);
            }
        }
        Model::Tree(m) => all.extend(tree_jobs(ctx, m)?),
        Model::Surface(m) => {
            if ex.morse.is_some() {
                all.extend(morse_jobs(ctx, m)?);
            }
            if ex.twists.is_some() {
                all.push(Box::new(move || perturb(ctx, m)) as Job);
            }
        }
    }
    Ok(all)
}

fn metric<'a>(ctx: &Ctx, m: &'a ToricModel, name: &str) -> Result<&'a PLMetric, CliError> {
    m.metrics
        .get(name)
        .ok_or_else(|| precondition(format!("instance {:?} has no metric {name:?}", ctx.name())))
}

/// `--metric`, then the experiment's `metric`, then the only metric.
fn chosen_metric<'a>(ctx: &Ctx, m: &'a ToricModel) -> Result<(&'a str, &'a PLMetric), CliError> {
    let name = ctx
        .opts
        .metric
        .as_deref()
        .or(ctx.inst.file.experiment.metric.as_deref())
        .or_else(|| (m.metrics.len() == 1).then(|| m.metrics.keys().next().expect("one metric").as_str()));
    let name = name.ok_or_else(|| precondition("several metrics; choose one with --metric"))?;
    let (key, psi) = m
        .metrics
        .get_key_value(name)
        .ok_or_else(|| precondition(format!("instance {:?} has no metric {name:?}", ctx.name())))?;
    Ok((key.as_str(), psi))
}

fn pair<'a>(ctx: &Ctx, m: &'a ToricModel) -> Result<(&'a PLMetric, &'a PLMetric, String), CliError> {
    let [a, b] = ctx
        .inst
        .file
        .experiment
        .pair
        .as_ref()
        .ok_or_else(|| precondition("the experiment declares no pair"))?;
    Ok((metric(ctx, m, a)?, metric(ctx, m, b)?, format!("{a}-{b}")))
}

fn measure(ctx: &Ctx, m: &ToricModel) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let (name, psi) = chosen_metric(ctx, m)?;
    let mu = monge_ampere(psi)?;
    let mut table = Table::new(format!("{}.measure.{name}", ctx.name()), &["point", "mass", "mass_decimal"]);
    let mut atoms = Vec::new();
    for (point, mass) in mu.atoms() {
        table.push(vec![point.to_string(), q(mass), decimal(mass)]);
        atoms.push(format!("{point} mass {}", q(mass)));
    }
    let record = Record::info("measure", &format!("{}.{name}", ctx.name()), atoms.join("; ")).with_runtime(started.elapsed());
    Ok(Outcome::single(record, Some(table)))
}

fn energy(ctx: &Ctx, m: &ToricModel) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let (a, b, label) = pair(ctx, m)?;
    let e = energy_with(a, b, ctx.exec)?;
    let mut table = Table::new(format!("{}.energy.{label}", ctx.name()), &["energy", "energy_decimal"]);
    table.push(vec![q(&e), decimal(&e)]);
    let record = Record {
        target: Some(q(&e)),
        ..Record::info("energy", &format!("{}.{label}", ctx.name()), format!("E = {}", q(&e)))
    }
    .with_runtime(started.elapsed());
    Ok(Outcome::single(record, Some(table)))
}

fn navol(ctx: &Ctx, m: &ToricModel) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let (a, b, label) = pair(ctx, m)?;
    let result = navol_with(a, b, &ctx.schedule(), ctx.exec)?;
    let mut table = Table::new(
        format!("{}.navol.{label}", ctx.name()),
        &["m", "length", "normalized", "normalized_decimal", "lattice_points"],
    );
    for row in &result.rows {
        table.push(vec![
            row.m.to_string(),
            row.length.to_string(),
            q(&row.normalized),
            decimal(&row.normalized),
            row.lattice_points.to_string(),
        ]);
    }
    let mut detail = format!("estimate {}", q(&result.estimate));
    if let Some(x) = &result.extrapolated {
        detail += &format!(", extrapolated {}", q(x));
    }
    let target = result.limit.as_ref().map(|(v, kind)| {
        let what = match kind {
            LimitKind::Energy => "energy",
            LimitKind::EnvelopeEnergy => "envelope energy",
        };
        detail += &format!(", limit {} ({what})", q(v));
        q(v)
    });
    let record = Record {
        target,
        ..Record::info("navol", &format!("{}.{label}", ctx.name()), detail)
    }
    .with_runtime(started.elapsed());
    Ok(Outcome::single(record, Some(table)))
}

fn envelope(ctx: &Ctx, m: &ToricModel) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let (name, psi) = chosen_metric(ctx, m)?;
    let env = psi.envelope()?;
    let mut table = Table::new(format!("{}.envelope.{name}", ctx.name()), &["slope", "constant"]);
    let pieces = env.convex_pieces()?;
    for p in &pieces {
        table.push(vec![p.slope.to_string(), q(&p.constant)]);
    }
    let detail = format!(
        "{} pieces, {}",
        pieces.len(),
        if &env == psi { "already semipositive" } else { "differs from the metric" }
    );
    let record = Record::info("envelope", &format!("{}.{name}", ctx.name()), detail).with_runtime(started.elapsed());
    Ok(Outcome::single(record, Some(table)))
}

/// The metrics a check runs over: the chosen one, or all of them.
fn targets<'a>(ctx: &Ctx, m: &'a ToricModel, single: bool) -> Vec<(&'a str, &'a PLMetric)> {
    if single && (ctx.opts.metric.is_some() || ctx.inst.file.experiment.metric.is_some()) {
        return chosen_metric(ctx, m).into_iter().collect();
    }
    m.metrics.iter().map(|(k, v)| (k.as_str(), v)).collect()
}

fn random_nonconvex(ctx: &Ctx, poly: &Arc<Polytope>) -> Vec<(u64, PLMetric)> {
    let count = ctx.inst.file.experiment.random_nonconvex.unwrap_or(0);
    (0..count as u64)
        .map(|i| {
            let seed = ctx.seed() + i;
            (seed, random_nonconvex_metric(poly, &mut generate::rng(seed), 0))
        })
        .collect()
}

fn ortho_jobs<'a>(ctx: &'a Ctx<'a>, m: &'a ToricModel, single: bool) -> Vec<Job<'a>> {
    let mut out: Vec<Job> = Vec::new();
    for (name, psi) in targets(ctx, m, single) {
        let label = format!("{}.{name}", ctx.name());
        out.push(Box::new(move || Ok(report_outcome(&verify_orthogonality(&label, psi)?))));
    }
    for (seed, psi) in random_nonconvex(ctx, &m.polytope) {
        let label = format!("{}.random", ctx.name());
        out.push(Box::new(move || Ok(report_outcome(&verify_orthogonality(&label, &psi)?.with_seed(seed)))));
    }
    out
}

fn h0_jobs<'a>(ctx: &'a Ctx<'a>, m: &'a ToricModel, single: bool) -> Vec<Job<'a>> {
    let schedule = ctx.schedule();
    let mut out: Vec<Job> = Vec::new();
    for (name, psi) in targets(ctx, m, single) {
        let label = format!("{}.{name}", ctx.name());
        let schedule = schedule.clone();
        out.push(Box::new(move || {
            Ok(report_outcome(&verify_h0_envelope_equality(&label, psi, &schedule, ctx.exec)?))
        }));
    }
    for (seed, psi) in random_nonconvex(ctx, &m.polytope) {
        let label = format!("{}.random", ctx.name());
        let schedule = schedule.clone();
        out.push(Box::new(move || {
            Ok(report_outcome(&verify_h0_envelope_equality(&label, &psi, &schedule, ctx.exec)?.with_seed(seed)))
        }));
    }
    out
}

fn vol_jobs<'a>(ctx: &'a Ctx<'a>, m: &'a ToricModel) -> Vec<Job<'a>> {
    let (fit, verify) = ctx.split();
    let mut out: Vec<Job> = Vec::new();
    if ctx.inst.file.experiment.pair.is_some() {
        let (fit, verify) = (fit.clone(), verify.clone());
        out.push(Box::new(move || {
            let (a, b, label) = pair(ctx, m)?;
            let label = format!("{}.{label}", ctx.name());
            let report = if a.is_semipositive()? && b.is_semipositive()? {
                verify_vol_is_energy(&label, a, b, &fit, &verify, ctx.exec)?
            } else {
                verify_vol_is_envelope_energy(&label, a, b, &fit, &verify, ctx.exec)?
            };
            Ok(report_outcome(&report))
        }));
    }
    let count = ctx.inst.file.experiment.random_convex_pairs.unwrap_or(0);
    for i in 0..count as u64 {
        let seed = ctx.seed() + i;
        let (fit, verify) = (fit.clone(), verify.clone());
        out.push(Box::new(move || {
            let mut rng = generate::rng(seed);
            let a = random_convex_metric(&m.polytope, &mut rng, 0);
            let b = random_convex_metric(&m.polytope, &mut rng, 0);
            let label = format!("{}.random", ctx.name());
            Ok(report_outcome(&verify_vol_is_energy(&label, &a, &b, &fit, &verify, ctx.exec)?.with_seed(seed)))
        }));
    }
    out
}

fn diff_jobs<'a>(ctx: &'a Ctx<'a>, m: &'a ToricModel, single: bool) -> Result<Vec<Job<'a>>, CliError> {
    let ex = &ctx.inst.file.experiment;
    let (fit, verify) = split_epsilons(&ctx.epsilons());
    let mut out: Vec<Job> = Vec::new();
    if let Some(direction) = &ex.direction {
        let (name, psi) = chosen_metric(ctx, m)?;
        let f = m.functions.get(direction).expect("validated at parse time");
        let label = format!("{}.{name}.{direction}", ctx.name());
        let (fit, verify) = (fit.clone(), verify.clone());
        out.push(Box::new(move || Ok(report_outcome(&verify_differentiability(&label, psi, f, &fit, &verify)?))));
    } else if single && ex.random_directions.is_none() {
        return Err(precondition("the experiment declares no direction"));
    }
    for i in 0..ex.random_directions.unwrap_or(0) as u64 {
        let seed = ctx.seed() + i;
        let (fit, verify) = (fit.clone(), verify.clone());
        out.push(Box::new(move || {
            let (psi, f) = random_direction(&m.polytope, seed);
            let label = format!("{}.random", ctx.name());
            Ok(report_outcome(&verify_differentiability(&label, &psi, &f, &fit, &verify)?.with_seed(seed)))
        }));
    }
    Ok(out)
}

/// A seeded semipositive metric and PL direction on `poly`.
pub fn random_direction(poly: &Arc<Polytope>, seed: u64) -> (PLMetric, PLFunction) {
    let mut rng = generate::rng(seed);
    let psi = random_convex_metric(poly, &mut rng, 0);
    let f = random_pl_function(poly, &mut rng, 0);
    (psi, f)
}

fn same_measure(a: &DiscreteMeasure<VertexId>, b: &DiscreteMeasure<VertexId>, n: usize) -> bool {
    (0..n).all(|v| a.mass_at(&v) == b.mass_at(&v))
}

/// Solves on `tree`, checks the curvature and the zero mass of the Laplacian,
/// and checks that a perturbed total mass is rejected.
fn tree_outcome(label: &str, seed: Option<u64>, tree: &MetricTree, mu: &DiscreteMeasure<VertexId>, mu0: &DiscreteMeasure<VertexId>) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let phi = ma_solve(mu, mu0, tree)?;
    let curv = curvature(&phi, mu0, tree)?;
    let lap_mass = tree_laplacian(&phi, tree)?.total_mass().clone();
    let mut heavier = mu.clone();
    heavier.add_atom(tree.root(), int(1));
    let rejected = matches!(ma_solve(&heavier, mu0, tree), Err(CoreError::MassMismatch { .. }));
    let solved = same_measure(&curv.measure, mu, tree.len());
    let mut table = Table::new(
        match seed {
            Some(s) => format!("{label}.ma-solve.seed{s}"),
            None => format!("{label}.ma-solve"),
        },
        &["vertex", "phi", "target", "curvature"],
    );
    for (v, name) in tree.names().iter().enumerate() {
        table.push(vec![name.clone(), q(phi.value(v)), q(&mu.mass_at(&v)), q(&curv.measure.mass_at(&v))]);
    }
    let detail = format!(
        "{} vertices, curvature {}, laplacian mass {}, mismatch {}, {}",
        tree.len(),
        if solved { "matches" } else { "differs" },
        q(&lap_mass),
        if rejected { "rejected" } else { "accepted" },
        if curv.semipositive { "semipositive" } else { "not semipositive" },
    );
    let record = Record::check("ma-solve", label, solved && lap_mass.is_zero() && rejected, detail)
        .with_seed(seed)
        .with_runtime(started.elapsed());
    Ok(Outcome::single(record, Some(table)))
}

fn tree_jobs<'a>(ctx: &'a Ctx<'a>, m: &'a TreeModel) -> Result<Vec<Job<'a>>, CliError> {
    let ex = &ctx.inst.file.experiment;
    let mut out: Vec<Job> = Vec::new();
    match (&m.tree, &ex.target, &ex.reference) {
        (Some(tree), Some(t), Some(r)) => {
            let (mu, mu0) = (&m.measures[t], &m.measures[r]);
            out.push(Box::new(move || tree_outcome(ctx.name(), None, tree, mu, mu0)));
        }
        (_, None, None) => {}
        _ => return Err(precondition("ma-solve needs a tree, a target and a reference measure")),
    }
    let max = ex.max_vertices.unwrap_or(DEFAULT_MAX_VERTICES);
    for i in 0..ex.random_trees.unwrap_or(0) as u64 {
        let seed = ctx.seed() + i;
        out.push(Box::new(move || {
            let mut rng = generate::rng(seed);
            let tree = random_tree(&mut rng, max);
            let total = rat(rng.gen_range(1..=5), rng.gen_range(1..=3));
            let mu0 = random_vertex_measure(&tree, &mut rng, &total);
            let mu = random_vertex_measure(&tree, &mut rng, &total);
            tree_outcome(&format!("{}.random", ctx.name()), Some(seed), &tree, &mu, &mu0)
        }));
    }
    if out.is_empty() {
        return Err(precondition("nothing to solve: no target/reference and no random_trees"));
    }
    Ok(out)
}

fn divisor<'a>(m: &'a SurfaceModel, name: &str) -> &'a RealDivisor {
    m.divisors.get(name).expect("validated at parse time")
}

fn qs(ctx: &Ctx, m: &SurfaceModel) -> Vec<usize> {
    ctx.inst
        .file
        .experiment
        .q
        .clone()
        .unwrap_or_else(|| (0..=m.variety.dim()).collect())
}

fn cohomology(ctx: &Ctx, m: &SurfaceModel) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let name = ctx
        .inst
        .file
        .experiment
        .divisor
        .as_deref()
        .ok_or_else(|| precondition("the experiment declares no divisor"))?;
    let rows = cohomology_table(&m.variety, divisor(m, name), &ctx.schedule(), ctx.exec)?;
    let wanted = qs(ctx, m);
    let mut table = Table::new(format!("{}.cohomology.{name}", ctx.name()), &["m", "q", "h", "normalized", "normalized_decimal"]);
    for r in rows.iter().filter(|r| wanted.contains(&r.q)) {
        table.push(vec![r.m.to_string(), r.q.to_string(), r.h.to_string(), q(&r.normalized), decimal(&r.normalized)]);
    }
    let last = |qq: usize| rows.iter().rev().find(|r| r.q == qq).map(|r| q(&r.normalized)).unwrap_or_default();
    let detail = wanted
        .iter()
        .map(|&qq| format!("h^{qq} normalized {}", last(qq)))
        .collect::<Vec<_>>()
        .join(", ");
    let record = Record::info("cohomology", &format!("{}.{name}", ctx.name()), detail).with_runtime(started.elapsed());
    Ok(Outcome::single(record, Some(table)))
}

fn morse_jobs<'a>(ctx: &'a Ctx<'a>, m: &'a SurfaceModel) -> Result<Vec<Job<'a>>, CliError> {
    let pairs = ctx
        .inst
        .file
        .experiment
        .morse
        .as_ref()
        .ok_or_else(|| precondition("the experiment declares no morse pairs"))?;
    let schedule = ctx.schedule();
    let mut out: Vec<Job> = Vec::new();
    for [d, e] in pairs {
        for qq in qs(ctx, m) {
            let schedule = schedule.clone();
            out.push(Box::new(move || {
                let started = Instant::now();
                let report = morse_check(&m.variety, divisor(m, d), divisor(m, e), qq, &schedule, ctx.exec)?;
                let label = format!("{}.{d}-{e}.q{qq}", ctx.name());
                let mut table = Table::new(format!("{label}.morse"), &["m", "h", "main", "bound", "margin", "role"]);
                for r in &report.rows {
                    table.push(vec![
                        r.m.to_string(),
                        r.h.to_string(),
                        q(&r.main),
                        q(&r.bound),
                        q(&r.margin),
                        if r.fitted { "fit".into() } else { "verify".into() },
                    ]);
                }
                let detail = format!("leading {}, C = {}", q(&report.leading), q(&report.constant));
                let record = Record {
                    target: Some(q(&report.leading)),
                    constant: Some(q(&report.constant)),
                    criterion: Some("C*m^(n-1)".into()),
                    ..Record::check("morse", &label, report.passed, detail)
                }
                .with_runtime(started.elapsed());
                Ok(Outcome::single(record, Some(table)))
            }));
        }
    }
    Ok(out)
}

fn perturb(ctx: &Ctx, m: &SurfaceModel) -> Result<Outcome, CliError> {
    let ex = &ctx.inst.file.experiment;
    let (Some(twists), Some(bases)) = (&ex.twists, &ex.bases) else {
        return Err(precondition("perturb-scan needs twists and bases"));
    };
    let twists: Vec<RealDivisor> = twists.iter().map(|n| divisor(m, n).clone()).collect();
    let bases: Vec<RealDivisor> = bases.iter().map(|n| divisor(m, n).clone()).collect();
    let max = ex.perturb_max.unwrap_or(5);
    let mut out = Outcome::default();
    for qq in qs(ctx, m) {
        let started = Instant::now();
        let report = perturbation_scan(&m.variety, &twists, &bases, qq, max, ctx.exec)?;
        let label = format!("{}.q{qq}", ctx.name());
        let mut table = Table::new(format!("{label}.perturb"), &["m", "p", "lhs", "scale", "role", "holds"]);
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        for r in &report.rows {
            table.push(vec![
                join(&r.m),
                join(&r.p),
                r.lhs.to_string(),
                r.scale.to_string(),
                if r.fitted { "fit".into() } else { "verify".into() },
                r.holds.to_string(),
            ]);
        }
        let record = Record {
            constant: Some(q(&report.constant)),
            criterion: Some("C*|m|(|m|+|p|)^(n-1)".into()),
            ..Record::check("perturb-scan", &label, report.passed, format!("{} rows, C = {}", report.rows.len(), q(&report.constant)))
        }
        .with_runtime(started.elapsed());
        out.push(record, Some(table));
    }
    Ok(out)
}
