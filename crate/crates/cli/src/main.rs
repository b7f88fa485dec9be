use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use navol_cli::{parse_instance, run, verify_all, CliError, Command, Instance, Options, Outcome};
use navol_core::{par, Execution};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
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

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Measure => Command::Measure,
            CommandArg::Energy => Command::Energy,
            CommandArg::Navol => Command::Navol,
            CommandArg::Envelope => Command::Envelope,
            CommandArg::OrthoCheck => Command::OrthoCheck,
            CommandArg::DiffCheck => Command::DiffCheck,
            CommandArg::H0Check => Command::H0Check,
            CommandArg::MaSolve => Command::MaSolve,
            CommandArg::Cohomology => Command::Cohomology,
            CommandArg::MorseCheck => Command::MorseCheck,
            CommandArg::PerturbScan => Command::PerturbScan,
            CommandArg::VerifyAll => Command::VerifyAll,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Exact non-archimedean volume experiments on TOML instance files.
///
/// Exit codes: 0 all checks pass, 1 a check failed, 2 bad instance or
/// arguments, 3 precondition or output failure.
#[derive(Debug, Parser)]
#[command(name = "navol", version)]
struct Cli {
    command: CommandArg,

    /// Instance files or directories of `*.toml`. `verify-all` defaults to the
    /// bundled suite.
    instances: Vec<PathBuf>,

    /// Values of m: a comma list of numbers and ranges, e.g. `1..10,50,100`.
    #[arg(long, value_parser = parse_schedule)]
    schedule: Option<Schedule>,

    /// Base seed for generated instances (overrides the file).
    #[arg(long)]
    seed: Option<u64>,

    /// Metric to use when the instance declares several.
    #[arg(long)]
    metric: Option<String>,

    #[arg(long, env = "NAVOL_OUT_DIR", default_value = "navol-out")]
    out_dir: PathBuf,

    /// Worker threads (0: rayon's default).
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Run the lattice sums and instance fan-out sequentially.
    #[arg(long)]
    sequential: bool,

    /// Print the JSON summary or the CSV tables instead of the text report.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Debug)]
struct Schedule(Vec<u64>);

fn parse_schedule(text: &str) -> Result<Schedule, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let number = |s: &str| s.trim().parse::<u64>().map_err(|_| format!("bad schedule entry {s:?}"));
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (number(lo)?, number(hi.trim_start_matches('='))?);
                out.extend(lo..=hi);
            }
            None => out.push(number(part)?),
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err("schedule needs positive entries".into());
    }
    Ok(Schedule(out))
}

fn suite_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("suite")
}

fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|e| e.extension().is_some_and(|x| x == "toml"))
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn execute(cli: &Cli, exec: Execution) -> Result<Outcome, CliError> {
    let command = Command::from(cli.command);
    let paths = match (command, cli.instances.is_empty()) {
        (Command::VerifyAll, true) => vec![suite_dir()],
        (_, true) => return Err(CliError::Parse(format!("{} needs an instance file", command.name()))),
        _ => cli.instances.clone(),
    };
    let instances = expand(&paths)?
        .iter()
        .map(|p| parse_instance(p))
        .collect::<Result<Vec<Instance>, _>>()?;
    if instances.is_empty() {
        return Err(CliError::Parse("no instance files found".into()));
    }
    let opts = Options {
        schedule: cli.schedule.as_ref().map(|s| s.0.clone()),
        seed: cli.seed,
        metric: cli.metric.clone(),
    };
    if command == Command::VerifyAll {
        return verify_all(&instances, &opts, exec);
    }
    let mut out = Outcome::default();
    for inst in &instances {
        out.extend(run(command, inst, &opts, exec)?);
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let started = Instant::now();
    let result = par::with_threads(cli.threads, || execute(&cli, exec)).and_then(|out| {
        out.write(&cli.out_dir, Command::from(cli.command).name(), started.elapsed())?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            match cli.format {
                None => print!("{}", out.text()),
                Some(Format::Csv) => print!("{}", out.csv()),
                Some(Format::Json) => print!("{}", out.json(Command::from(cli.command).name(), started.elapsed())),
            }
            if out.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("navol: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_schedule;

    #[test]
    fn schedules() {
        assert_eq!(parse_schedule("1..3,10").unwrap().0, vec![1, 2, 3, 10]);
        assert_eq!(parse_schedule("2..=4").unwrap().0, vec![2, 3, 4]);
        assert!(parse_schedule("0,1").is_err());
        assert!(parse_schedule("x").is_err());
    }
}
