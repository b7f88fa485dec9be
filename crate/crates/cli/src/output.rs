//! Tables, summary records and their CSV/JSON/text renderings.
//!
//! CSV bodies depend only on the instance, the seed and the flags. Runtimes
//! appear in the JSON summary alone.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use navol_core::harness::{Criterion, Role, VerificationReport};
use navol_core::rational::{format_rational, to_f64};
use navol_core::Rational;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    /// File stem of the CSV.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: sanitize(&name.into()),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect()
}

pub fn q(value: &Rational) -> String {
    format_rational(value)
}

pub fn decimal(value: &Rational) -> String {
    format!("{:.12e}", to_f64(value))
}

/// One line of the summary: a check on an instance, or an informational result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub check: String,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `None` for computations without a pass criterion.
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub runtime_ms: f64,
}

impl Record {
    pub fn info(check: &str, instance: &str, detail: impl Into<String>) -> Self {
        Record {
            check: check.into(),
            instance: instance.into(),
            seed: None,
            passed: None,
            criterion: None,
            target: None,
            constant: None,
            detail: detail.into(),
            table: None,
            runtime_ms: 0.0,
        }
    }

    pub fn check(check: &str, instance: &str, passed: bool, detail: impl Into<String>) -> Self {
        Record {
            passed: Some(passed),
            ..Record::info(check, instance, detail)
        }
    }

    pub fn with_runtime(mut self, runtime: Duration) -> Self {
        self.runtime_ms = runtime.as_secs_f64() * 1e3;
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    fn verdict(&self) -> &'static str {
        match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        }
    }
}

/// Everything a command produced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn single(record: Record, table: Option<Table>) -> Self {
        let mut out = Outcome::default();
        out.push(record, table);
        out
    }

    pub fn push(&mut self, mut record: Record, table: Option<Table>) {
        if let Some(t) = table {
            record.table = Some(format!("{}.csv", t.name));
            self.tables.push(t);
        }
        self.records.push(record);
    }

    pub fn extend(&mut self, other: Outcome) {
        self.records.extend(other.records);
        self.tables.extend(other.tables);
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed != Some(false))
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let seed = r.seed.map(|s| format!(" seed={s}")).unwrap_or_default();
            let _ = writeln!(out, "{} {} {}{}: {}", r.verdict(), r.check, r.instance, seed, r.detail);
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            if self.tables.len() > 1 {
                let _ = writeln!(out, "# {}", t.name);
            }
            out.push_str(&t.to_csv());
        }
        out
    }

    pub fn json(&self, command: &str, runtime: Duration) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            command: &'a str,
            passed: bool,
            checks: usize,
            failures: usize,
            runtime_ms: f64,
            records: &'a [Record],
        }
        let summary = Summary {
            command,
            passed: self.all_passed(),
            checks: self.records.iter().filter(|r| r.passed.is_some()).count(),
            failures: self.records.iter().filter(|r| r.passed == Some(false)).count(),
            runtime_ms: runtime.as_secs_f64() * 1e3,
            records: &self.records,
        };
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"
    }

    /// Writes one CSV per table, `summary.json` and `report.txt` into `dir`.
    pub fn write(&self, dir: &Path, command: &str, runtime: Duration) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        for t in &self.tables {
            fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv())?;
        }
        fs::write(dir.join("summary.json"), self.json(command, runtime))?;
        fs::write(dir.join("report.txt"), self.text())?;
        Ok(())
    }
}

/// The series of a verification report as a table, plus its summary record.
pub fn report_outcome(report: &VerificationReport) -> Outcome {
    let mut name = format!("{}.{}", report.instance, report.theorem.id());
    if let Some(seed) = report.seed {
        let _ = write!(name, ".seed{seed}");
    }
    let mut table = Table::new(name, &["x", "value", "reference", "residual", "residual_decimal", "role"]);
    for row in &report.rows {
        table.push(vec![
            q(&row.x),
            q(&row.value),
            q(&row.reference),
            q(&row.residual),
            decimal(&row.residual),
            match row.role {
                Role::Fit => "fit".into(),
                Role::Verify => "verify".into(),
            },
        ]);
    }
    let criterion = match report.criterion {
        Criterion::ExactZero => "exact-zero",
        Criterion::InverseM => "C/m",
        Criterion::EpsilonSquared => "C*eps^2",
    };
    let mut detail = format!("{} rows", report.rows.len());
    if let Some(t) = &report.target {
        let _ = write!(detail, ", target {}", q(t));
    }
    if let Some(c) = &report.constant {
        let _ = write!(detail, ", C = {}", q(c));
    }
    let record = Record {
        criterion: Some(criterion.into()),
        target: report.target.as_ref().map(q),
        constant: report.constant.as_ref().map(q),
        ..Record::check(report.theorem.id(), &report.instance, report.passed && report.recheck(), detail)
    }
    .with_seed(report.seed)
    .with_runtime(report.runtime);
    Outcome::single(record, Some(table))
}
