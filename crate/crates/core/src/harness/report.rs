//! Machine-readable reports: one JSON document per suite, or one flat CSV table.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::check::{CheckResult, Status};
use crate::error::{Error, Result};

use super::corpus::{Corpus, SkippedMember};

pub const SCHEMA: &str = "derange-report/1";

/// Fixed CSV columns; `witness` holds the witness object as compact JSON.
pub const CSV_COLUMNS: [&str; 8] = ["suite", "check_id", "anchor", "status", "lhs", "relation", "rhs", "witness"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidParams(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    #[serde(rename = "violation-at-small-n")]
    pub violation_at_small_n: usize,
    pub skipped: usize,
    pub statistical: usize,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let mut s = Summary { total: results.len(), ..Default::default() };
        for r in results {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::ViolationAtSmallN => s.violation_at_small_n += 1,
                Status::Skipped => s.skipped += 1,
                Status::Statistical => s.statistical += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusSummary {
    pub members: usize,
    pub skipped: Vec<SkippedMember>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub suite: String,
    pub corpus: CorpusSummary,
    pub summary: Summary,
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn new(suite: &str, corpus: &Corpus, results: Vec<CheckResult>) -> Self {
        SuiteReport {
            schema: SCHEMA,
            suite: suite.to_string(),
            corpus: CorpusSummary { members: corpus.members.len(), skipped: corpus.skipped.clone() },
            summary: Summary::of(&results),
            results,
        }
    }

    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

pub fn to_csv(reports: &[SuiteReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(std::io::Error::from)?;
    for rep in reports {
        for r in &rep.results {
            let relation = r.relation.map(|x| x.symbol().to_string()).unwrap_or_default();
            w.write_record([
                rep.suite.as_str(),
                &r.check_id,
                &r.anchor,
                r.status.as_str(),
                &opt(&r.lhs),
                &relation,
                &opt(&r.rhs),
                &serde_json::to_string(&r.witness)?,
            ])
            .map_err(std::io::Error::from)?;
        }
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(format!("# schema {SCHEMA}\n{}", String::from_utf8_lossy(&body)))
}

/// Writes `<suite>.json` per suite, or a single `report.csv`.
pub fn write_reports(reports: &[SuiteReport], dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match format {
        Format::Json => {
            for rep in reports {
                let path = dir.join(format!("{}.json", rep.suite));
                std::fs::write(&path, rep.to_json()?)?;
                written.push(path);
            }
        }
        Format::Csv => {
            let path = dir.join("report.csv");
            std::fs::write(&path, to_csv(reports)?)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// All reports on one stream: a JSON array, or the CSV table.
pub fn render(reports: &[SuiteReport], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => to_csv(reports),
    }
}
