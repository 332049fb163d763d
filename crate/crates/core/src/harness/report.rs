//! Suite reports: aggregation, serialization and tightness summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HarnessError, SuiteConfig};
use crate::bounds::{BoundCase, Link, LinkStatus};
use crate::ensembles::EnsembleSpec;

pub const SCHEMA_VERSION: u32 = 1;

/// Everything needed to regenerate one evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub case: BoundCase,
    pub ensemble: EnsembleSpec,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub link: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub reproduce: Reproduction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkStats {
    pub link: usize,
    pub from: String,
    pub to: String,
    /// Evaluations with a defined ratio.
    pub ratio_count: usize,
    pub min_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub max_ratio_index: Option<usize>,
    pub worst_slack: Option<f64>,
    pub worst_slack_index: Option<usize>,
    pub violations: usize,
    pub grazes: usize,
    /// Running sum during accumulation; cleared by `finish`.
    #[serde(skip)]
    ratio_sum: f64,
}

impl LinkStats {
    fn new(link: usize, from: &str, to: &str) -> Self {
        Self {
            link,
            from: from.to_string(),
            to: to.to_string(),
            ratio_count: 0,
            min_ratio: None,
            mean_ratio: None,
            max_ratio: None,
            max_ratio_index: None,
            worst_slack: None,
            worst_slack_index: None,
            violations: 0,
            grazes: 0,
            ratio_sum: 0.0,
        }
    }

    fn add(&mut self, link: &Link, index: usize) {
        match link.status {
            LinkStatus::Fail => self.violations += 1,
            LinkStatus::Graze => self.grazes += 1,
            LinkStatus::Pass => {}
        }
        if self.worst_slack.is_none_or(|w| link.slack < w) {
            self.worst_slack = Some(link.slack);
            self.worst_slack_index = Some(index);
        }
        if let Some(r) = link.ratio {
            self.ratio_count += 1;
            self.ratio_sum += r;
            self.min_ratio = Some(self.min_ratio.map_or(r, |m| m.min(r)));
            if self.max_ratio.is_none_or(|m| r > m) {
                self.max_ratio = Some(r);
                self.max_ratio_index = Some(index);
            }
        }
    }

    fn finish(&mut self) {
        if self.ratio_count > 0 {
            self.mean_ratio = Some(self.ratio_sum / self.ratio_count as f64);
        }
        self.ratio_sum = 0.0;
    }
}

/// Aggregate of one case instance over one ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub case: BoundCase,
    pub id: String,
    pub params: String,
    pub ensemble: EnsembleSpec,
    pub evaluations: usize,
    /// Evaluations with at least one failing link.
    pub violations: usize,
    pub grazes: usize,
    pub untestable: usize,
    /// Draws on which the hypothesis of the case does not hold.
    pub skipped: usize,
    pub errors: usize,
    pub worst_slack: Option<f64>,
    pub worst_slack_witness: Option<Reproduction>,
    pub links: Vec<LinkStats>,
    pub witnesses: Vec<Violation>,
    pub messages: Vec<String>,
}

pub(super) enum Outcome {
    Done { values: Vec<f64>, links: Vec<Link> },
    Untestable(String),
    NotApplicable,
    Error(String),
}

const MESSAGE_LIMIT: usize = 5;

impl EntryReport {
    pub(super) fn new(case: &BoundCase, ensemble: &EnsembleSpec) -> Self {
        let names = case.id().chain_names();
        Self {
            case: case.clone(),
            id: case.id().name().to_string(),
            params: case.params().render_all(),
            ensemble: ensemble.clone(),
            evaluations: 0,
            violations: 0,
            grazes: 0,
            untestable: 0,
            skipped: 0,
            errors: 0,
            worst_slack: None,
            worst_slack_witness: None,
            links: names
                .windows(2)
                .enumerate()
                .map(|(i, p)| LinkStats::new(i, p[0], p[1]))
                .collect(),
            witnesses: Vec::new(),
            messages: Vec::new(),
        }
    }

    fn reproduction(&self, index: usize) -> Reproduction {
        Reproduction {
            case: self.case.clone(),
            ensemble: self.ensemble.clone(),
            index,
        }
    }

    fn message(&mut self, msg: &str) {
        if self.messages.len() < MESSAGE_LIMIT && !self.messages.iter().any(|m| m == msg) {
            self.messages.push(msg.to_string());
        }
    }

    pub(super) fn add(&mut self, outcome: &Outcome, index: usize, witness_limit: usize) {
        match outcome {
            Outcome::Done { values, links } => {
                self.evaluations += 1;
                let mut failed = false;
                for (i, link) in links.iter().enumerate() {
                    self.links[i].add(link, index);
                    if self.worst_slack.is_none_or(|w| link.slack < w) {
                        self.worst_slack = Some(link.slack);
                        self.worst_slack_witness = Some(self.reproduction(index));
                    }
                    match link.status {
                        LinkStatus::Fail => {
                            failed = true;
                            if self.witnesses.len() < witness_limit {
                                self.witnesses.push(Violation {
                                    link: i,
                                    lhs: values[i],
                                    rhs: values[i + 1],
                                    slack: link.slack,
                                    reproduce: self.reproduction(index),
                                });
                            }
                        }
                        LinkStatus::Graze => self.grazes += 1,
                        LinkStatus::Pass => {}
                    }
                }
                if failed {
                    self.violations += 1;
                }
            }
            Outcome::Untestable(msg) => {
                self.untestable += 1;
                self.message(msg);
            }
            Outcome::NotApplicable => self.skipped += 1,
            Outcome::Error(msg) => {
                self.errors += 1;
                self.message(msg);
            }
        }
    }

    pub(super) fn finish(&mut self) {
        for l in &mut self.links {
            l.finish();
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub entries: usize,
    pub evaluations: usize,
    pub violations: usize,
    pub grazes: usize,
    pub untestable: usize,
    pub skipped: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub version: String,
    pub config: SuiteConfig,
    pub wall_time_ms: u64,
    pub totals: Totals,
    pub entries: Vec<EntryReport>,
}

impl SuiteReport {
    pub(super) fn assemble(config: SuiteConfig, entries: Vec<EntryReport>, wall_time_ms: u64) -> Self {
        let mut totals = Totals {
            entries: entries.len(),
            ..Totals::default()
        };
        for e in &entries {
            totals.evaluations += e.evaluations;
            totals.violations += e.violations;
            totals.grazes += e.grazes;
            totals.untestable += e.untestable;
            totals.skipped += e.skipped;
            totals.errors += e.errors;
        }
        Self {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            wall_time_ms,
            totals,
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        let report: SuiteReport = serde_json::from_str(s).map_err(|e| HarnessError::Report(e.to_string()))?;
        if report.schema != SCHEMA_VERSION {
            return Err(HarnessError::Report(format!("unsupported schema {}", report.schema)));
        }
        Ok(report)
    }

    /// JSON with the wall-time field zeroed, for reproducibility comparisons.
    pub fn to_json_without_wall_time(&self) -> String {
        Self {
            wall_time_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    pub fn violation_witnesses(&self) -> impl Iterator<Item = &Violation> {
        self.entries.iter().flat_map(|e| e.witnesses.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(HarnessError::Config(format!("unknown report format {other:?}; use json or csv"))),
        }
    }
}

pub const CSV_HEADER: &str =
    "id,params,n,count,violations,min_ratio,mean_ratio,max_ratio,worst_slack,witness_seed,family,link";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per (case, ensemble, chain link).
pub fn report_csv(report: &SuiteReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for e in &report.entries {
        for l in &e.links {
            let witness = l
                .worst_slack_index
                .map(|i| format!("{}:{i}", e.ensemble.seed))
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                csv_field(&e.id),
                csv_field(&e.params),
                e.ensemble.n,
                e.ensemble.count,
                l.violations,
                opt(l.min_ratio),
                opt(l.mean_ratio),
                opt(l.max_ratio),
                opt(l.worst_slack),
                witness,
                e.ensemble.family.name(),
                csv_field(&format!("{}<={}", l.from, l.to)),
            )
            .expect("writing to a String");
        }
    }
    out
}

pub fn export_report(report: &SuiteReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    let body = match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report_csv(report),
    };
    fs::write(path, body).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

pub fn import_report(path: impl AsRef<Path>) -> Result<SuiteReport, HarnessError> {
    let path = path.as_ref();
    let s = fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    SuiteReport::from_json(&s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessRow {
    pub case: String,
    pub ensemble: EnsembleSpec,
    pub link: usize,
    pub from: String,
    pub to: String,
    pub min_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub max_witness: Option<Reproduction>,
}

/// Per-link ratio summaries of every entry whose case id (or full label)
/// equals `case`.
pub fn tightness_stats(report: &SuiteReport, case: &str) -> Result<Vec<TightnessRow>, HarnessError> {
    let rows: Vec<TightnessRow> = report
        .entries
        .iter()
        .filter(|e| e.id == case || e.case.to_string() == case)
        .flat_map(|e| {
            e.links.iter().map(move |l| TightnessRow {
                case: e.case.to_string(),
                ensemble: e.ensemble.clone(),
                link: l.link,
                from: l.from.clone(),
                to: l.to.clone(),
                min_ratio: l.min_ratio,
                mean_ratio: l.mean_ratio,
                max_ratio: l.max_ratio,
                max_witness: l.max_ratio_index.map(|i| e.reproduction(i)),
            })
        })
        .collect();
    if rows.is_empty() {
        return Err(HarnessError::UnknownCase(case.to_string()));
    }
    Ok(rows)
}
