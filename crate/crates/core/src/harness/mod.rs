//! Suite orchestration: (case × parameter grid × ensemble) → evaluations →
//! aggregated report.
//!
//! Work is split by draw: each `(ensemble, index)` task generates its matrix
//! once and evaluates every case on a shared [`Operands`] cache. Results are
//! collected in index order and folded sequentially, so the report does not
//! depend on the number of worker threads.

mod report;
mod suites;

pub use report::{
    export_report, import_report, report_csv, tightness_stats, EntryReport, LinkStats, ReportFormat, Reproduction,
    SuiteReport, TightnessRow, Totals, Violation, CSV_HEADER, SCHEMA_VERSION,
};
pub use suites::{builtin_suite, default_suite, selftest_suite, BUILTIN_SUITES, DEFAULT_COUNT, DEFAULT_SEED};

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::bounds::{
    check_vector_lemma, evaluate_with, normalization, BoundCase, BoundError, BoundEvaluation, CaseId, CaseParams,
    Operands, Param, Tolerance, VectorInputs,
};
use crate::ensembles::{draw_vectors, generate, EnsembleError, EnsembleSpec};
use crate::linalg::{abs_eig, CMatrix};
use crate::numrad::RadiusOptions;
use report::Outcome;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HarnessError {
    #[error("invalid suite config: {0}")]
    Config(String),
    #[error("case {0:?} not present in report")]
    UnknownCase(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error("malformed report: {0}")]
    Report(String),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Num(f64),
    Text(String),
}

impl Scalar {
    fn render(&self) -> String {
        match self {
            Scalar::Num(x) => x.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// A case label, or an id with a parameter grid expanded as a cartesian
/// product in canonical parameter order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseTemplate {
    Label(String),
    Grid {
        id: String,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        grid: BTreeMap<String, OneOrMany<Scalar>>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        corrupt: bool,
    },
}

impl CaseTemplate {
    pub fn grid(id: &str, grid: &[(&str, Vec<Scalar>)]) -> Self {
        CaseTemplate::Grid {
            id: id.to_string(),
            grid: grid
                .iter()
                .map(|(k, v)| (k.to_string(), OneOrMany::Many(v.clone())))
                .collect(),
            corrupt: false,
        }
    }

    pub fn expand(&self) -> Result<Vec<BoundCase>, HarnessError> {
        match self {
            CaseTemplate::Label(label) => Ok(vec![label.parse()?]),
            CaseTemplate::Grid { id, grid, corrupt } => {
                let case_id = CaseId::from_name(id).ok_or_else(|| BoundError::UnknownCase(id.clone()))?;
                let mut axes: Vec<(Param, Vec<String>)> = Vec::new();
                for (k, values) in grid {
                    let p = Param::from_name(k)
                        .ok_or_else(|| HarnessError::Config(format!("{id}: unknown parameter {k:?}")))?;
                    let vals: Vec<String> = values.to_vec().iter().map(Scalar::render).collect();
                    if vals.is_empty() {
                        return Err(HarnessError::Config(format!("{id}: empty grid for {k}")));
                    }
                    axes.push((p, vals));
                }
                axes.sort_by_key(|(p, _)| *p);
                let mut combos: Vec<CaseParams> = vec![CaseParams::default()];
                for (p, vals) in &axes {
                    let mut next = Vec::with_capacity(combos.len() * vals.len());
                    for base in &combos {
                        for v in vals {
                            let mut c = base.clone();
                            c.set(*p, v)?;
                            next.push(c);
                        }
                    }
                    combos = next;
                }
                combos
                    .into_iter()
                    .map(|params| {
                        let case = BoundCase::new(case_id, params)?;
                        Ok(if *corrupt { case.corrupted() } else { case })
                    })
                    .collect()
            }
        }
    }
}

/// An ensemble entry whose `n` may be a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleTemplate {
    pub family: String,
    pub n: OneOrMany<usize>,
    pub count: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
}

impl EnsembleTemplate {
    pub fn expand(&self) -> Result<Vec<EnsembleSpec>, HarnessError> {
        self.n
            .to_vec()
            .into_iter()
            .map(|n| {
                let v = serde_json::json!({
                    "family": self.family,
                    "n": n,
                    "count": self.count,
                    "seed": self.seed,
                    "params": self.params,
                });
                EnsembleSpec::from_json(&v.to_string()).map_err(HarnessError::from)
            })
            .collect()
    }
}

fn default_witness_limit() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub name: String,
    pub cases: Vec<CaseTemplate>,
    pub ensembles: Vec<EnsembleTemplate>,
    #[serde(default)]
    pub tolerance: Tolerance,
    #[serde(default)]
    pub radius: RadiusOptions,
    /// Violation witnesses kept per (case, ensemble) entry.
    #[serde(default = "default_witness_limit")]
    pub witness_limit: usize,
    /// Worker threads; `None` uses the global pool. Not part of the report.
    #[serde(default, skip_serializing)]
    pub jobs: Option<usize>,
}

impl SuiteConfig {
    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let s = fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn expand_cases(&self) -> Result<Vec<BoundCase>, HarnessError> {
        let mut out = Vec::new();
        for t in &self.cases {
            out.extend(t.expand()?);
        }
        Ok(out)
    }

    pub fn expand_ensembles(&self) -> Result<Vec<EnsembleSpec>, HarnessError> {
        let mut out = Vec::new();
        for t in &self.ensembles {
            out.extend(t.expand()?);
        }
        Ok(out)
    }
}

/// Operands of one draw; the paired operand set is built on first use.
pub struct Draw<'a> {
    spec: &'a EnsembleSpec,
    index: usize,
    single: Operands,
    pair: OnceCell<Result<Operands, HarnessError>>,
    radius: RadiusOptions,
}

impl<'a> Draw<'a> {
    pub fn new(spec: &'a EnsembleSpec, index: usize, radius: RadiusOptions) -> Result<Self, HarnessError> {
        let t = generate(spec, index)?;
        Ok(Self {
            spec,
            index,
            single: Operands::new(t, None, radius)?,
            pair: OnceCell::new(),
            radius,
        })
    }

    pub fn t(&self) -> &CMatrix {
        self.single.t()
    }

    fn pair(&self) -> Result<&Operands, HarnessError> {
        self.pair
            .get_or_init(|| {
                let s = generate(&self.spec.paired(), self.index)?;
                Ok(Operands::new(self.t().clone(), Some(s), self.radius)?)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Evaluates `case` on this draw exactly as the suite runner does.
    pub fn evaluate(&self, case: &BoundCase, tol: Tolerance) -> Result<BoundEvaluation, HarnessError> {
        let id = case.id();
        if id.is_vector() {
            let inputs = self.vector_inputs(case)?;
            return Ok(check_vector_lemma(case, &inputs, tol)?);
        }
        let ops = if id.needs_second() { self.pair()? } else { &self.single };
        let scale = normalization(case, ops.norm());
        Ok(evaluate_with(case, ops.view(scale), tol)?)
    }

    /// Inputs of a vector lemma derived from this draw: Gaussian vectors and
    /// a unit vector from an independent stream, `|T|` as the PSD matrix.
    pub fn vector_inputs(&self, case: &BoundCase) -> Result<VectorInputs, HarnessError> {
        use CaseId::*;
        let k = match case.id() {
            ExtBuzanoVec => case.params().n.unwrap_or(2) as usize,
            MccarthyVec | OpJensenVec => 0,
            _ => 2,
        };
        let (mut vectors, e) = draw_vectors(self.spec, self.index, k);
        Ok(match case.id() {
            MccarthyVec | OpJensenVec => {
                let c = normalization(case, self.single.norm());
                let abs = abs_eig(self.t()).map_err(BoundError::from)?.map(|s| c * s);
                VectorInputs {
                    vectors: vec![e],
                    e: None,
                    matrix: Some(abs),
                }
            }
            MixedSchwarzVec => VectorInputs {
                vectors,
                e: None,
                matrix: Some(self.t().clone()),
            },
            _ => {
                if let Some(cap) = case.exp_cap() {
                    for v in vectors.iter_mut() {
                        let nrm = crate::linalg::vec_norm(v);
                        if nrm > cap {
                            let c = cap / nrm;
                            v.iter_mut().for_each(|z| *z *= c);
                        }
                    }
                }
                VectorInputs {
                    vectors,
                    e: Some(e),
                    matrix: None,
                }
            }
        })
    }
}

/// Regenerates and evaluates one `(case, ensemble, index)` tuple.
pub fn evaluate_draw(
    case: &BoundCase,
    spec: &EnsembleSpec,
    index: usize,
    tol: Tolerance,
    radius: RadiusOptions,
) -> Result<BoundEvaluation, HarnessError> {
    Draw::new(spec, index, radius)?.evaluate(case, tol)
}

fn outcome(result: Result<BoundEvaluation, HarnessError>) -> Outcome {
    match result {
        Ok(e) => Outcome::Done {
            values: e.values(),
            links: e.links,
        },
        Err(HarnessError::Bound(b)) if b.is_untestable() => Outcome::Untestable(b.to_string()),
        Err(HarnessError::Bound(b)) if b.is_not_applicable() => Outcome::NotApplicable,
        Err(e) => Outcome::Error(e.to_string()),
    }
}

/// Outcomes of every case on draw `index`. Operator cases are skipped
/// (`None`) when `operators` is false.
fn evaluate_index(
    cases: &[BoundCase],
    spec: &EnsembleSpec,
    index: usize,
    config: &SuiteConfig,
    operators: bool,
) -> Vec<Option<Outcome>> {
    let draw = match Draw::new(spec, index, config.radius) {
        Ok(d) => d,
        Err(e) => {
            let msg = e.to_string();
            return cases.iter().map(|_| Some(Outcome::Error(msg.clone()))).collect();
        }
    };
    cases
        .iter()
        .map(|case| {
            if !operators && !case.id().is_vector() {
                return None;
            }
            Some(outcome(draw.evaluate(case, config.tolerance)))
        })
        .collect()
}

fn run_ensemble(cases: &[BoundCase], spec: &EnsembleSpec, config: &SuiteConfig) -> Vec<EntryReport> {
    // a deterministic family yields one matrix; operator cases are evaluated
    // once and their outcome counted for every draw
    let once = spec.family.is_deterministic();
    let outcomes: Vec<Vec<Option<Outcome>>> = (0..spec.count)
        .into_par_iter()
        .map(|i| evaluate_index(cases, spec, i, config, !once || i == 0))
        .collect();
    let mut entries: Vec<EntryReport> = cases.iter().map(|c| EntryReport::new(c, spec)).collect();
    for (i, row) in outcomes.iter().enumerate() {
        for (k, o) in row.iter().enumerate() {
            let o = match o {
                Some(o) => o,
                None => outcomes[0][k].as_ref().expect("first draw evaluates every case"),
            };
            entries[k].add(o, i, config.witness_limit);
        }
    }
    for e in &mut entries {
        e.finish();
    }
    entries
}

/// Runs every case on every ensemble. The report is a pure function of the
/// config apart from `wall_time_ms`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    let start = Instant::now();
    let cases = config.expand_cases()?;
    let ensembles = config.expand_ensembles()?;
    let body = || -> Vec<EntryReport> {
        let mut entries = Vec::with_capacity(cases.len() * ensembles.len());
        for spec in &ensembles {
            entries.extend(run_ensemble(&cases, spec, config));
        }
        entries
    };
    let entries = match config.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
            pool.install(body)
        }
        None => body(),
    };
    // order entries by case first so one case's ensembles sit together
    let mut keyed: Vec<(usize, usize, EntryReport)> = entries
        .into_iter()
        .enumerate()
        .map(|(k, e)| (k % cases.len(), k / cases.len(), e))
        .collect();
    keyed.sort_by_key(|(c, s, _)| (*c, *s));
    let entries = keyed.into_iter().map(|(_, _, e)| e).collect();
    let wall = start.elapsed().as_millis() as u64;
    Ok(SuiteReport::assemble(config.clone(), entries, wall))
}
