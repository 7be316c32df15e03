//! Parameter sweeps over generated benchmarks.
//!
//! A sweep varies one generator parameter over a list of values (one cell
//! per value). Each cell generates `instances` graphs and runs detection
//! `seeds` times on each, appending one [`RunRecord`] per run. All seeds are
//! derived from the master seed and the run's coordinates, so cells and runs
//! can be reordered without changing any result.

use std::io::Write;
use std::time::Instant;

use locness_core::detect::{DetectConfig, Preference, TiePolicy};
use locness_core::{generate, seed, GenParams};
use serde::{Deserialize, Serialize};

use crate::pipeline::detect_checked;
use crate::scores::score;

/// Bumped whenever the CSV columns change.
pub const SCHEMA_VERSION: u32 = 1;

const GRAPH_STREAM: u64 = 1;
const DETECT_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    N,
    Mu,
    AvgDegree,
    ON,
    OM,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::N => "n",
            Self::Mu => "mu",
            Self::AvgDegree => "avg_degree",
            Self::ON => "o_n",
            Self::OM => "o_m",
        }
    }

    fn apply(self, p: &mut GenParams, value: f64) {
        match self {
            Self::N => p.n = value as usize,
            Self::Mu => p.mu = value,
            Self::AvgDegree => p.avg_degree = value,
            Self::ON => p.o_n = value,
            Self::OM => p.o_m = value as usize,
        }
    }
}

fn ten() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Parameter varied across cells.
    pub vary: Option<Parameter>,
    #[serde(default)]
    pub values: Vec<f64>,
    /// Generator settings shared by every cell; `base.seed` is ignored.
    #[serde(default)]
    pub base: GenParams,
    /// Graph instances per cell.
    #[serde(default = "ten")]
    pub instances: usize,
    /// Detection runs per instance.
    #[serde(default = "ten")]
    pub seeds: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub preference: Preference,
    #[serde(default)]
    pub tie_policy: TiePolicy,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SweepError {
    #[error("sweep config must name the parameter to vary (\"vary\")")]
    NoParameter,
    #[error("sweep config lists no values")]
    NoValues,
    #[error("sweep needs at least one instance and one seed per cell")]
    NoReplicates,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<Parameter, SweepError> {
        let vary = self.vary.ok_or(SweepError::NoParameter)?;
        if self.values.is_empty() {
            return Err(SweepError::NoValues);
        }
        if self.instances == 0 || self.seeds == 0 {
            return Err(SweepError::NoReplicates);
        }
        Ok(vary)
    }

    /// Scale down to 3 instances × 3 seeds.
    pub fn fast(mut self) -> Self {
        self.instances = self.instances.min(3);
        self.seeds = self.seeds.min(3);
        self
    }

    fn cell_params(&self, vary: Parameter, cell: usize, instance: usize) -> GenParams {
        let mut p = self.base.clone();
        vary.apply(&mut p, self.values[cell]);
        p.seed = seed::derive(self.master_seed, &[GRAPH_STREAM, cell as u64, instance as u64]);
        p
    }
}

/// One detection run. Score and stats columns are empty when `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub cell: usize,
    pub parameter: String,
    pub value: f64,
    pub instance: usize,
    pub replicate: usize,
    pub graph_id: String,
    pub graph_seed: u64,
    pub detect_seed: u64,
    pub n: usize,
    pub mu: f64,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub size_min: usize,
    pub size_max: usize,
    pub o_n: f64,
    pub o_m: usize,
    /// Realised edge count of the generated graph.
    pub edges: Option<usize>,
    pub preference: String,
    pub tie_policy: String,
    pub nmi: Option<f64>,
    pub omega: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub supersteps: Option<usize>,
    pub total_messages: Option<u64>,
    /// Per-superstep counts joined with `;`.
    pub messages_per_superstep: Option<String>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl RunRecord {
    fn new(cfg: &SweepConfig, vary: Parameter, cell: usize, instance: usize, replicate: usize, p: &GenParams) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            cell,
            parameter: vary.name().to_owned(),
            value: cfg.values[cell],
            instance,
            replicate,
            graph_id: format!("c{cell}-i{instance}"),
            graph_seed: p.seed,
            detect_seed: seed::derive(
                cfg.master_seed,
                &[DETECT_STREAM, cell as u64, instance as u64, replicate as u64],
            ),
            n: p.n,
            mu: p.mu,
            avg_degree: p.avg_degree,
            max_degree: p.max_degree,
            size_min: p.size_range.0,
            size_max: p.size_range.1,
            o_n: p.o_n,
            o_m: p.o_m,
            edges: None,
            preference: cfg.preference.name().to_owned(),
            tie_policy: cfg.tie_policy.name().to_owned(),
            nmi: None,
            omega: None,
            precision: None,
            recall: None,
            f1: None,
            supersteps: None,
            total_messages: None,
            messages_per_superstep: None,
            wall_ms: 0.0,
            error: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

/// Run every cell, handing each record to `sink` as soon as it exists.
/// Failures are recorded in the row and the sweep moves on.
pub fn run_sweep<F: FnMut(&RunRecord)>(cfg: &SweepConfig, mut sink: F) -> Result<Vec<RunRecord>, SweepError> {
    let vary = cfg.validate()?;
    let mut records = Vec::new();
    for cell in 0..cfg.values.len() {
        for instance in 0..cfg.instances {
            let p = cfg.cell_params(vary, cell, instance);
            let started = Instant::now();
            let generated = generate(&p);
            let gen_ms = started.elapsed().as_secs_f64() * 1e3;
            for replicate in 0..cfg.seeds {
                let mut rec = RunRecord::new(cfg, vary, cell, instance, replicate, &p);
                match &generated {
                    Err(e) => rec.error = Some(format!("generate: {e}")),
                    Ok((graph, truth)) => {
                        rec.edges = Some(graph.edge_count());
                        let det_cfg = DetectConfig {
                            seed: rec.detect_seed,
                            preference: cfg.preference,
                            tie_policy: cfg.tie_policy,
                            ..DetectConfig::default()
                        };
                        let started = Instant::now();
                        let outcome = detect_checked(graph, &det_cfg)
                            .map_err(|e| e.to_string())
                            .and_then(|d| {
                                let s = score(&d.cover, truth).map_err(|e| e.to_string())?;
                                Ok((d, s))
                            });
                        rec.wall_ms = started.elapsed().as_secs_f64() * 1e3;
                        match outcome {
                            Err(e) => rec.error = Some(e),
                            Ok((d, s)) => {
                                rec.nmi = Some(s.nmi);
                                rec.omega = Some(s.omega);
                                rec.precision = Some(s.precision);
                                rec.recall = Some(s.recall);
                                rec.f1 = Some(s.f1);
                                rec.supersteps = Some(d.stats.supersteps);
                                rec.total_messages = Some(d.stats.total_messages);
                                rec.messages_per_superstep = Some(
                                    d.stats
                                        .messages_per_superstep
                                        .iter()
                                        .map(u64::to_string)
                                        .collect::<Vec<_>>()
                                        .join(";"),
                                );
                            }
                        }
                    }
                }
                if replicate == 0 {
                    rec.wall_ms += gen_ms;
                }
                sink(&rec);
                records.push(rec);
            }
        }
    }
    Ok(records)
}

/// Mean scores of one cell over its successful runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub cell: usize,
    pub parameter: String,
    pub value: f64,
    pub runs: usize,
    pub failures: usize,
    pub nmi: f64,
    pub omega: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mean_messages: f64,
}

pub fn summarize(records: &[RunRecord]) -> Vec<CellSummary> {
    let cells = records.iter().map(|r| r.cell + 1).max().unwrap_or(0);
    (0..cells)
        .filter_map(|cell| {
            let rows: Vec<&RunRecord> = records.iter().filter(|r| r.cell == cell).collect();
            let first = rows.first()?;
            let ok: Vec<&&RunRecord> = rows.iter().filter(|r| !r.failed()).collect();
            let mean = |f: &dyn Fn(&RunRecord) -> f64| {
                if ok.is_empty() {
                    f64::NAN
                } else {
                    ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
                }
            };
            Some(CellSummary {
                cell,
                parameter: first.parameter.clone(),
                value: first.value,
                runs: rows.len(),
                failures: rows.len() - ok.len(),
                nmi: mean(&|r| r.nmi.unwrap_or(f64::NAN)),
                omega: mean(&|r| r.omega.unwrap_or(f64::NAN)),
                precision: mean(&|r| r.precision.unwrap_or(f64::NAN)),
                recall: mean(&|r| r.recall.unwrap_or(f64::NAN)),
                f1: mean(&|r| r.f1.unwrap_or(f64::NAN)),
                mean_messages: mean(&|r| r.total_messages.map_or(f64::NAN, |m| m as f64)),
            })
        })
        .collect()
}

/// CSV writer that always emits the header, even for an empty sweep.
pub struct CsvSink<W: Write> {
    inner: csv::Writer<W>,
}

/// Column names, in order.
pub const CSV_COLUMNS: [&str; 30] = [
    "schema_version",
    "cell",
    "parameter",
    "value",
    "instance",
    "replicate",
    "graph_id",
    "graph_seed",
    "detect_seed",
    "n",
    "mu",
    "avg_degree",
    "max_degree",
    "size_min",
    "size_max",
    "o_n",
    "o_m",
    "edges",
    "preference",
    "tie_policy",
    "nmi",
    "omega",
    "precision",
    "recall",
    "f1",
    "supersteps",
    "total_messages",
    "messages_per_superstep",
    "wall_ms",
    "error",
];

impl<W: Write> CsvSink<W> {
    pub fn new(out: W) -> csv::Result<Self> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        inner.write_record(CSV_COLUMNS)?;
        Ok(Self { inner })
    }

    pub fn append(&mut self, rec: &RunRecord) -> csv::Result<()> {
        self.inner.serialize(rec)?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W, csv::Error> {
        self.inner.into_inner().map_err(|e| csv::Error::from(e.into_error()))
    }
}
