//! Monte Carlo driver: trials, parameter sweeps, op-count scaling and CSV
//! output.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::evaluator::{brute_force_optimal, cellular_only_metrics, check_oracle_size, per_ue_metrics, TrialMetrics};
use crate::ops::OpCounter;
use crate::radio::{compute_gains, LinkGains};
use crate::rng::{self, Purpose};
use crate::scenario::generate_drop;
use crate::{conflict_graph, hypergraph_alloc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    Graph,
    Hypergraph,
    Optimal,
    NoD2d,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Graph, Algorithm::Hypergraph, Algorithm::Optimal, Algorithm::NoD2d];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Graph => "graph",
            Algorithm::Hypergraph => "hypergraph",
            Algorithm::Optimal => "optimal",
            Algorithm::NoD2d => "no-d2d",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_owned()))
    }
}

/// Parses a comma-separated list such as `graph,hypergraph`. Duplicates
/// are dropped, order is kept.
pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    let mut out = Vec::new();
    for name in list.split(',').filter(|s| !s.trim().is_empty()) {
        let a: Algorithm = name.parse()?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err(Error::NoAlgorithms);
    }
    Ok(out)
}

/// One algorithm's outcome on one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub algorithm: Algorithm,
    pub metrics: TrialMetrics,
    pub ops: OpCounter,
}

/// Drop and fading realization for trial `trial_index`.
pub fn trial_gains(config: &SimConfig, trial_index: u64) -> LinkGains {
    let drop = generate_drop(config, trial_index);
    let mut fading = rng::stream(config.master_seed, trial_index, Purpose::Fading);
    compute_gains(&drop, config, &mut fading)
}

/// Runs every algorithm on trial `trial_index`.
pub fn run_trial(config: &SimConfig, trial_index: u64, algorithms: &[Algorithm]) -> Result<Vec<TrialOutcome>> {
    let gains = trial_gains(config, trial_index);
    algorithms
        .iter()
        .map(|&algorithm| {
            let mut ops = OpCounter::default();
            let metrics = match algorithm {
                Algorithm::Graph => {
                    let mut r = rng::stream(config.master_seed, trial_index, Purpose::GraphColoring);
                    let alloc = conflict_graph::allocate_counted(&gains, config, &mut r, &mut ops);
                    per_ue_metrics(&alloc, &gains, config)?
                }
                Algorithm::Hypergraph => {
                    let mut r = rng::stream(config.master_seed, trial_index, Purpose::HypergraphColoring);
                    let alloc = hypergraph_alloc::allocate_counted(&gains, config, &mut r, &mut ops);
                    per_ue_metrics(&alloc, &gains, config)?
                }
                Algorithm::Optimal => {
                    let (alloc, _) = brute_force_optimal(&gains, config)?;
                    per_ue_metrics(&alloc, &gains, config)?
                }
                Algorithm::NoD2d => cellular_only_metrics(&gains, config),
            };
            Ok(TrialOutcome { algorithm, metrics, ops })
        })
        .collect()
}

/// Per-algorithm aggregate over `n_trials` drops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub n_trials: usize,
    pub mean_capacity: f64,
    /// Standard error of the mean capacity.
    pub std_err: f64,
    pub mean_cellular_outage: f64,
    pub mean_d2d_outage: f64,
    pub mean_construction_ops: f64,
    pub mean_coloring_ops: f64,
    /// Per-trial values, trial order.
    pub capacities: Vec<f64>,
    pub cellular_outages: Vec<usize>,
    pub d2d_outages: Vec<usize>,
    /// Per-UE throughput samples, trial-major.
    pub cellular_throughputs: Vec<f64>,
    pub d2d_throughputs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub config: SimConfig,
    pub summaries: Vec<AlgorithmSummary>,
}

impl AggregateResult {
    pub fn summary(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }
}

/// Mean and standard error of the mean. The error is 0 for fewer than
/// two samples.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn mean_of<T: Copy + Into<f64>>(xs: impl IntoIterator<Item = T>) -> f64 {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x.into(), n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Runs `config.n_trials` drops (in parallel) and aggregates per algorithm.
/// The result depends only on `config` and `algorithms`.
pub fn run_trials(config: &SimConfig, algorithms: &[Algorithm]) -> Result<AggregateResult> {
    config.validate()?;
    if algorithms.is_empty() {
        return Err(Error::NoAlgorithms);
    }
    if algorithms.contains(&Algorithm::Optimal) {
        check_oracle_size(config.n_vertices(), config.n_channels)?;
    }
    let trials: Vec<Vec<TrialOutcome>> = (0..config.n_trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, t, algorithms))
        .collect::<Result<_>>()?;

    let n = config.n_cellular;
    let summaries = algorithms
        .iter()
        .enumerate()
        .map(|(i, &algorithm)| {
            let outcomes: Vec<&TrialOutcome> = trials.iter().map(|t| &t[i]).collect();
            let capacities: Vec<f64> = outcomes.iter().map(|o| o.metrics.cell_capacity).collect();
            let (mean_capacity, std_err) = mean_and_se(&capacities);
            let cellular_outages: Vec<usize> = outcomes.iter().map(|o| o.metrics.n_cellular_outage).collect();
            let d2d_outages: Vec<usize> = outcomes.iter().map(|o| o.metrics.n_d2d_outage).collect();
            AlgorithmSummary {
                algorithm,
                n_trials: outcomes.len(),
                mean_capacity,
                std_err,
                mean_cellular_outage: mean_of(cellular_outages.iter().map(|&x| x as f64)),
                mean_d2d_outage: mean_of(d2d_outages.iter().map(|&x| x as f64)),
                mean_construction_ops: mean_of(outcomes.iter().map(|o| o.ops.construction as f64)),
                mean_coloring_ops: mean_of(outcomes.iter().map(|o| o.ops.coloring as f64)),
                capacities,
                cellular_outages,
                d2d_outages,
                cellular_throughputs: outcomes.iter().flat_map(|o| o.metrics.cellular(n).to_vec()).collect(),
                d2d_throughputs: outcomes.iter().flat_map(|o| o.metrics.d2d(n).to_vec()).collect(),
            }
        })
        .collect();
    Ok(AggregateResult {
        config: config.clone(),
        summaries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParam {
    N,
    M,
    K,
    Q,
    EtaDb,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::N => "N",
            SweepParam::M => "M",
            SweepParam::K => "K",
            SweepParam::Q => "Q",
            SweepParam::EtaDb => "eta_db",
        }
    }

    /// Copy of `base` with this parameter set to `value`. `eta_db` sets
    /// both the eNB and the D2D receiver thresholds.
    pub fn apply(&self, base: &SimConfig, value: f64) -> Result<SimConfig> {
        let mut c = base.clone();
        let count = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::InvalidConfig(format!("{} needs a non-negative integer, got {value}", self.name())))
            }
        };
        match self {
            SweepParam::N => c.n_cellular = count()?,
            SweepParam::M => c.n_d2d_pairs = count()?,
            SweepParam::K => c.n_channels = count()?,
            SweepParam::Q => c.q_cumulative = count()?,
            SweepParam::EtaDb => {
                c.eta_c_db = value;
                c.eta_d_db = value;
            }
        }
        c.validate()?;
        Ok(c)
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "N" => Ok(SweepParam::N),
            "M" => Ok(SweepParam::M),
            "K" => Ok(SweepParam::K),
            "Q" => Ok(SweepParam::Q),
            "eta_db" => Ok(SweepParam::EtaDb),
            other => Err(Error::UnknownParameter(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub swept_parameter: SweepParam,
    pub values: Vec<f64>,
    pub base_config: SimConfig,
    pub algorithms: Vec<Algorithm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub result: AggregateResult,
}

/// Runs every sweep value. Point `i` uses master seed
/// `derive_seed(base.master_seed, i)`, so points draw independent streams.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    if spec.values.is_empty() {
        return Err(Error::InvalidConfig("sweep has no values".into()));
    }
    if spec.algorithms.is_empty() {
        return Err(Error::NoAlgorithms);
    }
    let configs = spec
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut c = spec.swept_parameter.apply(&spec.base_config, v)?;
            c.master_seed = rng::derive_seed(spec.base_config.master_seed, i as u64);
            if spec.algorithms.contains(&Algorithm::Optimal) {
                check_oracle_size(c.n_vertices(), c.n_channels)?;
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    spec.values
        .iter()
        .zip(&configs)
        .map(|(&value, c)| {
            Ok(SweepPoint {
                value,
                result: run_trials(c, &spec.algorithms)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpCountRow {
    pub n_plus_m: usize,
    pub algorithm: Algorithm,
    /// `construction`, `coloring` or `total`.
    pub phase: String,
    /// Mean over the config's trials.
    pub op_count: f64,
}

/// Mean counted operations of the graph and hypergraph pipelines for each
/// config, split by phase.
pub fn op_count_scaling(configs: &[SimConfig]) -> Result<Vec<OpCountRow>> {
    let algorithms = [Algorithm::Graph, Algorithm::Hypergraph];
    let mut rows = Vec::new();
    for config in configs {
        let result = run_trials(config, &algorithms)?;
        for s in &result.summaries {
            for (phase, op_count) in [
                ("construction", s.mean_construction_ops),
                ("coloring", s.mean_coloring_ops),
                ("total", s.mean_construction_ops + s.mean_coloring_ops),
            ] {
                rows.push(OpCountRow {
                    n_plus_m: config.n_vertices(),
                    algorithm: s.algorithm,
                    phase: phase.to_owned(),
                    op_count,
                });
            }
        }
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub const CAPACITY_HEADER: [&str; 7] = [
    "param_value",
    "algorithm",
    "mean_capacity_bps_hz",
    "std_err",
    "n_trials",
    "mean_cellular_outage",
    "mean_d2d_outage",
];
pub const CDF_HEADER: [&str; 3] = ["algorithm", "ue_class", "throughput_bps_hz"];
pub const OP_COUNT_HEADER: [&str; 4] = ["n_plus_m", "algorithm", "phase", "op_count"];

/// Capacity grid rows, one per (point, algorithm).
pub fn write_capacity_csv<W: Write>(out: W, points: &[(String, &AggregateResult)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CAPACITY_HEADER)?;
    for (value, result) in points {
        for s in &result.summaries {
            w.write_record([
                value.clone(),
                s.algorithm.to_string(),
                s.mean_capacity.to_string(),
                s.std_err.to_string(),
                s.n_trials.to_string(),
                s.mean_cellular_outage.to_string(),
                s.mean_d2d_outage.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Per-UE throughput samples, one row per UE per trial.
pub fn write_cdf_csv<W: Write>(out: W, result: &AggregateResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CDF_HEADER)?;
    for s in &result.summaries {
        for (class, samples) in [("cellular", &s.cellular_throughputs), ("d2d", &s.d2d_throughputs)] {
            for t in samples {
                w.write_record([s.algorithm.name(), class, &t.to_string()])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_op_count_csv<W: Write>(out: W, rows: &[OpCountRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(OP_COUNT_HEADER)?;
    for r in rows {
        w.write_record([r.n_plus_m.to_string(), r.algorithm.to_string(), r.phase.clone(), r.op_count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Formats a sweep value for the `param_value` column: integers without a
/// decimal point.
pub fn format_param_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        v.to_string()
    }
}
