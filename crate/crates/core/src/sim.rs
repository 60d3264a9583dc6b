//! Monte Carlo experiment harness: side-length sweeps over random
//! topologies, every scheme routed on the same per-trial layout, and
//! aggregation into plot-ready CSV.
//!
//! Reproducibility: each trial's topology comes from a ChaCha12 stream
//! seeded by the 32-byte block
//! `master_seed (le u64) || side-length index (le u64) || trial index
//! (le u64) || b"uownmc01"`, so any trial can be regenerated in isolation
//! and results are independent of execution order and thread count.
//! Aggregation always folds trials in (side length, trial, scheme) order.
//!
//! With the `parallel` feature (default) trials fan out across a rayon
//! pool; [`run_sweep_sequential`] is always compiled and produces
//! byte-identical output.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::benchmark::{dijkstra, tur_e2e, tur_graph};
use crate::channel::WaterChannelParams;
use crate::link::{LinkError, LinkModel, LinkTarget, TransceiverParams};
use crate::metrics::{EnergyDelayParams, MetricKind};
use crate::protocol::{E2eMetrics, RouteEngine, RouteMode};
use crate::topology::NetworkTopology;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Link(#[from] LinkError),
}

// ---------------------------------------------------------------------------
// Schemes and configuration
// ---------------------------------------------------------------------------

/// A routing scheme under comparison: the unicast baseline or
/// sector-based opportunistic routing under one metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Tur,
    Or(MetricKind),
}

impl Scheme {
    /// Display label, e.g. `TUR`, `LOR-EDP`, `GOR-ExNT`.
    pub fn label(&self) -> String {
        match self {
            Scheme::Tur => "TUR".to_string(),
            Scheme::Or(kind) => format!("{}-{}", kind.scope_label(), kind.label()),
        }
    }

    /// CSV columns (scheme, metric_kind).
    pub fn csv_fields(&self) -> (&'static str, &'static str) {
        match self {
            Scheme::Tur => ("TUR", "DSP"),
            Scheme::Or(kind) => (kind.scope_label(), kind.label()),
        }
    }

    /// Parse a label like `TUR`, `lor-dp`, or `GOR-ExNT`.
    pub fn parse(s: &str) -> Option<Scheme> {
        let up = s.trim().to_ascii_uppercase();
        if up == "TUR" {
            return Some(Scheme::Tur);
        }
        let (scope, kind) = up.split_once('-')?;
        let global = match scope {
            "LOR" => false,
            "GOR" => true,
            _ => return None,
        };
        let kind = match (kind, global) {
            ("DP", false) => MetricKind::Dp,
            ("EDP", false) => MetricKind::Edp,
            ("EEM", false) => MetricKind::EemLocal,
            ("LLM", false) => MetricKind::LlmLocal,
            ("EXNT", false) => MetricKind::ExntLocal,
            ("EEM", true) => MetricKind::EemGlobal,
            ("LLM", true) => MetricKind::LlmGlobal,
            ("EXNT", true) => MetricKind::ExntGlobal,
            _ => return None,
        };
        Some(Scheme::Or(kind))
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Deployment square side lengths to sweep, in m.
    pub side_lengths: Vec<f64>,
    /// Relay count per topology (source and sink are added on top).
    pub n_nodes: usize,
    /// Random layouts per side length.
    pub n_trials: u64,
    pub schemes: Vec<Scheme>,
    pub master_seed: u64,
    pub xcvr: TransceiverParams,
    pub water: WaterChannelParams,
    pub target: LinkTarget,
    pub max_retx: u32,
    pub energy: EnergyDelayParams,
}

impl Default for SimConfig {
    /// Desk-scale defaults: 1,000 trials of 50 relays per side length over
    /// the reference parameter set.
    fn default() -> Self {
        Self {
            side_lengths: vec![7.0, 8.0, 10.0, 12.0],
            n_nodes: 50,
            n_trials: 1000,
            schemes: vec![
                Scheme::Tur,
                Scheme::Or(MetricKind::Dp),
                Scheme::Or(MetricKind::Edp),
                Scheme::Or(MetricKind::ExntLocal),
                Scheme::Or(MetricKind::ExntGlobal),
            ],
            master_seed: 0x5ec7_0e00,
            xcvr: TransceiverParams::default(),
            water: WaterChannelParams {
                extinction_c: 0.1514,
                alpha: 0.5,
                wavelength: 532e-9,
            },
            target: LinkTarget::default(),
            max_retx: 3,
            energy: EnergyDelayParams::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<LinkModel, SimError> {
        if self.side_lengths.is_empty() {
            return Err(SimError::InvalidConfig("side_lengths must not be empty"));
        }
        if self.n_trials < 1 {
            return Err(SimError::InvalidConfig("n_trials must be >= 1"));
        }
        let model = LinkModel::new(self.xcvr, self.water, self.target, self.max_retx)?;
        model.d_max()?;
        Ok(model)
    }
}

// ---------------------------------------------------------------------------
// Trial execution
// ---------------------------------------------------------------------------

/// One scheme's outcome on one random layout.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub sl_index: usize,
    pub side_len: f64,
    pub trial: u64,
    pub scheme: Scheme,
    pub reached: bool,
    pub e2e: E2eMetrics,
}

/// The ChaCha12 generator for one (side length, trial) cell of the sweep.
pub fn trial_rng(master_seed: u64, sl_index: usize, trial: u64) -> ChaCha12Rng {
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&(sl_index as u64).to_le_bytes());
    seed[16..24].copy_from_slice(&trial.to_le_bytes());
    seed[24..32].copy_from_slice(b"uownmc01");
    ChaCha12Rng::from_seed(seed)
}

/// Regenerate the exact topology a sweep cell used.
pub fn trial_topology(
    cfg: &SimConfig,
    model: &LinkModel,
    sl_index: usize,
    trial: u64,
) -> Result<NetworkTopology, SimError> {
    let side_len = cfg.side_lengths[sl_index];
    let mut rng = trial_rng(cfg.master_seed, sl_index, trial);
    Ok(NetworkTopology::generate_random(
        side_len,
        cfg.n_nodes,
        model.d_max()?,
        &mut rng,
    ))
}

fn run_trial(
    cfg: &SimConfig,
    model: &LinkModel,
    sl_index: usize,
    trial: u64,
) -> Result<Vec<TrialRecord>, SimError> {
    let topo = trial_topology(cfg, model, sl_index, trial)?;
    let side_len = cfg.side_lengths[sl_index];
    let mut records = Vec::with_capacity(cfg.schemes.len());
    for &scheme in &cfg.schemes {
        let (reached, e2e) = match scheme {
            Scheme::Tur => {
                let graph = tur_graph(&topo, model)?;
                match dijkstra(&graph, topo.source, topo.dest) {
                    Some((path, _)) => {
                        let cost = crate::metrics::CostModel {
                            t_slot: model.t_slot(),
                            p_tx: model.xcvr.p_tx,
                            energy: cfg.energy,
                            max_retx: cfg.max_retx,
                        };
                        (true, tur_e2e(&path, &graph, &cost))
                    }
                    None => (false, E2eMetrics::identity()),
                }
            }
            Scheme::Or(kind) => {
                let mut engine = RouteEngine::new(&topo, model, kind, cfg.energy)
                    .map_err(|_| SimError::InvalidConfig("route engine construction"))?;
                let result = engine
                    .route(RouteMode::Expected)
                    .map_err(|_| SimError::InvalidConfig("routing"))?;
                (result.reached, result.e2e)
            }
        };
        records.push(TrialRecord {
            sl_index,
            side_len,
            trial,
            scheme,
            reached,
            e2e,
        });
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Mean and standard error of one end-to-end metric over discovered trials.
#[derive(Debug, Clone, Copy, Default)]
pub struct MetricStat {
    pub mean: Option<f64>,
    pub se: Option<f64>,
}

fn stat(values: &[f64]) -> MetricStat {
    if values.is_empty() {
        return MetricStat::default();
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let se = if values.len() >= 2 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        Some((var / n).sqrt())
    } else {
        None
    };
    MetricStat {
        mean: Some(mean),
        se,
    }
}

/// Aggregates for one (side length, scheme) cell.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub side_len: f64,
    pub scheme: Scheme,
    pub discovery_rate: f64,
    pub pdr: MetricStat,
    pub exnt: MetricStat,
    pub distance_m: MetricStat,
    pub energy_j: MetricStat,
    pub delay_s: MetricStat,
    pub n_discovered: u64,
    pub n_trials: u64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub trials: Vec<TrialRecord>,
}

impl SweepResult {
    pub fn row(&self, side_len: f64, scheme: Scheme) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.side_len == side_len && r.scheme == scheme)
    }
}

fn aggregate(cfg: &SimConfig, trials: Vec<TrialRecord>) -> SweepResult {
    let mut rows = Vec::with_capacity(cfg.side_lengths.len() * cfg.schemes.len());
    for (sl_index, &side_len) in cfg.side_lengths.iter().enumerate() {
        for &scheme in &cfg.schemes {
            let cell: Vec<&TrialRecord> = trials
                .iter()
                .filter(|t| t.sl_index == sl_index && t.scheme == scheme)
                .collect();
            let discovered: Vec<&&TrialRecord> = cell.iter().filter(|t| t.reached).collect();
            let pick = |f: fn(&E2eMetrics) -> f64| -> Vec<f64> {
                discovered.iter().map(|t| f(&t.e2e)).collect()
            };
            rows.push(SweepRow {
                side_len,
                scheme,
                discovery_rate: discovered.len() as f64 / cell.len().max(1) as f64,
                pdr: stat(&pick(|e| e.pdr)),
                exnt: stat(&pick(|e| e.exnt)),
                distance_m: stat(&pick(|e| e.distance_m)),
                energy_j: stat(&pick(|e| e.energy_j)),
                delay_s: stat(&pick(|e| e.delay_s)),
                n_discovered: discovered.len() as u64,
                n_trials: cell.len() as u64,
            });
        }
    }
    SweepResult { rows, trials }
}

// ---------------------------------------------------------------------------
// Sweep drivers
// ---------------------------------------------------------------------------

fn job_list(cfg: &SimConfig) -> Vec<(usize, u64)> {
    let mut jobs = Vec::with_capacity(cfg.side_lengths.len() * cfg.n_trials as usize);
    for sl_index in 0..cfg.side_lengths.len() {
        for trial in 0..cfg.n_trials {
            jobs.push((sl_index, trial));
        }
    }
    jobs
}

/// Run the sweep on the current thread only.
pub fn run_sweep_sequential(cfg: &SimConfig) -> Result<SweepResult, SimError> {
    let model = cfg.validate()?;
    let mut trials = Vec::with_capacity(job_list(cfg).len() * cfg.schemes.len());
    for (sl_index, trial) in job_list(cfg) {
        trials.extend(run_trial(cfg, &model, sl_index, trial)?);
    }
    Ok(aggregate(cfg, trials))
}

/// Run the sweep across the rayon pool. Trial seeds are position-derived
/// and the collected order is the job order, so output is identical to the
/// sequential driver for any thread count.
#[cfg(feature = "parallel")]
pub fn run_sweep_parallel(cfg: &SimConfig) -> Result<SweepResult, SimError> {
    use rayon::prelude::*;
    let model = cfg.validate()?;
    let nested: Vec<Vec<TrialRecord>> = job_list(cfg)
        .par_iter()
        .map(|&(sl_index, trial)| run_trial(cfg, &model, sl_index, trial))
        .collect::<Result<_, _>>()?;
    Ok(aggregate(cfg, nested.into_iter().flatten().collect()))
}

/// Default driver: parallel when the feature is on, sequential otherwise.
pub fn run_sweep(cfg: &SimConfig) -> Result<SweepResult, SimError> {
    #[cfg(feature = "parallel")]
    {
        run_sweep_parallel(cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_sweep_sequential(cfg)
    }
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

pub const SUMMARY_HEADER: &str = "side_len,scheme,metric_kind,discovery_rate,mean_pdr,se_pdr,\
mean_exnt,se_exnt,mean_distance_m,se_distance_m,mean_energy_j,se_energy_j,mean_delay_s,\
se_delay_s,n_discovered,n_trials";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Flatten sweep rows to CSV (full-precision decimal; empty cells where a
/// statistic is undefined).
pub fn write_summary_csv(result: &SweepResult) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in &result.rows {
        let (scheme, kind) = r.scheme.csv_fields();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.side_len,
            scheme,
            kind,
            r.discovery_rate,
            opt(r.pdr.mean),
            opt(r.pdr.se),
            opt(r.exnt.mean),
            opt(r.exnt.se),
            opt(r.distance_m.mean),
            opt(r.distance_m.se),
            opt(r.energy_j.mean),
            opt(r.energy_j.se),
            opt(r.delay_s.mean),
            opt(r.delay_s.se),
            r.n_discovered,
            r.n_trials,
        ));
    }
    out
}

pub const TRIALS_HEADER: &str =
    "side_len,trial,scheme,metric_kind,reached,pdr,exnt,distance_m,energy_j,delay_s,hops";

/// Raw per-trial records for audit and recomputation of the summary.
pub fn write_trials_csv(result: &SweepResult) -> String {
    let mut out = String::from(TRIALS_HEADER);
    out.push('\n');
    for t in &result.trials {
        let (scheme, kind) = t.scheme.csv_fields();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            t.side_len,
            t.trial,
            scheme,
            kind,
            t.reached,
            t.e2e.pdr,
            t.e2e.exnt,
            t.e2e.distance_m,
            t.e2e.energy_j,
            t.e2e.delay_s,
            t.e2e.hop_count,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> SimConfig {
        SimConfig {
            side_lengths: vec![5.0, 9.0],
            n_nodes: 12,
            n_trials: 20,
            ..SimConfig::default()
        }
    }

    #[test]
    fn schemes_parse_round_trip() {
        for label in [
            "TUR", "LOR-DP", "LOR-EDP", "LOR-EEM", "LOR-LLM", "LOR-ExNT", "GOR-EEM", "GOR-LLM",
            "GOR-ExNT",
        ] {
            let s = Scheme::parse(label).expect(label);
            assert_eq!(s.label(), label);
        }
        assert!(Scheme::parse("XOR-DP").is_none());
        assert!(Scheme::parse("GOR-DP").is_none(), "DP has no global form");
    }

    #[test]
    fn schemes_share_each_trial_topology() {
        let cfg = tiny_config();
        let model = cfg.validate().unwrap();
        let a = trial_topology(&cfg, &model, 1, 7).unwrap();
        let b = trial_topology(&cfg, &model, 1, 7).unwrap();
        for (na, nb) in a.nodes.iter().zip(&b.nodes) {
            assert_eq!(na.pos, nb.pos);
        }
        // Different cells draw different layouts.
        let c = trial_topology(&cfg, &model, 0, 7).unwrap();
        assert!(a.nodes[2].pos != c.nodes[2].pos);
    }

    #[test]
    fn sweep_is_deterministic_and_matches_sequential() {
        let cfg = tiny_config();
        let s1 = write_summary_csv(&run_sweep(&cfg).unwrap());
        let s2 = write_summary_csv(&run_sweep(&cfg).unwrap());
        assert_eq!(s1, s2);
        let seq = write_summary_csv(&run_sweep_sequential(&cfg).unwrap());
        assert_eq!(s1, seq);
    }

    #[test]
    fn degenerate_small_square_always_discovers() {
        // Side length far below the maximum range: one direct hop for every
        // scheme on every trial.
        let cfg = SimConfig {
            side_lengths: vec![1.0],
            n_nodes: 3,
            n_trials: 25,
            ..SimConfig::default()
        };
        let result = run_sweep(&cfg).unwrap();
        for row in &result.rows {
            assert_eq!(row.discovery_rate, 1.0, "{}", row.scheme.label());
            assert_eq!(row.n_discovered, 25);
        }
    }

    #[test]
    fn row_count_and_header_shape() {
        let cfg = tiny_config();
        let result = run_sweep(&cfg).unwrap();
        assert_eq!(
            result.rows.len(),
            cfg.side_lengths.len() * cfg.schemes.len()
        );
        let csv = write_summary_csv(&result);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), SUMMARY_HEADER);
        assert_eq!(csv.lines().count(), 1 + result.rows.len());
        assert_eq!(
            SUMMARY_HEADER.split(',').count(),
            csv.lines().nth(1).unwrap().split(',').count()
        );
    }

    #[test]
    fn summary_recomputable_from_trial_log() {
        let cfg = tiny_config();
        let result = run_sweep(&cfg).unwrap();
        // Spot-check one row against a recomputation from the raw records.
        let row = &result.rows[3];
        let values: Vec<f64> = result
            .trials
            .iter()
            .filter(|t| t.side_len == row.side_len && t.scheme == row.scheme && t.reached)
            .map(|t| t.e2e.exnt)
            .collect();
        assert_eq!(values.len() as u64, row.n_discovered);
        if let Some(mean) = row.exnt.mean {
            let recomputed = values.iter().sum::<f64>() / values.len() as f64;
            assert!((mean - recomputed).abs() < 1e-12);
        }
        let trials_csv = write_trials_csv(&result);
        assert_eq!(
            trials_csv.lines().count() as u64,
            1 + cfg.n_trials * cfg.side_lengths.len() as u64 * cfg.schemes.len() as u64
        );
    }

    #[test]
    fn empty_scheme_list_yields_header_only_csv() {
        let cfg = SimConfig {
            schemes: vec![],
            ..tiny_config()
        };
        let csv = write_summary_csv(&run_sweep(&cfg).unwrap());
        assert_eq!(csv, format!("{SUMMARY_HEADER}\n"));
    }
}
