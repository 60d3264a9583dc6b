//! `sector` — link-budget queries, single-topology routing with full hop
//! traces, topology generation, and Monte Carlo side-length sweeps for
//! sector-based opportunistic routing in underwater optical networks.
//!
//! Exit codes: 0 success (a failed route is data, not an error), 1 for
//! infeasible-link/domain errors, 2 for usage and configuration errors.

mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sector_core::benchmark::{dijkstra, tur_e2e, tur_graph};
use sector_core::link::{exnt_unicast, LinkModel};
use sector_core::metrics::CostModel;
use sector_core::protocol::{RouteEngine, RouteMode, RouteResult};
use sector_core::sim::{
    run_sweep, trial_rng, write_summary_csv, write_trials_csv, Scheme, SimConfig,
};
use sector_core::topology::{from_text, to_text, NetworkTopology};

use config::{parse_config, FileConfig};

#[derive(Parser)]
#[command(
    name = "sector",
    version,
    about = "Sector-based opportunistic routing simulator for underwater optical wireless networks"
)]
struct Cli {
    /// Key=value parameter file; command-line flags override its values.
    #[arg(long, global = true, env = "SECTOR_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a link-budget table (gain, BER, PER, PDR, ExNT, max range)
    /// over distance / divergence-angle grids.
    Link(LinkCmd),
    /// Route one topology and print the hop trace as JSON.
    Route(RouteCmd),
    /// Generate a random topology file.
    TopoGen(TopoGenCmd),
    /// Run a Monte Carlo side-length sweep and write summary CSV.
    Sweep(SweepCmd),
}

#[derive(Args)]
struct LinkCmd {
    /// Divergence angle in rad.
    #[arg(long, default_value_t = 0.336)]
    theta: f64,
    /// Sweep of divergence angles `start:stop:count` (overrides --theta).
    #[arg(long)]
    sweep_theta: Option<String>,
    /// Transmitter-receiver distance in m.
    #[arg(long, default_value_t = 2.0)]
    distance: f64,
    /// Sweep of distances `start:stop:count` (overrides --distance).
    #[arg(long)]
    sweep_distance: Option<String>,
    /// Misalignment angle in rad.
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Scattered-ray correction exponent override.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct RouteCmd {
    /// Topology file (as written by topo-gen); otherwise one is generated.
    #[arg(long)]
    topo: Option<PathBuf>,
    /// Deployment square side length in m (generated topologies).
    #[arg(long, default_value_t = 10.0)]
    side_len: f64,
    /// Relay count (generated topologies).
    #[arg(long, default_value_t = 50)]
    n_nodes: usize,
    /// Topology generation seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// TUR, LOR-{DP,EDP,EEM,LLM,ExNT}, or GOR-{EEM,LLM,ExNT}.
    #[arg(long, default_value = "LOR-EDP")]
    scheme: String,
    /// Forwarder advance rule: expected | stochastic.
    #[arg(long, default_value = "expected")]
    mode: String,
    /// Reception-draw seed for stochastic mode.
    #[arg(long, default_value_t = 0)]
    route_seed: u64,
    /// Scattered-ray correction exponent override.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct TopoGenCmd {
    #[arg(long, default_value_t = 10.0)]
    side_len: f64,
    #[arg(long, default_value_t = 50)]
    n_nodes: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepCmd {
    /// Summary CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write raw per-trial records for audit.
    #[arg(long)]
    dump_trials: Option<PathBuf>,
    /// Trials per side length (override).
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed (override).
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated side lengths in m (override).
    #[arg(long)]
    side_lengths: Option<String>,
    /// Comma-separated scheme labels (override).
    #[arg(long)]
    schemes: Option<String>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file_cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text).map_err(usage)?
        }
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Link(args) => cmd_link(args, file_cfg),
        Command::Route(args) => cmd_route(args, file_cfg),
        Command::TopoGen(args) => cmd_topo_gen(args, file_cfg),
        Command::Sweep(args) => cmd_sweep(args, file_cfg),
    }
}

fn build_model(sim: &SimConfig) -> Result<LinkModel, Failure> {
    LinkModel::new(sim.xcvr, sim.water, sim.target, sim.max_retx).map_err(usage)
}

fn cost_model(sim: &SimConfig, model: &LinkModel) -> CostModel {
    CostModel {
        t_slot: model.t_slot(),
        p_tx: model.xcvr.p_tx,
        energy: sim.energy,
        max_retx: sim.max_retx,
    }
}

/// Parse `start:stop:count` into an inclusive linear grid.
fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("grid {spec:?} must be start:stop:count")));
    }
    let start: f64 = parts[0].parse().map_err(usage)?;
    let stop: f64 = parts[1].parse().map_err(usage)?;
    let count: usize = parts[2].parse().map_err(usage)?;
    if count == 0 {
        return Err(usage("grid count must be >= 1"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect())
}

// ---------------------------------------------------------------------------
// link
// ---------------------------------------------------------------------------

fn cmd_link(args: LinkCmd, mut cfg: FileConfig) -> Result<(), Failure> {
    if let Some(alpha) = args.alpha {
        cfg.sim.water.alpha = alpha;
    }
    let model = build_model(&cfg.sim)?;
    let thetas = match &args.sweep_theta {
        Some(spec) => parse_grid(spec)?,
        None => vec![args.theta],
    };
    let distances = match &args.sweep_distance {
        Some(spec) => parse_grid(spec)?,
        None => vec![args.distance],
    };

    println!(
        "{:>10} {:>10} {:>8} {:>13} {:>13} {:>13} {:>13} {:>10} {:>12}",
        "theta_rad", "dist_m", "phi_rad", "gain", "ber", "per", "pdr", "exnt", "max_range_m"
    );
    for &theta in &thetas {
        // Tolerate rounded boundary values (e.g. 0.667 for 2/3) by
        // clamping anything within a milliradian of the limits.
        if theta < model.xcvr.theta_min - 1e-3 || theta > model.xcvr.theta_max + 1e-3 {
            return Err(usage(format!(
                "theta {theta} outside [{}, {}]",
                model.xcvr.theta_min, model.xcvr.theta_max
            )));
        }
        let theta = theta.clamp(model.xcvr.theta_min, model.xcvr.theta_max);
        let range = model.max_range(theta, args.phi).map_err(domain)?;
        for &distance in &distances {
            let budget = model.budget_at(distance, args.phi, theta).map_err(domain)?;
            let gain = model.gain_at(distance, args.phi, theta).map_err(domain)?;
            println!(
                "{:>10.6} {:>10.4} {:>8.4} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e} {:>10.4} {:>12.6}",
                theta,
                distance,
                args.phi,
                gain,
                budget.ber,
                budget.per,
                budget.pdr,
                exnt_unicast(budget.per, model.max_retx),
                range,
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// route
// ---------------------------------------------------------------------------

fn load_or_generate_topology(
    topo: &Option<PathBuf>,
    side_len: f64,
    n_nodes: usize,
    seed: u64,
    model: &LinkModel,
) -> Result<NetworkTopology, Failure> {
    match topo {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            from_text(&text).map_err(usage)
        }
        None => {
            let d_max = model.d_max().map_err(domain)?;
            let mut rng = trial_rng(seed, 0, 0);
            Ok(NetworkTopology::generate_random(
                side_len, n_nodes, d_max, &mut rng,
            ))
        }
    }
}

fn route_to_json(scheme: &str, mode: &str, result: &RouteResult) -> serde_json::Value {
    json!({
        "scheme": scheme,
        "mode": mode,
        "reached": result.reached,
        "e2e": {
            "pdr": result.e2e.pdr,
            "exnt": result.e2e.exnt,
            "distance_m": result.e2e.distance_m,
            "energy_j": result.e2e.energy_j,
            "delay_s": result.e2e.delay_s,
            "hop_count": result.e2e.hop_count,
        },
        "hops": result.hops.iter().map(|hop| json!({
            "forwarder": hop.forwarder,
            "chosen_next": hop.chosen_next,
            "sector": {
                "apex": [hop.sector().apex.x, hop.sector().apex.y],
                "pointing_psi": hop.sector().pointing_psi,
                "divergence_theta": hop.sector().divergence_theta,
            },
            "fitness": hop.prioritized_cs.fitness,
            "candidates": hop.prioritized_cs.per_member.iter().map(|m| json!({
                "node": m.node,
                "pdr": m.pdr,
                "sfr": m.sfr,
                "score": m.score,
            })).collect::<Vec<_>>(),
            "metrics": {
                "pdr_bc": hop.metrics.pdr_bc,
                "exnt_bc": hop.metrics.exnt_bc,
                "distance_m": hop.metrics.distance_m,
                "energy_j": hop.metrics.energy_j,
                "delay_s": hop.metrics.delay_s,
            },
        })).collect::<Vec<_>>(),
    })
}

/// The unicast baseline reported in the same trace shape: each hop is a
/// single-member candidate set pointed straight at the next node.
fn tur_route(topo: &NetworkTopology, model: &LinkModel, cost: &CostModel) -> serde_json::Value {
    let graph = match tur_graph(topo, model) {
        Ok(g) => g,
        Err(e) => {
            return json!({ "scheme": "TUR", "reached": false, "error": e.to_string() });
        }
    };
    match dijkstra(&graph, topo.source, topo.dest) {
        None => json!({
            "scheme": "TUR",
            "mode": "expected",
            "reached": false,
            "e2e": serde_json::Value::Null,
            "hops": [],
        }),
        Some((path, total)) => {
            let e2e = tur_e2e(&path, &graph, cost);
            json!({
                "scheme": "TUR",
                "mode": "expected",
                "reached": true,
                "total_distance_m": total,
                "path": path,
                "e2e": {
                    "pdr": e2e.pdr,
                    "exnt": e2e.exnt,
                    "distance_m": e2e.distance_m,
                    "energy_j": e2e.energy_j,
                    "delay_s": e2e.delay_s,
                    "hop_count": e2e.hop_count,
                },
            })
        }
    }
}

fn cmd_route(args: RouteCmd, mut cfg: FileConfig) -> Result<(), Failure> {
    if let Some(alpha) = args.alpha {
        cfg.sim.water.alpha = alpha;
    }
    let scheme = Scheme::parse(&args.scheme)
        .ok_or_else(|| usage(format!("unknown scheme {:?}", args.scheme)))?;
    let model = build_model(&cfg.sim)?;
    let topo =
        load_or_generate_topology(&args.topo, args.side_len, args.n_nodes, args.seed, &model)?;

    let trace = match scheme {
        Scheme::Tur => {
            if args.mode != "expected" {
                return Err(usage("TUR routing supports --mode expected only"));
            }
            tur_route(&topo, &model, &cost_model(&cfg.sim, &model))
        }
        Scheme::Or(kind) => {
            let mode = match args.mode.as_str() {
                "expected" => RouteMode::Expected,
                "stochastic" => RouteMode::Stochastic {
                    seed: args.route_seed,
                },
                other => return Err(usage(format!("unknown mode {other:?}"))),
            };
            let mut engine =
                RouteEngine::new(&topo, &model, kind, cfg.sim.energy).map_err(domain)?;
            let result = engine.route(mode).map_err(domain)?;
            route_to_json(&scheme.label(), &args.mode, &result)
        }
    };
    println!("{}", serde_json::to_string_pretty(&trace).expect("json"));
    Ok(())
}

// ---------------------------------------------------------------------------
// topo-gen
// ---------------------------------------------------------------------------

fn cmd_topo_gen(args: TopoGenCmd, cfg: FileConfig) -> Result<(), Failure> {
    let model = build_model(&cfg.sim)?;
    let d_max = model.d_max().map_err(domain)?;
    let mut rng = trial_rng(args.seed, 0, 0);
    let topo = NetworkTopology::generate_random(args.side_len, args.n_nodes, d_max, &mut rng);
    let text = to_text(&topo);
    match args.out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn cmd_sweep(args: SweepCmd, mut cfg: FileConfig) -> Result<(), Failure> {
    if let Some(trials) = args.trials {
        cfg.sim.n_trials = trials;
    }
    if let Some(seed) = args.seed {
        cfg.sim.master_seed = seed;
    }
    if let Some(spec) = &args.side_lengths {
        cfg.sim.side_lengths = spec
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(usage))
            .collect::<Result<_, _>>()?;
    }
    if let Some(spec) = &args.schemes {
        cfg.sim.schemes = spec
            .split(',')
            .map(|s| Scheme::parse(s).ok_or_else(|| usage(format!("unknown scheme {s:?}"))))
            .collect::<Result<_, _>>()?;
    }

    let result = run_sweep(&cfg.sim).map_err(usage)?;
    let summary = write_summary_csv(&result);
    match &args.out {
        Some(path) => {
            fs::write(path, &summary)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {} rows to {}", result.rows.len(), path.display());
        }
        None => print!("{summary}"),
    }
    if let Some(path) = &args.dump_trials {
        fs::write(path, write_trials_csv(&result))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
