//! The per-hop routing engine: candidate filtering against the search
//! space, pointing-angle and divergence-angle selection, candidate
//! prioritization, forwarder advance, and end-to-end route assembly.
//!
//! Local metrics rank sectors with one-hop knowledge. Global metrics rank
//! them by expected cost-to-destination, read from a value table built by
//! backward induction: candidates are restricted to nodes strictly closer
//! to the destination in unicast-graph (Dijkstra) distance, which makes the
//! dependency order a DAG, keeps every connected node's value finite, and
//! guarantees the route advances. A revisit guard and a hop cap protect
//! non-default configurations anyway.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::benchmark::{shortest_distances, tur_graph};
use crate::link::{LinkError, LinkModel};
use crate::metrics::{
    distance_progress, evaluate_cs, CandidateScore, CostModel, EnergyDelayParams, MetricKind,
    MetricsError, PrioritizedCs,
};
use crate::topology::{
    bearing, candidate_set_family, pointing_angles, search_space, NetworkTopology, SearchMode,
    Sector, TopologyError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("node {0} has no reachable candidates")]
    NoCandidates(usize),
    #[error("filter/select ran for the destination node")]
    DestinationQuery,
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// How the next forwarder is drawn at each hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RouteMode {
    /// Deterministic: the highest-priority candidate always forwards.
    Expected,
    /// Per-attempt Bernoulli receptions; the highest-priority receiver
    /// forwards, and the packet drops after K failed attempts.
    Stochastic { seed: u64 },
}

/// Expected per-hop figures at the moment of transmission.
#[derive(Debug, Clone, Copy)]
pub struct HopMetrics {
    /// Single-attempt broadcast delivery probability of the candidate set.
    pub pdr_bc: f64,
    /// Normalized broadcast ExNT, `1 / pdr_bc`.
    pub exnt_bc: f64,
    /// Euclidean length of the realized hop.
    pub distance_m: f64,
    /// Energy of the expected attempts, J.
    pub energy_j: f64,
    /// Latency of the expected attempts, s.
    pub delay_s: f64,
}

#[derive(Debug, Clone)]
pub struct HopRecord {
    pub forwarder: usize,
    pub prioritized_cs: PrioritizedCs,
    pub chosen_next: usize,
    pub metrics: HopMetrics,
}

impl HopRecord {
    pub fn sector(&self) -> &Sector {
        &self.prioritized_cs.sector
    }
}

/// End-to-end aggregates: delivery probability multiplies across hops,
/// everything else sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E2eMetrics {
    pub pdr: f64,
    pub exnt: f64,
    pub distance_m: f64,
    pub energy_j: f64,
    pub delay_s: f64,
    pub hop_count: usize,
}

impl E2eMetrics {
    /// Aggregation identity: the metrics of an empty hop list.
    pub fn identity() -> Self {
        Self {
            pdr: 1.0,
            exnt: 0.0,
            distance_m: 0.0,
            energy_j: 0.0,
            delay_s: 0.0,
            hop_count: 0,
        }
    }
}

/// Fold hop records into end-to-end metrics.
pub fn aggregate_e2e(hops: &[HopRecord]) -> E2eMetrics {
    let mut e2e = E2eMetrics::identity();
    for hop in hops {
        e2e.pdr *= hop.metrics.pdr_bc;
        e2e.exnt += hop.metrics.exnt_bc;
        e2e.distance_m += hop.metrics.distance_m;
        e2e.energy_j += hop.metrics.energy_j;
        e2e.delay_s += hop.metrics.delay_s;
        e2e.hop_count += 1;
    }
    e2e
}

#[derive(Debug, Clone)]
pub struct RouteResult {
    pub hops: Vec<HopRecord>,
    pub reached: bool,
    pub e2e: E2eMetrics,
}

// ---------------------------------------------------------------------------
// Global value table
// ---------------------------------------------------------------------------

/// Backward-induction table for a global metric: per-node fitness-to-go,
/// the best sector/candidate set achieving it, and the unicast-graph
/// distances that order the induction.
#[derive(Debug, Clone)]
pub struct GlobalTable {
    pub fitness: Vec<f64>,
    pub best_cs: Vec<Option<PrioritizedCs>>,
    pub graph_dist: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Route engine
// ---------------------------------------------------------------------------

/// Per-topology routing engine for one metric. Holds the selection cache
/// (a node's best sector never changes while the layout is fixed) and, for
/// global kinds, the value table.
pub struct RouteEngine<'a> {
    topo: &'a NetworkTopology,
    model: &'a LinkModel,
    kind: MetricKind,
    cost: CostModel,
    /// Effective neighbor-knowledge radius: optical reach capped by the
    /// acoustic control range.
    radius: f64,
    global: Option<GlobalTable>,
    cache: HashMap<usize, PrioritizedCs>,
}

impl<'a> RouteEngine<'a> {
    pub fn new(
        topo: &'a NetworkTopology,
        model: &'a LinkModel,
        kind: MetricKind,
        energy: EnergyDelayParams,
    ) -> Result<Self, ProtocolError> {
        let cost = CostModel {
            t_slot: model.t_slot(),
            p_tx: model.xcvr.p_tx,
            energy,
            max_retx: model.max_retx,
        };
        let radius = model.d_max()?.min(topo.acoustic_range);
        let mut engine = Self {
            topo,
            model,
            kind,
            cost,
            radius,
            global: None,
            cache: HashMap::new(),
        };
        if kind.is_global() {
            engine.global = Some(engine.build_global_table()?);
        }
        Ok(engine)
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost
    }

    pub fn global_table(&self) -> Option<&GlobalTable> {
        self.global.as_ref()
    }

    /// Best prioritized candidate set of node `i`: the search space is
    /// filtered, every candidate set of every pointing angle is evaluated,
    /// the best set per angle and then the best angle are selected under
    /// the metric's sense. Fitness ties resolve toward the smaller
    /// divergence angle, then the smaller pointing angle.
    pub fn filter_select_prioritize(&mut self, i: usize) -> Result<PrioritizedCs, ProtocolError> {
        if i == self.topo.dest {
            return Err(ProtocolError::DestinationQuery);
        }
        if let Some(hit) = self.cache.get(&i) {
            return Ok(hit.clone());
        }
        let best = match (&self.global, self.kind.is_global()) {
            (Some(table), true) => table.best_cs[i]
                .clone()
                .ok_or(ProtocolError::NoCandidates(i))?,
            _ => {
                let ss = self.local_search_space(i)?;
                self.select_over_family(i, &ss, None)?
                    .ok_or(ProtocolError::NoCandidates(i))?
            }
        };
        self.cache.insert(i, best.clone());
        Ok(best)
    }

    /// Walk the packet from source to destination. Failure (no candidates,
    /// a stochastic drop, a revisit, or the hop cap) is reported as
    /// `reached = false` with the hops taken so far, not as an error.
    pub fn route(&mut self, mode: RouteMode) -> Result<RouteResult, ProtocolError> {
        let mut rng = match mode {
            RouteMode::Stochastic { seed } => Some(ChaCha12Rng::seed_from_u64(seed)),
            RouteMode::Expected => None,
        };
        let mut hops: Vec<HopRecord> = Vec::new();
        let mut visited = HashSet::from([self.topo.source]);
        let mut current = self.topo.source;
        let mut reached = false;

        while hops.len() < self.topo.len() {
            let cs = match self.filter_select_prioritize(current) {
                Ok(cs) => cs,
                Err(ProtocolError::NoCandidates(_)) => break,
                Err(e) => return Err(e),
            };

            let chosen = match rng.as_mut() {
                None => Some(cs.members[0]),
                Some(rng) => {
                    let mut winner = None;
                    'attempts: for _ in 0..self.cost.max_retx {
                        for m in &cs.per_member {
                            if rng.random_bool(m.pdr.clamp(0.0, 1.0)) {
                                winner = Some(m.node);
                                break 'attempts;
                            }
                        }
                    }
                    winner
                }
            };
            let Some(next) = chosen else {
                break; // dropped after K attempts
            };

            let pdr_bc = cs.broadcast_pdr();
            let exnt_bc = if pdr_bc > 0.0 {
                1.0 / pdr_bc
            } else {
                f64::INFINITY
            };
            let cs_size = cs.members.len();
            hops.push(HopRecord {
                forwarder: current,
                chosen_next: next,
                metrics: HopMetrics {
                    pdr_bc,
                    exnt_bc,
                    distance_m: self.topo.pos(current).distance_to(self.topo.pos(next)),
                    energy_j: self.cost.energy_cost(exnt_bc, cs_size),
                    delay_s: self.cost.delay_cost(exnt_bc, cs_size),
                },
                prioritized_cs: cs,
            });

            if next == self.topo.dest {
                reached = true;
                break;
            }
            if !visited.insert(next) {
                break; // loop guard
            }
            current = next;
        }

        Ok(RouteResult {
            e2e: aggregate_e2e(&hops),
            reached,
            hops,
        })
    }

    // -- selection internals -------------------------------------------------

    fn local_search_space(&self, i: usize) -> Result<Vec<usize>, ProtocolError> {
        let ss = search_space(self.topo, i, SearchMode::Local, self.radius)?;
        Ok(self.drop_colocated(i, ss))
    }

    /// A co-located node cannot be targeted by a directed beam (its bearing
    /// is undefined), so it never enters a candidate set.
    fn drop_colocated(&self, i: usize, ss: Vec<usize>) -> Vec<usize> {
        let here = self.topo.pos(i);
        ss.into_iter()
            .filter(|&x| here.distance_to(self.topo.pos(x)) > 0.0)
            .collect()
    }

    /// Enumerate every (pointing angle, divergence breakpoint) pair over the
    /// given search space and keep the fittest prioritized set.
    /// `downstream` supplies per-node fitness-to-go for global kinds.
    fn select_over_family(
        &self,
        i: usize,
        ss: &[usize],
        downstream: Option<&[f64]>,
    ) -> Result<Option<PrioritizedCs>, ProtocolError> {
        if ss.is_empty() {
            return Ok(None);
        }
        let here = self.topo.pos(i);
        let dest_pos = self.topo.pos(self.topo.dest);
        let mut best: Option<PrioritizedCs> = None;

        for psi in pointing_angles(self.topo, i, ss)? {
            for entry in candidate_set_family(self.topo, i, psi, ss, self.model)? {
                let sector = Sector {
                    apex: here,
                    pointing_psi: psi,
                    divergence_theta: entry.theta,
                };
                let mut scores = Vec::with_capacity(entry.members.len());
                for &x in &entry.members {
                    let target = self.topo.pos(x);
                    let distance = here.distance_to(target);
                    let phi = crate::topology::angular_offset(bearing(here, target)?, psi);
                    let budget = self.model.budget_at(distance, phi, entry.theta)?;
                    scores.push(CandidateScore {
                        node: x,
                        dp: distance_progress(here, dest_pos, target),
                        pdr: budget.pdr,
                        is_dest: x == self.topo.dest,
                        downstream: downstream.map_or(0.0, |f| f[x]),
                    });
                }
                let cs = evaluate_cs(self.kind, sector, &scores, &self.cost)?;
                let better = match &best {
                    None => true,
                    Some(b) => self.kind.better(cs.fitness, b.fitness),
                };
                if better {
                    best = Some(cs);
                }
            }
        }
        Ok(best)
    }

    /// Backward induction over ascending unicast-graph distance to the
    /// destination. Candidate sets are drawn from the global search space
    /// restricted to strictly smaller graph distance, so every value this
    /// table assigns is already final when read.
    fn build_global_table(&self) -> Result<GlobalTable, ProtocolError> {
        let n = self.topo.len();
        let graph = tur_graph(self.topo, self.model)?;
        let graph_dist = shortest_distances(&graph, self.topo.dest);

        let mut order: Vec<usize> = (0..n).filter(|&i| graph_dist[i].is_finite()).collect();
        order.sort_by(|&a, &b| {
            graph_dist[a]
                .partial_cmp(&graph_dist[b])
                .unwrap()
                .then(a.cmp(&b))
        });

        let mut fitness = vec![f64::INFINITY; n];
        let mut best_cs: Vec<Option<PrioritizedCs>> = vec![None; n];
        fitness[self.topo.dest] = 0.0;

        for &i in &order {
            if i == self.topo.dest {
                continue;
            }
            let ss_all = search_space(self.topo, i, SearchMode::Global, self.radius)?;
            let ss: Vec<usize> = self
                .drop_colocated(i, ss_all)
                .into_iter()
                .filter(|&x| graph_dist[x] < graph_dist[i])
                .collect();
            if let Some(cs) = self.select_over_family(i, &ss, Some(&fitness))? {
                fitness[i] = cs.fitness;
                best_cs[i] = Some(cs);
            }
        }

        Ok(GlobalTable {
            fitness,
            best_cs,
            graph_dist,
        })
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
