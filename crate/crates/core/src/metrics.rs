//! Opportunistic-routing metrics: per-candidate scores, candidate
//! prioritization, candidate-set fitness, and the per-attempt energy/delay
//! cost model they share.
//!
//! Local metrics rank a candidate set using only neighborhood knowledge
//! (distance progress and single-hop link quality). Global metrics weigh a
//! set by the expected cost-to-destination of its members, which the routing
//! engine supplies from a backward-induction table.

use thiserror::Error;

use crate::link::{broadcast_per, exnt_unicast};
use crate::topology::{Point, Sector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("candidate set is empty")]
    EmptyCandidateSet,
}

// ---------------------------------------------------------------------------
// Metric kinds
// ---------------------------------------------------------------------------

/// The eight routing objectives. `*Local` kinds see one hop of link state;
/// `*Global` kinds see the whole topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Distance progress: greedy advance toward the destination.
    Dp,
    /// Expected distance progress: advance weighted by delivery likelihood.
    Edp,
    EemLocal,
    LlmLocal,
    ExntLocal,
    EemGlobal,
    LlmGlobal,
    ExntGlobal,
}

impl MetricKind {
    /// DP and EDP fitnesses are maximized; everything else is a cost.
    pub fn maximizes(&self) -> bool {
        matches!(self, MetricKind::Dp | MetricKind::Edp)
    }

    pub fn is_global(&self) -> bool {
        matches!(
            self,
            MetricKind::EemGlobal | MetricKind::LlmGlobal | MetricKind::ExntGlobal
        )
    }

    /// `a` is a better fitness than `b` under this metric's sense.
    pub fn better(&self, a: f64, b: f64) -> bool {
        if self.maximizes() {
            a > b
        } else {
            a < b
        }
    }

    /// Worst possible fitness, the identity of [`MetricKind::better`].
    pub fn worst(&self) -> f64 {
        if self.maximizes() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    }

    /// Objective name as used in scheme labels and CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            MetricKind::Dp => "DP",
            MetricKind::Edp => "EDP",
            MetricKind::EemLocal | MetricKind::EemGlobal => "EEM",
            MetricKind::LlmLocal | MetricKind::LlmGlobal => "LLM",
            MetricKind::ExntLocal | MetricKind::ExntGlobal => "ExNT",
        }
    }

    /// Scope prefix: local (LOR) or global (GOR) opportunistic routing.
    pub fn scope_label(&self) -> &'static str {
        if self.is_global() {
            "GOR"
        } else {
            "LOR"
        }
    }
}

// ---------------------------------------------------------------------------
// Energy / delay cost model
// ---------------------------------------------------------------------------

/// Candidate-coordination variants for the acoustic ACK exchange. Each
/// candidate answers in priority order; the schemes differ in how the slot
/// structure amortizes the inter-frame and sensing gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordScheme {
    /// Slotted ACK: every candidate waits a full SIFS + ACK slot.
    Sa,
    /// Compressed slotted ACK: one SIFS, then back-to-back ACK slots.
    Csa,
    /// Fast slotted ACK: one SIFS + ACK pair plus a short channel-sensing
    /// wait per candidate.
    Fsa,
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyDelayParams {
    /// Listening power burned by each candidate's receive circuitry, W.
    pub p_listen: f64,
    /// Coordination power during the ACK exchange, W.
    pub p_coord: f64,
    /// Short inter-frame spacing, s.
    pub tau_sifs: f64,
    /// ACK signal duration, s.
    pub tau_ack: f64,
    /// Acoustic channel-sensing duration, s.
    pub tau_sens: f64,
    pub scheme: CoordScheme,
}

impl Default for EnergyDelayParams {
    fn default() -> Self {
        Self {
            p_listen: 0.01,
            p_coord: 0.05,
            tau_sifs: 1e-3,
            tau_ack: 1e-3,
            tau_sens: 1e-4,
            scheme: CoordScheme::Fsa,
        }
    }
}

/// Per-hop transmission cost model: packet slot time, transmit power, the
/// coordination parameters, and the shared retransmission cap.
#[derive(Debug, Clone, Copy)]
pub struct CostModel {
    /// Packet transmission duration `L / R`, s.
    pub t_slot: f64,
    /// Transmit power, W.
    pub p_tx: f64,
    pub energy: EnergyDelayParams,
    /// Retransmission cap K.
    pub max_retx: u32,
}

impl CostModel {
    /// Coordination delay for a candidate set of `cs_size` members.
    pub fn coord_delay(&self, cs_size: usize) -> f64 {
        let e = &self.energy;
        let c = cs_size as f64;
        match e.scheme {
            CoordScheme::Sa => c * (e.tau_sifs + e.tau_ack),
            CoordScheme::Csa => e.tau_sifs + c * e.tau_ack,
            CoordScheme::Fsa => e.tau_sifs + e.tau_ack + c * e.tau_sens,
        }
    }

    /// Energy spent by `k` delivery attempts toward a `cs_size`-member set:
    /// `k [T_s (P_tx + sum P_l) + P_c T_c]`. `k` may be fractional
    /// (expected attempt counts).
    pub fn energy_cost(&self, k: f64, cs_size: usize) -> f64 {
        let listen = cs_size as f64 * self.energy.p_listen;
        k * (self.t_slot * (self.p_tx + listen) + self.energy.p_coord * self.coord_delay(cs_size))
    }

    /// Latency of `k` delivery attempts: `k [T_s + T_c]`.
    pub fn delay_cost(&self, k: f64, cs_size: usize) -> f64 {
        k * (self.t_slot + self.coord_delay(cs_size))
    }

    /// Cost of a single attempt under a global metric's objective.
    pub fn attempt_cost(&self, kind: MetricKind, cs_size: usize) -> f64 {
        match kind {
            MetricKind::EemGlobal => self.energy_cost(1.0, cs_size),
            MetricKind::LlmGlobal => self.delay_cost(1.0, cs_size),
            MetricKind::ExntGlobal => 1.0,
            _ => panic!("attempt_cost is defined for global kinds only"),
        }
    }
}

// ---------------------------------------------------------------------------
// Distance progress
// ---------------------------------------------------------------------------

/// Advance toward `dest` that handing the packet from `from` to `candidate`
/// would achieve: `|from - dest| - |candidate - dest|`. Negative when the
/// candidate is farther out (possible for global search spaces). The
/// baseline is always the current forwarder; within one hop the baseline is
/// a constant, so orderings and argmax selections are unaffected by the
/// choice.
pub fn distance_progress(from: Point, dest: Point, candidate: Point) -> f64 {
    from.distance_to(dest) - candidate.distance_to(dest)
}

// ---------------------------------------------------------------------------
// Candidate scoring and prioritization
// ---------------------------------------------------------------------------

/// Link digest of one candidate, as seen from the current forwarder.
#[derive(Debug, Clone, Copy)]
pub struct CandidateScore {
    pub node: usize,
    /// Distance progress toward the destination.
    pub dp: f64,
    /// Single-attempt delivery probability at the sector's divergence angle.
    pub pdr: f64,
    pub is_dest: bool,
    /// Fitness-to-go of this candidate under a global metric
    /// (0 at the destination); ignored by local kinds.
    pub downstream: f64,
}

/// One prioritized member with the probabilities the ordering implies.
#[derive(Debug, Clone, Copy)]
pub struct MemberScore {
    pub node: usize,
    pub pdr: f64,
    /// Probability this member ends up forwarding: its PDR times the
    /// failure product of every higher-priority member.
    pub sfr: f64,
    /// The metric's per-candidate score (DP, DP*SFR, E(N), D(N), N, or the
    /// downstream fitness, by kind).
    pub score: f64,
}

/// A candidate set in forwarding-priority order, with the sector that
/// generated it and its fitness under the metric that ranked it.
#[derive(Debug, Clone)]
pub struct PrioritizedCs {
    /// Member ids, highest priority first.
    pub members: Vec<usize>,
    pub sector: Sector,
    pub fitness: f64,
    pub per_member: Vec<MemberScore>,
}

impl PrioritizedCs {
    pub fn broadcast_pdr(&self) -> f64 {
        let pers: Vec<f64> = self.per_member.iter().map(|m| 1.0 - m.pdr).collect();
        1.0 - broadcast_per(&pers).unwrap_or(1.0)
    }
}

/// Order candidates by forwarding priority for `kind`.
///
/// The destination, when present, always takes priority 1: its forwarding
/// probability is then its plain PDR, which is what the global outcome
/// probabilities assume, and under DP orderings it is first anyway since
/// nothing can make more progress.
///
/// - DP: descending progress.
/// - EDP: descending progress, ties broken toward higher PDR. An adjacent
///   exchange changes the summed `DP*SFR` fitness by
///   `PDR_a PDR_b (DP_a - DP_b)` times a positive prefix, so descending DP
///   is exactly the order maximizing that fitness.
/// - Local EEM/LLM/ExNT: ascending per-member unicast ExNT (equivalently
///   ascending PER).
/// - Global kinds: ascending fitness-to-go.
///
/// All remaining ties break toward the smaller node id.
pub fn prioritize(
    kind: MetricKind,
    candidates: &[CandidateScore],
    cost: &CostModel,
) -> Result<Vec<CandidateScore>, MetricsError> {
    if candidates.is_empty() {
        return Err(MetricsError::EmptyCandidateSet);
    }
    let mut ordered: Vec<CandidateScore> = candidates.to_vec();
    let key = |c: &CandidateScore| -> (bool, f64, f64, usize) {
        let primary = match kind {
            MetricKind::Dp | MetricKind::Edp => -c.dp,
            MetricKind::EemLocal | MetricKind::LlmLocal | MetricKind::ExntLocal => {
                exnt_unicast(1.0 - c.pdr, cost.max_retx)
            }
            MetricKind::EemGlobal | MetricKind::LlmGlobal | MetricKind::ExntGlobal => c.downstream,
        };
        let secondary = match kind {
            MetricKind::Edp => -c.pdr,
            _ => 0.0,
        };
        (!c.is_dest, primary, secondary, c.node)
    };
    ordered.sort_by(|a, b| key(a).partial_cmp(&key(b)).expect("finite sort keys"));
    Ok(ordered)
}

/// Prioritize a candidate set and evaluate its fitness under `kind`.
///
/// Fitnesses:
/// - DP: best single progress.
/// - EDP: expected progress `sum_j DP_j SFR_j` over the chosen order.
/// - Local EEM/LLM: energy/delay cost evaluated at the set's normalized
///   broadcast ExNT `1 / PDR_bc`; local ExNT is that count itself.
/// - Global kinds: expected cost-to-destination through this set, via
///   [`global_cs_fitness`].
pub fn evaluate_cs(
    kind: MetricKind,
    sector: Sector,
    candidates: &[CandidateScore],
    cost: &CostModel,
) -> Result<PrioritizedCs, MetricsError> {
    let ordered = prioritize(kind, candidates, cost)?;
    let cs_size = ordered.len();

    let mut per_member = Vec::with_capacity(cs_size);
    let mut fail_prefix = 1.0;
    for c in &ordered {
        let sfr = c.pdr * fail_prefix;
        let score = match kind {
            MetricKind::Dp => c.dp,
            MetricKind::Edp => c.dp * sfr,
            MetricKind::EemLocal => {
                cost.energy_cost(exnt_unicast(1.0 - c.pdr, cost.max_retx), cs_size)
            }
            MetricKind::LlmLocal => {
                cost.delay_cost(exnt_unicast(1.0 - c.pdr, cost.max_retx), cs_size)
            }
            MetricKind::ExntLocal => exnt_unicast(1.0 - c.pdr, cost.max_retx),
            MetricKind::EemGlobal | MetricKind::LlmGlobal | MetricKind::ExntGlobal => c.downstream,
        };
        per_member.push(MemberScore {
            node: c.node,
            pdr: c.pdr,
            sfr,
            score,
        });
        fail_prefix *= 1.0 - c.pdr;
    }
    let per_bc = fail_prefix;

    let fitness = match kind {
        MetricKind::Dp => ordered[0].dp,
        MetricKind::Edp => per_member
            .iter()
            .zip(&ordered)
            .map(|(m, c)| c.dp * m.sfr)
            .sum(),
        MetricKind::EemLocal | MetricKind::LlmLocal | MetricKind::ExntLocal => {
            if per_bc >= 1.0 {
                f64::INFINITY
            } else {
                let exnt_bc = 1.0 / (1.0 - per_bc);
                match kind {
                    MetricKind::EemLocal => cost.energy_cost(exnt_bc, cs_size),
                    MetricKind::LlmLocal => cost.delay_cost(exnt_bc, cs_size),
                    _ => exnt_bc,
                }
            }
        }
        MetricKind::EemGlobal | MetricKind::LlmGlobal | MetricKind::ExntGlobal => {
            let gamma = cost.attempt_cost(kind, cs_size);
            let pairs: Vec<(f64, f64)> = ordered.iter().map(|c| (c.pdr, c.downstream)).collect();
            global_cs_fitness(gamma, &pairs, cost.max_retx)
        }
    };

    Ok(PrioritizedCs {
        members: ordered.iter().map(|c| c.node).collect(),
        sector,
        fitness,
        per_member,
    })
}

/// Expected total cost of delivering through a prioritized set and onward to
/// the destination:
///
/// ```text
/// F = sum_j sum_{k=1..K} (k gamma + F_j) PER_bc^(k-1) SFR_j
///       + K gamma PER_bc^K
/// ```
///
/// `gamma` is the forwarder's per-attempt cost, `ordered` pairs each
/// member's PDR with its fitness-to-go (0 at the destination), and the final
/// term charges the K attempts of a dropped packet.
pub fn global_cs_fitness(gamma: f64, ordered: &[(f64, f64)], k_max: u32) -> f64 {
    let pers: Vec<f64> = ordered.iter().map(|&(pdr, _)| 1.0 - pdr).collect();
    let per_bc: f64 = pers.iter().product();
    let mut total = 0.0;
    let mut fail_pow = 1.0; // PER_bc^(k-1)
    for k in 1..=k_max {
        let mut prefix = 1.0;
        for (j, &(pdr, downstream)) in ordered.iter().enumerate() {
            let sfr = pdr * prefix;
            if sfr > 0.0 {
                total += (k as f64 * gamma + downstream) * fail_pow * sfr;
            }
            prefix *= pers[j];
        }
        fail_pow *= per_bc;
    }
    total + k_max as f64 * gamma * fail_pow
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
