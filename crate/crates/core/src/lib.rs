//! Underwater optical wireless network modeling and sector-based
//! opportunistic routing.
//!
//! The crate layers, bottom up:
//!
//! - [`numerics`]: Lambert W, `erfc`, and `erfc_inv` kernels.
//! - [`channel`]: Beer-Lambert and geometric losses, combined channel gain.
//! - [`link`]: single-hop photon-counting budgets (BER/PER/PDR), achievable
//!   rate, maximum range, and unicast/broadcast expected transmission counts.
//! - [`topology`]: planar node layouts, sector coverage, search spaces, and
//!   candidate-set families along the divergence-angle sweep.
//! - [`metrics`]: local and global opportunistic-routing metrics (distance
//!   progress, energy, latency, ExNT) with candidate prioritization.
//! - [`benchmark`]: the Dijkstra unicast baseline.
//! - [`protocol`]: the per-hop filter/select/prioritize engine and route
//!   assembly.
//! - [`sim`]: the Monte Carlo side-length sweep harness with reproducible
//!   seeding and CSV export.
//!
//! Trials in [`sim`] run data-parallel via rayon when the default `parallel`
//! feature is enabled; a sequential path is always available and produces
//! byte-identical output.

pub mod benchmark;
pub mod channel;
pub mod link;
pub mod metrics;
pub mod numerics;
pub mod protocol;
pub mod sim;
pub mod topology;

pub use channel::{
    beer_lambert_loss, channel_gain, geometric_loss, ChannelError, LinkGeometry, WaterChannelParams,
};
pub use link::{LinkBudget, LinkError, LinkModel, LinkTarget, TransceiverParams};
pub use metrics::{CoordScheme, CostModel, EnergyDelayParams, MetricKind, PrioritizedCs};
pub use numerics::{erfc, erfc_inv, lambert_w0, NumericsError, ToleranceConfig};
pub use protocol::{E2eMetrics, RouteEngine, RouteMode, RouteResult};
pub use sim::{Scheme, SimConfig, SweepResult};
pub use topology::{NetworkTopology, Node, Point, Sector, TopologyError};
