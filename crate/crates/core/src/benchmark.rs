//! Traditional unicast routing baseline: every node points its narrowest
//! beam straight at a single next hop, so the network reduces to a weighted
//! graph with edges wherever the maximum-range disk reaches, and the best
//! path is Dijkstra's shortest.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::link::{LinkBudget, LinkError, LinkModel};
use crate::metrics::CostModel;
use crate::protocol::E2eMetrics;
use crate::topology::NetworkTopology;

/// One directed unicast edge with its length and link budget at the
/// narrowest divergence angle and perfect alignment.
#[derive(Debug, Clone)]
pub struct TurEdge {
    pub to: usize,
    pub distance: f64,
    pub budget: LinkBudget,
}

/// Adjacency-list unicast graph.
#[derive(Debug, Clone)]
pub struct TurGraph {
    pub adj: Vec<Vec<TurEdge>>,
}

/// Build the unicast graph: an edge `i -> j` exists iff the narrow-beam
/// maximum range covers the distance. Distances are symmetric, so the graph
/// is too, but both directions are materialized.
pub fn tur_graph(topo: &NetworkTopology, model: &LinkModel) -> Result<TurGraph, LinkError> {
    let d_max = model.d_max()?;
    let theta = model.xcvr.theta_min;
    let n = topo.len();
    let mut adj = vec![Vec::new(); n];
    for (i, out) in adj.iter_mut().enumerate() {
        for j in 0..n {
            if i == j {
                continue;
            }
            let distance = topo.pos(i).distance_to(topo.pos(j));
            if distance <= d_max {
                let budget = model.budget_at(distance, 0.0, theta)?;
                out.push(TurEdge {
                    to: j,
                    distance,
                    budget,
                });
            }
        }
    }
    Ok(TurGraph { adj })
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (dist, node id); the id makes pop order deterministic.
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest path `s -> d` by total Euclidean distance. Returns the node
/// sequence (inclusive of both ends) and the total weight, or `None` when
/// unreachable. Equal-weight alternatives resolve toward smaller ids.
pub fn dijkstra(graph: &TurGraph, s: usize, d: usize) -> Option<(Vec<usize>, f64)> {
    let n = graph.adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(HeapEntry { dist: 0.0, node: s });

    while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == d {
            break;
        }
        for edge in &graph.adj[u] {
            let cand = du + edge.distance;
            if cand < dist[edge.to] {
                dist[edge.to] = cand;
                prev[edge.to] = u;
                heap.push(HeapEntry {
                    dist: cand,
                    node: edge.to,
                });
            }
        }
    }

    if !dist[d].is_finite() {
        return None;
    }
    let mut path = vec![d];
    let mut cur = d;
    while cur != s {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    Some((path, dist[d]))
}

/// Per-hop unicast figures accumulated over a path, aggregated exactly like
/// the opportunistic end-to-end metrics (single-member candidate sets).
pub fn tur_e2e(path: &[usize], graph: &TurGraph, cost: &CostModel) -> E2eMetrics {
    let mut e2e = E2eMetrics::identity();
    for hop in path.windows(2) {
        let edge = graph.adj[hop[0]]
            .iter()
            .find(|e| e.to == hop[1])
            .expect("path must follow graph edges");
        let pdr = edge.budget.pdr;
        let exnt = 1.0 / pdr;
        e2e.pdr *= pdr;
        e2e.exnt += exnt;
        e2e.distance_m += edge.distance;
        e2e.energy_j += cost.energy_cost(exnt, 1);
        e2e.delay_s += cost.delay_cost(exnt, 1);
        e2e.hop_count += 1;
    }
    e2e
}

/// Dijkstra distances from `src` to every node (infinity where
/// unreachable). The graph is symmetric, so these double as distances *to*
/// `src`; the global value table orders its backward induction with them.
pub fn shortest_distances(graph: &TurGraph, src: usize) -> Vec<f64> {
    let n = graph.adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: src,
    });
    while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for edge in &graph.adj[u] {
            let cand = du + edge.distance;
            if cand < dist[edge.to] {
                dist[edge.to] = cand;
                heap.push(HeapEntry {
                    dist: cand,
                    node: edge.to,
                });
            }
        }
    }
    dist
}

/// s-to-d reachability on the unicast graph; the connectivity notion every
/// scheme's discovery rate is compared against.
pub fn connected(graph: &TurGraph, s: usize, d: usize) -> bool {
    let n = graph.adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        if u == d {
            return true;
        }
        for e in &graph.adj[u] {
            if !seen[e.to] {
                seen[e.to] = true;
                stack.push(e.to);
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
