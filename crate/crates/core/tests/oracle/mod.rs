//! Independent reference implementations used by the acceptance suite.
//!
//! Everything here is deliberately slow and simple: bisection on monotone
//! maps, adaptive quadrature of defining integrals, exhaustive enumeration.
//! None of it calls the production code paths it is used to check.

#![allow(dead_code)]

use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Lambert W by bisection on w * e^w
// ---------------------------------------------------------------------------

/// Bisection solve of `w e^w = x` on the principal branch `w >= -1`.
pub fn lambert_w0_bisect(x: f64) -> f64 {
    assert!(x >= -(-1.0_f64).exp(), "oracle domain");
    let mut lo = -1.0_f64;
    let mut hi = if x <= 1.0_f64.exp() {
        1.0
    } else {
        x.ln() + 1.0
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() > x {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * lo.abs().max(1e-6) {
            break;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// erfc by adaptive Simpson quadrature of the defining integral
// ---------------------------------------------------------------------------

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
}

/// Adaptive Simpson integral of `f` over `[a, b]` with absolute target `eps`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(&f, a, b, fa, fm, fb, whole, eps, 60)
}

/// erfc from its defining integral: `2/sqrt(pi) * Int_x^inf e^{-t^2} dt`.
pub fn erfc_quadrature(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_quadrature(-x);
    }
    let gauss = |t: f64| (-t * t).exp();
    if x <= 1.0 {
        // 1 - 2/sqrt(pi) * Int_0^x
        1.0 - 2.0 / PI.sqrt() * integrate(gauss, 0.0, x, 1e-14)
    } else {
        // Tail integral; the truncation at x + 12 is below e^{-169}, and the
        // tolerance tracks the integrand scale so deep tails stay accurate
        // in relative terms too.
        let eps = (1e-15 * (-x * x).exp()).max(1e-300);
        2.0 / PI.sqrt() * integrate(gauss, x, x + 12.0, eps)
    }
}

/// Inverse of erfc by bisection on the (strictly decreasing) erfc itself.
pub fn erfc_inv_bisect(y: f64, erfc: impl Fn(f64) -> f64) -> f64 {
    assert!(y > 0.0 && y < 2.0, "oracle domain");
    let mut lo = -30.0_f64;
    let mut hi = 30.0_f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if erfc(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// Graph oracles: exhaustive simple-path enumeration and plain BFS
// ---------------------------------------------------------------------------

use sector_core::link::LinkModel;
use sector_core::metrics::{evaluate_cs, CandidateScore, CostModel, MetricKind};
use sector_core::topology::{NetworkTopology, Point, Sector};

fn adjacency(positions: &[Point], radius: f64) -> Vec<Vec<usize>> {
    let n = positions.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && positions[i].distance_to(positions[j]) <= radius {
                adj[i].push(j);
            }
        }
    }
    adj
}

/// Minimum total length over every simple path `s -> d` with hops of at
/// most `radius`, by depth-first enumeration. `None` when no path exists.
pub fn exhaustive_shortest_path(
    positions: &[Point],
    s: usize,
    d: usize,
    radius: f64,
) -> Option<f64> {
    let adj = adjacency(positions, radius);
    let mut best = f64::INFINITY;
    let mut visited = vec![false; positions.len()];
    visited[s] = true;
    fn dfs(
        at: usize,
        d: usize,
        acc: f64,
        positions: &[Point],
        adj: &[Vec<usize>],
        visited: &mut [bool],
        best: &mut f64,
    ) {
        if at == d {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        for &next in &adj[at] {
            if !visited[next] {
                visited[next] = true;
                dfs(
                    next,
                    d,
                    acc + positions[at].distance_to(positions[next]),
                    positions,
                    adj,
                    visited,
                    best,
                );
                visited[next] = false;
            }
        }
    }
    dfs(s, d, 0.0, positions, &adj, &mut visited, &mut best);
    best.is_finite().then_some(best)
}

/// Plain breadth-first reachability with hops of at most `radius`.
pub fn bfs_connected(positions: &[Point], s: usize, d: usize, radius: f64) -> bool {
    let adj = adjacency(positions, radius);
    let mut seen = vec![false; positions.len()];
    let mut queue = std::collections::VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        if u == d {
            return true;
        }
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// EDP permutation oracle
// ---------------------------------------------------------------------------

/// Best achievable `sum DP_j * SFR_j` over every permutation of the
/// candidates, by Heap's-algorithm enumeration.
pub fn best_edp_permutation(cands: &[(f64, f64)]) -> f64 {
    let mut idx: Vec<usize> = (0..cands.len()).collect();
    let mut best = f64::NEG_INFINITY;
    fn heap(k: usize, idx: &mut [usize], cands: &[(f64, f64)], best: &mut f64) {
        if k <= 1 {
            let mut total = 0.0;
            let mut prefix = 1.0;
            for &i in idx.iter() {
                let (dp, pdr) = cands[i];
                total += dp * pdr * prefix;
                prefix *= 1.0 - pdr;
            }
            if total > *best {
                *best = total;
            }
            return;
        }
        for i in 0..k {
            heap(k - 1, idx, cands, best);
            if k.is_multiple_of(2) {
                idx.swap(i, k - 1);
            } else {
                idx.swap(0, k - 1);
            }
        }
    }
    let n = idx.len();
    heap(n, &mut idx, cands, &mut best);
    best
}

// ---------------------------------------------------------------------------
// Exhaustive sector-selection oracle
// ---------------------------------------------------------------------------

fn offset_from(psi: f64, bearing: f64) -> f64 {
    let diff = (bearing - psi).rem_euclid(std::f64::consts::TAU);
    diff.min(std::f64::consts::TAU - diff)
}

/// Recompute node `i`'s local search space, pointing angles, and divergence
/// breakpoints from scratch and scan every (psi, theta) pair, returning the
/// best fitness under `kind`. Membership is decided directly from the
/// angular offset and the range curve rather than through the production
/// family enumeration.
pub fn exhaustive_best_fitness(
    topo: &NetworkTopology,
    i: usize,
    model: &LinkModel,
    kind: MetricKind,
    cost: &CostModel,
) -> Option<f64> {
    let here = topo.pos(i);
    let dest = topo.pos(topo.dest);
    let radius = model.d_max().ok()?.min(topo.acoustic_range);
    let ss: Vec<usize> = (0..topo.len())
        .filter(|&x| {
            x != i && {
                let dist = here.distance_to(topo.pos(x));
                dist > 0.0
                    && dist <= radius
                    && topo.pos(x).distance_to(dest) < here.distance_to(dest)
            }
        })
        .collect();
    if ss.is_empty() {
        return None;
    }

    let bearing_to = |x: usize| {
        let p = topo.pos(x);
        (p.y - here.y).atan2(p.x - here.x)
    };

    let mut best: Option<f64> = None;
    for &aim in &ss {
        let psi = bearing_to(aim);
        let mut thetas = vec![model.xcvr.theta_min, model.xcvr.theta_max];
        for &x in &ss {
            let th = 2.0 * offset_from(psi, bearing_to(x));
            if th > model.xcvr.theta_min && th < model.xcvr.theta_max {
                thetas.push(th);
            }
        }
        for &theta in &thetas {
            let members: Vec<usize> = ss
                .iter()
                .copied()
                .filter(|&x| {
                    let phi = offset_from(psi, bearing_to(x));
                    phi <= theta / 2.0
                        && model
                            .max_range(theta, phi)
                            .map(|r| here.distance_to(topo.pos(x)) <= r)
                            .unwrap_or(false)
                })
                .collect();
            if members.is_empty() {
                continue;
            }
            let scores: Vec<CandidateScore> = members
                .iter()
                .map(|&x| CandidateScore {
                    node: x,
                    dp: here.distance_to(dest) - topo.pos(x).distance_to(dest),
                    pdr: model
                        .budget_at(
                            here.distance_to(topo.pos(x)),
                            offset_from(psi, bearing_to(x)),
                            theta,
                        )
                        .unwrap()
                        .pdr,
                    is_dest: x == topo.dest,
                    downstream: 0.0,
                })
                .collect();
            let sector = Sector {
                apex: here,
                pointing_psi: psi,
                divergence_theta: theta,
            };
            let fitness = evaluate_cs(kind, sector, &scores, cost).unwrap().fitness;
            best = Some(match best {
                None => fitness,
                Some(b) if kind.better(fitness, b) => fitness,
                Some(b) => b,
            });
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Outcome-tree oracle for global metrics
// ---------------------------------------------------------------------------

/// Expected total cost of one prioritized candidate-set option, from first
/// principles: per attempt, every reception subset is enumerated with its
/// Bernoulli probability and the highest-priority receiver forwards; the
/// packet drops after `k_max` all-fail attempts. `members` are
/// (pdr, cost-to-go) in priority order.
fn option_expected_cost(members: &[(f64, f64)], gamma: f64, k_max: u32) -> f64 {
    let n = members.len();
    let mut p_forwarder = vec![0.0; n];
    let mut p_fail = 0.0;
    for mask in 0u32..(1 << n) {
        let mut p = 1.0;
        for (idx, &(pdr, _)) in members.iter().enumerate() {
            p *= if mask & (1 << idx) != 0 {
                pdr
            } else {
                1.0 - pdr
            };
        }
        match (0..n).find(|&idx| mask & (1 << idx) != 0) {
            Some(first) => p_forwarder[first] += p,
            None => p_fail += p,
        }
    }
    let mut total = 0.0;
    let mut fail_pow = 1.0;
    for k in 1..=k_max {
        for (idx, &(_, to_go)) in members.iter().enumerate() {
            total += fail_pow * p_forwarder[idx] * (k as f64 * gamma + to_go);
        }
        fail_pow *= p_fail;
    }
    total + k_max as f64 * gamma * fail_pow
}

/// Best expected cost-to-destination from the source under a global metric,
/// computed without the production value table: graph distances come from
/// exhaustive path enumeration, candidate-set options are rebuilt from
/// scratch per node, priorities follow the destination-first /
/// ascending-cost-to-go rule, and each option's value is the outcome-tree
/// expectation above. Node values resolve bottom-up in graph-distance
/// order, so the per-node minimum equals the minimum over joint policies.
pub fn outcome_tree_best_policy(
    topo: &NetworkTopology,
    model: &LinkModel,
    kind: MetricKind,
    cost: &CostModel,
) -> Option<f64> {
    let n = topo.len();
    let positions: Vec<Point> = topo.nodes.iter().map(|node| node.pos).collect();
    let radius = model.d_max().ok()?.min(topo.acoustic_range);
    let gdist: Vec<f64> = (0..n)
        .map(|x| {
            if x == topo.dest {
                0.0
            } else {
                exhaustive_shortest_path(&positions, x, topo.dest, radius).unwrap_or(f64::INFINITY)
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..n).filter(|&x| gdist[x].is_finite()).collect();
    order.sort_by(|&a, &b| gdist[a].partial_cmp(&gdist[b]).unwrap().then(a.cmp(&b)));

    let mut value = vec![f64::INFINITY; n];
    value[topo.dest] = 0.0;

    for &i in &order {
        if i == topo.dest {
            continue;
        }
        let here = positions[i];
        let ss: Vec<usize> = (0..n)
            .filter(|&x| {
                x != i
                    && here.distance_to(positions[x]) > 0.0
                    && here.distance_to(positions[x]) <= radius
                    && gdist[x] < gdist[i]
            })
            .collect();
        let bearing_to = |x: usize| {
            let p = positions[x];
            (p.y - here.y).atan2(p.x - here.x)
        };
        let mut best = f64::INFINITY;
        for &aim in &ss {
            let psi = bearing_to(aim);
            let mut thetas = vec![model.xcvr.theta_min, model.xcvr.theta_max];
            for &x in &ss {
                let th = 2.0 * offset_from(psi, bearing_to(x));
                if th > model.xcvr.theta_min && th < model.xcvr.theta_max {
                    thetas.push(th);
                }
            }
            // Candidate sets exist at their entry angle only: the beam is
            // never widened beyond what first covered the set, so repeats
            // of the same member set at larger theta are not options.
            thetas.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut prev_members: Option<Vec<usize>> = None;
            for &theta in &thetas {
                let mut members: Vec<(usize, f64, f64)> = ss
                    .iter()
                    .copied()
                    .filter_map(|x| {
                        let phi = offset_from(psi, bearing_to(x));
                        let dist = here.distance_to(positions[x]);
                        if phi <= theta / 2.0
                            && model
                                .max_range(theta, phi)
                                .map(|r| dist <= r)
                                .unwrap_or(false)
                        {
                            let pdr = model.budget_at(dist, phi, theta).unwrap().pdr;
                            Some((x, pdr, value[x]))
                        } else {
                            None
                        }
                    })
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let ids: Vec<usize> = members.iter().map(|m| m.0).collect();
                if prev_members.as_ref() == Some(&ids) {
                    continue;
                }
                prev_members = Some(ids);
                // Destination first, then ascending cost-to-go, then id.
                members.sort_by(|a, b| {
                    (a.0 != topo.dest, a.2, a.0)
                        .partial_cmp(&(b.0 != topo.dest, b.2, b.0))
                        .unwrap()
                });
                let gamma = cost.attempt_cost(kind, members.len());
                let pairs: Vec<(f64, f64)> = members.iter().map(|&(_, pdr, v)| (pdr, v)).collect();
                let expected = option_expected_cost(&pairs, gamma, cost.max_retx);
                if expected < best {
                    best = expected;
                }
            }
        }
        value[i] = best;
    }

    value[topo.source].is_finite().then_some(value[topo.source])
}
