//! Planar network geometry: node layouts, bearings, sector-shaped optical
//! coverage, per-node search spaces, pointing-angle enumeration, and the
//! candidate-set family traced out by widening the divergence angle.
//!
//! All angles are in radians; pointing angles and bearings live in
//! `[0, 2*pi)`, angular offsets in `[0, pi]`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::link::{LinkError, LinkModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("nodes {0} and {1} share a position; bearing undefined")]
    CoincidentNodes(usize, usize),
    #[error("node id {0} out of range")]
    InvalidId(usize),
    #[error("invalid topology: {0}")]
    Invalid(&'static str),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

// ---------------------------------------------------------------------------
// Points and nodes
// ---------------------------------------------------------------------------

/// Planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub id: usize,
    pub pos: Point,
}

/// Immutable node layout with designated source and destination.
#[derive(Debug, Clone)]
pub struct NetworkTopology {
    pub nodes: Vec<Node>,
    pub source: usize,
    pub dest: usize,
    /// Radius of the acoustic control plane over which neighbors are known.
    pub acoustic_range: f64,
    /// Side length of the deployment square, kept for serialization.
    pub side_len: f64,
}

impl NetworkTopology {
    pub fn new(
        nodes: Vec<Node>,
        source: usize,
        dest: usize,
        acoustic_range: f64,
        side_len: f64,
    ) -> Result<Self, TopologyError> {
        if source == dest {
            return Err(TopologyError::Invalid("source and dest must differ"));
        }
        for (i, n) in nodes.iter().enumerate() {
            if n.id != i {
                return Err(TopologyError::Invalid("node ids must be dense 0..M-1"));
            }
        }
        if source >= nodes.len() || dest >= nodes.len() {
            return Err(TopologyError::Invalid("source/dest id out of range"));
        }
        if !acoustic_range.is_finite() || acoustic_range <= 0.0 {
            return Err(TopologyError::Invalid("acoustic_range must be > 0"));
        }
        Ok(Self {
            nodes,
            source,
            dest,
            acoustic_range,
            side_len,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn pos(&self, id: usize) -> Point {
        self.nodes[id].pos
    }

    /// Uniform random layout over a `side_len x side_len` square with the
    /// source pinned at (0, 0) and the destination at (side_len, side_len).
    /// Relay ids start at 2; draws consume `rng` in node order (x before y),
    /// so a given seed always reproduces the same layout.
    pub fn generate_random<R: Rng + ?Sized>(
        side_len: f64,
        n_relays: usize,
        acoustic_range: f64,
        rng: &mut R,
    ) -> Self {
        assert!(side_len > 0.0, "side_len must be positive");
        let mut nodes = Vec::with_capacity(n_relays + 2);
        nodes.push(Node {
            id: 0,
            pos: Point::new(0.0, 0.0),
        });
        nodes.push(Node {
            id: 1,
            pos: Point::new(side_len, side_len),
        });
        for id in 2..n_relays + 2 {
            let x = rng.random_range(0.0..side_len);
            let y = rng.random_range(0.0..side_len);
            nodes.push(Node {
                id,
                pos: Point::new(x, y),
            });
        }
        Self {
            nodes,
            source: 0,
            dest: 1,
            acoustic_range,
            side_len,
        }
    }
}

// ---------------------------------------------------------------------------
// Bearings and sectors
// ---------------------------------------------------------------------------

/// Planar bearing of the vector `from -> to`, wrapped to `[0, 2*pi)`.
pub fn bearing(from: Point, to: Point) -> Result<f64, TopologyError> {
    if from == to {
        return Err(TopologyError::CoincidentNodes(usize::MAX, usize::MAX));
    }
    let angle = (to.y - from.y).atan2(to.x - from.x);
    Ok(wrap_angle(angle))
}

/// Wrap any angle to `[0, 2*pi)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % TAU;
    if a < 0.0 {
        a += TAU;
    }
    a
}

/// Absolute angular separation of two directions, in `[0, pi]`.
pub fn angular_offset(a: f64, b: f64) -> f64 {
    let diff = wrap_angle(a - b);
    diff.min(TAU - diff)
}

/// Sector-shaped coverage region: apex, pointing direction, and full-width
/// divergence angle. The radius at a given offset comes from the bound link
/// model's maximum range.
#[derive(Debug, Clone, Copy)]
pub struct Sector {
    pub apex: Point,
    pub pointing_psi: f64,
    pub divergence_theta: f64,
}

/// Position of a target relative to a sector: its angular offset from the
/// pointing axis (the link misalignment) and its Euclidean distance.
#[derive(Debug, Clone, Copy)]
pub struct CoverInfo {
    pub phi: f64,
    pub distance: f64,
}

/// Membership test: the target must sit within half the divergence angle of
/// the pointing axis and inside the maximum range the link model yields at
/// this divergence and offset.
pub fn covers(sector: &Sector, model: &LinkModel, target: Point) -> Option<CoverInfo> {
    let brg = bearing(sector.apex, target).ok()?;
    let phi = angular_offset(brg, sector.pointing_psi);
    if phi > sector.divergence_theta / 2.0 {
        return None;
    }
    let distance = sector.apex.distance_to(target);
    let range = model.max_range(sector.divergence_theta, phi).ok()?;
    if distance <= range {
        Some(CoverInfo { phi, distance })
    } else {
        None
    }
}

/// Largest divergence angle at which a target `distance` meters out is still
/// in range, found by bisection on the (antitone) range-vs-theta curve.
/// `None` when the target is out of range even at `theta_min`.
pub fn theta_upper(model: &LinkModel, distance: f64, phi: f64) -> Result<Option<f64>, LinkError> {
    let theta_min = model.xcvr.theta_min;
    let theta_max = model.xcvr.theta_max;
    if model.max_range(theta_min, phi)? < distance {
        return Ok(None);
    }
    if model.max_range(theta_max, phi)? >= distance {
        return Ok(Some(theta_max));
    }
    let mut lo = theta_min;
    let mut hi = theta_max;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if model.max_range(mid, phi)? >= distance {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

// ---------------------------------------------------------------------------
// Search spaces and candidate-set families
// ---------------------------------------------------------------------------

/// Which nodes a forwarder may consider, depending on the topology knowledge
/// available to the metric in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Neighbors within `radius` that make strict Euclidean progress toward
    /// the destination.
    Local,
    /// Every neighbor within `radius`.
    Global,
}

/// The search space of node `i`: candidate relays within `radius`, excluding
/// `i` itself, restricted to strict progress in [`SearchMode::Local`].
/// Returned ids are ascending.
pub fn search_space(
    topo: &NetworkTopology,
    i: usize,
    mode: SearchMode,
    radius: f64,
) -> Result<Vec<usize>, TopologyError> {
    if i >= topo.len() {
        return Err(TopologyError::InvalidId(i));
    }
    let here = topo.pos(i);
    let dest = topo.pos(topo.dest);
    let my_progress = here.distance_to(dest);
    let mut out = Vec::new();
    for node in &topo.nodes {
        if node.id == i {
            continue;
        }
        if here.distance_to(node.pos) > radius {
            continue;
        }
        if mode == SearchMode::Local && node.pos.distance_to(dest) >= my_progress {
            continue;
        }
        out.push(node.id);
    }
    Ok(out)
}

/// Candidate pointing angles for node `i`: the bearings toward each
/// search-space member, deduplicated and sorted counter-clockwise. Aiming
/// the sector axis at a member never loses coverage relative to any nearby
/// direction, so this finite list suffices.
pub fn pointing_angles(
    topo: &NetworkTopology,
    i: usize,
    ss: &[usize],
) -> Result<Vec<f64>, TopologyError> {
    let here = topo.pos(i);
    let mut angles = Vec::with_capacity(ss.len());
    for &x in ss {
        let b = bearing(here, topo.pos(x)).map_err(|_| TopologyError::CoincidentNodes(i, x))?;
        angles.push(b);
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup();
    Ok(angles)
}

/// One entry of the divergence-angle sweep: the breakpoint angle and the
/// candidate ids covered there (ascending by id).
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEntry {
    pub theta: f64,
    pub members: Vec<usize>,
}

/// The candidate-set family of node `i` at pointing angle `psi`: the beam is
/// widened from `theta_min`, and a new set is recorded at every angle where
/// a search-space member enters the beam angularly (`theta = 2 * offset`),
/// plus the two divergence extremes. Coverage is re-evaluated exactly at
/// each breakpoint, so members that fall out of range as the beam widens
/// drop out of later sets. Consecutive duplicates are merged and empty sets
/// dropped.
pub fn candidate_set_family(
    topo: &NetworkTopology,
    i: usize,
    psi: f64,
    ss: &[usize],
    model: &LinkModel,
) -> Result<Vec<FamilyEntry>, TopologyError> {
    let here = topo.pos(i);
    let theta_min = model.xcvr.theta_min;
    let theta_max = model.xcvr.theta_max;

    let mut breakpoints: Vec<f64> = Vec::with_capacity(ss.len() + 2);
    breakpoints.push(theta_min);
    breakpoints.push(theta_max);
    for &x in ss {
        let b = bearing(here, topo.pos(x)).map_err(|_| TopologyError::CoincidentNodes(i, x))?;
        let theta = 2.0 * angular_offset(b, psi);
        if theta > theta_min && theta < theta_max {
            breakpoints.push(theta);
        }
    }
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup();

    let mut family: Vec<FamilyEntry> = Vec::new();
    for theta in breakpoints {
        let sector = Sector {
            apex: here,
            pointing_psi: psi,
            divergence_theta: theta,
        };
        let mut members: Vec<usize> = ss
            .iter()
            .copied()
            .filter(|&x| covers(&sector, model, topo.pos(x)).is_some())
            .collect();
        members.sort_unstable();
        if members.is_empty() {
            continue;
        }
        if family.last().map(|e| &e.members) == Some(&members) {
            continue;
        }
        family.push(FamilyEntry { theta, members });
    }
    Ok(family)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Line-oriented text form:
///
/// ```text
/// # topology v1
/// sl 20
/// acoustic 2.5255011390810056
/// source 0
/// dest 1
/// 0 0 0
/// 1 20 20
/// ...
/// ```
///
/// Header keys may appear in any order; `#` lines are comments; node rows
/// are `id x y` with ids dense from 0. Floats round-trip exactly.
pub fn to_text(topo: &NetworkTopology) -> String {
    let mut out = String::new();
    out.push_str("# topology v1\n");
    let _ = writeln!(out, "sl {}", topo.side_len);
    let _ = writeln!(out, "acoustic {}", topo.acoustic_range);
    let _ = writeln!(out, "source {}", topo.source);
    let _ = writeln!(out, "dest {}", topo.dest);
    for n in &topo.nodes {
        let _ = writeln!(out, "{} {} {}", n.id, n.pos.x, n.pos.y);
    }
    out
}

pub fn from_text(text: &str) -> Result<NetworkTopology, TopologyError> {
    let mut side_len = None;
    let mut acoustic = None;
    let mut source = None;
    let mut dest = None;
    let mut nodes: Vec<Node> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_f = |s: &str| {
            s.parse::<f64>().map_err(|e| TopologyError::Parse {
                line,
                reason: format!("bad float {s:?}: {e}"),
            })
        };
        let parse_id = |s: &str| {
            s.parse::<usize>().map_err(|e| TopologyError::Parse {
                line,
                reason: format!("bad id {s:?}: {e}"),
            })
        };
        match fields.as_slice() {
            ["sl", v] => side_len = Some(parse_f(v)?),
            ["acoustic", v] => acoustic = Some(parse_f(v)?),
            ["source", v] => source = Some(parse_id(v)?),
            ["dest", v] => dest = Some(parse_id(v)?),
            [id, x, y] => nodes.push(Node {
                id: parse_id(id)?,
                pos: Point::new(parse_f(x)?, parse_f(y)?),
            }),
            _ => {
                return Err(TopologyError::Parse {
                    line,
                    reason: format!("unrecognized line {trimmed:?}"),
                })
            }
        }
    }

    nodes.sort_by_key(|n| n.id);
    let side_len = side_len.ok_or(TopologyError::Invalid("missing sl header"))?;
    let acoustic = acoustic.ok_or(TopologyError::Invalid("missing acoustic header"))?;
    let source = source.ok_or(TopologyError::Invalid("missing source header"))?;
    let dest = dest.ok_or(TopologyError::Invalid("missing dest header"))?;
    NetworkTopology::new(nodes, source, dest, acoustic, side_len)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    fn model() -> LinkModel {
        LinkModel::reference(0.5, 3).unwrap()
    }

    fn line_topology(positions: &[(f64, f64)], acoustic: f64) -> NetworkTopology {
        let nodes = positions
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| Node {
                id,
                pos: Point::new(x, y),
            })
            .collect();
        NetworkTopology::new(nodes, 0, positions.len() - 1, acoustic, 100.0).unwrap()
    }

    // -- bearings -------------------------------------------------------------

    #[test]
    fn bearing_cardinal_directions() {
        let o = Point::new(0.0, 0.0);
        assert_eq!(bearing(o, Point::new(1.0, 0.0)).unwrap(), 0.0);
        assert!((bearing(o, Point::new(0.0, 1.0)).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((bearing(o, Point::new(-1.0, 0.0)).unwrap() - PI).abs() < 1e-15);
        assert!((bearing(o, Point::new(0.0, -1.0)).unwrap() - 3.0 * PI / 2.0).abs() < 1e-15);
        assert!(bearing(o, o).is_err());
    }

    #[test]
    fn angular_offset_wraps() {
        assert!((angular_offset(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((angular_offset(3.0, 3.0)).abs() < 1e-15);
        assert!((angular_offset(0.0, PI) - PI).abs() < 1e-15);
    }

    // -- covers ---------------------------------------------------------------

    #[test]
    fn covers_on_axis_in_range() {
        let m = model();
        let sector = Sector {
            apex: Point::new(0.0, 0.0),
            pointing_psi: 0.0,
            divergence_theta: m.xcvr.theta_min,
        };
        let info = covers(&sector, &m, Point::new(2.0, 0.0)).expect("covered");
        assert_eq!(info.phi, 0.0);
        assert_eq!(info.distance, 2.0);
    }

    #[test]
    fn covers_respects_angular_boundary() {
        let m = model();
        let theta = 0.4;
        let sector = Sector {
            apex: Point::new(0.0, 0.0),
            pointing_psi: 0.0,
            divergence_theta: theta,
        };
        let inside = theta / 2.0 - 1e-4;
        let outside = theta / 2.0 + 1e-4;
        assert!(covers(&sector, &m, Point::new(inside.cos(), inside.sin())).is_some());
        assert!(covers(&sector, &m, Point::new(outside.cos(), outside.sin())).is_none());
    }

    #[test]
    fn covers_respects_range_boundary() {
        let m = model();
        let d_max = m.d_max().unwrap();
        let sector = Sector {
            apex: Point::new(0.0, 0.0),
            pointing_psi: 0.0,
            divergence_theta: m.xcvr.theta_min,
        };
        assert!(covers(&sector, &m, Point::new(d_max - 1e-6, 0.0)).is_some());
        assert!(covers(&sector, &m, Point::new(d_max + 1e-6, 0.0)).is_none());
    }

    #[test]
    fn coverage_interval_in_theta() {
        // A member is covered exactly for theta in [2*offset, theta_upper].
        let m = model();
        let apex = Point::new(0.0, 0.0);
        let offset = 0.09_f64;
        let distance = 1.9;
        let target = Point::new(distance * offset.cos(), distance * offset.sin());
        let upper = theta_upper(&m, distance, offset)
            .unwrap()
            .expect("reachable");
        assert!(upper >= 2.0 * offset);
        for i in 0..60 {
            let theta = m.xcvr.theta_min + (m.xcvr.theta_max - m.xcvr.theta_min) * i as f64 / 59.0;
            let sector = Sector {
                apex,
                pointing_psi: 0.0,
                divergence_theta: theta,
            };
            let expect = theta >= 2.0 * offset && theta <= upper;
            let got = covers(&sector, &m, target).is_some();
            // Exactly at the bisection root the two may disagree within tol.
            if (theta - upper).abs() > 1e-6 {
                assert_eq!(got, expect, "theta={theta} upper={upper}");
            }
        }
    }

    // -- search space and pointing angles --------------------------------------

    #[test]
    fn search_space_modes() {
        // Line s(0,0) - x(2,0) - d(4,0) plus a node behind the source.
        let topo = line_topology(&[(0.0, 0.0), (2.0, 0.0), (4.0, 0.0), (-1.0, 0.0)], 10.0);
        let topo = NetworkTopology::new(topo.nodes, 0, 2, 10.0, 100.0).unwrap();
        let local = search_space(&topo, 0, SearchMode::Local, 10.0).unwrap();
        assert_eq!(local, vec![1, 2]);
        let global = search_space(&topo, 0, SearchMode::Global, 10.0).unwrap();
        assert_eq!(global, vec![1, 2, 3]);
        // Radius cut: nothing within 0.5 m.
        assert!(search_space(&topo, 0, SearchMode::Local, 0.5)
            .unwrap()
            .is_empty());
        assert!(search_space(&topo, 99, SearchMode::Local, 1.0).is_err());
    }

    #[test]
    fn local_subset_of_global() {
        let mut rng = StdRng::seed_from_u64(11);
        let m = model();
        let d_max = m.d_max().unwrap();
        for _ in 0..50 {
            let topo = NetworkTopology::generate_random(8.0, 20, d_max, &mut rng);
            for i in 0..topo.len() {
                let local = search_space(&topo, i, SearchMode::Local, d_max).unwrap();
                let global = search_space(&topo, i, SearchMode::Global, d_max).unwrap();
                assert!(local.iter().all(|x| global.contains(x)));
            }
        }
    }

    #[test]
    fn pointing_angles_sorted_dedup() {
        let topo = line_topology(
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 1.5), (3.0, 0.1)],
            10.0,
        );
        let ss = vec![1, 2, 3, 4];
        let angles = pointing_angles(&topo, 0, &ss).unwrap();
        // Nodes 1 and 2 are collinear with the apex: one angle survives.
        assert_eq!(angles.len(), 3);
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
        assert!(pointing_angles(&topo, 0, &[]).unwrap().is_empty());
    }

    // -- candidate families ------------------------------------------------------

    #[test]
    fn family_single_axis_node() {
        let m = model();
        let topo = line_topology(&[(0.0, 0.0), (2.0, 0.0), (40.0, 40.0)], 10.0);
        let family = candidate_set_family(&topo, 0, 0.0, &[1], &m).unwrap();
        assert_eq!(family.len(), 1);
        assert_eq!(family[0].theta, m.xcvr.theta_min);
        assert_eq!(family[0].members, vec![1]);
    }

    #[test]
    fn family_excludes_wide_offset_nodes() {
        // Offset beyond theta_max/2 can never be covered.
        let m = model();
        let off = m.xcvr.theta_max / 2.0 + 0.05;
        let topo = line_topology(
            &[(0.0, 0.0), (2.0 * off.cos(), 2.0 * off.sin()), (40.0, 40.0)],
            10.0,
        );
        let family = candidate_set_family(&topo, 0, 0.0, &[1], &m).unwrap();
        assert!(family.is_empty());
    }

    #[test]
    fn family_shows_range_beamwidth_tradeoff() {
        // A far node on the axis (reachable only near theta_min) and a near
        // node at a wide offset (covered only once the beam opens): the far
        // node must drop out of the wide sets.
        let m = model();
        let d_max = m.d_max().unwrap();
        let far = (0.995 * d_max, 0.0);
        let off = 0.25_f64; // needs theta >= 0.5 > theta at which far stays in range
        let near = (1.2 * off.cos(), 1.2 * off.sin());
        let topo = line_topology(&[(0.0, 0.0), far, near, (40.0, 40.0)], 10.0);
        let family = candidate_set_family(&topo, 0, 0.0, &[1, 2], &m).unwrap();
        assert_eq!(family.first().unwrap().members, vec![1], "narrow set");
        assert!(
            family.last().unwrap().members.contains(&2),
            "wide set holds the offset node"
        );
        assert!(
            !family.last().unwrap().members.contains(&1),
            "far node out of range in the wide set"
        );
        // Every set stays inside the search space.
        for entry in &family {
            assert!(entry.members.iter().all(|x| [1, 2].contains(x)));
        }
    }

    // -- random generation --------------------------------------------------------

    #[test]
    fn generate_random_is_deterministic() {
        let a = NetworkTopology::generate_random(20.0, 50, 2.5, &mut StdRng::seed_from_u64(5));
        let b = NetworkTopology::generate_random(20.0, 50, 2.5, &mut StdRng::seed_from_u64(5));
        assert_eq!(a.len(), 52);
        for (na, nb) in a.nodes.iter().zip(&b.nodes) {
            assert_eq!(na.pos, nb.pos);
        }
        assert_eq!(a.pos(0), Point::new(0.0, 0.0));
        assert_eq!(a.pos(1), Point::new(20.0, 20.0));
    }

    #[test]
    fn generate_random_zero_relays() {
        let t = NetworkTopology::generate_random(10.0, 0, 2.5, &mut StdRng::seed_from_u64(1));
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn generate_random_mean_position() {
        // Empirical mean of 10^4 uniform draws vs (SL/2, SL/2); the standard
        // error of each coordinate is SL/sqrt(12 n).
        let sl = 10.0;
        let n = 10_000;
        let t = NetworkTopology::generate_random(sl, n, 2.5, &mut StdRng::seed_from_u64(42));
        let (mut sx, mut sy) = (0.0, 0.0);
        for node in &t.nodes[2..] {
            sx += node.pos.x;
            sy += node.pos.y;
        }
        let se = sl / (12.0 * n as f64).sqrt();
        assert!((sx / n as f64 - sl / 2.0).abs() < 3.0 * se);
        assert!((sy / n as f64 - sl / 2.0).abs() < 3.0 * se);
    }

    // -- serialization ---------------------------------------------------------------

    #[test]
    fn text_round_trip_is_exact() {
        let t = NetworkTopology::generate_random(17.3, 23, 2.5255, &mut StdRng::seed_from_u64(9));
        let text = to_text(&t);
        let back = from_text(&text).unwrap();
        assert_eq!(back.len(), t.len());
        assert_eq!(back.source, t.source);
        assert_eq!(back.dest, t.dest);
        assert_eq!(back.side_len, t.side_len);
        assert_eq!(back.acoustic_range, t.acoustic_range);
        for (a, b) in t.nodes.iter().zip(&back.nodes) {
            assert_eq!(a.pos, b.pos, "positions must round-trip bit-exactly");
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "# topology v1\nsl 10\nacoustic 2\nsource 0\ndest 1\n0 0 zero\n";
        match from_text(bad) {
            Err(TopologyError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(from_text("sl 10\n").is_err());
    }
}
