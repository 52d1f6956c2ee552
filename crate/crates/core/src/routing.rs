//! Shortest-delay routing over snapshots, the ground-to-ground delay
//! experiment and the inter-plane link utilization ratio.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    elevation_angle, propagation_delay, ConstellationSpec, GroundStation, SatId, Vec3,
};
use crate::links::{IslKind, Method};
use crate::partition::{SnapshotSequence, TopologySnapshot};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilizationReport {
    pub method: Method,
    pub polar_border_deg: f64,
    /// U in `[0, 1]`.
    pub utilization: f64,
}

/// Time-weighted inter-plane link count over the maximum `(N-1)·M·T`.
pub fn utilization(seq: &SnapshotSequence, spec: &ConstellationSpec) -> Result<UtilizationReport> {
    if seq.is_empty() {
        return Err(Error::domain("utilization of an empty snapshot sequence"));
    }
    let available: f64 = seq
        .snapshots
        .iter()
        .map(|s| s.inter_plane_count as f64 * s.duration())
        .sum();
    let max = f64::from((spec.plane_count - 1) * spec.sats_per_plane) * seq.period_s;
    Ok(UtilizationReport {
        method: seq.method,
        polar_border_deg: seq.polar_border_deg,
        utilization: available / max,
    })
}

fn attach_with(spec: &ConstellationSpec, gs: &GroundStation, t: f64, positions: &[Vec3]) -> Option<(SatId, f64)> {
    let mut best: Option<(SatId, f64)> = None;
    for (idx, pos) in positions.iter().enumerate() {
        let el = elevation_angle(gs, *pos, t, spec.earth_radius_km);
        if el < gs.min_elevation_deg {
            continue;
        }
        if best.is_none_or(|(_, b)| el > b) {
            best = Some((spec.sat_at(idx), el));
        }
    }
    best
}

/// Highest-elevation satellite visible from `gs` at `t`; ties go to the
/// lower `SatId`. `None` when nothing clears the minimum elevation.
pub fn attach_ground(spec: &ConstellationSpec, gs: &GroundStation, t: f64) -> Option<SatId> {
    attach_with(spec, gs, t, &spec.positions(t)).map(|(s, _)| s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub delay_s: f64,
    pub path: Vec<SatId>,
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    cost: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(
    spec: &ConstellationSpec,
    snapshot: &TopologySnapshot,
    positions: &[Vec3],
    src: usize,
    dst: usize,
) -> Option<(f64, Vec<usize>)> {
    let n = positions.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &snapshot.edges.edges {
        let (a, b) = (spec.sat_index(e.a), spec.sat_index(e.b));
        let w = propagation_delay(positions[a], positions[b]);
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Frontier { cost: 0.0, node: src });
    while let Some(Frontier { cost, node }) = heap.pop() {
        if node == dst {
            break;
        }
        if cost > dist[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let c = cost + w;
            if c < dist[next] {
                dist[next] = c;
                prev[next] = node;
                heap.push(Frontier { cost: c, node: next });
            }
        }
    }
    if !dist[dst].is_finite() {
        return None;
    }
    let mut path = vec![dst];
    while let Some(&last) = path.last() {
        if last == src {
            break;
        }
        path.push(prev[last]);
    }
    path.reverse();
    Some((dist[dst], path))
}

/// Minimum propagation-delay path between two satellites over the snapshot's
/// links, with link delays taken at `t`. `Ok(None)` when unreachable.
pub fn shortest_delay(
    spec: &ConstellationSpec,
    snapshot: &TopologySnapshot,
    t: f64,
    src: SatId,
    dst: SatId,
) -> Result<Option<Route>> {
    for s in [src, dst] {
        if !spec.contains(s) {
            return Err(Error::InvalidSat(s));
        }
    }
    if !snapshot.contains(t, spec.period()) {
        return Err(Error::domain(format!(
            "t = {t} outside snapshot [{}, {})",
            snapshot.start, snapshot.end
        )));
    }
    let positions = spec.positions(t);
    Ok(route_with(spec, snapshot, &positions, src, dst))
}

fn route_with(
    spec: &ConstellationSpec,
    snapshot: &TopologySnapshot,
    positions: &[Vec3],
    src: SatId,
    dst: SatId,
) -> Option<Route> {
    dijkstra(spec, snapshot, positions, spec.sat_index(src), spec.sat_index(dst)).map(
        |(delay_s, path)| Route {
            delay_s,
            path: path.into_iter().map(|i| spec.sat_at(i)).collect(),
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaySample {
    pub send_time: f64,
    /// End-to-end propagation delay including both up/down links.
    pub delay_s: Option<f64>,
    /// Links traversed, up/down links included.
    pub hops: usize,
    pub horizontal_hops: usize,
    pub reachable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaySeries {
    pub source: GroundStation,
    pub destination: GroundStation,
    pub method: Method,
    pub polar_border_deg: f64,
    pub samples: Vec<DelaySample>,
    /// Mean over reachable samples.
    pub average_delay_s: Option<f64>,
    pub unreachable_fraction: f64,
}

/// Send a packet every `interval` seconds for `duration` seconds and record
/// its propagation delay over the governing snapshot.
pub fn delay_experiment(
    spec: &ConstellationSpec,
    seq: &SnapshotSequence,
    source: &GroundStation,
    destination: &GroundStation,
    duration: f64,
    interval: f64,
) -> Result<DelaySeries> {
    if !(duration > 0.0 && interval > 0.0) {
        return Err(Error::domain("duration and interval must be positive"));
    }
    if seq.is_empty() {
        return Err(Error::domain("delay experiment over an empty sequence"));
    }
    let count = (duration / interval - 1e-9).ceil() as usize;
    let mut samples = Vec::with_capacity(count);
    for k in 0..count {
        let t = k as f64 * interval;
        let positions = spec.positions(t);
        let snapshot = seq.snapshot_at(t).expect("non-empty sequence");
        let up = attach_with(spec, source, t, &positions);
        let down = attach_with(spec, destination, t, &positions);
        let routed = match (up, down) {
            (Some((a, _)), Some((b, _))) => route_with(spec, snapshot, &positions, a, b).map(|r| (a, b, r)),
            _ => None,
        };
        let sample = match routed {
            Some((a, b, route)) => {
                let udl = propagation_delay(source.position(t, spec.earth_radius_km), positions[spec.sat_index(a)])
                    + propagation_delay(destination.position(t, spec.earth_radius_km), positions[spec.sat_index(b)]);
                let horizontal_hops = route
                    .path
                    .windows(2)
                    .filter(|w| {
                        snapshot.edges.edges.contains(&crate::links::IslEdge::new(
                            w[0],
                            w[1],
                            IslKind::Horizontal,
                        ))
                    })
                    .count();
                DelaySample {
                    send_time: t,
                    delay_s: Some(route.delay_s + udl),
                    hops: route.path.len() + 1,
                    horizontal_hops,
                    reachable: true,
                }
            }
            None => DelaySample {
                send_time: t,
                delay_s: None,
                hops: 0,
                horizontal_hops: 0,
                reachable: false,
            },
        };
        samples.push(sample);
    }
    let reached: Vec<f64> = samples.iter().filter_map(|s| s.delay_s).collect();
    let average_delay_s = (!reached.is_empty()).then(|| reached.iter().sum::<f64>() / reached.len() as f64);
    let unreachable_fraction = 1.0 - reached.len() as f64 / samples.len() as f64;
    Ok(DelaySeries {
        source: source.clone(),
        destination: destination.clone(),
        method: seq.method,
        polar_border_deg: seq.polar_border_deg,
        samples,
        average_delay_s,
        unreachable_fraction,
    })
}
