//! Snapshot sequences over one orbit period for the three partition methods,
//! and the closed-form summary of the reassignment method.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_ls_state, ConstellationSpec, VisibilityModel};
use crate::links::{
    fixed_topology, intra_plane_edges, reassign_topology, IslEdge, IslKind, Method,
    TopologyEdgeSet, Trigger,
};

/// Absolute accuracy of root-solved event times.
pub const EVENT_TIME_TOL_S: f64 = 1e-6;
/// Crossings closer than this are treated as simultaneous.
pub const MERGE_TOL_S: f64 = 1e-4;
/// Tolerance for the sum of snapshot durations against the period.
pub const TILING_TOL_S: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSummary {
    pub polar_border_deg: f64,
    pub delta_reassign_s: f64,
    pub s_reassign: usize,
    pub nisl_reassign: usize,
    pub nisl_oblique: usize,
    pub nisl_horizontal: usize,
    pub nls_npa: usize,
}

/// Closed-form snapshot duration, snapshot count and link counts of the
/// reassignment method.
pub fn analytic_summary(spec: &ConstellationSpec, polar_border_deg: f64) -> Result<AnalyticSummary> {
    spec.require_even_planes()?;
    if !(polar_border_deg > 0.0 && polar_border_deg < 90.0) {
        return Err(Error::domain(format!(
            "polar border latitude {polar_border_deg}° outside (0°, 90°)"
        )));
    }
    let m = spec.sats_per_plane as usize;
    let n = spec.plane_count as usize;
    let nls_npa = ((2.0 * polar_border_deg / spec.phase_offset_deg()) + 1e-9).floor() as usize;
    let nls_npa = nls_npa.min(m);
    let nisl_oblique = 2 * (nls_npa / 2) * (n - 1);
    let nisl_horizontal = if nls_npa % 2 == 1 { n - 2 } else { 0 };
    Ok(AnalyticSummary {
        polar_border_deg,
        delta_reassign_s: spec.period() / (2 * m) as f64,
        s_reassign: 2 * m,
        nisl_reassign: nisl_oblique + nisl_horizontal,
        nisl_oblique,
        nisl_horizontal,
        nls_npa,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarCap {
    North,
    South,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorderCrossing {
    /// Phase class of the line of satellites.
    pub class: usize,
    pub cap: PolarCap,
}

/// One or more simultaneous crossings of the same kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarEvent {
    pub time: f64,
    pub kind: Trigger,
    pub crossings: Vec<BorderCrossing>,
}

/// Polar-border crossings of every line of satellites in `[0, horizon)`.
///
/// Each row's reference latitude is sampled every `T/(200·M)` and sign
/// changes of "inside the cap" are refined by bisection. North and south
/// crossings of the same kind that coincide are merged into one event.
pub fn enumerate_events(
    spec: &ConstellationSpec,
    polar_border_deg: f64,
    horizon: f64,
) -> Vec<PolarEvent> {
    if !(horizon > 0.0) {
        return Vec::new();
    }
    let period = spec.period();
    let step = period / (200.0 * f64::from(spec.sats_per_plane));
    let samples = (horizon / step).ceil() as usize + 2;

    let mut raw: Vec<(f64, Trigger, BorderCrossing)> = Vec::new();
    for class in 0..spec.ls_count() {
        let lat = |t: f64| spec.reference_latitude_deg(spec.class_arg_of_latitude_deg(class, t));
        for cap in [PolarCap::North, PolarCap::South] {
            let inside = |t: f64| match cap {
                PolarCap::North => lat(t) >= polar_border_deg,
                PolarCap::South => lat(t) <= -polar_border_deg,
            };
            let mut prev_t = -step;
            let mut prev_in = inside(prev_t);
            for k in 1..=samples {
                let t = -step + k as f64 * step;
                let now_in = inside(t);
                if now_in != prev_in {
                    let (mut lo, mut hi) = (prev_t, t);
                    while hi - lo > EVENT_TIME_TOL_S / 10.0 {
                        let mid = 0.5 * (lo + hi);
                        if inside(mid) == prev_in {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    let root = 0.5 * (lo + hi);
                    if root >= -EVENT_TIME_TOL_S && root < horizon - EVENT_TIME_TOL_S {
                        let kind = if now_in { Trigger::Enter } else { Trigger::Exit };
                        raw.push((root.max(0.0), kind, BorderCrossing { class, cap }));
                    }
                }
                prev_t = t;
                prev_in = now_in;
            }
        }
    }

    raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut events: Vec<PolarEvent> = Vec::new();
    for (time, kind, crossing) in raw {
        let open = events
            .iter_mut()
            .rev()
            .take_while(|e| time - e.time <= MERGE_TOL_S)
            .find(|e| e.kind == kind);
        match open {
            Some(e) => e.crossings.push(crossing),
            None => events.push(PolarEvent {
                time,
                kind,
                crossings: vec![crossing],
            }),
        }
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.kind.cmp(&b.kind)));
    events
}

/// Distinct instants in `[0, T)` at which any row crosses a polar border.
fn boundary_times(spec: &ConstellationSpec, polar_border_deg: f64) -> Vec<f64> {
    let mut times: Vec<f64> = Vec::new();
    for e in enumerate_events(spec, polar_border_deg, spec.period()) {
        if times.last().is_none_or(|&t| e.time - t > MERGE_TOL_S) {
            times.push(e.time);
        }
    }
    times
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySnapshot {
    pub start: f64,
    pub end: f64,
    pub edges: TopologyEdgeSet,
    /// NISL_i
    pub inter_plane_count: usize,
}

impl TopologySnapshot {
    pub fn new(start: f64, end: f64, edges: TopologyEdgeSet) -> Self {
        let inter_plane_count = edges.inter_plane_count();
        TopologySnapshot {
            start,
            end,
            edges,
            inter_plane_count,
        }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn count(&self, kind: IslKind) -> usize {
        self.edges.count(kind)
    }

    /// Whether `t`, taken modulo `period`, falls in `[start, end)`.
    pub fn contains(&self, t: f64, period: f64) -> bool {
        (t - self.start).rem_euclid(period) < self.duration()
    }
}

/// Snapshots of one method tiling one period cyclically: the first starts at
/// the first boundary at or after `t = 0` and the last may run past `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSequence {
    pub method: Method,
    pub polar_border_deg: f64,
    pub trigger: Option<Trigger>,
    pub period_s: f64,
    /// Set when the equal-time interval does not divide the period.
    pub truncated_last: bool,
    pub snapshots: Vec<TopologySnapshot>,
}

impl SnapshotSequence {
    /// S
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn durations(&self) -> impl Iterator<Item = f64> + '_ {
        self.snapshots.iter().map(TopologySnapshot::duration)
    }

    pub fn min_duration(&self) -> f64 {
        self.durations().fold(f64::INFINITY, f64::min)
    }

    pub fn max_duration(&self) -> f64 {
        self.durations().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn nisl_values(&self) -> BTreeSet<usize> {
        self.snapshots.iter().map(|s| s.inter_plane_count).collect()
    }

    /// Index of the snapshot governing time `t` (the sequence repeats every period).
    pub fn index_at(&self, t: f64) -> Option<usize> {
        let first = self.snapshots.first()?.start;
        let phase = first + (t - first).rem_euclid(self.period_s);
        let idx = self.snapshots.partition_point(|s| s.start <= phase);
        Some(idx.saturating_sub(1).min(self.snapshots.len() - 1))
    }

    pub fn snapshot_at(&self, t: f64) -> Option<&TopologySnapshot> {
        self.index_at(t).map(|i| &self.snapshots[i])
    }

    /// Contiguous, non-overlapping, positive-length snapshots whose
    /// durations sum to the period.
    pub fn check_tiling(&self) -> std::result::Result<(), String> {
        let Some(first) = self.snapshots.first() else {
            return Err("empty sequence".into());
        };
        if !(0.0..self.period_s).contains(&first.start) {
            return Err(format!("first snapshot starts at {} outside [0, T)", first.start));
        }
        for (i, s) in self.snapshots.iter().enumerate() {
            if !(s.end > s.start) {
                return Err(format!("snapshot {i} has non-positive duration"));
            }
            if let Some(next) = self.snapshots.get(i + 1) {
                if (next.start - s.end).abs() > 1e-9 {
                    return Err(format!("gap or overlap between snapshots {i} and {}", i + 1));
                }
            }
        }
        let total: f64 = self.durations().sum();
        if (total - self.period_s).abs() > TILING_TOL_S {
            return Err(format!("durations sum to {total}, period is {}", self.period_s));
        }
        Ok(())
    }
}

/// One snapshot per reassignment event of the given kind.
pub fn partition_reassignment(
    spec: &ConstellationSpec,
    vis: &VisibilityModel,
    trigger: Trigger,
) -> Result<SnapshotSequence> {
    spec.require_even_planes()?;
    let period = spec.period();
    let times: Vec<f64> = enumerate_events(spec, vis.polar_border_deg, period)
        .into_iter()
        .filter(|e| e.kind == trigger)
        .map(|e| e.time)
        .collect();
    if times.is_empty() {
        return Err(Error::domain(format!(
            "no line of satellites reaches the polar border {}°",
            vis.polar_border_deg
        )));
    }
    let snapshots = times
        .iter()
        .enumerate()
        .map(|(k, &start)| {
            let end = times.get(k + 1).copied().unwrap_or(times[0] + period);
            let ls = build_ls_state(spec, vis, start)?;
            let edges = reassign_topology(spec, vis, &ls, trigger)?;
            Ok(TopologySnapshot::new(start, end, edges))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SnapshotSequence {
        method: Method::Reassignment,
        polar_border_deg: vis.polar_border_deg,
        trigger: Some(trigger),
        period_s: period,
        truncated_last: false,
        snapshots,
    })
}

/// A new snapshot whenever the fixed on-off edge set changes.
pub fn partition_fixed(spec: &ConstellationSpec, vis: &VisibilityModel) -> SnapshotSequence {
    let period = spec.period();
    let times = boundary_times(spec, vis.polar_border_deg);
    let mut sequence = SnapshotSequence {
        method: Method::Fixed,
        polar_border_deg: vis.polar_border_deg,
        trigger: None,
        period_s: period,
        truncated_last: false,
        snapshots: Vec::new(),
    };
    if times.is_empty() {
        let mut edges = fixed_topology(spec, vis, 0.0);
        edges.generated_at = 0.0;
        sequence.snapshots.push(TopologySnapshot::new(0.0, period, edges));
        return sequence;
    }

    let mut snaps: Vec<TopologySnapshot> = Vec::new();
    for (k, &start) in times.iter().enumerate() {
        let end = times.get(k + 1).copied().unwrap_or(times[0] + period);
        let mut edges = fixed_topology(spec, vis, 0.5 * (start + end));
        edges.generated_at = start;
        match snaps.last_mut() {
            Some(prev) if prev.edges.edges == edges.edges => prev.end = end,
            _ => snaps.push(TopologySnapshot::new(start, end, edges)),
        }
    }
    if snaps.len() > 1 && snaps[0].edges.edges == snaps[snaps.len() - 1].edges.edges {
        let first = snaps.remove(0);
        snaps.last_mut().expect("non-empty").end = first.end + period;
    }
    if snaps.len() == 1 {
        // the edge set never changes
        let only = &mut snaps[0];
        only.start = 0.0;
        only.end = period;
        only.edges.generated_at = 0.0;
    }
    sequence.snapshots = snaps;
    sequence
}

/// Equal intervals anchored at `t = 0`, each keeping only the fixed
/// inter-plane links that stay up for the whole interval.
pub fn partition_equal_time(
    spec: &ConstellationSpec,
    vis: &VisibilityModel,
    delta: f64,
) -> Result<SnapshotSequence> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::domain(format!("equal-time interval {delta} must be positive")));
    }
    let period = spec.period();
    let ratio = period / delta;
    let rounded = ratio.round();
    let exact = rounded >= 1.0 && (ratio - rounded).abs() <= 1e-6 * ratio;
    let count = if exact { rounded as usize } else { ratio.ceil() as usize };
    let times = boundary_times(spec, vis.polar_border_deg);
    let intra = intra_plane_edges(spec);

    let mut snapshots = Vec::with_capacity(count);
    for k in 0..count {
        let start = k as f64 * delta;
        let end = if k + 1 == count { period } else { (k + 1) as f64 * delta };
        let mut cuts = vec![start];
        cuts.extend(
            times
                .iter()
                .copied()
                .filter(|&t| t > start + MERGE_TOL_S && t < end - MERGE_TOL_S),
        );
        cuts.push(end);
        let mut surviving: Option<BTreeSet<IslEdge>> = None;
        for w in cuts.windows(2) {
            let live: BTreeSet<IslEdge> = fixed_topology(spec, vis, 0.5 * (w[0] + w[1]))
                .inter_plane()
                .copied()
                .collect();
            surviving = Some(match surviving {
                None => live,
                Some(s) => s.intersection(&live).copied().collect(),
            });
        }
        let mut edges = intra.clone();
        edges.generated_at = start;
        edges.method = Some(Method::EqualTime);
        edges.edges.extend(surviving.unwrap_or_default());
        snapshots.push(TopologySnapshot::new(start, end, edges));
    }
    Ok(SnapshotSequence {
        method: Method::EqualTime,
        polar_border_deg: vis.polar_border_deg,
        trigger: None,
        period_s: period,
        truncated_last: !exact,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_table_values() {
        let iridium = ConstellationSpec::iridium();
        let s = analytic_summary(&iridium, 60.0).unwrap();
        assert_eq!((s.s_reassign, s.nisl_reassign, s.nisl_oblique, s.nisl_horizontal), (22, 34, 30, 4));
        assert!((s.delta_reassign_s - 6027.0 / 22.0).abs() < 1e-12);

        let teledesic = ConstellationSpec::teledesic();
        let s = analytic_summary(&teledesic, 70.0).unwrap();
        assert_eq!((s.s_reassign, s.nisl_reassign), (48, 198));
        assert!((s.delta_reassign_s - 6793.8 / 48.0).abs() < 1e-12);
        let s = analytic_summary(&teledesic, 60.0).unwrap();
        assert_eq!((s.nls_npa, s.nisl_horizontal, s.nisl_reassign), (16, 0, 176));
    }

    #[test]
    fn analytic_rejects_odd_planes() {
        let mut spec = ConstellationSpec::iridium();
        spec.plane_count = 7;
        assert!(matches!(analytic_summary(&spec, 60.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn no_events_for_empty_horizon() {
        assert!(enumerate_events(&ConstellationSpec::iridium(), 60.0, 0.0).is_empty());
    }

    #[test]
    fn equal_time_rejects_bad_interval() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        assert!(partition_equal_time(&spec, &vis, 0.0).is_err());
        assert!(partition_equal_time(&spec, &vis, -5.0).is_err());
    }

    #[test]
    fn equal_time_truncation_flagged() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        let seq = partition_equal_time(&spec, &vis, 1000.0).unwrap();
        assert!(seq.truncated_last);
        assert_eq!(seq.len(), 7);
        assert!((seq.snapshots[6].duration() - 27.0).abs() < 1e-9);
        seq.check_tiling().unwrap();
    }

    #[test]
    fn fixed_without_crossings_is_single_snapshot() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 87.0).unwrap();
        let seq = partition_fixed(&spec, &vis);
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.snapshots[0].inter_plane_count, 55);
        seq.check_tiling().unwrap();
        assert!(partition_reassignment(&spec, &vis, Trigger::Enter).is_err());
    }

    #[test]
    fn cyclic_lookup() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        let seq = partition_reassignment(&spec, &vis, Trigger::Enter).unwrap();
        let first = seq.snapshots[0].start;
        assert!(first > 0.0);
        // before the first event belongs to the wrapped last snapshot
        assert_eq!(seq.index_at(first * 0.5), Some(seq.len() - 1));
        assert_eq!(seq.index_at(first + 1.0), Some(0));
        assert_eq!(seq.index_at(first + 1.0 + 3.0 * seq.period_s), Some(0));
        for (i, s) in seq.snapshots.iter().enumerate() {
            let mid = 0.5 * (s.start + s.end);
            assert_eq!(seq.index_at(mid), Some(i));
            assert!(s.contains(mid, seq.period_s));
        }
    }
}
