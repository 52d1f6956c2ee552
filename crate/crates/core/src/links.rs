//! Inter-satellite link sets: the permanent intra-plane rings, the fixed
//! on-off baseline, and the reassigned topologies built at polar-border
//! events.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    geocentric_angle, ConstellationSpec, LsState, SatId, Side, VisibilityModel, BORDER_TOL_DEG,
    LATITUDE_TOL_DEG,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IslKind {
    IntraPlane,
    Oblique,
    Horizontal,
}

impl IslKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IslKind::IntraPlane => "intra_plane",
            IslKind::Oblique => "oblique",
            IslKind::Horizontal => "horizontal",
        }
    }
}

/// Undirected link; endpoints are stored in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IslEdge {
    pub a: SatId,
    pub b: SatId,
    pub kind: IslKind,
}

impl IslEdge {
    pub fn new(x: SatId, y: SatId, kind: IslKind) -> Self {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        IslEdge { a, b, kind }
    }

    pub fn is_inter_plane(&self) -> bool {
        self.kind != IslKind::IntraPlane
    }

    pub fn other(&self, sat: SatId) -> Option<SatId> {
        if sat == self.a {
            Some(self.b)
        } else if sat == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for IslEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{} ({})", self.a, self.b, self.kind.as_str())
    }
}

/// Snapshot partition method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Reassignment,
    Fixed,
    EqualTime,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Reassignment, Method::Fixed, Method::EqualTime];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Reassignment => "reassignment",
            Method::Fixed => "fixed",
            Method::EqualTime => "equal_time",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "reassignment" | "reassign" => Ok(Method::Reassignment),
            "fixed" => Ok(Method::Fixed),
            "equal_time" | "equal" => Ok(Method::EqualTime),
            other => Err(Error::domain(format!("unknown method `{other}`"))),
        }
    }
}

/// Which polar-border crossing starts a reassignment snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    /// A line of satellites enters a polar area (links break down).
    Enter,
    /// A line of satellites leaves a polar area (links can be established).
    Exit,
}

impl Trigger {
    pub fn as_str(self) -> &'static str {
        match self {
            Trigger::Enter => "enter",
            Trigger::Exit => "exit",
        }
    }
}

impl FromStr for Trigger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "enter" => Ok(Trigger::Enter),
            "exit" => Ok(Trigger::Exit),
            other => Err(Error::domain(format!("unknown trigger `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyEdgeSet {
    pub edges: BTreeSet<IslEdge>,
    pub generated_at: f64,
    /// `None` for the bare intra-plane rings.
    pub method: Option<Method>,
}

impl TopologyEdgeSet {
    pub fn new(generated_at: f64, method: Option<Method>) -> Self {
        TopologyEdgeSet {
            edges: BTreeSet::new(),
            generated_at,
            method,
        }
    }

    pub fn count(&self, kind: IslKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn inter_plane_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_inter_plane()).count()
    }

    pub fn inter_plane(&self) -> impl Iterator<Item = &IslEdge> {
        self.edges.iter().filter(|e| e.is_inter_plane())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Permanent ring links within each plane.
pub fn intra_plane_edges(spec: &ConstellationSpec) -> TopologyEdgeSet {
    let m = spec.sats_per_plane;
    let mut set = TopologyEdgeSet::new(0.0, None);
    for p in 1..=spec.plane_count {
        for j in 1..=m {
            set.edges.insert(IslEdge::new(
                SatId::new(p, j),
                SatId::new(p, j % m + 1),
                IslKind::IntraPlane,
            ));
        }
    }
    set
}

/// Oblique pairs of the fixed baseline.
///
/// Lines of satellites are paired statically, phase class `2k` with `2k+1`,
/// and every satellite links to its two adjacent-plane neighbours in the
/// partner line: `S(p,j)–S(p+1,j)` for odd `p`, `S(p,j)–S(p+1,j-1)` for even
/// `p`. Both endpoints are ω_f apart in argument of latitude and no pair
/// crosses the seam.
pub fn fixed_oblique_pairs(spec: &ConstellationSpec) -> Vec<(SatId, SatId)> {
    let m = spec.sats_per_plane;
    (1..spec.plane_count)
        .flat_map(|p| {
            (1..=m).map(move |j| {
                let k = if p % 2 == 1 { j } else { (j + m - 2) % m + 1 };
                (SatId::new(p, j), SatId::new(p + 1, k))
            })
        })
        .collect()
}

/// Fixed on-off baseline: a pair is up iff neither endpoint is in a polar area.
pub fn fixed_topology(spec: &ConstellationSpec, vis: &VisibilityModel, t: f64) -> TopologyEdgeSet {
    let lat = spec.latitudes(t);
    let mut set = intra_plane_edges(spec);
    set.generated_at = t;
    set.method = Some(Method::Fixed);
    for (a, b) in fixed_oblique_pairs(spec) {
        let outside = |s: SatId| lat[spec.sat_index(s)].abs() < vis.polar_border_deg;
        if outside(a) && outside(b) {
            set.edges.insert(IslEdge::new(a, b, IslKind::Oblique));
        }
    }
    set
}

fn check_ls_state(spec: &ConstellationSpec, vis: &VisibilityModel, ls: &LsState) -> Result<()> {
    let half = (spec.plane_count / 2) as usize;
    if ls.rows.len() != spec.ls_count() {
        return Err(Error::InvalidLsState(format!(
            "{} rows, expected {}",
            ls.rows.len(),
            spec.ls_count()
        )));
    }
    if (ls.polar_border_deg - vis.polar_border_deg).abs() > 1e-12 {
        return Err(Error::InvalidLsState(
            "polar border differs from the visibility model".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for row in &ls.rows {
        if row.members.len() != half {
            return Err(Error::InvalidLsState(format!(
                "row {} has {} members, expected {half}",
                row.class,
                row.members.len()
            )));
        }
        for s in &row.members {
            if !spec.contains(*s) || spec.phase_class(*s) != row.class || !seen.insert(*s) {
                return Err(Error::InvalidLsState(format!("misplaced satellite {s}")));
            }
        }
    }
    Ok(())
}

/// Reassign every inter-plane link at a polar-border event.
///
/// In each hemisphere the rows that stay outside the polar area for one
/// snapshot (`ω_f` of orbital motion) are taken in order from the row that
/// left the polar area most recently. Consecutive rows are paired and each
/// pair gets an oblique chain across planes `1..=N`; an odd row left over
/// (the one nearest the entry border) gets horizontal links between its
/// members. At an exit event with a non-uniform row layout the row about to
/// enter the polar area is not assigned.
pub fn reassign_topology(
    spec: &ConstellationSpec,
    vis: &VisibilityModel,
    ls: &LsState,
    trigger: Trigger,
) -> Result<TopologyEdgeSet> {
    spec.require_even_planes()?;
    check_ls_state(spec, vis, ls)?;
    let border = ls
        .polar_border_arg_deg
        .ok_or_else(|| Error::InvalidLsState("orbit never reaches the polar border".into()))?;
    let target = match trigger {
        Trigger::Enter => border,
        Trigger::Exit => -border,
    };
    if !ls
        .rows
        .iter()
        .any(|r| (r.side_arg_deg - target).abs() <= BORDER_TOL_DEG)
    {
        return Err(Error::InvalidLsState(format!(
            "no line of satellites on the polar border at t = {} for a {} event",
            ls.time,
            trigger.as_str()
        )));
    }

    let step = spec.phase_offset_deg();
    let mut set = intra_plane_edges(spec);
    set.generated_at = ls.time;
    set.method = Some(Method::Reassignment);

    for side in [Side::Ascending, Side::Descending] {
        let mut rows: Vec<_> = ls
            .rows
            .iter()
            .filter(|r| {
                r.side == side
                    && r.side_arg_deg >= -border - BORDER_TOL_DEG
                    && r.side_arg_deg + step <= border + BORDER_TOL_DEG
            })
            .collect();
        rows.sort_by(|a, b| a.side_arg_deg.total_cmp(&b.side_arg_deg));

        let mut chunks = rows.chunks_exact(2);
        for pair in &mut chunks {
            let mut chain: Vec<SatId> = pair[0]
                .members
                .iter()
                .chain(pair[1].members.iter())
                .copied()
                .collect();
            chain.sort();
            debug_assert!(chain.iter().enumerate().all(|(k, s)| s.plane == k as u32 + 1));
            for w in chain.windows(2) {
                set.edges.insert(IslEdge::new(w[0], w[1], IslKind::Oblique));
            }
        }
        if let [last] = chunks.remainder() {
            for w in last.members.windows(2) {
                set.edges.insert(IslEdge::new(w[0], w[1], IslKind::Horizontal));
            }
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Diagnostic {
    UnknownSatellite { edge: IslEdge },
    Malformed { edge: IslEdge, reason: &'static str },
    SeamCrossing { edge: IslEdge },
    DuplicateLink { edge: IslEdge },
    PolarEndpoint { edge: IslEdge, sat: SatId, latitude_deg: f64 },
    OutOfRange { edge: IslEdge, angle_deg: f64 },
    InterPlaneDegree { sat: SatId, degree: usize },
    IntraPlaneDegree { sat: SatId, degree: usize },
    HorizontalTooLow { edge: IslEdge, latitude_deg: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnknownSatellite { edge } => write!(f, "{edge}: unknown satellite"),
            Diagnostic::Malformed { edge, reason } => write!(f, "{edge}: {reason}"),
            Diagnostic::SeamCrossing { edge } => write!(f, "{edge}: crosses the seam"),
            Diagnostic::DuplicateLink { edge } => write!(f, "{edge}: duplicate link"),
            Diagnostic::PolarEndpoint { edge, sat, latitude_deg } => {
                write!(f, "{edge}: {sat} in polar area at {latitude_deg:.4}°")
            }
            Diagnostic::OutOfRange { edge, angle_deg } => {
                write!(f, "{edge}: geocentric angle {angle_deg:.3}° beyond range")
            }
            Diagnostic::InterPlaneDegree { sat, degree } => {
                write!(f, "{sat}: {degree} inter-plane links")
            }
            Diagnostic::IntraPlaneDegree { sat, degree } => {
                write!(f, "{sat}: {degree} intra-plane links")
            }
            Diagnostic::HorizontalTooLow { edge, latitude_deg } => {
                write!(f, "{edge}: horizontal link at {latitude_deg:.4}°")
            }
        }
    }
}

fn structural_diagnostics(spec: &ConstellationSpec, edges: &TopologyEdgeSet) -> Vec<Diagnostic> {
    let n = spec.plane_count;
    let m = spec.sats_per_plane;
    let mut out = Vec::new();
    let mut endpoints = BTreeSet::new();
    let mut inter_degree: BTreeMap<SatId, usize> = BTreeMap::new();
    let mut intra_degree: BTreeMap<SatId, usize> = BTreeMap::new();

    for edge in &edges.edges {
        if !spec.contains(edge.a) || !spec.contains(edge.b) || edge.a == edge.b {
            out.push(Diagnostic::UnknownSatellite { edge: *edge });
            continue;
        }
        if !endpoints.insert((edge.a, edge.b)) {
            out.push(Diagnostic::DuplicateLink { edge: *edge });
        }
        let dp = edge.b.plane.abs_diff(edge.a.plane);
        match edge.kind {
            IslKind::IntraPlane => {
                let dj = edge.b.index.abs_diff(edge.a.index);
                if dp != 0 || !(dj == 1 || dj == m - 1) {
                    out.push(Diagnostic::Malformed {
                        edge: *edge,
                        reason: "intra-plane link between non-adjacent satellites",
                    });
                }
                *intra_degree.entry(edge.a).or_default() += 1;
                *intra_degree.entry(edge.b).or_default() += 1;
            }
            IslKind::Oblique | IslKind::Horizontal => {
                if n > 2 && edge.a.plane == 1 && edge.b.plane == n {
                    out.push(Diagnostic::SeamCrossing { edge: *edge });
                } else if edge.kind == IslKind::Oblique && dp != 1 {
                    out.push(Diagnostic::Malformed {
                        edge: *edge,
                        reason: "oblique link between non-adjacent planes",
                    });
                } else if edge.kind == IslKind::Horizontal
                    && (dp != 2 || spec.phase_class(edge.a) != spec.phase_class(edge.b))
                {
                    out.push(Diagnostic::Malformed {
                        edge: *edge,
                        reason: "horizontal link outside a line of satellites",
                    });
                }
                *inter_degree.entry(edge.a).or_default() += 1;
                *inter_degree.entry(edge.b).or_default() += 1;
            }
        }
    }
    for sat in spec.sat_ids() {
        let d = inter_degree.get(&sat).copied().unwrap_or(0);
        if d > 2 {
            out.push(Diagnostic::InterPlaneDegree { sat, degree: d });
        }
        let d = intra_degree.get(&sat).copied().unwrap_or(0);
        if d != 2 {
            out.push(Diagnostic::IntraPlaneDegree { sat, degree: d });
        }
    }
    out
}

fn instant_diagnostics(
    spec: &ConstellationSpec,
    vis: &VisibilityModel,
    edges: &TopologyEdgeSet,
    t: f64,
    out: &mut Vec<Diagnostic>,
) {
    let pos = spec.positions(t);
    let lat = spec.latitudes(t);
    for edge in &edges.edges {
        if !spec.contains(edge.a) || !spec.contains(edge.b) {
            continue;
        }
        let (ia, ib) = (spec.sat_index(edge.a), spec.sat_index(edge.b));
        if edge.is_inter_plane() {
            for (sat, idx) in [(edge.a, ia), (edge.b, ib)] {
                if lat[idx].abs() > vis.polar_border_deg + LATITUDE_TOL_DEG {
                    out.push(Diagnostic::PolarEndpoint {
                        edge: *edge,
                        sat,
                        latitude_deg: lat[idx],
                    });
                }
            }
        }
        if let Ok(angle) = geocentric_angle(pos[ia], pos[ib]) {
            if angle > vis.theta_max_deg + 1e-9 {
                out.push(Diagnostic::OutOfRange {
                    edge: *edge,
                    angle_deg: angle,
                });
            }
        }
        if edge.kind == IslKind::Horizontal {
            let low = lat[ia].abs().min(lat[ib].abs());
            if low < vis.horizontal_survival_deg - LATITUDE_TOL_DEG {
                out.push(Diagnostic::HorizontalTooLow {
                    edge: *edge,
                    latitude_deg: low,
                });
            }
        }
    }
}

/// Check an edge set at one instant. An empty result means the set is valid.
pub fn validate_topology(
    spec: &ConstellationSpec,
    vis: &VisibilityModel,
    edges: &TopologyEdgeSet,
    t: f64,
) -> Vec<Diagnostic> {
    let mut out = structural_diagnostics(spec, edges);
    instant_diagnostics(spec, vis, edges, t, &mut out);
    out
}

/// Check an edge set at `start, start + step, …` up to (excluding) `end`.
pub fn validate_over_interval(
    spec: &ConstellationSpec,
    vis: &VisibilityModel,
    edges: &TopologyEdgeSet,
    start: f64,
    end: f64,
    step: f64,
) -> Vec<(f64, Diagnostic)> {
    assert!(step > 0.0, "sample step must be positive");
    let mut out: Vec<(f64, Diagnostic)> = structural_diagnostics(spec, edges)
        .into_iter()
        .map(|d| (start, d))
        .collect();
    let mut buf = Vec::new();
    let mut k = 0u64;
    loop {
        let t = start + k as f64 * step;
        if t >= end {
            break;
        }
        instant_diagnostics(spec, vis, edges, t, &mut buf);
        out.extend(buf.drain(..).map(|d| (t, d)));
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_ls_state;

    #[test]
    fn ring_counts() {
        assert_eq!(intra_plane_edges(&ConstellationSpec::iridium()).len(), 66);
        assert_eq!(intra_plane_edges(&ConstellationSpec::teledesic()).len(), 288);
        let toy = ConstellationSpec::new("toy", 2, 3, 90.0, 780.0).unwrap();
        let ring = intra_plane_edges(&toy);
        assert_eq!(ring.len(), 6);
        for s in toy.sat_ids() {
            assert_eq!(ring.edges.iter().filter(|e| e.other(s).is_some()).count(), 2);
        }
    }

    #[test]
    fn fixed_all_up_without_polar_caps() {
        let toy = ConstellationSpec::new("toy", 2, 3, 80.0, 780.0).unwrap();
        let vis = VisibilityModel::new(&toy, 85.0).unwrap();
        let set = fixed_topology(&toy, &vis, 17.0);
        assert_eq!(set.inter_plane_count(), 3);
    }

    #[test]
    fn fixed_pairs_join_lines_two_by_two() {
        for spec in [ConstellationSpec::iridium(), ConstellationSpec::teledesic()] {
            let pairs = fixed_oblique_pairs(&spec);
            assert_eq!(pairs.len(), ((spec.plane_count - 1) * spec.sats_per_plane) as usize);
            let mut partners: BTreeMap<SatId, Vec<SatId>> = BTreeMap::new();
            for &(a, b) in &pairs {
                assert_eq!(b.plane, a.plane + 1);
                let (ca, cb) = (spec.phase_class(a), spec.phase_class(b));
                // lines 2k and 2k+1 pair up, whichever plane is first
                assert_eq!(ca.min(cb) % 2, 0, "{a} {b}");
                assert_eq!(ca.max(cb), ca.min(cb) + 1, "{a} {b}");
                partners.entry(a).or_default().push(b);
                partners.entry(b).or_default().push(a);
            }
            for (sat, ps) in &partners {
                let inner = sat.plane != 1 && sat.plane != spec.plane_count;
                assert_eq!(ps.len(), if inner { 2 } else { 1 }, "{sat}");
                // both neighbours share one line
                assert!(ps.iter().all(|p| spec.phase_class(*p) == spec.phase_class(ps[0])));
            }
        }
    }

    #[test]
    fn fixed_drops_links_of_polar_satellite() {
        // N = 2: every line of satellites is a single satellite, so only the
        // satellite at the north apex and its antipode are in a polar area.
        let toy = ConstellationSpec::new("toy", 2, 4, 90.0, 780.0).unwrap();
        let vis = VisibilityModel::new(&toy, 80.0).unwrap();
        let t = 90.0 / toy.mean_motion_deg_s();
        let lat = toy.latitudes(t);
        let polar: Vec<_> = toy
            .sat_ids()
            .filter(|s| lat[toy.sat_index(*s)].abs() >= 80.0)
            .collect();
        assert_eq!(polar, vec![SatId::new(1, 1), SatId::new(1, 3)]);
        let set = fixed_topology(&toy, &vis, t);
        let all = fixed_oblique_pairs(&toy);
        let missing: Vec<_> = all
            .iter()
            .filter(|(a, b)| !set.edges.contains(&IslEdge::new(*a, *b, IslKind::Oblique)))
            .collect();
        assert_eq!(
            missing,
            vec![&(SatId::new(1, 1), SatId::new(2, 1)), &(SatId::new(1, 3), SatId::new(2, 3))]
        );

        // Iridium: the polar row's links, and only those, are down.
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 85.0).unwrap();
        let t = (90.0 - 2.0 * spec.phase_offset_deg()) / spec.mean_motion_deg_s();
        let lat = spec.latitudes(t);
        let polar: BTreeSet<_> = spec
            .sat_ids()
            .filter(|s| lat[spec.sat_index(*s)].abs() >= 85.0)
            .collect();
        assert!(polar.contains(&SatId::new(3, 1)));
        let set = fixed_topology(&spec, &vis, t);
        for (a, b) in fixed_oblique_pairs(&spec) {
            let up = set.edges.contains(&IslEdge::new(a, b, IslKind::Oblique));
            assert_eq!(up, !polar.contains(&a) && !polar.contains(&b));
        }
    }

    #[test]
    fn seam_and_low_horizontal_flagged() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        let mut set = intra_plane_edges(&spec);
        set.edges.insert(IslEdge::new(SatId::new(1, 1), SatId::new(6, 1), IslKind::Oblique));
        let diags = validate_topology(&spec, &vis, &set, 0.0);
        assert!(diags.iter().any(|d| matches!(d, Diagnostic::SeamCrossing { .. })));

        // S(1,1) and S(3,11) share phase class 0 and sit on the equator at t = 0.
        let mut set = intra_plane_edges(&spec);
        let (a, b) = (SatId::new(1, 1), SatId::new(3, 11));
        assert_eq!(spec.phase_class(a), spec.phase_class(b));
        set.edges.insert(IslEdge::new(a, b, IslKind::Horizontal));
        let diags = validate_topology(&spec, &vis, &set, 0.0);
        assert!(diags.iter().any(|d| matches!(d, Diagnostic::HorizontalTooLow { .. })), "{diags:?}");
    }

    #[test]
    fn degree_violation_flagged() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        let mut set = intra_plane_edges(&spec);
        let hub = SatId::new(3, 1);
        for other in [SatId::new(2, 1), SatId::new(4, 1), SatId::new(2, 2)] {
            set.edges.insert(IslEdge::new(hub, other, IslKind::Oblique));
        }
        let diags = validate_topology(&spec, &vis, &set, 0.0);
        assert!(diags
            .iter()
            .any(|d| matches!(d, Diagnostic::InterPlaneDegree { sat, degree: 3 } if *sat == hub)));
    }

    #[test]
    fn reassignment_requires_event_instant() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        let ls = build_ls_state(&spec, &vis, 1.0).unwrap();
        assert!(matches!(
            reassign_topology(&spec, &vis, &ls, Trigger::Enter),
            Err(Error::InvalidLsState(_))
        ));
    }

    #[test]
    fn tampered_ls_state_rejected() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        let border = spec.polar_border_arg_deg(60.0).unwrap();
        let t = border / spec.mean_motion_deg_s();
        let mut ls = build_ls_state(&spec, &vis, t).unwrap();
        assert!(reassign_topology(&spec, &vis, &ls, Trigger::Enter).is_ok());
        ls.rows[3].members.pop();
        assert!(matches!(
            reassign_topology(&spec, &vis, &ls, Trigger::Enter),
            Err(Error::InvalidLsState(_))
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }
}
