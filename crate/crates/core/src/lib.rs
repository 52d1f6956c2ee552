//! Snapshot partitioning for polar-orbit LEO satellite networks.
//!
//! The crate models an idealised circular polar constellation, builds
//! inter-satellite link topologies (fixed on-off baseline and link
//! reassignment at polar-border events), cuts one orbit period into
//! snapshots with three partition methods, and evaluates them on snapshot
//! distribution, inter-plane link utilization and ground-to-ground delay.

pub mod error;
pub mod geometry;
pub mod links;
pub mod partition;
pub mod report;
pub mod routing;
pub mod scenario;

pub use error::{Error, Result};
pub use geometry::{
    build_ls_state, elevation_angle, geocentric_angle, grazing_theta_max_deg,
    horizontal_survival_latitude, orbit_period,
    propagation_delay, satellite_state, ConstellationSpec, GroundStation, LsRow, LsState, SatId,
    SatState, Side, Vec3, VisibilityModel,
};
pub use links::{
    fixed_topology, intra_plane_edges, reassign_topology, validate_topology, Diagnostic, IslEdge,
    IslKind, Method, TopologyEdgeSet, Trigger,
};
pub use partition::{
    analytic_summary, enumerate_events, partition_equal_time, partition_fixed,
    partition_reassignment, AnalyticSummary, PolarEvent, SnapshotSequence, TopologySnapshot,
};
pub use report::{
    build_sequence, export_topologies, parse_topology_json, run_compare, run_scenario, topology_json,
    write_artifacts, Comparison, ComparisonReport, RunOptions, SummaryRow,
};
pub use routing::{
    attach_ground, delay_experiment, shortest_delay, utilization, DelaySample, DelaySeries, Route,
    UtilizationReport,
};
pub use scenario::{bundled_scenario, load_scenario, parse_scenario, EqualTimeDelta, ScenarioConfig};
