//! The comparison pipeline and its artifacts: tabular summary,
//! comparison JSON, snapshot and delay CSVs, JSON topology exports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConstellationSpec, SatId, VisibilityModel};
use crate::links::{validate_over_interval, Diagnostic, IslEdge, IslKind, Method, TopologyEdgeSet, Trigger};
use crate::partition::{
    analytic_summary, partition_equal_time, partition_fixed, partition_reassignment, AnalyticSummary,
    SnapshotSequence, TopologySnapshot,
};
use crate::routing::{delay_experiment, utilization, DelaySeries};
use crate::scenario::{EqualTimeDelta, ScenarioConfig};

/// Relative tolerance between simulated and closed-form snapshot length.
pub const ANALYTIC_DELTA_REL_TOL: f64 = 5e-3;

/// Build one method's sequence over one period.
pub fn build_sequence(
    spec: &ConstellationSpec,
    polar_border_deg: f64,
    method: Method,
    trigger: Trigger,
    delta: EqualTimeDelta,
) -> Result<SnapshotSequence> {
    let vis = VisibilityModel::new(spec, polar_border_deg)?;
    match method {
        Method::Reassignment => partition_reassignment(spec, &vis, trigger),
        Method::Fixed => Ok(partition_fixed(spec, &vis)),
        Method::EqualTime => partition_equal_time(spec, &vis, delta.resolve(spec)),
    }
}

/// What a pipeline run should compute besides the partitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub delays: bool,
    /// Validator sampling step; `None` skips topology validation.
    pub validation_step_s: Option<f64>,
}

/// Everything computed for one (method, L_pa).
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: Method,
    pub polar_border_deg: f64,
    pub sequence: SnapshotSequence,
    pub utilization: f64,
    pub delay: Option<DelaySeries>,
    pub violations: Vec<(usize, f64, Diagnostic)>,
    pub tiling_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticColumns {
    pub s: usize,
    pub delta_s: f64,
    pub nisl: usize,
    /// S and NISL equal, δ within [`ANALYTIC_DELTA_REL_TOL`].
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: Method,
    pub polar_border_deg: f64,
    pub s: usize,
    pub delta_min_s: f64,
    pub delta_max_s: f64,
    pub nisl_min: usize,
    pub nisl_max: usize,
    pub utilization: f64,
    pub average_delay_s: Option<f64>,
    pub unreachable_fraction: Option<f64>,
    pub analytic: Option<AnalyticColumns>,
    pub violations: usize,
    pub tiling_ok: bool,
}

/// Reassignment delay against one baseline at one polar border.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayComparison {
    pub polar_border_deg: f64,
    pub baseline: Method,
    pub reassignment_delay_s: f64,
    pub baseline_delay_s: f64,
    pub reassignment_lower: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub constellation: ConstellationSpec,
    pub trigger: Trigger,
    pub rows: Vec<SummaryRow>,
    pub delay_comparisons: Vec<DelayComparison>,
    /// No validator violation, every sequence tiles the period, and every
    /// reassignment row agrees with its closed form.
    pub validation_passed: bool,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub report: ComparisonReport,
    pub runs: Vec<MethodRun>,
}

fn run_one(cfg: &ScenarioConfig, l_pa: f64, method: Method, opts: RunOptions) -> Result<MethodRun> {
    let spec = &cfg.constellation;
    let ctx = || format!("{}, L_pa={l_pa}°, {method}", spec.name);
    let sequence = build_sequence(spec, l_pa, method, cfg.trigger, cfg.equal_time_delta).map_err(|e| e.context(ctx()))?;
    let tiling_error = sequence.check_tiling().err();
    let mut violations = Vec::new();
    if let Some(step) = opts.validation_step_s {
        let vis = VisibilityModel::new(spec, l_pa)?;
        for (i, s) in sequence.snapshots.iter().enumerate() {
            violations.extend(
                validate_over_interval(spec, &vis, &s.edges, s.start, s.end, step)
                    .into_iter()
                    .map(|(t, d)| (i, t, d)),
            );
        }
    }
    let utilization = utilization(&sequence, spec).map_err(|e| e.context(ctx()))?.utilization;
    let delay = if opts.delays {
        let g = &cfg.ground;
        Some(
            delay_experiment(spec, &sequence, &g.source, &g.destination, g.duration_s, g.interval_s)
                .map_err(|e| e.context(ctx()))?,
        )
    } else {
        None
    };
    Ok(MethodRun {
        method,
        polar_border_deg: l_pa,
        sequence,
        utilization,
        delay,
        violations,
        tiling_error,
    })
}

/// Run every requested (L_pa, method) pair. Runs fan out over a thread
/// pool; results are assembled in scenario order.
pub fn run_scenario(cfg: &ScenarioConfig, opts: RunOptions) -> Result<Comparison> {
    let jobs: Vec<(f64, Method)> = cfg
        .polar_borders_deg
        .iter()
        .flat_map(|&l| cfg.methods.iter().map(move |&m| (l, m)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(l, m)| run_one(cfg, l, m, opts))
        .collect::<Result<Vec<_>>>()?;
    let analytic = cfg
        .polar_borders_deg
        .iter()
        .map(|&l| analytic_summary(&cfg.constellation, l))
        .collect::<Result<Vec<_>>>()?;
    let report = assemble(cfg, &runs, &analytic);
    Ok(Comparison { report, runs })
}

/// Full pipeline: partitions, validation, utilization and delays.
pub fn run_compare(cfg: &ScenarioConfig) -> Result<Comparison> {
    run_scenario(
        cfg,
        RunOptions {
            delays: true,
            validation_step_s: Some(cfg.validation_step_s),
        },
    )
}

fn assemble(cfg: &ScenarioConfig, runs: &[MethodRun], analytic: &[AnalyticSummary]) -> ComparisonReport {
    let rows: Vec<SummaryRow> = runs
        .iter()
        .map(|run| {
            let seq = &run.sequence;
            let nisl = seq.nisl_values();
            let analytic = (run.method == Method::Reassignment).then(|| {
                let a = analytic
                    .iter()
                    .find(|a| a.polar_border_deg == run.polar_border_deg)
                    .expect("one closed form per polar border");
                let agrees = seq.len() == a.s_reassign
                    && nisl.len() == 1
                    && nisl.contains(&a.nisl_reassign)
                    && seq
                        .durations()
                        .all(|d| ((d - a.delta_reassign_s) / a.delta_reassign_s).abs() <= ANALYTIC_DELTA_REL_TOL);
                AnalyticColumns {
                    s: a.s_reassign,
                    delta_s: a.delta_reassign_s,
                    nisl: a.nisl_reassign,
                    agrees,
                }
            });
            SummaryRow {
                method: run.method,
                polar_border_deg: run.polar_border_deg,
                s: seq.len(),
                delta_min_s: seq.min_duration(),
                delta_max_s: seq.max_duration(),
                nisl_min: nisl.first().copied().unwrap_or(0),
                nisl_max: nisl.last().copied().unwrap_or(0),
                utilization: run.utilization,
                average_delay_s: run.delay.as_ref().and_then(|d| d.average_delay_s),
                unreachable_fraction: run.delay.as_ref().map(|d| d.unreachable_fraction),
                analytic,
                violations: run.violations.len(),
                tiling_ok: run.tiling_error.is_none(),
            }
        })
        .collect();

    let mut delay_comparisons = Vec::new();
    for &l in &cfg.polar_borders_deg {
        let avg = |m: Method| {
            rows.iter()
                .find(|r| r.method == m && r.polar_border_deg == l)
                .and_then(|r| r.average_delay_s)
        };
        let Some(reassign) = avg(Method::Reassignment) else { continue };
        for baseline in [Method::Fixed, Method::EqualTime] {
            if let Some(other) = avg(baseline) {
                delay_comparisons.push(DelayComparison {
                    polar_border_deg: l,
                    baseline,
                    reassignment_delay_s: reassign,
                    baseline_delay_s: other,
                    reassignment_lower: reassign <= other,
                });
            }
        }
    }

    let validation_passed = rows
        .iter()
        .all(|r| r.violations == 0 && r.tiling_ok && r.analytic.as_ref().is_none_or(|a| a.agrees));
    ComparisonReport {
        constellation: cfg.constellation.clone(),
        trigger: cfg.trigger,
        rows,
        delay_comparisons,
        validation_passed,
    }
}

fn dash() -> String {
    "-".to_string()
}

impl ComparisonReport {
    /// Plain-text table, one row per (L_pa, method), seconds to two decimals.
    pub fn summary_text(&self) -> String {
        let c = &self.constellation;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Snapshot distribution: {} (N={}, M={}, i={}°, h={} km, T={:.2} s), reassignment trigger: {}",
            c.name,
            c.plane_count,
            c.sats_per_plane,
            c.effective_inclination_deg(),
            c.altitude_km,
            c.period(),
            self.trigger.as_str()
        );
        let _ = writeln!(out);
        let header = [
            "L_pa", "method", "S", "S_calc", "max_dur_s", "min_dur_s", "dur_calc_s", "NISL_max", "NISL_min",
            "NISL_calc", "U", "avg_delay_ms",
        ];
        let mut lines: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
        for r in &self.rows {
            let a = r.analytic.as_ref();
            lines.push(vec![
                format!("{}", r.polar_border_deg),
                r.method.as_str().to_string(),
                r.s.to_string(),
                a.map_or_else(dash, |a| a.s.to_string()),
                format!("{:.2}", r.delta_max_s),
                format!("{:.2}", r.delta_min_s),
                a.map_or_else(dash, |a| format!("{:.2}", a.delta_s)),
                r.nisl_max.to_string(),
                r.nisl_min.to_string(),
                a.map_or_else(dash, |a| a.nisl.to_string()),
                format!("{:.4}", r.utilization),
                r.average_delay_s.map_or_else(dash, |d| format!("{:.2}", d * 1e3)),
            ]);
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|k| lines.iter().map(|l| l[k].len()).max().unwrap_or(0))
            .collect();
        for l in &lines {
            let cells: Vec<String> = l.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        if !self.delay_comparisons.is_empty() {
            let _ = writeln!(out);
            for d in &self.delay_comparisons {
                let _ = writeln!(
                    out,
                    "L_pa={}: reassignment {:.3} ms vs {} {:.3} ms -> {}",
                    d.polar_border_deg,
                    d.reassignment_delay_s * 1e3,
                    d.baseline.as_str(),
                    d.baseline_delay_s * 1e3,
                    if d.reassignment_lower { "reassignment not worse" } else { "baseline lower" }
                );
            }
        }
        let _ = writeln!(out);
        let failing: Vec<String> = self
            .rows
            .iter()
            .filter(|r| r.violations > 0 || !r.tiling_ok || r.analytic.as_ref().is_some_and(|a| !a.agrees))
            .map(|r| {
                format!(
                    "{} at {}°: {} violations, tiling {}, closed form {}",
                    r.method,
                    r.polar_border_deg,
                    r.violations,
                    if r.tiling_ok { "ok" } else { "FAILED" },
                    match &r.analytic {
                        Some(a) if !a.agrees => "DISAGREES",
                        _ => "ok",
                    }
                )
            })
            .collect();
        if failing.is_empty() {
            let _ = writeln!(out, "validation: ok");
        } else {
            let _ = writeln!(out, "validation: FAILED");
            for f in failing {
                let _ = writeln!(out, "  {f}");
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Serialize)]
struct SnapshotCsvRow {
    method: &'static str,
    index: usize,
    start_s: f64,
    end_s: f64,
    duration_s: f64,
    n_intra: usize,
    n_oblique: usize,
    n_horizontal: usize,
    n_inter_total: usize,
}

/// Snapshot CSV for any number of sequences (one row per snapshot).
pub fn snapshot_csv<'a>(sequences: impl IntoIterator<Item = &'a SnapshotSequence>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for seq in sequences {
        for (index, s) in seq.snapshots.iter().enumerate() {
            w.serialize(SnapshotCsvRow {
                method: seq.method.as_str(),
                index,
                start_s: s.start,
                end_s: s.end,
                duration_s: s.duration(),
                n_intra: s.count(IslKind::IntraPlane),
                n_oblique: s.count(IslKind::Oblique),
                n_horizontal: s.count(IslKind::Horizontal),
                n_inter_total: s.inter_plane_count,
            })?;
        }
    }
    finish_csv(w)
}

#[derive(Serialize)]
struct DelayCsvRow {
    send_time_s: f64,
    method: &'static str,
    #[serde(rename = "L_pa_deg")]
    l_pa_deg: f64,
    delay_s: Option<f64>,
    hops: usize,
    reachable: bool,
}

/// Delay CSV; unreachable samples leave `delay_s` empty.
pub fn delay_csv<'a>(series: impl IntoIterator<Item = &'a DelaySeries>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for d in series {
        for s in &d.samples {
            w.serialize(DelayCsvRow {
                send_time_s: s.send_time,
                method: d.method.as_str(),
                l_pa_deg: d.polar_border_deg,
                delay_s: s.delay_s,
                hops: s.hops,
                reachable: s.reachable,
            })?;
        }
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub const TOPOLOGY_FORMAT: &str = "leo-snapshot-topology";
pub const TOPOLOGY_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyDocument {
    format: String,
    version: u32,
    constellation: ConstellationSpec,
    method: Method,
    polar_border_deg: f64,
    trigger: Option<Trigger>,
    period_s: f64,
    truncated_last: bool,
    snapshots: Vec<SnapshotEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotEntry {
    index: usize,
    start_s: f64,
    end_s: f64,
    generated_at_s: f64,
    inter_plane_count: usize,
    edges: Vec<EdgeEntry>,
}

/// Endpoints are `[plane, index]`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeEntry {
    a: [u32; 2],
    b: [u32; 2],
    kind: IslKind,
}

/// JSON document for one sequence.
pub fn topology_json(spec: &ConstellationSpec, seq: &SnapshotSequence) -> Result<String> {
    if seq.is_empty() {
        return Err(Error::domain("refusing to export an empty snapshot sequence"));
    }
    let doc = TopologyDocument {
        format: TOPOLOGY_FORMAT.into(),
        version: TOPOLOGY_VERSION,
        constellation: spec.clone(),
        method: seq.method,
        polar_border_deg: seq.polar_border_deg,
        trigger: seq.trigger,
        period_s: seq.period_s,
        truncated_last: seq.truncated_last,
        snapshots: seq
            .snapshots
            .iter()
            .enumerate()
            .map(|(index, s)| SnapshotEntry {
                index,
                start_s: s.start,
                end_s: s.end,
                generated_at_s: s.edges.generated_at,
                inter_plane_count: s.inter_plane_count,
                edges: s
                    .edges
                    .edges
                    .iter()
                    .map(|e| EdgeEntry {
                        a: [e.a.plane, e.a.index],
                        b: [e.b.plane, e.b.index],
                        kind: e.kind,
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Parse a document written by [`topology_json`].
pub fn parse_topology_json(text: &str) -> Result<(ConstellationSpec, SnapshotSequence)> {
    let doc: TopologyDocument = serde_json::from_str(text)?;
    if doc.format != TOPOLOGY_FORMAT || doc.version != TOPOLOGY_VERSION {
        return Err(Error::domain(format!(
            "unsupported topology document {} v{}",
            doc.format, doc.version
        )));
    }
    let spec = doc.constellation;
    let mut snapshots = Vec::with_capacity(doc.snapshots.len());
    for entry in doc.snapshots {
        let mut edges = TopologyEdgeSet::new(entry.generated_at_s, Some(doc.method));
        for e in entry.edges {
            let (a, b) = (SatId::new(e.a[0], e.a[1]), SatId::new(e.b[0], e.b[1]));
            for s in [a, b] {
                if !spec.contains(s) {
                    return Err(Error::InvalidSat(s));
                }
            }
            edges.edges.insert(IslEdge::new(a, b, e.kind));
        }
        let snap = TopologySnapshot::new(entry.start_s, entry.end_s, edges);
        if snap.inter_plane_count != entry.inter_plane_count {
            return Err(Error::domain(format!(
                "snapshot {} lists {} inter-plane links but declares {}",
                entry.index, snap.inter_plane_count, entry.inter_plane_count
            )));
        }
        snapshots.push(snap);
    }
    let seq = SnapshotSequence {
        method: doc.method,
        polar_border_deg: doc.polar_border_deg,
        trigger: doc.trigger,
        period_s: doc.period_s,
        truncated_last: doc.truncated_last,
        snapshots,
    };
    Ok((spec, seq))
}

/// `60` → `"60"`, `62.5` → `"62.5"`.
fn lpa_tag(l: f64) -> String {
    format!("lpa{l}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Write one topology document per sequence into `dir`.
pub fn export_topologies(spec: &ConstellationSpec, sequences: &[&SnapshotSequence], dir: &Path) -> Result<Vec<PathBuf>> {
    if sequences.is_empty() {
        return Err(Error::domain("no partition method selected for export"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for seq in sequences {
        let json = topology_json(spec, seq)?;
        let path = dir.join(format!("topology_{}_{}.json", seq.method.as_str(), lpa_tag(seq.polar_border_deg)));
        write_file(&path, &json)?;
        written.push(path);
    }
    Ok(written)
}

/// Write every artifact of a run into `dir` and return the paths in
/// write order.
pub fn write_artifacts(cmp: &Comparison, borders: &[f64], dir: &Path) -> Result<Vec<PathBuf>> {
    let spec = &cmp.report.constellation;
    let sequences: Vec<&SnapshotSequence> = cmp.runs.iter().map(|r| &r.sequence).collect();
    let mut written = export_topologies(spec, &sequences, dir)?;
    for &l in borders {
        let path = dir.join(format!("snapshots_{}.csv", lpa_tag(l)));
        let csv = snapshot_csv(sequences.iter().copied().filter(|s| s.polar_border_deg == l))?;
        write_file(&path, &csv)?;
        written.push(path);
    }
    let series: Vec<&DelaySeries> = cmp.runs.iter().filter_map(|r| r.delay.as_ref()).collect();
    if !series.is_empty() {
        let path = dir.join("delays.csv");
        write_file(&path, &delay_csv(series)?)?;
        written.push(path);
    }
    let path = dir.join("summary.txt");
    write_file(&path, &cmp.report.summary_text())?;
    written.push(path);
    let path = dir.join("comparison.json");
    write_file(&path, &cmp.report.to_json()?)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::bundled_scenario;

    fn small_config(methods: &[Method]) -> ScenarioConfig {
        let mut cfg = bundled_scenario("iridium").unwrap();
        cfg.polar_borders_deg = vec![60.0];
        cfg.methods = methods.to_vec();
        cfg.ground.duration_s = 3600.0;
        cfg.validation_step_s = 30.0;
        cfg
    }

    #[test]
    fn reassignment_only_has_no_baseline_comparison() {
        let cmp = run_compare(&small_config(&[Method::Reassignment])).unwrap();
        assert_eq!(cmp.report.rows.len(), 1);
        assert!(cmp.report.delay_comparisons.is_empty());
        let row = &cmp.report.rows[0];
        assert_eq!((row.s, row.nisl_min, row.nisl_max), (22, 34, 34));
        assert!(row.analytic.as_ref().unwrap().agrees);
        assert!(cmp.report.validation_passed);
        let text = cmp.report.summary_text();
        assert!(!text.contains("fixed"));
        assert!(text.contains("validation: ok"));
    }

    #[test]
    fn match_reassignment_delta_equals_reassignment_delta() {
        let cmp = run_scenario(
            &small_config(&[Method::Reassignment, Method::EqualTime]),
            RunOptions {
                delays: false,
                validation_step_s: None,
            },
        )
        .unwrap();
        let [r, e] = [&cmp.runs[0].sequence, &cmp.runs[1].sequence];
        assert_eq!(r.len(), e.len());
        assert!((e.max_duration() - r.max_duration()).abs() < 1e-3);
        assert!(!e.truncated_last);
    }

    #[test]
    fn topology_json_round_trips() {
        let spec = ConstellationSpec::iridium();
        for method in Method::ALL {
            let seq = build_sequence(&spec, 70.0, method, Trigger::Enter, EqualTimeDelta::MatchReassignment).unwrap();
            let json = topology_json(&spec, &seq).unwrap();
            let (spec2, seq2) = parse_topology_json(&json).unwrap();
            assert_eq!(spec2, spec);
            assert_eq!(seq2, seq);
            assert_eq!(topology_json(&spec2, &seq2).unwrap(), json);
        }
    }

    #[test]
    fn empty_export_is_an_error_and_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("exports");
        assert!(export_topologies(&ConstellationSpec::iridium(), &[], &out).is_err());
        assert!(!out.exists());
    }

    #[test]
    fn snapshot_csv_has_documented_columns() {
        let spec = ConstellationSpec::iridium();
        let seq = build_sequence(&spec, 60.0, Method::Reassignment, Trigger::Enter, EqualTimeDelta::MatchReassignment).unwrap();
        let csv = snapshot_csv([&seq]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "method,index,start_s,end_s,duration_s,n_intra,n_oblique,n_horizontal,n_inter_total"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "reassignment");
        assert_eq!(&first[5..], ["66", "30", "4", "34"]);
        assert_eq!(csv.lines().count(), 23);
    }

    #[test]
    fn tampered_document_rejected() {
        let spec = ConstellationSpec::iridium();
        let seq = build_sequence(&spec, 60.0, Method::Fixed, Trigger::Enter, EqualTimeDelta::MatchReassignment).unwrap();
        let json = topology_json(&spec, &seq).unwrap();
        assert!(parse_topology_json(&json.replacen("\"a\":[", "\"a\":[9,", 1)).is_err());
        assert!(parse_topology_json(&json.replace(TOPOLOGY_FORMAT, "other")).is_err());
    }
}
