//! Scenario files.
//!
//! A scenario is a flat key-value file with `[section]` headers (TOML
//! syntax). Unknown keys are rejected; every problem is reported with the
//! line it occurred on or the field it concerns.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConstellationSpec, GroundStation, DEFAULT_GRAZING_ALTITUDE_KM, EARTH_RADIUS_KM};
use crate::links::{Method, Trigger};

pub const IRIDIUM_SCENARIO: &str = include_str!("../scenarios/iridium.scenario");
pub const TELEDESIC_SCENARIO: &str = include_str!("../scenarios/teledesic.scenario");

/// How the equal-time partition picks its interval length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualTimeDelta {
    Seconds(f64),
    /// Use the reassignment snapshot length T/(2M).
    MatchReassignment,
}

impl EqualTimeDelta {
    pub fn resolve(self, spec: &ConstellationSpec) -> f64 {
        match self {
            EqualTimeDelta::Seconds(s) => s,
            EqualTimeDelta::MatchReassignment => spec.period() / (2.0 * f64::from(spec.sats_per_plane)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundExperiment {
    pub source: GroundStation,
    pub destination: GroundStation,
    pub duration_s: f64,
    pub interval_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub constellation: ConstellationSpec,
    pub polar_borders_deg: Vec<f64>,
    pub methods: Vec<Method>,
    pub trigger: Trigger,
    pub equal_time_delta: EqualTimeDelta,
    /// Sampling step for the topology validator during `compare`.
    pub validation_step_s: f64,
    pub ground: GroundExperiment,
    pub output_dir: PathBuf,
    /// Reserved; nothing in the pipeline is random.
    pub random_seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    constellation: RawConstellation,
    #[serde(default)]
    partition: RawPartition,
    #[serde(default)]
    ground: RawGround,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstellation {
    name: Option<String>,
    planes: u32,
    sats_per_plane: u32,
    inclination_deg: f64,
    altitude_km: f64,
    period_min: Option<f64>,
    period_s: Option<f64>,
    inter_plane_spacing_deg: Option<f64>,
    earth_radius_km: Option<f64>,
    grazing_altitude_km: Option<f64>,
    #[serde(default)]
    ideal_polar: bool,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawPartition {
    polar_border_deg: Option<Vec<f64>>,
    methods: Option<Vec<String>>,
    trigger: Option<String>,
    equal_time_delta: Option<RawDelta>,
    validation_step_s: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDelta {
    Seconds(f64),
    Policy(String),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGround {
    source: Option<RawStation>,
    destination: Option<RawStation>,
    duration_s: Option<f64>,
    interval_s: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStation {
    name: String,
    latitude_deg: f64,
    longitude_deg: f64,
    #[serde(default = "default_min_elevation")]
    min_elevation_deg: f64,
}

fn default_min_elevation() -> f64 {
    10.0
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    random_seed: Option<u64>,
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::ScenarioInvalid {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Read and validate a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::ScenarioIo {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

/// Parse scenario text; `origin` is only used in error messages.
pub fn parse_scenario(text: &str, origin: &Path) -> Result<ScenarioConfig> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        let (line, column) = line_column(text, offset);
        Error::ScenarioSyntax {
            path: origin.to_path_buf(),
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    raw.into_config()
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl RawScenario {
    fn into_config(self) -> Result<ScenarioConfig> {
        let c = self.constellation;
        let period_s = match (c.period_min, c.period_s) {
            (Some(_), Some(_)) => {
                return Err(invalid("constellation.period_s", "give either period_min or period_s, not both"))
            }
            (Some(m), None) => Some(m * 60.0),
            (None, s) => s,
        };
        if let Some(t) = period_s {
            if !(t > 0.0) {
                return Err(invalid("constellation.period_s", "period must be positive"));
            }
        }
        if c.planes < 2 || c.planes % 2 == 1 {
            return Err(invalid("constellation.planes", format!("{} is not an even count of at least 2", c.planes)));
        }
        if c.sats_per_plane < 3 {
            return Err(invalid("constellation.sats_per_plane", "at least 3 satellites per plane are required"));
        }
        if !(c.inclination_deg > 0.0 && c.inclination_deg < 180.0) {
            return Err(invalid("constellation.inclination_deg", "must lie in (0, 180)"));
        }
        if !(c.altitude_km > 0.0) {
            return Err(invalid("constellation.altitude_km", "must be positive"));
        }
        let spacing = c.inter_plane_spacing_deg.unwrap_or(180.0 / f64::from(c.planes));
        if !(spacing > 0.0) || spacing * f64::from(c.planes - 1) > 180.0 + 1e-9 {
            return Err(invalid(
                "constellation.inter_plane_spacing_deg",
                "must be positive and keep all planes within 180°",
            ));
        }
        let earth_radius_km = c.earth_radius_km.unwrap_or(EARTH_RADIUS_KM);
        if !(earth_radius_km > 0.0) {
            return Err(invalid("constellation.earth_radius_km", "must be positive"));
        }
        let grazing_altitude_km = c.grazing_altitude_km.unwrap_or(DEFAULT_GRAZING_ALTITUDE_KM);
        if !(grazing_altitude_km >= 0.0 && grazing_altitude_km < c.altitude_km) {
            return Err(invalid("constellation.grazing_altitude_km", "must lie in [0, altitude_km)"));
        }
        let constellation = ConstellationSpec {
            name: c.name.unwrap_or_else(|| "custom".into()),
            plane_count: c.planes,
            sats_per_plane: c.sats_per_plane,
            inclination_deg: c.inclination_deg,
            altitude_km: c.altitude_km,
            period_s,
            inter_plane_spacing_deg: spacing,
            earth_radius_km,
            grazing_altitude_km,
            ideal_polar: c.ideal_polar,
        };
        constellation
            .validate()
            .map_err(|e| invalid("constellation", e.to_string()))?;

        let p = self.partition;
        let polar_borders_deg = p.polar_border_deg.unwrap_or_else(|| vec![60.0, 65.0, 70.0, 75.0]);
        if polar_borders_deg.is_empty() {
            return Err(invalid("partition.polar_border_deg", "at least one polar border is required"));
        }
        if let Some(bad) = polar_borders_deg.iter().find(|l| !(**l > 0.0 && **l < 90.0)) {
            return Err(invalid("partition.polar_border_deg", format!("{bad} is outside (0, 90)")));
        }
        let mut methods = Vec::new();
        for name in p.methods.unwrap_or_else(|| Method::ALL.iter().map(|m| m.as_str().to_string()).collect()) {
            let m: Method = name
                .parse()
                .map_err(|_| invalid("partition.methods", format!("unknown method `{name}`")))?;
            if !methods.contains(&m) {
                methods.push(m);
            }
        }
        if methods.is_empty() {
            return Err(invalid("partition.methods", "at least one method is required"));
        }
        methods.sort();
        let trigger = match p.trigger {
            None => Trigger::Enter,
            Some(s) => s
                .parse()
                .map_err(|_| invalid("partition.trigger", format!("expected `enter` or `exit`, got `{s}`")))?,
        };
        let equal_time_delta = match p.equal_time_delta {
            None => EqualTimeDelta::MatchReassignment,
            Some(RawDelta::Policy(s)) if s == "match_reassignment" => EqualTimeDelta::MatchReassignment,
            Some(RawDelta::Policy(s)) => {
                return Err(invalid(
                    "partition.equal_time_delta",
                    format!("expected seconds or \"match_reassignment\", got `{s}`"),
                ))
            }
            Some(RawDelta::Seconds(s)) if s > 0.0 && s.is_finite() => EqualTimeDelta::Seconds(s),
            Some(RawDelta::Seconds(s)) => {
                return Err(invalid("partition.equal_time_delta", format!("{s} is not a positive duration")))
            }
        };
        let validation_step_s = p.validation_step_s.unwrap_or(1.0);
        if !(validation_step_s > 0.0) {
            return Err(invalid("partition.validation_step_s", "must be positive"));
        }

        let g = self.ground;
        let station = |raw: Option<RawStation>, field: &str, default: GroundStation| match raw {
            None => Ok(default),
            Some(s) => GroundStation::new(s.name, s.latitude_deg, s.longitude_deg, s.min_elevation_deg)
                .map_err(|e| invalid(field, e.to_string())),
        };
        let source = station(g.source, "ground.source", GroundStation::beijing())?;
        let destination = station(g.destination, "ground.destination", GroundStation::london())?;
        let duration_s = g.duration_s.unwrap_or(86_400.0);
        if !(duration_s > 0.0) {
            return Err(invalid("ground.duration_s", "must be positive"));
        }
        let interval_s = g.interval_s.unwrap_or(60.0);
        if !(interval_s > 0.0) {
            return Err(invalid("ground.interval_s", "must be positive"));
        }

        Ok(ScenarioConfig {
            constellation,
            polar_borders_deg,
            methods,
            trigger,
            equal_time_delta,
            validation_step_s,
            ground: GroundExperiment {
                source,
                destination,
                duration_s,
                interval_s,
            },
            output_dir: self.output.dir.unwrap_or_else(|| PathBuf::from("out")),
            random_seed: self.output.random_seed.unwrap_or(0),
        })
    }
}

/// Bundled scenario by preset name.
pub fn bundled_scenario(name: &str) -> Option<ScenarioConfig> {
    let (text, file) = match name {
        "iridium" => (IRIDIUM_SCENARIO, "iridium.scenario"),
        "teledesic" => (TELEDESIC_SCENARIO, "teledesic.scenario"),
        _ => return None,
    };
    Some(parse_scenario(text, Path::new(file)).expect("bundled scenarios are valid"))
}
