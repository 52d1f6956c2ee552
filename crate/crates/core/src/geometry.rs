//! Circular-orbit geometry for polar (Walker-star) constellations.
//!
//! Satellites move on circular orbits; plane `p` has its ascending node at
//! `(p-1)·ΔΩ` and satellite `S(p,j)` starts at argument of latitude
//! `(j-1)·ω + (p-1)·ω_f` with `ω = 360/M` and `ω_f = ω/2`. Every satellite
//! therefore belongs to one of `2M` phase classes `c`, with argument of
//! latitude `c·ω_f + 360·t/T`. A phase class is a line of satellites (LS):
//! its members share latitude and moving direction at all times.

use std::fmt;
use std::ops::Sub;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EARTH_RADIUS_KM: f64 = 6378.137;
pub const EARTH_MU_KM3_S2: f64 = 398600.4418;
pub const SPEED_OF_LIGHT_KM_S: f64 = 299_792.458;
/// Sidereal rotation rate.
pub const EARTH_ROTATION_RAD_S: f64 = 7.292115146706979e-5;
/// Lowest altitude a link ray may graze. Calibrated so the Iridium
/// horizontal-link survival latitude evaluates to 32.81°.
pub const DEFAULT_GRAZING_ALTITUDE_KM: f64 = 48.5;

/// Angular slack for rows sitting exactly on the polar border.
pub(crate) const BORDER_TOL_DEG: f64 = 1e-5;
/// Latitude slack used by the topology validator.
pub const LATITUDE_TOL_DEG: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;

    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

/// `S(plane, index)`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SatId {
    pub plane: u32,
    pub index: u32,
}

impl SatId {
    pub const fn new(plane: u32, index: u32) -> Self {
        SatId { plane, index }
    }
}

impl fmt::Display for SatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.plane, self.index)
    }
}

/// Static parameters of a polar constellation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstellationSpec {
    pub name: String,
    /// N
    pub plane_count: u32,
    /// M
    pub sats_per_plane: u32,
    pub inclination_deg: f64,
    pub altitude_km: f64,
    /// Orbit period; derived from the altitude when absent.
    pub period_s: Option<f64>,
    /// ΔΩ, the ascending-node spacing between adjacent planes.
    pub inter_plane_spacing_deg: f64,
    pub earth_radius_km: f64,
    pub grazing_altitude_km: f64,
    /// Force the inclination to 90° for all geometry.
    pub ideal_polar: bool,
}

impl ConstellationSpec {
    /// A constellation with planes spread uniformly over 180° and the
    /// period derived from the altitude.
    pub fn new(
        name: impl Into<String>,
        plane_count: u32,
        sats_per_plane: u32,
        inclination_deg: f64,
        altitude_km: f64,
    ) -> Result<Self> {
        let spec = ConstellationSpec {
            name: name.into(),
            plane_count,
            sats_per_plane,
            inclination_deg,
            altitude_km,
            period_s: None,
            inter_plane_spacing_deg: 180.0 / plane_count.max(1) as f64,
            earth_radius_km: EARTH_RADIUS_KM,
            grazing_altitude_km: DEFAULT_GRAZING_ALTITUDE_KM,
            ideal_polar: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn iridium() -> Self {
        ConstellationSpec {
            name: "iridium".into(),
            plane_count: 6,
            sats_per_plane: 11,
            inclination_deg: 86.4,
            altitude_km: 780.0,
            period_s: Some(100.45 * 60.0),
            inter_plane_spacing_deg: 31.6,
            earth_radius_km: EARTH_RADIUS_KM,
            grazing_altitude_km: DEFAULT_GRAZING_ALTITUDE_KM,
            ideal_polar: false,
        }
    }

    pub fn teledesic() -> Self {
        ConstellationSpec {
            name: "teledesic".into(),
            plane_count: 12,
            sats_per_plane: 24,
            inclination_deg: 84.7,
            altitude_km: 1375.0,
            period_s: Some(113.23 * 60.0),
            inter_plane_spacing_deg: 15.36,
            earth_radius_km: EARTH_RADIUS_KM,
            grazing_altitude_km: DEFAULT_GRAZING_ALTITUDE_KM,
            ideal_polar: false,
        }
    }

    pub fn with_ideal_polar(mut self, on: bool) -> Self {
        self.ideal_polar = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.plane_count < 2 {
            return Err(Error::domain("at least 2 planes are required"));
        }
        if self.sats_per_plane < 3 {
            return Err(Error::domain("at least 3 satellites per plane are required"));
        }
        self.require_even_planes()?;
        if !(self.inclination_deg > 0.0 && self.inclination_deg < 180.0) {
            return Err(Error::domain("inclination must lie in (0°, 180°)"));
        }
        if !(self.altitude_km > 0.0) || !(self.earth_radius_km > 0.0) {
            return Err(Error::domain("altitude and earth radius must be positive"));
        }
        if !(self.grazing_altitude_km >= 0.0 && self.grazing_altitude_km < self.altitude_km) {
            return Err(Error::domain("grazing altitude must lie in [0, altitude)"));
        }
        if let Some(t) = self.period_s {
            if !(t > 0.0) {
                return Err(Error::domain("orbit period must be positive"));
            }
        }
        let spread = self.inter_plane_spacing_deg * f64::from(self.plane_count - 1);
        if !(self.inter_plane_spacing_deg > 0.0) || spread > 180.0 + 1e-9 {
            return Err(Error::domain(
                "plane spacing must be positive and planes must fit within 180°",
            ));
        }
        Ok(())
    }

    pub(crate) fn require_even_planes(&self) -> Result<()> {
        if !self.plane_count.is_multiple_of(2) {
            return Err(Error::unsupported(format!(
                "{} planes: lines of satellites need an even plane count",
                self.plane_count
            )));
        }
        Ok(())
    }

    pub fn satellite_count(&self) -> usize {
        (self.plane_count * self.sats_per_plane) as usize
    }

    /// ω
    pub fn intra_plane_spacing_deg(&self) -> f64 {
        360.0 / f64::from(self.sats_per_plane)
    }

    /// ω_f = ω/2
    pub fn phase_offset_deg(&self) -> f64 {
        180.0 / f64::from(self.sats_per_plane)
    }

    pub fn effective_inclination_deg(&self) -> f64 {
        if self.ideal_polar {
            90.0
        } else {
            self.inclination_deg
        }
    }

    pub fn orbit_radius_km(&self) -> f64 {
        self.earth_radius_km + self.altitude_km
    }

    pub fn period(&self) -> f64 {
        orbit_period(self)
    }

    /// Degrees of argument of latitude travelled per second.
    pub fn mean_motion_deg_s(&self) -> f64 {
        360.0 / self.period()
    }

    /// Number of lines of satellites, 2M.
    pub fn ls_count(&self) -> usize {
        2 * self.sats_per_plane as usize
    }

    pub fn contains(&self, sat: SatId) -> bool {
        (1..=self.plane_count).contains(&sat.plane) && (1..=self.sats_per_plane).contains(&sat.index)
    }

    /// Dense index in `0..N*M`, plane-major.
    pub fn sat_index(&self, sat: SatId) -> usize {
        ((sat.plane - 1) * self.sats_per_plane + (sat.index - 1)) as usize
    }

    pub fn sat_at(&self, idx: usize) -> SatId {
        let m = self.sats_per_plane as usize;
        SatId::new((idx / m) as u32 + 1, (idx % m) as u32 + 1)
    }

    pub fn sat_ids(&self) -> impl Iterator<Item = SatId> + '_ {
        (1..=self.plane_count)
            .flat_map(move |p| (1..=self.sats_per_plane).map(move |j| SatId::new(p, j)))
    }

    /// Phase class of a satellite: its initial argument of latitude in units
    /// of ω_f, modulo 2M.
    pub fn phase_class(&self, sat: SatId) -> usize {
        let two_m = 2 * i64::from(self.sats_per_plane);
        (2 * (i64::from(sat.index) - 1) + (i64::from(sat.plane) - 1)).rem_euclid(two_m) as usize
    }

    /// Members of phase class `class`, ordered by plane.
    pub fn class_members(&self, class: usize) -> Vec<SatId> {
        let two_m = 2 * i64::from(self.sats_per_plane);
        (1..=self.plane_count)
            .filter(|p| (i64::from(*p) - 1) % 2 == class as i64 % 2)
            .map(|p| {
                let j = (class as i64 - (i64::from(p) - 1)).rem_euclid(two_m) / 2 + 1;
                SatId::new(p, j as u32)
            })
            .collect()
    }

    pub fn raan_deg(&self, plane: u32) -> f64 {
        f64::from(plane - 1) * self.inter_plane_spacing_deg
    }

    /// Argument of latitude of phase class `class` at time `t`, unwrapped.
    pub fn class_arg_of_latitude_deg(&self, class: usize, t: f64) -> f64 {
        class as f64 * self.phase_offset_deg() + self.mean_motion_deg_s() * t
    }

    /// Latitude reached at argument of latitude `u`.
    pub fn reference_latitude_deg(&self, u_deg: f64) -> f64 {
        let i = self.effective_inclination_deg().to_radians();
        (i.sin() * u_deg.to_radians().sin()).clamp(-1.0, 1.0).asin().to_degrees()
    }

    /// Argument of latitude in `[0°, 90°]` at which the reference latitude
    /// equals `latitude_deg`; `None` when the orbit never reaches it.
    pub fn polar_border_arg_deg(&self, latitude_deg: f64) -> Option<f64> {
        let i = self.effective_inclination_deg().to_radians();
        let s = latitude_deg.to_radians().sin() / i.sin();
        if s >= 1.0 {
            None
        } else {
            Some(s.asin().to_degrees())
        }
    }

    /// Position of `sat` at `t` (Earth-centred inertial, km). `sat` must be valid.
    pub fn position(&self, sat: SatId, t: f64) -> Vec3 {
        let u = self.class_arg_of_latitude_deg(self.phase_class(sat), t).to_radians();
        let raan = self.raan_deg(sat.plane).to_radians();
        let inc = self.effective_inclination_deg().to_radians();
        let r = self.orbit_radius_km();
        let (su, cu) = u.sin_cos();
        let (so, co) = raan.sin_cos();
        let ci = inc.cos();
        Vec3::new(
            r * (co * cu - so * su * ci),
            r * (so * cu + co * su * ci),
            r * su * inc.sin(),
        )
    }

    /// All satellite positions at `t`, indexed by [`sat_index`](Self::sat_index).
    pub fn positions(&self, t: f64) -> Vec<Vec3> {
        self.sat_ids().map(|s| self.position(s, t)).collect()
    }

    /// Latitude of every satellite at `t`, indexed by [`sat_index`](Self::sat_index).
    pub fn latitudes(&self, t: f64) -> Vec<f64> {
        self.sat_ids()
            .map(|s| self.reference_latitude_deg(self.class_arg_of_latitude_deg(self.phase_class(s), t)))
            .collect()
    }
}

/// Orbit period in seconds: the configured value, or Kepler's third law.
pub fn orbit_period(spec: &ConstellationSpec) -> f64 {
    spec.period_s.unwrap_or_else(|| {
        let a = spec.orbit_radius_km();
        2.0 * std::f64::consts::PI * (a * a * a / EARTH_MU_KM3_S2).sqrt()
    })
}

/// Wrap an angle to `[-180°, 180°)`.
pub fn wrap_deg(angle: f64) -> f64 {
    (angle + 180.0).rem_euclid(360.0) - 180.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatState {
    pub sat: SatId,
    pub time: f64,
    pub latitude_deg: f64,
    /// Earth-fixed longitude (Greenwich at 0° when t = 0).
    pub longitude_deg: f64,
    pub position: Vec3,
    pub ascending: bool,
}

pub fn satellite_state(spec: &ConstellationSpec, sat: SatId, t: f64) -> Result<SatState> {
    if !spec.contains(sat) {
        return Err(Error::InvalidSat(sat));
    }
    let u = wrap_deg(spec.class_arg_of_latitude_deg(spec.phase_class(sat), t));
    let position = spec.position(sat, t);
    let inertial_lon = position.y.atan2(position.x).to_degrees();
    Ok(SatState {
        sat,
        time: t,
        latitude_deg: spec.reference_latitude_deg(u),
        longitude_deg: wrap_deg(inertial_lon - EARTH_ROTATION_RAD_S.to_degrees() * t),
        position,
        ascending: (-90.0..90.0).contains(&u),
    })
}

/// Angle between two position vectors as seen from the Earth's centre.
pub fn geocentric_angle(a: Vec3, b: Vec3) -> Result<f64> {
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Err(Error::domain("geocentric angle of a zero vector"));
    }
    Ok(a.cross(b).norm().atan2(a.dot(b)).to_degrees())
}

pub fn propagation_delay(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm() / SPEED_OF_LIGHT_KM_S
}

/// Largest geocentric angle at which the line between two satellites at the
/// constellation altitude stays above the grazing altitude.
pub fn grazing_theta_max_deg(spec: &ConstellationSpec) -> f64 {
    let ratio = (spec.earth_radius_km + spec.grazing_altitude_km) / spec.orbit_radius_km();
    2.0 * ratio.clamp(-1.0, 1.0).acos().to_degrees()
}

/// Lowest latitude at which satellites two planes apart (node spacing
/// `2·plane_spacing`) are within `theta_max` of each other.
pub fn horizontal_survival_latitude(theta_max_deg: f64, plane_spacing_deg: f64) -> Result<f64> {
    let c2 = (2.0 * plane_spacing_deg).to_radians().cos();
    let denom = 1.0 - c2;
    if denom <= 0.0 {
        return Err(Error::InfeasibleGeometry(format!(
            "plane spacing {plane_spacing_deg}° gives coincident planes"
        )));
    }
    let arg = (theta_max_deg.to_radians().cos() - c2) / denom;
    if arg < -1e-12 {
        return Err(Error::InfeasibleGeometry(format!(
            "theta_max {theta_max_deg:.3}° exceeds twice the plane spacing; horizontal links are always in range"
        )));
    }
    if arg > 1.0 + 1e-12 {
        return Err(Error::InfeasibleGeometry(format!(
            "theta_max {theta_max_deg:.3}° is negative; horizontal links are never in range"
        )));
    }
    Ok(arg.clamp(0.0, 1.0).sqrt().asin().to_degrees())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityModel {
    pub theta_max_deg: f64,
    /// Horizontal links are usable at |latitude| ≥ this value. Zero when
    /// they are always in range.
    pub horizontal_survival_deg: f64,
    /// L_pa: inter-plane links are shut down at |latitude| ≥ this value.
    pub polar_border_deg: f64,
}

impl VisibilityModel {
    pub fn new(spec: &ConstellationSpec, polar_border_deg: f64) -> Result<Self> {
        if !(polar_border_deg > 0.0 && polar_border_deg < 90.0) {
            return Err(Error::domain(format!(
                "polar border latitude {polar_border_deg}° outside (0°, 90°)"
            )));
        }
        let theta_max_deg = grazing_theta_max_deg(spec);
        let horizontal_survival_deg =
            match horizontal_survival_latitude(theta_max_deg, spec.inter_plane_spacing_deg) {
                Ok(l) => l,
                Err(Error::InfeasibleGeometry(_))
                    if theta_max_deg >= 2.0 * spec.inter_plane_spacing_deg =>
                {
                    0.0
                }
                Err(e) => return Err(e),
            };
        if horizontal_survival_deg >= polar_border_deg {
            return Err(Error::InfeasibleGeometry(format!(
                "horizontal survival latitude {horizontal_survival_deg:.2}° is not below the polar border {polar_border_deg}°"
            )));
        }
        Ok(VisibilityModel {
            theta_max_deg,
            horizontal_survival_deg,
            polar_border_deg,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStation {
    pub name: String,
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    pub min_elevation_deg: f64,
}

impl GroundStation {
    pub fn new(
        name: impl Into<String>,
        latitude_deg: f64,
        longitude_deg: f64,
        min_elevation_deg: f64,
    ) -> Result<Self> {
        if !(latitude_deg.abs() <= 90.0) {
            return Err(Error::domain(format!("station latitude {latitude_deg}° out of range")));
        }
        if !(0.0..=90.0).contains(&min_elevation_deg) {
            return Err(Error::domain(format!(
                "minimum elevation {min_elevation_deg}° out of range"
            )));
        }
        Ok(GroundStation {
            name: name.into(),
            latitude_deg,
            longitude_deg,
            min_elevation_deg,
        })
    }

    pub fn beijing() -> Self {
        GroundStation {
            name: "Beijing".into(),
            latitude_deg: 39.904,
            longitude_deg: 116.407,
            min_elevation_deg: 10.0,
        }
    }

    pub fn london() -> Self {
        GroundStation {
            name: "London".into(),
            latitude_deg: 51.507,
            longitude_deg: -0.128,
            min_elevation_deg: 10.0,
        }
    }

    /// Inertial position at `t` on a spherical Earth rotating at the sidereal rate.
    pub fn position(&self, t: f64, earth_radius_km: f64) -> Vec3 {
        let lat = self.latitude_deg.to_radians();
        let lon = self.longitude_deg.to_radians() + EARTH_ROTATION_RAD_S * t;
        Vec3::new(
            earth_radius_km * lat.cos() * lon.cos(),
            earth_radius_km * lat.cos() * lon.sin(),
            earth_radius_km * lat.sin(),
        )
    }
}

/// Elevation of a satellite above the station's local horizon at `t`.
pub fn elevation_angle(gs: &GroundStation, sat_position: Vec3, t: f64, earth_radius_km: f64) -> f64 {
    let ground = gs.position(t, earth_radius_km);
    let los = sat_position - ground;
    let range = los.norm();
    if range == 0.0 {
        return 90.0;
    }
    let up = ground.scale(1.0 / ground.norm());
    (los.dot(up) / range).clamp(-1.0, 1.0).asin().to_degrees()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Ascending,
    Descending,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::Ascending => 0,
            Side::Descending => 1,
        }
    }
}

/// One line of satellites at an instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsRow {
    pub class: usize,
    pub members: Vec<SatId>,
    /// Argument of latitude in `[-180°, 180°)`.
    pub arg_of_latitude_deg: f64,
    pub latitude_deg: f64,
    pub side: Side,
    /// Argument of latitude measured from this side's equator crossing,
    /// in `[-90°, 90°)`; increases towards the polar-entry border.
    pub side_arg_deg: f64,
    pub in_polar: bool,
}

impl LsRow {
    pub fn ascending(&self) -> bool {
        self.side == Side::Ascending
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsState {
    pub time: f64,
    pub polar_border_deg: f64,
    /// Argument of latitude at which a row meets the polar border, if ever.
    pub polar_border_arg_deg: Option<f64>,
    /// Rows counted from the south pole in the ascending direction.
    pub rows: Vec<LsRow>,
    pub nls: usize,
    pub nls_pa: usize,
    pub nls_npa: usize,
    /// Row (index into `rows`) that most recently left a polar area.
    pub ls_npa0_index: Option<usize>,
    /// Same, per side (ascending, descending).
    pub npa0_by_side: [Option<usize>; 2],
}

impl LsState {
    /// Degrees of argument of latitude travelled since the row left the
    /// polar area; `None` for polar rows or when there is no polar area.
    pub fn since_exit_deg(&self, row: usize) -> Option<f64> {
        let r = &self.rows[row];
        let border = self.polar_border_arg_deg?;
        (!r.in_polar).then_some(r.side_arg_deg + border)
    }

    pub fn until_entry_deg(&self, row: usize) -> Option<f64> {
        let r = &self.rows[row];
        let border = self.polar_border_arg_deg?;
        (!r.in_polar).then_some(border - r.side_arg_deg)
    }

    pub fn nonpolar_count(&self, side: Side) -> usize {
        self.rows.iter().filter(|r| r.side == side && !r.in_polar).count()
    }
}

/// Partition all satellites into their 2M lines of satellites at `t`.
pub fn build_ls_state(spec: &ConstellationSpec, vis: &VisibilityModel, t: f64) -> Result<LsState> {
    spec.require_even_planes()?;
    let l_pa = vis.polar_border_deg;
    let border = spec.polar_border_arg_deg(l_pa);
    let nls = spec.ls_count();
    let m = spec.sats_per_plane as usize;

    let mut rows: Vec<LsRow> = (0..nls)
        .map(|class| {
            let u = wrap_deg(spec.class_arg_of_latitude_deg(class, t));
            let latitude_deg = spec.reference_latitude_deg(u);
            let (side, side_arg_deg) = if (-90.0..90.0).contains(&u) {
                (Side::Ascending, u)
            } else {
                (Side::Descending, wrap_deg(u - 180.0))
            };
            LsRow {
                class,
                members: spec.class_members(class),
                arg_of_latitude_deg: u,
                latitude_deg,
                side,
                side_arg_deg,
                in_polar: latitude_deg.abs() >= l_pa,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        let ka = (a.arg_of_latitude_deg + 90.0).rem_euclid(360.0);
        let kb = (b.arg_of_latitude_deg + 90.0).rem_euclid(360.0);
        ka.total_cmp(&kb).then(a.class.cmp(&b.class))
    });

    let nls_npa = match border {
        Some(b) => ((2.0 * b / spec.phase_offset_deg()) + 1e-9).floor() as usize,
        None => m,
    }
    .min(m);

    let mut state = LsState {
        time: t,
        polar_border_deg: l_pa,
        polar_border_arg_deg: border,
        rows,
        nls,
        nls_pa: m - nls_npa,
        nls_npa,
        ls_npa0_index: None,
        npa0_by_side: [None, None],
    };

    let mut best: Option<(f64, usize)> = None;
    let mut by_side: [Option<(f64, usize)>; 2] = [None, None];
    for idx in 0..state.rows.len() {
        let Some(since) = state.since_exit_deg(idx) else {
            continue;
        };
        let side = state.rows[idx].side.index();
        if best.is_none_or(|(s, _)| since < s) {
            best = Some((since, idx));
        }
        if by_side[side].is_none_or(|(s, _)| since < s) {
            by_side[side] = Some((since, idx));
        }
    }
    state.ls_npa0_index = best.map(|(_, i)| i);
    state.npa0_by_side = [by_side[0].map(|(_, i)| i), by_side[1].map(|(_, i)| i)];
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar(n: u32, m: u32) -> ConstellationSpec {
        ConstellationSpec::new("toy", n, m, 90.0, 780.0).unwrap()
    }

    #[test]
    fn equator_crossing_at_zero() {
        let spec = ConstellationSpec::iridium();
        let s = satellite_state(&spec, SatId::new(1, 1), 0.0).unwrap();
        assert!(s.latitude_deg.abs() < 1e-12);
        assert!(s.ascending);
    }

    #[test]
    fn apex_latitudes() {
        // S(1,j) with (j-1)·ω = 90° needs M divisible by 4.
        let spec = polar(2, 4);
        let s = satellite_state(&spec, SatId::new(1, 2), 0.0).unwrap();
        assert!((s.latitude_deg - 90.0).abs() < 1e-9);

        let iridium = ConstellationSpec::iridium();
        let t = 90.0 / iridium.mean_motion_deg_s();
        let s = satellite_state(&iridium, SatId::new(1, 1), t).unwrap();
        let oracle = (86.4f64.to_radians().sin() * 90f64.to_radians().sin()).asin().to_degrees();
        assert!((s.latitude_deg - oracle).abs() < 1e-9);
        assert!((s.latitude_deg - 86.4).abs() < 1e-9);
    }

    #[test]
    fn invalid_satellite_rejected() {
        let spec = ConstellationSpec::iridium();
        assert!(matches!(
            satellite_state(&spec, SatId::new(7, 1), 0.0),
            Err(Error::InvalidSat(_))
        ));
        assert!(satellite_state(&spec, SatId::new(1, 0), 0.0).is_err());
    }

    #[test]
    fn configured_periods() {
        assert!((orbit_period(&ConstellationSpec::iridium()) - 6027.0).abs() < 1e-9);
        assert!((orbit_period(&ConstellationSpec::teledesic()) - 6793.8).abs() < 1e-9);
    }

    #[test]
    fn kepler_period() {
        let mut spec = ConstellationSpec::iridium();
        spec.period_s = None;
        let a: f64 = 6378.137 + 780.0;
        let oracle = 2.0 * std::f64::consts::PI * (a.powi(3) / 398600.4418).sqrt();
        assert!((orbit_period(&spec) - oracle).abs() < 1e-9);
        assert!((orbit_period(&spec) - 6027.6).abs() < 1.0);
    }

    #[test]
    fn odd_plane_count_rejected() {
        let err = ConstellationSpec::new("odd", 5, 11, 86.4, 780.0).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
        let mut spec = ConstellationSpec::iridium();
        spec.plane_count = 5;
        let vis = VisibilityModel::new(&ConstellationSpec::iridium(), 60.0).unwrap();
        assert!(matches!(build_ls_state(&spec, &vis, 0.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn ls_counts() {
        let iridium = ConstellationSpec::iridium();
        for (l_pa, npa) in [(60.0, 7), (70.0, 8)] {
            let vis = VisibilityModel::new(&iridium, l_pa).unwrap();
            let ls = build_ls_state(&iridium, &vis, 123.4).unwrap();
            assert_eq!(ls.nls, 22);
            assert_eq!(ls.nls_npa, npa);
            assert_eq!(ls.nls_pa, 11 - npa);
        }
        let teledesic = ConstellationSpec::teledesic();
        let vis = VisibilityModel::new(&teledesic, 75.0).unwrap();
        let ls = build_ls_state(&teledesic, &vis, 0.0).unwrap();
        assert_eq!(ls.nls, 48);
        assert_eq!(ls.nls_npa, 20);
    }

    #[test]
    fn ls_rows_partition_satellites() {
        let spec = ConstellationSpec::teledesic();
        let vis = VisibilityModel::new(&spec, 65.0).unwrap();
        let ls = build_ls_state(&spec, &vis, 777.0).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for row in &ls.rows {
            assert_eq!(row.members.len(), 6);
            let parity = row.members[0].plane % 2;
            for (k, s) in row.members.iter().enumerate() {
                assert_eq!(s.plane % 2, parity);
                if k > 0 {
                    assert_eq!(s.plane, row.members[k - 1].plane + 2);
                }
                assert!(seen.insert(*s));
                let st = satellite_state(&spec, *s, 777.0).unwrap();
                assert!((st.latitude_deg - row.latitude_deg).abs() < 1e-6);
                assert_eq!(st.ascending, row.ascending());
            }
        }
        assert_eq!(seen.len(), spec.satellite_count());
    }

    #[test]
    fn npa0_is_most_recent_exit() {
        let spec = ConstellationSpec::iridium();
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        let ls = build_ls_state(&spec, &vis, 400.0).unwrap();
        let asc = ls.npa0_by_side[0].unwrap();
        let row = &ls.rows[asc];
        assert!(row.ascending() && !row.in_polar);
        for r in ls.rows.iter().filter(|r| r.ascending() && !r.in_polar) {
            assert!(r.side_arg_deg >= row.side_arg_deg);
        }
    }

    #[test]
    fn angle_edge_cases() {
        let a = Vec3::new(7000.0, 0.0, 0.0);
        assert_eq!(geocentric_angle(a, a).unwrap(), 0.0);
        assert!((geocentric_angle(a, a.scale(-1.0)).unwrap() - 180.0).abs() < 1e-12);
        assert!(geocentric_angle(a, Vec3::default()).is_err());

        let spec = ConstellationSpec::iridium();
        let ang = geocentric_angle(
            spec.position(SatId::new(3, 4), 50.0),
            spec.position(SatId::new(3, 5), 50.0),
        )
        .unwrap();
        assert!((ang - 360.0 / 11.0).abs() < 1e-9);
    }

    #[test]
    fn light_delay() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(propagation_delay(a, a), 0.0);
        let b = Vec3::new(1.0 + 2997.92458, 2.0, 3.0);
        assert!((propagation_delay(a, b) - 0.01).abs() < 1e-15);

        let spec = ConstellationSpec::iridium();
        let chord = 2.0 * spec.orbit_radius_km() * (360.0f64 / 11.0 / 2.0).to_radians().sin();
        let d = propagation_delay(spec.position(SatId::new(1, 1), 0.0), spec.position(SatId::new(1, 2), 0.0));
        assert!((d - chord / SPEED_OF_LIGHT_KM_S).abs() < 1e-12);
        assert!((d - 0.01346).abs() < 1e-5);
    }

    #[test]
    fn survival_latitude() {
        let spec = ConstellationSpec::iridium();
        let l = horizontal_survival_latitude(grazing_theta_max_deg(&spec), 31.6).unwrap();
        assert!((l - 32.81).abs() < 0.3, "{l}");
        assert_eq!(horizontal_survival_latitude(50.0, 25.0).unwrap(), 0.0);
        assert!(matches!(
            horizontal_survival_latitude(80.0, 15.0),
            Err(Error::InfeasibleGeometry(_))
        ));
    }

    #[test]
    fn teledesic_horizontal_links_always_in_range() {
        let spec = ConstellationSpec::teledesic();
        let theta = grazing_theta_max_deg(&spec);
        // independent evaluation of the sqrt argument
        let arg = (theta.to_radians().cos() - 30.72f64.to_radians().cos())
            / (1.0 - 30.72f64.to_radians().cos());
        assert!(arg < 0.0);
        assert!(horizontal_survival_latitude(theta, 15.36).is_err());
        let vis = VisibilityModel::new(&spec, 60.0).unwrap();
        assert_eq!(vis.horizontal_survival_deg, 0.0);
    }

    #[test]
    fn elevation_cases() {
        let gs = GroundStation::new("g", 20.0, 30.0, 0.0).unwrap();
        let t = 1234.0;
        let up = gs.position(t, EARTH_RADIUS_KM);
        let zenith = up.scale((EARTH_RADIUS_KM + 780.0) / EARTH_RADIUS_KM);
        assert!((elevation_angle(&gs, zenith, t, EARTH_RADIUS_KM) - 90.0).abs() < 1e-9);
        let nadir = up.scale(-(EARTH_RADIUS_KM + 780.0) / EARTH_RADIUS_KM);
        assert!((elevation_angle(&gs, nadir, t, EARTH_RADIUS_KM) + 90.0).abs() < 1e-9);

        // horizon: tangent point at geocentric angle acos(R/r) from the station
        let r = EARTH_RADIUS_KM + 780.0;
        let lambda = (EARTH_RADIUS_KM / r).acos();
        let station = GroundStation::new("eq", 0.0, 0.0, 0.0).unwrap();
        let sat = Vec3::new(r * lambda.cos(), r * lambda.sin(), 0.0);
        assert!(elevation_angle(&station, sat, 0.0, EARTH_RADIUS_KM).abs() < 1e-6);
    }

    #[test]
    fn station_validation() {
        assert!(GroundStation::new("x", 91.0, 0.0, 10.0).is_err());
        assert!(GroundStation::new("x", 10.0, 0.0, -1.0).is_err());
    }
}
