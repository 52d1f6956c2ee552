//! C ABI over `leo_snapshot`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Every fallible call returns a [`LeoStatus`];
//! on failure a message is available from [`leo_last_error_message`] on the
//! same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use leo_snapshot::report::topology_json;
use leo_snapshot::{
    analytic_summary, build_sequence, bundled_scenario, delay_experiment, horizontal_survival_latitude,
    load_scenario, utilization, ConstellationSpec, EqualTimeDelta, Error, GroundStation, IslKind, Method,
    SnapshotSequence, Trigger,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    /// No horizontal-link survival latitude exists for the geometry.
    Infeasible = 4,
    OutOfRange = 5,
    Io = 6,
    Parse = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeoMethod {
    Reassignment = 0,
    Fixed = 1,
    EqualTime = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeoTrigger {
    Enter = 0,
    Exit = 1,
}

/// Closed-form reassignment figures for one polar border.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LeoAnalyticSummary {
    pub polar_border_deg: f64,
    pub snapshot_duration_s: f64,
    pub snapshot_count: u32,
    pub inter_plane_links: u32,
    pub oblique_links: u32,
    pub horizontal_links: u32,
    pub nonpolar_rows: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LeoSnapshotInfo {
    pub start_s: f64,
    pub end_s: f64,
    pub intra_plane_links: u32,
    pub oblique_links: u32,
    pub horizontal_links: u32,
    pub inter_plane_links: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LeoStation {
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    pub min_elevation_deg: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LeoDelayStats {
    /// NaN when no sample was reachable.
    pub average_delay_s: f64,
    pub samples: u32,
    pub unreachable_fraction: f64,
}

/// Opaque constellation handle.
pub struct LeoConstellation {
    spec: ConstellationSpec,
}

/// Opaque snapshot-sequence handle; keeps its own copy of the constellation.
pub struct LeoSequence {
    spec: ConstellationSpec,
    seq: SnapshotSequence,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> LeoStatus {
    match err {
        Error::InvalidSat(_) => LeoStatus::OutOfRange,
        Error::Domain(_) | Error::ScenarioInvalid { .. } => LeoStatus::InvalidArgument,
        Error::Unsupported(_) => LeoStatus::Unsupported,
        Error::InfeasibleGeometry(_) => LeoStatus::Infeasible,
        Error::ScenarioIo { .. } | Error::Io { .. } => LeoStatus::Io,
        Error::ScenarioSyntax { .. } | Error::Json(_) => LeoStatus::Parse,
        Error::Context { source, .. } => status_of(source),
        _ => LeoStatus::Internal,
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (LeoStatus, String)>) -> LeoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LeoStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LeoStatus::Panic
        }
    }
}

fn core(err: Error) -> (LeoStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (LeoStatus, String) {
    (LeoStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(msg: impl Into<String>) -> (LeoStatus, String) {
    (LeoStatus::InvalidArgument, msg.into())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (LeoStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("`{what}` is not valid UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (LeoStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn leo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn leo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Bundled constellation by name ("iridium" or "teledesic").
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_constellation_preset(name: *const c_char, out: *mut *mut LeoConstellation) -> LeoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let name = str_arg(name, "name")?;
        let cfg = bundled_scenario(name).ok_or_else(|| invalid(format!("unknown preset `{name}`")))?;
        *out = Box::into_raw(Box::new(LeoConstellation { spec: cfg.constellation }));
        Ok(())
    })
}

/// Constellation with planes spread over 180° and the period derived from
/// the altitude.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_constellation_new(
    planes: u32,
    sats_per_plane: u32,
    inclination_deg: f64,
    altitude_km: f64,
    out: *mut *mut LeoConstellation,
) -> LeoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let spec = ConstellationSpec::new("custom", planes, sats_per_plane, inclination_deg, altitude_km).map_err(core)?;
        *out = Box::into_raw(Box::new(LeoConstellation { spec }));
        Ok(())
    })
}

/// Constellation from the `[constellation]` section of a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_constellation_from_scenario(
    path: *const c_char,
    out: *mut *mut LeoConstellation,
) -> LeoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let cfg = load_scenario(str_arg(path, "path")?).map_err(core)?;
        *out = Box::into_raw(Box::new(LeoConstellation { spec: cfg.constellation }));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live constellation handle.
#[no_mangle]
pub unsafe extern "C" fn leo_constellation_set_ideal_polar(c: *mut LeoConstellation, on: bool) -> LeoStatus {
    guard(|| {
        out_arg(c, "constellation")?.spec.ideal_polar = on;
        Ok(())
    })
}

/// # Safety
/// `c` must be a live constellation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_constellation_period(c: *const LeoConstellation, out: *mut f64) -> LeoStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("constellation"))?;
        *out_arg(out, "out")? = c.spec.period();
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn leo_constellation_free(c: *mut LeoConstellation) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Closed-form reassignment figures at polar border `polar_border_deg`.
///
/// # Safety
/// `c` must be a live constellation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_analytic_summary(
    c: *const LeoConstellation,
    polar_border_deg: f64,
    out: *mut LeoAnalyticSummary,
) -> LeoStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("constellation"))?;
        let out = out_arg(out, "out")?;
        let a = analytic_summary(&c.spec, polar_border_deg).map_err(core)?;
        *out = LeoAnalyticSummary {
            polar_border_deg: a.polar_border_deg,
            snapshot_duration_s: a.delta_reassign_s,
            snapshot_count: a.s_reassign as u32,
            inter_plane_links: a.nisl_reassign as u32,
            oblique_links: a.nisl_oblique as u32,
            horizontal_links: a.nisl_horizontal as u32,
            nonpolar_rows: a.nls_npa as u32,
        };
        Ok(())
    })
}

/// Highest latitude at which horizontal links stay in range.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_horizontal_survival_latitude(
    theta_max_deg: f64,
    plane_spacing_deg: f64,
    out: *mut f64,
) -> LeoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = horizontal_survival_latitude(theta_max_deg, plane_spacing_deg).map_err(core)?;
        Ok(())
    })
}

/// Snapshot sequence over one period. `equal_time_delta_s <= 0` uses the
/// reassignment interval; it is ignored by the other methods.
///
/// # Safety
/// `c` must be a live constellation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_sequence_build(
    c: *const LeoConstellation,
    polar_border_deg: f64,
    method: LeoMethod,
    trigger: LeoTrigger,
    equal_time_delta_s: f64,
    out: *mut *mut LeoSequence,
) -> LeoStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("constellation"))?;
        let out = out_arg(out, "out")?;
        let method = match method {
            LeoMethod::Reassignment => Method::Reassignment,
            LeoMethod::Fixed => Method::Fixed,
            LeoMethod::EqualTime => Method::EqualTime,
        };
        let trigger = match trigger {
            LeoTrigger::Enter => Trigger::Enter,
            LeoTrigger::Exit => Trigger::Exit,
        };
        let delta = if equal_time_delta_s > 0.0 {
            EqualTimeDelta::Seconds(equal_time_delta_s)
        } else {
            EqualTimeDelta::MatchReassignment
        };
        let seq = build_sequence(&c.spec, polar_border_deg, method, trigger, delta).map_err(core)?;
        *out = Box::into_raw(Box::new(LeoSequence { spec: c.spec.clone(), seq }));
        Ok(())
    })
}

/// Number of snapshots S.
///
/// # Safety
/// `s` must be a live sequence handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_sequence_len(s: *const LeoSequence, out: *mut usize) -> LeoStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sequence"))?;
        *out_arg(out, "out")? = s.seq.len();
        Ok(())
    })
}

/// # Safety
/// `s` must be a live sequence handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_sequence_snapshot(
    s: *const LeoSequence,
    index: usize,
    out: *mut LeoSnapshotInfo,
) -> LeoStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sequence"))?;
        let out = out_arg(out, "out")?;
        let snap = s.seq.snapshots.get(index).ok_or_else(|| {
            (
                LeoStatus::OutOfRange,
                format!("snapshot {index} out of range (len {})", s.seq.len()),
            )
        })?;
        *out = LeoSnapshotInfo {
            start_s: snap.start,
            end_s: snap.end,
            intra_plane_links: snap.count(IslKind::IntraPlane) as u32,
            oblique_links: snap.count(IslKind::Oblique) as u32,
            horizontal_links: snap.count(IslKind::Horizontal) as u32,
            inter_plane_links: snap.inter_plane_count as u32,
        };
        Ok(())
    })
}

/// Inter-plane link utilization ratio U.
///
/// # Safety
/// `s` must be a live sequence handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_sequence_utilization(s: *const LeoSequence, out: *mut f64) -> LeoStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sequence"))?;
        let out = out_arg(out, "out")?;
        *out = utilization(&s.seq, &s.spec).map_err(core)?.utilization;
        Ok(())
    })
}

/// Ground-to-ground delay experiment over the (cyclically repeated) sequence.
///
/// # Safety
/// `s` must be a live sequence handle; `source`, `destination` readable;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn leo_sequence_delay(
    s: *const LeoSequence,
    source: *const LeoStation,
    destination: *const LeoStation,
    duration_s: f64,
    interval_s: f64,
    out: *mut LeoDelayStats,
) -> LeoStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sequence"))?;
        let station = |p: *const LeoStation, name: &str| {
            let st = p.as_ref().ok_or_else(|| null(name))?;
            GroundStation::new(name, st.latitude_deg, st.longitude_deg, st.min_elevation_deg).map_err(core)
        };
        let src = station(source, "source")?;
        let dst = station(destination, "destination")?;
        let out = out_arg(out, "out")?;
        let series = delay_experiment(&s.spec, &s.seq, &src, &dst, duration_s, interval_s).map_err(core)?;
        *out = LeoDelayStats {
            average_delay_s: series.average_delay_s.unwrap_or(f64::NAN),
            samples: series.samples.len() as u32,
            unreachable_fraction: series.unreachable_fraction,
        };
        Ok(())
    })
}

/// JSON topology document; free the result with [`leo_string_free`].
///
/// # Safety
/// `s` must be a live sequence handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn leo_sequence_to_json(s: *const LeoSequence, out: *mut *mut c_char) -> LeoStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sequence"))?;
        let out = out_arg(out, "out")?;
        let json = topology_json(&s.spec, &s.seq).map_err(core)?;
        *out = CString::new(json)
            .map_err(|_| (LeoStatus::Internal, "JSON contains a NUL byte".to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn leo_sequence_free(s: *mut LeoSequence) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn leo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
