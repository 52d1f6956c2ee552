use proptest::prelude::*;

use leo_snapshot::geometry::SPEED_OF_LIGHT_KM_S;
use leo_snapshot::{
    build_sequence, geocentric_angle, horizontal_survival_latitude, parse_topology_json, shortest_delay,
    topology_json, ConstellationSpec, EqualTimeDelta, Method, SatId, Trigger,
};

fn sat(spec: &ConstellationSpec) -> impl Strategy<Value = SatId> {
    (1..=spec.plane_count, 1..=spec.sats_per_plane).prop_map(|(p, j)| SatId::new(p, j))
}

fn preset() -> impl Strategy<Value = ConstellationSpec> {
    prop_oneof![Just(ConstellationSpec::iridium()), Just(ConstellationSpec::teledesic())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn positions_lie_on_the_orbit_sphere(spec in preset(), t in -1e6f64..1e6, p in 1u32..=12, j in 1u32..=24) {
        let s = SatId::new(p.min(spec.plane_count), j.min(spec.sats_per_plane));
        let r = spec.position(s, t).norm();
        prop_assert!((r - spec.orbit_radius_km()).abs() < 1e-6);
    }

    #[test]
    fn positions_repeat_every_period(spec in preset(), t in 0f64..1e5, k in 1i32..5) {
        let a = spec.positions(t);
        let b = spec.positions(t + f64::from(k) * spec.period());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((*x - *y).norm() < 1e-5);
        }
    }

    #[test]
    fn geocentric_angle_symmetric_and_bounded(t in 0f64..7000.0, a in sat(&ConstellationSpec::iridium()), b in sat(&ConstellationSpec::iridium())) {
        let spec = ConstellationSpec::iridium();
        let (pa, pb) = (spec.position(a, t), spec.position(b, t));
        let ab = geocentric_angle(pa, pb).unwrap();
        let ba = geocentric_angle(pb, pa).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=180.0).contains(&ab));
        if a == b {
            prop_assert!(ab.abs() < 1e-9);
        }
    }

    #[test]
    fn survival_latitude_monotone(theta in 1f64..50.0, d_theta in 0.01f64..5.0, spacing in 26f64..45.0, d_sp in 0.01f64..3.0) {
        // larger reach lowers the latitude; wider spacing raises it
        let base = horizontal_survival_latitude(theta, spacing).unwrap();
        if let Ok(wider_reach) = horizontal_survival_latitude(theta + d_theta, spacing) {
            prop_assert!(wider_reach <= base + 1e-9);
        }
        let wider_spacing = horizontal_survival_latitude(theta, spacing + d_sp).unwrap();
        prop_assert!(wider_spacing >= base - 1e-9);
    }

    #[test]
    fn routes_respect_the_triangle_bound(frac in 0f64..1.0, a in sat(&ConstellationSpec::iridium()), b in sat(&ConstellationSpec::iridium()), x in sat(&ConstellationSpec::iridium())) {
        let spec = ConstellationSpec::iridium();
        let seq = build_sequence(&spec, 70.0, Method::Reassignment, Trigger::Enter, EqualTimeDelta::MatchReassignment).unwrap();
        let snap = &seq.snapshots[(frac * seq.len() as f64) as usize % seq.len()];
        let t = snap.start + frac * snap.duration();
        let d = |s, e| shortest_delay(&spec, snap, t, s, e).unwrap().map(|r| r.delay_s);
        if let (Some(ab), Some(ax), Some(xb)) = (d(a, b), d(a, x), d(x, b)) {
            prop_assert!(ab <= ax + xb + 1e-12);
            // never faster than a straight line
            let direct = (spec.position(a, t) - spec.position(b, t)).norm() / SPEED_OF_LIGHT_KM_S;
            prop_assert!(ab + 1e-12 >= direct);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn topology_export_round_trips(spec in preset(), l in 55f64..80.0, m in 0usize..3, exit in any::<bool>()) {
        let trigger = if exit { Trigger::Exit } else { Trigger::Enter };
        let seq = build_sequence(&spec, l, Method::ALL[m], trigger, EqualTimeDelta::MatchReassignment).unwrap();
        let json = topology_json(&spec, &seq).unwrap();
        let (spec2, seq2) = parse_topology_json(&json).unwrap();
        prop_assert_eq!(&spec2, &spec);
        prop_assert_eq!(&seq2, &seq);
        prop_assert_eq!(topology_json(&spec2, &seq2).unwrap(), json);
    }
}
