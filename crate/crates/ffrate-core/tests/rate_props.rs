//! Scaling laws and symmetries of the rate engine.

use ffrate_core::rate::{
    angular_sweep, flipflop_rate, RateQuery, SweepQuery, DEFAULT_LAYERS,
};
use ffrate_core::registry::builtin_registry;
use ffrate_core::spin::FieldSpec;
use proptest::prelude::*;

fn query(material: &str, conc: f64, phi: f64, theta: f64) -> RateQuery {
    RateQuery {
        material: material.to_string(),
        concentration_ppm: conc,
        field: FieldSpec {
            magnitude_mt: 0.3,
            phi_deg: phi,
            theta_deg: theta,
        },
        gamma_mhz: None,
        gamma_range_mhz: None,
        layers: DEFAULT_LAYERS,
    }
}

proptest! {
    /// R is exactly quadratic in concentration, for any orientation.
    #[test]
    fn rate_is_quadratic_in_concentration(
        conc in 0.01f64..500.0,
        k in 0.1f64..20.0,
        phi in 0.0f64..360.0,
        theta in 0.0f64..180.0,
    ) {
        let reg = builtin_registry();
        let r1 = flipflop_rate(reg, &query("er_yso_site1", conc, phi, theta)).unwrap().r_per_s;
        let r2 = flipflop_rate(reg, &query("er_yso_site1", k * conc, phi, theta)).unwrap().r_per_s;
        prop_assert!((r2 - k * k * r1).abs() <= 1e-10 * r2.abs());
    }

    /// R · Γ is independent of Γ.
    #[test]
    fn rate_times_gamma_is_constant(
        gamma_a in 0.5f64..20.0,
        gamma_b in 0.5f64..20.0,
        theta in 0.0f64..180.0,
    ) {
        let reg = builtin_registry();
        let mut qa = query("er_linbo3", 10.0, 0.0, theta);
        qa.gamma_mhz = Some(gamma_a);
        let mut qb = query("er_linbo3", 10.0, 0.0, theta);
        qb.gamma_mhz = Some(gamma_b);
        let pa = flipflop_rate(reg, &qa).unwrap().r_per_s * gamma_a;
        let pb = flipflop_rate(reg, &qb).unwrap().r_per_s * gamma_b;
        prop_assert!((pa - pb).abs() <= 1e-10 * pa.abs());
    }

    /// The field magnitude sets splittings but never the rate.
    #[test]
    fn rate_is_field_magnitude_independent(
        b_a in 0.05f64..10.0,
        b_b in 0.05f64..10.0,
        phi in 0.0f64..360.0,
    ) {
        let reg = builtin_registry();
        let mut qa = query("er_yso_site1", 10.0, phi, 90.0);
        qa.field.magnitude_mt = b_a;
        let mut qb = query("er_yso_site1", 10.0, phi, 90.0);
        qb.field.magnitude_mt = b_b;
        let ra = flipflop_rate(reg, &qa).unwrap();
        let rb = flipflop_rate(reg, &qb).unwrap();
        prop_assert_eq!(ra.r_per_s, rb.r_per_s);
        // The splitting does scale.
        prop_assert!((ra.splitting_hz / b_a - rb.splitting_hz / b_b).abs()
            <= 1e-9 * (ra.splitting_hz / b_a));
    }

    /// Reversing the field direction changes nothing.
    #[test]
    fn rate_is_inversion_symmetric(phi in 0.0f64..180.0, theta in 0.0f64..180.0) {
        let reg = builtin_registry();
        let fwd = flipflop_rate(reg, &query("er_yso_site1", 10.0, phi, theta)).unwrap();
        let rev = flipflop_rate(reg, &query("er_yso_site1", 10.0, phi + 180.0, 180.0 - theta))
            .unwrap();
        prop_assert!((fwd.r_per_s - rev.r_per_s).abs() <= 1e-10 * fwd.r_per_s.max(1e-300));
        prop_assert!((fwd.g_eff - rev.g_eff).abs() <= 1e-12 * fwd.g_eff);
    }
}

#[test]
fn in_plane_sweep_is_180_degree_periodic() {
    let sweep = angular_sweep(
        builtin_registry(),
        &SweepQuery {
            material: "er_yso_site1".into(),
            concentration_ppm: 10.0,
            b_mt: 0.3,
            start_deg: 0.0,
            stop_deg: 360.0,
            step_deg: 30.0,
            gamma_mhz: None,
            gamma_range_mhz: None,
            layers: DEFAULT_LAYERS,
            plane: None,
        },
    )
    .unwrap();
    let points = &sweep.points;
    for i in 0..6 {
        let a = points[i].xi;
        let b = points[i + 6].xi;
        assert!((a - b).abs() <= 1e-10 * a.max(1e-300), "{} vs {}", a, b);
    }
}

#[test]
fn axial_sweep_is_mirror_symmetric_about_the_plane() {
    let sweep = angular_sweep(
        builtin_registry(),
        &SweepQuery {
            material: "er_linbo3".into(),
            concentration_ppm: 10.0,
            b_mt: 0.3,
            start_deg: 0.0,
            stop_deg: 180.0,
            step_deg: 15.0,
            gamma_mhz: None,
            gamma_range_mhz: None,
            layers: DEFAULT_LAYERS,
            plane: None,
        },
    )
    .unwrap();
    let points = &sweep.points;
    let n = points.len();
    for i in 0..n {
        let mirror = n - 1 - i;
        let a = points[i].xi;
        let b = points[mirror].xi;
        assert!((a - b).abs() <= 1e-10 * a.max(1e-300), "theta {} vs {}", points[i].angle_deg, points[mirror].angle_deg);
    }
}

#[test]
fn perturbative_warning_fires_only_when_coupling_competes_with_zeeman() {
    let reg = builtin_registry();
    // Reference conditions: no warning.
    let quiet = flipflop_rate(reg, &query("er_linbo3", 10.0, 0.0, 0.0)).unwrap();
    assert!(quiet.warnings.is_empty(), "{:?}", quiet.warnings);
    // Heavy doping at a weak field: pair coupling rivals the splitting.
    let mut loud_query = query("er_linbo3", 1000.0, 0.0, 0.0);
    loud_query.field.magnitude_mt = 0.05;
    let loud = flipflop_rate(reg, &loud_query).unwrap();
    assert_eq!(loud.warnings.len(), 1, "{:?}", loud.warnings);
    assert!(loud.warnings[0].contains("perturbative"));
}

#[test]
fn sweep_points_match_single_rate_queries() {
    let reg = builtin_registry();
    let sweep = angular_sweep(
        reg,
        &SweepQuery {
            material: "er_cawo4".into(),
            concentration_ppm: 50.0,
            b_mt: 0.3,
            start_deg: 0.0,
            stop_deg: 90.0,
            step_deg: 15.0,
            gamma_mhz: Some(3.0),
            gamma_range_mhz: Some([2.8, 6.0]),
            layers: DEFAULT_LAYERS,
            plane: None,
        },
    )
    .unwrap();
    for point in &sweep.points {
        let mut q = query("er_cawo4", 50.0, 0.0, point.angle_deg);
        q.gamma_mhz = Some(3.0);
        q.gamma_range_mhz = Some([2.8, 6.0]);
        let single = flipflop_rate(reg, &q).unwrap();
        assert_eq!(single.t_ff_s, point.t_ff_s);
        assert_eq!(single.t_low_s, point.t_low_s);
        assert_eq!(single.t_high_s, point.t_high_s);
        assert_eq!(single.xi, point.xi);
    }
}
