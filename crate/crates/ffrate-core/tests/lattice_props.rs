//! Lattice-sum structure and density scaling laws.

use ffrate_core::lattice::{lattice_sum, pair_coupling_scale_hz, spin_density};
use ffrate_core::registry::builtin_registry;
use proptest::prelude::*;

proptest! {
    /// Growing the ball only adds positive contributions.
    #[test]
    fn coefficient_is_monotone_in_layers(layers in 1u32..12) {
        let a = lattice_sum(layers).unwrap().coefficient;
        let b = lattice_sum(layers + 1).unwrap().coefficient;
        prop_assert!(b > a);
        prop_assert!(b < 8.5, "series converges well below 8.5");
    }

    /// Shell bookkeeping: counts are even (inversion symmetry), radii are
    /// complete from 1 to layers², and the shells sum to the coefficient.
    #[test]
    fn shells_are_consistent(layers in 1u32..9) {
        let result = lattice_sum(layers).unwrap();
        prop_assert_eq!(result.shells.len(), (layers * layers) as usize);
        for (i, shell) in result.shells.iter().enumerate() {
            prop_assert_eq!(shell.s as usize, i + 1);
            prop_assert!(shell.count % 2 == 0, "s = {}: count {}", shell.s, shell.count);
            prop_assert!(shell.contribution >= 0.0);
        }
        let total: f64 = result.shells.iter().map(|s| s.contribution).sum();
        prop_assert!((total - result.coefficient).abs() <= 1e-12 * result.coefficient);
    }

    /// n_s is exactly linear in concentration and isotopic fraction.
    #[test]
    fn density_is_bilinear(
        ppm in 0.001f64..1e4,
        cation in 1e27f64..1e29,
        fraction in 0.01f64..1.0,
        k in 0.1f64..10.0,
    ) {
        let base = spin_density(ppm, cation, fraction).unwrap().n_s_per_m3;
        let scaled = spin_density(k * ppm, cation, fraction).unwrap().n_s_per_m3;
        prop_assert!((scaled - k * base).abs() <= 1e-12 * scaled.abs());

        let half = spin_density(ppm, cation, fraction / 2.0).unwrap().n_s_per_m3;
        prop_assert!((2.0 * half - base).abs() <= 1e-12 * base.abs());
    }

    /// The pair coupling scale is quadratic in g and linear in density.
    #[test]
    fn pair_scale_scaling_laws(g in 0.1f64..20.0, n_s in 1e20f64..1e26, k in 0.5f64..4.0) {
        let base = pair_coupling_scale_hz(g, n_s);
        prop_assert!((pair_coupling_scale_hz(k * g, n_s) - k * k * base).abs() <= 1e-12 * base * k * k);
        prop_assert!((pair_coupling_scale_hz(g, k * n_s) - k * base).abs() <= 1e-12 * base * k);
    }
}

#[test]
fn lattice_sum_matches_floating_point_enumeration() {
    // Independent route: accumulate 1/|r|^6 from explicit vector norms
    // instead of integer shell bookkeeping.
    let layers = 6i64;
    let mut total = 0.0;
    for m in -layers..=layers {
        for n in -layers..=layers {
            for p in -layers..=layers {
                let r2 = (m * m + n * n + p * p) as f64;
                if r2 > 0.0 && r2 <= (layers * layers) as f64 {
                    let r = (((m * m) as f64).sqrt().powi(2) + (n * n + p * p) as f64).sqrt();
                    total += 1.0 / r.powi(6);
                }
            }
        }
    }
    let result = lattice_sum(layers as u32).unwrap();
    assert!((total - result.coefficient).abs() <= 1e-12 * result.coefficient);
}

#[test]
fn dominant_tensor_pair_scale_band_at_reference_concentration() {
    // er_yso_site1 at 10 ppm with the largest principal value: the mean
    // nearest-partner coupling lands in the hundreds-of-kHz range, far below
    // the MHz Zeeman splittings used in practice.
    let material = builtin_registry().get("er_yso_site1").unwrap();
    let n_s = material.spin_density(10.0).unwrap().n_s_per_m3;
    let scale = pair_coupling_scale_hz(14.64, n_s);
    assert!(
        (2e4..2e6).contains(&scale),
        "pair scale {scale:.3e} Hz outside [20 kHz, 2 MHz]"
    );
    assert!((scale - 203.6e3).abs() / 203.6e3 < 0.01, "frozen reference 203.6 kHz");
}
