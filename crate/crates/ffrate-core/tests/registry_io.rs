//! Registry file round-trips and load-time diagnostics.

use ffrate_core::registry::{builtin_registry, Registry, RegistryError};

#[test]
fn save_and_load_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("materials.json");
    let reg = builtin_registry();
    reg.save(&path).unwrap();
    let back = Registry::load(&path).unwrap();
    assert_eq!(*reg, back);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = Registry::load("/nonexistent/registry.json").unwrap_err();
    assert!(matches!(err, RegistryError::Io(_)), "{err}");
}

#[test]
fn malformed_json_reports_position() {
    let err = Registry::from_json_str("{\"schema\": 1,\n  \"materials\": [,]\n}").unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, RegistryError::Parse(_)));
    assert!(msg.contains("line 2"), "diagnostic should carry a line: {msg}");
}

#[test]
fn duplicate_names_are_rejected() {
    let mut reg = builtin_registry().clone();
    let copy = reg.materials[0].clone();
    reg.materials.push(copy);
    let err = reg.validate().unwrap_err();
    assert!(matches!(err, RegistryError::DuplicateMaterial(name) if name == "er_yso_site1"));
}

#[test]
fn edited_file_that_breaks_a_gate_fails_to_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    let mut reg = builtin_registry().clone();
    // Claim a measured g-factor the tensor cannot reproduce.
    reg.materials[0].g_eff_checks[0].expected = 3.0;
    reg.materials[0].g_eff_checks[0].rel_tol = 0.05;
    std::fs::write(&path, reg.to_json_string()).unwrap();
    let err = Registry::load(&path).unwrap_err();
    match err {
        RegistryError::GEffCheckFailed { material, expected, .. } => {
            assert_eq!(material, "er_yso_site1");
            assert_eq!(expected, 3.0);
        }
        other => panic!("expected a g_eff gate failure, got {other}"),
    }
}

#[test]
fn custom_registry_with_matrix_tensor_loads() {
    // A matrix-form tensor equivalent to an axial principal form.
    let json = r#"{
        "schema": 1,
        "materials": [{
            "name": "demo",
            "g_tensor": {
                "value": { "matrix": [[8.38, 0.0, 0.0], [0.0, 8.38, 0.0], [0.0, 0.0, 1.25]] },
                "_source": "test fixture"
            },
            "cation_density_per_m3": { "value": 1.0e28, "_source": "test fixture" },
            "isotopic_fraction": { "value": 1.0, "_source": "test fixture" },
            "gamma_default_mhz": { "value": 5.0, "_source": "test fixture" },
            "gamma_range_mhz": { "value": [2.0, 6.0], "_source": "test fixture" },
            "sweep_frame": "ac_theta",
            "g_eff_checks": [
                { "phi_deg": 0.0, "theta_deg": 0.0, "expected": 1.25, "rel_tol": 0.001 }
            ]
        }]
    }"#;
    let reg = Registry::from_json_str(json).unwrap();
    let g = reg.get("demo").unwrap().g_tensor().unwrap();
    // Eigen-decomposition sorts ascending, so the axial value comes first.
    let p = g.principal();
    assert!((p[0] - 1.25).abs() < 1e-12 && (p[2] - 8.38).abs() < 1e-12, "{p:?}");
}

#[test]
fn builtin_sources_are_informative() {
    for material in &builtin_registry().materials {
        for source in [
            &material.g_tensor.source,
            &material.cation_density_per_m3.source,
            &material.isotopic_fraction.source,
            &material.gamma_default_mhz.source,
            &material.gamma_range_mhz.source,
        ] {
            assert!(source.len() > 10, "{}: source too thin: {source:?}", material.name);
        }
    }
}
