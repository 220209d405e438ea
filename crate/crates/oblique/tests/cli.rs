mod common;

use common::*;
use oblique_core::qmat::{ComplexMatrix, DensityMatrix, StateVector};
use oblique_core::states::{build_zod, ZodSpec};

#[test]
fn dual_basis_of_zero_plus() {
    let dir = tempfile::tempdir().unwrap();
    let b = write_basis(dir.path(), "b.json", &zero_plus());
    let (code, out, _) = run(&["dual-basis", s(&b)]);
    assert_eq!(code, 0);
    assert_schema("dual-basis.schema.json", &out);
    let duals = &out["duals"];
    assert_eq!(duals[0][0][0].as_f64().unwrap(), 1.0);
    assert_eq!(duals[0][1][0].as_f64().unwrap(), -1.0);
    assert!((duals[1][1][0].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert!(out["biorthogonality_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn dependent_basis_exits_one_with_condition() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dep.json");
    std::fs::write(
        &p,
        r#"{"v":1,"dim":2,"vectors":[[[1,0],[0,0]],[[0,1],[0,0]]]}"#,
    )
    .unwrap();
    let (code, out, err) = run(&["dual-basis", s(&p)]);
    assert_eq!(code, 1);
    assert!(out.is_null());
    assert!(err.contains("condition"), "{err}");
}

#[test]
fn state_length_mismatch_reports_expected_length() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("short.json");
    std::fs::write(&p, r#"{"v":1,"dims":[2,2],"data":[[1,0],[0,0],[0,0]]}"#).unwrap();
    let (code, _, err) = run(&["measure", "discord", s(&p)]);
    assert_eq!(code, 1);
    assert!(err.contains("16"), "{err}");
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(raw(&["measure"]).status.code(), Some(1));
    assert_eq!(raw(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(raw(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "bell.json", &bell());
    assert_eq!(
        raw(&["measure", "no-such-measure", s(&p)]).status.code(),
        Some(1)
    );
    assert_eq!(
        raw(&["measure", "discord", s(&p), "--restarts", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn geometric_discord_of_bell() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "bell.json", &bell());
    let (code, out, _) = run(&["measure", "discord-geo", s(&p), "--restarts", "8"]);
    assert_eq!(code, 0);
    assert_schema("measure.schema.json", &out);
    assert_eq!(out["measure"], "discord_geo");
    assert_eq!(out["units"], "hs_squared");
    assert!((out["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
}

#[test]
fn orthonormal_oblique_info_discord_of_bell() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "bell.json", &bell());
    let (code, out, _) = run(&["measure", "d-o", s(&p), "--orthonormal", "--restarts", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out["config"]["orthonormal_only"], true);
    assert!((out["value"].as_f64().unwrap() - 1.0).abs() < 1e-3);
}

fn zod_state() -> DensityMatrix {
    let spec = ZodSpec {
        basis: zero_plus(),
        weights: vec![0.3, 0.7],
        conditionals: vec![
            DensityMatrix::new(vec![3], ComplexMatrix::from_real_diagonal(&[0.5, 0.5, 0.0]))
                .unwrap(),
            DensityMatrix::pure(vec![3], &StateVector::basis(3, 2)).unwrap(),
        ],
    };
    build_zod(&spec).unwrap().state
}

#[test]
fn geometric_oblique_discord_of_a_zod_state_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "zod.json", &zod_state());
    let (code, out, _) = run(&["measure", "d-go", s(&p), "--restarts", "8"]);
    assert_eq!(code, 0);
    assert!(out["value"].as_f64().unwrap() <= 1e-7, "{}", out["value"]);
}

#[test]
fn measure_output_is_deterministic_under_seed() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "zod.json", &zod_state());
    let args = ["measure", "d-go1", s(&p), "--restarts", "4", "--seed", "17"];
    let a = raw(&args);
    let b = raw(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = raw(&["measure", "d-go1", s(&p), "--restarts", "4", "--seed", "18"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn global_measure_on_single_subsystem_is_an_arity_error() {
    let dir = tempfile::tempdir().unwrap();
    let rho = DensityMatrix::maximally_mixed(vec![4]).unwrap();
    let p = write_state(dir.path(), "single.json", &rho);
    for m in ["discord-global", "d-o-global", "discord"] {
        let (code, _, err) = run(&["measure", m, s(&p)]);
        assert_eq!(code, 1, "{m}");
        assert!(!err.is_empty());
    }
}

#[test]
fn config_precedence_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "bell.json", &bell());
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"restarts":3,"seed":5,"initial_scale":0.2}"#).unwrap();
    let (code, out, _) = run(&[
        "measure",
        "discord",
        s(&p),
        "--config",
        s(&cfg),
        "--seed",
        "9",
    ]);
    assert_eq!(code, 0);
    let c = &out["config"];
    assert_eq!(c["restarts"], 3);
    assert_eq!(c["seed"], 9);
    assert_eq!(c["initial_scale"], 0.2);
    assert_eq!(c["max_iterations"], 2000);
    assert_eq!(out["per_restart"].as_array().unwrap().len(), 3);

    std::fs::write(&cfg, r#"{"restarts":3,"bogus":1}"#).unwrap();
    assert_eq!(
        raw(&["measure", "discord", s(&p), "--config", s(&cfg)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let b = write_basis(dir.path(), "b.json", &zero_plus());
    let dest = dir.path().join("out.json");
    let out = raw(&["dual-basis", s(&b), "--output", s(&dest)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dest).unwrap()).unwrap();
    assert_eq!(v["command"], "dual-basis");
}

#[test]
fn check_zod_with_the_construction_basis() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "zod.json", &zod_state());
    let b = write_basis(dir.path(), "b.json", &zero_plus());
    let (code, out, _) = run(&["check-zod", s(&p), "--basis", s(&b)]);
    assert_eq!(code, 0);
    assert_schema("check-zod.schema.json", &out);
    assert_eq!(out["verdict"], true);
    let parts = out["decomposition"].as_array().unwrap();
    assert_eq!(parts.len(), 2);
    let w: Vec<f64> = parts
        .iter()
        .map(|p| p["weight"].as_f64().unwrap())
        .collect();
    assert!(
        (w[0] - 0.3).abs() < 1e-10 && (w[1] - 0.7).abs() < 1e-10,
        "{w:?}"
    );
}

#[test]
fn check_zod_negative_verdicts_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "bell.json", &bell());
    let b = write_basis(dir.path(), "b.json", &zero_plus());
    let (code, out, _) = run(&["check-zod", s(&p), "--basis", s(&b)]);
    assert_eq!(code, 0);
    assert_eq!(out["verdict"], false);
    assert!(out["decomposition"].is_null());
    let (code, out, _) = run(&["check-zod", s(&p), "--search", "8"]);
    assert_eq!(code, 0);
    assert_schema("check-zod.schema.json", &out);
    assert_eq!(out["verdict"], false);
    assert!(out["residual"].as_f64().unwrap() > 0.1);
    assert_eq!(out["per_start_residuals"].as_array().unwrap().len(), 8);
}

#[test]
fn check_zod_search_finds_the_construction() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(dir.path(), "zod.json", &zod_state());
    let (code, out, _) = run(&["check-zod", s(&p), "--search", "16"]);
    assert_eq!(code, 0);
    assert_eq!(out["verdict"], true, "{}", out["residual"]);
}

#[test]
fn hierarchy_demo_pattern_and_guard() {
    let (code, out, _) = run(&["hierarchy-demo", "--starts", "2000"]);
    assert_eq!(code, 0);
    assert_schema("hierarchy-demo.schema.json", &out);
    assert_eq!(out["pattern_ok"], true);
    let observed: Vec<_> = out["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["observed"].clone())
        .collect();
    assert_eq!(
        observed,
        [
            serde_json::json!(["zero", "zero"]),
            serde_json::json!(["positive", "zero"]),
            serde_json::json!(["positive", "positive"])
        ]
    );

    let (code, out, _) = run(&["hierarchy-demo", "--starts", "100", "--tolerance", "1e-20"]);
    assert_eq!(code, 3);
    assert_eq!(out["pattern_ok"], false);
}
