use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn tlms(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlms"))
        .args(args)
        .current_dir(dir)
        .env_remove("TLMS_TOL")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|_| panic!("stderr is not JSON: {text}"))
}

const FLAT: &str = r#"{"h": {"terms": [{"n": 1, "a": {"re": 1, "im": 0}}]}}"#;

const PAPER_CURVE: &str = r#"{
  "w": {"coeffs": [{"n": 1, "re": 1, "im": 0}]},
  "third": {"coeffs": [{"n": 1, "re": 0, "im": 0.5}, {"n": -1, "re": 0, "im": -0.5}]}
}"#;

#[test]
fn eval_flat_plane() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write(dir.path(), "flat.json", FLAT);
    let out = tlms(dir.path(), &["eval", "--surface", &flat, "--at", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 0 0\n");
}

#[test]
fn bjorling_degenerate_warns_under_warn_policy() {
    let dir = tempfile::tempdir().unwrap();
    let tangent = r#"{
      "w": {"coeffs": [{"n": 1, "re": 1, "im": 0}]},
      "third": {"coeffs": [{"n": 0, "re": 1, "im": 0}]}
    }"#;
    let tangent = write(dir.path(), "tangent.json", tangent);
    let helix = golden("null_helix.json");
    let helix = helix.to_str().unwrap();
    let out = tlms(
        dir.path(),
        &["bjorling", "--gamma", helix, "--field", &tangent, "--policy", "warn"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stderr_json(&out)["warning"], "TotallyDegenerate");
    let surface: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(surface["h"]["terms"][0]["a"]["re"], 0.5);

    let quiet = tlms(
        dir.path(),
        &["--quiet", "bjorling", "--gamma", helix, "--field", &tangent, "--policy", "warn"],
    );
    assert_eq!(quiet.status.code(), Some(0));
    assert!(quiet.stderr.is_empty());

    let strict = tlms(dir.path(), &["bjorling", "--gamma", helix, "--field", &tangent]);
    assert_eq!(strict.status.code(), Some(4));
    assert_eq!(stderr_json(&strict)["error"], "TotallyDegenerate");
}

#[test]
fn bjorling_precondition_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write(dir.path(), "c.json", PAPER_CURVE);
    let out = tlms(dir.path(), &["bjorling", "--gamma", &curve, "--field", &curve]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "NotLightlikeCurve");
}

#[test]
fn non_real_third_component_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"w": {"coeffs": []}, "third": {"coeffs": [{"n": 1, "re": 0, "im": 1}]}}"#,
    );
    let out = tlms(dir.path(), &["bjorling", "--gamma", &bad, "--field", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "RealnessViolation");
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let out = tlms(dir.path(), &["eval", "--nonsense"]);
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(stderr_json(&out)["error"], "UsageError");
    assert_eq!(tlms(dir.path(), &["frobnicate"]).status.code(), Some(64));
    assert_eq!(tlms(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = tlms(dir.path(), &["eval", "--surface", "nope.json", "--at", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "IoError");
}

#[test]
fn interp_curves_recovers_planted_radius() {
    let dir = tempfile::tempdir().unwrap();
    let helix = golden("null_helix.json");
    let field = golden("stretched_tangent.json");
    let out = tlms(
        dir.path(),
        &[
            "bjorling",
            "--gamma",
            helix.to_str().unwrap(),
            "--field",
            field.to_str().unwrap(),
            "--out",
            "s.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let s = tlms::io::load_surface(&dir.path().join("s.json")).unwrap();
    let inner = tlms::io::curve_to_json(&s.restrict_rho(1.0).unwrap()).unwrap();
    let outer = tlms::io::curve_to_json(&s.restrict_rho(1.7).unwrap()).unwrap();
    let alpha = write(dir.path(), "alpha.json", &tlms::io::to_pretty(&inner));
    let gamma = write(dir.path(), "gamma.json", &tlms::io::to_pretty(&outer));

    let out = tlms(
        dir.path(),
        &[
            "interp-curves", "--gamma", &gamma, "--alpha", &alpha, "--allow-log", "--rmin",
            "1.01", "--rmax", "3", "--out", "best.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = tlms::io::read_json(&dir.path().join("best.json")).unwrap();
    let best = &report["candidates"][0];
    assert!((best["r"].as_f64().unwrap() - 1.7).abs() < 1e-3);
    assert_eq!(best["feasible"], true);
    assert!(report["surface"].is_object());

    let out = tlms(
        dir.path(),
        &["interp-curves", "--gamma", &gamma, "--alpha", &alpha, "--rmax", "3"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "MeanMismatch");
}

#[test]
fn interp_point_without_minimal_radius_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write(dir.path(), "c.json", PAPER_CURVE);
    let out = tlms(
        dir.path(),
        &["interp-point", "--gamma", &curve, "--point", "0,0,0", "--grid", "50"],
    );
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["surface"].is_null());
    assert!(!report["candidates"].as_array().unwrap().is_empty());
    assert!(report["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["feasible"] == false));
}

#[test]
fn interp_point_with_mean_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write(dir.path(), "c.json", PAPER_CURVE);
    let out = tlms(dir.path(), &["interp-point", "--gamma", &curve, "--point", "1,-2,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "InfeasibleMean");
}

#[test]
fn verify_flat_plane_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write(dir.path(), "flat.json", FLAT);
    let out = tlms(dir.path(), &["verify", "--surface", &flat, "--grid", "5x9"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["classification"], "Timelike");
    assert_eq!(report["grid"]["n_rho"], 5);
    assert_eq!(report["singular_points"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_tolerance_from_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    // F = (x, y, x) is not conformal: residual 1
    let tilted = write(
        dir.path(),
        "tilted.json",
        r#"{"h": {"terms": [{"n": 1, "a": {"re": 1, "im": 0}}]},
            "omega": {"terms": [{"n": 1, "a": {"re": 0.5, "im": 0}, "b": {"re": 0, "im": 0}},
                                {"n": -1, "a": {"re": 0, "im": 0}, "b": {"re": 0.5, "im": 0}}]}}"#,
    );
    let args = ["verify", "--surface", tilted.as_str(), "--grid", "5x9"];
    assert_eq!(tlms(dir.path(), &args).status.code(), Some(5));
    let mut loose = vec!["--tol", "2"];
    loose.extend_from_slice(&args);
    assert_eq!(tlms(dir.path(), &loose).status.code(), Some(0));
    let via_env = Command::new(env!("CARGO_BIN_EXE_tlms"))
        .args(args)
        .current_dir(dir.path())
        .env("TLMS_TOL", "2")
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(0));
}

#[test]
fn mesh_writes_obj_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write(dir.path(), "flat.json", FLAT);
    let out = tlms(
        dir.path(),
        &[
            "mesh", "--surface", &flat, "--grid", "2x2", "--rho", "1,2", "--theta", "0,1",
            "--obj", "m.obj", "--csv", "m.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let obj = std::fs::read_to_string(dir.path().join("m.obj")).unwrap();
    assert!(obj.starts_with("v 1 0 0\n"));
    assert!(obj.ends_with("f 1 2 4 3\n"));
    assert!(!obj.contains('\r'));
    let csv = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("1,0,1,0,0,-1"));

    let outside = tlms(
        dir.path(),
        &["mesh", "--surface", &flat, "--rho", "0.1,2", "--obj", "x.obj"],
    );
    assert_eq!(outside.status.code(), Some(2));
    assert_eq!(stderr_json(&outside)["error"], "GridOutsideDomain");
}

#[test]
fn surface_output_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(golden("surface.json")).unwrap();
    let s = tlms::io::load_surface(&golden("surface.json")).unwrap();
    tlms::io::save_json(&dir.path().join("again.json"), &tlms::io::surface_to_json(&s).unwrap())
        .unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("again.json")).unwrap(), text);
}

#[test]
fn selftest_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = tlms(dir.path(), &["--seed", "7", "selftest", "--cases", "50"]);
    let b = tlms(dir.path(), &["--seed", "7", "selftest", "--cases", "50"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
}
