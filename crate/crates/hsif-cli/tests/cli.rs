//! End-to-end tests of the command surface: exit codes, file outputs,
//! byte stability and the worked-example verdicts.

use std::path::Path;
use std::process::Command;

fn hsif() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hsif"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const PSI_CONFIG: &str = r#"{
  "generators": {
    "psi": [{"coeff_re": 0.7071067811865476, "xbox": [0, 2], "ybox": [0, 1], "tbox": [0, 1]}]
  },
  "analyze": {"family": ["psi"], "bessel_bound": 1.0}
}"#;

const WIDE_PLANE_BOX_CONFIG: &str = r#"{
  "generators": {
    "phi": [{"coeff_re": 0.3333333333333333, "xbox": [0, 3], "ybox": [0, 3], "tbox": [0, 1]}]
  },
  "analyze": {"family": ["phi"]},
  "bracket": {"generator": "phi"},
  "gram": {"generators": ["phi"]}
}"#;

const CENTRAL_OVERLAP_CONFIG: &str = r#"{
  "generators": {
    "phi": [{"coeff_re": 1.0, "xbox": [0, 2], "ybox": [0, 1], "tbox": [0, 2]}]
  },
  "analyze": {"family": ["phi"]},
  "bracket": {"generator": "phi"},
  "dual": {"generator": "phi", "dual": "canonical"},
  "normalize": {"generator": "phi"}
}"#;

#[test]
fn analyze_psi_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "psi.json", PSI_CONFIG);
    let out = hsif()
        .args(["analyze", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("analyze_report.json")).unwrap();
    // the report is valid JSON and echoes the config verbatim
    let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(parsed["config_echo"].as_str().unwrap(), PSI_CONFIG);
    assert_eq!(parsed["result"]["orthonormality"]["verdict"], "pass");
}

#[test]
fn analyze_wide_plane_box_fails_with_condition_c_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "wide_box.json", WIDE_PLANE_BOX_CONFIG);
    let out = hsif()
        .args(["analyze", "--rmax", "400", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report = std::fs::read_to_string(dir.path().join("analyze_report.json")).unwrap();
    assert!(report.contains("condition-c"), "report lacks condition C witness");
}

#[test]
fn bracket_central_overlap_box_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "central_box.json", CENTRAL_OVERLAP_CONFIG);
    let out = hsif()
        .args(["bracket", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("bracket_phi.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "lambda,k,l,re_g,im_g,rmax,tail_bound");
    let mut checked = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let lambda: f64 = cols[0].parse().unwrap();
        let (k, l): (i64, i64) = (cols[1].parse().unwrap(), cols[2].parse().unwrap());
        assert_eq!((k, l), (0, 0), "this generator has no nontrivial plane overlaps");
        let re: f64 = cols[3].parse().unwrap();
        let closed = 8.0 * (std::f64::consts::PI * lambda).cos().powi(2);
        assert!((re - closed).abs() < 1e-3, "lambda {lambda}: {re} vs {closed}");
        checked += 1;
    }
    assert_eq!(checked, 64);

    // byte-identical on re-run
    let first = csv;
    let out2 = hsif()
        .args(["bracket", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out2.status.code(), Some(0));
    let second = std::fs::read_to_string(dir.path().join("bracket_phi.csv")).unwrap();
    assert_eq!(first, second);
    let r1 = std::fs::read_to_string(dir.path().join("bracket_report.json")).unwrap();
    let out3 = hsif()
        .args(["bracket", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out3.status.code(), Some(0));
    let r2 = std::fs::read_to_string(dir.path().join("bracket_report.json")).unwrap();
    assert_eq!(r1, r2);
}

#[test]
fn bracket_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "central_box.json", CENTRAL_OVERLAP_CONFIG);
    let out = hsif()
        .args(["bracket", "--format", "json", "--rmax", "100", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let data = std::fs::read_to_string(dir.path().join("bracket_phi.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&data).unwrap();
    assert_eq!(parsed["rows"].as_array().unwrap().len(), 1);
    assert_eq!(parsed["lambda"].as_array().unwrap().len(), 64);
}

#[test]
fn gram_wide_plane_box_lists_the_off_diagonal_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "wide_box.json", WIDE_PLANE_BOX_CONFIG);
    let out = hsif()
        .args(["gram", "--lattice", "1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("gram.csv")).unwrap();
    // <phi, L_(0,1,0) phi> = 2/9 at gamma difference (0,1,0)
    let hit = csv.lines().any(|line| {
        let cols: Vec<&str> = line.split(',').collect();
        cols.len() == 10
            && cols[0] == "0"
            && cols[1] == "0" && cols[2] == "0" && cols[3] == "0"
            && cols[5] == "0" && cols[6] == "1" && cols[7] == "0"
            && cols[8].parse::<f64>().map(|v| (v - 2.0 / 9.0).abs() < 1e-9).unwrap_or(false)
    });
    assert!(hit, "gram.csv lacks the 2/9 entry:\n{}", &csv[..csv.len().min(600)]);
}

#[test]
fn dual_canonical_refuses_non_frame() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "central_box.json", CENTRAL_OVERLAP_CONFIG);
    let out = hsif()
        .args(["dual", "--grid", "256", "--rmax", "400", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("dual_report.json")).unwrap();
    assert!(report.contains("refusal"));
    assert!(report.contains("not a frame"));
}

#[test]
fn normalize_central_overlap_box_emits_the_inverse_sqrt_multiplier() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "central_box.json", CENTRAL_OVERLAP_CONFIG);
    let out = hsif()
        .args(["normalize", "--rmax", "400", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("multiplier_phi.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let lambda: f64 = cols[0].parse().unwrap();
        let m: f64 = cols[1].parse().unwrap();
        let member: u8 = cols[4].parse().unwrap();
        if member == 1 {
            let expect = 1.0 / (8.0 * (std::f64::consts::PI * lambda).cos().powi(2)).sqrt();
            assert!((m - expect).abs() < 1e-3 * expect.max(1.0), "lambda {lambda}");
        }
    }
}

#[test]
fn schema_violations_exit_1_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"generators": {"f": [{"coeff_re": 1.0,
        "xbox": [0, 1], "ybox": [0, 1], "tbox": [0, 1], "extra_field": 3}]}}"#);
    let out = hsif()
        .args(["analyze", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "stderr: {err}");
    assert!(err.contains("extra_field"), "stderr: {err}");
    // missing config is also a usage error
    let out = hsif().args(["analyze"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
