use std::path::{Path, PathBuf};
use std::process::Command;

fn lab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spheres-lab"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn scene(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenes")
        .join(name)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn passing_commands_exit_zero() {
    let d = scene("duality.json");
    let d = d.to_str().unwrap();
    for cmd in ["group", "build", "homology", "bredon", "tor", "duality"] {
        let (code, out, err) = lab(&[cmd, d]);
        assert_eq!(code, 0, "{cmd}: {err}");
        assert!(!out.is_empty());
    }
}

#[test]
fn csv_output_has_a_header() {
    let d = scene("duality.json");
    let (code, out, _) = lab(&["tor", d.to_str().unwrap(), "--format", "csv", "--kmax", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("coefficient,k,bar,cobar"));
}

#[test]
fn whole_group_is_gated() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "whole.json",
        r#"{"schema": "equirep/1", "group": {"cyclic": 2},
            "complexes": {"c": {"builder": "linear_sphere", "weights": [1]}},
            "experiments": [{"kind": "stabilize", "name": "w", "complex": "c", "subgroup": "whole",
                             "n_range": [1, 1]}]}"#,
    );
    let (code, _, _) = lab(&["stabilize", &p]);
    assert_eq!(code, 2);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_schema = write(
        dir.path(),
        "a.json",
        r#"{"schema": "other/9", "group": {"cyclic": 2}, "complexes": {}}"#,
    );
    let not_json = write(dir.path(), "b.json", "not json");
    let cycle = write(
        dir.path(),
        "c.json",
        r#"{"schema": "equirep/1", "group": {"cyclic": 2},
            "complexes": {"a": {"builder": "sd", "of": "b"}, "b": {"builder": "sd", "of": "a"}}}"#,
    );
    for p in [&bad_schema, &not_json, &cycle] {
        let (code, _, err) = lab(&["build", p]);
        assert_eq!(code, 2, "{p}");
        assert!(err.starts_with("error:"));
    }
    let d = scene("duality.json");
    let (code, _, _) = lab(&["homology", d.to_str().unwrap(), "--coeff", "Q"]);
    assert_eq!(code, 2);
    let (code, _, _) = lab(&["build", "/nonexistent/scene.json"]);
    assert_eq!(code, 2);
}

#[test]
fn golden_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let golden = write(dir.path(), "g.json", "{}");
    let d = scene("duality.json");
    let (code, _, err) = lab(&["group", d.to_str().unwrap(), "--golden", &golden]);
    assert_eq!(code, 1);
    assert!(err.contains("differs"));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let d = scene("duality.json");
    let (code, stdout, _) = lab(&["group", d.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v.is_object());
}
