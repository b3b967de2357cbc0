use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmc-darboux"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const SMALL: [&str; 4] = ["--nx", "12", "--ny", "32"];

#[test]
fn transform_succeeds_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["transform", "--mu", "0.25"];
    args.extend(SMALL);
    let out = run(dir.path(), &args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = json(&dir.path().join("summary.json"));
    assert_eq!(summary["seam"], "welded");
    assert!(dir.path().join("f_hat.obj").exists());
    assert!(dir.path().join("stamp.json").exists());
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[grid]\nnx = 8\nwidth = 3\n").unwrap();
    let out = run(
        dir.path(),
        &[
            "transform",
            "--mu",
            "0.25",
            "--config",
            cfg.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["exit_code"], 2);
}

#[test]
fn bad_parameter_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["transform", "--mu", "1"];
    args.extend(SMALL);
    let out = run(dir.path(), &args);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&dir.path().join("error.json"))["status"], "error");
}

#[test]
fn patch_round_trip_through_validate_and_transform() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let mut args = vec!["validate"];
    args.extend(SMALL);
    let out = run(&first, &args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let patch = first.join("patch.jsonl");
    let second = dir.path().join("b");
    let out = run(
        &second,
        &[
            "transform",
            "--mu",
            "0.25",
            "--patch",
            patch.to_str().unwrap(),
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = json(&second.join("summary.json"));
    assert!(summary["closed"].as_bool().unwrap());
}

#[test]
fn patch_with_short_normals_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["validate"];
    args.extend(SMALL);
    assert_eq!(run(dir.path(), &args).status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("patch.jsonl")).unwrap();
    let mut lines = text.lines();
    let mut bad = format!("{}\n", lines.next().unwrap());
    for line in lines {
        let mut v: Vec<f64> = serde_json::from_str(line).unwrap();
        for x in &mut v[4..8] {
            *x *= 0.9;
        }
        bad.push_str(&serde_json::to_string(&v).unwrap());
        bad.push('\n');
    }
    let path = dir.path().join("bad.jsonl");
    std::fs::write(&path, bad).unwrap();
    let out_dir = dir.path().join("out");
    let out = run(
        &out_dir,
        &[
            "transform",
            "--mu",
            "0.25",
            "--patch",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = json(&out_dir.join("error.json"));
    assert_eq!(err["kind"], "input");
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "spectral-scan",
        "--lo",
        "0.1",
        "--hi",
        "0.8",
        "--samples",
        "24",
    ];
    for sub in ["a", "b"] {
        assert_eq!(run(&dir.path().join(sub), &args).status.code(), Some(0));
    }
    for name in ["scan.csv", "scan.json", "plot_scan.py"] {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert!(a == b, "{name} differs between runs");
    }
    let mut stamps = ["a", "b"].map(|sub| json(&dir.path().join(sub).join("stamp.json")));
    for s in &mut stamps {
        s["settings"]["output"] = serde_json::Value::Null;
    }
    assert_eq!(stamps[0], stamps[1]);
}
