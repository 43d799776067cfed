//! Behavior tests for the hausfill binary: config merging, override
//! precedence, error mapping, and artifact writing.

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hausfill"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be utf-8")
}

#[test]
fn empty_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.conf");
    fs::write(&path, "# comments only\n\n").unwrap();
    let out = run(&["fill", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("error[config-invalid]"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn missing_required_keys_are_config_errors() {
    let out = run(&["measure", "--set", "cantor:4", "--gauge", "power:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing required key \"deltas\""));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.conf");
    fs::write(&path, "set=cantor:10\ndepth=3..10\nwrong=1\n").unwrap();
    let out = run(&["dimension", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown key \"wrong\""));
}

#[test]
fn malformed_config_lines_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    fs::write(&path, "set cantor:10\n").unwrap();
    let out = run(&["dimension", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("expected key=value"));
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dim.conf");
    fs::write(&path, "set=cantor:10\ndepth=3..8\n").unwrap();
    let out = run(&[
        "dimension",
        "--config",
        path.to_str().unwrap(),
        "--depth",
        "3..10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("config.depth = 3..10"),
        "resolved config should show the override"
    );
    assert!(
        text.contains("output.scale.8.count = 1024"),
        "override should reach depth 10"
    );
}

#[test]
fn reports_embed_defaults_in_the_resolved_config() {
    let out = run(&["hfun", "check", "--gauge", "power:0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in [
        "config.command = hfun check",
        "config.format = report",
        "config.gauge = power:0.5",
        "config.levels = 24",
        "config.t_min = 0.000001",
    ] {
        assert!(text.contains(line), "missing {line:?} in:\n{text}");
    }
}

#[test]
fn dimension_csv_carries_the_slope() {
    let out = run(&[
        "dimension",
        "--set",
        "cantor:10",
        "--depth",
        "3..10",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text
        .lines()
        .find(|l| !l.starts_with('#') && !l.starts_with("scale"))
        .expect("a data row");
    let slope: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((slope - 0.631).abs() < 0.01, "slope {slope}");
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.csv");
    let piped = run(&[
        "net", "--space", "square", "--levels", "3", "--format", "csv",
    ]);
    assert!(piped.status.success());
    let filed = run(&[
        "net",
        "--space",
        "square",
        "--levels",
        "3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(filed.status.success());
    assert!(stdout(&filed).is_empty(), "file mode should not print");
    let body = fs::read_to_string(&path).unwrap();
    // The file run resolves one extra key (out), so compare data rows only.
    let rows = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_string)
            .collect()
    };
    assert_eq!(rows(&body), rows(&stdout(&piped)));
    assert!(
        body.contains("# config.out ="),
        "file should embed the out path"
    );
}

#[test]
fn unknown_formats_are_rejected() {
    let out = run(&[
        "net", "--space", "square", "--levels", "3", "--format", "xml",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("format"));
}

#[test]
fn module_errors_keep_their_codes_and_exits() {
    let capacity = run(&[
        "fill",
        "--space",
        "circle",
        "--gauge",
        "power:0.05",
        "--levels",
        "4",
    ]);
    assert_eq!(capacity.status.code(), Some(9));
    assert!(stderr(&capacity).contains("error[capacity-exceeded]"));

    let resolution = run(&[
        "measure",
        "--set",
        "cantor:4",
        "--gauge",
        "power:1",
        "--deltas",
        "0.001,1e-14",
    ]);
    assert_eq!(resolution.status.code(), Some(5));
    assert!(stderr(&resolution).contains("error[resolution-exceeded]"));

    let invalid = run(&["blowup", "--s-dim", "1.5", "--depth", "8"]);
    assert_eq!(invalid.status.code(), Some(3));
    assert!(stderr(&invalid).contains("error[invalid-input]"));

    let net = run(&["net", "--space", "cantor:2:0.333", "--levels", "3"]);
    assert_eq!(net.status.code(), Some(2));
    assert!(stderr(&net).contains("error[config-invalid]"));
}

#[test]
fn blowup_csv_has_the_documented_columns() {
    let out = run(&[
        "blowup", "--s-dim", "0.5", "--depth", "8", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "depth,preimage_bound,image_box_count");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 9);
}

#[test]
fn fill_csv_traces_every_level() {
    let out = run(&[
        "fill", "--space", "square", "--gauge", "power:1", "--levels", "3", "--grid", "33",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,level,f,error_bound");
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 3 * 33);
    let first = rows[0].split(',').collect::<Vec<_>>();
    assert_eq!(first.len(), 4);
    assert_eq!(
        first[2].split(';').count(),
        2,
        "square images have two coordinates"
    );
}
