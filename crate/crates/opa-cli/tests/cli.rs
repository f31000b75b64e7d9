//! End-to-end subcommand runs through the argument parser: exit codes, file
//! layout, and output determinism.

use std::fs;
use std::path::Path;

use opa_cli::run_cli;

fn run(args: &[&str]) -> i32 {
    let argv = std::iter::once("opa").chain(args.iter().copied());
    run_cli(argv)
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.conf");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

/// A small but well-resolved setup used by most tests.
const SMALL: &str = "grid.n_points = 257\n\
                     scan.divergence_mrad = 3.8\n\
                     scan.angles_mrad = 0:10:11\n\
                     scan.divergences_mrad = 1,2,4\n";

#[test]
fn missing_config_file_is_a_config_error() {
    let code = run(&["scan", "--config", "/nonexistent/opa.conf", "--quiet"]);
    assert_eq!(code, 1);
}

#[test]
fn invalid_config_value_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "physics.gain = -1\n");
    let code = run(&["scan", "--config", &cfg, "--quiet"]);
    assert_eq!(code, 1);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["scan", "--frobnicate"]), 1);
    assert_eq!(run(&["--help"]), 0);
}

#[test]
fn undersized_grid_override_is_rejected() {
    assert_eq!(run(&["scan", "--grid-size", "2", "--quiet"]), 1);
}

#[test]
fn scan_writes_contracted_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    let code = run(&["scan", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(code, 0);

    let text = fs::read_to_string(out.join("scan.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "central_angle_mrad,visibility,n_max,n_min");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        let vis: f64 = fields[1].parse().unwrap();
        assert!((0.0..=1.0).contains(&vis));
        let hi: f64 = fields[2].parse().unwrap();
        let lo: f64 = fields[3].parse().unwrap();
        assert!(hi >= lo && lo > 0.0);
    }
    // angle axis is echoed in mrad
    assert!(rows[0].starts_with("0,"));
    assert!(rows[10].starts_with("10,"));
}

#[test]
fn amplify_csv_has_closed_form_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    let code = run(&["amplify", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(code, 0);

    let text = fs::read_to_string(out.join("amplify.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,c_abs,visibility,n_max,n_min,optimal_phase");
    let fields: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    let (a, c_abs, vis, n_max, n_min) = (fields[0], fields[1], fields[2], fields[3], fields[4]);
    assert!((vis - c_abs / a).abs() < 1e-12);
    assert!((n_max - (a + c_abs)).abs() < 1e-9 * n_max);
    assert!((n_min - (a - c_abs)).abs() < 1e-9 * n_max);
}

#[test]
fn json_outputs_use_versioned_envelope() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    let code = run(&[
        "scan", "--config", &cfg, "--out", out.to_str().unwrap(), "--format", "json", "--quiet",
    ]);
    assert_eq!(code, 0);

    let text = fs::read_to_string(out.join("scan.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["config"]["physics.gain"], 3.2);
    let data = &doc["data"];
    assert_eq!(data["central_angle_mrad"].as_array().unwrap().len(), 11);
    assert_eq!(data["visibility"].as_array().unwrap().len(), 11);
    assert!(data["fwhm_mrad"].as_f64().is_some());
}

#[test]
fn map_csv_carries_both_axes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "grid.n_points = 257\n\
         scan.angles_mrad = 0,2,4\n\
         scan.divergences_mrad = 1,2\n",
    );
    let out = tmp.path().join("out");
    let code = run(&["map", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(code, 0);

    let text = fs::read_to_string(out.join("map.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    // header row: empty corner cell, then the angle axis in mrad
    assert_eq!(lines[0], ",0,2,4");
    for (row, d) in lines[1..].iter().zip(["1", "2"]) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        assert_eq!(fields[0], d);
        for v in &fields[1..] {
            let vis: f64 = v.parse().unwrap();
            assert!((0.0..=1.0).contains(&vis));
        }
    }
}

#[test]
fn schmidt_csv_has_weight_and_mode_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "grid.n_points = 257\nschmidt.modes = 3\n");
    let out = tmp.path().join("out");
    let code = run(&["schmidt", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(code, 0);

    let text = fs::read_to_string(out.join("schmidt.csv")).unwrap();
    let mut sections = text.split("\n\n");
    let weights = sections.next().unwrap();
    let modes = sections.next().unwrap();
    assert!(weights.starts_with("mode,weight,gain,parity"));
    let sum: f64 = weights
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!(sum > 0.999 - 1e-6 && sum <= 1.0 + 1e-12);
    assert!(modes.starts_with("q,u0_re,u0_im,u1_re,u1_im,u2_re,u2_im"));
    assert_eq!(modes.trim_end().lines().count(), 258);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run(&["scan", "--config", &cfg, "--out", a.to_str().unwrap(), "--quiet"]), 0);
    assert_eq!(run(&["scan", "--config", &cfg, "--out", b.to_str().unwrap(), "--quiet"]), 0);
    assert_eq!(
        fs::read(a.join("scan.csv")).unwrap(),
        fs::read(b.join("scan.csv")).unwrap()
    );
}

#[test]
fn out_flag_beats_config_output_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let ignored = tmp.path().join("ignored");
    let doc = format!("{SMALL}output.dir = {}\n", ignored.display());
    let cfg = write_config(tmp.path(), &doc);
    let out = tmp.path().join("flagged");
    assert_eq!(run(&["amplify", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]), 0);
    assert!(out.join("amplify.csv").exists());
    assert!(!ignored.exists());
}
