use std::process::{Command, Output};

use godel_c60_cli::commands::{CAUSALITY_COLUMNS, CURRENT_COLUMNS, SPECTRUM_COLUMNS};
use godel_c60_cli::config::RunConfig;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_godel-c60"))
        .args(args)
        .env_remove("GODEL_C60_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data lines of a single-table CSV: header first.
fn csv_body(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn spectrum_reproduces_inertial_values() {
    let o = bin(&["spectrum", "--preset", "c60", "--nmax", "3", "--mmax", "2.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# godel-c60 "));
    let rows = csv_body(&text);
    assert_eq!(rows[0], SPECTRUM_COLUMNS);
    assert_eq!(rows.len() - 1, 4 * 6);
    let (n, m, ep, valid) = (
        col(&rows[0], "n"),
        col(&rows[0], "m"),
        col(&rows[0], "eps_plus"),
        col(&rows[0], "valid"),
    );
    for r in &rows[1..] {
        let a = r[n].parse::<f64>().unwrap() + r[m].parse::<f64>().unwrap().abs() + 0.5;
        let sub_gap = a < 1.5;
        assert_eq!(r[valid] == "true", !sub_gap);
        if !sub_gap {
            let want = (a * a - 2.25).sqrt();
            let got: f64 = r[ep].parse().unwrap();
            assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
        }
    }
}

#[test]
fn omega_sweep_multiplies_rows_in_order() {
    let o = bin(&["spectrum", "--nmax", "1", "--mmax", "1.5", "--sweep", "omega:0:0.1:5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_body(&stdout(&o));
    let w = col(&rows[0], "omega");
    assert_eq!(rows.len() - 1, 5 * 2 * 4);
    let omegas: Vec<f64> = rows[1..].iter().map(|r| r[w].parse().unwrap()).collect();
    assert!(omegas.windows(2).all(|p| p[0] <= p[1]));
}

#[test]
fn singular_rotation_reported_per_row() {
    let w = (1.0f64 / 8.0).sqrt().to_string();
    let o = bin(&["spectrum", "--nmax", "0", "--mmax", "0.5", "--omega", &w]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_body(&stdout(&o));
    let s = col(&rows[0], "status");
    assert!(rows[1..].iter().all(|r| r[s].contains("vanishes")));
}

#[test]
fn current_vanishes_at_zero_flux() {
    let o = bin(&[
        "current",
        "--nmax",
        "3",
        "--mmax",
        "5.5",
        "--sweep",
        "flux:0:6.283185307179586:5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_body(&stdout(&o));
    assert_eq!(rows[0], CURRENT_COLUMNS);
    assert_eq!(rows.len() - 1, 5);
    let i = col(&rows[0], "i_analytic");
    let first: f64 = rows[1][i].parse().unwrap();
    assert!(first.abs() < 1e-10, "{first}");
}

#[test]
fn causality_examples() {
    let run = |l2: &str| {
        let o = bin(&["causality", "--omega", "1", "--l2", l2]);
        assert_eq!(o.status.code(), Some(0));
        let rows = csv_body(&stdout(&o));
        assert_eq!(rows[0], CAUSALITY_COLUMNS);
        rows[1].clone()
    };
    let godel = run("0.5");
    assert_eq!(godel[2], "OneNoncausalRegion");
    let rc: f64 = godel[6].parse().unwrap();
    assert!((rc * 0.5f64.sqrt() - 0.881373587019543).abs() < 1e-10);
    assert_eq!(run("2")[2], "NoCTC");
    assert_eq!(run("-1")[2], "AlternatingRegions");
}

#[test]
fn causality_needs_vorticity() {
    let o = bin(&["causality", "--omega", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_rows_for_each_branch() {
    let o = bin(&["oracle", "--nmax", "1", "--mmax", "2.5", "--alpha", "1", "--flux", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_body(&stdout(&o));
    assert_eq!(rows.len() - 1, 2 * 6 * 2);
    let (m, n, d) = (col(&rows[0], "m"), col(&rows[0], "n"), col(&rows[0], "delta"));
    // |m| = 5/2 sits above the monopole threshold, where the closed form holds
    for r in rows[1..].iter().filter(|r| r[m].starts_with("2.5") && r[n] == "1") {
        assert!(r[d].parse::<f64>().unwrap() < 1e-6, "{r:?}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(bin(&["spectrum", "--bogus"]).status.code(), Some(1));
    assert_eq!(bin(&["nonsense"]).status.code(), Some(1));
    assert_eq!(bin(&["spectrum", "--mmax", "2"]).status.code(), Some(1));
    assert_eq!(bin(&["spectrum", "--alpha", "-1"]).status.code(), Some(1));
    assert_eq!(bin(&["spectrum", "--sweep", "omega:0:1"]).status.code(), Some(1));
    assert_eq!(bin(&["spectrum", "--jobs", "0"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn jobs_env_fallback() {
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_godel-c60"))
            .args(["spectrum", "--sweep", "omega:0:0.1:4"])
            .env("GODEL_C60_JOBS", jobs)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    let out_path = dir.path().join("out.json");
    std::fs::write(
        &cfg_path,
        "seed = 3\n[model]\nalpha = 0.9\nomega = 0.05\n[levels]\nn_max = 1\nm_max = 0.5\n",
    )
    .unwrap();
    let o = bin(&[
        "spectrum",
        "--config",
        cfg_path.to_str().unwrap(),
        "--omega",
        "0.02",
        "--format",
        "structured",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["config"]["model"]["alpha"], 0.9);
    assert_eq!(doc["config"]["model"]["omega"], 0.02);
    assert_eq!(doc["config"]["seed"], 3);
    assert_eq!(doc["tables"][0]["rows"].as_array().unwrap().len(), 2 * 2);
    assert!(doc["version"].as_str().unwrap().contains("schema"));

    // the embedded configuration parses back to the same run
    let text = toml::to_string(&doc["config"]).unwrap();
    let back = RunConfig::from_toml(&text).unwrap();
    assert_eq!(back.model.omega, 0.02);
    assert_eq!(back.levels.n_max, 1);
}

#[test]
fn preset_overrides_file_but_not_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(&cfg_path, "[model]\nalpha = 0.7\ndefects = 4\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec![
            "spectrum",
            "--config",
            cfg_path.to_str().unwrap(),
            "--nmax",
            "0",
            "--mmax",
            "0.5",
        ];
        args.extend_from_slice(extra);
        let rows = csv_body(&stdout(&bin(&args)));
        let (a, g) = (col(&rows[0], "alpha"), col(&rows[0], "g"));
        (rows[1][a].parse::<f64>().unwrap(), rows[1][g].parse::<f64>().unwrap())
    };
    assert_eq!(run(&[]), (0.7, 0.5));
    assert_eq!(run(&["--preset", "c60"]), (1.0, 1.5));
    assert_eq!(run(&["--preset", "c60", "--alpha", "0.8"]), (0.8, 1.5));
}

#[test]
fn bad_config_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.toml");
    std::fs::write(&cfg_path, "[model]\nalpha = 1.0\nomega = \"fast\"\n").unwrap();
    let o = bin(&["spectrum", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3") && err.contains("omega"), "{err}");
}

#[test]
fn same_inputs_same_bytes() {
    let args = [
        "current",
        "--omega",
        "0.07",
        "--sweep",
        "flux:0:3:7",
        "--format",
        "structured",
    ];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
}
