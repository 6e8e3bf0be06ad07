use std::fs;
use std::process::{Command, Output};

use antizeno_cli::output::{read_config, render_csv, render_json};
use antizeno_cli::{preset, run, ExperimentConfig, ExperimentKind, Format};

fn antizeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antizeno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn quick() -> Vec<&'static str> {
    vec!["--runs", "3", "--n-max", "20", "--omega-t1", "3.14159,6.28318"]
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let mut args = quick();
        args.extend(["--seed", "7", "--epsilon", "0,0.2", "--out", path.to_str().unwrap()]);
        let out = antizeno(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ta, tb) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(body(&ta), body(&tb));
    assert!(body(&ta).lines().count() > 1);
}

#[test]
fn different_seed_different_body() {
    let run_with = |seed: &str| {
        let mut args = quick();
        args.extend(["--seed", seed]);
        String::from_utf8(antizeno(&args).stdout).unwrap()
    };
    assert_ne!(body(&run_with("1")), body(&run_with("2")));
}

#[test]
fn zero_cutoff_is_rejected_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.csv");
    let out = antizeno(&["--n-max", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_max"));
    assert!(!path.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(antizeno(&["--preset", "fig9"]).status.code(), Some(2));
    assert_eq!(antizeno(&["--epsilon", "1.5"]).status.code(), Some(2));
    assert_eq!(antizeno(&["--format", "xml"]).status.code(), Some(2));
    // n_max = 3 cannot hold the g = ω ground state
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let out = antizeno(&["--n-max", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!path.exists());
    let out = antizeno(&["--runs", "2", "--n-max", "20", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn fig1_columns_and_fit() {
    let out = run(&preset("fig1").unwrap()).unwrap();
    assert_eq!(out.table.columns, ["g_over_omega", "p_e", "lambda_fit", "r_squared"]);
    assert_eq!(out.table.rows.len(), 101);
    assert!(out.table.rows[0][3] >= 0.999);
}

#[test]
fn metadata_round_trips() {
    for name in ["fig1", "fig3", "fig5", "fig6"] {
        let mut c = preset(name).unwrap();
        c.schedule.runs = 2;
        c.model.g.truncate(4);
        if let Some(s) = c.sweep.as_mut() {
            s.count = 3;
        }
        let out = run(&c).unwrap();
        assert_eq!(read_config(&render_csv(&out)).unwrap(), c, "{name} csv");
        assert_eq!(read_config(&render_json(&out)).unwrap(), c, "{name} json");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig {
        kind: ExperimentKind::Collapse,
        ..Default::default()
    };
    c.model.n_max = antizeno_cli::config::Cutoff::Fixed(20);
    c.schedule.omega_t1 = vec![3.0, 6.0];
    c.schedule.runs = 2;
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, toml::to_string(&c).unwrap()).unwrap();
    let out_path = dir.path().join("out.json");
    let out = antizeno(&[
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "99",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["metadata"]["seed"], 99);
    assert_eq!(doc["series"]["columns"][14], "collapse_rate");
    let back = read_config(&text).unwrap();
    assert_eq!(back.seed, 99);
    assert_eq!(back.output.format, Format::Json);
    assert_eq!(back.schedule.omega_t1, vec![3.0, 6.0]);
}

#[test]
fn stdout_when_no_path() {
    let out = antizeno(&["--preset", "fig1", "--n-max", "auto"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tool: antizeno"));
    assert!(text.contains("mode=auto"));
}
