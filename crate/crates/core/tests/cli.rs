use std::path::Path;
use std::process::{Command, Output};

use periodic_susy::cli::read_spectrum;
use periodic_susy::exactnum::{int, parse_rational};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_periodic-susy")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn engineer_two_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&["engineer", "--gaps", "1,3", "--levels", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let tables = read_spectrum(&out.join("spectrum.json")).unwrap();
    assert_eq!(tables.len(), 2);
    let e1: Vec<_> = tables[0].energies();
    assert_eq!(e1, [0, 1, 4, 5, 8].map(int).to_vec());
    let e2 = tables[1].energies();
    assert_eq!(e2, [1, 4, 5, 8, 9].map(int).to_vec());

    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["alpha"], "1/4");
    assert_eq!(summary["superpotentials"][0]["pole_coeff"], "-1/4");
    assert_eq!(summary["superpotentials"][1]["pole_coeff"], "1/4");
    assert_eq!(summary["state_norms"].as_array().unwrap().len(), 10);

    let states = std::fs::read_to_string(out.join("states.csv")).unwrap();
    let mut lines = states.lines();
    assert_eq!(lines.next(), Some("#schema=1"));
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), 11);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2001);
    // center row: ψ_{2,0} diverges, odd states vanish
    let center: Vec<&str> = rows[1000].split(',').collect();
    assert_eq!(center[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(center[6], "inf");
    assert_eq!(center[2].parse::<f64>().unwrap(), 0.0);

    let pots = std::fs::read_to_string(out.join("potentials.csv")).unwrap();
    assert!(pots.lines().nth(1).unwrap() == "u,V1,V2");
}

#[test]
fn engineer_equal_gaps_notice() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["engineer", "--gaps", "2,2", "--levels", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("alpha = 0"));
    let summary = json(&dir.path().join("summary.json"));
    assert_eq!(summary["notices"].as_array().unwrap().len(), 1);
}

#[test]
fn engineer_three_gaps_goes_numerical() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["engineer", "--gaps", "1,2,3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("no closed form"));
    let r = json(&dir.path().join("riccati.json"));
    assert_eq!(r["solution"]["exploratory"], true);
}

#[test]
fn polys_table() {
    // γ = -1/2 + α with α = 1/4
    let o = run(&["polys", "--gamma", "-1/4", "--pmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("MISMATCH"));
    let row = text.lines().find(|l| l.starts_with("laguerre,-1/4,2,series,")).unwrap();
    let coeffs: Vec<_> = row.split(',').nth(4).unwrap().split(' ').map(|c| parse_rational(c).unwrap()).collect();
    assert_eq!(coeffs[0], parse_rational("21/32").unwrap());
    assert_eq!(text.lines().filter(|l| l.starts_with("hermite,")).count(), 15);
}

#[test]
fn riccati_two_gaps_converges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["riccati", "--gaps", "1,3", "--order", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&out);
    assert_eq!(r["solution"]["status"], "converged");
    let pole = r["solution"]["superpotentials"][0]["pole"].as_f64().unwrap();
    assert!((pole + 0.25).abs() < 1e-6);
}

#[test]
fn riccati_grid_ansatz() {
    let o = run(&["riccati", "--gaps", "2", "--ansatz", "grid", "--points", "81", "--tol", "1e-4"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["solution"]["superpotentials"][0]["kind"], "grid");
    assert!(r["solution"]["residual_norm"].as_f64().unwrap() < 1e-3);
}

#[test]
fn config_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.toml");
    std::fs::write(&cfg, "[engineer]\ngaps = [\"1\", \"5/2\"]\nlevels = 2\nout = \"res\"\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "engineer"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("res/summary.json").exists());

    std::fs::write(&cfg, "[engineer]\ngaps = \"1,2\"\nlevels = \"many\"\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "engineer"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config line 3"), "{}", stderr(&o));

    let o = run(&["riccati", "--gaps", "1,2", "--ansatz", "spline"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--ansatz"));

    let o = run(&["engineer"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gaps"));

    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = run(&["verify", "--pmax", "6", "--alpha-sweep", "3", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&report);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(r["alpha_sweep"].as_array().unwrap().len(), 3);

    // a large gap perturbation must break the intertwining check
    let o = run(&["verify", "--pmax", "4", "--perturb-gap", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("[FAIL] intertwining"));
}
