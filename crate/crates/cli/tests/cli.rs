use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BRIGHT: &str = r#"
name = "small"

[equation]
g1 = -1.0
g2 = -2.0

[oracle]
family = "bright"
a0 = 1.0
k = 4.0
x0 = -2.0

[grid]
length = 40.0
n_x = 200

[time]
dt = 1e-3
n_t = 50

[method]
p = 5
s = 3
"#;

fn psnlse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psnlse")).args(args).env("RUST_LOG", "off").output().unwrap()
}

fn write_plan(dir: &Path, text: &str) -> String {
    let path = dir.join("plan.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_cmd(cmd: &str, plan: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", plan, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    psnlse(&args)
}

fn csv_without_wall(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().clone();
    let wall = header.iter().position(|h| h == "wall_seconds");
    let mut rows = vec![header.iter().map(String::from).collect()];
    for rec in r.records() {
        let rec = rec.unwrap();
        rows.push(rec.iter().enumerate().filter(|(i, _)| Some(*i) != wall).map(|(_, f)| f.to_string()).collect());
    }
    rows
}

#[test]
fn stencil_prints_and_writes_weights() {
    let dir = TempDir::new().unwrap();
    let out = psnlse(&["stencil", "--p", "5", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("denominator 12"), "{text}");
    let rows = csv_without_wall(&dir.path().join("stencil.csv"));
    assert_eq!(rows[0], ["j", "weight", "denominator", "normalized"]);
    let ints: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(ints, ["-30", "16", "-1"]);
}

#[test]
fn even_stencil_order_is_a_config_error() {
    assert_eq!(psnlse(&["stencil", "--p", "4"]).status.code(), Some(1));
}

#[test]
fn unknown_key_exits_with_config_error() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), &BRIGHT.replace("[method]", "[method]\nstencil = 5"));
    let out = run_cmd("run", &plan, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stencil"));
}

#[test]
fn missing_config_file_exits_with_config_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.toml");
    let out = run_cmd("run", missing.to_str().unwrap(), &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_jobs_is_rejected() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), BRIGHT);
    assert_eq!(run_cmd("table", &plan, &dir.path().join("out"), &["--jobs", "0"]).status.code(), Some(1));
}

#[test]
fn runaway_step_exits_with_divergence() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), &BRIGHT.replace("dt = 1e-3\nn_t = 50", "dt = 0.5\nn_t = 400"));
    let out = run_cmd("run", &plan, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn run_writes_state_series_and_errors() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), BRIGHT);
    let out_dir = dir.path().join("out");
    assert!(run_cmd("run", &plan, &out_dir, &[]).status.success());
    for f in ["final_state.csv", "time_series.csv", "error_profile.csv"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let state = csv_without_wall(&out_dir.join("final_state.csv"));
    assert_eq!(state[0], ["x", "u", "v", "abs"]);
    assert_eq!(state.len(), 201);
}

#[test]
fn profile_samples_the_oracle() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), BRIGHT);
    let out_dir = dir.path().join("out");
    assert!(run_cmd("profile", &plan, &out_dir, &[]).status.success());
    let rows = csv_without_wall(&out_dir.join("profile.csv"));
    let peak = rows[1..].iter().map(|r| r[3].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!((peak - 1.0).abs() < 1e-2, "{peak}");
}

#[test]
fn empty_sweep_gives_header_only_table() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), &format!("{BRIGHT}\n[sweep]\nn_x = []\n"));
    let out_dir = dir.path().join("out");
    assert!(run_cmd("table", &plan, &out_dir, &[]).status.success());
    let text = fs::read_to_string(out_dir.join("table.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("n_x,dt,p,s,error_max,error_rms,R,wall_seconds,status"), "{text}");
}

#[test]
fn table_is_reproducible_and_ordered_across_job_counts() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), &format!("{BRIGHT}\n[sweep]\nn_x = [300, 100, 200]\np = [7, 5]\n"));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run_cmd("table", &plan, &a, &["--jobs", "1"]).status.success());
    assert!(run_cmd("table", &plan, &b, &["--jobs", "3"]).status.success());
    let (ra, rb) = (csv_without_wall(&a.join("table.csv")), csv_without_wall(&b.join("table.csv")));
    assert_eq!(ra, rb);
    let order: Vec<(&str, &str)> = ra[1..].iter().map(|r| (r[2].as_str(), r[0].as_str())).collect();
    assert_eq!(order, [("7", "300"), ("7", "100"), ("7", "200"), ("5", "300"), ("5", "100"), ("5", "200")]);
}

#[test]
fn repeated_point_gives_identical_errors() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), &format!("{BRIGHT}\n[sweep]\nn_x = [150, 150]\n"));
    let out_dir = dir.path().join("out");
    assert!(run_cmd("table", &plan, &out_dir, &["--jobs", "2"]).status.success());
    let rows = csv_without_wall(&out_dir.join("table.csv"));
    assert_eq!(rows[1][..6], rows[2][..6]);
}

#[test]
fn diverged_sweep_point_is_kept_as_a_row() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), &format!("{}\n[sweep]\ndt = [1e-3, 0.5]\n", BRIGHT.replace("n_t = 50", "t_final = 200.0")));
    let out_dir = dir.path().join("out");
    let out = run_cmd("table", &plan, &out_dir, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_without_wall(&out_dir.join("table.csv"));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2].last().unwrap(), "diverged");
}

fn scatter_plan(k: f64, x0: f64, t_final: f64) -> String {
    format!(
        r#"
name = "well"

[equation]
g1 = 0.5
g2 = 1.0

[oracle]
family = "bright"
a0 = 1.0
k = {k}
x0 = {x0}

[potential]
kind = "sech_well"
v0 = 1.0
alpha = 2.0

[boundary]
mode = "zero"

[grid]
length = 80.0
n_x = 801

[time]
dt = 1e-3
t_final = {t_final}

[method]
p = 9
s = 4
"#
    )
}

fn scatter_row(plan_text: &str) -> Vec<String> {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), plan_text);
    let out_dir = dir.path().join("out");
    let out = run_cmd("scatter", &plan, &out_dir, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_without_wall(&out_dir.join("scatter.csv"));
    assert_eq!(rows[0][..6], ["n_x", "p", "transmitted_fraction", "outcome", "peak_position", "transmitted_peak"]);
    rows[1].clone()
}

#[test]
fn resting_soliton_stays_in_the_well() {
    let row = scatter_row(&scatter_plan(0.0, 0.0, 2.0));
    let peak: f64 = row[4].parse().unwrap();
    assert!(peak.abs() <= 0.1, "{row:?}");
}

#[test]
fn fast_soliton_is_transmitted() {
    let row = scatter_row(&scatter_plan(2.0, -10.0, 10.0));
    let fraction: f64 = row[2].parse().unwrap();
    assert!(fraction > 0.95, "{row:?}");
    assert_eq!(row[3], "transmission");
    let peak: f64 = row[4].parse().unwrap();
    assert!((peak - 10.0).abs() < 1.0, "{row:?}");
}

#[test]
fn scatter_without_potential_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let plan = write_plan(dir.path(), BRIGHT);
    assert_eq!(run_cmd("scatter", &plan, &dir.path().join("out"), &[]).status.code(), Some(1));
}
