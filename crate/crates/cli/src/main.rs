use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use psnlse::engine::Grid;
use psnlse::stencil::stencil_weights;
use psnlse::Error;
use psnlse_cli::experiments::{self, Status};
use psnlse_cli::ExperimentPlan;

#[derive(Parser)]
#[command(name = "psnlse", version, about = "Power-series NLSE solver: experiments and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment plan (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweep points (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Reserved; no code path is stochastic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the integer p-point formula and its normalized weights.
    Stencil {
        #[arg(long)]
        p: usize,
        /// Also write stencil.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the plan's closed-form solution at t_start.
    Profile(Common),
    /// Evolve the base point, writing the final state and a time series.
    Run(Common),
    /// Run every sweep point and tabulate errors and convergence rates.
    Table(Common),
    /// Classify transmission/reflection off the plan's potential.
    Scatter(Common),
    /// Run every sweep point with both the power-series and split-step methods.
    Compare(Common),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Divergence { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn dispatch(command: Command) -> psnlse::Result<()> {
    match command {
        Command::Stencil { p, out } => stencil(p, out.as_deref()),
        Command::Profile(c) => with_plan(&c, profile),
        Command::Run(c) => with_plan(&c, run),
        Command::Table(c) => with_plan(&c, table),
        Command::Scatter(c) => with_plan(&c, scatter),
        Command::Compare(c) => with_plan(&c, compare),
    }
}

fn with_plan(
    common: &Common,
    f: impl FnOnce(&ExperimentPlan, &Path) -> psnlse::Result<()> + Send,
) -> psnlse::Result<()> {
    let plan = ExperimentPlan::load(&common.config)?;
    fs::create_dir_all(&common.out)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.jobs {
        if n == 0 {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Error::Config(e.to_string()))?;
    info!("plan `{}`: {} sweep point(s)", plan.name, plan.points.len());
    pool.install(|| f(&plan, &common.out))
}

fn stencil(p: usize, out: Option<&Path>) -> psnlse::Result<()> {
    let table = stencil_weights(p)?;
    let (den, center, ints) = table.integer_layout();
    println!("{}", table.formula());
    println!("denominator {den}");
    println!("center {center}  (normalized {:e})", table.center_weight());
    for (j, (w, c)) in ints.iter().zip(table.weights()).enumerate() {
        println!("j={:<2} {w:>20}  {c:+.17e}", j + 1);
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("stencil.csv"))?;
        w.write_record(["j", "weight", "denominator", "normalized"])?;
        w.write_record(["0".to_string(), center.to_string(), den.to_string(), table.center_weight().to_string()])?;
        for (j, (wt, c)) in ints.iter().zip(table.weights()).enumerate() {
            w.write_record([(j + 1).to_string(), wt.to_string(), den.to_string(), c.to_string()])?;
        }
        w.flush()?;
    }
    Ok(())
}

fn profile(plan: &ExperimentPlan, out: &Path) -> psnlse::Result<()> {
    let grid = Grid::new(plan.length, plan.base.n_x)?;
    for k in 0..plan.oracle.components() {
        let path = experiments::component_file(out, "profile", k);
        experiments::write_profile(&path, &grid, |x| plan.oracle.evaluate_component(k, x, plan.t_start))?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn run(plan: &ExperimentPlan, out: &Path) -> psnlse::Result<()> {
    let (outcome, series) = experiments::run_single(plan)?;
    for (k, state) in outcome.states.iter().enumerate() {
        experiments::write_state(&experiments::component_file(out, "final_state", k), state, &outcome.grid)?;
    }
    experiments::write_rows(&out.join("time_series.csv"), &series, experiments::TIME_SERIES_HEADER)?;
    println!("t = {}  wall = {:.3} s", outcome.states[0].t, outcome.wall_seconds);
    if let Some(reports) = outcome.errors(plan) {
        for (k, r) in reports.iter().enumerate() {
            experiments::write_error_profile(&experiments::component_file(out, "error_profile", k), r, &outcome.grid)?;
            println!(
                "component {}: max {:e}  rms {:e}  edge {:e}  centre {:e}",
                k + 1,
                r.error_max,
                r.error_rms,
                r.boundary_error,
                r.center_error
            );
        }
    }
    Ok(())
}

fn table(plan: &ExperimentPlan, out: &Path) -> psnlse::Result<()> {
    let rows = experiments::run_table(plan)?;
    experiments::write_rows(&out.join("table.csv"), &rows, experiments::TABLE_HEADER)?;
    for r in &rows {
        let rate = r.rate.map_or(String::new(), |q| format!("{q:.5}"));
        match r.status {
            Status::Ok => println!(
                "n_x={:<6} dt={:<8e} p={:<3} s={}  rms {:e}  max {:e}  R {rate}",
                r.n_x, r.dt, r.p, r.s, r.error_rms, r.error_max
            ),
            Status::Diverged => println!("n_x={:<6} dt={:<8e} p={:<3} s={}  diverged", r.n_x, r.dt, r.p, r.s),
        }
    }
    Ok(())
}

fn scatter(plan: &ExperimentPlan, out: &Path) -> psnlse::Result<()> {
    let rows = experiments::run_scatter(plan)?;
    experiments::write_rows(&out.join("scatter.csv"), &rows, experiments::SCATTER_HEADER)?;
    for r in &rows {
        match r.outcome {
            Some(o) => println!(
                "n_x={:<6} p={:<3} {:?}  transmitted {:.6}  peak at x = {:.4}  (x > 0: {:.4})",
                r.n_x, r.p, o, r.transmitted_fraction, r.peak_position, r.transmitted_peak
            ),
            None => println!("n_x={:<6} p={:<3} diverged", r.n_x, r.p),
        }
    }
    Ok(())
}

fn compare(plan: &ExperimentPlan, out: &Path) -> psnlse::Result<()> {
    let cmp = experiments::compare_methods(plan)?;
    experiments::write_rows(&out.join("compare.csv"), &cmp.rows, experiments::COMPARE_HEADER)?;
    for r in &cmp.rows {
        println!(
            "{:<13} n_x={:<6} n_t={:<8} max {:e}  wall {:.3} s",
            format!("{:?}", r.method),
            r.n_x,
            r.n_t,
            r.error_max,
            r.wall_seconds
        );
    }
    if let Some(q) = cmp.wall_time_exponent {
        println!("power-series wall time ∝ n_t^{q:.3}");
    }
    Ok(())
}
