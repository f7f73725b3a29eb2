//! Sweeps, scattering runs and method comparisons built on an
//! [`ExperimentPlan`].
//!
//! Points run on the current rayon pool; results always come back in sweep
//! order.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use psnlse::baseline::{split_step_evolve, SplitStepConfig};
use psnlse::engine::{FieldState, Grid, NoObserver, Observer, Solver, TimeSeriesObserver, TimeSeriesRow};
use psnlse::equation::Equation;
use psnlse::metrics::{self, ErrorReport};
use psnlse::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentPlan, MethodKind, RunPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Diverged,
}

/// Final states of one simulation plus its wall time.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub grid: Grid,
    pub states: Vec<FieldState>,
    pub wall_seconds: f64,
}

impl RunOutcome {
    /// Worst component error against the plan's oracle; `None` when the
    /// plan has no exact reference.
    pub fn errors(&self, plan: &ExperimentPlan) -> Option<Vec<ErrorReport>> {
        if !plan.has_exact_reference() {
            return None;
        }
        Some(
            self.states
                .iter()
                .enumerate()
                .map(|(k, st)| metrics::error_report_component(st, &plan.oracle, k, &self.grid, &plan.windows))
                .collect(),
        )
    }

    fn worst(&self, plan: &ExperimentPlan) -> (f64, f64) {
        match self.errors(plan) {
            Some(reports) => reports
                .iter()
                .fold((0.0f64, 0.0f64), |acc, r| (acc.0.max(r.error_max), acc.1.max(r.error_rms))),
            None => (f64::NAN, f64::NAN),
        }
    }
}

/// Runs one point with `method`, starting from the oracle at `t_start`.
pub fn simulate(
    plan: &ExperimentPlan,
    method: MethodKind,
    point: &RunPoint,
    observer: &mut dyn Observer,
) -> Result<RunOutcome> {
    plan.validate_method(method, point)?;
    let grid = plan.grid_for(method, point)?;
    let comps = plan.oracle.components();
    let initial: Vec<FieldState> = (0..comps)
        .map(|k| FieldState::from_spec(&plan.oracle, k, &grid, plan.t_start))
        .collect();
    let start = Instant::now();
    let states = match method {
        MethodKind::PowerSeries => {
            let mut solver = Solver::new(plan.solver_config(point), grid.clone())?;
            solver.evolve_states(initial, observer)?
        }
        MethodKind::SplitStep => {
            let Equation::Scalar { g1, g2 } = plan.equation else {
                return Err(Error::Config("split-step supports the scalar equation only".into()));
            };
            let cfg = SplitStepConfig {
                g1,
                g2,
                potential: plan.potential.clone(),
                dt: point.dt,
                n_t: point.n_t,
            };
            let first = initial.into_iter().next().expect("one component");
            vec![split_step_evolve(first, &grid, &cfg, observer)?]
        }
    };
    Ok(RunOutcome {
        grid,
        states,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// A single run of the plan's base point with a time-series observer.
pub fn run_single(plan: &ExperimentPlan) -> Result<(RunOutcome, Vec<TimeSeriesRow>)> {
    let oracle = plan.has_exact_reference().then_some(plan.oracle);
    let mut observer = TimeSeriesObserver::new(oracle, plan.stride);
    let outcome = simulate(plan, plan.method, &plan.base, &mut observer)?;
    Ok((outcome, observer.rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n_x: usize,
    pub dt: f64,
    pub p: usize,
    pub s: usize,
    pub error_max: f64,
    pub error_rms: f64,
    /// Convergence rate of `error_rms` against the previous row.
    #[serde(rename = "R")]
    pub rate: Option<f64>,
    pub wall_seconds: f64,
    pub status: Status,
}

/// One row per sweep point. A diverging point is recorded and the sweep
/// carries on.
pub fn run_table(plan: &ExperimentPlan) -> Result<Vec<TableRow>> {
    let results: Vec<Result<TableRow>> = plan
        .points
        .par_iter()
        .map(|point| {
            let row = |error_max, error_rms, wall_seconds, status| TableRow {
                n_x: point.n_x,
                dt: point.dt,
                p: point.p,
                s: point.s,
                error_max,
                error_rms,
                rate: None,
                wall_seconds,
                status,
            };
            match simulate(plan, plan.method, point, &mut NoObserver) {
                Ok(out) => {
                    let (max, rms) = out.worst(plan);
                    Ok(row(max, rms, out.wall_seconds, Status::Ok))
                }
                Err(Error::Divergence { .. }) => Ok(row(f64::NAN, f64::NAN, f64::NAN, Status::Diverged)),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    for i in 1..rows.len() {
        rows[i].rate = rate_between(&plan.points[i - 1], &plan.points[i], &rows[i - 1], &rows[i]);
    }
    Ok(rows)
}

/// Rate in `n_x` (or in the step count when only `Δt` changed); `None` for
/// any other pair.
fn rate_between(a: &RunPoint, b: &RunPoint, ra: &TableRow, rb: &TableRow) -> Option<f64> {
    if ra.status != Status::Ok || rb.status != Status::Ok || a.p != b.p || a.s != b.s {
        return None;
    }
    let (na, nb) = if a.dt == b.dt && a.n_x != b.n_x {
        (a.n_x, b.n_x)
    } else if a.n_x == b.n_x && a.dt != b.dt {
        (a.n_t, b.n_t)
    } else {
        return None;
    };
    metrics::convergence_rate(ra.error_rms, rb.error_rms, na, nb).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Transmission,
    Reflection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub n_x: usize,
    pub p: usize,
    /// Share of `∫|ψ|²` on `x > 0`.
    pub transmitted_fraction: f64,
    pub outcome: Option<Outcome>,
    /// Position of the largest `|ψ|` on the side holding most of the mass.
    pub peak_position: f64,
    /// Position of the largest `|ψ|` on `x > 0`.
    pub transmitted_peak: f64,
    pub wall_seconds: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub transmitted_fraction: f64,
    pub outcome: Outcome,
    pub peak_position: f64,
    pub transmitted_peak: f64,
}

/// Mass split and peaks of a final state.
pub fn classify(state: &FieldState, grid: &Grid, threshold: f64) -> Classification {
    let density: Vec<f64> = (0..state.len()).map(|i| state.value(i).norm_sqr()).collect();
    let total: f64 = density.iter().sum();
    let right: f64 = grid.x().iter().zip(&density).filter(|(x, _)| **x > 0.0).map(|(_, d)| d).sum();
    let fraction = right / total;
    let outcome = if fraction > threshold {
        Outcome::Transmission
    } else {
        Outcome::Reflection
    };
    let peak_where = |keep: &dyn Fn(f64) -> bool| {
        grid.x()
            .iter()
            .zip(&density)
            .filter(|(x, _)| keep(**x))
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(f64::NAN, |(x, _)| *x)
    };
    let transmitted_peak = peak_where(&|x| x > 0.0);
    let peak_position = match outcome {
        Outcome::Transmission => transmitted_peak,
        Outcome::Reflection => peak_where(&|x| x <= 0.0),
    };
    Classification {
        transmitted_fraction: fraction,
        outcome,
        peak_position,
        transmitted_peak,
    }
}

pub fn run_scatter(plan: &ExperimentPlan) -> Result<Vec<ScatterRow>> {
    if plan.potential.is_none() {
        return Err(Error::Config("scatter needs a [potential] section".into()));
    }
    plan.points
        .par_iter()
        .map(|point| match simulate(plan, plan.method, point, &mut NoObserver) {
            Ok(out) => {
                let c = classify(&out.states[0], &out.grid, plan.threshold);
                Ok(ScatterRow {
                    n_x: point.n_x,
                    p: point.p,
                    transmitted_fraction: c.transmitted_fraction,
                    outcome: Some(c.outcome),
                    peak_position: c.peak_position,
                    transmitted_peak: c.transmitted_peak,
                    wall_seconds: out.wall_seconds,
                    status: Status::Ok,
                })
            }
            Err(Error::Divergence { .. }) => Ok(ScatterRow {
                n_x: point.n_x,
                p: point.p,
                transmitted_fraction: f64::NAN,
                outcome: None,
                peak_position: f64::NAN,
                transmitted_peak: f64::NAN,
                wall_seconds: f64::NAN,
                status: Status::Diverged,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub method: MethodKind,
    pub n_x: usize,
    pub n_t: usize,
    pub dt: f64,
    pub error_max: f64,
    pub error_rms: f64,
    pub wall_seconds: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Power-series rows for every point, then split-step rows.
    pub rows: Vec<CompareRow>,
    /// Fitted exponent of power-series wall time against `n_t`.
    pub wall_time_exponent: Option<f64>,
}

/// Runs every sweep point with both methods.
///
/// Timings are taken one run at a time so that the wall-time series is not
/// distorted by sibling runs competing for cores.
pub fn compare_methods(plan: &ExperimentPlan) -> Result<Comparison> {
    if !plan.has_exact_reference() {
        return Err(Error::Config("compare needs an exact reference (no potential)".into()));
    }
    for method in [MethodKind::PowerSeries, MethodKind::SplitStep] {
        for point in &plan.points {
            plan.validate_method(method, point)?;
        }
    }
    let mut rows = Vec::new();
    for method in [MethodKind::PowerSeries, MethodKind::SplitStep] {
        for point in &plan.points {
            let row = match simulate(plan, method, point, &mut NoObserver) {
                Ok(out) => {
                    let (max, rms) = out.worst(plan);
                    (max, rms, out.wall_seconds, Status::Ok)
                }
                Err(Error::Divergence { .. }) => (f64::NAN, f64::NAN, f64::NAN, Status::Diverged),
                Err(e) => return Err(e),
            };
            rows.push(CompareRow {
                method,
                n_x: point.n_x,
                n_t: point.n_t,
                dt: point.dt,
                error_max: row.0,
                error_rms: row.1,
                wall_seconds: row.2,
                status: row.3,
            });
        }
    }
    let timings: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.method == MethodKind::PowerSeries && r.status == Status::Ok)
        .map(|r| (r.n_t as f64, r.wall_seconds))
        .collect();
    let wall_time_exponent = metrics::power_law_fit(&timings).ok().map(|f| f.exponent);
    Ok(Comparison {
        rows,
        wall_time_exponent,
    })
}

#[derive(Serialize)]
struct StateRow {
    x: f64,
    u: f64,
    v: f64,
    abs: f64,
}

#[derive(Serialize)]
struct ProfileRow {
    x: f64,
    re: f64,
    im: f64,
    abs: f64,
}

#[derive(Serialize)]
struct ErrorRow {
    x: f64,
    error: f64,
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub const TABLE_HEADER: &[&str] = &["n_x", "dt", "p", "s", "error_max", "error_rms", "R", "wall_seconds", "status"];
pub const SCATTER_HEADER: &[&str] =
    &["n_x", "p", "transmitted_fraction", "outcome", "peak_position", "transmitted_peak", "wall_seconds", "status"];
pub const COMPARE_HEADER: &[&str] =
    &["method", "n_x", "n_t", "dt", "error_max", "error_rms", "wall_seconds", "status"];
pub const TIME_SERIES_HEADER: &[&str] = &["t", "error_max", "error_rms", "norm"];

pub fn write_state(path: &Path, state: &FieldState, grid: &Grid) -> Result<()> {
    let rows: Vec<StateRow> = grid
        .x()
        .iter()
        .enumerate()
        .map(|(i, &x)| StateRow {
            x,
            u: state.u[i],
            v: state.v[i],
            abs: state.value(i).norm(),
        })
        .collect();
    write_rows(path, &rows, &["x", "u", "v", "abs"])
}

pub fn write_profile(path: &Path, grid: &Grid, f: impl Fn(f64) -> Complex64) -> Result<()> {
    let rows: Vec<ProfileRow> = grid
        .x()
        .iter()
        .map(|&x| {
            let z = f(x);
            ProfileRow {
                x,
                re: z.re,
                im: z.im,
                abs: z.norm(),
            }
        })
        .collect();
    write_rows(path, &rows, &["x", "re", "im", "abs"])
}

pub fn write_error_profile(path: &Path, report: &ErrorReport, grid: &Grid) -> Result<()> {
    let rows: Vec<ErrorRow> = grid
        .x()
        .iter()
        .zip(&report.profile)
        .map(|(&x, &error)| ErrorRow { x, error })
        .collect();
    write_rows(path, &rows, &["x", "error"])
}

/// `name.csv` for the first component, `name_2.csv` for the second.
pub fn component_file(dir: &Path, name: &str, component: usize) -> std::path::PathBuf {
    if component == 0 {
        dir.join(format!("{name}.csv"))
    } else {
        dir.join(format!("{name}_{}.csv", component + 1))
    }
}
