//! Experiment plans read from TOML.
//!
//! ```toml
//! name = "bright"
//!
//! [equation]
//! g1 = -1.0
//! g2 = -2.0
//!
//! [oracle]
//! family = "bright"
//! a0 = 1.0
//! k = 4.0
//! x0 = -10.0
//!
//! [grid]
//! length = 40.0
//! n_x = 400
//!
//! [time]
//! dt = 1e-4
//! t_final = 1.0
//!
//! [method]
//! p = 5
//! s = 3
//!
//! [sweep]
//! n_x = [100, 200, 300, 400]
//! ```
//!
//! Every section rejects unknown keys.

use std::path::Path;

use psnlse::analytic::{
    CwParams, DarkBrightParams, PeregrineParams, SolitonParams, SolutionSpec, TwoBrightParams,
};
use psnlse::engine::{BoundaryMode, BoundaryUpdate, Grid, PotentialSpec, SolverConfig};
use psnlse::equation::{CoupledCoefficients, Equation};
use psnlse::metrics::Windows;
use psnlse::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub name: String,
    pub equation: EquationSection,
    pub oracle: OracleSection,
    pub grid: GridSection,
    pub time: TimeSection,
    #[serde(default)]
    pub method: MethodSection,
    #[serde(default)]
    pub boundary: BoundarySection,
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub observer: ObserverSection,
    pub sweep: Option<SweepSection>,
    pub scatter: Option<ScatterSection>,
}

/// Either `g1, g2` or all six coupled coefficients.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSection {
    pub g1: Option<f64>,
    pub g2: Option<f64>,
    pub g10: Option<f64>,
    pub g11: Option<f64>,
    pub g12: Option<f64>,
    pub g20: Option<f64>,
    pub g21: Option<f64>,
    pub g22: Option<f64>,
}

impl EquationSection {
    pub fn resolve(&self) -> Result<Equation> {
        let coupled = [self.g10, self.g11, self.g12, self.g20, self.g21, self.g22];
        let eq = match (self.g1, self.g2) {
            (Some(g1), Some(g2)) if coupled.iter().all(Option::is_none) => {
                Equation::Scalar { g1, g2 }
            }
            (None, None) if coupled.iter().all(Option::is_some) => {
                let g = coupled.map(Option::unwrap);
                Equation::Coupled(CoupledCoefficients {
                    g10: g[0],
                    g11: g[1],
                    g12: g[2],
                    g20: g[3],
                    g21: g[4],
                    g22: g[5],
                })
            }
            _ => {
                return Err(Error::Config(
                    "[equation] needs either g1 and g2, or all of g10 g11 g12 g20 g21 g22".into(),
                ))
            }
        };
        eq.validate().map_err(config_error)?;
        Ok(eq)
    }
}

/// Closed-form solution supplying the initial profile, boundary data and
/// error reference. Equation coefficients come from `[equation]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSection {
    Cw {
        a0: f64,
        #[serde(default)]
        k: f64,
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        t0: f64,
        #[serde(default)]
        phi0: f64,
    },
    Bright {
        a0: f64,
        #[serde(default)]
        k: f64,
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        t0: f64,
        #[serde(default)]
        phi0: f64,
    },
    Dark {
        a0: f64,
        #[serde(default)]
        k: f64,
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        t0: f64,
        #[serde(default)]
        phi0: f64,
    },
    Peregrine {
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        t0: f64,
        #[serde(default)]
        phi0: f64,
    },
    TwoBright {
        alpha: [f64; 2],
        nu: [f64; 2],
        #[serde(default)]
        x0: [f64; 2],
        #[serde(default)]
        phi0: [f64; 2],
        #[serde(default)]
        t0: f64,
    },
    DarkBright {
        a0: f64,
        #[serde(default)]
        k: f64,
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        t0: f64,
    },
}

impl OracleSection {
    pub fn resolve(&self, equation: &Equation) -> Result<SolutionSpec> {
        let scalar = |family: &str| match *equation {
            Equation::Scalar { g1, g2 } => Ok((g1, g2)),
            Equation::Coupled(_) => Err(Error::Config(format!(
                "oracle family `{family}` needs a scalar [equation]"
            ))),
        };
        let spec = match *self {
            OracleSection::Cw { a0, k, x0, t0, phi0 } => {
                let (g1, g2) = scalar("cw")?;
                SolutionSpec::cw(CwParams { a0, k, x0, t0, phi0, g1, g2 })
            }
            OracleSection::Bright { a0, k, x0, t0, phi0 } => {
                let (g1, g2) = scalar("bright")?;
                SolutionSpec::bright(SolitonParams { a0, k, x0, t0, phi0, g1, g2 })
            }
            OracleSection::Dark { a0, k, x0, t0, phi0 } => {
                let (g1, g2) = scalar("dark")?;
                SolutionSpec::dark(SolitonParams { a0, k, x0, t0, phi0, g1, g2 })
            }
            OracleSection::Peregrine { x0, t0, phi0 } => {
                let (g1, g2) = scalar("peregrine")?;
                SolutionSpec::peregrine(PeregrineParams { x0, t0, phi0, g1, g2 })
            }
            OracleSection::TwoBright { alpha, nu, x0, phi0, t0 } => {
                let (g1, g2) = scalar("two_bright")?;
                SolutionSpec::two_bright(TwoBrightParams { alpha, nu, x0, phi0, t0, g1, g2 })
            }
            OracleSection::DarkBright { a0, k, x0, t0 } => match *equation {
                Equation::Coupled(g) => SolutionSpec::dark_bright(DarkBrightParams { a0, k, x0, t0, g }),
                Equation::Scalar { .. } => {
                    return Err(Error::Config(
                        "oracle family `dark_bright` needs the coupled [equation]".into(),
                    ))
                }
            },
        };
        spec.map_err(config_error)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub length: f64,
    pub n_x: usize,
}

/// Exactly one of `n_t` and `t_final`; with `t_final` the step count is
/// `round(t_final / dt)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    pub n_t: Option<usize>,
    pub t_final: Option<f64>,
    #[serde(default)]
    pub t_start: f64,
}

impl TimeSection {
    pub fn steps(&self, dt: f64) -> Result<usize> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        match (self.n_t, self.t_final) {
            (Some(n), None) => Ok(n),
            (None, Some(t)) if t.is_finite() && t >= 0.0 => Ok((t / dt).round() as usize),
            (None, Some(t)) => Err(Error::Config(format!("t_final must be non-negative, got {t}"))),
            _ => Err(Error::Config("[time] needs exactly one of n_t and t_final".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    #[default]
    PowerSeries,
    SplitStep,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSection {
    #[serde(default)]
    pub kind: MethodKind,
    #[serde(default = "default_p")]
    pub p: usize,
    #[serde(default = "default_s")]
    pub s: usize,
}

fn default_p() -> usize {
    9
}

fn default_s() -> usize {
    4
}

impl Default for MethodSection {
    fn default() -> Self {
        MethodSection {
            kind: MethodKind::PowerSeries,
            p: default_p(),
            s: default_s(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    #[serde(default = "default_mode")]
    pub mode: BoundaryMode,
    #[serde(default = "default_update")]
    pub update: BoundaryUpdate,
}

fn default_mode() -> BoundaryMode {
    BoundaryMode::Exact
}

fn default_update() -> BoundaryUpdate {
    BoundaryUpdate::Direct
}

impl Default for BoundarySection {
    fn default() -> Self {
        BoundarySection {
            mode: default_mode(),
            update: default_update(),
        }
    }
}

/// `V(x) = −v0² sech²(α x)`; `v0` has no default on purpose.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSection {
    #[default]
    None,
    SechWell { v0: f64, alpha: f64 },
}

impl PotentialSection {
    pub fn resolve(&self) -> PotentialSpec {
        match *self {
            PotentialSection::None => PotentialSpec::None,
            PotentialSection::SechWell { v0, alpha } => PotentialSpec::SechWell { v0, alpha },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSection {
    /// Steps between time-series rows.
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_boundary_window")]
    pub boundary_window: f64,
    #[serde(default = "default_center_window")]
    pub center_window: f64,
}

fn default_stride() -> usize {
    100
}

fn default_boundary_window() -> f64 {
    Windows::default().boundary
}

fn default_center_window() -> f64 {
    Windows::default().center
}

impl Default for ObserverSection {
    fn default() -> Self {
        ObserverSection {
            stride: default_stride(),
            boundary_window: default_boundary_window(),
            center_window: default_center_window(),
        }
    }
}

/// Lists replacing the base value of one axis each; the points are the
/// Cartesian product, `n_x` varying fastest, then `dt`, `s`, `p`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub n_x: Option<Vec<usize>>,
    pub dt: Option<Vec<f64>>,
    pub p: Option<Vec<usize>>,
    pub s: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterSection {
    /// Mass fraction on `x > 0` above which the outcome counts as transmission.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_threshold() -> f64 {
    0.5
}

/// One fully resolved simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPoint {
    pub n_x: usize,
    pub dt: f64,
    pub p: usize,
    pub s: usize,
    pub n_t: usize,
}

/// A validated plan: every sweep point has already been checked.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub name: String,
    pub equation: Equation,
    pub oracle: SolutionSpec,
    pub length: f64,
    pub t_start: f64,
    pub method: MethodKind,
    pub boundary_mode: BoundaryMode,
    pub boundary_update: BoundaryUpdate,
    pub potential: PotentialSpec,
    pub stride: usize,
    pub windows: Windows,
    pub threshold: f64,
    pub base: RunPoint,
    pub points: Vec<RunPoint>,
}

impl ExperimentPlan {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: PlanFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_file(file: PlanFile) -> Result<Self> {
        let equation = file.equation.resolve()?;
        let oracle = file.oracle.resolve(&equation)?;
        let potential = file.potential.resolve();
        let windows = Windows {
            boundary: file.observer.boundary_window,
            center: file.observer.center_window,
        };
        if !(0.0..0.5).contains(&windows.boundary) || !(0.0..=1.0).contains(&windows.center) {
            return Err(Error::Config("observer windows must be fractions of the grid".into()));
        }
        if file.observer.stride == 0 {
            return Err(Error::Config("observer stride must be positive".into()));
        }
        let threshold = file.scatter.as_ref().map_or(default_threshold(), |s| s.threshold);
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::Config(format!("scatter threshold {threshold} is not in [0, 1]")));
        }

        let base = RunPoint {
            n_x: file.grid.n_x,
            dt: file.time.dt,
            p: file.method.p,
            s: file.method.s,
            n_t: file.time.steps(file.time.dt)?,
        };
        let sweep = file.sweep.clone().unwrap_or_default();
        let n_xs = sweep.n_x.unwrap_or_else(|| vec![base.n_x]);
        let dts = sweep.dt.unwrap_or_else(|| vec![base.dt]);
        let ss = sweep.s.unwrap_or_else(|| vec![base.s]);
        let ps = sweep.p.unwrap_or_else(|| vec![base.p]);
        let mut points = Vec::new();
        for &p in &ps {
            for &s in &ss {
                for &dt in &dts {
                    for &n_x in &n_xs {
                        points.push(RunPoint {
                            n_x,
                            dt,
                            p,
                            s,
                            n_t: file.time.steps(dt)?,
                        });
                    }
                }
            }
        }

        let plan = ExperimentPlan {
            name: file.name,
            equation,
            oracle,
            length: file.grid.length,
            t_start: file.time.t_start,
            method: file.method.kind,
            boundary_mode: file.boundary.mode,
            boundary_update: file.boundary.update,
            potential,
            stride: file.observer.stride,
            windows,
            threshold,
            base,
            points,
        };
        plan.validate_point(&plan.base)?;
        for point in &plan.points {
            plan.validate_point(point)?;
        }
        Ok(plan)
    }

    /// Grid for `point` under this plan's method.
    pub fn grid(&self, point: &RunPoint) -> Result<Grid> {
        self.grid_for(self.method, point)
    }

    pub fn grid_for(&self, method: MethodKind, point: &RunPoint) -> Result<Grid> {
        match method {
            MethodKind::PowerSeries => Grid::new(self.length, point.n_x),
            MethodKind::SplitStep => Grid::periodic(self.length, point.n_x),
        }
    }

    pub fn solver_config(&self, point: &RunPoint) -> SolverConfig {
        SolverConfig {
            equation: self.equation,
            s: point.s,
            p: point.p,
            dt: point.dt,
            n_t: point.n_t,
            boundary_mode: self.boundary_mode,
            boundary_update: self.boundary_update,
            boundary_spec: Some(self.oracle),
            potential: self.potential.clone(),
        }
    }

    /// The oracle is an exact solution only without an external potential.
    pub fn has_exact_reference(&self) -> bool {
        self.potential.is_none()
    }

    pub fn validate_point(&self, point: &RunPoint) -> Result<()> {
        self.validate_method(self.method, point)
    }

    pub fn validate_method(&self, method: MethodKind, point: &RunPoint) -> Result<()> {
        let grid = self.grid_for(method, point).map_err(config_error)?;
        match method {
            MethodKind::PowerSeries => {
                self.solver_config(point).validate(&grid).map_err(config_error)?;
                psnlse::stencil::stencil_weights(point.p).map_err(config_error)?;
            }
            MethodKind::SplitStep => {
                let Equation::Scalar { .. } = self.equation else {
                    return Err(Error::Config("split-step supports the scalar equation only".into()));
                };
                if !point.n_x.is_power_of_two() {
                    return Err(Error::Config(format!(
                        "split-step needs a power-of-two n_x, got {}",
                        point.n_x
                    )));
                }
                if !(point.dt.is_finite() && point.dt > 0.0) {
                    return Err(Error::Config(format!("time step must be positive, got {}", point.dt)));
                }
            }
        }
        self.potential.sample(&grid).map_err(config_error)?;
        Ok(())
    }
}

fn config_error(e: Error) -> Error {
    match e {
        Error::InvalidParameter(msg) => Error::Config(msg),
        other => other,
    }
}
