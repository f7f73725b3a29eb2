//! The power-series time integrator.
//!
//! Each step expands every component as `ψ(x, t+τ) = Σ_l c_l(x) τ^l`,
//! obtains the coefficients from the recursion
//!
//! ```text
//! (l+1) c_{l+1} = i [ g_0 c_l'' + Σ_{n+j=l} c_n σ_j − V c_l ],
//! σ_j = Σ_m g_m ρ_{m,j},   ρ_{m,j} = Σ_{q+r=j} (a_q a_r + b_q b_r)  (of component m)
//! ```
//!
//! at interior points and from the boundary data at the `(p−1)/2` outermost
//! points on each side, then sums the truncated series with Horner's rule.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{CwParams, Edge, SolutionSpec};
use crate::equation::Equation;
use crate::error::{invalid, Error, Result};
use crate::jet::Jet;
use crate::metrics;
use crate::stencil::{stencil_weights, StencilTable};

/// Uniform grid `x_i = −L/2 + i Δx`, `i = 0..n_x`, with `Δx = L/(n_x − 1)`.
///
/// A periodic grid instead has `Δx = L/n_x` and omits the right endpoint,
/// which coincides with the left one.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    length: f64,
    dx: f64,
    x: Vec<f64>,
    periodic: bool,
}

impl Grid {
    pub fn new(length: f64, n_x: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid(format!("domain length must be positive, got {length}")));
        }
        if n_x < 2 {
            return Err(invalid("grid needs at least two points"));
        }
        let dx = length / (n_x - 1) as f64;
        let mut x: Vec<f64> = (0..n_x).map(|i| -length / 2.0 + i as f64 * dx).collect();
        x[n_x - 1] = length / 2.0;
        Ok(Grid {
            length,
            dx,
            x,
            periodic: false,
        })
    }

    pub fn periodic(length: f64, n_x: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid(format!("domain length must be positive, got {length}")));
        }
        if n_x < 2 {
            return Err(invalid("grid needs at least two points"));
        }
        let dx = length / n_x as f64;
        let x = (0..n_x).map(|i| -length / 2.0 + i as f64 * dx).collect();
        Ok(Grid {
            length,
            dx,
            x,
            periodic: true,
        })
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_x(&self) -> usize {
        self.x.len()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }
}

/// One field component `ψ = u + i v` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn zeros(n_x: usize, t: f64) -> Self {
        FieldState {
            u: vec![0.0; n_x],
            v: vec![0.0; n_x],
            t,
        }
    }

    /// Samples one component of a closed-form solution.
    pub fn from_spec(spec: &SolutionSpec, component: usize, grid: &Grid, t: f64) -> Self {
        let (u, v) = grid
            .x()
            .iter()
            .map(|&x| {
                let z = spec.evaluate_component(component, x, t);
                (z.re, z.im)
            })
            .unzip();
        FieldState { u, v, t }
    }

    pub fn from_fn(grid: &Grid, t: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let (u, v) = grid
            .x()
            .iter()
            .map(|&x| {
                let z = f(x);
                (z.re, z.im)
            })
            .unzip();
        FieldState { u, v, t }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn value(&self, i: usize) -> Complex64 {
        Complex64::new(self.u[i], self.v[i])
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(u, v)| u.hypot(*v)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }
}

/// Taylor coefficients of every component: `a[k][l][i]`, `b[k][l][i]` for
/// component `k`, order `l = 0..=s` and grid point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    pub a: Vec<Vec<Vec<f64>>>,
    pub b: Vec<Vec<Vec<f64>>>,
}

impl SeriesCoefficients {
    fn new(components: usize, s: usize, n_x: usize) -> Self {
        let block = vec![vec![vec![0.0; n_x]; s + 1]; components];
        SeriesCoefficients {
            a: block.clone(),
            b: block,
        }
    }

    pub fn order(&self) -> usize {
        self.a[0].len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Edge data from the localized closed-form solution itself.
    Exact,
    /// Edge data from the plane wave matching the solution's background.
    Cw,
    /// Edge coefficients of order ≥ 1 vanish.
    Zero,
}

/// How the edge values are advanced at the end of a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryUpdate {
    /// Evaluate the boundary source at `t + Δt`.
    Direct,
    /// Sum the truncated boundary series, like the interior.
    Taylor,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum PotentialSpec {
    #[default]
    None,
    /// `V(x) = −V0² / cosh²(α x)`.
    SechWell { v0: f64, alpha: f64 },
    Tabulated(Vec<f64>),
}

impl PotentialSpec {
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        let values = match self {
            PotentialSpec::None => vec![0.0; grid.n_x()],
            PotentialSpec::SechWell { v0, alpha } => {
                if !(v0.is_finite() && alpha.is_finite()) {
                    return Err(invalid("potential parameters must be finite"));
                }
                grid.x()
                    .iter()
                    .map(|&x| {
                        let c = (alpha * x).cosh();
                        -v0 * v0 / (c * c)
                    })
                    .collect()
            }
            PotentialSpec::Tabulated(v) => {
                if v.len() != grid.n_x() {
                    return Err(invalid(format!(
                        "tabulated potential has {} values for a {}-point grid",
                        v.len(),
                        grid.n_x()
                    )));
                }
                v.clone()
            }
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("potential must be finite"));
        }
        Ok(values)
    }

    pub fn is_none(&self) -> bool {
        matches!(self, PotentialSpec::None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub equation: Equation,
    /// Series order.
    pub s: usize,
    /// Stencil size.
    pub p: usize,
    pub dt: f64,
    pub n_t: usize,
    pub boundary_mode: BoundaryMode,
    pub boundary_update: BoundaryUpdate,
    /// Required by the exact and CW modes.
    pub boundary_spec: Option<SolutionSpec>,
    pub potential: PotentialSpec,
}

impl SolverConfig {
    /// A scalar configuration with exact boundaries taken from `spec`.
    pub fn for_spec(spec: SolutionSpec, p: usize, s: usize, dt: f64, n_t: usize) -> Self {
        SolverConfig {
            equation: spec.equation(),
            s,
            p,
            dt,
            n_t,
            boundary_mode: BoundaryMode::Exact,
            boundary_update: BoundaryUpdate::Direct,
            boundary_spec: Some(spec),
            potential: PotentialSpec::None,
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        self.equation.validate()?;
        if grid.is_periodic() {
            return Err(invalid("the power-series solver needs a bounded (non-periodic) grid"));
        }
        if self.s == 0 {
            return Err(invalid("series order s must be at least 1"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid(format!("time step must be positive, got {}", self.dt)));
        }
        if grid.n_x() <= self.p {
            return Err(invalid(format!(
                "grid of {} points cannot hold a {}-point stencil with interior points left",
                grid.n_x(),
                self.p
            )));
        }
        if let Some(spec) = &self.boundary_spec {
            if spec.components() != self.equation.components() {
                return Err(invalid(
                    "boundary solution and equation have different component counts",
                ));
            }
        } else if self.boundary_mode != BoundaryMode::Zero {
            return Err(Error::Config(format!(
                "{:?} boundary mode needs a boundary solution",
                self.boundary_mode
            )));
        }
        if self.equation.components() == 2 && !self.potential.is_none() {
            return Err(invalid("external potentials are supported for the scalar equation only"));
        }
        Ok(())
    }
}

/// Where the edge data come from, resolved once at solver construction.
#[derive(Debug, Clone)]
enum EdgeSource {
    Spec(SolutionSpec),
    /// `[left, right]` plane waves per component.
    Cw(Vec<[CwParams; 2]>),
    Zero,
}

/// Receives the state at a fixed stride of steps (and always at step 0 and
/// at the final step).
pub trait Observer {
    fn stride(&self) -> usize {
        1
    }
    fn observe(&mut self, step: usize, states: &[FieldState], grid: &Grid);
}

/// Observer that does nothing.
pub struct NoObserver;

impl Observer for NoObserver {
    fn stride(&self) -> usize {
        usize::MAX
    }
    fn observe(&mut self, _: usize, _: &[FieldState], _: &Grid) {}
}

/// One row of the error/norm time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSeriesRow {
    pub t: f64,
    pub error_max: f64,
    pub error_rms: f64,
    pub norm: f64,
}

/// Records error against an oracle (NaN when absent) and the norm of the
/// first component.
pub struct TimeSeriesObserver {
    pub oracle: Option<SolutionSpec>,
    pub stride: usize,
    pub rows: Vec<TimeSeriesRow>,
}

impl TimeSeriesObserver {
    pub fn new(oracle: Option<SolutionSpec>, stride: usize) -> Self {
        TimeSeriesObserver {
            oracle,
            stride: stride.max(1),
            rows: Vec::new(),
        }
    }
}

impl Observer for TimeSeriesObserver {
    fn stride(&self) -> usize {
        self.stride
    }

    fn observe(&mut self, _step: usize, states: &[FieldState], grid: &Grid) {
        let (error_max, error_rms) = match &self.oracle {
            Some(spec) => states
                .iter()
                .enumerate()
                .map(|(k, st)| {
                    let r = metrics::error_report_component(st, spec, k, grid, &Default::default());
                    (r.error_max, r.error_rms)
                })
                .fold((0.0f64, 0.0f64), |acc, e| (acc.0.max(e.0), acc.1.max(e.1))),
            None => (f64::NAN, f64::NAN),
        };
        self.rows.push(TimeSeriesRow {
            t: states[0].t,
            error_max,
            error_rms,
            norm: metrics::norm(&states[0], grid),
        });
    }
}

/// Keeps copies of the state at the first steps reaching the given times.
pub struct SnapshotObserver {
    times: Vec<f64>,
    next: usize,
    pub snapshots: Vec<Vec<FieldState>>,
}

impl SnapshotObserver {
    pub fn new(mut times: Vec<f64>) -> Self {
        times.sort_by(f64::total_cmp);
        SnapshotObserver {
            times,
            next: 0,
            snapshots: Vec::new(),
        }
    }
}

impl Observer for SnapshotObserver {
    fn observe(&mut self, _step: usize, states: &[FieldState], _grid: &Grid) {
        // Half a step of slack absorbs the rounding in t = t0 + n Δt.
        while self.next < self.times.len() && states[0].t >= self.times[self.next] - 1e-9 {
            self.snapshots.push(states.to_vec());
            self.next += 1;
        }
    }
}

/// A configured integrator with preallocated work arrays.
pub struct Solver {
    cfg: SolverConfig,
    grid: Grid,
    table: StencilTable,
    /// `C̄_j / Δx²`.
    lap_weights: Vec<f64>,
    potential: Vec<f64>,
    dispersion: Vec<f64>,
    coupling: Vec<Vec<f64>>,
    edges: EdgeSource,
    series: SeriesCoefficients,
    /// `σ[k][j][i]`, the combined density series seen by component `k`.
    sigma: Vec<Vec<Vec<f64>>>,
    /// `ρ[m][j][i]`.
    rho: Vec<Vec<Vec<f64>>>,
}

impl Solver {
    pub fn new(cfg: SolverConfig, grid: Grid) -> Result<Self> {
        cfg.validate(&grid)?;
        let table = stencil_weights(cfg.p)?;
        let dx2 = grid.dx() * grid.dx();
        let lap_weights = table.weights().iter().map(|w| w / dx2).collect();
        let potential = cfg.potential.sample(&grid)?;
        let comps = cfg.equation.components();
        let edges = match (cfg.boundary_mode, &cfg.boundary_spec) {
            (BoundaryMode::Zero, _) => EdgeSource::Zero,
            (BoundaryMode::Exact, Some(spec)) => EdgeSource::Spec(*spec),
            (BoundaryMode::Cw, Some(spec)) => {
                let left = spec.edge_background(Edge::Left);
                let right = spec.edge_background(Edge::Right);
                EdgeSource::Cw((0..comps).map(|k| [left[k], right[k]]).collect())
            }
            (_, None) => unreachable!("validated above"),
        };
        let n = grid.n_x();
        let block = vec![vec![vec![0.0; n]; cfg.s]; comps];
        Ok(Solver {
            dispersion: cfg.equation.dispersion(),
            coupling: cfg.equation.coupling(),
            series: SeriesCoefficients::new(comps, cfg.s, n),
            sigma: block.clone(),
            rho: block,
            cfg,
            grid,
            table,
            lap_weights,
            potential,
            edges,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn table(&self) -> &StencilTable {
        &self.table
    }

    fn half(&self) -> usize {
        self.table.half_width()
    }

    fn check_states(&self, states: &[FieldState]) -> Result<()> {
        if states.len() != self.cfg.equation.components() {
            return Err(invalid(format!(
                "expected {} components, got {}",
                self.cfg.equation.components(),
                states.len()
            )));
        }
        for st in states {
            if st.u.len() != self.grid.n_x() || st.v.len() != self.grid.n_x() {
                return Err(invalid("state length does not match the grid"));
            }
        }
        Ok(())
    }

    /// Indices of the edge blocks, left then right.
    fn edge_indices(&self) -> impl Iterator<Item = usize> {
        let h = self.half();
        let n = self.grid.n_x();
        (0..h).chain(n - h..n)
    }

    /// Computes all coefficients for one step from `states` (interior by
    /// recursion, edges from the boundary data at `states[0].t`).
    pub fn derive_series(&mut self, states: &[FieldState]) -> Result<&SeriesCoefficients> {
        self.check_states(states)?;
        self.fill_series(states)?;
        Ok(&self.series)
    }

    /// Fills the edge blocks of `coeffs` for orders `1..=s` at `t_base`.
    pub fn apply_boundary(&self, coeffs: &mut SeriesCoefficients, t_base: f64) {
        let s = coeffs.order();
        let indices: Vec<usize> = self.edge_indices().collect();
        for k in 0..coeffs.a.len() {
            for &i in &indices {
                let c = self.edge_coefficients(k, i, t_base, s);
                for l in 1..=s {
                    coeffs.a[k][l][i] = c[l].re;
                    coeffs.b[k][l][i] = c[l].im;
                }
            }
        }
    }

    fn edge_coefficients(&self, k: usize, i: usize, t: f64, s: usize) -> Vec<Complex64> {
        let x = self.grid.x()[i];
        match &self.edges {
            EdgeSource::Zero => vec![Complex64::new(0.0, 0.0); s + 1],
            EdgeSource::Spec(spec) => spec.time_jet(k, x, t, s).coefficients().to_vec(),
            EdgeSource::Cw(waves) => {
                let side = usize::from(i >= self.half());
                SolutionSpec::Cw(waves[k][side])
                    .time_jet(0, x, t, s)
                    .coefficients()
                    .to_vec()
            }
        }
    }

    fn edge_value(&self, k: usize, i: usize, t: f64) -> Complex64 {
        let x = self.grid.x()[i];
        match &self.edges {
            EdgeSource::Zero => Complex64::new(0.0, 0.0),
            EdgeSource::Spec(spec) => spec.evaluate_component(k, x, t),
            EdgeSource::Cw(waves) => {
                let side = usize::from(i >= self.half());
                SolutionSpec::Cw(waves[k][side]).evaluate(x, t)
            }
        }
    }

    fn fill_series(&mut self, states: &[FieldState]) -> Result<()> {
        let s = self.cfg.s;
        let n = self.grid.n_x();
        let h = self.half();
        let comps = states.len();
        let t_base = states[0].t;

        for (k, st) in states.iter().enumerate() {
            self.series.a[k][0].copy_from_slice(&st.u);
            self.series.b[k][0].copy_from_slice(&st.v);
        }

        let mut edge_series = Vec::new();
        if !matches!(self.edges, EdgeSource::Zero) {
            for k in 0..comps {
                for i in self.edge_indices() {
                    edge_series.push((k, i, self.edge_coefficients(k, i, t_base, s)));
                }
            }
        }

        for l in 0..s {
            // Density series of order l.
            for m in 0..comps {
                let a = &self.series.a[m];
                let b = &self.series.b[m];
                let rho = &mut self.rho[m][l];
                for i in h..n - h {
                    let mut acc = 0.0;
                    for q in 0..=l {
                        acc += a[q][i] * a[l - q][i] + b[q][i] * b[l - q][i];
                    }
                    rho[i] = acc;
                }
            }
            for k in 0..comps {
                for i in h..n - h {
                    let mut acc = 0.0;
                    for m in 0..comps {
                        acc += self.coupling[k][m] * self.rho[m][l][i];
                    }
                    self.sigma[k][l][i] = acc;
                }
            }

            let inv = 1.0 / (l + 1) as f64;
            for k in 0..comps {
                let g0 = self.dispersion[k];
                let (lower_a, upper_a) = self.series.a[k].split_at_mut(l + 1);
                let (lower_b, upper_b) = self.series.b[k].split_at_mut(l + 1);
                let next_a = &mut upper_a[0];
                let next_b = &mut upper_b[0];
                let sigma = &self.sigma[k];
                let al = &lower_a[l];
                let bl = &lower_b[l];
                for i in h..n - h {
                    let (mut lap_a, mut lap_b) = (0.0, 0.0);
                    let (ca, cb) = (al[i], bl[i]);
                    for (idx, w) in self.lap_weights.iter().enumerate() {
                        let j = idx + 1;
                        lap_a += w * ((al[i + j] + al[i - j]) - 2.0 * ca);
                        lap_b += w * ((bl[i + j] + bl[i - j]) - 2.0 * cb);
                    }
                    let (mut nl_a, mut nl_b) = (0.0, 0.0);
                    for q in 0..=l {
                        let sg = sigma[l - q][i];
                        nl_a += lower_a[q][i] * sg;
                        nl_b += lower_b[q][i] * sg;
                    }
                    let v = self.potential[i];
                    let re = g0 * lap_a + nl_a - v * ca;
                    let im = g0 * lap_b + nl_b - v * cb;
                    // c_{l+1} = i F / (l+1)
                    next_a[i] = -im * inv;
                    next_b[i] = re * inv;
                }
            }

            // Edge data of order l+1 feed the stencil at the next order.
            for k in 0..comps {
                for i in self.edge_indices() {
                    self.series.a[k][l + 1][i] = 0.0;
                    self.series.b[k][l + 1][i] = 0.0;
                }
            }
            for (k, i, c) in &edge_series {
                self.series.a[*k][l + 1][*i] = c[l + 1].re;
                self.series.b[*k][l + 1][*i] = c[l + 1].im;
            }
        }
        Ok(())
    }

    /// Advances `states` by one step of size Δt.
    pub fn step(&mut self, states: &mut [FieldState], step_index: usize, t_next: f64) -> Result<()> {
        self.fill_series(states)?;
        let s = self.cfg.s;
        let dt = self.cfg.dt;
        let n = self.grid.n_x();
        let h = self.half();
        for (k, st) in states.iter_mut().enumerate() {
            let a = &self.series.a[k];
            let b = &self.series.b[k];
            for i in 0..n {
                let mut u = a[s][i];
                let mut v = b[s][i];
                for l in (0..s).rev() {
                    u = u * dt + a[l][i];
                    v = v * dt + b[l][i];
                }
                st.u[i] = u;
                st.v[i] = v;
            }
            st.t = t_next;
        }
        if self.cfg.boundary_update == BoundaryUpdate::Direct {
            for (k, st) in states.iter_mut().enumerate() {
                for i in (0..h).chain(n - h..n) {
                    let z = self.edge_value(k, i, t_next);
                    st.u[i] = z.re;
                    st.v[i] = z.im;
                }
            }
        }
        if states.iter().any(|st| !st.is_finite()) {
            return Err(Error::Divergence {
                step: step_index,
                last_good_time: t_next - dt,
            });
        }
        Ok(())
    }

    /// Runs `n_t` steps on any number of components.
    pub fn evolve_states(
        &mut self,
        initial: Vec<FieldState>,
        observer: &mut dyn Observer,
    ) -> Result<Vec<FieldState>> {
        self.check_states(&initial)?;
        if self.cfg.boundary_mode == BoundaryMode::Zero {
            let h = self.half();
            let n = self.grid.n_x();
            for st in &initial {
                let worst = (0..h)
                    .chain(n - h..n)
                    .map(|i| st.value(i).norm())
                    .fold(0.0, f64::max);
                if !(worst < 1e-8) {
                    return Err(invalid(format!(
                        "zero boundary mode needs a profile that vanishes at the edges (|ψ| = {worst:e})"
                    )));
                }
            }
        }
        if initial.iter().any(|st| !st.is_finite()) {
            return Err(Error::Divergence {
                step: 0,
                last_good_time: initial[0].t,
            });
        }
        let mut states = initial;
        let t0 = states[0].t;
        let stride = observer.stride().max(1);
        observer.observe(0, &states, &self.grid);
        for n in 1..=self.cfg.n_t {
            let t_next = t0 + n as f64 * self.cfg.dt;
            self.step(&mut states, n, t_next)?;
            if n % stride == 0 || n == self.cfg.n_t {
                observer.observe(n, &states, &self.grid);
            }
        }
        Ok(states)
    }

    pub fn evolve(&mut self, initial: FieldState, observer: &mut dyn Observer) -> Result<FieldState> {
        let mut out = self.evolve_states(vec![initial], observer)?;
        Ok(out.remove(0))
    }

    pub fn evolve_coupled(
        &mut self,
        initial: (FieldState, FieldState),
        observer: &mut dyn Observer,
    ) -> Result<(FieldState, FieldState)> {
        let mut out = self.evolve_states(vec![initial.0, initial.1], observer)?;
        let second = out.pop().expect("two components");
        let first = out.pop().expect("two components");
        Ok((first, second))
    }
}

/// Exact time Taylor coefficients of `spec` at every grid point.
pub fn exact_series(spec: &SolutionSpec, grid: &Grid, t: f64, s: usize) -> SeriesCoefficients {
    let comps = spec.components();
    let mut out = SeriesCoefficients::new(comps, s, grid.n_x());
    for k in 0..comps {
        for (i, &x) in grid.x().iter().enumerate() {
            let jet: Jet = spec.time_jet(k, x, t, s);
            for (l, c) in jet.coefficients().iter().enumerate() {
                out.a[k][l][i] = c.re;
                out.b[k][l][i] = c.im;
            }
        }
    }
    out
}
