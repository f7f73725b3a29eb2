//! Error norms, convergence rates and a-priori error estimates.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::SolutionSpec;
use crate::engine::{FieldState, Grid};
use crate::error::{Error, Result};
use crate::jet::{Jet, Scalar};
use crate::stencil::StencilTable;

/// Fractions of the grid used for the edge/centre error split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Windows {
    /// Share of points in each edge window.
    pub boundary: f64,
    /// Share of points in the central window.
    pub center: f64,
}

impl Default for Windows {
    fn default() -> Self {
        Windows {
            boundary: 0.05,
            center: 0.10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub error_max: f64,
    pub error_rms: f64,
    /// `||ψ_num| − |ψ_exact||` per grid point.
    pub profile: Vec<f64>,
    pub boundary_error: f64,
    pub center_error: f64,
    pub t_eval: f64,
}

/// Error of the first (or only) component against the oracle at `numeric.t`.
pub fn error_report(
    numeric: &FieldState,
    oracle: &SolutionSpec,
    grid: &Grid,
    windows: &Windows,
) -> ErrorReport {
    error_report_component(numeric, oracle, 0, grid, windows)
}

pub fn error_report_component(
    numeric: &FieldState,
    oracle: &SolutionSpec,
    component: usize,
    grid: &Grid,
    windows: &Windows,
) -> ErrorReport {
    let exact: Vec<f64> = grid
        .x()
        .iter()
        .map(|&x| oracle.evaluate_component(component, x, numeric.t).norm())
        .collect();
    error_report_against(numeric, &exact, windows)
}

/// Error against a sampled reference magnitude.
pub fn error_report_against(numeric: &FieldState, exact: &[f64], windows: &Windows) -> ErrorReport {
    assert_eq!(numeric.len(), exact.len(), "reference length differs from state");
    let profile: Vec<f64> = numeric
        .magnitude()
        .iter()
        .zip(exact)
        .map(|(m, e)| (m - e).abs())
        .collect();
    let n = profile.len();
    let max_of = |r: std::ops::Range<usize>| profile[r].iter().copied().fold(0.0, f64::max);
    let edge = ((windows.boundary * n as f64).ceil() as usize).clamp(1, n);
    let center = ((windows.center * n as f64).ceil() as usize).clamp(1, n);
    let c0 = (n - center) / 2;
    let error_rms = (profile.iter().map(|e| e * e).sum::<f64>() / n as f64).sqrt();
    ErrorReport {
        error_max: max_of(0..n),
        error_rms,
        boundary_error: max_of(0..edge).max(max_of(n - edge..n)),
        center_error: max_of(c0..c0 + center),
        profile,
        t_eval: numeric.t,
    }
}

/// `∫|ψ|² dx`: trapezoidal on bounded grids, a plain sum on periodic ones.
pub fn norm(state: &FieldState, grid: &Grid) -> f64 {
    let n = state.len();
    let density = |i: usize| state.u[i] * state.u[i] + state.v[i] * state.v[i];
    if grid.is_periodic() {
        return (0..n).map(density).sum::<f64>() * grid.dx();
    }
    let inner: f64 = (1..n - 1).map(density).sum();
    (inner + 0.5 * (density(0) + density(n - 1))) * grid.dx()
}

/// `R = log(e_coarse/e_fine) / log(n_fine/n_coarse)`; positive when the
/// error falls under refinement.
pub fn convergence_rate(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Result<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0) || !(e_coarse.is_finite() && e_fine.is_finite()) {
        return Err(Error::UndefinedRate(format!(
            "errors must be positive and finite, got {e_coarse:e} and {e_fine:e}"
        )));
    }
    if n_coarse == 0 || n_fine == 0 || n_coarse == n_fine {
        return Err(Error::UndefinedRate(format!(
            "point counts must be positive and distinct, got {n_coarse} and {n_fine}"
        )));
    }
    Ok((e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln())
}

/// Truncation estimate `max_x Δt^{s+1}/(s+1)! |∂^{s+1}ψ/∂t^{s+1}|` at time `t`.
///
/// The time derivative comes from the exact Taylor expansion of the
/// closed form, so `Δt^{s+1} |c_{s+1}|` is the whole estimate.
pub fn predict_error_s(oracle: &SolutionSpec, component: usize, s: usize, dt: f64, grid: &Grid, t: f64) -> f64 {
    grid.x()
        .iter()
        .map(|&x| {
            let jet = oracle.time_jet(component, x, t, s + 1);
            dt.powi(s as i32 + 1) * jet.coefficients()[s + 1].norm()
        })
        .fold(0.0, f64::max)
}

/// `∂^{p+1}|ψ|/∂x^{p+1}` at `(x, t)`, or `None` where `|ψ|` is too close to
/// zero for its expansion to be meaningful.
fn magnitude_derivative(oracle: &SolutionSpec, component: usize, p: usize, x: f64, t: f64) -> Option<f64> {
    let order = p + 1;
    let psi: Jet = oracle.space_jet(component, x, t, order);
    let density = psi.clone() * psi.conj();
    if density.value().re < 1e-12 {
        return None;
    }
    // Keep only the real part: the imaginary residue is round-off.
    let density = Jet::from_coefficients(
        &density
            .coefficients()
            .iter()
            .map(|c| Complex64::new(c.re, 0.0))
            .collect::<Vec<_>>(),
    );
    let coefficient = density.sqrt().coefficients()[order].re;
    Some(coefficient * factorial(order))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Spatial truncation estimate for a `p`-point stencil.
///
/// `saturated = false` gives `max Δt ∂/∂t [Δx^{p−1}/(p+1)! ∂^{p+1}|ψ|/∂x^{p+1}]`;
/// `saturated = true` drops the `Δt ∂/∂t` factor, which is the regime where
/// the time-stepping error has fallen below the stencil error.
#[allow(clippy::too_many_arguments)]
pub fn predict_error_p(
    oracle: &SolutionSpec,
    component: usize,
    p: usize,
    dx: f64,
    dt: f64,
    grid: &Grid,
    t: f64,
    saturated: bool,
) -> f64 {
    let scale = dx.powi(p as i32 - 1) / factorial(p + 1);
    let h = 1e-3;
    grid.x()
        .iter()
        .filter_map(|&x| {
            if saturated {
                magnitude_derivative(oracle, component, p, x, t).map(f64::abs)
            } else {
                let f = |tt: f64| magnitude_derivative(oracle, component, p, x, tt);
                let (m2, m1, p1, p2) = (f(t - 2.0 * h)?, f(t - h)?, f(t + h)?, f(t + 2.0 * h)?);
                let dfdt = (m2 - p2 + 8.0 * (p1 - m1)) / (12.0 * h);
                Some(dt * dfdt.abs())
            }
        })
        .fold(0.0, f64::max)
        * scale
}

/// Sharp single-step estimate of the stencil error.
///
/// One step commits the stencil error of `ψ''` once, weighted by `Δt |g0|`.
/// Unlike [`predict_error_p`], this uses the stencil's own error
/// coefficients (first two nonvanishing orders) and the derivatives of `ψ`
/// itself, so it tracks the measured one-step error closely.
pub fn predict_step_error_p(
    oracle: &SolutionSpec,
    component: usize,
    table: &StencilTable,
    dx: f64,
    dt: f64,
    grid: &Grid,
    t: f64,
) -> f64 {
    let p = table.p();
    let orders = [p + 1, p + 3];
    let terms: Vec<(usize, f64)> = orders
        .iter()
        .map(|&m| (m, table.error_coefficient(m as u32).abs() * dx.powi(m as i32 - 2)))
        .collect();
    let g0 = oracle.equation().dispersion()[component].abs();
    grid.x()
        .iter()
        .map(|&x| {
            let jet = oracle.space_jet(component, x, t, p + 3);
            terms
                .iter()
                .map(|&(m, w)| w * jet.coefficients()[m].norm() * factorial(m))
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
        * dt
        * g0
}

/// Least-squares fit of `y = C x^q` in log–log coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// `ln y = ln_intercept + q ln x`.
    pub ln_intercept: f64,
    /// `log10 y = log10_intercept + q log10 x`.
    pub log10_intercept: f64,
}

pub fn power_law_fit(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidParameter(
            "power-law fit needs at least two points with positive coordinates".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("power-law fit needs distinct x values".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let ln_intercept = my - exponent * mx;
    Ok(PowerLawFit {
        exponent,
        prefactor: ln_intercept.exp(),
        ln_intercept,
        log10_intercept: ln_intercept / std::f64::consts::LN_10,
    })
}
