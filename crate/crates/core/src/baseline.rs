//! Split-step Fourier reference solver.
//!
//! Strang splitting on a periodic grid: half a step of the pointwise phase
//! rotation `ψ ← ψ exp(i Δt/2 (g2|ψ|² − V))`, a full linear step
//! `ψ̂ ← ψ̂ exp(−i g1 κ² Δt)` in Fourier space, then the other half step.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::engine::{FieldState, Grid, Observer, PotentialSpec};
use crate::error::{invalid, Error, Result};

/// Twiddle factors and wavenumbers for one transform size.
#[derive(Debug, Clone)]
pub struct SpectralWorkspace {
    n: usize,
    /// `exp(−2πi k/n)` for `k < n/2`.
    twiddles: Vec<Complex64>,
    wavenumbers: Vec<f64>,
}

impl SpectralWorkspace {
    /// Workspace for `n` points on a periodic domain of length `length`.
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(invalid(format!("FFT length must be a power of two, got {n}")));
        }
        let twiddles = (0..n / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            .collect();
        let wavenumbers = (0..n)
            .map(|m| {
                let m = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
                2.0 * PI * m / length
            })
            .collect();
        Ok(SpectralWorkspace {
            n,
            twiddles,
            wavenumbers,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// In-place forward transform `X_m = Σ_j x_j e^{−2πi jm/n}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// In-place inverse transform, including the `1/n` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / self.n as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        assert_eq!(data.len(), n, "buffer length does not match the workspace");
        let bits = n.trailing_zeros();
        if bits > 0 {
            for i in 0..n {
                let j = i.reverse_bits() >> (usize::BITS - bits);
                if i < j {
                    data.swap(i, j);
                }
            }
        }
        let mut len = 2;
        while len <= n {
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let even = data[start + k];
                    let odd = data[start + k + len / 2] * w;
                    data[start + k] = even + odd;
                    data[start + k + len / 2] = even - odd;
                }
            }
            len <<= 1;
        }
    }
}

/// Allocating forward transform.
pub fn fft(input: &[Complex64]) -> Result<Vec<Complex64>> {
    let ws = SpectralWorkspace::new(input.len(), 1.0)?;
    let mut out = input.to_vec();
    ws.forward(&mut out);
    Ok(out)
}

/// Allocating inverse transform.
pub fn ifft(input: &[Complex64]) -> Result<Vec<Complex64>> {
    let ws = SpectralWorkspace::new(input.len(), 1.0)?;
    let mut out = input.to_vec();
    ws.inverse(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitStepConfig {
    pub g1: f64,
    pub g2: f64,
    pub potential: PotentialSpec,
    pub dt: f64,
    pub n_t: usize,
}

/// Runs `n_t` Strang steps from `initial` on the periodic `grid`.
pub fn split_step_evolve(
    initial: FieldState,
    grid: &Grid,
    cfg: &SplitStepConfig,
    observer: &mut dyn Observer,
) -> Result<FieldState> {
    if !grid.is_periodic() {
        return Err(invalid("split-step needs a periodic grid"));
    }
    if !(cfg.g1.is_finite() && cfg.g2.is_finite()) {
        return Err(invalid("equation coefficients must be finite"));
    }
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
        return Err(invalid(format!("time step must be positive, got {}", cfg.dt)));
    }
    if initial.len() != grid.n_x() {
        return Err(invalid("state length does not match the grid"));
    }
    let ws = SpectralWorkspace::new(grid.n_x(), grid.length())?;
    let potential = cfg.potential.sample(grid)?;
    let propagator: Vec<Complex64> = ws
        .wavenumbers()
        .iter()
        .map(|k| Complex64::from_polar(1.0, -cfg.g1 * k * k * cfg.dt))
        .collect();
    let half = 0.5 * cfg.dt;
    let nonlinear = |psi: &mut [Complex64]| {
        for (z, v) in psi.iter_mut().zip(&potential) {
            let phase = half * (cfg.g2 * z.norm_sqr() - v);
            *z *= Complex64::from_polar(1.0, phase);
        }
    };

    let t0 = initial.t;
    let mut psi: Vec<Complex64> = (0..initial.len()).map(|i| initial.value(i)).collect();
    let stride = observer.stride().max(1);
    observer.observe(0, std::slice::from_ref(&initial), grid);
    let mut state = initial;
    for n in 1..=cfg.n_t {
        nonlinear(&mut psi);
        ws.forward(&mut psi);
        for (z, w) in psi.iter_mut().zip(&propagator) {
            *z *= w;
        }
        ws.inverse(&mut psi);
        nonlinear(&mut psi);
        let t = t0 + n as f64 * cfg.dt;
        if psi.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Divergence {
                step: n,
                last_good_time: t - cfg.dt,
            });
        }
        if n % stride == 0 || n == cfg.n_t {
            write_back(&psi, &mut state, t);
            observer.observe(n, std::slice::from_ref(&state), grid);
        }
    }
    write_back(&psi, &mut state, t0 + cfg.n_t as f64 * cfg.dt);
    Ok(state)
}

fn write_back(psi: &[Complex64], state: &mut FieldState, t: f64) {
    for (i, z) in psi.iter().enumerate() {
        state.u[i] = z.re;
        state.v[i] = z.im;
    }
    state.t = t;
}
