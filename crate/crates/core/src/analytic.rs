//! Closed-form solutions used as initial profiles, boundary data and error
//! oracles.
//!
//! Every family is written once against [`Scalar`], so the same formula
//! yields plain values (`Complex64`) and exact Taylor coefficients in time or
//! space ([`Jet`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equation::{CoupledCoefficients, Equation};
use crate::error::{invalid, Result};
use crate::jet::{Jet, Scalar};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Uniform plane wave `A0 exp(i[(g2 A0² − k²/(4 g1))(t − t0) + k/(2 g1)(x − x0) + φ0])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CwParams {
    pub a0: f64,
    pub k: f64,
    pub x0: f64,
    pub t0: f64,
    pub phi0: f64,
    pub g1: f64,
    pub g2: f64,
}

impl CwParams {
    /// Temporal frequency `g2 A0² − k²/(4 g1)`.
    pub fn frequency(&self) -> f64 {
        self.g2 * self.a0 * self.a0 - self.k * self.k / (4.0 * self.g1)
    }

    fn eval<T: Scalar>(&self, x: T, t: T) -> T {
        let phase = t.add_real(-self.t0).scale(self.frequency())
            + x.add_real(-self.x0).scale(self.k / (2.0 * self.g1));
        phase.add_real(self.phi0).scale_c(I).exp().scale(self.a0)
    }
}

/// Parameters shared by the moving bright and dark solitons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub a0: f64,
    pub k: f64,
    pub x0: f64,
    pub t0: f64,
    pub phi0: f64,
    pub g1: f64,
    pub g2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeregrineParams {
    pub x0: f64,
    pub t0: f64,
    pub phi0: f64,
    pub g1: f64,
    pub g2: f64,
}

/// Two-soliton parameters; `λ_j = α_j + i ν_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoBrightParams {
    pub alpha: [f64; 2],
    pub nu: [f64; 2],
    pub x0: [f64; 2],
    pub phi0: [f64; 2],
    pub t0: f64,
    pub g1: f64,
    pub g2: f64,
}

/// Dark soliton in the first component bound to a bright soliton in the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarkBrightParams {
    pub a0: f64,
    pub k: f64,
    pub x0: f64,
    pub t0: f64,
    pub g: CoupledCoefficients,
}

impl DarkBrightParams {
    /// Squared background amplitude ratio of the dark component.
    fn background_ratio(&self) -> f64 {
        let g = &self.g;
        (g.g12 * g.g20 - g.g10 * g.g22) / (g.g11 * g.g20 - g.g10 * g.g21)
    }

    /// Inverse width of both components.
    fn inverse_width(&self) -> f64 {
        let g = &self.g;
        let radicand = (g.g12 * g.g21 - g.g11 * g.g22) / (2.0 * (g.g10 * g.g21 - g.g11 * g.g20));
        self.a0 * radicand.sqrt()
    }
}

/// A validated closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolutionSpec {
    Cw(CwParams),
    Bright(SolitonParams),
    Dark(SolitonParams),
    Peregrine(PeregrineParams),
    TwoBright(TwoBrightParams),
    DarkBright(DarkBrightParams),
}

/// Edge of the spatial domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Left,
    Right,
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(invalid("solution parameters must be finite"))
    }
}

impl SolutionSpec {
    pub fn cw(p: CwParams) -> Result<Self> {
        finite(&[p.a0, p.k, p.x0, p.t0, p.phi0, p.g1, p.g2])?;
        if p.g1 == 0.0 {
            return Err(invalid("CW solution needs g1 != 0"));
        }
        Ok(SolutionSpec::Cw(p))
    }

    pub fn bright(p: SolitonParams) -> Result<Self> {
        finite(&[p.a0, p.k, p.x0, p.t0, p.phi0, p.g1, p.g2])?;
        if p.g1 * p.g2 <= 0.0 {
            return Err(invalid("bright soliton requires g1·g2 > 0"));
        }
        Ok(SolutionSpec::Bright(p))
    }

    pub fn dark(p: SolitonParams) -> Result<Self> {
        finite(&[p.a0, p.k, p.x0, p.t0, p.phi0, p.g1, p.g2])?;
        if p.g1 * p.g2 >= 0.0 {
            return Err(invalid("dark soliton requires g1·g2 < 0"));
        }
        Ok(SolutionSpec::Dark(p))
    }

    pub fn peregrine(p: PeregrineParams) -> Result<Self> {
        finite(&[p.x0, p.t0, p.phi0, p.g1, p.g2])?;
        if p.g2 <= 0.0 {
            return Err(invalid("Peregrine soliton requires g2 > 0"));
        }
        if p.g1 <= 0.0 {
            return Err(invalid("Peregrine soliton requires g1 > 0 (nonsingular denominator)"));
        }
        Ok(SolutionSpec::Peregrine(p))
    }

    pub fn two_bright(p: TwoBrightParams) -> Result<Self> {
        finite(&[
            p.alpha[0], p.alpha[1], p.nu[0], p.nu[1], p.x0[0], p.x0[1], p.phi0[0], p.phi0[1],
            p.t0, p.g1, p.g2,
        ])?;
        if p.g1 <= 0.0 || p.g2 <= 0.0 {
            return Err(invalid("two-bright soliton requires g1 > 0 and g2 > 0"));
        }
        if p.alpha.iter().any(|&a| a <= 0.0) {
            return Err(invalid("two-bright soliton requires alpha_j > 0"));
        }
        let l1 = Complex64::new(p.alpha[0], p.nu[0]);
        let l2 = Complex64::new(p.alpha[1], p.nu[1]);
        if (l1 - l2).norm() < 1e-9 {
            return Err(invalid("two-bright eigenvalues coincide (|λ1 − λ2| < 1e-9)"));
        }
        Ok(SolutionSpec::TwoBright(p))
    }

    pub fn dark_bright(p: DarkBrightParams) -> Result<Self> {
        let g = &p.g;
        finite(&[p.a0, p.k, p.x0, p.t0, g.g10, g.g11, g.g12, g.g20, g.g21, g.g22])?;
        if g.g10 == 0.0 || g.g20 == 0.0 {
            return Err(invalid("dark-bright soliton requires nonzero dispersion"));
        }
        let ratio = p.background_ratio();
        let width =
            (g.g12 * g.g21 - g.g11 * g.g22) / (2.0 * (g.g10 * g.g21 - g.g11 * g.g20));
        if !(ratio > 0.0 && width > 0.0) {
            return Err(invalid(
                "dark-bright soliton requires positive radicands for amplitude and width",
            ));
        }
        Ok(SolutionSpec::DarkBright(p))
    }

    /// Number of field components (2 for the coupled dark-bright pair).
    pub fn components(&self) -> usize {
        match self {
            SolutionSpec::DarkBright(_) => 2,
            _ => 1,
        }
    }

    /// The equation this solution satisfies.
    pub fn equation(&self) -> Equation {
        match *self {
            SolutionSpec::Cw(p) => Equation::Scalar { g1: p.g1, g2: p.g2 },
            SolutionSpec::Bright(p) | SolutionSpec::Dark(p) => {
                Equation::Scalar { g1: p.g1, g2: p.g2 }
            }
            SolutionSpec::Peregrine(p) => Equation::Scalar { g1: p.g1, g2: p.g2 },
            SolutionSpec::TwoBright(p) => Equation::Scalar { g1: p.g1, g2: p.g2 },
            SolutionSpec::DarkBright(p) => Equation::Coupled(p.g),
        }
    }

    /// `ψ(x, t)` of the first (or only) component.
    pub fn evaluate(&self, x: f64, t: f64) -> Complex64 {
        self.evaluate_component(0, x, t)
    }

    /// `(ψ1, ψ2)`; the second entry is zero for scalar families.
    pub fn evaluate_pair(&self, x: f64, t: f64) -> (Complex64, Complex64) {
        let second = if self.components() == 2 {
            self.evaluate_component(1, x, t)
        } else {
            Complex64::new(0.0, 0.0)
        };
        (self.evaluate_component(0, x, t), second)
    }

    pub fn evaluate_component(&self, component: usize, x: f64, t: f64) -> Complex64 {
        self.eval_generic(
            component,
            Complex64::new(x, 0.0),
            Complex64::new(t, 0.0),
        )
    }

    /// Taylor expansion in time around `t_base`: coefficient `l` is
    /// `(1/l!) ∂^l ψ/∂t^l` at `(x, t_base)`, for `l = 0..=order`.
    pub fn time_jet(&self, component: usize, x: f64, t_base: f64, order: usize) -> Jet {
        self.eval_generic(
            component,
            Jet::constant(Complex64::new(x, 0.0), order),
            Jet::variable(t_base, order),
        )
    }

    /// Taylor expansion in space around `x_base` at fixed `t`.
    pub fn space_jet(&self, component: usize, x_base: f64, t: f64, order: usize) -> Jet {
        self.eval_generic(
            component,
            Jet::variable(x_base, order),
            Jet::constant(Complex64::new(t, 0.0), order),
        )
    }

    /// Time Taylor coefficients `c_0..=c_s` of one component at `(x, t_base)`.
    pub fn boundary_taylor_coefficients(
        &self,
        component: usize,
        x: f64,
        t_base: f64,
        s: usize,
    ) -> Result<Vec<Complex64>> {
        if s == 0 {
            return Err(invalid("series order s must be at least 1"));
        }
        Ok(self.time_jet(component, x, t_base, s).coefficients().to_vec())
    }

    fn eval_generic<T: Scalar>(&self, component: usize, x: T, t: T) -> T {
        assert!(component < self.components(), "component out of range");
        match *self {
            SolutionSpec::Cw(p) => p.eval(x, t),
            SolutionSpec::Bright(p) => {
                let amp = p.a0 * (2.0 * p.g1 / p.g2).sqrt();
                let arg = (x.clone() - t.scale(p.k)).add_real(-p.x0).scale(p.a0);
                let phase = x.add_real(-p.x0).scale(p.k / (2.0 * p.g1))
                    + t.add_real(-p.t0)
                        .scale((4.0 * p.a0 * p.a0 * p.g1 * p.g1 - p.k * p.k) / (4.0 * p.g1));
                arg.sech().scale(amp) * phase.add_real(p.phi0).scale_c(I).exp()
            }
            SolutionSpec::Dark(p) => {
                let amp = p.a0 * (-2.0 * p.g1 / p.g2).sqrt();
                let arg = (x.clone() - t.scale(p.k)).add_real(-p.x0).scale(p.a0);
                let phase = x.add_real(-p.x0).scale(-p.k / (2.0 * p.g1))
                    + t.add_real(-p.t0).scale(
                        (8.0 * p.g1 * p.g1 * p.a0 * p.a0 + p.k * p.k) / (4.0 * p.g1),
                    );
                arg.tanh().scale(amp) * phase.add_real(p.phi0).scale_c(-I).exp()
            }
            SolutionSpec::Peregrine(p) => {
                let tau = t.add_real(-p.t0);
                let xi = x.add_real(-p.x0);
                let num = tau.scale_c(8.0 * I).add_real(4.0);
                let den = (tau.clone() * tau.clone()).scale(4.0)
                    + (xi.clone() * xi).scale(2.0 / p.g1);
                let ratio = num / den.add_real(1.0);
                let phase = tau.add_real(p.phi0).scale_c(I).exp();
                ratio.add_real(-1.0).scale(1.0 / p.g2.sqrt()) * phase
            }
            SolutionSpec::TwoBright(p) => two_bright(&p, x, t),
            SolutionSpec::DarkBright(p) => dark_bright(&p, component, x, t),
        }
    }

    /// Plane wave matching the solution's background at one edge, per
    /// component. Zero-background components map to a zero-amplitude wave.
    pub fn edge_background(&self, edge: Edge) -> Vec<CwParams> {
        let flip = if edge == Edge::Left {
            std::f64::consts::PI
        } else {
            0.0
        };
        let zero = |g1: f64, g2: f64| CwParams {
            a0: 0.0,
            k: 0.0,
            x0: 0.0,
            t0: 0.0,
            phi0: 0.0,
            g1,
            g2,
        };
        match *self {
            SolutionSpec::Cw(p) => vec![p],
            SolutionSpec::Bright(p) => vec![zero(p.g1, p.g2)],
            SolutionSpec::TwoBright(p) => vec![zero(p.g1, p.g2)],
            SolutionSpec::Dark(p) => vec![CwParams {
                a0: p.a0 * (-2.0 * p.g1 / p.g2).sqrt(),
                k: p.k,
                x0: p.x0,
                t0: p.t0,
                phi0: -p.phi0 + flip,
                g1: p.g1,
                g2: p.g2,
            }],
            SolutionSpec::Peregrine(p) => vec![CwParams {
                a0: 1.0 / p.g2.sqrt(),
                k: 0.0,
                x0: p.x0,
                t0: p.t0,
                phi0: p.phi0 + std::f64::consts::PI,
                g1: p.g1,
                g2: p.g2,
            }],
            SolutionSpec::DarkBright(p) => vec![
                CwParams {
                    a0: p.a0 * p.background_ratio().sqrt(),
                    k: p.k,
                    x0: p.x0,
                    t0: p.t0,
                    phi0: flip,
                    g1: p.g.g10,
                    g2: p.g.g11,
                },
                zero(p.g.g20, p.g.g22),
            ],
        }
    }
}

fn two_bright<T: Scalar>(p: &TwoBrightParams, x: T, t: T) -> T {
    let lambda = [
        Complex64::new(p.alpha[0], p.nu[0]),
        Complex64::new(p.alpha[1], p.nu[1]),
    ];
    let m = |j: usize, k: usize| 1.0 / (lambda[j] + lambda[k].conj());
    let scale = 1.0 / (2.0 * p.g1).sqrt();
    let gamma: Vec<T> = (0..2)
        .map(|j| {
            let spatial = x.add_real(-p.x0[j]).scale_c(lambda[j] * scale);
            let temporal = t
                .add_real(-p.t0)
                .scale_c(lambda[j] * lambda[j] * 0.5)
                .add_real(p.phi0[j])
                .scale_c(I);
            (spatial + temporal).exp()
        })
        .collect();
    let inv: Vec<T> = gamma.iter().map(|g| g.real_like(1.0) / g.clone()).collect();
    let cj: Vec<T> = gamma.iter().map(Scalar::conj).collect();

    let s11 = inv[0].clone() + cj[0].clone(); // γ1⁻¹ + γ1*
    let s22 = inv[1].clone() + cj[1].clone(); // γ2⁻¹ + γ2*
    let s12 = inv[0].clone() + cj[1].clone(); // γ1⁻¹ + γ2*
    let s21 = cj[0].clone() + inv[1].clone(); // γ1* + γ2⁻¹

    let den = (s21.clone() * s12.clone()).scale_c(m(0, 1) * m(1, 0))
        - (s11.clone() * s22.clone()).scale_c(m(0, 0) * m(1, 1));
    let psi1 = s12.scale_c(m(0, 1)) - s22.scale_c(m(1, 1));
    let psi2 = s21.scale_c(m(1, 0)) - s11.scale_c(m(0, 0));
    ((psi1 + psi2) / den).scale(1.0 / p.g2.sqrt())
}

fn dark_bright<T: Scalar>(p: &DarkBrightParams, component: usize, x: T, t: T) -> T {
    let g = &p.g;
    let xi = x.add_real(-p.x0);
    let tau = t.add_real(-p.t0);
    let arg = (xi.clone() - tau.scale(p.k)).scale(p.inverse_width());
    let a2 = p.a0 * p.a0;
    if component == 0 {
        let ratio = p.background_ratio();
        let omega = g.g11 * a2 * ratio - p.k * p.k / (4.0 * g.g10);
        let phase = tau.scale(omega) + xi.scale(p.k / (2.0 * g.g10));
        arg.tanh().scale(p.a0 * ratio.sqrt()) * phase.scale_c(I).exp()
    } else {
        // Bright component: Galilean wavenumber k/(2 g20) and the frequency
        // fixed by the bound-state condition.
        let d = g.g11 * g.g20 - g.g10 * g.g21;
        let omega_num = 2.0 * g.g12 * g.g20 * g.g20 * g.g21 * a2
            + 2.0 * g.g11 * g.g20 * g.g20 * g.g22 * a2
            - 4.0 * g.g10 * g.g21 * g.g20 * g.g22 * a2
            - p.k * p.k * d;
        let phase = tau.scale(omega_num / (4.0 * g.g20 * d)) + xi.scale(p.k / (2.0 * g.g20));
        arg.sech().scale(p.a0) * phase.scale_c(I).exp()
    }
}
