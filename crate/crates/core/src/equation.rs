use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Coefficients of the two-component system
///
/// ```text
/// i ψ1_t + g10 ψ1_xx + (g11 |ψ1|² + g12 |ψ2|²) ψ1 = 0
/// i ψ2_t + g20 ψ2_xx + (g21 |ψ1|² + g22 |ψ2|²) ψ2 = 0
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledCoefficients {
    pub g10: f64,
    pub g11: f64,
    pub g12: f64,
    pub g20: f64,
    pub g21: f64,
    pub g22: f64,
}

/// The equation being integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation {
    /// `i ψ_t + g1 ψ_xx + g2 |ψ|² ψ − V(x) ψ = 0`.
    Scalar { g1: f64, g2: f64 },
    Coupled(CoupledCoefficients),
}

impl Equation {
    pub fn components(&self) -> usize {
        match self {
            Equation::Scalar { .. } => 1,
            Equation::Coupled(_) => 2,
        }
    }

    /// Dispersion coefficient of each component.
    pub fn dispersion(&self) -> Vec<f64> {
        match *self {
            Equation::Scalar { g1, .. } => vec![g1],
            Equation::Coupled(c) => vec![c.g10, c.g20],
        }
    }

    /// `coupling[k][m]` multiplies `|ψ_m|²` in the nonlinearity of component `k`.
    pub fn coupling(&self) -> Vec<Vec<f64>> {
        match *self {
            Equation::Scalar { g2, .. } => vec![vec![g2]],
            Equation::Coupled(c) => vec![vec![c.g11, c.g12], vec![c.g21, c.g22]],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all: Vec<f64> = match *self {
            Equation::Scalar { g1, g2 } => vec![g1, g2],
            Equation::Coupled(c) => vec![c.g10, c.g11, c.g12, c.g20, c.g21, c.g22],
        };
        if all.iter().any(|g| !g.is_finite()) {
            return Err(invalid("equation coefficients must be finite"));
        }
        if self.dispersion().contains(&0.0) {
            return Err(invalid("dispersion coefficient must be nonzero"));
        }
        Ok(())
    }
}
