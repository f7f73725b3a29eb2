//! Central-difference stencils for the second derivative.
//!
//! A `p`-point stencil (odd `p ≥ 3`) approximates `f''(x)` by
//!
//! ```text
//! f''(x) ≈ 1/Δx² · Σ_{j=1}^{h} C̄_j [f(x+jΔx) + f(x−jΔx) − 2f(x)],   h = (p−1)/2,
//! ```
//!
//! where the raw weights `C_j` cancel every even Taylor term above the second
//! (`Σ_j C_j j^{2i} = 0` for `i = 2..h`) and `C̄_j = C_j / Σ_j C_j j²`.
//! Generation is exact: the system is solved over the rationals with `C_1`
//! pinned, then rescaled to the primitive integer vector with a positive
//! leading weight. Floats are derived once from the exact values.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{invalid, Result};
use crate::rational::{self, int, Rational};

/// An immutable `p`-point second-derivative stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilTable {
    p: usize,
    raw_weights: Vec<Rational>,
    normalizer: Rational,
    normalized: Vec<Rational>,
    weights: Vec<f64>,
    center_weight: f64,
}

/// Builds the `p`-point table. `p` must be odd and at least 3.
pub fn stencil_weights(p: usize) -> Result<StencilTable> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(invalid(format!(
            "stencil size must be an odd integer >= 3, got {p}"
        )));
    }
    let half = (p - 1) / 2;

    // C_1 = 1; the remaining h−1 unknowns satisfy Σ_{j≥2} C_j j^{2i} = −1 for i = 2..h.
    let mut direction = vec![int(1)];
    if half > 1 {
        let matrix: Vec<Vec<Rational>> = (2..=half)
            .map(|i| {
                (2..=half)
                    .map(|j| Rational::from_integer(BigInt::from(j).pow(2 * i as u32)))
                    .collect()
            })
            .collect();
        let rhs = vec![int(-1); half - 1];
        let rest = rational::solve(matrix, rhs)
            .expect("Vandermonde-type stencil system is nonsingular");
        direction.extend(rest);
    }

    let raw_weights: Vec<Rational> = rational::primitive_integer_vector(&direction)
        .into_iter()
        .map(Rational::from_integer)
        .collect();
    let normalizer: Rational = raw_weights
        .iter()
        .enumerate()
        .map(|(idx, c)| c * int(((idx + 1) * (idx + 1)) as i64))
        .fold(Rational::zero(), |acc, x| acc + x);
    let normalized: Vec<Rational> = raw_weights.iter().map(|c| c / &normalizer).collect();
    let weights: Vec<f64> = normalized.iter().map(rational::to_f64).collect();
    let center_exact = normalized
        .iter()
        .fold(Rational::zero(), |acc, c| acc + c)
        * int(-2);
    let center_weight = rational::to_f64(&center_exact);

    Ok(StencilTable {
        p,
        raw_weights,
        normalizer,
        normalized,
        weights,
        center_weight,
    })
}

impl StencilTable {
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of neighbours on each side, `(p−1)/2`.
    pub fn half_width(&self) -> usize {
        (self.p - 1) / 2
    }

    /// Raw weights `C_j`, `j = 1..h`, as the primitive integer vector.
    pub fn raw_weights(&self) -> &[Rational] {
        &self.raw_weights
    }

    /// `Σ_j C_j j²`, the common denominator of the integer layout.
    pub fn normalizer(&self) -> &Rational {
        &self.normalizer
    }

    /// Exact `C̄_j`.
    pub fn normalized_exact(&self) -> &[Rational] {
        &self.normalized
    }

    /// `C̄_j` rounded once to binary64.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `−2 Σ_j C̄_j`, the coefficient of `f(x)`.
    pub fn center_weight(&self) -> f64 {
        self.center_weight
    }

    /// Integer coefficients in the `1/(D Δx²) [ … ]` layout: returns
    /// `(D, w_0, [w_1, …, w_h])` where `w_0 = −2 Σ C_j` multiplies `f(x)`.
    pub fn integer_layout(&self) -> (BigInt, BigInt, Vec<BigInt>) {
        let ints: Vec<BigInt> = self.raw_weights.iter().map(|r| r.to_integer()).collect();
        let center = ints.iter().fold(BigInt::zero(), |acc, x| acc + x) * -2;
        (self.normalizer.to_integer(), center, ints)
    }

    /// Exact stencil value on rational samples `f(x+jΔx)` for `j = −h..=h` with `Δx = 1`.
    pub fn apply_exact(&self, samples: &[Rational]) -> Rational {
        let h = self.half_width();
        assert_eq!(samples.len(), 2 * h + 1);
        let mid = &samples[h];
        self.normalized
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (idx, c)| {
                let j = idx + 1;
                acc + c * (&samples[h + j] + &samples[h - j] - mid * int(2))
            })
    }

    /// Coefficient of `Δx^{m−2} f^{(m)}` in the stencil's error expansion,
    /// `2 Σ_j C̄_j j^m / m!` for even `m`. It vanishes for `4 ≤ m ≤ p − 1`.
    pub fn error_coefficient(&self, m: u32) -> f64 {
        assert!(m >= 2 && m.is_multiple_of(2), "error expansion has even orders only");
        let moment = self
            .normalized
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (idx, c)| {
                acc + c * Rational::from_integer(BigInt::from(idx + 1).pow(m))
            });
        let factorial = (1..=m as i64).fold(int(1), |acc, k| acc * int(k));
        rational::to_f64(&(moment * int(2) / factorial))
    }

    /// Largest magnitude of the stencil's Fourier symbol,
    /// `max_θ Σ_j C̄_j (2 − 2 cos jθ)`. The discrete operator's spectrum lies in
    /// `[−symbol_max/Δx², 0]`, which bounds stable explicit time steps.
    pub fn symbol_max(&self) -> f64 {
        let samples = 4096;
        (0..=samples)
            .map(|k| {
                let theta = std::f64::consts::PI * k as f64 / samples as f64;
                self.weights
                    .iter()
                    .enumerate()
                    .map(|(idx, c)| c * (2.0 - 2.0 * ((idx + 1) as f64 * theta).cos()))
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Text rendering of the integer formula, e.g.
    /// `f''_5(x) = 1/(12 Δx²) [ -1 f(x+2Δx) + 16 f(x+Δx) - 30 f(x) + 16 f(x-Δx) - 1 f(x-2Δx) ]`.
    pub fn formula(&self) -> String {
        let (den, center, ints) = self.integer_layout();
        let h = self.half_width();
        let mut terms: Vec<(BigInt, String)> = Vec::with_capacity(2 * h + 1);
        for j in (1..=h).rev() {
            terms.push((ints[j - 1].clone(), shift_label(j as i64)));
        }
        terms.push((center, "f(x)".to_string()));
        for j in 1..=h {
            terms.push((ints[j - 1].clone(), shift_label(-(j as i64))));
        }
        let mut out = format!("f''_{}(x) = 1/({} Δx²) [", self.p, den);
        for (k, (coef, label)) in terms.iter().enumerate() {
            let sign = if coef.is_negative() { "-" } else { "+" };
            if k == 0 {
                let lead = if coef.is_negative() { "-" } else { "" };
                let _ = write!(out, " {lead}{} {label}", coef.abs());
            } else {
                let _ = write!(out, " {sign} {} {label}", coef.abs());
            }
        }
        out.push_str(" ]");
        out
    }
}

fn shift_label(j: i64) -> String {
    match j {
        1 => "f(x+Δx)".to_string(),
        -1 => "f(x-Δx)".to_string(),
        j if j > 0 => format!("f(x+{j}Δx)"),
        j => format!("f(x-{}Δx)", -j),
    }
}

/// Applies the stencil at interior index `i` (0-based) of `field`.
///
/// Panics if the full stencil does not fit around `i`.
pub fn apply_second_derivative(field: &[f64], table: &StencilTable, dx: f64, i: usize) -> f64 {
    let h = table.half_width();
    assert!(
        i >= h && i + h < field.len(),
        "index {i} is outside the interior of a {}-point field for p = {}",
        field.len(),
        table.p
    );
    let center = field[i];
    let sum: f64 = table
        .weights
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let j = idx + 1;
            c * (field[i + j] + field[i - j] - 2.0 * center)
        })
        .sum();
    sum / (dx * dx)
}

/// Measures the convergence order of the stencil on a smooth test function.
///
/// The stencil is applied to `exp(−x²)` at `x = 0.3` over a geometric ladder
/// of spacings; the returned value is the least-squares slope of
/// `log(error)` against `log(Δx)` over the finest points that remain well
/// above the rounding floor.
pub fn truncation_order_check(p: usize) -> Result<f64> {
    let table = stencil_weights(p)?;
    let h = table.half_width();
    let x0 = 0.3;
    let f = |x: f64| (-x * x).exp();
    let exact = (4.0 * x0 * x0 - 2.0) * f(x0);

    let mut points = Vec::new();
    for k in 0..40 {
        let dx = 0.6 * 0.85f64.powi(k);
        let samples: Vec<f64> = (0..=2 * h)
            .map(|m| f(x0 + (m as f64 - h as f64) * dx))
            .collect();
        let approx = apply_second_derivative(&samples, &table, dx, h);
        let err = (approx - exact).abs();
        // Rounding in the samples is amplified by roughly Σ|weights|/Δx².
        let weight_sum: f64 = 2.0 * table.weights.iter().map(|c| c.abs()).sum::<f64>()
            + table.center_weight.abs();
        let floor = f64::EPSILON * weight_sum / (dx * dx);
        if err > 1e3 * floor {
            points.push((dx.ln(), err.ln()));
        } else {
            break;
        }
    }
    let tail: Vec<(f64, f64)> = points.iter().rev().take(5).copied().collect();
    if tail.len() < 2 {
        return Err(invalid(format!(
            "no resolvable error ladder for p = {p}"
        )));
    }
    Ok(least_squares_slope(&tail))
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
