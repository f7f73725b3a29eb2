//! Truncated Taylor series ("jets") in one real variable.
//!
//! A [`Jet`] of order `n` stores `f(τ₀ + τ) = Σ_{k=0}^{n} c_k τ^k` with complex
//! coefficients. The closed-form solutions are written once against the
//! [`Scalar`] trait and evaluated either on plain `Complex64` values or on
//! jets, which yields exact time (or space) Taylor coefficients
//! `c_k = f^{(k)}(τ₀)/k!` without finite differencing.
//!
//! The expansion variable is real, so conjugation acts coefficient-wise.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use smallvec::SmallVec;

type Coeffs = SmallVec<[Complex64; 8]>;

/// Arithmetic needed by the closed-form solution formulas.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant with the same shape (jet order) as `self`.
    fn constant_like(&self, c: Complex64) -> Self;
    fn exp(&self) -> Self;
    fn conj(&self) -> Self;
    /// `sech` of a real-valued argument.
    fn sech(&self) -> Self;
    /// `tanh` of a real-valued argument.
    fn tanh(&self) -> Self;

    fn real_like(&self, r: f64) -> Self {
        self.constant_like(Complex64::new(r, 0.0))
    }

    fn scale(&self, r: f64) -> Self {
        self.clone() * self.real_like(r)
    }

    fn scale_c(&self, c: Complex64) -> Self {
        self.clone() * self.constant_like(c)
    }

    fn add_real(&self, r: f64) -> Self {
        self.clone() + self.real_like(r)
    }
}

impl Scalar for Complex64 {
    fn constant_like(&self, c: Complex64) -> Self {
        c
    }

    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn sech(&self) -> Self {
        Complex64::new(1.0 / self.re.cosh(), 0.0)
    }

    fn tanh(&self) -> Self {
        Complex64::new(self.re.tanh(), 0.0)
    }

    fn scale(&self, r: f64) -> Self {
        self * r
    }

    fn add_real(&self, r: f64) -> Self {
        self + r
    }
}

/// Truncated power series with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Coeffs,
}

impl Jet {
    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut c: Coeffs = SmallVec::from_elem(Complex64::new(0.0, 0.0), order + 1);
        c[0] = value;
        Jet { c }
    }

    /// The expansion variable itself, `τ₀ + τ`.
    pub fn variable(at: f64, order: usize) -> Self {
        let mut j = Jet::constant(Complex64::new(at, 0.0), order);
        if order >= 1 {
            j.c[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn from_coefficients(coeffs: &[Complex64]) -> Self {
        assert!(!coeffs.is_empty());
        Jet {
            c: SmallVec::from_slice(coeffs),
        }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    /// Evaluates the truncated series at offset `tau` (Horner).
    pub fn eval(&self, tau: f64) -> Complex64 {
        self.c
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * tau + c)
    }

    pub fn recip(&self) -> Jet {
        let n = self.c.len();
        let inv0 = 1.0 / self.c[0];
        let mut r: Coeffs = SmallVec::from_elem(Complex64::new(0.0, 0.0), n);
        r[0] = inv0;
        for k in 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for m in 1..=k {
                s += self.c[m] * r[k - m];
            }
            r[k] = -s * inv0;
        }
        Jet { c: r }
    }

    /// Principal square root; requires a nonzero constant term.
    pub fn sqrt(&self) -> Jet {
        let n = self.c.len();
        let mut r: Coeffs = SmallVec::from_elem(Complex64::new(0.0, 0.0), n);
        r[0] = self.c[0].sqrt();
        let two_r0 = 2.0 * r[0];
        for k in 1..n {
            let mut s = self.c[k];
            for m in 1..k {
                s -= r[m] * r[k - m];
            }
            r[k] = s / two_r0;
        }
        Jet { c: r }
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet {
        assert_eq!(self.c.len(), other.c.len(), "jet orders differ");
        Jet {
            c: self.c.iter().zip(&other.c).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            c: self.c.iter().map(|&a| -a).collect(),
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        assert_eq!(self.c.len(), rhs.c.len(), "jet orders differ");
        let n = self.c.len();
        let mut r: Coeffs = SmallVec::from_elem(Complex64::new(0.0, 0.0), n);
        for (k, slot) in r.iter_mut().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for m in 0..=k {
                s += self.c[m] * rhs.c[k - m];
            }
            *slot = s;
        }
        Jet { c: r }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        assert_eq!(self.c.len(), rhs.c.len(), "jet orders differ");
        let n = self.c.len();
        let inv0 = 1.0 / rhs.c[0];
        let mut q: Coeffs = SmallVec::from_elem(Complex64::new(0.0, 0.0), n);
        for k in 0..n {
            let mut s = self.c[k];
            for m in 1..=k {
                s -= rhs.c[m] * q[k - m];
            }
            q[k] = s * inv0;
        }
        Jet { c: q }
    }
}

impl Scalar for Jet {
    fn constant_like(&self, c: Complex64) -> Self {
        Jet::constant(c, self.order())
    }

    fn exp(&self) -> Self {
        // e' = e·f'  ⇒  k e_k = Σ_{m=1}^{k} m f_m e_{k−m}.
        let n = self.c.len();
        let mut e: Coeffs = SmallVec::from_elem(Complex64::new(0.0, 0.0), n);
        e[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for m in 1..=k {
                s += self.c[m] * e[k - m] * m as f64;
            }
            e[k] = s / k as f64;
        }
        Jet { c: e }
    }

    fn conj(&self) -> Self {
        Jet {
            c: self.c.iter().map(|a| a.conj()).collect(),
        }
    }

    fn sech(&self) -> Self {
        // Written in terms of e^{−|z|} so large arguments do not overflow.
        let sign = if self.c[0].re >= 0.0 { 1.0 } else { -1.0 };
        let e = (self.scale(-sign)).exp();
        let e2 = e.clone() * e.clone();
        e.scale(2.0) / e2.add_real(1.0)
    }

    fn tanh(&self) -> Self {
        let sign = if self.c[0].re >= 0.0 { 1.0 } else { -1.0 };
        let e2 = (self.scale(-2.0 * sign)).exp();
        let one = self.real_like(1.0);
        ((one.clone() - e2.clone()) / (one + e2)).scale(sign)
    }

    fn scale(&self, r: f64) -> Self {
        Jet {
            c: self.c.iter().map(|&a| a * r).collect(),
        }
    }

    fn add_real(&self, r: f64) -> Self {
        let mut out = self.clone();
        out.c[0] += r;
        out
    }
}
