//! Exact rational arithmetic used to generate stencil weights.
//!
//! [`Rational`] is `num_rational::BigRational`: every arithmetic result is
//! reduced so that `gcd(|numerator|, denominator) = 1` with a positive
//! denominator. This module adds the pieces the stencil generator needs on
//! top of it: a once-rounded conversion to `f64` and a small dense solver.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Converts an exact rational to the nearest binary64 value (ties to even).
///
/// The quotient is formed in big-integer arithmetic with at least 54
/// significant bits plus a sticky remainder, so the result is rounded
/// exactly once.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();

    // Choose a power-of-two scale so that num * 2^shift / den lies in [2^53, 2^54).
    let mut shift = 54i64 - (num.bits() as i64 - den.bits() as i64);
    let (mut q, mut rem) = scaled_div(&num, &den, shift);
    if q.bits() > 54 {
        shift -= 1;
        (q, rem) = scaled_div(&num, &den, shift);
    } else if q.bits() < 54 {
        shift += 1;
        (q, rem) = scaled_div(&num, &den, shift);
    }
    debug_assert_eq!(q.bits(), 54);

    // q carries one guard bit beyond the 53-bit significand.
    let guard = q.is_odd();
    let mut mant: BigInt = q >> 1u32;
    let sticky = !rem.is_zero();
    if guard && (sticky || mant.is_odd()) {
        mant += 1;
    }
    let m = mant.to_f64().expect("53-bit mantissa fits in f64");
    let value = ldexp(m, -(shift - 1));
    if negative {
        -value
    } else {
        value
    }
}

fn scaled_div(num: &BigInt, den: &BigInt, shift: i64) -> (BigInt, BigInt) {
    if shift >= 0 {
        (num << shift as u64).div_rem(den)
    } else {
        num.div_rem(&(den << (-shift) as u64))
    }
}

fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    // Stepwise scaling keeps intermediate powers of two representable.
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

/// Solves the square system `m · x = rhs` exactly by Gauss–Jordan elimination.
///
/// Returns `None` when the matrix is singular.
pub fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    assert!(m.len() == n && m.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for k in col..n {
            m[col][k] = &m[col][k] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for k in col..n {
                let delta = &factor * &m[col][k];
                m[r][k] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction whose first nonzero entry is positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| (r * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()).map(|x| x.sign()) {
        Some(Sign::Minus) => -BigInt::one(),
        _ => BigInt::one(),
    };
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd * &sign).collect()
}
