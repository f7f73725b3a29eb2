//! Hand-written s = 4 recursion relations, term by term, as an independent
//! check on the generic Cauchy-product recursion.
//!
//! Printed versions of these relations contain a handful of misprints. Each
//! one is reproduced behind `Variant::Printed` so the tests can show that
//! the printed form really disagrees, while `Variant::Corrected` carries the
//! fix.

#![allow(dead_code, clippy::too_many_arguments)]

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    Printed,
    Corrected,
}

/// Series values at one grid point: `x[l]` is the order-`l` coefficient and
/// `xp[l]` its discrete second derivative.
#[derive(Clone, Copy, Debug, Default)]
pub struct Point {
    pub a: [f64; 5],
    pub b: [f64; 5],
    pub ap: [f64; 4],
    pub bp: [f64; 4],
}

/// Scalar relations with an optional potential value `v`; returns
/// `([a1..a4], [b1..b4])`.
pub fn scalar(pt: &Point, g1: f64, g2: f64, v: f64, variant: Variant) -> ([f64; 4], [f64; 4]) {
    let [a0, a1, a2, a3, _] = pt.a;
    let [b0, b1, b2, b3, _] = pt.b;
    let ap = pt.ap;
    let bp = pt.bp;
    // The a4 misprint puts g1 on the a1 a0 b2 term.
    let g_a4 = if variant == Variant::Printed { g1 } else { g2 };

    let pa1 = -g2 * a0 * a0 * b0 - g2 * b0.powi(3) - g1 * bp[0] + b0 * v;
    let pa2 = 0.5
        * (-2.0 * g2 * a0 * a1 * b0 - g2 * a0 * a0 * b1 - 3.0 * g2 * b0 * b0 * b1 - g1 * bp[1]
            + b1 * v);
    let pa3 = (-g2 * a1 * a1 * b0
        - 2.0 * g2 * a0 * a2 * b0
        - 2.0 * g2 * a0 * a1 * b1
        - 3.0 * g2 * b0 * b1 * b1
        - g2 * a0 * a0 * b2
        - 3.0 * g2 * b0 * b0 * b2
        - g1 * bp[2]
        + b2 * v)
        / 3.0;
    let pa4 = 0.25
        * (-g2 * a1 * a1 * b1 - g2 * b1.powi(3) - 2.0 * g2 * a0 * a3 * b0 - 2.0 * g2 * a0 * a2 * b1
            - 6.0 * g2 * b0 * b1 * b2
            - 2.0 * g2 * a1 * a2 * b0
            - 2.0 * g_a4 * a1 * a0 * b2
            - g2 * a0 * a0 * b3
            - 3.0 * g2 * b0 * b0 * b3
            - g1 * bp[3]
            + b3 * v);

    let pb1 = g2 * a0 * b0 * b0 + g2 * a0.powi(3) + g1 * ap[0] - a0 * v;
    let pb2 = 0.5
        * (2.0 * g2 * a0 * b0 * b1 + g2 * b0 * b0 * a1 + 3.0 * g2 * a0 * a0 * a1 + g1 * ap[1]
            - a1 * v);
    let pb3 = (g2 * a0 * b1 * b1
        + 2.0 * g2 * a0 * b2 * b0
        + 2.0 * g2 * a1 * b0 * b1
        + 3.0 * g2 * a0 * a1 * a1
        + g2 * a2 * b0 * b0
        + 3.0 * g2 * a0 * a0 * a2
        + g1 * ap[2]
        - a2 * v)
        / 3.0;
    let pb4 = 0.25
        * (g2 * a1 * b1 * b1 + g2 * a1.powi(3) + 2.0 * g2 * a0 * b3 * b0 + 2.0 * g2 * a0 * b1 * b2
            + 6.0 * g2 * a0 * a1 * a2
            + 2.0 * g2 * a1 * b2 * b0
            + 2.0 * g2 * a2 * b0 * b1
            + g2 * b0 * b0 * a3
            + 3.0 * g2 * a0 * a0 * a3
            + g1 * ap[3]
            - a3 * v);
    ([pa1, pa2, pa3, pa4], [pb1, pb2, pb3, pb4])
}

pub struct Coupled {
    pub g10: f64,
    pub g11: f64,
    pub g12: f64,
    pub g20: f64,
    pub g21: f64,
    pub g22: f64,
}

/// Two-component relations; `p` carries `(a, b)` and `q` carries `(c, d)`.
/// Returns `[a1..a4, b1..b4, c1..c4, d1..d4]`.
pub fn coupled(p: &Point, q: &Point, g: &Coupled, variant: Variant) -> [[f64; 4]; 4] {
    let [a0, a1, a2, a3, _] = p.a;
    let [b0, b1, b2, b3, _] = p.b;
    let [c0, c1, c2, c3, _] = q.a;
    let [d0, d1, d2, d3, _] = q.b;
    let (ap, bp, cp, dp) = (p.ap, p.bp, q.ap, q.bp);
    let Coupled { g10, g11, g12, g20, g21, g22 } = *g;
    let printed = variant == Variant::Printed;

    let a1n = -g11 * b0.powi(3) - b0 * (g11 * a0 * a0 + g12 * (c0 * c0 + d0 * d0)) - g10 * bp[0];
    let a2n = 0.5
        * (-2.0 * g11 * a0 * a1 * b0 - g11 * a0 * a0 * b1 - 3.0 * g11 * b0 * b0 * b1
            - g12 * b1 * c0 * c0
            - g12 * b1 * d0 * d0
            - 2.0 * g12 * b0 * (c0 * c1 + d0 * d1)
            - g10 * bp[1]);
    let a3n = (-g11 * a1 * a1 * b0 - 2.0 * g11 * a0 * a2 * b0 - 2.0 * g11 * a0 * a1 * b1
        - 3.0 * g11 * b0 * b1 * b1
        - g11 * a0 * a0 * b2
        - 3.0 * g11 * b0 * b0 * b2
        - g12 * b2 * c0 * c0
        - 2.0 * g12 * b1 * c0 * c1
        - g12 * b0 * c1 * c1
        - 2.0 * g12 * b0 * c0 * c2
        - g12 * b2 * d0 * d0
        - 2.0 * g12 * b1 * d0 * d1
        - g12 * b0 * d1 * d1
        - 2.0 * g12 * b0 * d0 * d2
        - g10 * bp[2])
        / 3.0;
    let a4n = 0.25
        * (-g11 * b1.powi(3) - 2.0 * g11 * a0 * (a3 * b0 + a2 * b1) - 2.0 * g11 * a1 * (a2 * b0 + a0 * b2)
            - g11 * a0 * a0 * b3
            - 3.0 * g11 * b0 * b0 * b3
            - g12 * b3 * c0 * c0
            - 2.0 * g12 * b2 * c0 * c1
            - g12 * b1 * c1 * c1
            - 2.0 * g12 * b0 * c1 * c2
            - 2.0 * g12 * b0 * c0 * c3
            - g12 * b3 * d0 * d0
            - 2.0 * g12 * b2 * d0 * d1
            - 2.0 * g12 * b0 * d1 * d2
            - 2.0 * g12 * b0 * d0 * d3
            - g10 * bp[3]
            - b1 * (g11 * a1 * a1 + 6.0 * g11 * b0 * b2 + 2.0 * g12 * c0 * c2 + g12 * d1 * d1
                + 2.0 * g12 * d0 * d2));

    let b1n = g11 * a0.powi(3) + a0 * (g11 * b0 * b0 + g12 * (c0 * c0 + d0 * d0)) + g10 * ap[0];
    // Printed: 2 a0 (g11 b0 + …); the b0 needs its partner b1.
    let b2_first = if printed { g11 * b0 } else { g11 * b0 * b1 };
    let b2n = 0.5
        * (3.0 * g11 * a0 * a0 * a1
            + a1 * (g11 * b0 * b0 + g12 * (c0 * c0 + d0 * d0))
            + 2.0 * a0 * (b2_first + g12 * c0 * c1 + g12 * d0 * d1)
            + g10 * ap[1]);
    // Printed: "3 g11 a0²" without a2, and "g12 d0 d2" instead of g12 d1² + 2 g12 d0 d2.
    let b3_lead = if printed { 3.0 * g11 * a0 * a0 } else { 3.0 * g11 * a0 * a0 * a2 };
    let b3_d = if printed { g12 * d0 * d2 } else { g12 * d1 * d1 + 2.0 * g12 * d0 * d2 };
    let b3n = (b3_lead
        + 2.0 * g11 * a1 * b0 * b1
        + 2.0 * g12 * a1 * c0 * c1
        + a2 * (g11 * b0 * b0 + g12 * (c0 * c0 + d0 * d0))
        + 2.0 * g12 * a1 * d0 * d1
        + a0 * (3.0 * g11 * a1 * a1 + g11 * b1 * b1 + 2.0 * g11 * b0 * b2 + g12 * c1 * c1
            + 2.0 * g12 * c0 * c2
            + b3_d)
        + g10 * ap[2])
        / 3.0;
    let b4n = 0.25
        * (g11 * a1.powi(3) + 3.0 * g11 * a0 * a0 * a3 + g11 * a3 * b0 * b0 + 2.0 * g11 * a2 * b0 * b1
            + g12 * a3 * c0 * c0
            + 2.0 * g12 * a2 * c0 * c1
            + g12 * a3 * d0 * d0
            + 2.0 * g12 * a2 * d0 * d1
            + g10 * ap[3]
            + a1 * (6.0 * g11 * a0 * a2 + g11 * b1 * b1 + 2.0 * g11 * b0 * b2 + g12 * c1 * c1
                + 2.0 * g12 * c0 * c2
                + g12 * d1 * d1
                + 2.0 * g12 * d0 * d2)
            + 2.0 * a0 * (g11 * b1 * b2 + g11 * b0 * b3 + g12 * (c1 * c2 + c0 * c3 + d1 * d2 + d0 * d3)));

    let c1n = -g21 * a0 * a0 * d0 - g21 * b0 * b0 * d0 - g22 * c0 * c0 * d0 - g22 * d0.powi(3) - g20 * dp[0];
    let c2n = 0.5
        * (-2.0 * g21 * a0 * a1 * d0 - 2.0 * g21 * b0 * b1 * d0 - 2.0 * g22 * c0 * c1 * d0
            - g21 * a0 * a0 * d1
            - g21 * b0 * b0 * d1
            - g22 * c0 * c0 * d1
            - 3.0 * g22 * d0 * d0 * d1
            - g20 * dp[1]);
    let c3n = (-g21 * a1 * a1 * d0 - 2.0 * g21 * a0 * a2 * d0 - g21 * b1 * b1 * d0
        - 2.0 * g21 * b0 * b2 * d0
        - g22 * c1 * c1 * d0
        - 2.0 * g22 * c0 * c2 * d0
        - 2.0 * g21 * a0 * a1 * d1
        - 2.0 * g21 * b0 * b1 * d1
        - 2.0 * g22 * c0 * c1 * d1
        - 3.0 * g22 * d0 * d1 * d1
        - g21 * a0 * a0 * d2
        - g21 * b0 * b0 * d2
        - g22 * c0 * c0 * d2
        - 3.0 * g22 * d0 * d0 * d2
        - g20 * dp[2])
        / 3.0;
    // Printed: "−3 d0² d3" without g22.
    let c4_last = if printed { 3.0 * d0 * d0 * d3 } else { 3.0 * g22 * d0 * d0 * d3 };
    let c4n = 0.25
        * (-2.0 * g21 * b1 * b2 * d0 - 2.0 * g21 * b0 * b3 * d0 - 2.0 * g22 * c1 * c2 * d0
            - 2.0 * g22 * c0 * c3 * d0
            - g21 * a1 * a1 * d1
            - g21 * b1 * b1 * d1
            - 2.0 * g21 * b0 * b2 * d1
            - g22 * c1 * c1 * d1
            - 2.0 * g22 * c0 * c2 * d1
            - g22 * d1.powi(3)
            - 2.0 * g21 * a0 * (a3 * d0 + a2 * d1)
            - 2.0 * g21 * b0 * b1 * d2
            - 2.0 * g22 * c0 * c1 * d2
            - 6.0 * g22 * d0 * d1 * d2
            - 2.0 * g21 * a1 * (a2 * d0 + a0 * d2)
            - g21 * a0 * a0 * d3
            - g21 * b0 * b0 * d3
            - g22 * c0 * c0 * d3
            - c4_last
            - g20 * dp[3]);

    let d1n = g21 * a0 * a0 * c0 + g21 * b0 * b0 * c0 + g22 * c0 * d0 * d0 + g22 * c0.powi(3) + g20 * cp[0];
    let d2n = 0.5
        * (2.0 * g21 * a0 * a1 * c0 + 2.0 * g21 * b0 * b1 * c0 + 2.0 * g22 * c0 * d0 * d1
            + g21 * a0 * a0 * c1
            + g21 * b0 * b0 * c1
            + g22 * d0 * d0 * c1
            + 3.0 * g22 * c0 * c0 * c1
            + g20 * cp[1]);
    let d3n = (g21 * a1 * a1 * c0 + 2.0 * g21 * a0 * a2 * c0 + g21 * b1 * b1 * c0
        + 2.0 * g21 * b0 * b2 * c0
        + 2.0 * g21 * a0 * a1 * c1
        + 2.0 * g21 * b0 * b1 * c1
        + 3.0 * g22 * c0 * c1 * c1
        + g21 * a0 * a0 * c2
        + g21 * b0 * b0 * c2
        + 3.0 * g22 * c0 * c0 * c2
        + g22 * c2 * d0 * d0
        + 2.0 * g22 * c1 * d0 * d1
        + g22 * c0 * d1 * d1
        + 2.0 * g22 * c0 * d0 * d2
        + g20 * cp[2])
        / 3.0;
    let d4n = 0.25
        * (2.0 * g21 * b1 * b2 * c0 + 2.0 * g21 * b0 * b3 * c0 + g21 * a1 * a1 * c1
            + g21 * b1 * b1 * c1
            + 2.0 * g21 * b0 * b2 * c1
            + g22 * c1.powi(3)
            + 2.0 * g21 * a0 * (a3 * c0 + a2 * c1)
            + 2.0 * g21 * b0 * b1 * c2
            + 6.0 * g22 * c0 * c1 * c2
            + 2.0 * g21 * a1 * (a2 * c0 + a0 * c2)
            + g21 * a0 * a0 * c3
            + g21 * b0 * b0 * c3
            + 3.0 * g22 * c0 * c0 * c3
            + g22 * c3 * d0 * d0
            + 2.0 * g22 * c2 * d0 * d1
            + g22 * c1 * d1 * d1
            + 2.0 * g22 * c1 * d0 * d2
            + 2.0 * g22 * c0 * d1 * d2
            + 2.0 * g22 * c0 * d0 * d3
            + g20 * cp[3]);

    [
        [a1n, a2n, a3n, a4n],
        [b1n, b2n, b3n, b4n],
        [c1n, c2n, c3n, c4n],
        [d1n, d2n, d3n, d4n],
    ]
}
