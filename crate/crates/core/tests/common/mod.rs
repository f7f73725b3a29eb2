#![allow(dead_code)]

pub mod transcription;

use psnlse::engine::{BoundaryMode, BoundaryUpdate, FieldState, Grid, PotentialSpec, SeriesCoefficients, Solver, SolverConfig};
use psnlse::equation::{CoupledCoefficients, Equation};
use psnlse::stencil::apply_second_derivative;
use rand::Rng;
use transcription::{Coupled, Point, Variant};

const N_X: usize = 64;

fn random_state(rng: &mut impl Rng, grid: &Grid) -> FieldState {
    FieldState {
        u: (0..grid.n_x()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        v: (0..grid.n_x()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        t: 0.0,
    }
}

fn config(equation: Equation, p: usize, potential: PotentialSpec) -> SolverConfig {
    SolverConfig {
        equation,
        s: 4,
        p,
        dt: 1e-3,
        n_t: 1,
        boundary_mode: BoundaryMode::Zero,
        boundary_update: BoundaryUpdate::Direct,
        boundary_spec: None,
        potential,
    }
}

fn point(series: &SeriesCoefficients, k: usize, i: usize, solver: &Solver) -> Point {
    let mut pt = Point::default();
    let dx = solver.grid().dx();
    for l in 0..=4 {
        pt.a[l] = series.a[k][l][i];
        pt.b[l] = series.b[k][l][i];
    }
    for l in 0..4 {
        pt.ap[l] = apply_second_derivative(&series.a[k][l], solver.table(), dx, i);
        pt.bp[l] = apply_second_derivative(&series.b[k][l], solver.table(), dx, i);
    }
    pt
}

/// Largest `max_i |generic − transcribed| / max_i |transcribed|` over all
/// coefficient arrays of order 1..=4.
fn worst_relative(generic: &[Vec<f64>], transcribed: &[Vec<f64>]) -> f64 {
    generic
        .iter()
        .zip(transcribed)
        .map(|(g, t)| {
            let scale = t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let diff = g.iter().zip(t).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            diff / scale
        })
        .fold(0.0, f64::max)
}

/// One random scalar field (optionally with a random tabulated potential):
/// worst relative disagreement between the generic recursion and the
/// transcribed relations.
pub fn scalar_trial(rng: &mut impl Rng, with_potential: bool, variant: Variant) -> f64 {
    let grid = Grid::new((N_X - 1) as f64, N_X).unwrap();
    let g1 = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let g2 = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let v: Vec<f64> = (0..N_X).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let potential = if with_potential { PotentialSpec::Tabulated(v.clone()) } else { PotentialSpec::None };
    let p = [3, 5, 7, 9][rng.gen_range(0..4)];
    let mut solver = Solver::new(config(Equation::Scalar { g1, g2 }, p, potential), grid.clone()).unwrap();
    let state = random_state(rng, &grid);
    let series = solver.derive_series(&[state]).unwrap().clone();
    let h = (p - 1) / 2;
    let interior = h..N_X - h;

    let mut gen = vec![Vec::new(); 8];
    let mut tr = vec![Vec::new(); 8];
    for i in interior {
        let pt = point(&series, 0, i, &solver);
        let vi = if with_potential { v[i] } else { 0.0 };
        let (ta, tb) = transcription::scalar(&pt, g1, g2, vi, variant);
        for l in 0..4 {
            gen[l].push(series.a[0][l + 1][i]);
            gen[4 + l].push(series.b[0][l + 1][i]);
            tr[l].push(ta[l]);
            tr[4 + l].push(tb[l]);
        }
    }
    worst_relative(&gen, &tr)
}

/// As [`scalar_trial`] for the two-component system.
pub fn coupled_trial(rng: &mut impl Rng, variant: Variant) -> f64 {
    let grid = Grid::new((N_X - 1) as f64, N_X).unwrap();
    let mut draw = || rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let g = CoupledCoefficients { g10: draw(), g11: draw(), g12: draw(), g20: draw(), g21: draw(), g22: draw() };
    let p = [3, 5, 7, 9][rng.gen_range(0..4)];
    let mut solver = Solver::new(config(Equation::Coupled(g), p, PotentialSpec::None), grid.clone()).unwrap();
    let states = [random_state(rng, &grid), random_state(rng, &grid)];
    let series = solver.derive_series(&states).unwrap().clone();
    let h = (p - 1) / 2;
    let gc = Coupled { g10: g.g10, g11: g.g11, g12: g.g12, g20: g.g20, g21: g.g21, g22: g.g22 };

    let mut gen = vec![Vec::new(); 16];
    let mut tr = vec![Vec::new(); 16];
    for i in h..N_X - h {
        let p1 = point(&series, 0, i, &solver);
        let p2 = point(&series, 1, i, &solver);
        let t = transcription::coupled(&p1, &p2, &gc, variant);
        for l in 0..4 {
            let values = [
                series.a[0][l + 1][i],
                series.b[0][l + 1][i],
                series.a[1][l + 1][i],
                series.b[1][l + 1][i],
            ];
            for f in 0..4 {
                gen[4 * f + l].push(values[f]);
                tr[4 * f + l].push(t[f][l]);
            }
        }
    }
    worst_relative(&gen, &tr)
}
