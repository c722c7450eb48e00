//! Fixed-step classical Runge–Kutta and matching cumulative quadrature.
//!
//! Both work piece by piece: envelope jumps must sit on grid points, and every
//! right-hand-side evaluation receives a `probe` time lying inside the current
//! step so that envelope samples at a jump use the correct one-sided limit.

use std::ops::{Add, Mul};

use crate::error::Result;
use crate::units::{Piece, TimeGrid};

pub trait OdeState: Copy + Add<Output = Self> + Mul<f64, Output = Self> {}

impl<T: Copy + Add<Output = T> + Mul<f64, Output = T>> OdeState for T {}

/// Integrate `dy/dt = rhs(t, probe, y)` over the grid.
///
/// `accept(i, t_i, y)` post-processes the state after every step (bounds
/// checks, clipping) and may abort the run.
pub fn rk4<S, F, A>(grid: &TimeGrid, y0: S, rhs: F, mut accept: A) -> Result<Vec<S>>
where
    S: OdeState,
    F: Fn(f64, f64, S) -> S,
    A: FnMut(usize, f64, S) -> Result<S>,
{
    let dt = grid.dt();
    let mut out = Vec::with_capacity(grid.len());
    let mut y = accept(0, grid.t0(), y0)?;
    out.push(y);
    for i in 0..grid.n_steps() {
        let t = grid.time(i);
        let probe = t + 0.5 * dt;
        let k1 = rhs(t, probe, y);
        let k2 = rhs(t + 0.5 * dt, probe, y + k1 * (0.5 * dt));
        let k3 = rhs(t + 0.5 * dt, probe, y + k2 * (0.5 * dt));
        let k4 = rhs(t + dt, probe, y + k3 * dt);
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        y = accept(i + 1, grid.time(i + 1), y)?;
        out.push(y);
    }
    Ok(out)
}

/// Running integral `∫_{t0}^{t_i} f dt` for every grid point.
///
/// `sample(i, probe)` evaluates the integrand at grid point `i` using the
/// one-sided envelope limit selected by `probe`. Within each piece the
/// integrand is interpolated by cubics (fourth-order accurate); pieces with
/// fewer than three intervals fall back to lower order.
pub fn cumulative<F>(grid: &TimeGrid, pieces: &[Piece], sample: F) -> Vec<f64>
where
    F: Fn(usize, f64) -> f64,
{
    let dt = grid.dt();
    let mut out = vec![0.0; grid.len()];
    let mut acc = 0.0;
    for &piece in pieces {
        let probe = grid.probe(piece);
        let f: Vec<f64> = (piece.start..=piece.end)
            .map(|i| sample(i, probe))
            .collect();
        let m = f.len() - 1;
        for k in 0..m {
            let w = match m {
                1 => 0.5 * (f[0] + f[1]),
                2 if k == 0 => (5.0 * f[0] + 8.0 * f[1] - f[2]) / 12.0,
                2 => (-f[0] + 8.0 * f[1] + 5.0 * f[2]) / 12.0,
                _ if k == 0 => (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0,
                _ if k == m - 1 => {
                    (f[m - 3] - 5.0 * f[m - 2] + 19.0 * f[m - 1] + 9.0 * f[m]) / 24.0
                }
                _ => (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]) / 24.0,
            };
            acc += w * dt;
            out[piece.start + k + 1] = acc;
        }
    }
    out
}
