//! Unit conventions and the uniform time grid.
//!
//! Energies are dimensionless multiples of ħω₀ and times are measured in the
//! same units as 1/γ. With the default γ = 1 a time of `-5.0` means −5/γ.

use crate::error::{Error, Result};

/// Tolerance on the Bloch-ball constraint |r| ≤ 1.
pub const BLOCH_TOLERANCE: f64 = 1e-9;

/// Tolerance on single-photon wavefunction normalization.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Energy-balance tolerance at the reference step `dt = 1e-3 / γ`.
pub const BALANCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitsConvention {
    /// Spontaneous emission rate into the waveguide.
    pub gamma: f64,
    /// Qubit transition frequency; only fixes the energy unit ħω₀.
    pub omega0: f64,
}

impl Default for UnitsConvention {
    fn default() -> Self {
        UnitsConvention {
            gamma: 1.0,
            omega0: 1.0,
        }
    }
}

impl UnitsConvention {
    pub fn new(gamma: f64, omega0: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::domain(format!(
                "omega0 must be positive, got {omega0}"
            )));
        }
        Ok(UnitsConvention { gamma, omega0 })
    }

    /// Header lines describing the convention, without the comment prefix.
    pub fn describe(&self) -> Vec<String> {
        vec![
            "units.energy = hbar*omega0".to_string(),
            "units.time = 1/gamma".to_string(),
            "units.frame = rotating at omega0 (resonant)".to_string(),
            format!("units.gamma = {}", self.gamma),
            format!("units.omega0 = {}", self.omega0),
        ]
    }

    /// Energy-balance tolerance for a given step, scaled as dt⁴ from the
    /// reference step, with a floor at accumulated round-off.
    pub fn balance_tolerance(&self, dt: f64) -> f64 {
        let scaled = dt * self.gamma / 1e-3;
        (BALANCE_TOLERANCE * scaled.powi(4)).max(1e-10)
    }
}

/// Uniform grid `t_i = t0 + i·dt`, `i = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    t_max: f64,
    dt: f64,
    n_steps: usize,
}

/// A run of grid intervals `[start, end]` (indices) on which every input
/// envelope is smooth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub start: usize,
    pub end: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t_max: f64, dt: f64) -> Result<Self> {
        if !(t0.is_finite() && t_max.is_finite() && dt.is_finite()) {
            return Err(Error::domain("time grid bounds must be finite"));
        }
        if dt <= 0.0 {
            return Err(Error::domain(format!("dt must be positive, got {dt}")));
        }
        if t_max <= t0 {
            return Err(Error::domain(format!(
                "t_max ({t_max}) must exceed t0 ({t0})"
            )));
        }
        let span = t_max - t0;
        let n = (span / dt).round();
        if n < 1.0 || (n * dt - span).abs() > 1e-9 * dt {
            return Err(Error::domain(format!(
                "dt = {dt} does not divide the interval [{t0}, {t_max}]"
            )));
        }
        Ok(TimeGrid {
            t0,
            t_max,
            dt,
            n_steps: n as usize,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.time(i))
    }

    /// Index of the grid point at `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = ((t - self.t0) / self.dt).round();
        if k < 0.0 || k > self.n_steps as f64 {
            return None;
        }
        let k = k as usize;
        ((self.time(k) - t).abs() <= 1e-6 * self.dt).then_some(k)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 - 1e-9 * self.dt && t <= self.t_max + 1e-9 * self.dt
    }

    /// True when every point of `coarse` is also a point of this grid.
    pub fn is_refinement_of(&self, coarse: &TimeGrid) -> bool {
        let ratio = coarse.dt / self.dt;
        (ratio - ratio.round()).abs() < 1e-6
            && self.index_of(coarse.t0).is_some()
            && self.index_of(coarse.t_max).is_some()
    }

    /// Split the grid at every breakpoint lying strictly inside it.
    ///
    /// Breakpoints must fall on grid points; envelopes are only piecewise
    /// smooth and the integrators rely on steps never straddling a jump.
    pub fn pieces(&self, breakpoints: &[f64]) -> Result<Vec<Piece>> {
        let mut cuts = vec![0, self.n_steps];
        for &b in breakpoints {
            if !b.is_finite() || b <= self.t0 || b >= self.t_max {
                continue;
            }
            match self.index_of(b) {
                Some(k) => cuts.push(k),
                None => {
                    return Err(Error::domain(format!(
                        "envelope breakpoint t = {b} is not commensurate with dt = {}",
                        self.dt
                    )))
                }
            }
        }
        cuts.sort_unstable();
        cuts.dedup();
        Ok(cuts
            .windows(2)
            .map(|w| Piece {
                start: w[0],
                end: w[1],
            })
            .collect())
    }

    /// A time strictly inside the piece, used to select one-sided envelope
    /// limits at breakpoints.
    pub fn probe(&self, piece: Piece) -> f64 {
        0.5 * (self.time(piece.start) + self.time(piece.end))
    }
}
