//! Discretization of the waveguide into time-bin modes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pulse::{Pulse, Statistics};
use crate::units::TimeGrid;

/// Consecutive bins of width `dt` starting at `t0`. Bin `n` covers
/// `[t0 + n·dt, t0 + (n+1)·dt]` and interacts with the qubit during that
/// interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeBins {
    pub t0: f64,
    pub dt: f64,
    /// Coherent: `⟨a_n⟩ = β(t_n)√dt`. Single photon: wavefunction weights
    /// `ξ(t_n)√dt` with unit total norm.
    pub amplitudes: Vec<Complex64>,
    pub statistics: Statistics,
}

impl TimeBins {
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Sampling time of bin `n` (its center).
    pub fn center(&self, n: usize) -> f64 {
        self.t0 + (n as f64 + 0.5) * self.dt
    }

    /// Time at which the collision with bin `n` is complete.
    pub fn end(&self, n: usize) -> f64 {
        self.t0 + (n as f64 + 1.0) * self.dt
    }

    /// Mean occupation of the most populated bin.
    pub fn max_occupation(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0, f64::max)
    }

    /// The first `n` bins only.
    pub fn truncated(&self, n: usize) -> TimeBins {
        TimeBins {
            amplitudes: self.amplitudes[..n.min(self.len())].to_vec(),
            ..self.clone()
        }
    }
}

/// Sample `p` on bins of width `dt` covering `window`.
///
/// The window and every envelope breakpoint inside it must be commensurate
/// with `dt`, so that no bin straddles a jump.
pub fn build_time_bins(p: &Pulse, window: (f64, f64), dt: f64) -> Result<TimeBins> {
    let grid = TimeGrid::new(window.0, window.1, dt)?;
    grid.pieces(&p.breakpoints())?;
    let sdt = dt.sqrt();
    let mut amplitudes: Vec<Complex64> = (0..grid.n_steps())
        .map(|n| p.evaluate(grid.time(n) + 0.5 * dt) * sdt)
        .collect();
    if p.statistics() == Statistics::SinglePhoton {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::domain(
                "single-photon pulse has no weight inside the bin window",
            ));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
    }
    Ok(TimeBins {
        t0: window.0,
        dt,
        amplitudes,
        statistics: p.statistics(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::Shape;
    use approx::assert_abs_diff_eq;

    #[test]
    fn square_pulse_bins() {
        let p = Pulse::coherent_with_photons(
            Shape::Square {
                start: 0.0,
                duration: 1.0,
            },
            (0.0, 1.0),
            4.0,
        )
        .unwrap();
        let bins = build_time_bins(&p, (0.0, 1.0), 0.1).unwrap();
        assert_eq!(bins.len(), 10);
        for a in &bins.amplitudes {
            assert_abs_diff_eq!(a.re, 2.0 * 0.1f64.sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn single_photon_weights_are_normalized() {
        let p = Pulse::single_photon(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0)).unwrap();
        let bins = build_time_bins(&p, (-5.0, 3.0), 0.01).unwrap();
        let total: f64 = bins.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
        let (argmax, _) = bins
            .amplitudes
            .iter()
            .enumerate()
            .fold(
                (0, 0.0),
                |(k, m), (i, a)| if a.norm() > m { (i, a.norm()) } else { (k, m) },
            );
        assert_abs_diff_eq!(bins.end(argmax), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn incommensurate_step_rejected() {
        let p = Pulse::single_photon(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0)).unwrap();
        assert!(matches!(
            build_time_bins(&p, (-5.0, 3.0), 0.3),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            build_time_bins(&p, (-5.05, 3.0), 0.1),
            Err(Error::Domain(_))
        ));
    }
}
