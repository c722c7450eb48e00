//! Input pulse envelopes in the frame rotating at ω₀.
//!
//! An envelope is `scale · shape(t)` restricted to a support window. Shapes
//! are unit-norm over their natural support, so a pulse built from an
//! untruncated shape with `scale = 1` carries exactly one photon.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::NORM_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    /// Classical amplitude: the envelope is the mean field `⟨a_in(t)⟩`.
    Coherent,
    /// One-photon Fock wavepacket: the envelope is the wavefunction ξ(t).
    SinglePhoton,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `√κ e^{κt/2}` for `t ≤ 0`, zero afterwards; mode-matched to a qubit
    /// of linewidth κ.
    RisingExponential { rate: f64 },
    /// Gaussian whose intensity has standard deviation `width`.
    Gaussian { center: f64, width: f64 },
    /// Constant `1/√duration` on `[start, start + duration]`.
    Square { start: f64, duration: f64 },
    /// No field at all.
    Vacuum,
}

impl Shape {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::RisingExponential { rate } => rate.is_finite() && rate > 0.0,
            Shape::Gaussian { center, width } => {
                center.is_finite() && width.is_finite() && width > 0.0
            }
            Shape::Square { start, duration } => {
                start.is_finite() && duration.is_finite() && duration > 0.0
            }
            Shape::Vacuum => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "invalid pulse shape parameters: {self:?}"
            )))
        }
    }

    /// Interval outside which the shape vanishes identically.
    pub fn natural_support(&self) -> (f64, f64) {
        match *self {
            Shape::RisingExponential { .. } => (f64::NEG_INFINITY, 0.0),
            Shape::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Shape::Square { start, duration } => (start, start + duration),
            Shape::Vacuum => (0.0, 0.0),
        }
    }

    /// Default truncation window: five decay times (or five widths).
    pub fn default_support(&self) -> (f64, f64) {
        match *self {
            Shape::RisingExponential { rate } => (-5.0 / rate, 0.0),
            Shape::Gaussian { center, width } => (center - 5.0 * width, center + 5.0 * width),
            Shape::Square { start, duration } => (start, start + duration),
            Shape::Vacuum => (0.0, 0.0),
        }
    }

    /// The analytic formula, ignoring any support restriction.
    fn formula(&self, t: f64) -> f64 {
        match *self {
            Shape::RisingExponential { rate } => rate.sqrt() * (0.5 * rate * t).exp(),
            Shape::Gaussian { center, width } => {
                let u = (t - center) / width;
                (2.0 * PI * width * width).powf(-0.25) * (-0.25 * u * u).exp()
            }
            Shape::Square { duration, .. } => duration.sqrt().recip(),
            Shape::Vacuum => 0.0,
        }
    }

    /// `∫_a^b |shape|² dt` for `a ≤ b` inside the natural support.
    fn intensity_integral(&self, a: f64, b: f64) -> f64 {
        match *self {
            Shape::RisingExponential { rate } => (rate * b).exp() - (rate * a).exp(),
            Shape::Gaussian { center, width } => {
                // Intensity is a normal density; integrate with composite
                // Gauss–Legendre on a bounded window.
                let lo = a.max(center - 40.0 * width);
                let hi = b.min(center + 40.0 * width);
                if hi <= lo {
                    return 0.0;
                }
                gauss_legendre(|t| self.formula(t).powi(2), lo, hi, 400)
            }
            Shape::Square { duration, .. } => (b - a) / duration,
            Shape::Vacuum => 0.0,
        }
    }
}

fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    // 5-point rule, exact for degree 9 polynomials on each panel.
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_47,
        0.478_628_670_499_366_47,
        0.236_926_885_056_189_08,
        0.236_926_885_056_189_08,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * total
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    shape: Shape,
    scale: f64,
    statistics: Statistics,
    support: (f64, f64),
    label: String,
}

impl Pulse {
    /// Coherent pulse truncated to `support` without renormalization.
    pub fn coherent(shape: Shape, support: (f64, f64)) -> Result<Self> {
        Pulse::build(shape, 1.0, Statistics::Coherent, support)
    }

    /// Coherent pulse truncated to `support` and rescaled to carry
    /// `photon_number` photons on average.
    pub fn coherent_with_photons(
        shape: Shape,
        support: (f64, f64),
        photon_number: f64,
    ) -> Result<Self> {
        normalize_pulse(&Pulse::coherent(shape, support)?, photon_number)
    }

    /// Single-photon wavepacket, truncated to `support` and renormalized.
    pub fn single_photon(shape: Shape, support: (f64, f64)) -> Result<Self> {
        if matches!(shape, Shape::Vacuum) {
            return Err(Error::domain(
                "a single-photon pulse needs a non-vacuum envelope",
            ));
        }
        let raw = Pulse::build(shape, 1.0, Statistics::SinglePhoton, support)?;
        normalize_pulse(&raw, 1.0)
    }

    /// The empty waveguide.
    pub fn vacuum() -> Self {
        Pulse {
            shape: Shape::Vacuum,
            scale: 0.0,
            statistics: Statistics::Coherent,
            support: (0.0, 0.0),
            label: "vacuum".to_string(),
        }
    }

    fn build(
        shape: Shape,
        scale: f64,
        statistics: Statistics,
        support: (f64, f64),
    ) -> Result<Self> {
        shape.validate()?;
        let (lo, hi) = shape.natural_support();
        let support = (support.0.max(lo), support.1.min(hi));
        if !(support.0.is_finite() && support.1.is_finite()) || support.1 < support.0 {
            return Err(Error::domain(format!(
                "pulse support must be a finite non-empty window, got [{}, {}]",
                support.0, support.1
            )));
        }
        let label = match shape {
            Shape::RisingExponential { .. } => "rising_exponential",
            Shape::Gaussian { .. } => "gaussian",
            Shape::Square { .. } => "square",
            Shape::Vacuum => "vacuum",
        };
        Ok(Pulse {
            shape,
            scale,
            statistics,
            support,
            label: label.to_string(),
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Real positive factor multiplying the unit-norm shape.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn in_support(&self, t: f64) -> bool {
        t >= self.support.0 && t <= self.support.1
    }

    /// Envelope value at `t`; exactly zero outside the (closed) support.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        if self.in_support(t) {
            Complex64::new(self.scale * self.shape.formula(t), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Envelope at `t` continued smoothly from the piece containing `probe`.
    ///
    /// At a support edge this yields the one-sided limit taken from the side
    /// of `probe`, which is what a step lying entirely on that side sees.
    pub fn evaluate_from(&self, t: f64, probe: f64) -> Complex64 {
        if self.in_support(probe) {
            Complex64::new(self.scale * self.shape.formula(t), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Times where the envelope may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        if matches!(self.shape, Shape::Vacuum) {
            Vec::new()
        } else {
            vec![self.support.0, self.support.1]
        }
    }

    /// `∫_a^b |envelope|² dt`: photons (or probability) passing in `[a, b]`.
    pub fn intensity_between(&self, a: f64, b: f64) -> f64 {
        let lo = a.max(self.support.0);
        let hi = b.min(self.support.1);
        if hi <= lo {
            return 0.0;
        }
        self.scale * self.scale * self.shape.intensity_integral(lo, hi)
    }

    /// `∫|envelope|² dt` over the whole support.
    pub fn photon_number(&self) -> f64 {
        self.intensity_between(self.support.0, self.support.1)
    }

    /// Largest `|envelope|` over the support.
    pub fn peak_amplitude(&self) -> f64 {
        let (lo, hi) = self.support;
        let peak_time = match self.shape {
            Shape::RisingExponential { .. } => hi,
            Shape::Gaussian { center, .. } => center.clamp(lo, hi),
            Shape::Square { .. } => lo,
            Shape::Vacuum => return 0.0,
        };
        self.evaluate(peak_time).norm()
    }

    pub(crate) fn validate_statistics(&self) -> Result<()> {
        if self.statistics == Statistics::SinglePhoton {
            let n = self.photon_number();
            if (n - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::domain(format!(
                    "single-photon wavefunction has norm {n}, expected 1"
                )));
            }
        }
        Ok(())
    }
}

/// Envelope value of `p` at time `t`.
pub fn evaluate_envelope(p: &Pulse, t: f64) -> Complex64 {
    p.evaluate(t)
}

/// Rescale `p` by a positive real factor so that `∫|envelope|² dt = target`.
pub fn normalize_pulse(p: &Pulse, target: f64) -> Result<Pulse> {
    if !(target.is_finite() && target >= 0.0) {
        return Err(Error::domain(format!(
            "target photon number must be non-negative, got {target}"
        )));
    }
    let n = p.photon_number();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::domain("cannot normalize an envelope with zero norm"));
    }
    let mut out = p.clone();
    out.scale = p.scale * (target / n).sqrt();
    if out.statistics == Statistics::SinglePhoton && (target - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::domain(
            "a single-photon wavefunction must have unit norm",
        ));
    }
    Ok(out)
}
