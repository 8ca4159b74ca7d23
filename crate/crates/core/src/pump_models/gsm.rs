use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, Error, Result};
use crate::extent::Extent;
use crate::pump_models::FrequencyGrid;

/// Gaussian Schell-model pump: Gaussian spectral envelope of width
/// `bandwidth` with Gaussian frequency correlations of width
/// `correlation_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSchellModel {
    amplitude: f64,
    bandwidth: f64,
    correlation_width: Extent,
    center: f64,
}

impl GaussianSchellModel {
    pub fn new(
        amplitude: f64,
        bandwidth: f64,
        correlation_width: impl Into<Extent>,
        center: f64,
    ) -> Result<Self> {
        let correlation_width = correlation_width.into();
        for (name, v) in [("amplitude", amplitude), ("bandwidth", bandwidth), ("center", center)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !correlation_width.is_valid() {
            return Err(Error::Domain(format!(
                "correlation width must be positive, got {correlation_width}"
            )));
        }
        Ok(Self {
            amplitude,
            bandwidth,
            correlation_width,
            center,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn correlation_width(&self) -> Extent {
        self.correlation_width
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Cross-spectral density at offsets `(w1, w2)` from the carrier.
    pub fn csd(&self, w1: f64, w2: f64) -> Result<f64> {
        require_finite("w1", w1)?;
        require_finite("w2", w2)?;
        Ok(self.csd_unchecked(w1, w2))
    }

    pub(crate) fn csd_unchecked(&self, w1: f64, w2: f64) -> f64 {
        let b2 = self.bandwidth * self.bandwidth;
        let envelope = (-(w1 * w1 + w2 * w2) / (4.0 * b2)).exp();
        let correlation = match self.correlation_width {
            Extent::Infinite => 1.0,
            Extent::Finite(c) => (-(w1 - w2).powi(2) / (2.0 * c * c)).exp(),
        };
        self.amplitude * envelope * correlation
    }

    /// Temporal width `T` of the non-stationary pulse. Finite in both limits;
    /// for an infinite correlation width it reduces to `1/(2Δω)`.
    pub fn pulse_width(&self) -> f64 {
        (1.0 / (2.0 * self.bandwidth).powi(2) + self.correlation_width.inverse_square()).sqrt()
    }

    /// Coherence time `τ_coh = (Δω_c/Δω)·T`.
    pub fn coherence_time(&self) -> Extent {
        match self.correlation_width {
            Extent::Infinite => Extent::Infinite,
            Extent::Finite(c) => {
                // (c/Δω)·sqrt(1/(2Δω)² + 1/c²) written to stay accurate as c → 0.
                let r = c / (2.0 * self.bandwidth);
                Extent::Finite((1.0 + r * r).sqrt() / self.bandwidth)
            }
        }
    }

    /// Mean intensity `I(t)` of the pulse.
    pub fn intensity(&self, t: f64) -> f64 {
        let tw = self.pulse_width();
        2.0 * PI * self.bandwidth * self.amplitude / tw * (-t * t / (2.0 * tw * tw)).exp()
    }

    /// Degree of coherence `γ(Δt) = exp(-Δt²/(2τ_coh²))`; identically one
    /// for a fully coherent pump.
    pub fn degree_of_coherence(&self, dt: f64) -> f64 {
        match self.coherence_time() {
            Extent::Infinite => 1.0,
            Extent::Finite(tc) => (-dt * dt / (2.0 * tc * tc)).exp(),
        }
    }

    /// Closed-form two-time correlation `Γ(t1, t2)` from the generalized
    /// Wiener–Khintchine transform of [`Self::csd`]. Real and positive.
    pub fn temporal_correlation(&self, t1: f64, t2: f64) -> Result<f64> {
        require_finite("t1", t1)?;
        require_finite("t2", t2)?;
        Ok((self.intensity(t1) * self.intensity(t2)).sqrt() * self.degree_of_coherence(t1 - t2))
    }

    /// Spectral half-width used by default grids: six standard deviations of
    /// the per-frequency amplitude envelope `exp(-ω²/(4Δω²))`.
    pub fn default_span(&self) -> f64 {
        6.0 * std::f64::consts::SQRT_2 * self.bandwidth
    }

    pub fn default_grid(&self) -> FrequencyGrid {
        FrequencyGrid::new(self.center, self.default_span(), super::DEFAULT_POINTS)
            .expect("positive bandwidth gives a valid grid")
    }

    /// Deterministic spectral amplitude whose outer product reproduces the
    /// kernel; only exists for a fully coherent pump.
    pub fn coherent_amplitude(&self, offset: f64) -> Option<f64> {
        match self.correlation_width {
            Extent::Infinite => Some(
                self.amplitude.sqrt()
                    * (-offset * offset / (4.0 * self.bandwidth * self.bandwidth)).exp(),
            ),
            Extent::Finite(_) => None,
        }
    }
}
