use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::accuracy::Accuracy;
use crate::biphoton::{gamma2_between, Alternative, PathwayPair, SpectralResponse};
use crate::error::{Error, Result};
use crate::pump_models::{CrossSpectralDensity, FrequencyGrid};

/// Relative tolerance below which a negative rate is treated as round-off.
pub const NEGATIVE_RATE_TOLERANCE: f64 = 1e-10;

/// Scalar coupling amplitudes of the signal and idler modes into each
/// pathway.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingAmplitudes {
    pub kappa_s: [f64; 2],
    pub kappa_i: [f64; 2],
}

impl CouplingAmplitudes {
    pub fn new(kappa_s1: f64, kappa_i1: f64, kappa_s2: f64, kappa_i2: f64) -> Result<Self> {
        let c = Self {
            kappa_s: [kappa_s1, kappa_s2],
            kappa_i: [kappa_i1, kappa_i2],
        };
        c.validate()?;
        Ok(c)
    }

    /// Pathway amplitudes `κ_1`, `κ_2` given directly.
    pub fn from_pathways(kappa1: f64, kappa2: f64) -> Result<Self> {
        Self::new(kappa1, 1.0, kappa2, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.kappa_s.iter().chain(&self.kappa_i);
        if all.into_iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(Error::Config("coupling amplitudes must be finite and non-negative".into()));
        }
        Ok(())
    }

    /// `κ_j = κ_sj·κ_ij`.
    pub fn kappa(&self, alt: Alternative) -> f64 {
        let j = alt.index();
        self.kappa_s[j] * self.kappa_i[j]
    }
}

/// A coincidence rate and its decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateValue {
    pub rate: f64,
    /// `κ_j²R⁽²⁾_j` for each pathway.
    pub direct: [f64; 2],
    pub interference: f64,
    /// A slightly negative sum was set to zero.
    pub clamped: bool,
    pub accuracy: Accuracy,
}

/// Sums direct and interference terms, clamping round-off negatives.
pub(crate) fn assemble_rate(direct: [f64; 2], interference: f64, accuracy: Accuracy) -> Result<RateValue> {
    let total = direct[0] + direct[1] + interference;
    let floor = -NEGATIVE_RATE_TOLERANCE * (direct[0] + direct[1]);
    let (rate, clamped) = if total >= 0.0 {
        (total, false)
    } else if total >= floor {
        (0.0, true)
    } else {
        return Err(Error::InternalConsistency(format!(
            "coincidence rate {total:e} is negative beyond tolerance"
        )));
    };
    Ok(RateValue {
        rate,
        direct,
        interference,
        clamped,
        accuracy,
    })
}

/// Instantaneous coincidence rate at detection times `(t_s, t_i)`.
#[allow(clippy::too_many_arguments)]
pub fn coincidence_rate(
    csd: &CrossSpectralDensity,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    couplings: &CouplingAmplitudes,
    t_s: f64,
    t_i: f64,
    grid: &FrequencyGrid,
) -> Result<RateValue> {
    couplings.validate()?;
    let (a, b) = (Alternative::First, Alternative::Second);
    let (k1, k2) = (couplings.kappa(a), couplings.kappa(b));
    let mut accuracy = Accuracy::Resolved;
    let mut direct = [0.0; 2];
    for (slot, alt, k) in [(0, a, k1), (1, b, k2)] {
        if k == 0.0 {
            continue;
        }
        let r = gamma2_between(csd, resp, paths, (alt, alt), t_s, t_i, grid)?;
        accuracy = accuracy.and(r.accuracy);
        direct[slot] = k * k * r.value.re;
    }
    let mut interference = 0.0;
    if k1 > 0.0 && k2 > 0.0 {
        let g = gamma2_between(csd, resp, paths, (a, b), t_s, t_i, grid)?;
        accuracy = accuracy.and(g.accuracy);
        interference = 2.0 * (k1 * k2 * g.value * Complex64::from_polar(1.0, -paths.delta_phi())).re;
    }
    assemble_rate(direct, interference, accuracy)
}
