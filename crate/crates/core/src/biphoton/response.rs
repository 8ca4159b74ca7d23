use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::biphoton::Alternative;
use crate::error::{Error, Result};
use crate::pump_models::FrequencyGrid;

/// Phase-matching function of the crystal, as a function of the difference
/// frequency offset `ω̄_d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhaseMatching {
    Unity,
    /// `exp(-ω̄_d²/(2σ²))`.
    Gaussian { width: f64 },
    /// `sinc(ω̄_d·L_D/2)`.
    Sinc { length_dispersion: f64 },
}

/// Amplitude transmission of a spectral filter, as a function of the offset
/// from the filter centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Filter {
    Unity,
    /// `exp(-ν²/(2w²))`.
    Gaussian { width: f64 },
    /// One for `|ν| ≤ half_width`, zero outside.
    TopHat { half_width: f64 },
}

impl PhaseMatching {
    pub fn eval(&self, wd: f64) -> f64 {
        match *self {
            PhaseMatching::Unity => 1.0,
            PhaseMatching::Gaussian { width } => (-wd * wd / (2.0 * width * width)).exp(),
            PhaseMatching::Sinc { length_dispersion } => {
                let x = 0.5 * wd * length_dispersion;
                if x.abs() < 1e-8 {
                    1.0 - x * x / 6.0
                } else {
                    x.sin() / x
                }
            }
        }
    }

    /// Characteristic width in `ω̄_d`.
    fn width(&self) -> Option<f64> {
        match *self {
            PhaseMatching::Unity => None,
            PhaseMatching::Gaussian { width } => Some(width),
            PhaseMatching::Sinc { length_dispersion } => Some(2.0 * PI / length_dispersion),
        }
    }

    fn validate(&self) -> Result<()> {
        let w = match *self {
            PhaseMatching::Unity => return Ok(()),
            PhaseMatching::Gaussian { width } => width,
            PhaseMatching::Sinc { length_dispersion } => length_dispersion,
        };
        positive("phase-matching width", w)
    }
}

impl Filter {
    pub fn eval(&self, nu: f64) -> f64 {
        match *self {
            Filter::Unity => 1.0,
            Filter::Gaussian { width } => (-nu * nu / (2.0 * width * width)).exp(),
            Filter::TopHat { half_width } => {
                if nu.abs() <= half_width {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Characteristic width in `ω̄_d` (the filter is read at `±ω̄_d/2`).
    fn width(&self) -> Option<f64> {
        match *self {
            Filter::Unity => None,
            Filter::Gaussian { width } => Some(2.0 * width),
            Filter::TopHat { half_width } => Some(2.0 * half_width),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Filter::Unity => Ok(()),
            Filter::Gaussian { width } => positive("filter width", width),
            Filter::TopHat { half_width } => positive("filter half-width", half_width),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

/// Crystal and filters seen by one pathway alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    pub phase_matching: PhaseMatching,
    pub signal_filter: Filter,
    pub idler_filter: Filter,
}

impl Channel {
    pub fn unity() -> Self {
        Channel {
            phase_matching: PhaseMatching::Unity,
            signal_filter: Filter::Unity,
            idler_filter: Filter::Unity,
        }
    }

    /// `g(ω̄_d) = Φ(ω̄_d)·f_s(ω̄_d/2)·f_i(-ω̄_d/2)`.
    pub fn g(&self, wd: f64) -> f64 {
        self.phase_matching.eval(wd) * self.signal_filter.eval(0.5 * wd) * self.idler_filter.eval(-0.5 * wd)
    }

    /// Full two-frequency response `Φ·f_s·f_i` at pump offset `wp` and
    /// difference offset `wd`, without the narrowband-pump approximation.
    pub fn joint(&self, wp: f64, wd: f64) -> f64 {
        self.phase_matching.eval(wd)
            * self.signal_filter.eval(0.5 * (wp + wd))
            * self.idler_filter.eval(0.5 * (wp - wd))
    }

    fn narrowest(&self) -> Option<f64> {
        [
            self.phase_matching.width(),
            self.signal_filter.width(),
            self.idler_filter.width(),
        ]
        .into_iter()
        .flatten()
        .reduce(f64::min)
    }
}

/// Random spectral phase applied to the down-converted pair after
/// generation, drawn independently for each pathway alternative.
///
/// Each draw is a stationary Gaussian-correlated phase `ψ(ω̄_d)` with rms
/// `rms_phase` and correlation width `correlation_width`, realized with
/// random Fourier features so that it can be evaluated at any frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseScreen {
    pub rms_phase: f64,
    pub correlation_width: f64,
    pub draws: usize,
    pub seed: u64,
}

const SCREEN_FEATURES: usize = 64;

/// One realized phase function.
#[derive(Debug, Clone)]
pub(crate) struct ScreenDraw {
    amplitude: f64,
    features: Vec<(f64, f64)>,
}

impl ScreenDraw {
    pub(crate) fn phase(&self, wd: f64) -> f64 {
        self.amplitude * self.features.iter().map(|&(k, th)| (k * wd + th).cos()).sum::<f64>()
    }
}

impl PhaseScreen {
    fn validate(&self) -> Result<()> {
        if !(self.rms_phase.is_finite() && self.rms_phase >= 0.0) {
            return Err(Error::Config("phase-screen rms must be non-negative".into()));
        }
        positive("phase-screen correlation width", self.correlation_width)?;
        if self.draws == 0 {
            return Err(Error::Config("phase screen needs at least one draw".into()));
        }
        Ok(())
    }

    pub(crate) fn realize(&self, alt: Alternative) -> Vec<ScreenDraw> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(alt.index() as u64);
        let amplitude = self.rms_phase * (2.0 / SCREEN_FEATURES as f64).sqrt();
        (0..self.draws)
            .map(|_| {
                let features = (0..SCREEN_FEATURES)
                    .map(|_| {
                        let z: f64 = rng.sample(StandardNormal);
                        (z / self.correlation_width, rng.random::<f64>() * 2.0 * PI)
                    })
                    .collect();
                ScreenDraw { amplitude, features }
            })
            .collect()
    }
}

/// Spectral response of both pathways: phase matching, filters, carriers,
/// and an optional post-generation phase screen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResponse {
    signal_center: f64,
    idler_center: f64,
    channels: [Channel; 2],
    phase_screen: Option<PhaseScreen>,
}

impl SpectralResponse {
    /// Builds a response; the pump carrier is fixed by phase matching to
    /// `signal_center + idler_center`.
    pub fn new(signal_center: f64, idler_center: f64, channels: [Channel; 2]) -> Result<Self> {
        for (name, v) in [("signal centre", signal_center), ("idler centre", idler_center)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        for c in &channels {
            c.phase_matching.validate()?;
            c.signal_filter.validate()?;
            c.idler_filter.validate()?;
        }
        Ok(Self {
            signal_center,
            idler_center,
            channels,
            phase_screen: None,
        })
    }

    /// Same crystal and filters for both alternatives.
    pub fn symmetric(signal_center: f64, idler_center: f64, channel: Channel) -> Result<Self> {
        Self::new(signal_center, idler_center, [channel, channel])
    }

    /// Degenerate pair centres with a Gaussian `g` of width `width` built
    /// from a Gaussian phase-matching function and unity filters.
    pub fn gaussian(pump_center: f64, width: f64) -> Result<Self> {
        Self::symmetric(
            0.5 * pump_center,
            0.5 * pump_center,
            Channel {
                phase_matching: PhaseMatching::Gaussian { width },
                signal_filter: Filter::Unity,
                idler_filter: Filter::Unity,
            },
        )
    }

    pub fn with_phase_screen(mut self, screen: PhaseScreen) -> Result<Self> {
        screen.validate()?;
        self.phase_screen = Some(screen);
        Ok(self)
    }

    pub fn without_phase_screen(mut self) -> Self {
        self.phase_screen = None;
        self
    }

    pub fn signal_center(&self) -> f64 {
        self.signal_center
    }

    pub fn idler_center(&self) -> f64 {
        self.idler_center
    }

    /// `ω_p0 = ω_s0 + ω_i0`.
    pub fn pump_center(&self) -> f64 {
        self.signal_center + self.idler_center
    }

    /// `ω_d0 = ω_s0 - ω_i0`.
    pub fn difference_center(&self) -> f64 {
        self.signal_center - self.idler_center
    }

    pub fn channel(&self, alt: Alternative) -> &Channel {
        &self.channels[alt.index()]
    }

    pub fn phase_screen(&self) -> Option<&PhaseScreen> {
        self.phase_screen.as_ref()
    }

    /// Narrowest characteristic width over both channels, or `None` when
    /// every factor is unity.
    pub fn narrowest_width(&self) -> Option<f64> {
        self.channels.iter().filter_map(Channel::narrowest).reduce(f64::min)
    }

    /// Default `ω̄_d` grid: 129 points over ±6 of the narrowest width.
    pub fn default_grid(&self) -> Result<FrequencyGrid> {
        let w = self.narrowest_width().ok_or_else(|| {
            Error::Config("a unity response has no natural width; supply a difference grid".into())
        })?;
        FrequencyGrid::new(self.difference_center(), 6.0 * w, 129)
    }

    /// Screen realizations for one alternative (a single zero phase when no
    /// screen is configured).
    pub(crate) fn screen_draws(&self, alt: Alternative) -> Vec<Option<ScreenDraw>> {
        match &self.phase_screen {
            Some(s) => s.realize(alt).into_iter().map(Some).collect(),
            None => vec![None],
        }
    }
}

/// Deterministic `g_j(ω̄_d)` of the requested alternative.
pub fn g_response(resp: &SpectralResponse, alt: Alternative, wd: f64) -> Complex64 {
    Complex64::new(resp.channel(alt).g(wd), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unity_response_is_one_everywhere() {
        let r = SpectralResponse::symmetric(3.0, 2.0, Channel::unity()).unwrap();
        for w in [-100.0, -1.0, 0.0, 2.5, 1e4] {
            assert_eq!(g_response(&r, Alternative::First, w), Complex64::new(1.0, 0.0));
        }
        assert!(r.default_grid().is_err());
    }

    #[test]
    fn gaussian_phase_matching_at_one_width() {
        let r = SpectralResponse::gaussian(10.0, 3.0).unwrap();
        let v = g_response(&r, Alternative::Second, 3.0).re;
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn sinc_is_one_at_origin() {
        let c = Channel {
            phase_matching: PhaseMatching::Sinc { length_dispersion: 0.3 },
            ..Channel::unity()
        };
        assert_eq!(c.g(0.0), 1.0);
        // First zero at 2π/L_D.
        assert!(c.g(2.0 * PI / 0.3).abs() < 1e-15);
    }

    #[test]
    fn filters_are_read_at_half_the_difference_frequency() {
        let c = Channel {
            phase_matching: PhaseMatching::Unity,
            signal_filter: Filter::Gaussian { width: 1.0 },
            idler_filter: Filter::TopHat { half_width: 1.0 },
        };
        assert!((c.g(2.0) - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(c.g(2.5), 0.0);
        // Joint response reduces to g at zero pump offset.
        assert_eq!(c.joint(0.0, 1.3), c.g(1.3));
    }

    #[test]
    fn phase_matching_relation_fixes_pump_carrier() {
        let r = SpectralResponse::symmetric(7.0, 5.0, Channel::unity()).unwrap();
        assert_eq!(r.pump_center(), 12.0);
        assert_eq!(r.difference_center(), 2.0);
    }

    #[test]
    fn rejects_non_positive_widths() {
        let c = Channel {
            phase_matching: PhaseMatching::Gaussian { width: 0.0 },
            ..Channel::unity()
        };
        assert!(matches!(SpectralResponse::symmetric(1.0, 1.0, c), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_model_id_is_a_configuration_error() {
        let parsed: std::result::Result<Filter, _> = toml::from_str("model = \"lorentzian\"\nwidth = 1.0");
        assert!(parsed.is_err());
    }

    #[test]
    fn screen_phase_statistics() {
        let s = PhaseScreen { rms_phase: 0.8, correlation_width: 2.0, draws: 4000, seed: 5 };
        let draws = s.realize(Alternative::First);
        let var = draws.iter().map(|d| d.phase(0.3).powi(2)).sum::<f64>() / draws.len() as f64;
        assert!((var - 0.64).abs() < 0.05, "variance {var}");
        // Correlation at one width is close to exp(-1/2).
        let cov = draws.iter().map(|d| d.phase(0.3) * d.phase(2.3)).sum::<f64>() / draws.len() as f64;
        assert!((cov / 0.64 - (-0.5f64).exp()).abs() < 0.08, "correlation {}", cov / 0.64);
    }
}
