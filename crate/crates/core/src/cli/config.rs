//! TOML scenario configuration.
//!
//! ```toml
//! kind = "franson-scan"   # franson-scan | hom-scan | bound-sweep | factorization-check | wk-validate
//! seed = 7
//! output = "franson.csv"  # optional; relative to the config file
//!
//! [pump]
//! model = "gsm"           # or model = "tabulated", path = "kernel.csd"
//! amplitude = 1.0
//! bandwidth = 1.0
//! correlation_width = 0.5 # a number or "inf"
//! center = 100.0
//!
//! [response]
//! signal_center = 50.0    # idler_center defaults to center - signal_center
//! channel = { phase_matching = { model = "gaussian", width = 20.0 }, signal_filter = { model = "unity" }, idler_filter = { model = "unity" } }
//!
//! [sweep]
//! start = -3.0
//! stop = 3.0
//! n_points = 601
//! ```
//!
//! Optional tables: `[paths]` (the twelve pathway parameters, default zero),
//! `[couplings]` (`kappa_s`, `kappa_i`, default one), `[windows]`
//! (`photon_collection`, `coincidence`, default `"inf"`), `[grids.pump]` and
//! `[grids.difference]` (`span_half_width`, `n_points`), `[oracle]`
//! (`count`, `times`) and `[wk]` (`lattice_points`, `extent`). A response may
//! use `channels = [{...}, {...}]` instead of one shared `channel`, and may
//! carry a `phase_screen`. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::biphoton::{Channel, CouplingAmplitudes, PathwayPair, PhaseScreen, SpectralResponse, RESOLUTION_FRACTION};
use crate::detection::{AveragingWindows, SweepParameter};
use crate::error::{Error, Result};
use crate::extent::Extent;
use crate::pump_models::{io::load_kernel, CrossSpectralDensity, FrequencyGrid, GaussianSchellModel};

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    FransonScan,
    HomScan,
    BoundSweep,
    FactorizationCheck,
    WkValidate,
}

impl RunKind {
    pub fn name(self) -> &'static str {
        match self {
            RunKind::FransonScan => "franson-scan",
            RunKind::HomScan => "hom-scan",
            RunKind::BoundSweep => "bound-sweep",
            RunKind::FactorizationCheck => "factorization-check",
            RunKind::WkValidate => "wk-validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PumpSpec {
    Gsm {
        #[serde(default = "one")]
        amplitude: f64,
        bandwidth: f64,
        correlation_width: Extent,
        center: f64,
    },
    Tabulated {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseSpec {
    pub signal_center: f64,
    #[serde(default)]
    pub idler_center: Option<f64>,
    #[serde(default)]
    pub channel: Option<Channel>,
    #[serde(default)]
    pub channels: Option<[Channel; 2]>,
    #[serde(default)]
    pub phase_screen: Option<PhaseScreen>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDef {
    pub span_half_width: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub pump: Option<GridDef>,
    #[serde(default)]
    pub difference: Option<GridDef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Defaults by run kind: `delta-tau` for Franson scans and bound
    /// sweeps, `delta-tau-prime` for HOM scans.
    #[serde(default)]
    pub parameter: Option<SweepParameter>,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub count: usize,
    /// Detection-time pairs `[t_s, t_i]`.
    pub times: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WkSpec {
    #[serde(default = "default_lattice")]
    pub lattice_points: usize,
    /// Lattice half-extent in units of the pulse width.
    #[serde(default = "default_wk_extent")]
    pub extent: f64,
}

fn default_lattice() -> usize {
    11
}

fn default_wk_extent() -> f64 {
    5.0
}

impl Default for WkSpec {
    fn default() -> Self {
        Self {
            lattice_points: default_lattice(),
            extent: default_wk_extent(),
        }
    }
}

fn default_couplings() -> CouplingAmplitudes {
    CouplingAmplitudes {
        kappa_s: [1.0, 1.0],
        kappa_i: [1.0, 1.0],
    }
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: RunKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub pump: PumpSpec,
    #[serde(default)]
    pub response: Option<ResponseSpec>,
    #[serde(default)]
    pub paths: PathwayPair,
    #[serde(default = "default_couplings")]
    pub couplings: CouplingAmplitudes,
    #[serde(default)]
    pub windows: AveragingWindows,
    #[serde(default)]
    pub grids: GridSpec,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub oracle: Option<OracleSpec>,
    #[serde(default)]
    pub wk: Option<WkSpec>,
    /// Directory relative paths resolve against; not part of the file.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut c: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.base_dir = base_dir.to_path_buf();
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml_str(&text, &dir)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn build_csd(&self) -> Result<CrossSpectralDensity> {
        match &self.pump {
            PumpSpec::Gsm {
                amplitude,
                bandwidth,
                correlation_width,
                center,
            } => Ok(CrossSpectralDensity::gsm(
                GaussianSchellModel::new(*amplitude, *bandwidth, *correlation_width, *center)
                    .map_err(as_config)?,
            )),
            PumpSpec::Tabulated { path } => Ok(CrossSpectralDensity::tabulated(load_kernel(&self.resolve(path))?)),
        }
    }

    pub fn build_response(&self, pump_center: f64) -> Result<SpectralResponse> {
        let spec = self
            .response
            .as_ref()
            .ok_or_else(|| Error::Config(format!("run kind {} needs a [response] table", self.kind.name())))?;
        let idler = spec.idler_center.unwrap_or(pump_center - spec.signal_center);
        if (spec.signal_center + idler - pump_center).abs() > 1e-12 * pump_center.abs().max(1.0) {
            return Err(Error::Config(format!(
                "signal and idler centres must add up to the pump centre {pump_center}"
            )));
        }
        let channels = match (spec.channel, spec.channels) {
            (Some(c), None) => [c, c],
            (None, Some(cs)) => cs,
            _ => return Err(Error::Config("give exactly one of `channel` or `channels`".into())),
        };
        let resp = SpectralResponse::new(spec.signal_center, idler, channels)?;
        match spec.phase_screen {
            Some(s) => resp.with_phase_screen(s),
            None => Ok(resp),
        }
    }

    pub fn difference_grid(&self, resp: &SpectralResponse) -> Result<FrequencyGrid> {
        let grid = match self.grids.difference {
            Some(g) => FrequencyGrid::new(resp.difference_center(), g.span_half_width, g.n_points).map_err(as_config)?,
            None => resp.default_grid()?,
        };
        if let Some(w) = resp.narrowest_width() {
            if grid.spacing() > RESOLUTION_FRACTION * w * (1.0 + 1e-12) {
                return Err(Error::Config(format!(
                    "difference grid spacing {} does not resolve response width {w}",
                    grid.spacing()
                )));
            }
        }
        Ok(grid)
    }

    pub fn pump_grid(&self, csd: &CrossSpectralDensity) -> Result<FrequencyGrid> {
        match self.grids.pump {
            Some(g) => FrequencyGrid::new(csd.center(), g.span_half_width, g.n_points).map_err(as_config),
            None => Ok(csd.natural_grid()),
        }
    }

    pub fn sweep_parameter(&self) -> SweepParameter {
        let default = match self.kind {
            RunKind::HomScan => SweepParameter::DeltaTauPrime,
            _ => SweepParameter::DeltaTau,
        };
        self.sweep.and_then(|s| s.parameter).unwrap_or(default)
    }
}

pub(crate) fn as_config(e: Error) -> Error {
    match e {
        Error::Io(_) | Error::Config(_) | Error::Parse(_) => e,
        other => Error::Config(other.to_string()),
    }
}
