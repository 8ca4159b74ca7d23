use num_complex::Complex64;
use rayon::prelude::*;

use crate::accuracy::Accuracy;
use crate::biphoton::correlation::check_carriers;
use crate::biphoton::{Alternative, CoherenceSample, PathwayPair, SpectralResponse};
use crate::error::{require_finite, Error, Result};
use crate::pump_models::{sample_realizations, CrossSpectralDensity, FieldRealizationSet, FrequencyGrid};
use crate::quadrature::trapezoid_weights;
use crate::stats::jackknife_mean;

/// Smallest ensemble accepted by the Monte-Carlo oracle.
pub const MIN_ORACLE_COUNT: usize = 100;

/// Jacobian of `(ω_s, ω_i) → (ω̄_p, ω̄_d)` squared, restoring the scale of
/// the factorized form from amplitudes integrated over `dω_s dω_i`.
const PAIR_JACOBIAN_SQUARED: f64 = 4.0;

/// Quadrature grids for the unfactorized amplitude integral, in the
/// rotated coordinates `ω̄_p = ω_s+ω_i-ω_p0` and `ω̄_d = ω_s-ω_i-ω_d0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleGrids {
    pub pump: FrequencyGrid,
    pub difference: FrequencyGrid,
}

impl OracleGrids {
    pub fn new(pump: FrequencyGrid, difference: FrequencyGrid) -> Self {
        Self { pump, difference }
    }

    /// The density's natural pump grid and the response's default
    /// difference grid.
    pub fn default_for(csd: &CrossSpectralDensity, resp: &SpectralResponse) -> Result<Self> {
        Ok(Self {
            pump: csd.natural_grid(),
            difference: resp.default_grid()?,
        })
    }
}

/// Monte-Carlo estimate of `Γ⁽²⁾` with its jackknife standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub sample: CoherenceSample,
    pub standard_error: f64,
    pub count: usize,
}

/// Linear functional `V ↦ A_j(t_s, t_i)` on pump realizations, one weight
/// vector per phase-screen draw.
struct AmplitudeFunctional {
    weights: Vec<Vec<Complex64>>,
}

impl AmplitudeFunctional {
    #[allow(clippy::too_many_arguments)]
    fn new(
        vgrid: &FrequencyGrid,
        resp: &SpectralResponse,
        paths: &PathwayPair,
        alt: Alternative,
        t_s: f64,
        t_i: f64,
        grids: &OracleGrids,
    ) -> Result<Self> {
        require_finite("t_s", t_s)?;
        require_finite("t_i", t_i)?;
        let lo = vgrid.center() - grids.pump.center() - vgrid.span_half_width();
        let hi = vgrid.center() - grids.pump.center() + vgrid.span_half_width();
        if !grids.pump.covers(lo, hi) {
            return Err(Error::Domain("joint pump axis does not cover the pump realization grid".into()));
        }
        let j = alt.index();
        let channel = resp.channel(alt);
        let (ws0, wi0) = (resp.signal_center(), resp.idler_center());
        let p = grids.pump.offsets();
        let d = grids.difference.offsets();
        let wp = trapezoid_weights(p.len(), grids.pump.spacing());
        let wd = trapezoid_weights(d.len(), grids.difference.spacing());
        // Offsets of the joint axes from the response carriers.
        let p_shift = grids.pump.center() - resp.pump_center();
        let d_shift = grids.difference.center() - resp.difference_center();
        let extra = paths.phi_p[j] + paths.phi_s[j] + paths.phi_i[j];
        let draws = resp.screen_draws(alt);
        let weights = draws
            .iter()
            .map(|draw| {
                let screen: Vec<f64> = d
                    .iter()
                    .map(|&x| draw.as_ref().map_or(0.0, |s| s.phase(x + d_shift)))
                    .collect();
                let mut out = vec![Complex64::new(0.0, 0.0); vgrid.n_points()];
                for (pk, &pp) in p.iter().enumerate() {
                    let pp = pp + p_shift;
                    let mut inner = Complex64::new(0.0, 0.0);
                    for (dk, &dd) in d.iter().enumerate() {
                        let dd = dd + d_shift;
                        let amp = channel.joint(pp, dd);
                        if amp == 0.0 {
                            continue;
                        }
                        let ws = ws0 + 0.5 * (pp + dd);
                        let wi = wi0 + 0.5 * (pp - dd);
                        let phase = (ws + wi) * paths.tau_p[j] - ws * (t_s - paths.tau_s[j])
                            - wi * (t_i - paths.tau_i[j])
                            + extra
                            + screen[dk];
                        inner += Complex64::from_polar(wd[dk] * amp, phase);
                    }
                    // dω_s dω_i = dω̄_p dω̄_d / 2.
                    let b = inner * (0.5 * wp[pk]);
                    spread(vgrid, pp + resp.pump_center() - vgrid.center(), b, &mut out);
                }
                out
            })
            .collect();
        Ok(Self { weights })
    }

    fn apply(&self, draw: usize, v: &[Complex64]) -> Complex64 {
        let w = &self.weights[draw % self.weights.len()];
        w.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// Adds `b·V(offset)` in the transposed form of linear interpolation, so the
/// functional acts directly on the realization nodes.
fn spread(vgrid: &FrequencyGrid, offset: f64, b: Complex64, out: &mut [Complex64]) {
    let h = vgrid.spacing();
    let pos = (offset + vgrid.span_half_width()) / h;
    let last = (vgrid.n_points() - 1) as f64;
    if !(pos >= -1e-9 && pos <= last + 1e-9) {
        return;
    }
    let pos = pos.clamp(0.0, last);
    let k = (pos.floor() as usize).min(vgrid.n_points() - 2);
    let frac = pos - k as f64;
    out[k] += b * (1.0 - frac);
    out[k + 1] += b * frac;
}

/// Biphoton amplitude `A_j(t_s, t_i)` of one pump realization `V` given on
/// `vgrid`, by direct quadrature over the joint signal–idler grid.
///
/// With a phase screen configured, the first screen draw is applied.
#[allow(clippy::too_many_arguments)]
pub fn biphoton_amplitude(
    realization: &[Complex64],
    vgrid: &FrequencyGrid,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    alt: Alternative,
    t_s: f64,
    t_i: f64,
    grids: &OracleGrids,
) -> Result<Complex64> {
    if realization.len() != vgrid.n_points() {
        return Err(Error::Domain("realization length does not match its grid".into()));
    }
    let f = AmplitudeFunctional::new(vgrid, resp, paths, alt, t_s, t_i, grids)?;
    Ok(f.apply(0, realization))
}

fn realizations_for(
    csd: &CrossSpectralDensity,
    grids: &OracleGrids,
    count: usize,
    seed: u64,
) -> Result<FieldRealizationSet> {
    if let CrossSpectralDensity::Gsm(m) = csd {
        if m.correlation_width().is_infinite() {
            let v: Vec<Complex64> = grids
                .pump
                .offsets()
                .iter()
                .map(|&w| Complex64::new(m.coherent_amplitude(w).unwrap_or(0.0), 0.0))
                .collect();
            return FieldRealizationSet::from_realizations(grids.pump.clone(), vec![v; count], seed);
        }
    }
    let kernel = match csd {
        CrossSpectralDensity::Gsm(_) => csd.tabulate(&grids.pump)?,
        CrossSpectralDensity::Tabulated(k) => k.clone(),
    };
    sample_realizations(&kernel, count, seed)
}

/// Monte-Carlo estimate of the two-photon cross-correlation at several
/// detection-time pairs from one shared pump ensemble.
///
/// Each estimate is `4·e^{iΔφ}·mean(conj(A_1)·A_2)`: the phase factor
/// removes the pathway phases carried by the amplitudes, so the result is
/// directly comparable with the factorized form.
pub fn gamma2_oracle_mc_batch(
    csd: &CrossSpectralDensity,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    times: &[(f64, f64)],
    count: usize,
    seed: u64,
    grids: &OracleGrids,
) -> Result<Vec<OracleEstimate>> {
    if count < MIN_ORACLE_COUNT {
        return Err(Error::Domain(format!(
            "oracle needs at least {MIN_ORACLE_COUNT} realizations, got {count}"
        )));
    }
    check_carriers(csd, resp)?;
    let set = realizations_for(csd, grids, count, seed)?;
    let vgrid = set.grid();
    let rotation = Complex64::from_polar(PAIR_JACOBIAN_SQUARED, paths.delta_phi());
    times
        .iter()
        .map(|&(t_s, t_i)| {
            let a1 = AmplitudeFunctional::new(vgrid, resp, paths, Alternative::First, t_s, t_i, grids)?;
            let a2 = AmplitudeFunctional::new(vgrid, resp, paths, Alternative::Second, t_s, t_i, grids)?;
            let samples: Vec<Complex64> = set
                .realizations()
                .par_iter()
                .enumerate()
                .map(|(r, v)| rotation * a1.apply(r, v).conj() * a2.apply(r, v))
                .collect();
            let (mean, se) = jackknife_mean(&samples);
            Ok(OracleEstimate {
                sample: CoherenceSample {
                    value: mean,
                    arguments: (t_s, t_i),
                    normalization: None,
                    accuracy: Accuracy::Resolved,
                },
                standard_error: se,
                count,
            })
        })
        .collect()
}

/// Single detection-time version of [`gamma2_oracle_mc_batch`].
#[allow(clippy::too_many_arguments)]
pub fn gamma2_oracle_mc(
    csd: &CrossSpectralDensity,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    t_s: f64,
    t_i: f64,
    count: usize,
    seed: u64,
    grids: &OracleGrids,
) -> Result<OracleEstimate> {
    let mut v = gamma2_oracle_mc_batch(csd, resp, paths, &[(t_s, t_i)], count, seed, grids)?;
    Ok(v.remove(0))
}
