//! Time-averaged detection: integration of the two-photon correlation over
//! the photon-collection and coincidence windows, fringe scans, and
//! visibility.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accuracy::Accuracy;
use crate::biphoton::{
    assemble_rate, check_carriers, Alternative, CouplingAmplitudes, DifferenceQuadrature, PathwayPair, RateValue,
    SpectralResponse, NORMALIZATION_SLACK,
};
use crate::error::{Error, Result};
use crate::extent::Extent;
use crate::pump_models::{wk_transform, CrossSpectralDensity, FrequencyGrid};
use crate::quadrature::{integrate_support, integrate_window, relative_gap, LineIntegral, HALF_GRID_TOLERANCE};

/// Averaging windows for the mean detection time `(t_s+t_i)/2` (photon
/// collection) and the detection-time difference `(t_s-t_i)/2`
/// (coincidence).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AveragingWindows {
    pub photon_collection: Extent,
    pub coincidence: Extent,
}

impl AveragingWindows {
    pub fn new(photon_collection: impl Into<Extent>, coincidence: impl Into<Extent>) -> Result<Self> {
        let w = Self {
            photon_collection: photon_collection.into(),
            coincidence: coincidence.into(),
        };
        w.validate()?;
        Ok(w)
    }

    /// Both windows unbounded.
    pub fn infinite() -> Self {
        Self {
            photon_collection: Extent::Infinite,
            coincidence: Extent::Infinite,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.photon_collection.is_valid() || !self.coincidence.is_valid() {
            return Err(Error::Config("finite averaging windows must be positive".into()));
        }
        Ok(())
    }
}

impl Default for AveragingWindows {
    fn default() -> Self {
        Self::infinite()
    }
}

/// Window-integrated correlation functions and their normalized envelopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAveraged {
    /// `Γ̄_p(τ_1, τ_2)`, including the carrier `e^{-iω_p0Δτ}`.
    pub pump: Complex64,
    /// `Γ̄_d(τ'_1, τ'_2)`, including the carrier `e^{-iω_d0Δτ'}`.
    pub difference: Complex64,
    /// `R̄⁽²⁾ = √(Ī_1Ī_2)·√(Ḡ_1Ḡ_2)`.
    pub r2: f64,
    /// `γ̄_p(Δτ)` with the carrier removed.
    pub gamma_p: Complex64,
    /// `γ̄_d(Δτ')` with the carrier removed.
    pub gamma_d: Complex64,
    /// `Ī_1, Ī_2`.
    pub intensities: [f64; 2],
    /// `Ḡ_1, Ḡ_2`.
    pub difference_norms: [f64; 2],
    pub accuracy: Accuracy,
}

fn integrate<F>(f: F, window: Extent, center: f64, quadrature: (f64, f64)) -> LineIntegral
where
    F: Fn(f64) -> Complex64,
{
    let (step, max_half_extent) = quadrature;
    match window {
        Extent::Infinite => integrate_support(f, center, step, max_half_extent),
        Extent::Finite(t) => integrate_window(f, -0.5 * t, 0.5 * t, step),
    }
}

fn support_accuracy(lines: &[LineIntegral]) -> Accuracy {
    lines
        .iter()
        .filter(|l| l.truncated())
        .map(|l| Accuracy::TruncatedSupport {
            edge_ratio: if l.peak > 0.0 { l.edge / l.peak } else { 1.0 },
        })
        .fold(Accuracy::Resolved, Accuracy::and)
}

/// Pump side: `(Γ̄_p, [Ī_1, Ī_2], accuracy)`.
fn average_pump(
    csd: &CrossSpectralDensity,
    tau: [f64; 2],
    window: Extent,
) -> Result<(Complex64, [f64; 2], Accuracy)> {
    let quad = csd.time_quadrature();
    let line = |a: f64, b: f64| integrate(|t| csd.transform_fast(a - t, b - t), window, 0.5 * (a + b), quad);
    let cross = line(tau[0], tau[1]);
    let d1 = line(tau[0], tau[0]);
    let d2 = line(tau[1], tau[1]);
    // Grid resolution is judged at the cross term's centre.
    let mid = 0.5 * (tau[0] + tau[1]);
    let grid_accuracy = wk_transform(csd, tau[0] - mid, tau[1] - mid)?.accuracy;
    let carrier = Complex64::from_polar(1.0, -csd.center() * (tau[0] - tau[1]));
    Ok((
        carrier * cross.value,
        [d1.value.re, d2.value.re],
        grid_accuracy.and(support_accuracy(&[cross, d1, d2])),
    ))
}

/// Difference side for one ordered pair of alternatives: `(Γ̄_d, accuracy)`.
fn average_difference(
    resp: &SpectralResponse,
    alts: (Alternative, Alternative),
    tau_prime: [f64; 2],
    window: Extent,
    grid: &FrequencyGrid,
) -> Result<(Complex64, Accuracy)> {
    let q = DifferenceQuadrature::new(resp, alts, grid)?;
    let quad = q.time_quadrature();
    let center = 0.5 * (tau_prime[0] + tau_prime[1]);
    let full = integrate(|t| q.eval(tau_prime[0] - t, tau_prime[1] - t).full, window, center, quad);
    let half = integrate(|t| q.eval(tau_prime[0] - t, tau_prime[1] - t).half, window, center, quad);
    let scale = integrate(
        |t| Complex64::new(q.eval(tau_prime[0] - t, tau_prime[1] - t).scale, 0.0),
        window,
        center,
        quad,
    );
    let gap = relative_gap(full.value, half.value, scale.value.re);
    let grid_accuracy = if gap > HALF_GRID_TOLERANCE {
        Accuracy::CoarseGrid { relative_gap: gap }
    } else {
        Accuracy::Resolved
    };
    let carrier = Complex64::from_polar(1.0, -q.carrier() * (tau_prime[0] - tau_prime[1]));
    Ok((carrier * full.value, grid_accuracy.and(support_accuracy(&[full]))))
}

fn bounded(name: &str, g: Complex64) -> Result<Complex64> {
    if g.norm() > 1.0 + NORMALIZATION_SLACK {
        return Err(Error::InternalConsistency(format!(
            "time-averaged {name} has magnitude {} above one",
            g.norm()
        )));
    }
    Ok(g)
}

/// Window-integrated `Γ̄_p`, `Γ̄_d`, `R̄⁽²⁾` and the degrees of coherence
/// `γ̄_p(Δτ)`, `γ̄_d(Δτ')`.
///
/// Infinite windows integrate over the numerical support of the integrand;
/// finite windows integrate over `[-T/2, T/2]`.
pub fn time_averaged_gamma2(
    csd: &CrossSpectralDensity,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    windows: &AveragingWindows,
    grid: &FrequencyGrid,
) -> Result<TimeAveraged> {
    windows.validate()?;
    check_carriers(csd, resp)?;
    let (a, b) = (Alternative::First, Alternative::Second);
    let tau = [paths.tau(a), paths.tau(b)];
    let tau_prime = [paths.tau_prime(a), paths.tau_prime(b)];
    let (pump, intensities, acc_p) = average_pump(csd, tau, windows.photon_collection)?;
    let wc = windows.coincidence;
    let (difference, acc_d) = average_difference(resp, (a, b), tau_prime, wc, grid)?;
    let (g1, acc_1) = average_difference(resp, (a, a), [tau_prime[0]; 2], wc, grid)?;
    let (g2, acc_2) = average_difference(resp, (b, b), [tau_prime[1]; 2], wc, grid)?;
    let difference_norms = [g1.re, g2.re];
    let ip = (intensities[0] * intensities[1]).sqrt();
    let id = (difference_norms[0] * difference_norms[1]).sqrt();
    if !(ip > 0.0 && id > 0.0) {
        return Err(Error::DegenerateState("time-averaged normalization vanishes".into()));
    }
    let gamma_p = bounded(
        "pump coherence",
        pump * Complex64::from_polar(1.0, csd.center() * (tau[0] - tau[1])) / ip,
    )?;
    let gamma_d = bounded(
        "difference coherence",
        difference * Complex64::from_polar(1.0, resp.difference_center() * (tau_prime[0] - tau_prime[1])) / id,
    )?;
    Ok(TimeAveraged {
        pump,
        difference,
        r2: ip * id,
        gamma_p,
        gamma_d,
        intensities,
        difference_norms,
        accuracy: acc_p.and(acc_d).and(acc_1).and(acc_2),
    })
}

/// Time-averaged coincidence rate
/// `(κ_1²+κ_2²)R̄⁽²⁾ + 2Re[κ_1κ_2R̄⁽²⁾γ̄_pγ̄_d e^{-i(ω_p0Δτ+ω_d0Δτ'+Δφ)}]`.
pub fn time_averaged_rate(
    csd: &CrossSpectralDensity,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    couplings: &CouplingAmplitudes,
    windows: &AveragingWindows,
    grid: &FrequencyGrid,
) -> Result<RateValue> {
    couplings.validate()?;
    let avg = time_averaged_gamma2(csd, resp, paths, windows, grid)?;
    rate_from_averages(&avg, csd.center(), resp.difference_center(), paths, couplings)
}

pub(crate) fn rate_from_averages(
    avg: &TimeAveraged,
    pump_center: f64,
    difference_center: f64,
    paths: &PathwayPair,
    couplings: &CouplingAmplitudes,
) -> Result<RateValue> {
    let k1 = couplings.kappa(Alternative::First);
    let k2 = couplings.kappa(Alternative::Second);
    let phase = pump_center * paths.delta_tau() + difference_center * paths.delta_tau_prime() + paths.delta_phi();
    let cross = k1 * k2 * avg.r2 * avg.gamma_p * avg.gamma_d * Complex64::from_polar(1.0, -phase);
    assemble_rate([k1 * k1 * avg.r2, k2 * k2 * avg.r2], 2.0 * cross.re, avg.accuracy)
}

/// Everything a fringe scan needs besides the swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub csd: CrossSpectralDensity,
    pub response: SpectralResponse,
    pub paths: PathwayPair,
    pub couplings: CouplingAmplitudes,
    pub windows: AveragingWindows,
    pub difference_grid: FrequencyGrid,
}

/// Pathway quantity a scan sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    /// `Δτ`, set through `τ_p1`.
    DeltaTau,
    /// `Δτ'`, set by moving `τ_s1` up and `τ_i1` down by the same amount.
    DeltaTauPrime,
    /// `Δφ`, set through `φ_p1`.
    DeltaPhi,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::DeltaTau => "delta_tau",
            SweepParameter::DeltaTauPrime => "delta_tau_prime",
            SweepParameter::DeltaPhi => "delta_phi",
        }
    }

    pub fn mapping(self) -> &'static str {
        match self {
            SweepParameter::DeltaTau => "tau_p1 shifted so that delta_tau equals the point",
            SweepParameter::DeltaTauPrime => {
                "tau_s1 raised and tau_i1 lowered by equal amounts so that delta_tau_prime equals the point"
            }
            SweepParameter::DeltaPhi => "phi_p1 shifted so that delta_phi equals the point",
        }
    }

    /// Pathways with this quantity set to `value`, everything else kept.
    pub fn apply(self, paths: &PathwayPair, value: f64) -> PathwayPair {
        let mut p = *paths;
        match self {
            SweepParameter::DeltaTau => p.tau_p[0] += value - paths.delta_tau(),
            SweepParameter::DeltaTauPrime => {
                let shift = value - paths.delta_tau_prime();
                p.tau_s[0] += shift;
                p.tau_i[0] -= shift;
            }
            SweepParameter::DeltaPhi => p.phi_p[0] += value - paths.delta_phi(),
        }
        p
    }
}

/// A sweep range `[start, stop]` sampled at `n_points` equally spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
}

impl Sweep {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop < self.start {
            return Err(Error::Config("sweep range must be finite with start <= stop".into()));
        }
        match self.n_points {
            0 => Err(Error::Config("sweep needs at least one point".into())),
            1 => Ok(vec![self.start]),
            n => {
                let h = (self.stop - self.start) / (n - 1) as f64;
                Ok((0..n).map(|k| self.start + h * k as f64).collect())
            }
        }
    }
}

/// One scan point with the quantities it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub value: f64,
    pub rate: f64,
    pub gamma_p: Complex64,
    pub gamma_d: Complex64,
    pub r2: f64,
    pub clamped: bool,
    pub accuracy: Accuracy,
}

/// Time-averaged rates along a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub parameter: SweepParameter,
    pub points: Vec<ScanPoint>,
    /// Carrier frequency the swept quantity multiplies in the interference
    /// phase.
    pub carrier: f64,
    pub base_paths: PathwayPair,
    pub couplings: CouplingAmplitudes,
}

impl FringeScan {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.rate).collect()
    }
}

/// Evaluates [`time_averaged_rate`] at every sweep point, in parallel.
pub fn fringe_scan(scenario: &Scenario, sweep: &Sweep) -> Result<FringeScan> {
    let values = sweep.points()?;
    let points = values
        .par_iter()
        .map(|&v| {
            let paths = sweep.parameter.apply(&scenario.paths, v);
            let avg = time_averaged_gamma2(
                &scenario.csd,
                &scenario.response,
                &paths,
                &scenario.windows,
                &scenario.difference_grid,
            )?;
            let r = rate_from_averages(
                &avg,
                scenario.csd.center(),
                scenario.response.difference_center(),
                &paths,
                &scenario.couplings,
            )?;
            Ok(ScanPoint {
                value: v,
                rate: r.rate,
                gamma_p: avg.gamma_p,
                gamma_d: avg.gamma_d,
                r2: avg.r2,
                clamped: r.clamped,
                accuracy: r.accuracy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let carrier = match sweep.parameter {
        SweepParameter::DeltaTau => scenario.csd.center(),
        SweepParameter::DeltaTauPrime => scenario.response.difference_center(),
        SweepParameter::DeltaPhi => 1.0,
    };
    Ok(FringeScan {
        parameter: sweep.parameter,
        points,
        carrier,
        base_paths: scenario.paths,
        couplings: scenario.couplings,
    })
}

/// Fringe visibility `(max-min)/(max+min)` of the scan points inside
/// `[lo, hi]`.
///
/// The window must span at least one period of the scan's carrier.
pub fn visibility(scan: &FringeScan, lo: f64, hi: f64) -> Result<f64> {
    let rates: Vec<f64> = scan
        .points
        .iter()
        .filter(|p| p.value >= lo && p.value <= hi)
        .map(|p| p.rate)
        .collect();
    if rates.is_empty() {
        return Err(Error::Domain(format!("no scan points in [{lo}, {hi}]")));
    }
    if scan.carrier != 0.0 {
        let period = 2.0 * std::f64::consts::PI / scan.carrier.abs();
        if hi - lo < period * (1.0 - 1e-9) {
            return Err(Error::Domain(format!(
                "window width {} is shorter than one carrier period {period}",
                hi - lo
            )));
        }
    }
    let max = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min == 0.0 {
        return Ok(0.0);
    }
    Ok((max - min) / (max + min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pump_models::{GaussianSchellModel, TabulatedKernel};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn gsm(c: impl Into<Extent>, center: f64) -> (GaussianSchellModel, CrossSpectralDensity) {
        let m = GaussianSchellModel::new(1.0, 1.0, c, center).unwrap();
        (m, CrossSpectralDensity::gsm(m))
    }

    fn franson(d: f64) -> PathwayPair {
        PathwayPair {
            tau_s: [d, 0.0],
            tau_i: [d, 0.0],
            ..Default::default()
        }
    }

    #[test]
    fn schell_model_intensity_integral() {
        let (_, csd) = gsm(0.7, 20.0);
        let resp = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let avg = time_averaged_gamma2(&csd, &resp, &franson(0.4), &AveragingWindows::infinite(), &grid).unwrap();
        let exact = (2.0 * PI).powf(1.5);
        assert_relative_eq!(avg.intensities[0], exact, max_relative = 1e-6);
        assert_relative_eq!(avg.intensities[1], exact, max_relative = 1e-6);
        assert!(avg.accuracy.is_resolved());
    }

    #[test]
    fn averaged_pump_coherence_is_gaussian_in_delay() {
        let (_, csd) = gsm(0.7, 20.0);
        let resp = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let g = |d: f64| {
            time_averaged_gamma2(&csd, &resp, &franson(d), &AveragingWindows::infinite(), &grid)
                .unwrap()
                .gamma_p
        };
        assert_relative_eq!(g(0.0).re, 1.0, max_relative = 1e-12);
        assert_relative_eq!(g(1.0).norm(), (-0.5f64).exp(), max_relative = 1e-6);
        assert!(g(3.0).norm() < 0.05);
    }

    #[test]
    fn averaged_difference_coherence_of_gaussian_response() {
        // ∫ G(x - t) G(-t) dt with G(x) ∝ exp(-σ²x²/2) gives exp(-σ²x²/4).
        let sigma = 2.5;
        let (_, csd) = gsm(1.0, 20.0);
        let resp = SpectralResponse::gaussian(20.0, sigma).unwrap();
        let grid = resp.default_grid().unwrap();
        let paths = PathwayPair {
            tau_s: [1.0 / sigma, 0.0],
            tau_i: [-1.0 / sigma, 0.0],
            ..Default::default()
        };
        let avg = time_averaged_gamma2(&csd, &resp, &paths, &AveragingWindows::infinite(), &grid).unwrap();
        assert_eq!(paths.delta_tau_prime(), 1.0 / sigma);
        assert_relative_eq!(avg.gamma_d.norm(), (-0.25f64).exp(), max_relative = 1e-6);
    }

    #[test]
    fn stationary_kernel_averaging_preserves_coherence() {
        let grid = FrequencyGrid::new(20.0, 6.0, 257).unwrap();
        let csd = CrossSpectralDensity::tabulated(TabulatedKernel::stationary(grid, |w| (-w * w / 2.0).exp()).unwrap());
        let resp = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let dgrid = resp.default_grid().unwrap();
        let windows = AveragingWindows::new(10.0, Extent::Infinite).unwrap();
        let d = 0.8;
        let avg = time_averaged_gamma2(&csd, &resp, &franson(d), &windows, &dgrid).unwrap();
        let inst = crate::biphoton::gamma_p(&csd, d, 0.0, 0.0).unwrap().value.norm()
            / crate::biphoton::gamma_p(&csd, 0.0, 0.0, 0.0).unwrap().value.norm();
        assert!((avg.gamma_p.norm() - inst).abs() < 1e-6);
    }

    #[test]
    fn schell_model_averaging_washes_out_frequency_correlations() {
        let (m, csd) = gsm(10.0, 20.0);
        let resp = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let d = m.coherence_time().finite().unwrap();
        let avg = time_averaged_gamma2(&csd, &resp, &franson(d), &AveragingWindows::infinite(), &grid).unwrap();
        let inst = m.degree_of_coherence(d);
        assert!((avg.gamma_p.norm() - inst).abs() > 1e-5);
    }

    #[test]
    fn finite_windows_converge_to_infinite() {
        let (m, csd) = gsm(0.9, 20.0);
        let resp = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let c = CouplingAmplitudes::from_pathways(1.0, 0.6).unwrap();
        let paths = franson(0.3);
        let inf = time_averaged_rate(&csd, &resp, &paths, &c, &AveragingWindows::infinite(), &grid).unwrap();
        let w = AveragingWindows::new(8.0 * m.pulse_width(), Extent::Infinite).unwrap();
        let fin = time_averaged_rate(&csd, &resp, &paths, &c, &w, &grid).unwrap();
        assert!((fin.rate - inf.rate).abs() < 1e-4 * inf.rate);
        // The short window cuts the intensity profile well above the edge
        // tolerance.
        assert!(matches!(fin.accuracy, Accuracy::TruncatedSupport { .. }));
    }

    #[test]
    fn destructive_interference_and_single_pathway() {
        let (_, csd) = gsm(Extent::Infinite, 20.0);
        let resp = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let paths = PathwayPair { phi_p: [PI, 0.0], ..Default::default() };
        let c = CouplingAmplitudes::from_pathways(1.0, 1.0).unwrap();
        let w = AveragingWindows::infinite();
        let r = time_averaged_rate(&csd, &resp, &paths, &c, &w, &grid).unwrap();
        assert!(r.rate <= 1e-10 * r.direct[0]);
        let single = CouplingAmplitudes::from_pathways(1.0, 0.0).unwrap();
        let r = time_averaged_rate(&csd, &resp, &paths, &single, &w, &grid).unwrap();
        let avg = time_averaged_gamma2(&csd, &resp, &paths, &w, &grid).unwrap();
        assert_eq!(r.rate, avg.r2);
    }

    #[test]
    fn envelope_suppression_at_three_inverse_bandwidths() {
        let (_, csd) = gsm(0.5, 20.0);
        let resp = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let c = CouplingAmplitudes::from_pathways(1.0, 1.0).unwrap();
        let w = AveragingWindows::infinite();
        // The pathway phase cancels the carrier, so the interference term
        // sits at the crest of its fringe.
        let crest = |d: f64| {
            let paths = PathwayPair { phi_p: [-20.0 * d, 0.0], ..franson(d) };
            time_averaged_rate(&csd, &resp, &paths, &c, &w, &grid).unwrap().interference
        };
        assert_relative_eq!(crest(3.0) / crest(0.0), (-4.5f64).exp(), max_relative = 1e-6);
    }

    #[test]
    fn sweep_mapping_sets_the_requested_delta() {
        let base = PathwayPair {
            tau_p: [0.1, 0.2],
            tau_s: [0.3, -0.1],
            tau_i: [0.05, 0.4],
            phi_s: [0.2, 0.9],
            ..Default::default()
        };
        let p = SweepParameter::DeltaTau.apply(&base, 1.25);
        assert!((p.delta_tau() - 1.25).abs() < 1e-15);
        assert_eq!(p.delta_tau_prime(), base.delta_tau_prime());
        let p = SweepParameter::DeltaTauPrime.apply(&base, -0.5);
        assert!((p.delta_tau_prime() + 0.5).abs() < 1e-15);
        assert!((p.delta_tau() - base.delta_tau()).abs() < 1e-15);
        let p = SweepParameter::DeltaPhi.apply(&base, 2.0);
        assert!((p.delta_phi() - 2.0).abs() < 1e-15);
    }

    fn scenario(kappa2: f64) -> Scenario {
        let (_, csd) = gsm(0.5, 20.0);
        let response = SpectralResponse::gaussian(20.0, 10.0).unwrap();
        let difference_grid = response.default_grid().unwrap();
        Scenario {
            csd,
            response,
            paths: PathwayPair::default(),
            couplings: CouplingAmplitudes::from_pathways(1.0, kappa2).unwrap(),
            windows: AveragingWindows::infinite(),
            difference_grid,
        }
    }

    #[test]
    fn zero_width_sweep_is_constant() {
        let sweep = Sweep { parameter: SweepParameter::DeltaTau, start: 0.4, stop: 0.4, n_points: 5 };
        let scan = fringe_scan(&scenario(1.0), &sweep).unwrap();
        let r = scan.rates();
        assert!(r.iter().all(|&x| x == r[0]));
        assert_eq!(visibility(&scan, 0.0, 1.0).unwrap(), 0.0);
        assert!(matches!(visibility(&scan, 0.39, 0.41), Err(Error::Domain(_))));
    }

    #[test]
    fn phase_sweep_has_period_two_pi() {
        let sweep = Sweep { parameter: SweepParameter::DeltaPhi, start: 0.0, stop: 4.0 * PI, n_points: 33 };
        let scan = fringe_scan(&scenario(0.5), &sweep).unwrap();
        let r = scan.rates();
        for k in 0..17 {
            assert!((r[k] - r[k + 16]).abs() < 1e-12 * r[k].max(1e-300));
        }
        let v = visibility(&scan, 0.0, 4.0 * PI).unwrap();
        assert_relative_eq!(v, 2.0 * 0.5 / 1.25, max_relative = 1e-3);
    }

    #[test]
    fn visibility_errors_and_constant_scan() {
        let sweep = Sweep { parameter: SweepParameter::DeltaPhi, start: 0.0, stop: 2.0 * PI, n_points: 9 };
        let scan = fringe_scan(&scenario(0.0), &sweep).unwrap();
        assert_eq!(visibility(&scan, 0.0, 2.0 * PI).unwrap(), 0.0);
        assert!(matches!(visibility(&scan, 10.0, 20.0), Err(Error::Domain(_))));
    }
}
