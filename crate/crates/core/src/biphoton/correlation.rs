use num_complex::Complex64;

use crate::accuracy::Accuracy;
use crate::biphoton::{Alternative, PathwayPair, SpectralResponse};
use crate::error::{require_finite, Error, Result};
use crate::pump_models::{wk_transform, CrossSpectralDensity, FrequencyGrid};
use crate::quadrature::{relative_gap, trapezoid_weights, HALF_GRID_TOLERANCE};

/// Finest grid spacing demanded of `ω̄_d` grids, as a fraction of the
/// narrowest response width.
pub const RESOLUTION_FRACTION: f64 = 1.0 / 8.0;

/// Allowed magnitude of a normalized coherence value above one.
pub const NORMALIZATION_SLACK: f64 = 1e-10;

/// One value of a two-time coherence function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceSample {
    pub value: Complex64,
    /// The two shifted time arguments the transform was evaluated at.
    pub arguments: (f64, f64),
    /// Diagonal values divided out, when normalized.
    pub normalization: Option<(f64, f64)>,
    pub accuracy: Accuracy,
}

impl CoherenceSample {
    fn raw(value: Complex64, arguments: (f64, f64), accuracy: Accuracy) -> Self {
        Self {
            value,
            arguments,
            normalization: None,
            accuracy,
        }
    }

    /// Divides by `sqrt(d1·d2)`.
    pub fn normalized(&self, d1: f64, d2: f64) -> Result<CoherenceSample> {
        if !(d1 > 0.0 && d2 > 0.0) {
            return Err(Error::Domain(format!(
                "normalization needs positive diagonals, got {d1:e} and {d2:e}"
            )));
        }
        let value = self.value / (d1 * d2).sqrt();
        if value.norm() > 1.0 + NORMALIZATION_SLACK {
            return Err(Error::InternalConsistency(format!(
                "normalized coherence magnitude {} exceeds one",
                value.norm()
            )));
        }
        Ok(CoherenceSample {
            value,
            normalization: Some((d1, d2)),
            ..*self
        })
    }
}

/// Pump factor `Γ_p(τ1, τ2) = e^{-iω_p0(τ1-τ2)}·Γ_WK(τ1-t̄, τ2-t̄)`.
pub fn gamma_p(csd: &CrossSpectralDensity, tau1: f64, tau2: f64, t_bar: f64) -> Result<CoherenceSample> {
    require_finite("tau1", tau1)?;
    require_finite("tau2", tau2)?;
    require_finite("t_bar", t_bar)?;
    let (x1, x2) = (tau1 - t_bar, tau2 - t_bar);
    let wk = wk_transform(csd, x1, x2)?;
    let carrier = Complex64::from_polar(1.0, -csd.center() * (tau1 - tau2));
    Ok(CoherenceSample::raw(carrier * wk.value, (x1, x2), wk.accuracy))
}

/// Quadrature of the down-converted factor for one ordered pair of
/// alternatives, prepared once and evaluated at many time arguments.
///
/// With a phase screen the kernel `⟨g_a* g_b⟩` is an average over draws of
/// separable products; without one there is a single draw.
#[derive(Debug, Clone)]
pub(crate) struct DifferenceQuadrature {
    offsets: Vec<f64>,
    full: Vec<f64>,
    half: Vec<f64>,
    /// Per draw, `w·conj(g_a)` on the nodes (trapezoid weights applied later).
    g_a: Vec<Vec<Complex64>>,
    g_b: Vec<Vec<Complex64>>,
    carrier: f64,
    span: f64,
    spacing: f64,
}

/// Full-grid value, half-grid value and Cauchy–Schwarz scale.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Checked {
    pub full: Complex64,
    pub half: Complex64,
    pub scale: f64,
}

impl Checked {
    pub(crate) fn accuracy(&self) -> Accuracy {
        let gap = relative_gap(self.full, self.half, self.scale);
        if gap > HALF_GRID_TOLERANCE {
            Accuracy::CoarseGrid { relative_gap: gap }
        } else {
            Accuracy::Resolved
        }
    }
}

impl DifferenceQuadrature {
    pub(crate) fn new(
        resp: &SpectralResponse,
        alts: (Alternative, Alternative),
        grid: &FrequencyGrid,
    ) -> Result<Self> {
        if let Some(w) = resp.narrowest_width() {
            if grid.spacing() > RESOLUTION_FRACTION * w * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "difference grid spacing {} does not resolve response width {w}",
                    grid.spacing()
                )));
            }
        }
        let offsets = grid.offsets();
        let n = offsets.len();
        let h = grid.spacing();
        let full = trapezoid_weights(n, h);
        let half_nodes = trapezoid_weights(n.div_ceil(2), 2.0 * h);
        let half = (0..n)
            .map(|k| if k % 2 == 0 { half_nodes[k / 2] } else { 0.0 })
            .collect();
        let tabulate = |alt: Alternative, conj: bool| -> Vec<Vec<Complex64>> {
            let channel = resp.channel(alt);
            resp.screen_draws(alt)
                .into_iter()
                .map(|draw| {
                    offsets
                        .iter()
                        .map(|&w| {
                            let psi = draw.as_ref().map_or(0.0, |d| d.phase(w));
                            let g = Complex64::from_polar(channel.g(w), psi);
                            if conj {
                                g.conj()
                            } else {
                                g
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let g_a = tabulate(alts.0, true);
        let g_b = if alts.0 == alts.1 {
            g_a.iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect()
        } else {
            tabulate(alts.1, false)
        };
        Ok(Self {
            offsets,
            full,
            half,
            g_a,
            g_b,
            carrier: resp.difference_center(),
            span: grid.span_half_width(),
            spacing: h,
        })
    }

    pub(crate) fn carrier(&self) -> f64 {
        self.carrier
    }

    /// `∬ ⟨g_a*(ω')g_b(ω'')⟩ e^{-iω'x1} e^{+iω''x2}` without the carrier.
    pub(crate) fn eval(&self, x1: f64, x2: f64) -> Checked {
        let n = self.offsets.len();
        let e1: Vec<Complex64> = self.offsets.iter().map(|&w| Complex64::from_polar(1.0, -w * x1)).collect();
        let e2: Vec<Complex64> = self.offsets.iter().map(|&w| Complex64::from_polar(1.0, w * x2)).collect();
        let mut full = Complex64::new(0.0, 0.0);
        let mut half = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (ga, gb) in self.g_a.iter().zip(&self.g_b) {
            let (mut fa, mut fb, mut ha, mut hb) = Default::default();
            for k in 0..n {
                let a = ga[k] * e1[k];
                let b = gb[k] * e2[k];
                fa += a * self.full[k];
                fb += b * self.full[k];
                ha += a * self.half[k];
                hb += b * self.half[k];
            }
            let (fa, fb, ha, hb): (Complex64, Complex64, Complex64, Complex64) = (fa, fb, ha, hb);
            full += fa * fb;
            half += ha * hb;
            scale += fa.norm() * fb.norm();
        }
        let draws = self.g_a.len() as f64;
        Checked {
            full: full / draws,
            half: half / draws,
            scale: scale / draws,
        }
    }

    /// Step and maximal half-extent for integrals over the common time
    /// shift: the discrete transform is band limited to `2·span` and
    /// periodic with period `2π/h`.
    pub(crate) fn time_quadrature(&self) -> (f64, f64) {
        let pi = std::f64::consts::PI;
        (pi / (2.0 * self.span), 0.999 * pi / self.spacing)
    }
}

/// Down-converted factor `Γ_d(τ'1, τ'2)` between alternatives 1 and 2.
pub fn gamma_d(
    resp: &SpectralResponse,
    tau_prime1: f64,
    tau_prime2: f64,
    t_tilde: f64,
    grid: &FrequencyGrid,
) -> Result<CoherenceSample> {
    gamma_d_between(
        resp,
        (Alternative::First, Alternative::Second),
        tau_prime1,
        tau_prime2,
        t_tilde,
        grid,
    )
}

/// [`gamma_d`] for an arbitrary ordered pair of alternatives (equal
/// alternatives give the direct-term factors).
pub fn gamma_d_between(
    resp: &SpectralResponse,
    alts: (Alternative, Alternative),
    tau_prime1: f64,
    tau_prime2: f64,
    t_tilde: f64,
    grid: &FrequencyGrid,
) -> Result<CoherenceSample> {
    require_finite("tau_prime1", tau_prime1)?;
    require_finite("tau_prime2", tau_prime2)?;
    require_finite("t_tilde", t_tilde)?;
    let q = DifferenceQuadrature::new(resp, alts, grid)?;
    let (x1, x2) = (tau_prime1 - t_tilde, tau_prime2 - t_tilde);
    let c = q.eval(x1, x2);
    let carrier = Complex64::from_polar(1.0, -q.carrier() * (tau_prime1 - tau_prime2));
    Ok(CoherenceSample::raw(carrier * c.full, (x1, x2), c.accuracy()))
}

/// Unseparated double-sum evaluation of [`gamma_d_between`] through the full
/// kernel `K(ω', ω'') = ⟨g_a*(ω') g_b(ω'')⟩`; a cross-check for the
/// separable evaluation.
pub fn gamma_d_double_integral(
    resp: &SpectralResponse,
    alts: (Alternative, Alternative),
    tau_prime1: f64,
    tau_prime2: f64,
    t_tilde: f64,
    grid: &FrequencyGrid,
) -> Result<Complex64> {
    let q = DifferenceQuadrature::new(resp, alts, grid)?;
    let n = q.offsets.len();
    let draws = q.g_a.len() as f64;
    let (x1, x2) = (tau_prime1 - t_tilde, tau_prime2 - t_tilde);
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let kernel: Complex64 = q.g_a.iter().zip(&q.g_b).map(|(a, b)| a[j] * b[k]).sum::<Complex64>() / draws;
            let phase = -q.offsets[j] * x1 + q.offsets[k] * x2;
            total += kernel * Complex64::from_polar(q.full[j] * q.full[k], phase);
        }
    }
    Ok(Complex64::from_polar(1.0, -q.carrier * (tau_prime1 - tau_prime2)) * total)
}

pub(crate) fn check_carriers(csd: &CrossSpectralDensity, resp: &SpectralResponse) -> Result<()> {
    let (a, b) = (csd.center(), resp.pump_center());
    if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
        return Err(Error::Domain(format!(
            "pump carrier {a} differs from signal + idler carriers {b}"
        )));
    }
    Ok(())
}

/// `Γ⁽²⁾ = Γ_p·Γ_d` between two (possibly equal) alternatives.
pub fn gamma2_between(
    csd: &CrossSpectralDensity,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    alts: (Alternative, Alternative),
    t_s: f64,
    t_i: f64,
    grid: &FrequencyGrid,
) -> Result<CoherenceSample> {
    check_carriers(csd, resp)?;
    let (a, b) = alts;
    let p = gamma_p(csd, paths.tau(a), paths.tau(b), 0.5 * (t_s + t_i))?;
    let d = gamma_d_between(resp, alts, paths.tau_prime(a), paths.tau_prime(b), 0.5 * (t_s - t_i), grid)?;
    Ok(CoherenceSample::raw(p.value * d.value, (t_s, t_i), p.accuracy.and(d.accuracy)))
}

/// Factorized two-photon cross-correlation between the two pathways at
/// detection times `(t_s, t_i)`.
pub fn gamma2_factorized(
    csd: &CrossSpectralDensity,
    resp: &SpectralResponse,
    paths: &PathwayPair,
    t_s: f64,
    t_i: f64,
    grid: &FrequencyGrid,
) -> Result<CoherenceSample> {
    gamma2_between(
        csd,
        resp,
        paths,
        (Alternative::First, Alternative::Second),
        t_s,
        t_i,
        grid,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::{Channel, PhaseScreen};
    use crate::pump_models::{GaussianSchellModel, TabulatedKernel};
    use crate::Extent;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gsm_csd(c: impl Into<Extent>, center: f64) -> CrossSpectralDensity {
        CrossSpectralDensity::gsm(GaussianSchellModel::new(1.0, 1.0, c, center).unwrap())
    }

    #[test]
    fn gamma_p_diagonal_is_real_non_negative() {
        let csd = gsm_csd(0.7, 40.0);
        for t_bar in [-2.0, 0.0, 0.3, 5.0] {
            let v = gamma_p(&csd, 0.4, 0.4, t_bar).unwrap().value;
            assert!(v.re >= 0.0 && v.im == 0.0);
        }
    }

    #[test]
    fn gamma_p_magnitude_follows_schell_model() {
        let m = GaussianSchellModel::new(1.0, 1.0, 0.5, 40.0).unwrap();
        let csd = CrossSpectralDensity::gsm(m);
        let tabulated = CrossSpectralDensity::tabulated(TabulatedKernel::from_gsm(&m, m.default_grid()).unwrap());
        for (t1, t2, tb) in [(0.3, -0.2, 0.1), (1.0, 2.0, -0.5), (0.0, 0.0, 1.5)] {
            let exact = m.temporal_correlation(t1 - tb, t2 - tb).unwrap();
            assert_relative_eq!(gamma_p(&csd, t1, t2, tb).unwrap().value.norm(), exact, max_relative = 1e-12);
            assert_relative_eq!(gamma_p(&tabulated, t1, t2, tb).unwrap().value.norm(), exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn gamma_p_stationary_kernel_is_shift_invariant() {
        let grid = FrequencyGrid::new(50.0, 6.0, 257).unwrap();
        let csd = CrossSpectralDensity::tabulated(
            TabulatedKernel::stationary(grid, |w| (-w * w / 2.0).exp()).unwrap(),
        );
        let reference = gamma_p(&csd, 0.7, -0.1, 0.0).unwrap().value;
        for s in [-3.0, -1.0, 0.5, 2.0, 4.0] {
            let v = gamma_p(&csd, 0.7, -0.1, s).unwrap().value;
            assert!((v - reference).norm() < 1e-10 * reference.norm());
        }
    }

    #[test]
    fn unity_response_gives_squared_span() {
        let resp = SpectralResponse::symmetric(2.0, 1.0, Channel::unity()).unwrap();
        let grid = FrequencyGrid::new(1.0, 3.0, 61).unwrap();
        let v = gamma_d(&resp, 0.0, 0.0, 0.0, &grid).unwrap().value;
        assert_relative_eq!(v.re, 36.0, max_relative = 1e-12);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn identical_gaussians_give_real_diagonal() {
        let resp = SpectralResponse::gaussian(10.0, 2.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let v = gamma_d(&resp, 0.3, 0.3, -0.4, &grid).unwrap().value;
        assert!(v.re > 0.0);
        assert!(v.im.abs() < 1e-14 * v.re);
    }

    #[test]
    fn gaussian_gamma_d_matches_analytic_integral() {
        // For g = exp(-ω²/(2σ²)): ∫ g e^{-iωx} dω = √(2π)σ·exp(-σ²x²/2), so
        // the normalized magnitude at x1 - x2 = 1/σ, t̃ midway, is exp(-1/4).
        let sigma = 1.7;
        let resp = SpectralResponse::gaussian(20.0, sigma).unwrap();
        let grid = resp.default_grid().unwrap();
        let (tp1, tp2) = (0.5 / sigma, -0.5 / sigma);
        let raw = gamma_d(&resp, tp1, tp2, 0.0, &grid).unwrap();
        let analytic = |x: f64| (2.0 * std::f64::consts::PI).sqrt() * sigma * (-sigma * sigma * x * x / 2.0).exp();
        // The default grid ends at six widths, where the Gaussian is 1.5e-8.
        assert_relative_eq!(raw.value.norm(), analytic(tp1) * analytic(tp2), max_relative = 1e-7);
        let d = |t: f64| gamma_d(&resp, t, t, 0.0, &grid).unwrap().value.re;
        let n = raw.normalized(d(tp1), d(tp2)).unwrap();
        // Both arguments sit half a width from t̃, so the normalization
        // cancels the envelope exactly and only the carrier remains.
        assert_relative_eq!(n.value.norm(), 1.0, max_relative = 1e-10);
        let shifted = gamma_d(&resp, 1.0 / sigma, 0.0, 0.0, &grid).unwrap();
        let n = shifted.normalized(d(1.0 / sigma), d(0.0)).unwrap();
        assert_relative_eq!(n.value.norm(), 1.0, max_relative = 1e-10);
        assert_relative_eq!(
            shifted.value.norm() / (analytic(0.0) * analytic(0.0)),
            (-0.5f64).exp(),
            max_relative = 1e-7
        );
        assert!(raw.accuracy.is_resolved());
    }

    #[test]
    fn separable_and_double_integral_agree() {
        let c1 = Channel {
            phase_matching: crate::biphoton::PhaseMatching::Sinc { length_dispersion: 1.0 },
            signal_filter: crate::biphoton::Filter::Gaussian { width: 3.0 },
            idler_filter: crate::biphoton::Filter::Unity,
        };
        let c2 = Channel {
            phase_matching: crate::biphoton::PhaseMatching::Gaussian { width: 4.0 },
            ..Channel::unity()
        };
        let resp = SpectralResponse::new(6.0, 4.0, [c1, c2])
            .unwrap()
            .with_phase_screen(PhaseScreen { rms_phase: 0.5, correlation_width: 2.0, draws: 5, seed: 3 })
            .unwrap();
        let grid = resp.default_grid().unwrap();
        let alts = (Alternative::First, Alternative::Second);
        let a = gamma_d_between(&resp, alts, 0.2, -0.3, 0.1, &grid).unwrap().value;
        let b = gamma_d_double_integral(&resp, alts, 0.2, -0.3, 0.1, &grid).unwrap();
        assert!((a - b).norm() < 1e-11 * a.norm());
    }

    #[test]
    fn coarse_difference_grid_is_rejected() {
        let resp = SpectralResponse::gaussian(10.0, 1.0).unwrap();
        let grid = FrequencyGrid::new(0.0, 6.0, 11).unwrap();
        assert!(matches!(gamma_d(&resp, 0.0, 0.0, 0.0, &grid), Err(Error::Domain(_))));
    }

    #[test]
    fn phase_screen_leaves_pump_factor_untouched() {
        let csd = gsm_csd(0.8, 30.0);
        let before = gamma_p(&csd, 0.4, -0.9, 0.2).unwrap();
        let resp = SpectralResponse::gaussian(30.0, 5.0).unwrap();
        let screened = resp
            .clone()
            .with_phase_screen(PhaseScreen { rms_phase: 1.0, correlation_width: 1.0, draws: 16, seed: 9 })
            .unwrap();
        let grid = resp.default_grid().unwrap();
        let d0 = gamma_d(&resp, 0.2, -0.1, 0.0, &grid).unwrap().value;
        let d1 = gamma_d(&screened, 0.2, -0.1, 0.0, &grid).unwrap().value;
        assert!((d0 - d1).norm() > 1e-3 * d0.norm());
        let after = gamma_p(&csd, 0.4, -0.9, 0.2).unwrap();
        assert_eq!(before.value.re.to_bits(), after.value.re.to_bits());
        assert_eq!(before.value.im.to_bits(), after.value.im.to_bits());
    }

    #[test]
    fn mismatched_carriers_are_rejected() {
        let csd = gsm_csd(1.0, 30.0);
        let resp = SpectralResponse::gaussian(31.0, 5.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let r = gamma2_factorized(&csd, &resp, &PathwayPair::default(), 0.0, 0.0, &grid);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn factorized_matches_schell_model_product() {
        let m = GaussianSchellModel::new(1.0, 1.0, 2.0, 30.0).unwrap();
        let csd = CrossSpectralDensity::gsm(m);
        let resp = SpectralResponse::gaussian(30.0, 6.0).unwrap();
        let grid = resp.default_grid().unwrap();
        let paths = PathwayPair {
            tau_p: [0.4, -0.2],
            tau_s: [0.1, 0.3],
            tau_i: [0.0, 0.2],
            ..Default::default()
        };
        let (ts, ti) = (0.25, -0.1);
        let g2 = gamma2_factorized(&csd, &resp, &paths, ts, ti, &grid).unwrap();
        let tb = 0.5 * (ts + ti);
        let (t1, t2) = (paths.tau(Alternative::First), paths.tau(Alternative::Second));
        let pump = (m.intensity(t1 - tb) * m.intensity(t2 - tb)).sqrt() * m.degree_of_coherence(t1 - t2);
        let d = gamma_d(
            &resp,
            paths.tau_prime(Alternative::First),
            paths.tau_prime(Alternative::Second),
            0.5 * (ts - ti),
            &grid,
        )
        .unwrap();
        assert_relative_eq!(g2.value.norm(), pump * d.value.norm(), max_relative = 1e-12);
    }

    fn arb_paths() -> impl Strategy<Value = PathwayPair> {
        proptest::array::uniform12(-1.5f64..1.5).prop_map(|a| PathwayPair {
            tau_p: [a[0], a[1]],
            tau_s: [a[2], a[3]],
            tau_i: [a[4], a[5]],
            phi_p: [a[6], a[7]],
            phi_s: [a[8], a[9]],
            phi_i: [a[10], a[11]],
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn swapping_alternatives_conjugates(paths in arb_paths(), ts in -1.0f64..1.0, ti in -1.0f64..1.0) {
            let csd = gsm_csd(0.6, 25.0);
            let c1 = Channel { phase_matching: crate::biphoton::PhaseMatching::Gaussian { width: 4.0 }, ..Channel::unity() };
            let c2 = Channel { signal_filter: crate::biphoton::Filter::Gaussian { width: 3.0 }, ..c1 };
            let resp = SpectralResponse::new(15.0, 10.0, [c1, c2]).unwrap();
            let swapped = SpectralResponse::new(15.0, 10.0, [c2, c1]).unwrap();
            let grid = resp.default_grid().unwrap();
            let a = gamma2_factorized(&csd, &resp, &paths, ts, ti, &grid).unwrap().value;
            let b = gamma2_factorized(&csd, &swapped, &paths.swapped(), ts, ti, &grid).unwrap().value;
            prop_assert!((a - b.conj()).norm() <= 1e-10 * a.norm().max(1e-300));
        }

        #[test]
        fn normalized_factors_are_bounded(paths in arb_paths(), ts in -1.0f64..1.0, ti in -1.0f64..1.0) {
            let csd = gsm_csd(0.6, 25.0);
            let resp = SpectralResponse::gaussian(25.0, 4.0).unwrap();
            let grid = resp.default_grid().unwrap();
            let (a, b) = (Alternative::First, Alternative::Second);
            let tb = 0.5 * (ts + ti);
            let p = gamma_p(&csd, paths.tau(a), paths.tau(b), tb).unwrap();
            let pa = gamma_p(&csd, paths.tau(a), paths.tau(a), tb).unwrap().value.re;
            let pb = gamma_p(&csd, paths.tau(b), paths.tau(b), tb).unwrap().value.re;
            prop_assert!(p.normalized(pa, pb).unwrap().value.norm() <= 1.0 + NORMALIZATION_SLACK);
            let tt = 0.5 * (ts - ti);
            let (ta, tb) = (paths.tau_prime(a), paths.tau_prime(b));
            let d = gamma_d(&resp, ta, tb, tt, &grid).unwrap();
            let da = gamma_d_between(&resp, (a, a), ta, ta, tt, &grid).unwrap().value.re;
            let db = gamma_d_between(&resp, (b, b), tb, tb, tt, &grid).unwrap().value.re;
            prop_assert!(d.normalized(da, db).unwrap().value.norm() <= 1.0 + NORMALIZATION_SLACK);
        }
    }
}
