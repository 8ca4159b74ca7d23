use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::accuracy::Accuracy;
use crate::error::{require_finite, Error, Result};
use crate::pump_models::{FrequencyGrid, GaussianSchellModel};
use crate::quadrature::{relative_gap, trapezoid_weights, HALF_GRID_TOLERANCE};

/// Relative Hermiticity tolerance on tabulated kernels.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Smallest eigenvalue allowed, as a fraction of `trace / n`.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// How a tabulated kernel is to be read by the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelLayout {
    /// A smooth kernel sampled on the grid.
    Dense,
    /// A delta sheet `S(ω)δ(ω'-ω'')` stored as a diagonal whose row mass
    /// `W_jj·h` equals `S(ω_j)`.
    DeltaSheet,
}

/// A cross-spectral density sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedKernel {
    grid: FrequencyGrid,
    matrix: DMatrix<Complex64>,
    layout: KernelLayout,
}

/// Pump cross-spectral density `W(ω̄', ω̄'') = ⟨V*(ω̄'+ω0) V(ω̄''+ω0)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub enum CrossSpectralDensity {
    Gsm(GaussianSchellModel),
    Tabulated(TabulatedKernel),
}

/// A value of the generalized Wiener–Khintchine transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkValue {
    pub value: Complex64,
    pub accuracy: Accuracy,
}

impl TabulatedKernel {
    /// Validates Hermiticity, a real non-negative diagonal, and positive
    /// semidefiniteness before accepting the kernel.
    pub fn new(grid: FrequencyGrid, matrix: DMatrix<Complex64>, layout: KernelLayout) -> Result<Self> {
        let kernel = Self::new_unchecked(grid, matrix, layout)?;
        kernel.validate()?;
        Ok(kernel)
    }

    pub(crate) fn new_unchecked(
        grid: FrequencyGrid,
        matrix: DMatrix<Complex64>,
        layout: KernelLayout,
    ) -> Result<Self> {
        let n = grid.n_points();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Domain(format!(
                "kernel is {}x{} but grid has {n} points",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("kernel has non-finite entries".into()));
        }
        if layout == KernelLayout::DeltaSheet {
            for j in 0..n {
                for k in 0..n {
                    if j != k && matrix[(j, k)] != Complex64::new(0.0, 0.0) {
                        return Err(Error::Domain("delta-sheet kernel must be diagonal".into()));
                    }
                }
            }
        }
        Ok(Self { grid, matrix, layout })
    }

    /// Samples a Gaussian Schell-model kernel on `grid` (offsets from the
    /// model's carrier).
    pub fn from_gsm(model: &GaussianSchellModel, grid: FrequencyGrid) -> Result<Self> {
        let w = grid.offsets();
        let n = w.len();
        let matrix = DMatrix::from_fn(n, n, |j, k| Complex64::new(model.csd_unchecked(w[j], w[k]), 0.0));
        Self::new(grid, matrix, KernelLayout::Dense)
    }

    /// Stationary kernel `S(ω̄)δ(ω̄'-ω̄'')` for a non-negative spectrum `S`.
    pub fn stationary<F: Fn(f64) -> f64>(grid: FrequencyGrid, spectrum: F) -> Result<Self> {
        let h = grid.spacing();
        let w = grid.offsets();
        let n = w.len();
        let mut matrix = DMatrix::zeros(n, n);
        for (j, &wj) in w.iter().enumerate() {
            matrix[(j, j)] = Complex64::new(spectrum(wj) / h, 0.0);
        }
        Self::new(grid, matrix, KernelLayout::DeltaSheet)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn layout(&self) -> KernelLayout {
        self.layout
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    fn max_magnitude(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Largest Hermiticity defect relative to the largest entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let scale = self.max_magnitude();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                worst = worst.max((self.matrix[(j, k)] - self.matrix[(k, j)].conj()).norm());
            }
        }
        worst / scale
    }

    /// Smallest eigenvalue of the kernel matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    fn validate(&self) -> Result<()> {
        let scale = self.max_magnitude();
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOLERANCE {
            return Err(Error::Domain(format!("kernel is not Hermitian (defect {defect:e})")));
        }
        for z in self.matrix.diagonal().iter() {
            if z.re < -HERMITIAN_TOLERANCE * scale || z.im.abs() > HERMITIAN_TOLERANCE * scale {
                return Err(Error::Domain("kernel diagonal must be real and non-negative".into()));
            }
        }
        let n = self.grid.n_points() as f64;
        let floor = -PSD_TOLERANCE * self.trace().abs() / n;
        let min = self.min_eigenvalue();
        if min < floor {
            return Err(Error::NotPsd(format!("smallest eigenvalue {min:e} below {floor:e}")));
        }
        Ok(())
    }

    /// Transform on the full grid (`stride` 1) or every other node (`stride`
    /// 2) without any accuracy bookkeeping.
    fn transform_strided(&self, t1: f64, t2: f64, stride: usize) -> Complex64 {
        let n = self.grid.n_points();
        let idx: Vec<usize> = (0..n).step_by(stride).collect();
        let h = self.grid.spacing() * stride as f64;
        let weights = trapezoid_weights(idx.len(), h);
        match self.layout {
            KernelLayout::DeltaSheet => {
                let base = self.grid.spacing();
                idx.iter()
                    .zip(&weights)
                    .map(|(&j, &wj)| {
                        let mass = self.matrix[(j, j)].re * base;
                        Complex64::from_polar(wj * mass, -self.grid.offset(j) * (t1 - t2))
                    })
                    .sum()
            }
            KernelLayout::Dense => {
                let v: Vec<Complex64> = idx
                    .iter()
                    .zip(&weights)
                    .map(|(&k, &wk)| Complex64::from_polar(wk, self.grid.offset(k) * t2))
                    .collect();
                let mut total = Complex64::new(0.0, 0.0);
                for (&j, &wj) in idx.iter().zip(&weights) {
                    let mut row = Complex64::new(0.0, 0.0);
                    for (&k, vk) in idx.iter().zip(&v) {
                        row += self.matrix[(j, k)] * vk;
                    }
                    total += Complex64::from_polar(wj, -self.grid.offset(j) * t1) * row;
                }
                total
            }
        }
    }

    pub(crate) fn transform(&self, t1: f64, t2: f64) -> Complex64 {
        self.transform_strided(t1, t2, 1)
    }

    /// Transform with the half-grid self check.
    pub(crate) fn transform_checked(&self, t1: f64, t2: f64) -> WkValue {
        let full = self.transform(t1, t2);
        let accuracy = match self.grid.half() {
            Some(_) => {
                let half = self.transform_strided(t1, t2, 2);
                // Cauchy–Schwarz scale keeps far-off-diagonal values (which are
                // legitimately tiny) from tripping the check on round-off.
                let scale = if t1 == t2 {
                    full.norm()
                } else {
                    (self.transform(t1, t1).norm() * self.transform(t2, t2).norm()).sqrt()
                };
                let gap = relative_gap(full, half, scale);
                if gap > HALF_GRID_TOLERANCE {
                    Accuracy::CoarseGrid { relative_gap: gap }
                } else {
                    Accuracy::Resolved
                }
            }
            None => Accuracy::Resolved,
        };
        WkValue { value: full, accuracy }
    }
}

impl CrossSpectralDensity {
    pub fn gsm(model: GaussianSchellModel) -> Self {
        CrossSpectralDensity::Gsm(model)
    }

    pub fn tabulated(kernel: TabulatedKernel) -> Self {
        CrossSpectralDensity::Tabulated(kernel)
    }

    /// Carrier frequency the kernel offsets are measured from.
    pub fn center(&self) -> f64 {
        match self {
            CrossSpectralDensity::Gsm(m) => m.center(),
            CrossSpectralDensity::Tabulated(k) => k.grid().center(),
        }
    }

    /// Kernel value at offsets `(w1, w2)`; tabulated kernels are read at the
    /// nearest grid nodes.
    pub fn kernel(&self, w1: f64, w2: f64) -> Complex64 {
        match self {
            CrossSpectralDensity::Gsm(m) => Complex64::new(m.csd_unchecked(w1, w2), 0.0),
            CrossSpectralDensity::Tabulated(k) => {
                let g = k.grid();
                let idx = |w: f64| {
                    let pos = ((w + g.span_half_width()) / g.spacing()).round();
                    (pos.max(0.0) as usize).min(g.n_points() - 1)
                };
                k.matrix()[(idx(w1), idx(w2))]
            }
        }
    }

    /// Tabulates this density on `grid`; tabulated kernels must already live
    /// on exactly that grid.
    pub fn tabulate(&self, grid: &FrequencyGrid) -> Result<TabulatedKernel> {
        match self {
            CrossSpectralDensity::Gsm(m) => TabulatedKernel::from_gsm(m, grid.clone()),
            CrossSpectralDensity::Tabulated(k) if k.grid() == grid => Ok(k.clone()),
            CrossSpectralDensity::Tabulated(_) => Err(Error::Domain(
                "tabulated kernel cannot be re-gridded; supply a matching grid".into(),
            )),
        }
    }

    /// Frequency grid natural to this density: the kernel's own grid, or the
    /// default Schell-model grid.
    pub fn natural_grid(&self) -> FrequencyGrid {
        match self {
            CrossSpectralDensity::Gsm(m) => m.default_grid(),
            CrossSpectralDensity::Tabulated(k) => k.grid().clone(),
        }
    }

    /// Quadrature step and maximal half-extent for integrals of the temporal
    /// correlation along a common time shift.
    pub(crate) fn time_quadrature(&self) -> (f64, f64) {
        match self {
            CrossSpectralDensity::Gsm(m) => {
                let t = m.pulse_width();
                (t / 8.0, 80.0 * t)
            }
            CrossSpectralDensity::Tabulated(k) => {
                // Band limit |ω'-ω''| ≤ 2·span; the discrete transform repeats
                // with period 2π/h.
                let g = k.grid();
                let step = std::f64::consts::PI / (2.0 * g.span_half_width());
                (step, 0.999 * std::f64::consts::PI / g.spacing())
            }
        }
    }

    pub(crate) fn transform_fast(&self, t1: f64, t2: f64) -> Complex64 {
        match self {
            CrossSpectralDensity::Gsm(m) => {
                Complex64::new((m.intensity(t1) * m.intensity(t2)).sqrt() * m.degree_of_coherence(t1 - t2), 0.0)
            }
            CrossSpectralDensity::Tabulated(k) => k.transform(t1, t2),
        }
    }
}

/// Generalized Wiener–Khintchine transform
/// `∬ dω̄'dω̄'' W(ω̄',ω̄'') e^{-iω̄'t1} e^{+iω̄''t2}`.
///
/// Schell-model densities use the closed form; tabulated kernels use the
/// trapezoidal rule with a half-grid self check.
pub fn wk_transform(csd: &CrossSpectralDensity, t1: f64, t2: f64) -> Result<WkValue> {
    require_finite("t1", t1)?;
    require_finite("t2", t2)?;
    Ok(match csd {
        CrossSpectralDensity::Gsm(_) => WkValue {
            value: csd.transform_fast(t1, t2),
            accuracy: Accuracy::Resolved,
        },
        CrossSpectralDensity::Tabulated(k) => k.transform_checked(t1, t2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gsm(c: f64) -> GaussianSchellModel {
        GaussianSchellModel::new(1.0, 1.0, c, 30.0).unwrap()
    }

    #[test]
    fn tabulated_gsm_is_hermitian_and_psd() {
        let m = gsm(1.0);
        let k = TabulatedKernel::from_gsm(&m, m.default_grid()).unwrap();
        assert!(k.hermiticity_defect() <= HERMITIAN_TOLERANCE);
        assert!(k.min_eigenvalue() >= -PSD_TOLERANCE * k.trace() / 257.0);
    }

    #[test]
    fn tabulated_point_matches_direct_evaluation() {
        // The grid node at offset 1 must carry exp(-1/4)·exp(-1/2).
        let m = gsm(1.0);
        let grid = FrequencyGrid::new(30.0, 4.0, 9).unwrap();
        let k = TabulatedKernel::from_gsm(&m, grid).unwrap();
        assert_relative_eq!(k.matrix()[(5, 4)].re, 0.4723665527410147, max_relative = 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_kernel() {
        let grid = FrequencyGrid::new(1.0, 1.0, 3).unwrap();
        let mut m = DMatrix::from_element(3, 3, Complex64::new(1.0, 0.0));
        m[(0, 1)] = Complex64::new(1.0, 0.5);
        assert!(matches!(
            TabulatedKernel::new(grid, m, KernelLayout::Dense),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_indefinite_kernel() {
        let grid = FrequencyGrid::new(1.0, 1.0, 3).unwrap();
        let m = DMatrix::from_fn(3, 3, |j, k| Complex64::new(if j == k { 1.0 } else { 2.0 }, 0.0));
        assert!(matches!(
            TabulatedKernel::new(grid, m, KernelLayout::Dense),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn diagonal_transform_is_real_non_negative() {
        let m = gsm(0.5);
        let csd = CrossSpectralDensity::tabulated(TabulatedKernel::from_gsm(&m, m.default_grid()).unwrap());
        for t in [-3.0, -0.4, 0.0, 1.7, 6.0] {
            let v = wk_transform(&csd, t, t).unwrap().value;
            assert!(v.re >= 0.0);
            assert!(v.im.abs() < 1e-12 * v.re.max(1e-300));
        }
    }

    #[test]
    fn transform_is_hermitian_in_time_arguments() {
        let grid = FrequencyGrid::new(3.0, 3.0, 31).unwrap();
        let n = grid.n_points();
        // Rank-two complex Hermitian PSD kernel.
        let a: Vec<Complex64> = (0..n).map(|j| Complex64::new((j as f64 * 0.3).cos(), (j as f64 * 0.11).sin())).collect();
        let b: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar((-(j as f64 - 15.0).powi(2) / 40.0).exp(), j as f64)).collect();
        let m = DMatrix::from_fn(n, n, |j, k| a[j].conj() * a[k] + b[j].conj() * b[k]);
        let csd = CrossSpectralDensity::tabulated(TabulatedKernel::new(grid, m, KernelLayout::Dense).unwrap());
        let x = wk_transform(&csd, 0.7, -1.3).unwrap().value;
        let y = wk_transform(&csd, -1.3, 0.7).unwrap().value;
        assert!((x - y.conj()).norm() < 1e-12);
    }

    #[test]
    fn stationary_kernel_depends_only_on_time_difference() {
        let grid = FrequencyGrid::new(10.0, 6.0, 257).unwrap();
        let k = TabulatedKernel::stationary(grid, |_| 1.0).unwrap();
        let csd = CrossSpectralDensity::tabulated(k);
        let reference = wk_transform(&csd, 0.4, 0.1).unwrap().value;
        for s in [-2.0, -0.5, 0.3, 1.0, 3.5] {
            let v = wk_transform(&csd, 0.4 + s, 0.1 + s).unwrap().value;
            assert!((v - reference).norm() < 1e-10);
        }
    }

    #[test]
    fn coarse_grid_is_flagged() {
        // Spacing far too wide for the oscillation at t = 5.
        let m = gsm(1.0);
        let grid = FrequencyGrid::new(30.0, 8.0, 9).unwrap();
        let csd = CrossSpectralDensity::tabulated(TabulatedKernel::from_gsm(&m, grid).unwrap());
        let v = wk_transform(&csd, 0.5, 0.2).unwrap();
        assert!(!v.accuracy.is_resolved());
    }
}
