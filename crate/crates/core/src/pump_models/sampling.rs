use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pump_models::csd::{KernelLayout, TabulatedKernel, PSD_TOLERANCE};
use crate::pump_models::FrequencyGrid;

/// Diagonal jitter added before factorization, as a fraction of `trace / n`.
pub const FACTOR_JITTER: f64 = 1e-12;

/// Realizations per independently seeded chunk.
const CHUNK: usize = 256;

/// Factor modes weaker than this fraction of the strongest are dropped.
const MODE_FLOOR: f64 = 1e-14;

/// An ensemble of pump spectral amplitudes `V(ω̄)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealizationSet {
    grid: FrequencyGrid,
    realizations: Vec<Vec<Complex64>>,
    seed: u64,
}

impl FieldRealizationSet {
    /// Wraps explicit realizations, e.g. deterministic amplitudes.
    pub fn from_realizations(grid: FrequencyGrid, realizations: Vec<Vec<Complex64>>, seed: u64) -> Result<Self> {
        if realizations.is_empty() {
            return Err(Error::Domain("realization set must not be empty".into()));
        }
        if realizations.iter().any(|r| r.len() != grid.n_points()) {
            return Err(Error::Domain("every realization must match the grid length".into()));
        }
        Ok(Self { grid, realizations, seed })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn realizations(&self) -> &[Vec<Complex64>] {
        &self.realizations
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.realizations.len()
    }
}

/// Factor `L` with `L·Lᴴ = conj(K) + jitter·I`, so that `V = L·z` for
/// circular standard normal `z` has `E[V*(ω')V(ω'')] = K(ω',ω'')`.
///
/// Uses the Hermitian eigendecomposition rather than Cholesky: Schell-model
/// kernels are numerically rank deficient.
pub(crate) fn covariance_factor(kernel: &TabulatedKernel) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let m = kernel.matrix();
    let n = m.nrows();
    let trace = kernel.trace();
    if trace == 0.0 && m.iter().all(|z| z.norm() == 0.0) {
        return Ok(Vec::new());
    }
    let jitter = FACTOR_JITTER * trace.abs() / n as f64;
    let target: DMatrix<Complex64> = (m.map(|z| z.conj()) + m.transpose()) * Complex64::new(0.5, 0.0);
    let eig = target.symmetric_eigen();
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOLERANCE * trace.abs() / n as f64 {
        return Err(Error::NotPsd(format!(
            "factorization failed after jitter: eigenvalue {min:e}"
        )));
    }
    let max = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max) + jitter;
    let mut modes = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let lambda = (lambda + jitter).max(0.0);
        if lambda <= MODE_FLOOR * max {
            continue;
        }
        let col = eig.eigenvectors.column(k).iter().copied().collect();
        modes.push((lambda.sqrt(), col));
    }
    Ok(modes)
}

fn draw_chunk(
    modes: &[(f64, Vec<Complex64>)],
    n: usize,
    seed: u64,
    chunk: usize,
    len: usize,
) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    (0..len)
        .map(|_| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            for (scale, col) in modes {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let z = Complex64::new(re, im) * (norm * scale);
                for (vj, cj) in v.iter_mut().zip(col) {
                    *vj += cj * z;
                }
            }
            v
        })
        .collect()
}

/// Draws `count` complex circular Gaussian spectral amplitudes whose
/// covariance is the tabulated kernel.
///
/// Realizations are generated in fixed-size chunks, each with its own stream
/// derived from `(seed, chunk index)`, so the output does not depend on the
/// thread pool.
pub fn sample_realizations(kernel: &TabulatedKernel, count: usize, seed: u64) -> Result<FieldRealizationSet> {
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let modes = covariance_factor(kernel)?;
    let n = kernel.grid().n_points();
    let chunks = count.div_ceil(CHUNK);
    let realizations: Vec<Vec<Complex64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(count - c * CHUNK);
            draw_chunk(&modes, n, seed, c, len)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    FieldRealizationSet::from_realizations(kernel.grid().clone(), realizations, seed)
}

/// Sample cross-spectral density `mean(conj(V(ω̄')) V(ω̄''))`.
pub fn empirical_csd(set: &FieldRealizationSet) -> Result<TabulatedKernel> {
    let count = set.count();
    if count < 2 {
        return Err(Error::Domain("empirical density needs at least two realizations".into()));
    }
    let n = set.grid().n_points();
    let data = DMatrix::from_fn(count, n, |r, j| set.realizations()[r][j]);
    let k = data.ad_mul(&data) / Complex64::new(count as f64, 0.0);
    let k = (&k + k.adjoint()) * Complex64::new(0.5, 0.0);
    TabulatedKernel::new_unchecked(set.grid().clone(), k, KernelLayout::Dense)
}

/// `‖A - B‖_F / ‖B‖_F`.
pub fn frobenius_relative_error(a: &TabulatedKernel, b: &TabulatedKernel) -> f64 {
    let diff = (a.matrix() - b.matrix()).norm();
    diff / b.matrix().norm()
}
