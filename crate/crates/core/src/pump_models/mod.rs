//! Partially coherent pump fields: Gaussian Schell-model closed forms,
//! tabulated cross-spectral densities, the generalized Wiener–Khintchine
//! transform, and ensemble sampling.

mod csd;
mod grid;
mod gsm;
pub mod io;
mod sampling;

pub use csd::{
    wk_transform, CrossSpectralDensity, KernelLayout, TabulatedKernel, WkValue, HERMITIAN_TOLERANCE,
    PSD_TOLERANCE,
};
pub use grid::FrequencyGrid;
pub use gsm::GaussianSchellModel;
pub use sampling::{empirical_csd, frobenius_relative_error, sample_realizations, FieldRealizationSet, FACTOR_JITTER};

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 257;
