//! Temporal-coherence transfer in parametric down-conversion.
//!
//! The crate computes two-photon temporal coherence functions for partially
//! coherent pump fields:
//!
//! - [`pump_models`]: Gaussian Schell-model and tabulated cross-spectral
//!   densities, the generalized Wiener–Khintchine transform, and sampling of
//!   pump ensembles.
//! - [`biphoton`]: pathway algebra, the factorized two-photon
//!   cross-correlation `Γ⁽²⁾ = Γ_p·Γ_d`, the instantaneous coincidence rate,
//!   and an unfactorized Monte-Carlo oracle built from biphoton amplitudes.
//! - [`detection`]: time-averaged detection, fringe scans and visibility.
//! - [`entanglement`]: time-energy two-qubit states, concurrence, and the
//!   pump-coherence bound.
//! - [`cli`]: configuration-driven scenario runs that emit CSV tables.
//!
//! All frequencies are angular and all times share one user-chosen unit.

pub mod accuracy;
pub mod biphoton;
pub mod cli;
pub mod detection;
pub mod entanglement;
pub mod error;
pub mod extent;
pub mod pump_models;
pub mod quadrature;
pub mod stats;

pub use accuracy::Accuracy;
pub use error::{Error, Result};
pub use extent::Extent;
