//! Two-photon fields: pathway algebra, spectral responses, the factorized
//! cross-correlation `Γ⁽²⁾ = Γ_p·Γ_d`, the coincidence rate, and an
//! unfactorized Monte-Carlo oracle.

mod correlation;
mod oracle;
mod pathways;
mod rate;
mod response;

pub use correlation::{
    gamma2_between, gamma2_factorized, gamma_d, gamma_d_between, gamma_d_double_integral, gamma_p,
    CoherenceSample, NORMALIZATION_SLACK, RESOLUTION_FRACTION,
};
pub use oracle::{
    biphoton_amplitude, gamma2_oracle_mc, gamma2_oracle_mc_batch, OracleEstimate, OracleGrids, MIN_ORACLE_COUNT,
};
pub use pathways::{pathway_deltas, Alternative, PathwayPair};
pub use rate::{coincidence_rate, CouplingAmplitudes, RateValue, NEGATIVE_RATE_TOLERANCE};
pub use response::{g_response, Channel, Filter, PhaseMatching, PhaseScreen, SpectralResponse};

pub(crate) use correlation::{check_carriers, DifferenceQuadrature};
pub(crate) use rate::assemble_rate;
