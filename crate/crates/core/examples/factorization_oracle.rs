//! Factorized two-photon correlation against the brute-force Monte-Carlo
//! oracle, for a broad and a narrow down-conversion response.

use pdc_coherence::biphoton::{gamma2_factorized, gamma2_oracle_mc_batch, Channel, Filter, OracleGrids, PathwayPair, PhaseMatching, SpectralResponse};
use pdc_coherence::pump_models::{CrossSpectralDensity, GaussianSchellModel};
use pdc_coherence::Result;

fn main() -> Result<()> {
    let csd = CrossSpectralDensity::gsm(GaussianSchellModel::new(1.0, 1.0, 1.0, 40.0)?);
    for width in [50.0, 2.0] {
        let channel = Channel {
            phase_matching: PhaseMatching::Unity,
            signal_filter: Filter::Gaussian { width },
            idler_filter: Filter::Gaussian { width },
        };
        let resp = SpectralResponse::symmetric(20.0, 20.0, channel)?;
        let grids = OracleGrids::default_for(&csd, &resp)?;
        let paths = PathwayPair { tau_p: [0.5, 0.0], ..Default::default() };
        let times = [(0.0, 0.0), (0.4, 0.4), (-0.5, -0.5)];
        let est = gamma2_oracle_mc_batch(&csd, &resp, &paths, &times, 4000, 3, &grids)?;
        println!("filter width {width}:");
        for (&(ts, ti), e) in times.iter().zip(&est) {
            let f = gamma2_factorized(&csd, &resp, &paths, ts, ti, &grids.difference)?.value;
            let z = (f - e.sample.value).norm() / e.standard_error;
            println!("  t=({ts:+.2},{ti:+.2}) factorized {f:.5} oracle {:.5} ({z:.2} SE)", e.sample.value);
        }
    }
    Ok(())
}
