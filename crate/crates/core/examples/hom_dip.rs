//! HOM-type scan of the signal-idler delay difference with sinc phase
//! matching and Gaussian filters, driven by a partially coherent pump.

use pdc_coherence::biphoton::{Channel, CouplingAmplitudes, Filter, PathwayPair, PhaseMatching, SpectralResponse};
use pdc_coherence::detection::{fringe_scan, AveragingWindows, Scenario, Sweep, SweepParameter};
use pdc_coherence::pump_models::{CrossSpectralDensity, GaussianSchellModel};
use pdc_coherence::Result;

fn main() -> Result<()> {
    let channel = Channel {
        phase_matching: PhaseMatching::Sinc { length_dispersion: 0.5 },
        signal_filter: Filter::Gaussian { width: 3.0 },
        idler_filter: Filter::Gaussian { width: 3.0 },
    };
    let response = SpectralResponse::symmetric(21.0, 19.0, channel)?;
    let scenario = Scenario {
        csd: CrossSpectralDensity::gsm(GaussianSchellModel::new(1.0, 0.2, 0.1, 40.0)?),
        difference_grid: response.default_grid()?,
        response,
        paths: PathwayPair::default(),
        couplings: CouplingAmplitudes::from_pathways(1.0, 1.0)?,
        windows: AveragingWindows::infinite(),
    };
    let sweep = Sweep { parameter: SweepParameter::DeltaTauPrime, start: -2.0, stop: 2.0, n_points: 41 };
    let scan = fringe_scan(&scenario, &sweep)?;
    println!("{:>8} {:>12} {:>10}", "dtau'", "rate", "|gamma_d|");
    for p in &scan.points {
        println!("{:>8.3} {:>12.5} {:>10.5}", p.value, p.rate, p.gamma_d.norm());
    }
    Ok(())
}
