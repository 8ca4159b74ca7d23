//! Franson-type fringe scan over the pump delay difference; prints a coarse
//! trace of the rate and the fringe visibility near zero delay.

use pdc_coherence::biphoton::{CouplingAmplitudes, PathwayPair, SpectralResponse};
use pdc_coherence::detection::{fringe_scan, visibility, AveragingWindows, Scenario, Sweep, SweepParameter};
use pdc_coherence::pump_models::{CrossSpectralDensity, GaussianSchellModel};
use pdc_coherence::Result;

fn main() -> Result<()> {
    let response = SpectralResponse::gaussian(20.0, 25.0)?;
    let scenario = Scenario {
        csd: CrossSpectralDensity::gsm(GaussianSchellModel::new(1.0, 1.0, 0.5, 20.0)?),
        difference_grid: response.default_grid()?,
        response,
        paths: PathwayPair::default(),
        couplings: CouplingAmplitudes::from_pathways(1.0, 1.0)?,
        windows: AveragingWindows::infinite(),
    };
    let sweep = Sweep { parameter: SweepParameter::DeltaTau, start: -3.0, stop: 2.995, n_points: 1200 };
    let scan = fringe_scan(&scenario, &sweep)?;
    // Fringes sit on a 2π/20 carrier; summarize each slice of
    // about one period by its extremes.
    println!("{:>7} {:>11} {:>11} {:>9}", "dtau", "min rate", "max rate", "local V");
    for chunk in scan.points.chunks(75) {
        let lo = chunk.iter().map(|p| p.rate).fold(f64::INFINITY, f64::min);
        let hi = chunk.iter().map(|p| p.rate).fold(0.0, f64::max);
        println!("{:>+7.3} {lo:>11.3} {hi:>11.3} {:>9.4}", chunk[chunk.len() / 2].value, (hi - lo) / (hi + lo));
    }
    println!("visibility over [-0.5, 0.5]: {:.4}", visibility(&scan, -0.5, 0.5)?);
    Ok(())
}
