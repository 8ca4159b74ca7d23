//! A random spectral phase on the down-conversion response lowers the
//! time-averaged signal-idler coherence and leaves the pump factor alone.

use pdc_coherence::biphoton::{PathwayPair, PhaseScreen, SpectralResponse};
use pdc_coherence::detection::{time_averaged_gamma2, AveragingWindows};
use pdc_coherence::pump_models::{CrossSpectralDensity, GaussianSchellModel};
use pdc_coherence::Result;

fn main() -> Result<()> {
    let csd = CrossSpectralDensity::gsm(GaussianSchellModel::new(1.0, 1.0, 0.8, 30.0)?);
    let plain = SpectralResponse::gaussian(30.0, 5.0)?;
    let grid = plain.default_grid()?;
    let paths = PathwayPair { tau_p: [0.3, 0.0], tau_s: [0.12, 0.0], ..Default::default() };
    println!("{:>10} {:>12} {:>12}", "rms phase", "|gamma_p|", "|gamma_d|");
    for rms_phase in [0.0, 0.3, 0.6, 1.2] {
        let resp = if rms_phase == 0.0 {
            plain.clone()
        } else {
            plain.clone().with_phase_screen(PhaseScreen { rms_phase, correlation_width: 2.0, draws: 32, seed: 4 })?
        };
        let avg = time_averaged_gamma2(&csd, &resp, &paths, &AveragingWindows::infinite(), &grid)?;
        println!("{rms_phase:>10.2} {:>12.8} {:>12.8}", avg.gamma_p.norm(), avg.gamma_d.norm());
    }
    Ok(())
}
