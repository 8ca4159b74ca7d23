//! Concurrence of the post-selected two-qubit state along a delay sweep,
//! next to the pump-coherence bound it can never exceed.

use pdc_coherence::biphoton::{CouplingAmplitudes, PathwayPair, SpectralResponse};
use pdc_coherence::detection::{time_averaged_gamma2, AveragingWindows};
use pdc_coherence::entanglement::{build_two_qubit, concurrence_wootters, verify_bound};
use pdc_coherence::pump_models::{CrossSpectralDensity, GaussianSchellModel};
use pdc_coherence::Result;

fn main() -> Result<()> {
    let csd = CrossSpectralDensity::gsm(GaussianSchellModel::new(1.0, 1.0, 2.0, 30.0)?);
    let resp = SpectralResponse::gaussian(30.0, 30.0)?;
    let grid = resp.default_grid()?;
    for kappa2 in [1.0, 0.6] {
        let couplings = CouplingAmplitudes::from_pathways(1.0, kappa2)?;
        println!("kappa = (1, {kappa2})");
        for d in [0.0, 0.5, 1.0, 2.0] {
            let paths = PathwayPair { tau_p: [d, 0.0], ..Default::default() };
            let avg = time_averaged_gamma2(&csd, &resp, &paths, &AveragingWindows::infinite(), &grid)?;
            let state = build_two_qubit(
                &couplings, avg.r2, avg.gamma_p, avg.gamma_d,
                paths.delta_tau(), paths.delta_tau_prime(), paths.delta_phi(),
                resp.pump_center(), resp.difference_center(),
            )?;
            let report = verify_bound(&state, avg.gamma_p);
            println!(
                "  dtau {d:.1}: C {:.5} (Wootters {:.5}) bound {:.5} slack {:.2e}",
                report.concurrence, concurrence_wootters(&state.density_matrix()), report.bound, report.slack
            );
        }
    }
    Ok(())
}
