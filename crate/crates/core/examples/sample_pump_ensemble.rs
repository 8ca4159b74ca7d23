//! Draw seeded pump realizations from a tabulated kernel and watch the
//! empirical cross-spectral density converge.

use pdc_coherence::pump_models::{empirical_csd, frobenius_relative_error, sample_realizations, GaussianSchellModel, TabulatedKernel};
use pdc_coherence::Result;

fn main() -> Result<()> {
    let model = GaussianSchellModel::new(1.0, 1.0, 0.7, 10.0)?;
    let kernel = TabulatedKernel::from_gsm(&model, model.default_grid())?;
    println!("kernel: {} points, trace {:.6}, min eigenvalue {:.2e}", kernel.grid().n_points(), kernel.trace(), kernel.min_eigenvalue());
    for count in [10, 100, 1000] {
        let set = sample_realizations(&kernel, count, 7)?;
        let err = frobenius_relative_error(&empirical_csd(&set)?, &kernel);
        println!("{count:>6} realizations: Frobenius relative error {err:.4e}");
    }
    Ok(())
}
