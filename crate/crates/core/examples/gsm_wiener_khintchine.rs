//! Temporal correlation of a Gaussian Schell-model pump: closed form next to
//! the tabulated Wiener-Khintchine transform, for several correlation widths.

use pdc_coherence::pump_models::{wk_transform, CrossSpectralDensity, GaussianSchellModel, TabulatedKernel};
use pdc_coherence::{Extent, Result};

fn main() -> Result<()> {
    for c in [Extent::Finite(0.25), Extent::Finite(1.0), Extent::Finite(4.0), Extent::Infinite] {
        let model = GaussianSchellModel::new(1.0, 1.0, c, 10.0)?;
        let csd = CrossSpectralDensity::tabulated(TabulatedKernel::from_gsm(&model, model.default_grid())?);
        println!("correlation width {c}: pulse width {:.4}, coherence time {}", model.pulse_width(), model.coherence_time());
        println!("  {:>6} {:>6} {:>14} {:>14}", "t1", "t2", "closed form", "tabulated");
        for (t1, t2) in [(0.0, 0.0), (1.0, 0.0), (1.0, -1.0), (2.0, 1.5)] {
            let n = wk_transform(&csd, t1, t2)?.value;
            println!("  {t1:>6.2} {t2:>6.2} {:>14.10} {:>14.10}", model.temporal_correlation(t1, t2)?, n.re);
        }
    }
    Ok(())
}
