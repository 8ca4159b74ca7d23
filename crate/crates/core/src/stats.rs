//! Ensemble statistics for Monte-Carlo estimates.

use num_complex::Complex64;

/// Mean of complex samples with its delete-one jackknife standard error.
///
/// The standard error is that of the complex mean as a point in the plane,
/// `sqrt(se_re² + se_im²)`. Fewer than two samples give a zero error.
pub fn jackknife_mean(samples: &[Complex64]) -> (Complex64, f64) {
    let n = samples.len();
    if n == 0 {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let total = pairwise_sum(samples);
    let mean = total / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let nf = n as f64;
    // Leave-one-out means and their spread.
    let mut acc = 0.0;
    for &x in samples {
        let loo = (total - x) / (nf - 1.0);
        acc += (loo - mean).norm_sqr();
    }
    let var = (nf - 1.0) / nf * acc;
    (mean, var.sqrt())
}

/// Pairwise (cascade) summation; result is independent of thread scheduling
/// because the tree shape depends only on the slice length.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        return xs.iter().copied().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
