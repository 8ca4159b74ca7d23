//! Trapezoidal quadrature helpers shared by the coherence transforms and the
//! detector time averages.

use num_complex::Complex64;

/// Relative discrepancy between full- and half-grid results above which a
/// quadrature is reported as under-resolved.
pub const HALF_GRID_TOLERANCE: f64 = 1e-4;

/// Integrand level (relative to its peak) below which support-complete
/// integration stops extending.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

/// Edge level (relative to peak) above which a finite window is flagged as
/// truncating the integrand.
pub const EDGE_TOLERANCE: f64 = 1e-6;

/// Trapezoid weights for `n` uniformly spaced nodes with spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    if n > 0 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    }
    if n == 1 {
        w[0] = 0.0;
    }
    w
}

/// Relative difference used by the half-grid self checks.
pub fn relative_gap(full: Complex64, half: Complex64, scale: f64) -> f64 {
    let denom = full.norm().max(scale).max(f64::MIN_POSITIVE);
    (full - half).norm() / denom
}

/// Outcome of a one-dimensional time integral.
#[derive(Debug, Clone, Copy)]
pub struct LineIntegral {
    pub value: Complex64,
    /// Largest integrand magnitude seen.
    pub peak: f64,
    /// Largest integrand magnitude at the boundary of the integrated range.
    pub edge: f64,
    /// Support-complete integration hit its extent limit before decaying.
    pub exhausted: bool,
}

impl LineIntegral {
    /// Whether the integrand was cut off at a non-negligible level.
    pub fn truncated(&self) -> bool {
        self.exhausted || self.edge > EDGE_TOLERANCE * self.peak
    }
}

/// Trapezoid integral over `[lo, hi]` with at most `step` spacing.
pub fn integrate_window<F>(f: F, lo: f64, hi: f64, step: f64) -> LineIntegral
where
    F: Fn(f64) -> Complex64,
{
    let intervals = (((hi - lo) / step).ceil() as usize).max(2);
    let h = (hi - lo) / intervals as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut edge = 0.0f64;
    for k in 0..=intervals {
        let v = f(lo + h * k as f64);
        peak = peak.max(v.norm());
        let w = if k == 0 || k == intervals {
            edge = edge.max(v.norm());
            0.5
        } else {
            1.0
        };
        sum += v * w;
    }
    LineIntegral {
        value: sum * h,
        peak,
        edge,
        exhausted: false,
    }
}

/// Trapezoid integral over the whole line, extending outward from `center`
/// in steps of `step` until the integrand drops below [`SUPPORT_CUTOFF`] of
/// its peak on both sides, or `max_half_extent` is reached.
pub fn integrate_support<F>(f: F, center: f64, step: f64, max_half_extent: f64) -> LineIntegral
where
    F: Fn(f64) -> Complex64,
{
    let max_steps = ((max_half_extent / step).floor() as usize).max(1);
    let v0 = f(center);
    let mut sum = v0;
    let mut peak = v0.norm();
    let mut edge = 0.0;
    let mut exhausted = false;
    // The integrand is generally not monotone near the centre; a side only
    // stops once it has stayed below cutoff for a few consecutive nodes.
    const QUIET_RUN: usize = 4;
    for dir in [1.0, -1.0] {
        let mut quiet = 0;
        let mut k = 1;
        loop {
            let v = f(center + dir * step * k as f64);
            let mag = v.norm();
            sum += v;
            peak = peak.max(mag);
            if mag < SUPPORT_CUTOFF * peak {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= QUIET_RUN {
                edge = f64::max(edge, mag);
                break;
            }
            if k >= max_steps {
                edge = f64::max(edge, mag);
                exhausted = true;
                break;
            }
            k += 1;
        }
    }
    LineIntegral {
        value: sum * step,
        peak,
        edge,
        exhausted,
    }
}
