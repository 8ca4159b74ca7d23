use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform, odd-length grid of angular-frequency offsets around a carrier.
///
/// Offsets run from `-span_half_width` to `+span_half_width`; the middle node
/// sits exactly on the carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    center: f64,
    span_half_width: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(center: f64, span_half_width: f64, n_points: usize) -> Result<Self> {
        if !center.is_finite() || !span_half_width.is_finite() {
            return Err(Error::Domain("grid parameters must be finite".into()));
        }
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "grid needs an odd point count of at least 3, got {n_points}"
            )));
        }
        if span_half_width <= 0.0 {
            return Err(Error::Domain("grid span must be positive".into()));
        }
        Ok(Self {
            center,
            span_half_width,
            n_points,
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn span_half_width(&self) -> f64 {
        self.span_half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.span_half_width / (self.n_points - 1) as f64
    }

    /// Offset of node `k` from the carrier.
    pub fn offset(&self, k: usize) -> f64 {
        let half = (self.n_points / 2) as f64;
        (k as f64 - half) * self.spacing()
    }

    pub fn offsets(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.offset(k)).collect()
    }

    /// Every other node of this grid (same span, `(n+1)/2` points).
    pub fn half(&self) -> Option<FrequencyGrid> {
        let n = self.n_points.div_ceil(2);
        if n < 3 || n.is_multiple_of(2) {
            return None;
        }
        FrequencyGrid::new(self.center, self.span_half_width, n).ok()
    }

    /// Whether `offset` lies within the grid's span (with a relative slack).
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let slack = 1e-9 * self.span_half_width;
        lo >= -self.span_half_width - slack && hi <= self.span_half_width + slack
    }

    /// Linear interpolation of nodal values at an arbitrary offset; zero
    /// outside the grid.
    pub fn interpolate<T>(&self, values: &[T], offset: f64) -> T
    where
        T: Copy + Default + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let h = self.spacing();
        let pos = (offset + self.span_half_width) / h;
        let last = (self.n_points - 1) as f64;
        if !(pos >= -1e-9 && pos <= last + 1e-9) {
            return T::default();
        }
        let pos = pos.clamp(0.0, last);
        let k = (pos.floor() as usize).min(self.n_points - 2);
        let frac = pos - k as f64;
        values[k] * (1.0 - frac) + values[k + 1] * frac
    }
}
