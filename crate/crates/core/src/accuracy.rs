use serde::Serialize;

/// Numerical-accuracy status attached to computed coherence values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Accuracy {
    #[default]
    Resolved,
    /// Full- and half-grid quadratures disagree by more than the tolerance.
    CoarseGrid { relative_gap: f64 },
    /// An integration window cut the integrand at a non-negligible level.
    TruncatedSupport { edge_ratio: f64 },
}

impl Accuracy {
    pub fn is_resolved(&self) -> bool {
        matches!(self, Accuracy::Resolved)
    }

    /// Keeps the first non-resolved status.
    pub fn and(self, other: Accuracy) -> Accuracy {
        if self.is_resolved() {
            other
        } else {
            self
        }
    }
}
