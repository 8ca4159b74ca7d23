use serde::{Deserialize, Serialize};

/// Traversal times and extra phases for both two-photon pathways.
///
/// Index 0 is alternative 1 and index 1 is alternative 2. Derived quantities
/// are always recomputed from these twelve numbers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathwayPair {
    pub tau_p: [f64; 2],
    pub tau_s: [f64; 2],
    pub tau_i: [f64; 2],
    #[serde(default)]
    pub phi_p: [f64; 2],
    #[serde(default)]
    pub phi_s: [f64; 2],
    #[serde(default)]
    pub phi_i: [f64; 2],
}

/// Pathway alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alternative {
    First,
    Second,
}

impl Alternative {
    pub fn index(self) -> usize {
        match self {
            Alternative::First => 0,
            Alternative::Second => 1,
        }
    }
}

impl PathwayPair {
    /// `τ_j = τ_pj + (τ_sj + τ_ij)/2`.
    pub fn tau(&self, alt: Alternative) -> f64 {
        let j = alt.index();
        self.tau_p[j] + 0.5 * (self.tau_s[j] + self.tau_i[j])
    }

    /// `τ'_j = (τ_sj - τ_ij)/2`.
    pub fn tau_prime(&self, alt: Alternative) -> f64 {
        let j = alt.index();
        0.5 * (self.tau_s[j] - self.tau_i[j])
    }

    /// `φ_j = φ_pj + φ_sj + φ_ij`.
    pub fn phi(&self, alt: Alternative) -> f64 {
        let j = alt.index();
        self.phi_p[j] + self.phi_s[j] + self.phi_i[j]
    }

    pub fn delta_tau(&self) -> f64 {
        self.tau(Alternative::First) - self.tau(Alternative::Second)
    }

    pub fn delta_tau_prime(&self) -> f64 {
        self.tau_prime(Alternative::First) - self.tau_prime(Alternative::Second)
    }

    pub fn delta_phi(&self) -> f64 {
        self.phi(Alternative::First) - self.phi(Alternative::Second)
    }

    /// The pair with alternatives 1 and 2 exchanged.
    pub fn swapped(&self) -> PathwayPair {
        let s = |a: [f64; 2]| [a[1], a[0]];
        PathwayPair {
            tau_p: s(self.tau_p),
            tau_s: s(self.tau_s),
            tau_i: s(self.tau_i),
            phi_p: s(self.phi_p),
            phi_s: s(self.phi_s),
            phi_i: s(self.phi_i),
        }
    }

    /// Both slots set to the parameters of one alternative.
    pub fn collapsed(&self, alt: Alternative) -> PathwayPair {
        let j = alt.index();
        let d = |a: [f64; 2]| [a[j], a[j]];
        PathwayPair {
            tau_p: d(self.tau_p),
            tau_s: d(self.tau_s),
            tau_i: d(self.tau_i),
            phi_p: d(self.phi_p),
            phi_s: d(self.phi_s),
            phi_i: d(self.phi_i),
        }
    }
}

/// `(Δτ, Δτ', Δφ)` of a pathway pair.
pub fn pathway_deltas(paths: &PathwayPair) -> (f64, f64, f64) {
    (paths.delta_tau(), paths.delta_tau_prime(), paths.delta_phi())
}
