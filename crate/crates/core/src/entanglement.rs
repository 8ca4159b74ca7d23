//! Time-energy two-qubit states built from interferometric quantities,
//! concurrence, and the pump-coherence bound on entanglement.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::biphoton::{Alternative, CouplingAmplitudes, NORMALIZATION_SLACK};
use crate::error::{require_finite, Error, Result};

/// Tolerance on probabilities and the positivity of X-states.
pub const STATE_TOLERANCE: f64 = 1e-12;
/// Smallest eigenvalue allowed in a density matrix.
pub const DENSITY_PSD_TOLERANCE: f64 = 1e-10;
/// Density-matrix eigenvalues this close to zero are set to zero before
/// square roots.
const EIGEN_CLIP: f64 = 1e-14;

/// Corner X-state `a|s1 i1⟩⟨s1 i1| + b|s2 i2⟩⟨s2 i2| + (c|s1 i1⟩⟨s2 i2| + h.c.)`
/// in the basis `{|s1 i1⟩, |s1 i2⟩, |s2 i1⟩, |s2 i2⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitXState {
    a: f64,
    b: f64,
    c: Complex64,
}

impl TwoQubitXState {
    pub fn new(a: f64, b: f64, c: Complex64) -> Result<Self> {
        if !(a >= -STATE_TOLERANCE && b >= -STATE_TOLERANCE) {
            return Err(Error::Domain(format!("populations must be non-negative, got {a} and {b}")));
        }
        if (a + b - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::Domain(format!("populations sum to {} instead of one", a + b)));
        }
        if !(c.re.is_finite() && c.im.is_finite()) || c.norm() > (a.max(0.0) * b.max(0.0)).sqrt() + STATE_TOLERANCE {
            return Err(Error::Domain(format!("coherence |c| = {} violates positivity", c.norm())));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Embedding as a full 4×4 density matrix.
    pub fn density_matrix(&self) -> DensityMatrix4 {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = Complex64::new(self.a, 0.0);
        m[(3, 3)] = Complex64::new(self.b, 0.0);
        m[(0, 3)] = self.c;
        m[(3, 0)] = self.c.conj();
        DensityMatrix4 { matrix: m }
    }
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    matrix: Matrix4<Complex64>,
}

impl DensityMatrix4 {
    /// Checks Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let defect = (matrix - matrix.adjoint()).map(|z| z.norm()).max();
        if defect > STATE_TOLERANCE {
            return Err(Error::Domain(format!("density matrix is not Hermitian (defect {defect:e})")));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return Err(Error::Domain(format!("density matrix trace is {trace}")));
        }
        let min = hermitian_eigenvalues(&matrix).iter().copied().fold(f64::INFINITY, f64::min);
        if min < -DENSITY_PSD_TOLERANCE {
            return Err(Error::Domain(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }
}

fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> [f64; 4] {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let e = h.symmetric_eigenvalues();
    [e[0], e[1], e[2], e[3]]
}

/// Builds the X-state from couplings, the time-averaged direct rate
/// `R̄⁽²⁾`, the degrees of coherence and the interference phase.
#[allow(clippy::too_many_arguments)]
pub fn build_two_qubit(
    couplings: &CouplingAmplitudes,
    r2: f64,
    gamma_p: Complex64,
    gamma_d: Complex64,
    delta_tau: f64,
    delta_tau_prime: f64,
    delta_phi: f64,
    pump_center: f64,
    difference_center: f64,
) -> Result<TwoQubitXState> {
    couplings.validate()?;
    for (name, v) in [
        ("delta_tau", delta_tau),
        ("delta_tau_prime", delta_tau_prime),
        ("delta_phi", delta_phi),
        ("pump_center", pump_center),
        ("difference_center", difference_center),
    ] {
        require_finite(name, v)?;
    }
    let k1 = couplings.kappa(Alternative::First);
    let k2 = couplings.kappa(Alternative::Second);
    if k1 == 0.0 && k2 == 0.0 {
        return Err(Error::DegenerateState("both pathway couplings vanish".into()));
    }
    if !(r2 > 0.0 && r2.is_finite()) {
        return Err(Error::DegenerateState(format!("direct rate {r2} must be positive")));
    }
    let unit = |name: &str, g: Complex64| -> Result<Complex64> {
        let n = g.norm();
        if !n.is_finite() || n > 1.0 + NORMALIZATION_SLACK {
            return Err(Error::Domain(format!("|{name}| = {n} exceeds one")));
        }
        Ok(if n > 1.0 { g / n } else { g })
    };
    let gp = unit("gamma_p", gamma_p)?;
    let gd = unit("gamma_d", gamma_d)?;
    let eta = 1.0 / ((k1 * k1 + k2 * k2) * r2);
    let a = eta * k1 * k1 * r2;
    let b = eta * k2 * k2 * r2;
    let phase = pump_center * delta_tau + difference_center * delta_tau_prime + delta_phi;
    let c = eta * k1 * k2 * r2 * gp * gd * Complex64::from_polar(1.0, phase);
    // η is built so that a + b = 1 up to one rounding; renormalize exactly.
    let s = a + b;
    TwoQubitXState::new(a / s, b / s, c / s)
}

/// Closed-form concurrence of the corner X-state, `2|c|`.
pub fn concurrence_x(state: &TwoQubitXState) -> f64 {
    2.0 * state.c.norm()
}

/// Wootters concurrence `max(0, λ1-λ2-λ3-λ4)` of a general two-qubit state.
///
/// The `λ` are the square roots of the eigenvalues of `ρ·ρ̃`, with
/// `ρ̃ = (Y⊗Y)ρ*(Y⊗Y)`. They equal the singular values of
/// `M = √ρ·(Y⊗Y)·√ρ*`, since `M·Mᴴ = √ρ·ρ̃·√ρ` is similar to `ρ·ρ̃`; taking
/// singular values avoids square roots of round-off-level eigenvalues.
pub fn concurrence_wootters(rho: &DensityMatrix4) -> f64 {
    let m = rho.matrix;
    let yy = Matrix4::from_fn(|r, c| {
        let v = match (r, c) {
            (0, 3) | (3, 0) => -1.0,
            (1, 2) | (2, 1) => 1.0,
            _ => 0.0,
        };
        Complex64::new(v, 0.0)
    });
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| Complex64::new(clip(l).sqrt(), 0.0));
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.adjoint();
    let product = sqrt_rho * yy * sqrt_rho.map(|z| z.conj());
    let mut lambdas: Vec<f64> = product.singular_values().iter().copied().collect();
    lambdas.sort_by(|x, y| y.total_cmp(x));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Eigenvalues of a unit-trace matrix within round-off of zero are zero.
fn clip(l: f64) -> f64 {
    if l.abs() <= EIGEN_CLIP {
        0.0
    } else {
        l.max(0.0)
    }
}

/// Outcome of comparing a concurrence against the pump-coherence bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub concurrence: f64,
    /// `|γ̄_p|`.
    pub bound: f64,
    pub holds: bool,
    /// `|γ̄_p| - C`.
    pub slack: f64,
    /// The bound is met with equality (within the tolerance).
    pub saturated: bool,
}

/// Checks `C ≤ |γ̄_p|` for a state built with this `γ̄_p`.
pub fn verify_bound(state: &TwoQubitXState, gamma_p: Complex64) -> BoundReport {
    let concurrence = concurrence_x(state);
    let bound = gamma_p.norm();
    let slack = bound - concurrence;
    BoundReport {
        concurrence,
        bound,
        holds: concurrence <= bound + STATE_TOLERANCE,
        slack,
        saturated: slack.abs() <= STATE_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn balanced() -> CouplingAmplitudes {
        CouplingAmplitudes::from_pathways(1.0, 1.0).unwrap()
    }

    #[test]
    fn balanced_coherent_state_is_maximally_entangled() {
        let s = build_two_qubit(&balanced(), 3.0, one(), one(), 0.0, 0.0, 0.0, 10.0, 0.0).unwrap();
        assert!((s.a() - 0.5).abs() < 1e-15 && (s.b() - 0.5).abs() < 1e-15);
        assert!((s.c().norm() - 0.5).abs() < 1e-15);
        assert!((concurrence_x(&s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_pathway_is_a_product_state() {
        let c = CouplingAmplitudes::from_pathways(1.0, 0.0).unwrap();
        let s = build_two_qubit(&c, 1.0, one(), one(), 0.0, 0.0, 0.0, 10.0, 0.0).unwrap();
        assert_eq!((s.a(), s.b(), s.c()), (1.0, 0.0, Complex64::new(0.0, 0.0)));
        assert!(verify_bound(&s, Complex64::new(0.3, 0.0)).holds);
    }

    #[test]
    fn unbalanced_partially_coherent_state() {
        let c = CouplingAmplitudes::from_pathways(2.0, 1.0).unwrap();
        let s = build_two_qubit(&c, 1.0, Complex64::new(0.5, 0.0), one(), 0.3, 0.0, 0.1, 10.0, 0.0).unwrap();
        assert!((s.a() - 0.8).abs() < 1e-15);
        assert!((s.b() - 0.2).abs() < 1e-15);
        assert!((s.c().norm() - 0.2).abs() < 1e-15);
        let w = concurrence_wootters(&s.density_matrix());
        assert!((w - 0.4).abs() < 1e-10);
    }

    #[test]
    fn degenerate_couplings_are_rejected() {
        let c = CouplingAmplitudes::from_pathways(0.0, 0.0).unwrap();
        let r = build_two_qubit(&c, 1.0, one(), one(), 0.0, 0.0, 0.0, 1.0, 0.0);
        assert!(matches!(r, Err(Error::DegenerateState(_))));
    }

    #[test]
    fn textbook_wootters_values() {
        let mixed = DensityMatrix4::new(Matrix4::identity() * Complex64::new(0.25, 0.0)).unwrap();
        assert!(concurrence_wootters(&mixed).abs() < 1e-14);
        // |Φ+⟩ = (|00⟩ + |11⟩)/√2.
        let bell = Matrix4::from_fn(|r, c| {
            let v = if (r == 0 || r == 3) && (c == 0 || c == 3) { 0.5 } else { 0.0 };
            Complex64::new(v, 0.0)
        });
        let bell = DensityMatrix4::new(bell).unwrap();
        assert!((concurrence_wootters(&bell) - 1.0).abs() < 1e-12);
        // |Ψ-⟩ = (|01⟩ - |10⟩)/√2.
        let singlet = Matrix4::from_fn(|r, c| {
            let v = match (r, c) {
                (1, 1) | (2, 2) => 0.5,
                (1, 2) | (2, 1) => -0.5,
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        });
        assert!((concurrence_wootters(&DensityMatrix4::new(singlet).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_density_matrices() {
        let mut m = Matrix4::identity() * Complex64::new(0.25, 0.0);
        m[(0, 0)] = Complex64::new(-0.25, 0.0);
        m[(1, 1)] = Complex64::new(0.75, 0.0);
        assert!(matches!(DensityMatrix4::new(m), Err(Error::Domain(_))));
        let m = Matrix4::identity() * Complex64::new(0.3, 0.0);
        assert!(DensityMatrix4::new(m).is_err());
    }

    #[test]
    fn rejects_states_violating_positivity() {
        assert!(TwoQubitXState::new(0.5, 0.5, Complex64::new(0.6, 0.0)).is_err());
        assert!(TwoQubitXState::new(0.7, 0.4, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn saturation_of_the_bound() {
        let gp = Complex64::from_polar(0.7, 1.1);
        let s = build_two_qubit(&balanced(), 2.0, gp, Complex64::from_polar(1.0, 0.4), 0.2, 0.1, 0.0, 10.0, 1.0).unwrap();
        let r = verify_bound(&s, gp);
        assert!(r.holds && r.saturated);
        assert!((r.concurrence - 0.7).abs() < 1e-12);
    }

    fn arb_inputs() -> impl Strategy<Value = (f64, f64, Complex64, Complex64, f64)> {
        (
            0.0f64..3.0,
            0.0f64..3.0,
            (0.0f64..1.0, -4.0f64..4.0),
            (0.0f64..1.0, -4.0f64..4.0),
            -10.0f64..10.0,
        )
            .prop_filter("one pathway must couple", |(k1, k2, ..)| *k1 + *k2 > 1e-6)
            .prop_map(|(k1, k2, (mp, ap), (md, ad), phi)| {
                (k1, k2, Complex64::from_polar(mp, ap), Complex64::from_polar(md, ad), phi)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn closed_form_matches_wootters((k1, k2, gp, gd, phi) in arb_inputs()) {
            let c = CouplingAmplitudes::from_pathways(k1, k2).unwrap();
            let s = build_two_qubit(&c, 1.7, gp, gd, 0.3, -0.2, phi, 50.0, 2.0).unwrap();
            prop_assert!((concurrence_x(&s) - concurrence_wootters(&s.density_matrix())).abs() < 1e-10);
            prop_assert!(s.c().norm() <= (s.a() * s.b()).sqrt() + STATE_TOLERANCE);
            prop_assert!(verify_bound(&s, gp).holds);
        }

        #[test]
        fn concurrence_ignores_the_phase((k1, k2, gp, gd, phi) in arb_inputs()) {
            let c = CouplingAmplitudes::from_pathways(k1, k2).unwrap();
            let base = concurrence_x(&build_two_qubit(&c, 1.0, gp, gd, 0.0, 0.0, 0.0, 50.0, 2.0).unwrap());
            let turned = concurrence_x(&build_two_qubit(&c, 1.0, gp, gd, 0.0, 0.0, phi, 50.0, 2.0).unwrap());
            prop_assert!((base - turned).abs() <= 1e-14);
        }

        #[test]
        fn concurrence_grows_with_pump_coherence((k1, k2, gp, gd, phi) in arb_inputs(), extra in 0.0f64..1.0) {
            let c = CouplingAmplitudes::from_pathways(k1, k2).unwrap();
            let larger = Complex64::from_polar(gp.norm() + extra * (1.0 - gp.norm()), gp.arg());
            let lo = concurrence_x(&build_two_qubit(&c, 1.0, gp, gd, 0.0, 0.0, phi, 50.0, 2.0).unwrap());
            let hi = concurrence_x(&build_two_qubit(&c, 1.0, larger, gd, 0.0, 0.0, phi, 50.0, 2.0).unwrap());
            prop_assert!(hi >= lo - 1e-15);
        }
    }
}
