//! One-shot minimum-error discrimination of two weighted qubit states.
//!
//! With `Δ = p0 ρ0 − (1−p0) ρ1` and its ordered eigenpairs
//! `λ0 ≥ λ1`, `|v0⟩, |v1⟩`, the optimal binary measurement is one of:
//!
//! | condition                   | Π0          | success         |
//! |-----------------------------|-------------|-----------------|
//! | λ0 > 0 and 2p0 ≤ 1 + λ0     | \|v0⟩⟨v0\|  | λ0 + 1 − p0     |
//! | λ0 > 0 and 2p0 > 1 + λ0     | I           | p0              |
//! | λ0 ≤ 0 and p0 ≤ 1/2         | 0           | 1 − p0          |
//! | λ0 ≤ 0 and p0 > 1/2         | I           | p0              |
//!
//! The trivial measurements appear whenever Δ is semidefinite, which happens
//! routinely once priors are skewed by earlier outcomes.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::channels::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eigen_2x2, ComplexMatrix};

/// Tolerance for POVM completeness and positivity checks.
pub const POVM_TOL: f64 = 1e-10;

/// Two hypotheses with prior `p0` on `rho0` (and `1 − p0` on `rho1`).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPair {
    p0: f64,
    rho0: DensityMatrix,
    rho1: DensityMatrix,
}

impl WeightedPair {
    pub fn new(p0: f64, rho0: DensityMatrix, rho1: DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::OutOfRange {
                name: "p0",
                value: p0,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(Self { p0, rho0, rho1 })
    }

    pub fn equal_priors(rho0: DensityMatrix, rho1: DensityMatrix) -> Self {
        Self {
            p0: 0.5,
            rho0,
            rho1,
        }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        1.0 - self.p0
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    /// Swaps the hypotheses: `(p0, ρ0, ρ1) → (1 − p0, ρ1, ρ0)`.
    pub fn swapped(&self) -> Self {
        Self {
            p0: 1.0 - self.p0,
            rho0: self.rho1.clone(),
            rho1: self.rho0.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PovmCase {
    /// Rank-one projective measurement.
    Projective,
    /// `{I, 0}`: always answer 0.
    AlwaysGuess0,
    /// `{0, I}`: always answer 1.
    AlwaysGuess1,
}

/// Binary measurement `{Π0, Π1}`; outcome `i` means "guess hypothesis `i`".
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    pub pi0: ComplexMatrix,
    pub pi1: ComplexMatrix,
    pub case: PovmCase,
}

impl Povm {
    /// Completes `pi0` with `pi1 = I − pi0`.
    pub fn from_pi0(pi0: ComplexMatrix, case: PovmCase) -> Self {
        let pi1 = &ComplexMatrix::identity(pi0.dim()) - &pi0;
        Self { pi0, pi1, case }
    }

    pub fn always_guess0(dim: usize) -> Self {
        Self::from_pi0(ComplexMatrix::identity(dim), PovmCase::AlwaysGuess0)
    }

    pub fn always_guess1(dim: usize) -> Self {
        Self::from_pi0(ComplexMatrix::zeros(dim), PovmCase::AlwaysGuess1)
    }

    pub fn dim(&self) -> usize {
        self.pi0.dim()
    }

    /// `(Tr(ρ Π0), Tr(ρ Π1))` for a state of matching dimension.
    pub fn probabilities(&self, rho: &ComplexMatrix) -> (f64, f64) {
        (
            rho.trace_product(&self.pi0).re,
            rho.trace_product(&self.pi1).re,
        )
    }

    /// Checks completeness and positivity within [`POVM_TOL`].
    pub fn validate(&self) -> Result<()> {
        let sum = &self.pi0 + &self.pi1;
        let dev = sum.frobenius_distance(&ComplexMatrix::identity(self.dim()));
        if dev > POVM_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "POVM elements do not sum to identity (deviation {dev:e})"
            )));
        }
        for pi in [&self.pi0, &self.pi1] {
            let min = *crate::linalg::hermitian_eigenvalues(pi)?.last().unwrap();
            if min < -POVM_TOL {
                return Err(Error::InvalidDensityMatrix(format!(
                    "POVM element has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HelstromResult {
    pub povm: Povm,
    pub p_succ: f64,
    pub lambda0: f64,
    pub lambda1: f64,
}

/// `Δ = p0 ρ0 − (1 − p0) ρ1`.
pub fn delta_op(w: &WeightedPair) -> ComplexMatrix {
    &w.rho0.matrix().scale(w.p0) - &w.rho1.matrix().scale(1.0 - w.p0)
}

/// Optimal minimum-error measurement for the weighted pair.
///
/// `λ0 = 0` is treated as the semidefinite case (guess the likelier
/// hypothesis); equality `2p0 = 1 + λ0` stays projective.
pub fn optimal_povm(w: &WeightedPair) -> HelstromResult {
    let delta = delta_op(w);
    let eig = eigen_2x2(&delta);
    let (lambda0, lambda1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let p0 = w.p0;
    let (povm, p_succ) = if lambda0 > 0.0 {
        if 2.0 * p0 <= 1.0 + lambda0 {
            let pi0 = ComplexMatrix::outer(&eig.eigenvectors[0]);
            (
                Povm::from_pi0(pi0, PovmCase::Projective),
                lambda0 + 1.0 - p0,
            )
        } else {
            (Povm::always_guess0(2), p0)
        }
    } else if p0 <= 0.5 {
        (Povm::always_guess1(2), 1.0 - p0)
    } else {
        (Povm::always_guess0(2), p0)
    };
    HelstromResult {
        povm,
        p_succ,
        lambda0,
        lambda1,
    }
}

/// `(Tr(ρ Π0), Tr(ρ Π1))`.
pub fn outcome_probs(rho: &DensityMatrix, m: &Povm) -> (f64, f64) {
    m.probabilities(rho.matrix())
}

/// Grid search over every rank-one `Π0` plus `{I, 0}` and `{0, I}`.
///
/// `Π0 = [[cos²θ, e^{−iφ} sinθ cosθ], [e^{iφ} sinθ cosθ, sin²θ]]` in the
/// computational basis, with `grid_n` points on each of `θ ∈ [0, π/2]` and
/// `φ ∈ [0, 2π)`. Returns the best success probability found.
pub fn brute_force_povm(w: &WeightedPair, grid_n: usize) -> f64 {
    assert!(grid_n >= 2, "grid_n must be at least 2");
    let (p0, p1) = (w.p0, 1.0 - w.p0);
    let r0 = w.rho0.matrix();
    let r1 = w.rho1.matrix();

    let phases: Vec<(f64, f64)> = (0..grid_n)
        .map(|j| {
            let phi = TAU * j as f64 / grid_n as f64;
            (phi.cos(), phi.sin())
        })
        .collect();

    // Tr(ρ Π0) = ρ00 c² + ρ11 s² + 2 sc Re(ρ10 e^{−iφ})
    let overlap = |rho: &ComplexMatrix, c2: f64, s2: f64, sc: f64, cos: f64, sin: f64| {
        let off = rho[(1, 0)];
        rho[(0, 0)].re * c2 + rho[(1, 1)].re * s2 + 2.0 * sc * (off.re * cos + off.im * sin)
    };

    let mut best = p0.max(p1);
    for i in 0..grid_n {
        let theta = FRAC_PI_2 * i as f64 / (grid_n - 1) as f64;
        let (s, c) = theta.sin_cos();
        let (c2, s2, sc) = (c * c, s * s, s * c);
        for &(cos, sin) in &phases {
            let t0 = overlap(r0, c2, s2, sc, cos, sin);
            let t1 = overlap(r1, c2, s2, sc, cos, sin);
            best = best.max(p0 * t0 + p1 * (1.0 - t1));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{pure_state, InputState};
    use proptest::prelude::*;

    fn ket(r: f64, phi: f64) -> DensityMatrix {
        pure_state(InputState::new(r, phi).unwrap())
    }

    fn mixed() -> DensityMatrix {
        DensityMatrix::maximally_mixed()
    }

    fn random_state(r: f64, phi: f64, purity: f64) -> DensityMatrix {
        let pure = ket(r, phi).into_matrix();
        let m = &pure.scale(purity) + &ComplexMatrix::identity(2).scale(0.5 * (1.0 - purity));
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn delta_examples() {
        let w = WeightedPair::equal_priors(ket(0.3, 0.0), ket(0.3, 0.0));
        assert!(delta_op(&w).frobenius_norm() < 1e-15);

        let w = WeightedPair::equal_priors(ket(0.0, 0.0), ket(1.0, 0.0));
        assert!(delta_op(&w).frobenius_distance(&ComplexMatrix::diag(&[0.5, -0.5])) < 1e-15);

        let w = WeightedPair::new(
            0.7,
            random_state(0.2, 1.0, 0.8),
            random_state(0.9, 4.0, 0.3),
        )
        .unwrap();
        let tr = crate::linalg::trace(&delta_op(&w));
        assert!((tr.re - 0.4).abs() < 1e-12 && tr.im.abs() < 1e-12);
    }

    #[test]
    fn orthogonal_states_are_perfectly_distinguishable() {
        let res = optimal_povm(&WeightedPair::equal_priors(ket(0.0, 0.0), ket(1.0, 0.0)));
        assert!((res.p_succ - 1.0).abs() < 1e-15);
        assert_eq!(res.povm.case, PovmCase::Projective);
    }

    #[test]
    fn skewed_prior_with_positive_delta_guesses_zero() {
        let res = optimal_povm(&WeightedPair::new(0.9, mixed(), mixed()).unwrap());
        assert!((res.lambda0 - 0.4).abs() < 1e-15);
        assert!((res.p_succ - 0.9).abs() < 1e-15);
        assert_eq!(res.povm.case, PovmCase::AlwaysGuess0);
        assert_eq!(res.povm.pi0, ComplexMatrix::identity(2));
    }

    #[test]
    fn negative_delta_guesses_one() {
        let res = optimal_povm(&WeightedPair::new(0.1, mixed(), mixed()).unwrap());
        assert!((res.lambda0 + 0.4).abs() < 1e-15);
        assert!((res.p_succ - 0.9).abs() < 1e-15);
        assert_eq!(res.povm.case, PovmCase::AlwaysGuess1);
        assert_eq!(res.povm.pi0, ComplexMatrix::zeros(2));
    }

    #[test]
    fn certain_priors_need_no_measurement() {
        let res = optimal_povm(&WeightedPair::new(1.0, ket(0.2, 0.0), ket(0.7, 0.0)).unwrap());
        assert_eq!(res.p_succ, 1.0);
        let res = optimal_povm(&WeightedPair::new(0.0, ket(0.2, 0.0), ket(0.7, 0.0)).unwrap());
        assert_eq!(res.p_succ, 1.0);
        assert_eq!(res.povm.case, PovmCase::AlwaysGuess1);
    }

    #[test]
    fn outcome_probability_examples() {
        let proj0 = Povm::from_pi0(ComplexMatrix::diag(&[1.0, 0.0]), PovmCase::Projective);
        assert_eq!(outcome_probs(&ket(0.0, 0.0), &proj0), (1.0, 0.0));
        let tilted = Povm::from_pi0(ket(0.37, 2.0).into_matrix(), PovmCase::Projective);
        let (a, b) = outcome_probs(&mixed(), &tilted);
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
        let res = optimal_povm(&WeightedPair::equal_priors(ket(0.1, 0.5), ket(0.8, 3.0)));
        let (a, b) = outcome_probs(&mixed(), &res.povm);
        assert!((a - 0.5).abs() < 1e-12 && (b - 0.5).abs() < 1e-12);
        let (a, b) = outcome_probs(&random_state(0.4, 1.0, 0.6), &Povm::always_guess0(2));
        assert!((a - 1.0).abs() < 1e-15 && b.abs() < 1e-15);
    }

    #[test]
    fn brute_force_trivial_cases() {
        let w = WeightedPair::equal_priors(ket(0.3, 0.0), ket(0.3, 0.0));
        assert!((brute_force_povm(&w, 64) - 0.5).abs() < 1e-12);
        let w = WeightedPair::new(0.8, ket(0.3, 1.0), ket(0.3, 1.0)).unwrap();
        assert!((brute_force_povm(&w, 64) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn helstrom_formula_matches_trace_norm_at_equal_priors() {
        let w =
            WeightedPair::equal_priors(random_state(0.2, 0.3, 0.9), random_state(0.6, 2.0, 0.5));
        let res = optimal_povm(&w);
        let trace_norm = res.lambda0.abs() + res.lambda1.abs();
        assert!((res.p_succ - 0.5 * (1.0 + trace_norm)).abs() < 1e-12);
    }

    fn pair_strategy() -> impl Strategy<Value = WeightedPair> {
        (
            0.0..=1.0f64,
            (0.0..=1.0f64, 0.0..TAU, 0.0..=1.0f64),
            (0.0..=1.0f64, 0.0..TAU, 0.0..=1.0f64),
        )
            .prop_map(|(p0, (r0, f0, q0), (r1, f1, q1))| {
                WeightedPair::new(p0, random_state(r0, f0, q0), random_state(r1, f1, q1)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn result_invariants(w in pair_strategy()) {
            let res = optimal_povm(&w);
            prop_assert!(res.p_succ >= w.p0().max(w.p1()) - 1e-12);
            prop_assert!(res.p_succ <= 1.0 + 1e-12);
            prop_assert!((res.lambda0 + res.lambda1 - (2.0 * w.p0() - 1.0)).abs() < 1e-12);
            prop_assert!(res.povm.validate().is_ok());
            // the stated value is what the POVM actually achieves
            let (a, _) = outcome_probs(w.rho0(), &res.povm);
            let (_, b) = outcome_probs(w.rho1(), &res.povm);
            prop_assert!((w.p0() * a + w.p1() * b - res.p_succ).abs() < 1e-12);
        }

        #[test]
        fn semidefinite_delta_gives_trivial_povm(w in pair_strategy()) {
            let res = optimal_povm(&w);
            if res.lambda1 > 0.0 || res.lambda0 <= 0.0 {
                prop_assert_ne!(res.povm.case, PovmCase::Projective);
            }
        }

        #[test]
        fn swapping_hypotheses_keeps_success(w in pair_strategy()) {
            let a = optimal_povm(&w).p_succ;
            let b = optimal_povm(&w.swapped()).p_succ;
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
