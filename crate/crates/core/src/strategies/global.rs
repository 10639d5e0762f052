use std::collections::BTreeMap;

use super::{check_shots, ChannelPair, InputSchedule, PovmLabel, StrategyEval, StrategyKind};
use crate::error::Result;
use crate::helstrom::{Povm, PovmCase};
use crate::linalg::{
    eigen_hermitian, hermitian_eigenvalues, real_symmetric_eigenvalues, tensor_all, ComplexMatrix,
    DEFAULT_EIGEN_TOL,
};

/// `(⊗ ρ0(rᵢ), ⊗ ρ1(rᵢ))` over all shots.
fn joint_states(pair: &ChannelPair, sched: &InputSchedule) -> (ComplexMatrix, ComplexMatrix) {
    let outputs: Vec<_> = (0..sched.shots())
        .map(|k| pair.outputs(sched.r_for_last(k, None), sched.phi()))
        .collect();
    let zero = tensor_all(outputs.iter().map(|(a, _)| a.matrix()));
    let one = tensor_all(outputs.iter().map(|(_, b)| b.matrix()));
    (zero, one)
}

/// Collective Helstrom measurement on all `n + 1` outputs.
///
/// `Π0` projects onto the non-negative eigenspace of
/// `½[⊗ρ0(rᵢ) − ⊗ρ1(rᵢ)]`; when every eigenvalue shares one sign the
/// measurement degenerates to `{I, 0}` or `{0, I}`.
pub fn eval_global(pair: &ChannelPair, sched: &InputSchedule) -> Result<StrategyEval> {
    check_shots(StrategyKind::Global, sched)?;
    let (rho0, rho1) = joint_states(pair, sched);
    let delta = (&rho0 - &rho1).scale(0.5);
    let eig = eigen_hermitian(&delta, DEFAULT_EIGEN_TOL)?;
    let dim = delta.dim();

    let povm = if eig.eigenvalues.iter().all(|&l| l >= 0.0) {
        Povm::always_guess0(dim)
    } else if eig.eigenvalues.iter().all(|&l| l < 0.0) {
        Povm::always_guess1(dim)
    } else {
        Povm::from_pi0(eig.spectral_projector(|l| l >= 0.0), PovmCase::Projective)
    };
    let (hit0, _) = povm.probabilities(&rho0);
    let (_, hit1) = povm.probabilities(&rho1);
    let p_succ = 0.5 * (hit0 + hit1);

    Ok(StrategyEval {
        kind: StrategyKind::Global,
        p_succ,
        povm_tree: BTreeMap::from([(PovmLabel::Global, povm)]),
        posteriors: BTreeMap::from([(PovmLabel::Global, 0.5)]),
        inputs: BTreeMap::new(),
    })
}

/// Global success probability from the spectrum alone: `½ + Σ_{λ>0} λ`.
pub fn global_success(pair: &ChannelPair, sched: &InputSchedule) -> Result<f64> {
    check_shots(StrategyKind::Global, sched)?;
    if let Some(p) = real_global_success(pair, sched)? {
        return Ok(p);
    }
    let (rho0, rho1) = joint_states(pair, sched);
    let delta = (&rho0 - &rho1).scale(0.5);
    let positive: f64 = hermitian_eigenvalues(&delta)?
        .into_iter()
        .filter(|&l| l > 0.0)
        .sum();
    Ok(0.5 + positive)
}

/// Real-arithmetic path for outputs in the x–z plane (φ = 0 or no coherence).
fn real_global_success(pair: &ChannelPair, sched: &InputSchedule) -> Result<Option<f64>> {
    let mut zero = vec![1.0];
    let mut one = vec![1.0];
    for k in 0..sched.shots() {
        let (a, b) = pair.outputs(sched.r_for_last(k, None), sched.phi());
        let (a, b) = (a.matrix().entries(), b.matrix().entries());
        if a.iter().chain(b).any(|z| z.im != 0.0) {
            return Ok(None);
        }
        zero = real_kron(&zero, [a[0].re, a[1].re, a[2].re, a[3].re]);
        one = real_kron(&one, [b[0].re, b[1].re, b[2].re, b[3].re]);
    }
    let n = 1usize << sched.shots();
    let delta: Vec<f64> = zero.iter().zip(&one).map(|(x, y)| 0.5 * (x - y)).collect();
    let positive: f64 = real_symmetric_eigenvalues(&delta, n)?
        .into_iter()
        .filter(|&l| l > 0.0)
        .sum();
    Ok(Some(0.5 + positive))
}

/// `m ⊗ q` for a row-major square `m` and a 2×2 `q`.
fn real_kron(m: &[f64], q: [f64; 4]) -> Vec<f64> {
    let d = (m.len() as f64).sqrt() as usize;
    let n = 2 * d;
    let mut out = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            let x = m[i * d + j];
            out[2 * i * n + 2 * j] = x * q[0];
            out[2 * i * n + 2 * j + 1] = x * q[1];
            out[(2 * i + 1) * n + 2 * j] = x * q[2];
            out[(2 * i + 1) * n + 2 * j + 1] = x * q[3];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelFamily;
    use crate::error::Error;

    #[test]
    fn identical_channels_give_coin_flip() {
        let pair = ChannelPair::from_etas(ChannelFamily::BitFlip, 0.3, 0.3).unwrap();
        let eval = eval_global(&pair, &InputSchedule::flat(vec![0.2, 0.9]).unwrap()).unwrap();
        assert!((eval.p_succ - 0.5).abs() < 1e-12);
        assert_eq!(
            eval.povm_tree[&PovmLabel::Global].case,
            PovmCase::AlwaysGuess0
        );
    }

    #[test]
    fn single_shot_depolarizing_closed_form() {
        let pair = ChannelPair::from_etas(ChannelFamily::Depolarizing, 0.75, 0.4).unwrap();
        let eval = eval_global(&pair, &InputSchedule::constant(0.0, 1).unwrap()).unwrap();
        assert!((eval.p_succ - 0.5875).abs() < 1e-12);
    }

    #[test]
    fn spectral_shortcut_matches_full_evaluation() {
        let pair = ChannelPair::from_etas(ChannelFamily::AmplitudeDamping, 1.2, 0.5).unwrap();
        for sched in [
            vec![0.3],
            vec![0.1, 0.8, 0.5],
            vec![1.0, 0.7, 0.2, 0.4, 0.9],
        ] {
            let sched = InputSchedule::flat(sched).unwrap();
            let full = eval_global(&pair, &sched).unwrap();
            let fast = global_success(&pair, &sched).unwrap();
            assert!((full.p_succ - fast).abs() < 1e-12);
            full.povm_tree[&PovmLabel::Global].validate().unwrap();
            // complex outputs take the general path
            let tilted = sched.clone().with_phi(0.7).unwrap();
            let full = eval_global(&pair, &tilted).unwrap();
            assert!((full.p_succ - global_success(&pair, &tilted).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn real_kron_matches_complex_tensor() {
        let a = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let b = ComplexMatrix::from_real(2, &[0.1, -0.3, -0.3, 0.9]).unwrap();
        let complex = tensor_all([&a, &b, &a]);
        let real = real_kron(
            &real_kron(
                &real_kron(&[1.0], [0.7, 0.2, 0.2, 0.3]),
                [0.1, -0.3, -0.3, 0.9],
            ),
            [0.7, 0.2, 0.2, 0.3],
        );
        for (z, x) in complex.entries().iter().zip(&real) {
            assert_eq!(z.re, *x);
        }
    }

    #[test]
    fn shot_cap_is_enforced() {
        let pair = ChannelPair::from_etas(ChannelFamily::BitFlip, 0.3, 0.1).unwrap();
        let sched = InputSchedule::constant(0.0, 11).unwrap();
        assert!(matches!(
            global_success(&pair, &sched),
            Err(Error::ShotCapExceeded { cap: 10, .. })
        ));
        let adaptive = InputSchedule::adaptive(vec![vec![0.1], vec![0.2, 0.3]]).unwrap();
        assert!(eval_global(&pair, &adaptive).is_err());
    }
}
