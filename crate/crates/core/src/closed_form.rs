//! Closed-form one-shot success probabilities at equal priors.
//!
//! Used as references for the numerical engine; none of these go through the
//! Helstrom or optimizer code.

use std::f64::consts::FRAC_1_SQRT_2;

/// Depolarizing: `½[1 + (η0 − η1)/2]`, independent of the input.
pub fn depolarizing(eta0: f64, eta1: f64) -> f64 {
    0.5 * (1.0 + 0.5 * (eta0 - eta1))
}

/// Bit flip at input population `r` (φ = 0): `½[1 + (η0 − η1)|1 − 2r|]`.
pub fn bit_flip(eta0: f64, eta1: f64, r: f64) -> f64 {
    0.5 * (1.0 + (eta0 - eta1) * (1.0 - 2.0 * r).abs())
}

/// Bit flip at its optimal input `r ∈ {0, 1}`.
pub fn bit_flip_optimal(eta0: f64, eta1: f64) -> f64 {
    bit_flip(eta0, eta1, 0.0)
}

/// Amplitude damping at input population `r` (φ = 0):
/// `½[1 + (cos η1 − cos η0) √(r²(cos η0 + cos η1)² − r² + r)]`.
pub fn amplitude_damping(eta0: f64, eta1: f64, r: f64) -> f64 {
    let (c0, c1) = (eta0.cos(), eta1.cos());
    let s = c0 + c1;
    let radicand = (r * r * s * s - r * r + r).max(0.0);
    0.5 * (1.0 + (c1 - c0) * radicand.sqrt())
}

/// `cos η0 + cos η1`, the quantity that selects the amplitude-damping regime.
pub fn amplitude_damping_regime(eta0: f64, eta1: f64) -> f64 {
    eta0.cos() + eta1.cos()
}

/// Amplitude damping maximized over `r`.
///
/// Interior optimum when `cos η0 + cos η1 < 1/√2`, otherwise `r = 1`.
pub fn amplitude_damping_optimal(eta0: f64, eta1: f64) -> f64 {
    let (c0, c1) = (eta0.cos(), eta1.cos());
    let s = c0 + c1;
    if s < FRAC_1_SQRT_2 {
        0.25 * (2.0 + (c1 - c0) / (1.0 - s * s).sqrt())
    } else {
        0.5 * (eta0.sin().powi(2) + c1 * c1)
    }
}

/// Optimal amplitude-damping input: `1 / (2(1 − s²))` with `s = cos η0 + cos η1`
/// when `s < 1/√2`, else 1.
pub fn amplitude_damping_optimal_r(eta0: f64, eta1: f64) -> f64 {
    let s = amplitude_damping_regime(eta0, eta1);
    if s < FRAC_1_SQRT_2 {
        1.0 / (2.0 * (1.0 - s * s))
    } else {
        1.0
    }
}
