//! Qubit input states and the three noisy channel families.
//!
//! Inputs are the pure states `√(1−r)|0⟩ + e^{−iφ}√r|1⟩`. Channels:
//!
//! - depolarizing: `ρ ↦ (1−η)ρ + η I/2`, `η ∈ [0, 1]`
//! - bit flip: `ρ ↦ (1−η)ρ + η XρX`, `η ∈ [0, 1]`
//! - amplitude damping: Kraus pair `{diag(1, cos η), sin η |0⟩⟨1|}`, `η ∈ [0, π/2]`
//!
//! The amplitude-damping angle is kept as-is rather than converted to a decay
//! probability `γ = sin²η`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{adjoint, hermitian_eigenvalues, matmul, ComplexMatrix};

/// Tolerance for density-matrix validity checks.
pub const STATE_TOL: f64 = 1e-10;

/// Pure qubit input `√(1−r)|0⟩ + e^{−iφ}√r|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputState {
    r: f64,
    phi: f64,
}

impl InputState {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                min: 0.0,
                max: 1.0,
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                min: 0.0,
                max: TAU,
            });
        }
        Ok(Self { r, phi })
    }

    /// Input in the x–z plane of the Bloch sphere (`φ = 0`).
    pub fn real(r: f64) -> Result<Self> {
        Self::new(r, 0.0)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// A 2x2 density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates `m` against [`STATE_TOL`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::InvalidDensityMatrix(format!(
                "dimension {} != 2",
                m.dim()
            )));
        }
        let dev = m.hermiticity_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = m[(0, 0)].re + m[(1, 1)].re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min_eig = hermitian_eigenvalues(&m)?[1];
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        debug_assert_eq!(m.dim(), 2);
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(2).scale(0.5))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// `|ψ⟩⟨ψ|` for the given input parameters.
pub fn pure_state(s: InputState) -> DensityMatrix {
    let amp0 = Complex64::new((1.0 - s.r).sqrt(), 0.0);
    let amp1 = Complex64::from_polar(s.r.sqrt(), -s.phi);
    DensityMatrix::from_trusted(ComplexMatrix::outer(&[amp0, amp1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelFamily {
    Depolarizing,
    BitFlip,
    AmplitudeDamping,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 3] = [
        ChannelFamily::Depolarizing,
        ChannelFamily::BitFlip,
        ChannelFamily::AmplitudeDamping,
    ];

    /// Upper end of the valid noise-parameter range (the lower end is 0).
    pub fn eta_max(self) -> f64 {
        match self {
            ChannelFamily::Depolarizing | ChannelFamily::BitFlip => 1.0,
            ChannelFamily::AmplitudeDamping => FRAC_PI_2,
        }
    }

    /// Unit used when η is entered as a fraction: π/2 for amplitude damping, 1 otherwise.
    pub fn eta_unit(self) -> f64 {
        self.eta_max()
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::BitFlip => "bit-flip",
            ChannelFamily::AmplitudeDamping => "amplitude-damping",
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "depolarizing" | "depol" => Ok(ChannelFamily::Depolarizing),
            "bit-flip" | "bitflip" => Ok(ChannelFamily::BitFlip),
            "amplitude-damping" | "ad" => Ok(ChannelFamily::AmplitudeDamping),
            other => Err(Error::Config(format!("unknown channel family `{other}`"))),
        }
    }
}

/// A channel family with its noise parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    family: ChannelFamily,
    eta: f64,
}

impl ChannelSpec {
    pub fn new(family: ChannelFamily, eta: f64) -> Result<Self> {
        let max = family.eta_max();
        if !(0.0..=max).contains(&eta) {
            return Err(Error::OutOfRange {
                name: "eta",
                value: eta,
                min: 0.0,
                max,
            });
        }
        Ok(Self { family, eta })
    }

    pub fn depolarizing(eta: f64) -> Result<Self> {
        Self::new(ChannelFamily::Depolarizing, eta)
    }

    pub fn bit_flip(eta: f64) -> Result<Self> {
        Self::new(ChannelFamily::BitFlip, eta)
    }

    pub fn amplitude_damping(eta: f64) -> Result<Self> {
        Self::new(ChannelFamily::AmplitudeDamping, eta)
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Kraus operators of the channel.
    ///
    /// Depolarizing uses the four-operator Pauli form
    /// `{√(1−3η/4) I, √(η/4) X, √(η/4) Y, √(η/4) Z}`.
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        let eta = self.eta;
        match self.family {
            ChannelFamily::Depolarizing => {
                let w = (eta / 4.0).sqrt();
                vec![
                    ComplexMatrix::identity(2).scale((1.0 - 0.75 * eta).sqrt()),
                    ComplexMatrix::pauli_x().scale(w),
                    ComplexMatrix::pauli_y().scale(w),
                    ComplexMatrix::pauli_z().scale(w),
                ]
            }
            ChannelFamily::BitFlip => vec![
                ComplexMatrix::identity(2).scale((1.0 - eta).sqrt()),
                ComplexMatrix::pauli_x().scale(eta.sqrt()),
            ],
            ChannelFamily::AmplitudeDamping => vec![
                ComplexMatrix::diag(&[1.0, eta.cos()]),
                ComplexMatrix::from_real(2, &[0.0, eta.sin(), 0.0, 0.0]).unwrap(),
            ],
        }
    }

    /// Channel output for a pure input.
    pub fn output(&self, input: InputState) -> DensityMatrix {
        apply(self, &pure_state(input))
    }
}

/// `Σ K ρ K†` over the given Kraus operators.
pub fn apply_kraus(kraus: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.dim());
    for k in kraus {
        out = &out + &k.conjugate(rho);
    }
    out
}

/// Applies the channel. Depolarizing uses its direct map form; the other
/// families go through their Kraus operators.
pub fn apply(c: &ChannelSpec, rho: &DensityMatrix) -> DensityMatrix {
    let m = rho.matrix();
    let out = match c.family {
        ChannelFamily::Depolarizing => {
            &m.scale(1.0 - c.eta) + &ComplexMatrix::identity(2).scale(0.5 * c.eta)
        }
        ChannelFamily::BitFlip | ChannelFamily::AmplitudeDamping => {
            apply_kraus(&c.kraus_operators(), m)
        }
    };
    DensityMatrix::from_trusted(out.hermitian_part())
}

/// Frobenius distance of `Σ K†K` from the identity.
pub fn kraus_completeness(c: &ChannelSpec) -> f64 {
    let sum = c
        .kraus_operators()
        .iter()
        .fold(ComplexMatrix::zeros(2), |acc, k| {
            &acc + &matmul(&adjoint(k), k).expect("2x2 Kraus operators")
        });
    sum.frobenius_distance(&ComplexMatrix::identity(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.frobenius_distance(b) <= tol
    }

    fn ket0() -> ComplexMatrix {
        ComplexMatrix::diag(&[1.0, 0.0])
    }

    fn ket1() -> ComplexMatrix {
        ComplexMatrix::diag(&[0.0, 1.0])
    }

    #[test]
    fn pure_state_examples() {
        assert_eq!(pure_state(InputState::real(0.0).unwrap()).matrix(), &ket0());
        assert!(approx_eq(
            pure_state(InputState::real(1.0).unwrap()).matrix(),
            &ket1(),
            1e-15
        ));
        let half = pure_state(InputState::real(0.5).unwrap());
        for z in half.matrix().entries() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn pure_state_diagonal_is_population() {
        let rho = pure_state(InputState::new(0.3, 1.2).unwrap());
        assert!((rho.matrix()[(0, 0)].re - 0.7).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.3).abs() < 1e-15);
        assert!(rho.matrix()[(1, 0)].im < 0.0);
    }

    #[test]
    fn input_state_rejects_out_of_range() {
        assert!(InputState::new(-0.1, 0.0).is_err());
        assert!(InputState::new(1.1, 0.0).is_err());
        assert!(InputState::new(0.5, TAU).is_err());
        assert!(InputState::new(0.5, -0.1).is_err());
    }

    #[test]
    fn channel_spec_ranges_per_family() {
        assert!(ChannelSpec::depolarizing(1.0).is_ok());
        assert!(ChannelSpec::depolarizing(1.01).is_err());
        assert!(ChannelSpec::bit_flip(-0.01).is_err());
        assert!(ChannelSpec::amplitude_damping(FRAC_PI_2).is_ok());
        assert!(ChannelSpec::amplitude_damping(1.58).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ket0()).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[0.6, 0.6])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.2, -0.2])).is_err());
        assert!(
            DensityMatrix::new(ComplexMatrix::from_real(2, &[0.5, 0.4, 0.1, 0.5]).unwrap())
                .is_err()
        );
        assert!(DensityMatrix::new(ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn extreme_channel_examples() {
        let any = pure_state(InputState::new(0.3, 0.7).unwrap());
        let out = apply(&ChannelSpec::depolarizing(1.0).unwrap(), &any);
        assert!(approx_eq(
            out.matrix(),
            DensityMatrix::maximally_mixed().matrix(),
            1e-15
        ));

        let zero = DensityMatrix::new(ket0()).unwrap();
        let out = apply(&ChannelSpec::bit_flip(1.0).unwrap(), &zero);
        assert!(approx_eq(out.matrix(), &ket1(), 1e-15));

        let one = DensityMatrix::new(ket1()).unwrap();
        let out = apply(&ChannelSpec::amplitude_damping(FRAC_PI_2).unwrap(), &one);
        assert!(approx_eq(out.matrix(), &ket0(), 1e-15));
    }

    #[test]
    fn kraus_completeness_examples() {
        assert!(kraus_completeness(&ChannelSpec::bit_flip(0.3).unwrap()) <= 1e-12);
        assert!(kraus_completeness(&ChannelSpec::amplitude_damping(1.1).unwrap()) <= 1e-12);
        assert!(kraus_completeness(&ChannelSpec::depolarizing(0.7).unwrap()) <= 1e-12);
    }

    #[test]
    fn family_parsing_and_names() {
        for f in ChannelFamily::ALL {
            assert_eq!(f.name().parse::<ChannelFamily>().unwrap(), f);
        }
        assert!("phase-flip".parse::<ChannelFamily>().is_err());
    }

    fn family_strategy() -> impl Strategy<Value = ChannelFamily> {
        prop_oneof![
            Just(ChannelFamily::Depolarizing),
            Just(ChannelFamily::BitFlip),
            Just(ChannelFamily::AmplitudeDamping),
        ]
    }

    proptest! {
        #[test]
        fn apply_preserves_trace_and_positivity(
            family in family_strategy(), eta_frac in 0.0..=1.0f64,
            r in 0.0..=1.0f64, phi in 0.0..TAU,
        ) {
            let c = ChannelSpec::new(family, eta_frac * family.eta_max()).unwrap();
            let out = c.output(InputState::new(r, phi).unwrap());
            let m = out.matrix();
            prop_assert!((m[(0, 0)].re + m[(1, 1)].re - 1.0).abs() < 1e-12);
            prop_assert!(hermitian_eigenvalues(m).unwrap()[1] >= -1e-10);
            prop_assert!(DensityMatrix::new(m.clone()).is_ok());
        }

        #[test]
        fn zero_noise_is_identity(family in family_strategy(), r in 0.0..=1.0f64, phi in 0.0..TAU) {
            let c = ChannelSpec::new(family, 0.0).unwrap();
            let rho = pure_state(InputState::new(r, phi).unwrap());
            prop_assert!(approx_eq(apply(&c, &rho).matrix(), rho.matrix(), 1e-12));
        }

        #[test]
        fn depolarizing_map_equals_kraus_form(eta in 0.0..=1.0f64, r in 0.0..=1.0f64, phi in 0.0..TAU) {
            let c = ChannelSpec::depolarizing(eta).unwrap();
            let rho = pure_state(InputState::new(r, phi).unwrap());
            let via_kraus = apply_kraus(&c.kraus_operators(), rho.matrix());
            prop_assert!(approx_eq(apply(&c, &rho).matrix(), &via_kraus, 1e-12));
        }

        #[test]
        fn xz_plane_inputs_stay_real(eta_frac in 0.0..=1.0f64, r in 0.0..=1.0f64) {
            for family in [ChannelFamily::BitFlip, ChannelFamily::AmplitudeDamping] {
                let c = ChannelSpec::new(family, eta_frac * family.eta_max()).unwrap();
                let out = c.output(InputState::real(r).unwrap());
                prop_assert!(out.matrix()[(0, 1)].im.abs() <= 1e-12);
                prop_assert!(out.matrix()[(1, 0)].im.abs() <= 1e-12);
            }
        }
    }
}
