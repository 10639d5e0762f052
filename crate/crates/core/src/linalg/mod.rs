//! Dense complex linear algebra for small quantum systems.
//!
//! [`ComplexMatrix`] is a square row-major matrix of `Complex64`. Everything
//! in this crate that is operator-valued (states, POVM elements, Kraus
//! operators, the Helstrom operator) lives in one of these.
//!
//! Hermitian eigenproblems go through [`eigen_hermitian`]: a closed form for
//! 2x2 and cyclic Jacobi rotations above that. [`hermitian_eigenvalues`] is an
//! eigenvalues-only route (Householder tridiagonalization + implicit QL) used
//! in hot loops where eigenvectors are not needed.

mod jacobi;
mod matrix;
mod tridiag;

pub use jacobi::{eigen_2x2, jacobi_eigen};
pub use matrix::{adjoint, matmul, tensor, tensor_all, trace, ComplexMatrix};
pub use tridiag::real_symmetric_eigenvalues;

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Hermiticity tolerance on the Frobenius norm of `A - A†`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default Jacobi stopping threshold on the off-diagonal Frobenius norm.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-13;

/// Sweep cap for the Jacobi eigensolver.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Magnitude below which a component is treated as zero when fixing eigenvector phases.
const PHASE_EPS: f64 = 1e-12;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; `eigenvectors[i]` pairs with
/// `eigenvalues[i]`. Each eigenvector has its first non-negligible component
/// real and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Rebuilds `Σ λᵢ |vᵢ⟩⟨vᵢ|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out.add_outer_scaled(v, *lambda);
        }
        out
    }

    /// Projector onto the span of the eigenvectors selected by `keep`.
    pub fn spectral_projector(&self, mut keep: impl FnMut(f64) -> bool) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            if keep(*lambda) {
                out.add_outer_scaled(v, 1.0);
            }
        }
        out
    }

    /// Builds the result from unsorted pairs: stable descending sort, then phase fixing.
    pub(crate) fn from_unsorted(values: Vec<f64>, vectors: Vec<Vec<Complex64>>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        // stable: ties keep solver output order
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = order
            .iter()
            .map(|&i| {
                let mut v = vectors[i].clone();
                fix_phase(&mut v);
                v
            })
            .collect();
        Self {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// Rotates `v` so its first component with modulus above `PHASE_EPS` is real and positive.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > PHASE_EPS) {
        let rot = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is checked against [`HERMITIAN_TOL`] and symmetrized before
/// decomposition. Dimension 2 uses the closed form; larger matrices use
/// cyclic Jacobi sweeps until the off-diagonal Frobenius norm is below `tol`.
pub fn eigen_hermitian(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    let sym = checked_symmetrize(a)?;
    match sym.dim() {
        1 => Ok(HermitianEigen {
            eigenvalues: vec![sym[(0, 0)].re],
            eigenvectors: vec![vec![Complex64::new(1.0, 0.0)]],
        }),
        2 => Ok(eigen_2x2(&sym)),
        _ => jacobi_eigen(&sym, tol, MAX_JACOBI_SWEEPS),
    }
}

/// Eigenvalues only, sorted descending.
///
/// Real-valued inputs take the tridiagonal QL route; genuinely complex inputs
/// fall back to Jacobi.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = checked_symmetrize(a)?;
    let n = sym.dim();
    if n <= 2 || !sym.is_real(0.0) {
        return Ok(eigen_hermitian(&sym, DEFAULT_EIGEN_TOL)?.eigenvalues);
    }
    let real: Vec<f64> = sym.entries().iter().map(|z| z.re).collect();
    let mut values = real_symmetric_eigenvalues(&real, n)?;
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

fn checked_symmetrize(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dev = a.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(a.hermitian_part())
}
