use num_complex::Complex64;

use super::{ComplexMatrix, HermitianEigen};
use crate::error::{Error, Result};

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
///
/// Only the upper triangle and the real diagonal are read.
pub fn eigen_2x2(m: &ComplexMatrix) -> HermitianEigen {
    assert_eq!(m.dim(), 2, "eigen_2x2 needs a 2x2 matrix");
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let radius = half_gap.hypot(b.norm());
    let (l0, l1) = (mean + radius, mean - radius);

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let v0 = if radius == 0.0 {
        vec![one, zero]
    } else if a >= d {
        // (λ0 - d, b*) avoids cancellation when a ≥ d
        normalize(vec![Complex64::new(l0 - d, 0.0), b.conj()])
    } else {
        normalize(vec![b, Complex64::new(l0 - a, 0.0)])
    };
    let v1 = vec![-v0[1].conj(), v0[0].conj()];
    HermitianEigen::from_unsorted(vec![l0, l1], vec![v0, v1])
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigensolver for Hermitian matrices of any size.
///
/// Each rotation first removes the phase of the pivot `a[p][q]` and then
/// applies a real plane rotation that annihilates it. Sweeps continue until
/// the off-diagonal Frobenius norm drops below `tol`.
pub fn jacobi_eigen(m: &ComplexMatrix, tol: f64, max_sweeps: usize) -> Result<HermitianEigen> {
    let n = m.dim();
    let mut a = m.hermitian_part().into_entries();
    let mut v = ComplexMatrix::identity(n).into_entries();

    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off >= tol {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a, n);
    }

    let values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(HermitianEigen::from_unsorted(values, vectors))
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g < f64::MIN_POSITIVE {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phase = (apq / g).conj();

    // U = diag(1, e^{-iα}) · R restricted to the (p, q) plane
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase * -s;
    let u_qq = phase * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * u_pp + akq * u_qp;
        a[k * n + q] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * u_pp + vkq * u_qp;
        v[k * n + q] = vkp * u_pq + vkq * u_qq;
    }
}
