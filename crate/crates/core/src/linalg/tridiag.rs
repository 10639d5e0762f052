use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues of a real symmetric matrix (row-major, `n x n`), unsorted.
///
/// Householder reduction to tridiagonal form followed by implicit QL with
/// Wilkinson-style shifts. No eigenvectors are accumulated.
pub fn real_symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n || n == 0 {
        return Err(Error::BadShape {
            dim: n,
            len: a.len(),
        });
    }
    let (mut d, mut e) = tridiagonalize(a.to_vec(), n);
    tridiagonal_ql(&mut d, &mut e)?;
    Ok(d)
}

/// Returns (diagonal, sub-diagonal) with `e[i]` coupling `i` and `i + 1`; `e[n-1] = 0`.
fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let v = &mut v[..m];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = a[(k + 1 + i) * n + k];
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let head = v[0];
        let alpha = if head > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            e[k] = head;
            continue;
        }
        let inv = 1.0 / vnorm;
        v.iter_mut().for_each(|x| *x *= inv);
        // trailing block B = A[k+1.., k+1..]; B <- H B H with H = I - 2vvᵀ
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = (k + 1 + i) * n + k + 1;
            *pi = a[row..row + m]
                .iter()
                .zip(v.iter())
                .map(|(x, y)| x * y)
                .sum();
        }
        let kappa: f64 = p.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
        p.iter_mut()
            .zip(v.iter())
            .for_each(|(pi, vi)| *pi -= kappa * vi);
        for i in 0..m {
            let row = (k + 1 + i) * n + k + 1;
            let (vi, wi) = (2.0 * v[i], 2.0 * p[i]);
            for ((x, pj), vj) in a[row..row + m].iter_mut().zip(p.iter()).zip(v.iter()) {
                *x -= vi * pj + wi * vj;
            }
        }
        e[k] = alpha;
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    let d = (0..n).map(|i| a[i * n + i]).collect();
    (d, e)
}

// hypot is several times slower; fall back to it only on overflow
#[inline]
fn norm2(a: f64, b: f64) -> f64 {
    let r = (a * a + b * b).sqrt();
    if r.is_finite() {
        r
    } else {
        a.hypot(b)
    }
}

/// Implicit QL on a symmetric tridiagonal matrix; eigenvalues land in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    // absolute floor for deflation: exact zero diagonals never pass the relative test
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = f64::EPSILON * f64::EPSILON * scale;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    sweeps: iterations,
                    off_norm: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = norm2(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = norm2(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
