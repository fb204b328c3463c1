//! Hermitian eigenvalues by cyclic complex Jacobi rotations.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius tolerance, relative to `‖A‖_F`.
pub const EIG_TOL: f64 = 1e-12;
pub const EIG_MAX_SWEEPS: usize = 100;

/// Largest admissible `‖A - A*‖_F` (scaled by `max(1, ‖A‖_F)`).
const HERMITIAN_TOL: f64 = 1e-10;

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eig_hermitian(a: &CMatrix) -> Result<Vec<f64>> {
    jacobi(a, false).map(|(values, _)| values)
}

/// Ascending eigenvalues and the matching unit eigenvectors (as columns).
pub fn eigh_hermitian(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    jacobi(a, true).map(|(values, vectors)| (values, vectors.expect("requested")))
}

fn off_diagonal(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(input: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    if !input.is_square() {
        return Err(Error::DimensionMismatch {
            expected: input.nrows(),
            actual: input.ncols(),
        });
    }
    let n = input.nrows();
    let total = input.frobenius_norm();
    let defect = input.hermitian_defect();
    if defect > HERMITIAN_TOL * total.max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    // symmetrize away the admissible defect
    let mut a = CMatrix::from_fn(n, n, |i, j| 0.5 * (input[(i, j)] + input[(j, i)].conj()));
    let mut v = want_vectors.then(|| CMatrix::identity(n));
    let threshold = EIG_TOL * total;

    let mut sweeps = 0;
    let mut off = off_diagonal(&a);
    while off > threshold {
        if sweeps == EIG_MAX_SWEEPS {
            return Err(Error::EigenNotConverged { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]));
    Ok((values, vectors))
}

/// One Jacobi rotation annihilating `a[p][q]`: `A ← W* A W`, `V ← V W` with
/// `W = diag(1, conj(e)) · R(θ)` where `e` is the phase of `a[p][q]`.
fn rotate(a: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize) {
    let g = a[(p, q)];
    let g_abs = g.norm();
    if g_abs == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // skip entries already negligible against both diagonal entries
    if g_abs < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let e = g / g_abs;
    let theta = (aqq - app) / (2.0 * g_abs);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let w_pp = Complex64::new(c, 0.0);
    let w_pq = Complex64::new(s, 0.0);
    let w_qp = -s * e.conj();
    let w_qq = c * e.conj();

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * w_pp + vkq * w_qp;
            v[(k, q)] = vkp * w_pq + vkq * w_qq;
        }
    }
}
