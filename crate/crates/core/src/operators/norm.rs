//! Operator norm by Krylov-accelerated power iteration on `A*A`.
//!
//! The iterates `v, A*A v, (A*A)² v, ...` of the power method span a Krylov
//! space; Lanczos with full reorthogonalization extracts the largest Rayleigh
//! quotient over that whole space instead of just the last iterate. The
//! estimate is therefore never worse than plain power iteration from the same
//! start vector and converges even when the top singular values cluster.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// Relative tolerance on successive estimates of `‖A‖²`.
pub const NORM_TOL: f64 = 1e-12;
pub const NORM_MAX_ITER: usize = 10_000;

/// Consecutive steps the estimate must stay within tolerance.
const STABLE_STEPS: usize = 3;

/// Largest singular value of `a`.
pub fn op_norm(a: &CMatrix) -> Result<f64> {
    op_norm_with(a, NORM_TOL, NORM_MAX_ITER)
}

pub fn op_norm_with(a: &CMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 || a.is_zero() {
        return Ok(0.0);
    }
    // Work with the smaller Gram matrix.
    if a.nrows() < n {
        return op_norm_with(&a.adjoint(), tol, max_iter);
    }

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut v = start_vector(n);
    let mut estimate = 0.0_f64;
    let mut stable = 0;
    let mut gap = f64::INFINITY;

    for step in 0..max_iter.min(n) {
        let mut w = a.adjoint_mul_vec(&a.mul_vec(&v));
        let alpha = dot(&v, &w).re;
        axpy(&mut w, -alpha, &v);
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            axpy(&mut w, -beta, prev);
        }
        basis.push(v);
        alphas.push(alpha);
        // Two passes of Gram-Schmidt keep the basis orthogonal to rounding.
        for _ in 0..2 {
            for b in &basis {
                let h = dot(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= h * y;
                }
            }
        }
        let beta = norm(&w);

        let next = tridiagonal_max_eigenvalue(&alphas, &betas).max(0.0);
        gap = if next > 0.0 {
            (next - estimate).abs() / next
        } else {
            0.0
        };
        estimate = next;
        if gap <= tol {
            stable += 1;
        } else {
            stable = 0;
        }

        let exhausted = beta <= f64::EPSILON * estimate.max(f64::MIN_POSITIVE) || step + 1 == n;
        if exhausted || stable >= STABLE_STEPS {
            return Ok(estimate.sqrt());
        }
        betas.push(beta);
        v = w.iter().map(|x| x / beta).collect();
    }
    Err(Error::NormNotConverged {
        iterations: basis.len(),
        estimate: estimate.sqrt(),
        gap,
    })
}

/// Deterministic start vector with no symmetry between entries, so it is not
/// orthogonal to singular vectors of the `m ↔ -m` or copy-swap symmetric
/// operators the suites produce.
fn start_vector(n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = j as f64;
            Complex64::new(1.0 + 0.5 * (1.3 * x + 0.2).sin(), 0.25 * (0.7 * x).cos())
        })
        .collect();
    let s = norm(&v);
    v.into_iter().map(|x| x / s).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [Complex64], alpha: f64, x: &[Complex64]) {
    for (a, b) in y.iter_mut().zip(x) {
        *a += alpha * b;
    }
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e`, by Sturm-sequence bisection.
pub(crate) fn tridiagonal_max_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let k = d.len();
    debug_assert!(e.len() + 1 >= k);
    let radius = |i: usize| {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < k { e[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = (0..k)
        .map(|i| d[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let mut hi = (0..k)
        .map(|i| d[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    // eigenvalues strictly below x
    let count_below = |x: f64| {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..k {
            let off = if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 };
            q = d[i] - x - if i > 0 { off / q } else { 0.0 };
            if q == 0.0 {
                q = -f64::EPSILON * scale;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_norms() {
        assert_relative_eq!(
            op_norm(&CMatrix::identity(5)).unwrap(),
            1.0,
            epsilon = 1e-13
        );
        let d = CMatrix::from_real_diag(&[1.0, 2.0, 3.0]);
        assert_relative_eq!(op_norm(&d).unwrap(), 3.0, epsilon = 1e-12);
        let lq = CMatrix::from_real_diag(&[0.5f64.sqrt(), 0.5f64.powf(1.5), 0.5f64.powf(2.5)]);
        assert_relative_eq!(op_norm(&lq).unwrap(), 0.5f64.sqrt(), epsilon = 1e-12);
        assert_eq!(op_norm(&CMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn rectangular_and_nilpotent() {
        // [[0, 2], [0, 0]] has norm 2
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = c(2.0, 0.0);
        assert_relative_eq!(op_norm(&a).unwrap(), 2.0, epsilon = 1e-12);
        let r = CMatrix::from_rows(1, 3, vec![c(3.0, 0.0), c(0.0, 4.0), c(0.0, 0.0)]).unwrap();
        assert_relative_eq!(op_norm(&r).unwrap(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn clustered_top_singular_values() {
        // Singular values 1 - 1/k² accumulate at 1: plain power iteration
        // stalls on this spectrum.
        let n = 300;
        let diag: Vec<f64> = (1..=n).map(|k| 1.0 - 1.0 / ((k * k) as f64)).collect();
        let a = CMatrix::from_real_diag(&diag);
        assert_relative_eq!(op_norm(&a).unwrap(), diag[n - 1], epsilon = 1e-12);
    }

    #[test]
    fn cap_reports_non_convergence() {
        let diag: Vec<f64> = (1..=50).map(|k| k as f64).collect();
        let a = CMatrix::from_real_diag(&diag);
        match op_norm_with(&a, 1e-12, 2) {
            Err(Error::NormNotConverged {
                iterations,
                estimate,
                ..
            }) => {
                assert_eq!(iterations, 2);
                assert!(estimate > 0.0 && estimate <= 50.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn tridiagonal_bisection() {
        // [[2,1],[1,2]] -> 3
        assert_relative_eq!(
            tridiagonal_max_eigenvalue(&[2.0, 2.0], &[1.0]),
            3.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            tridiagonal_max_eigenvalue(&[-4.0], &[]),
            -4.0,
            epsilon = 1e-14
        );
    }

    fn matrix_strategy(n: usize) -> impl Strategy<Value = CMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| CMatrix::from_fn(n, n, |i, j| c(v[i * n + j].0, v[i * n + j].1)))
    }

    proptest! {
        #[test]
        fn norm_invariants(a in matrix_strategy(6), b in matrix_strategy(6)) {
            let na = op_norm(&a).unwrap();
            prop_assert!((na - op_norm(&a.adjoint()).unwrap()).abs() <= 1e-9 * na.max(1.0));
            let nab = op_norm(&a.matmul(&b).unwrap()).unwrap();
            prop_assert!(nab <= na * op_norm(&b).unwrap() + 1e-9);
            // ‖A‖_F / √n ≤ ‖A‖ ≤ ‖A‖_F
            let f = a.frobenius_norm();
            prop_assert!(na <= f + 1e-12 && na >= f / 6f64.sqrt() - 1e-12);
        }
    }
}
