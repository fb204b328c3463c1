//! Complex linear algebra on the truncated space: operators, antilinear
//! operators, commutators, norms, Hermitian eigenvalues and level-block decay
//! fits.

mod decay;
mod eig;
mod matrix;
mod norm;

pub use decay::{band_samples, block_norms, decay_fit, BlockNorm, DecayFit, DEFAULT_FLOOR};
pub use eig::{eig_hermitian, eigh_hermitian, EIG_MAX_SWEEPS, EIG_TOL};
pub use matrix::CMatrix;
pub use norm::{op_norm, op_norm_with, NORM_MAX_ITER, NORM_TOL};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpec;
use crate::qcore::HalfInt;

/// Tolerance on unitarity and anti-involutivity of antilinear operators.
pub const UNITARY_TOL: f64 = 1e-12;

/// A linear operator on `H(L_max)`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    spec: HilbertSpec,
    mat: CMatrix,
}

impl LinearOperator {
    pub fn from_matrix(spec: HilbertSpec, mat: CMatrix) -> Result<Self> {
        if !mat.is_square() || mat.nrows() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                actual: mat.nrows(),
            });
        }
        Ok(LinearOperator { spec, mat })
    }

    pub fn zeros(spec: HilbertSpec) -> Self {
        LinearOperator {
            spec,
            mat: CMatrix::zeros(spec.dim(), spec.dim()),
        }
    }

    pub fn identity(spec: HilbertSpec) -> Self {
        LinearOperator {
            spec,
            mat: CMatrix::identity(spec.dim()),
        }
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    fn check_spec(&self, other: &LinearOperator) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec.l_max(),
                right: other.spec.l_max(),
            });
        }
        Ok(())
    }

    /// `self · other`.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check_spec(other)?;
        Ok(LinearOperator {
            spec: self.spec,
            mat: self.mat.matmul(&other.mat)?,
        })
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check_spec(other)?;
        Ok(LinearOperator {
            spec: self.spec,
            mat: self.mat.add(&other.mat)?,
        })
    }

    pub fn sub(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check_spec(other)?;
        Ok(LinearOperator {
            spec: self.spec,
            mat: self.mat.sub(&other.mat)?,
        })
    }

    /// `self += alpha · other`.
    pub fn axpy(&mut self, alpha: Complex64, other: &LinearOperator) -> Result<()> {
        self.check_spec(other)?;
        self.mat.axpy(alpha, &other.mat)
    }

    pub fn scale(&self, alpha: Complex64) -> LinearOperator {
        LinearOperator {
            spec: self.spec,
            mat: self.mat.scale(alpha),
        }
    }

    pub fn adjoint(&self) -> LinearOperator {
        LinearOperator {
            spec: self.spec,
            mat: self.mat.adjoint(),
        }
    }

    /// The compression `P X P` with `P` the projector onto levels `l ≤ cut`.
    pub fn compress(&self, cut: HalfInt) -> LinearOperator {
        let keep: Vec<bool> = self.spec.basis().iter().map(|b| b.l <= cut).collect();
        let mat = CMatrix::from_fn(self.mat.nrows(), self.mat.ncols(), |i, j| {
            if keep[i] && keep[j] {
                self.mat[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        LinearOperator {
            spec: self.spec,
            mat,
        }
    }

    /// Operator norm (largest singular value).
    pub fn norm(&self) -> Result<f64> {
        op_norm(&self.mat)
    }
}

/// `AB - BA`.
pub fn commutator(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator> {
    a.compose(b)?.sub(&b.compose(a)?)
}

/// `AB + BA`.
pub fn anticommutator(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator> {
    a.compose(b)?.add(&b.compose(a)?)
}

/// An antiunitary operator `v ↦ U · conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    spec: HilbertSpec,
    unitary: CMatrix,
}

impl AntilinearOperator {
    pub fn new(spec: HilbertSpec, unitary: CMatrix) -> Result<Self> {
        if !unitary.is_square() || unitary.nrows() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                actual: unitary.nrows(),
            });
        }
        let defect = unitary
            .matmul(&unitary.adjoint())?
            .sub(&CMatrix::identity(spec.dim()))?
            .frobenius_norm();
        if defect > UNITARY_TOL {
            return Err(Error::InvalidConfig(format!(
                "unitary part of antilinear operator has defect {defect:e}"
            )));
        }
        Ok(AntilinearOperator { spec, unitary })
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn unitary_part(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        self.unitary.mul_vec(&conj)
    }

    /// `J²` as a linear operator: `U · conj(U)`.
    pub fn square(&self) -> LinearOperator {
        LinearOperator {
            spec: self.spec,
            mat: self
                .unitary
                .matmul(&self.unitary.conj())
                .expect("square unitary"),
        }
    }
}

/// The linear operator `J A J⁻¹`, requiring `J² = -1`.
///
/// With `J = U ∘ conj` and `J⁻¹ = -J`, this is `U · conj(A) · U*`.
pub fn conjugate_by(j: &AntilinearOperator, a: &LinearOperator) -> Result<LinearOperator> {
    if j.spec != a.spec() {
        return Err(Error::SpecMismatch {
            left: j.spec.l_max(),
            right: a.spec().l_max(),
        });
    }
    let defect = j
        .square()
        .add(&LinearOperator::identity(j.spec))?
        .matrix()
        .frobenius_norm();
    if defect > UNITARY_TOL {
        return Err(Error::NotAntiInvolutive(defect));
    }
    let left = j.unitary.matmul(&a.matrix().conj())?;
    let mat = left.matmul(&j.unitary.adjoint())?;
    LinearOperator::from_matrix(j.spec, mat)
}
