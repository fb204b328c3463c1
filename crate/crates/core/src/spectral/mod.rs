//! Concrete spectral data on `H(L_max)`: the representation `π = π₊ ⊕ π₋`,
//! the symmetry `ρ`, the real structure `J`, the grading and the Dirac
//! operator.

mod dirac;
mod pi;
mod rho;

pub use dirac::{build_dirac, DiracProfile};
pub use pi::{build_pi, build_pi_branch, BranchMatrices, IndexReading, PiOperators};
pub use rho::{
    build_rho, calibrate_conventions, default_candidates, equivariance_residuals,
    j_equivariance_residuals, ConventionCandidate, ConventionChoice, Ladder, RhoOperators, Twist,
    CALIBRATION_L_MAX, CALIBRATION_TOL,
};

use num_complex::Complex64;

use crate::algebra::PodlesAlgebra;
use crate::error::Result;
use crate::hilbert::{HilbertSpec, Sign};
use crate::operators::{eig_hermitian, AntilinearOperator, CMatrix, LinearOperator};
use crate::qcore::QParam;

/// `J |l,m⟩± = i^{2m} |l,-m⟩∓`, composed with complex conjugation.
pub fn build_j(spec: HilbertSpec) -> Result<AntilinearOperator> {
    let n = spec.dim();
    let mut u = CMatrix::zeros(n, n);
    for (col, idx) in spec.basis().iter().enumerate() {
        let row = spec
            .try_ordinal(idx.sign.flip(), idx.l, -idx.m)
            .expect("mirror vector lies in the same level");
        // i^{2m}, looked up exactly from 2m mod 4
        let phase = match idx.m.twice().rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        u[(row, col)] = phase;
    }
    AntilinearOperator::new(spec, u)
}

/// Everything the verification suites consume, built once per `(L_max, q)`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub spec: HilbertSpec,
    pub q: QParam,
    pub reading: IndexReading,
    pub pi: PiOperators,
    pub rho: RhoOperators,
    pub j: AntilinearOperator,
    pub gamma: LinearOperator,
    pub dirac: LinearOperator,
    pub profile: DiracProfile,
    pub convention: ConventionChoice,
}

impl SpectralData {
    /// Builds the data under an already calibrated convention.
    pub fn new(
        spec: HilbertSpec,
        q: QParam,
        profile: DiracProfile,
        reading: IndexReading,
        convention: ConventionChoice,
    ) -> Result<Self> {
        Ok(SpectralData {
            spec,
            q,
            reading,
            pi: build_pi(spec, q, reading),
            rho: build_rho(spec, q, &convention.candidate),
            j: build_j(spec)?,
            gamma: spec.grading(),
            dirac: build_dirac(spec, &profile),
            profile,
            convention,
        })
    }

    /// Calibrates against the default candidate set, then builds.
    pub fn calibrated(
        spec: HilbertSpec,
        q: QParam,
        profile: DiracProfile,
        reading: IndexReading,
    ) -> Result<Self> {
        let convention = calibrate_conventions(q, &default_candidates(), CALIBRATION_TOL)?;
        Self::new(spec, q, profile, reading, convention)
    }

    pub fn algebra(&self) -> PodlesAlgebra {
        PodlesAlgebra::new(self.q)
    }
}

/// Dimension of the commutant of `{π₊(a), π₊(a*), π₊(b)}` on one copy: the
/// number of (relatively) zero eigenvalues of `Σ_T ad_T* ad_T`, where
/// `ad_T X = T X - X T` acts on `n × n` matrices `X`.
pub fn commutant_dimension(spec: HilbertSpec, q: QParam, rel_tol: f64) -> Result<usize> {
    let branch = build_pi_branch(spec, q, Sign::Plus, IndexReading::Corrected);
    let n = spec.half_dim();
    let nn = n * n;
    let mut gram = CMatrix::zeros(nn, nn);
    for t in [branch.a.clone(), branch.a.adjoint(), branch.b.clone()] {
        // vec(T X - X T) = (I ⊗ T - Tᵀ ⊗ I) vec(X) with column-major vec
        let ad = CMatrix::from_fn(nn, nn, |row, col| {
            let (i, j) = (row % n, row / n);
            let (k, l) = (col % n, col / n);
            let mut v = Complex64::new(0.0, 0.0);
            if j == l {
                v += t[(i, k)];
            }
            if i == k {
                v -= t[(l, j)];
            }
            v
        });
        gram.axpy(Complex64::new(1.0, 0.0), &ad.adjoint().matmul(&ad)?)?;
    }
    let eig = eig_hermitian(&gram)?;
    let top = eig.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    Ok(eig.iter().filter(|&&x| x.abs() <= rel_tol * top).count())
}
