//! Finite truncations of the `U_q(su(2))`-equivariant spectral geometry of the
//! equatorial quantum sphere, together with the numerical suites that check
//! its properties.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: half-integer labels and q-numbers,
//! - [`hilbert`]: the truncated space `H(L) = ⊕ V_l ⊗ {+,-}` and its basis order,
//! - [`operators`]: dense complex linear algebra, norms, block decay fits,
//! - [`algebra`]: words in `a, a*, b`, normal ordering and the Hopf module action,
//! - [`spectral`]: the representations, symmetry, real structure and Dirac operator,
//! - [`axioms`]: the verification suites and their reports.

pub mod algebra;
pub mod axioms;
pub mod error;
pub mod hilbert;
pub mod operators;
pub mod qcore;
pub mod spectral;

pub use error::{Error, Result};
pub use hilbert::{BasisIndex, HilbertSpec, Sign};
pub use operators::{AntilinearOperator, CMatrix, DecayFit, LinearOperator};
pub use qcore::{q_number, HalfInt, QParam};
