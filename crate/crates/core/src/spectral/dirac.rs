//! Dirac operators `D |l,m⟩± = d_l |l,m⟩∓`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;
use crate::hilbert::HilbertSpec;
use crate::operators::{CMatrix, LinearOperator};
use crate::qcore::HalfInt;

/// The level profile `l ↦ d_l`.
#[derive(Debug, Clone, PartialEq)]
pub enum DiracProfile {
    /// `d_l = Σ c_i k^i` with `k = l + 1/2`.
    Polynomial(Vec<f64>),
    /// `d_l = (-1)^{2l} (l + 1/2) l`.
    Alternating,
}

impl DiracProfile {
    /// `d_l = l + 1/2`.
    pub fn standard() -> Self {
        DiracProfile::Polynomial(vec![0.0, 1.0])
    }

    /// `d_l = (l + 1/2)²`.
    pub fn square() -> Self {
        DiracProfile::Polynomial(vec![0.0, 0.0, 1.0])
    }

    pub fn eval(&self, l: HalfInt) -> f64 {
        let k = l.value() + 0.5;
        match self {
            DiracProfile::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * k + ci),
            DiracProfile::Alternating => {
                let sign = if l.twice() % 2 == 0 { 1.0 } else { -1.0 };
                sign * k * l.value()
            }
        }
    }
}

impl fmt::Display for DiracProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiracProfile::Alternating => f.write_str("alternating"),
            DiracProfile::Polynomial(c) if *c == [0.0, 1.0] => f.write_str("standard"),
            DiracProfile::Polynomial(c) if *c == [0.0, 0.0, 1.0] => f.write_str("square"),
            DiracProfile::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for DiracProfile {
    type Err = Error;

    /// `standard`, `square`, `alternating`, or `poly:c0,c1,...` with
    /// coefficients of powers of `l + 1/2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "standard" => Ok(Self::standard()),
            "square" => Ok(Self::square()),
            "alternating" => Ok(DiracProfile::Alternating),
            other => {
                let body = other.strip_prefix("poly:").ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "unknown D profile '{other}' (expected standard, square, alternating or poly:c0,c1,...)"
                    ))
                })?;
                let coeffs = body
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|e| {
                        Error::InvalidConfig(format!("bad coefficient in '{other}': {e}"))
                    })?;
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "bad coefficients in '{other}'"
                    )));
                }
                Ok(DiracProfile::Polynomial(coeffs))
            }
        }
    }
}

/// The copy-swapping operator with blocks `σ_x ⊗ d_l`.
pub fn build_dirac(spec: HilbertSpec, profile: &DiracProfile) -> LinearOperator {
    let n = spec.dim();
    let mut mat = CMatrix::zeros(n, n);
    for (col, idx) in spec.basis().iter().enumerate() {
        let row = spec
            .try_ordinal(idx.sign.flip(), idx.l, idx.m)
            .expect("both copies carry every level");
        mat[(row, col)] = Complex64::new(profile.eval(idx.l), 0.0);
    }
    LinearOperator::from_matrix(spec, mat).expect("sized from spec")
}
