//! The symmetry representation `ρ` of `U_q(su(2))` and the calibration that
//! fixes its conventions against the module action on the algebra.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::build_j;
use super::pi::{build_pi, IndexReading, PiOperators};
use crate::algebra::{AlgebraElement, Coproduct, Generator, HopfGenerator, PodlesAlgebra};
use crate::error::{Error, Result};
use crate::hilbert::HilbertSpec;
use crate::operators::{conjugate_by, AntilinearOperator, CMatrix, LinearOperator};
use crate::qcore::{half_int, q_number, HalfInt, QParam};

/// Residual below which a candidate convention is accepted.
pub const CALIBRATION_TOL: f64 = 1e-9;

/// Truncation used for calibration.
pub const CALIBRATION_L_MAX: HalfInt = half_int(7);

/// Which ladder operator lowers the weight `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Ladder {
    ELowers,
    ERaises,
}

/// Rescaling `ρ(e) → q^τ ρ(e)`, `ρ(f) → q^{-τ} ρ(f)`; leaves `[e, f]` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Twist {
    None,
    HalfUp,
    HalfDown,
}

impl Twist {
    fn exponent(self) -> f64 {
        match self {
            Twist::None => 0.0,
            Twist::HalfUp => 0.5,
            Twist::HalfDown => -0.5,
        }
    }
}

/// One point in the space of conventions for `ρ`. The antipode follows from
/// the coproduct: `S(k) = k⁻¹`, `S(h) = -k^s h k^{-s}` for
/// `Δh = h ⊗ k^s + k^{-s} ⊗ h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConventionCandidate {
    pub coproduct: Coproduct,
    pub ladder: Ladder,
    pub twist: Twist,
}

impl ConventionCandidate {
    pub fn id(&self) -> String {
        let coproduct = match self.coproduct {
            Coproduct::KRight => "k-right",
            Coproduct::KLeft => "k-left",
        };
        let ladder = match self.ladder {
            Ladder::ELowers => "e-lowers",
            Ladder::ERaises => "e-raises",
        };
        let twist = match self.twist {
            Twist::None => "0",
            Twist::HalfUp => "+1/2",
            Twist::HalfDown => "-1/2",
        };
        format!("coproduct={coproduct};antipode={coproduct};ladder={ladder};twist={twist}")
    }
}

impl fmt::Display for ConventionCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Both coproducts, both ladder orientations and three twists.
pub fn default_candidates() -> Vec<ConventionCandidate> {
    let mut out = Vec::new();
    for coproduct in [Coproduct::KRight, Coproduct::KLeft] {
        for ladder in [Ladder::ELowers, Ladder::ERaises] {
            for twist in [Twist::None, Twist::HalfUp, Twist::HalfDown] {
                out.push(ConventionCandidate {
                    coproduct,
                    ladder,
                    twist,
                });
            }
        }
    }
    out
}

/// The calibrated convention together with the residuals that selected it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConventionChoice {
    pub candidate: ConventionCandidate,
    /// `c` in the antiunitary `T = J ρ(k)^c` of the real-structure condition.
    pub t_power: i32,
    pub equivariance_residual: f64,
    pub j_residual: f64,
}

impl ConventionChoice {
    pub fn id(&self) -> String {
        format!("{};T=J·k^{}", self.candidate.id(), self.t_power)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoOperators {
    pub k: LinearOperator,
    pub k_inv: LinearOperator,
    pub e: LinearOperator,
    pub f: LinearOperator,
}

impl RhoOperators {
    pub fn generator(&self, h: HopfGenerator) -> &LinearOperator {
        match h {
            HopfGenerator::K => &self.k,
            HopfGenerator::KInv => &self.k_inv,
            HopfGenerator::E => &self.e,
            HopfGenerator::F => &self.f,
        }
    }

    /// `ρ(k)^p` for small integer `p`.
    pub fn k_power(&self, p: i32) -> LinearOperator {
        let base = if p >= 0 { &self.k } else { &self.k_inv };
        let mut out = LinearOperator::identity(self.k.spec());
        for _ in 0..p.abs() {
            out = out.compose(base).expect("same space");
        }
        out
    }

    /// `ρ(S h)` for the antipode matching `coproduct`.
    pub fn antipode(&self, h: HopfGenerator, coproduct: Coproduct) -> LinearOperator {
        let s = coproduct.k_power();
        match h {
            HopfGenerator::K => self.k_inv.clone(),
            HopfGenerator::KInv => self.k.clone(),
            HopfGenerator::E | HopfGenerator::F => self
                .k_power(s)
                .compose(self.generator(h))
                .and_then(|x| x.compose(&self.k_power(-s)))
                .expect("same space")
                .scale(Complex64::new(-1.0, 0.0)),
        }
    }
}

/// `ρ` on `H(L_max)`: block diagonal over levels, identical on both copies.
pub fn build_rho(spec: HilbertSpec, q: QParam, candidate: &ConventionCandidate) -> RhoOperators {
    let n = spec.dim();
    let basis = spec.basis();
    let qn = |k: i32| q_number(k, q);
    let tau = candidate.twist.exponent();
    let k = CMatrix::from_real_diag(&basis.iter().map(|b| q.pow(b.m)).collect::<Vec<_>>());
    let k_inv = CMatrix::from_real_diag(&basis.iter().map(|b| q.pow(-b.m)).collect::<Vec<_>>());
    let mut lower = CMatrix::zeros(n, n);
    let mut raise = CMatrix::zeros(n, n);
    for (col, idx) in basis.iter().enumerate() {
        let lpm = (idx.l.twice() + idx.m.twice()) / 2;
        let lmm = (idx.l.twice() - idx.m.twice()) / 2;
        if let Some(row) = spec.try_ordinal(idx.sign, idx.l, idx.m - HalfInt::ONE) {
            lower[(row, col)] = Complex64::new((qn(lpm) * qn(lmm + 1)).sqrt(), 0.0);
        }
        if let Some(row) = spec.try_ordinal(idx.sign, idx.l, idx.m + HalfInt::ONE) {
            raise[(row, col)] = Complex64::new((qn(lmm) * qn(lpm + 1)).sqrt(), 0.0);
        }
    }
    let (e, f) = match candidate.ladder {
        Ladder::ELowers => (lower, raise),
        Ladder::ERaises => (raise, lower),
    };
    let qv = q.get();
    let wrap = |m: CMatrix| LinearOperator::from_matrix(spec, m).expect("sized from spec");
    RhoOperators {
        k: wrap(k),
        k_inv: wrap(k_inv),
        e: wrap(e.scale(Complex64::new(qv.powf(tau), 0.0))),
        f: wrap(f.scale(Complex64::new(qv.powf(-tau), 0.0))),
    }
}

/// Residual of `ρ(h) π(x) = π(h₍₁₎ ▷ x) ρ(h₍₂₎)` on the compression to
/// `l ≤ cut`, for `h ∈ {k, e, f}` and `x ∈ {a, a*, b}`, in that order.
pub fn equivariance_residuals(
    pi: &PiOperators,
    rho: &RhoOperators,
    algebra: &PodlesAlgebra,
    coproduct: Coproduct,
    cut: HalfInt,
) -> Result<Vec<(HopfGenerator, Generator, f64)>> {
    let s = coproduct.k_power();
    let k_s = rho.k_power(s);
    let mut out = Vec::new();
    for h in [HopfGenerator::K, HopfGenerator::E, HopfGenerator::F] {
        for g in Generator::ALL {
            let x = AlgebraElement::generator(g);
            let lhs = rho.generator(h).compose(pi.generator(g))?;
            let rhs = match h {
                HopfGenerator::K => pi
                    .represent(&algebra.module_action(h, &x, coproduct))?
                    .compose(&rho.k)?,
                _ => {
                    let head = pi
                        .represent(&algebra.module_action(h, &x, coproduct))?
                        .compose(&k_s)?;
                    let k_tail = if s > 0 {
                        HopfGenerator::KInv
                    } else {
                        HopfGenerator::K
                    };
                    let tail = pi
                        .represent(&algebra.module_action(k_tail, &x, coproduct))?
                        .compose(rho.generator(h))?;
                    head.add(&tail)?
                }
            };
            let residual = lhs.sub(&rhs)?.compress(cut).norm()?;
            out.push((h, g, residual));
        }
    }
    Ok(out)
}

/// Relative residual of `ρ(h) T = T ρ(S h)*` with `T = J ρ(k)^c`, per `h`.
pub fn j_equivariance_residuals(
    rho: &RhoOperators,
    j: &AntilinearOperator,
    coproduct: Coproduct,
    c: i32,
) -> Result<Vec<(HopfGenerator, f64)>> {
    let kc = rho.k_power(c);
    let kmc = rho.k_power(-c);
    let mut out = Vec::new();
    for h in [HopfGenerator::K, HopfGenerator::E, HopfGenerator::F] {
        let inner = kc
            .compose(&rho.antipode(h, coproduct).adjoint())?
            .compose(&kmc)?;
        let rhs = conjugate_by(j, &inner)?;
        let lhs = rho.generator(h);
        let scale = lhs.norm()?.max(1.0);
        out.push((h, lhs.sub(&rhs)?.norm()? / scale));
    }
    Ok(out)
}

fn max_residual<T>(items: &[(T, f64)]) -> f64 {
    items.iter().map(|x| x.1).fold(0.0, f64::max)
}

struct Scored {
    candidate: ConventionCandidate,
    equivariance: f64,
    /// Best `(c, residual)` over the scanned powers.
    j: (i32, f64),
    j_passing: Vec<i32>,
}

/// Selects the unique candidate satisfying both the equivariance identity and
/// the real-structure condition to `tol`, on a truncation at
/// [`CALIBRATION_L_MAX`] with the corrected `π`.
pub fn calibrate_conventions(
    q: QParam,
    candidates: &[ConventionCandidate],
    tol: f64,
) -> Result<ConventionChoice> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let spec = HilbertSpec::new(CALIBRATION_L_MAX)?;
    let pi = build_pi(spec, q, IndexReading::Corrected);
    let algebra = PodlesAlgebra::new(q);
    let j = build_j(spec)?;
    let cut = spec.l_max() - HalfInt::ONE;

    let mut scored = Vec::new();
    for candidate in candidates {
        let rho = build_rho(spec, q, candidate);
        let eq = equivariance_residuals(&pi, &rho, &algebra, candidate.coproduct, cut)?;
        let equivariance = eq.iter().map(|x| x.2).fold(0.0, f64::max);
        let mut best = (0, f64::INFINITY);
        let mut j_passing = Vec::new();
        for c in [-1, 0, 1] {
            let r = max_residual(&j_equivariance_residuals(&rho, &j, candidate.coproduct, c)?);
            if r < tol {
                j_passing.push(c);
            }
            if r < best.1 {
                best = (c, r);
            }
        }
        scored.push(Scored {
            candidate: *candidate,
            equivariance,
            j: best,
            j_passing,
        });
    }

    let passing: Vec<&Scored> = scored
        .iter()
        .filter(|s| s.equivariance < tol && !s.j_passing.is_empty())
        .collect();
    match passing.as_slice() {
        [] => Err(Error::NoConvention(
            scored
                .iter()
                .map(|s| {
                    format!(
                        "{} (equivariance {:.3e}, real structure {:.3e})",
                        s.candidate, s.equivariance, s.j.1
                    )
                })
                .collect::<Vec<_>>()
                .join("; "),
        )),
        [one] if one.j_passing.len() == 1 => Ok(ConventionChoice {
            candidate: one.candidate,
            t_power: one.j_passing[0],
            equivariance_residual: one.equivariance,
            j_residual: one.j.1,
        }),
        many => Err(Error::AmbiguousConvention(
            many.iter()
                .map(|s| format!("{} with T = J·k^c for c in {:?}", s.candidate, s.j_passing))
                .collect::<Vec<_>>()
                .join("; "),
        )),
    }
}
