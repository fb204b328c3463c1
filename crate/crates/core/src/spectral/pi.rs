//! The representations `π±` of the sphere algebra on `H_h(L_max)`.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, Generator};
use crate::error::Result;
use crate::hilbert::{HilbertSpec, Sign};
use crate::operators::{CMatrix, LinearOperator};
use crate::qcore::{q_number, HalfInt, QParam};

/// Which level-lowering target the third term of `π(a)` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IndexReading {
    /// `|l-1, m+1⟩`, the target forced by the weight of `a`.
    #[default]
    Corrected,
    /// `|l-1, m⟩`, kept to show that it breaks the algebra relations.
    PaperLiteral,
}

impl IndexReading {
    pub fn id(self) -> &'static str {
        match self {
            IndexReading::Corrected => "corrected",
            IndexReading::PaperLiteral => "paper-literal",
        }
    }
}

/// `π±(a)` and `π±(b)` on one copy, indexed by the single-copy ordinals.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchMatrices {
    pub a: CMatrix,
    pub b: CMatrix,
}

/// Builds `π_branch(a)` and `π_branch(b)` on `H_h(L_max)`. Terms whose
/// target lies above `L_max` are dropped.
pub fn build_pi_branch(
    spec: HilbertSpec,
    q: QParam,
    branch: Sign,
    reading: IndexReading,
) -> BranchMatrices {
    let n = spec.half_dim();
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, n);
    let qv = q.get();
    let s = branch.as_f64();
    let qn = |k: i32| q_number(k, q);
    let root = |x: f64| x.max(0.0).sqrt();

    for (col, idx) in spec.basis().into_iter().take(n).enumerate() {
        let (l, m) = (idx.l, idx.m);
        let l2 = l.twice();
        let lpm = (l.twice() + m.twice()) / 2;
        let lmm = (l.twice() - m.twice()) / 2;
        let mv = m.value();
        let lv = l.value();
        let put = |mat: &mut CMatrix, target_l: HalfInt, target_m: HalfInt, c: f64| {
            if let Some(row) = spec.try_ordinal(Sign::Plus, target_l, target_m) {
                mat[(row, col)] += Complex64::new(c, 0.0);
            }
        };
        let up = l + HalfInt::ONE;
        let down = l - HalfInt::ONE;
        let m_up = m + HalfInt::ONE;

        let same = s * (1.0 + qv * qv) * qv.powf(mv - 0.5) / (qn(l2) * qn(l2 + 2))
            * root(qn(lpm + 1) * qn(lmm));
        put(&mut a, l, m_up, same);
        let raise = qv.powf(mv - lv - 0.5) / qn(l2 + 2) * root(qn(lpm + 1) * qn(lpm + 2));
        put(&mut a, up, m_up, raise);
        if down.twice() > 0 {
            let lower = -qv.powf(mv + lv + 0.5) / qn(l2) * root(qn(lmm) * qn(lmm - 1));
            let target_m = match reading {
                IndexReading::Corrected => m_up,
                IndexReading::PaperLiteral => m,
            };
            put(&mut a, down, target_m, lower);
        }

        let diag =
            s * (qn(lmm + 1) * qn(lpm) - qv * qv * qn(lmm) * qn(lpm + 1)) / (qn(l2) * qn(l2 + 2));
        put(&mut b, l, m, diag);
        let b_up = -qv.powf(mv + 1.0) / qn(l2 + 2) * root(qn(lmm + 1) * qn(lpm + 1));
        put(&mut b, up, m, b_up);
        if down.twice() > 0 {
            let b_down = -qv.powf(mv + 1.0) / qn(l2) * root(qn(lmm) * qn(lpm));
            put(&mut b, down, m, b_down);
        }
    }
    BranchMatrices { a, b }
}

/// `π = π₊ ⊕ π₋` on the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PiOperators {
    pub a: LinearOperator,
    pub a_star: LinearOperator,
    pub b: LinearOperator,
}

fn block_diagonal(spec: HilbertSpec, plus: &CMatrix, minus: &CMatrix) -> LinearOperator {
    let h = spec.half_dim();
    let mat = CMatrix::from_fn(spec.dim(), spec.dim(), |i, j| match (i < h, j < h) {
        (true, true) => plus[(i, j)],
        (false, false) => minus[(i - h, j - h)],
        _ => Complex64::new(0.0, 0.0),
    });
    LinearOperator::from_matrix(spec, mat).expect("blocks sized from spec")
}

pub fn build_pi(spec: HilbertSpec, q: QParam, reading: IndexReading) -> PiOperators {
    let plus = build_pi_branch(spec, q, Sign::Plus, reading);
    let minus = build_pi_branch(spec, q, Sign::Minus, reading);
    let a = block_diagonal(spec, &plus.a, &minus.a);
    let b = block_diagonal(spec, &plus.b, &minus.b);
    PiOperators {
        a_star: a.adjoint(),
        a,
        b,
    }
}

impl PiOperators {
    pub fn generator(&self, g: Generator) -> &LinearOperator {
        match g {
            Generator::A => &self.a,
            Generator::AStar => &self.a_star,
            Generator::B => &self.b,
        }
    }

    /// `π(x)` for an element given as a combination of words.
    pub fn represent(&self, x: &AlgebraElement) -> Result<LinearOperator> {
        let spec = self.a.spec();
        let mut out = LinearOperator::zeros(spec);
        for (word, &c) in x.terms() {
            let mut product: Option<LinearOperator> = None;
            for &g in word {
                let op = self.generator(g);
                product = Some(match product {
                    None => op.clone(),
                    Some(p) => p.compose(op)?,
                });
            }
            let product = product.unwrap_or_else(|| LinearOperator::identity(spec));
            out.axpy(c, &product)?;
        }
        Ok(out)
    }
}
