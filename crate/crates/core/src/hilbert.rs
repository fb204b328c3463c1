//! The truncated Hilbert space `H(L) = ⊕_{l=1/2}^{L} V_l ⊗ {+, -}`.
//!
//! Basis order is frozen: all `+` vectors first, then all `-` vectors; within
//! each copy ascending `l`, and within each level ascending `m`. Operator
//! matrices and reports depend on this order, so it must not change.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{CMatrix, LinearOperator};
use crate::qcore::{is_valid_pair, HalfInt, QParam};

/// Which of the two copies of `H_h` a vector lives in; the eigenvalue of the
/// grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The basis vector `|l, m⟩±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub sign: Sign,
    pub l: HalfInt,
    pub m: HalfInt,
}

impl BasisIndex {
    pub fn new(sign: Sign, l: HalfInt, m: HalfInt) -> Result<Self> {
        l.validate_pairing(m)?;
        Ok(BasisIndex { sign, l, m })
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}⟩{}", self.l, self.m, self.sign)
    }
}

/// Number of basis vectors of one copy below level `l` (`l` given doubled).
fn states_below(l_twice: i32) -> usize {
    let n = ((l_twice - 1) / 2) as usize;
    n * (n + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertSpec {
    l_max: HalfInt,
}

impl HilbertSpec {
    pub fn new(l_max: HalfInt) -> Result<Self> {
        l_max.validate_spin()?;
        Ok(HilbertSpec { l_max })
    }

    pub fn l_max(&self) -> HalfInt {
        self.l_max
    }

    /// Levels `1/2, 3/2, ..., L_max` in ascending order.
    pub fn levels(&self) -> Vec<HalfInt> {
        (1..=self.l_max.twice())
            .step_by(2)
            .map(HalfInt::from_twice)
            .collect()
    }

    pub fn contains_level(&self, l: HalfInt) -> bool {
        l.twice() >= 1 && l.twice() % 2 == 1 && l <= self.l_max
    }

    /// Dimension of one copy `H_h(L_max)`.
    pub fn half_dim(&self) -> usize {
        states_below(self.l_max.twice() + 2)
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim()
    }

    pub fn contains(&self, idx: &BasisIndex) -> bool {
        self.contains_level(idx.l) && is_valid_pair(idx.l, idx.m)
    }

    pub fn ordinal(&self, idx: &BasisIndex) -> Result<usize> {
        if !self.contains(idx) {
            return Err(Error::OutOfRange { l_max: self.l_max });
        }
        Ok(self.ordinal_unchecked(idx.sign, idx.l, idx.m))
    }

    /// Ordinal of `(sign, l, m)`, or `None` when the triple is outside the
    /// truncation or not a valid pairing.
    pub fn try_ordinal(&self, sign: Sign, l: HalfInt, m: HalfInt) -> Option<usize> {
        (self.contains_level(l) && is_valid_pair(l, m)).then(|| self.ordinal_unchecked(sign, l, m))
    }

    fn ordinal_unchecked(&self, sign: Sign, l: HalfInt, m: HalfInt) -> usize {
        let copy = match sign {
            Sign::Plus => 0,
            Sign::Minus => self.half_dim(),
        };
        copy + states_below(l.twice()) + ((m.twice() + l.twice()) / 2) as usize
    }

    /// Inverse of [`HilbertSpec::ordinal`].
    pub fn basis_index(&self, ordinal: usize) -> Result<BasisIndex> {
        if ordinal >= self.dim() {
            return Err(Error::OutOfRange { l_max: self.l_max });
        }
        let half = self.half_dim();
        let (sign, mut rest) = if ordinal < half {
            (Sign::Plus, ordinal)
        } else {
            (Sign::Minus, ordinal - half)
        };
        let mut l_twice = 1;
        while rest >= (l_twice + 1) as usize {
            rest -= (l_twice + 1) as usize;
            l_twice += 2;
        }
        let m_twice = 2 * rest as i32 - l_twice;
        Ok(BasisIndex {
            sign,
            l: HalfInt::from_twice(l_twice),
            m: HalfInt::from_twice(m_twice),
        })
    }

    /// All basis vectors in ordinal order.
    pub fn basis(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.dim());
        for sign in [Sign::Plus, Sign::Minus] {
            for l in self.levels() {
                for m_twice in (-l.twice()..=l.twice()).step_by(2) {
                    out.push(BasisIndex {
                        sign,
                        l,
                        m: HalfInt::from_twice(m_twice),
                    });
                }
            }
        }
        out
    }

    /// Ordinals of level `l` in both copies, ascending.
    pub fn level_ordinals(&self, l: HalfInt) -> Vec<usize> {
        if !self.contains_level(l) {
            return Vec::new();
        }
        let width = (l.twice() + 1) as usize;
        let start = states_below(l.twice());
        let half = self.half_dim();
        (start..start + width)
            .chain(half + start..half + start + width)
            .collect()
    }

    fn diagonal(&self, f: impl Fn(&BasisIndex) -> f64) -> LinearOperator {
        let diag: Vec<f64> = self.basis().iter().map(f).collect();
        LinearOperator::from_matrix(*self, CMatrix::from_real_diag(&diag))
            .expect("diagonal has the space dimension")
    }

    /// The grading `γ = id ⊕ (-id)`.
    pub fn grading(&self) -> LinearOperator {
        self.diagonal(|b| b.sign.as_f64())
    }

    /// Orthogonal projector onto the selected levels in both copies.
    pub fn level_projector(&self, levels: &[HalfInt]) -> LinearOperator {
        self.diagonal(|b| if levels.contains(&b.l) { 1.0 } else { 0.0 })
    }

    /// Projector onto all levels `l ≤ cut`.
    pub fn projector_below(&self, cut: HalfInt) -> LinearOperator {
        self.diagonal(|b| if b.l <= cut { 1.0 } else { 0.0 })
    }

    /// `L_q |l,m⟩± = q^l |l,m⟩±`.
    pub fn lq_operator(&self, q: QParam) -> LinearOperator {
        self.diagonal(|b| q.pow(b.l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::op_norm;
    use crate::qcore::half_int;

    fn spec(twice: i32) -> HilbertSpec {
        HilbertSpec::new(half_int(twice)).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(spec(1).dim(), 4);
        assert_eq!(spec(3).dim(), 12);
        assert_eq!(spec(21).dim(), 264);
        assert_eq!(spec(41).dim(), 924);
        assert!(HilbertSpec::new(half_int(4)).is_err());
    }

    #[test]
    fn first_ordinal() {
        let s = spec(1);
        let idx = BasisIndex::new(Sign::Plus, half_int(1), half_int(-1)).unwrap();
        assert_eq!(s.ordinal(&idx).unwrap(), 0);
        let out = BasisIndex {
            sign: Sign::Plus,
            l: half_int(3),
            m: half_int(1),
        };
        assert!(s.ordinal(&out).is_err());
        assert!(s.basis_index(4).is_err());
    }

    #[test]
    fn ordinal_round_trip() {
        for twice in [1, 3, 21, 41] {
            let s = spec(twice);
            let basis = s.basis();
            assert_eq!(basis.len(), s.dim());
            for (k, b) in basis.iter().enumerate() {
                assert_eq!(s.ordinal(b).unwrap(), k);
                assert_eq!(s.basis_index(k).unwrap(), *b);
            }
        }
    }

    #[test]
    fn grading_properties() {
        let s = spec(5);
        let g = s.grading();
        let plus = s
            .ordinal(&BasisIndex::new(Sign::Plus, half_int(1), half_int(1)).unwrap())
            .unwrap();
        let minus = s
            .ordinal(&BasisIndex::new(Sign::Minus, half_int(1), half_int(1)).unwrap())
            .unwrap();
        assert_eq!(g.matrix()[(plus, plus)].re, 1.0);
        assert_eq!(g.matrix()[(minus, minus)].re, -1.0);
        assert_eq!(g.matrix().trace().norm(), 0.0);
        let g2 = g.compose(&g).unwrap();
        assert_eq!(g2.matrix(), &CMatrix::identity(s.dim()));
        assert_eq!(g.matrix(), &g.matrix().adjoint());
    }

    #[test]
    fn projectors() {
        let s = spec(3);
        let all = s.level_projector(&s.levels());
        assert_eq!(all.matrix(), &CMatrix::identity(s.dim()));
        assert!(s.level_projector(&[]).matrix().is_zero());
        let p = s.level_projector(&[half_int(1)]);
        assert_eq!(p.matrix().trace().re, 4.0);
        assert_eq!(p.compose(&p).unwrap(), p);

        let s = spec(9);
        let mut sum = CMatrix::zeros(s.dim(), s.dim());
        for l in s.levels() {
            sum = sum.add(s.level_projector(&[l]).matrix()).unwrap();
        }
        assert_eq!(sum, CMatrix::identity(s.dim()));
        assert_eq!(s.level_ordinals(half_int(3)).len(), 8);
    }

    #[test]
    fn lq_entries() {
        let s = spec(3);
        let q = QParam::new(0.25).unwrap();
        let lq = s.lq_operator(q);
        let i = s
            .ordinal(&BasisIndex::new(Sign::Minus, half_int(3), half_int(-1)).unwrap())
            .unwrap();
        assert!((lq.matrix()[(i, i)].re - 0.125).abs() < 1e-15);
        let j = s
            .ordinal(&BasisIndex::new(Sign::Plus, half_int(1), half_int(1)).unwrap())
            .unwrap();
        assert!((lq.matrix()[(j, j)].re - 0.5).abs() < 1e-15);
        assert!((op_norm(lq.matrix()).unwrap() - 0.5).abs() < 1e-12);
    }
}
