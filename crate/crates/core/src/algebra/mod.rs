//! Symbolic layer for the quantum sphere algebra generated by `a`, `a*` and
//! `b = b*` with
//!
//! ```text
//! b a = q² a b,   a* b = q² b a*,   a* a + b² = 1,   q² a a* + q⁻² b² = q².
//! ```
//!
//! Elements are finite complex combinations of words. The normal form keeps
//! powers of `b` on the left and never mixes `a` with `a*`, so every normal
//! word is `b^k a^n` or `b^k (a*)^n`.

mod action;
mod parse;

pub use action::{Coproduct, HopfGenerator};
pub use parse::parse_element;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::QParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    A,
    AStar,
    B,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::A, Generator::AStar, Generator::B];

    /// Weight under `k`: `k ▷ x = q^{weight} x`.
    pub fn weight(self) -> i32 {
        match self {
            Generator::A => 1,
            Generator::AStar => -1,
            Generator::B => 0,
        }
    }

    pub fn star(self) -> Generator {
        match self {
            Generator::A => Generator::AStar,
            Generator::AStar => Generator::A,
            Generator::B => Generator::B,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::A => "a",
            Generator::AStar => "a^*",
            Generator::B => "b",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Word = Vec<Generator>;

fn word_weight(word: &[Generator]) -> i32 {
    word.iter().map(|g| g.weight()).sum()
}

/// A finite complex combination of words. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, Complex64>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::monomial(c, Vec::new())
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), vec![g])
    }

    pub fn monomial(c: Complex64, word: Word) -> Self {
        let mut x = Self::zero();
        x.add_term(word, c);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Complex64)>) -> Self {
        let mut x = Self::zero();
        for (w, c) in terms {
            x.add_term(w, c);
        }
        x
    }

    pub fn add_term(&mut self, word: Word, c: Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        match self.terms.entry(word) {
            Entry::Vacant(slot) => {
                if c != zero {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == zero {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[Generator]) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    /// Longest word length.
    pub fn word_length(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Largest coefficient modulus, 0 for the zero element.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, alpha: Complex64) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(w, &c)| (w.clone(), alpha * c)))
    }

    /// Formal product by word concatenation, without rewriting.
    pub fn concat(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (wx, &cx) in &self.terms {
            for (wy, &cy) in &other.terms {
                let mut w = wx.clone();
                w.extend_from_slice(wy);
                out.add_term(w, cx * cy);
            }
        }
        out
    }

    /// Formal star: reverse each word, swap `a ↔ a*`, conjugate coefficients.
    pub fn star_formal(&self) -> AlgebraElement {
        AlgebraElement::from_terms(
            self.terms
                .iter()
                .map(|(w, c)| (w.iter().rev().map(|g| g.star()).collect(), c.conj())),
        )
    }

    /// Whether every word is already `b^k a^n` or `b^k (a*)^n`.
    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|w| first_reducible(w).is_none())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for g in w {
                write!(f, "*{g}")?;
            }
        }
        Ok(())
    }
}

/// Position of the first adjacent pair a rewriting rule applies to.
fn first_reducible(word: &[Generator]) -> Option<usize> {
    use Generator::*;
    word.windows(2)
        .position(|p| matches!((p[0], p[1]), (A, B) | (AStar, B) | (AStar, A) | (A, AStar)))
}

/// The algebra at a fixed numerical `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PodlesAlgebra {
    q: QParam,
}

impl PodlesAlgebra {
    pub fn new(q: QParam) -> Self {
        PodlesAlgebra { q }
    }

    pub fn q(&self) -> QParam {
        self.q
    }

    /// Rewrites every word into `b^k a^n` / `b^k (a*)^n` form using
    ///
    /// ```text
    /// a b   → q⁻² b a
    /// a* b  → q² b a*
    /// a* a  → 1 - b²
    /// a a*  → 1 - q⁻⁴ b²
    /// ```
    pub fn normal_form(&self, x: &AlgebraElement) -> AlgebraElement {
        use Generator::*;
        let q2 = self.q.get().powi(2);
        let mut out = AlgebraElement::zero();
        let mut stack: Vec<(Word, Complex64)> =
            x.terms.iter().map(|(w, &c)| (w.clone(), c)).collect();
        while let Some((word, c)) = stack.pop() {
            let Some(i) = first_reducible(&word) else {
                out.add_term(word, c);
                continue;
            };
            let splice = |middle: &[Generator]| {
                let mut w = word[..i].to_vec();
                w.extend_from_slice(middle);
                w.extend_from_slice(&word[i + 2..]);
                w
            };
            match (word[i], word[i + 1]) {
                (A, B) => stack.push((splice(&[B, A]), c / q2)),
                (AStar, B) => stack.push((splice(&[B, AStar]), c * q2)),
                (AStar, A) => {
                    stack.push((splice(&[]), c));
                    stack.push((splice(&[B, B]), -c));
                }
                (A, AStar) => {
                    stack.push((splice(&[]), c));
                    stack.push((splice(&[B, B]), -c / (q2 * q2)));
                }
                _ => unreachable!("first_reducible only reports rewritable pairs"),
            }
        }
        out
    }

    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.normal_form(&x.concat(y))
    }

    pub fn star(&self, x: &AlgebraElement) -> AlgebraElement {
        self.normal_form(&x.star_formal())
    }

    /// Evaluates `x` at the classical point `a ↦ λ, a* ↦ λ̄, b ↦ 0`.
    pub fn classical_point_eval(&self, x: &AlgebraElement, lambda: Complex64) -> Result<Complex64> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "classical points need |λ| = 1, got |λ| = {}",
                lambda.norm()
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, &c) in self.normal_form(x).terms() {
            if w.contains(&Generator::B) {
                continue;
            }
            let value: Complex64 = w
                .iter()
                .map(|g| match g {
                    Generator::A => lambda,
                    _ => lambda.conj(),
                })
                .product();
            acc += c * value;
        }
        Ok(acc)
    }

    /// The four defining relations as elements that must vanish.
    pub fn relations(&self) -> [AlgebraElement; 4] {
        use Generator::*;
        let q2 = Complex64::new(self.q.get().powi(2), 0.0);
        let one = Complex64::new(1.0, 0.0);
        [
            AlgebraElement::from_terms([(vec![B, A], one), (vec![A, B], -q2)]),
            AlgebraElement::from_terms([(vec![AStar, B], one), (vec![B, AStar], -q2)]),
            AlgebraElement::from_terms([(vec![AStar, A], one), (vec![B, B], one), (vec![], -one)]),
            AlgebraElement::from_terms([
                (vec![A, AStar], q2),
                (vec![B, B], one / q2),
                (vec![], -q2),
            ]),
        ]
    }
}

/// A random element with `1..=max_terms` terms, each a word of length
/// `1..=max_len` with coefficients uniform in the unit square.
pub fn random_element<R: Rng + ?Sized>(
    rng: &mut R,
    max_terms: usize,
    max_len: usize,
) -> AlgebraElement {
    let mut x = AlgebraElement::zero();
    let terms = rng.random_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let len = rng.random_range(1..=max_len.max(1));
        let word: Word = (0..len)
            .map(|_| Generator::ALL[rng.random_range(0..3)])
            .collect();
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        x.add_term(word, c);
    }
    x
}
