//! Left action of the quantum enveloping algebra on the sphere algebra.

use num_complex::Complex64;

use super::{word_weight, AlgebraElement, Generator, PodlesAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HopfGenerator {
    K,
    KInv,
    E,
    F,
}

impl HopfGenerator {
    pub const ALL: [HopfGenerator; 4] = [
        HopfGenerator::K,
        HopfGenerator::KInv,
        HopfGenerator::E,
        HopfGenerator::F,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HopfGenerator::K => "k",
            HopfGenerator::KInv => "k^-1",
            HopfGenerator::E => "e",
            HopfGenerator::F => "f",
        }
    }
}

/// How `e` and `f` distribute over products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coproduct {
    /// `Δh = h ⊗ k + k⁻¹ ⊗ h`
    KRight,
    /// `Δh = h ⊗ k⁻¹ + k ⊗ h`
    KLeft,
}

impl Coproduct {
    /// The power `s` with `Δh = h ⊗ k^s + k^{-s} ⊗ h`.
    pub fn k_power(self) -> i32 {
        match self {
            Coproduct::KRight => 1,
            Coproduct::KLeft => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coproduct::KRight => "h⊗k+k⁻¹⊗h",
            Coproduct::KLeft => "h⊗k⁻¹+k⊗h",
        }
    }
}

impl PodlesAlgebra {
    /// `h ▷ x`, in normal form.
    pub fn module_action(
        &self,
        h: HopfGenerator,
        x: &AlgebraElement,
        coproduct: Coproduct,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, &c) in x.terms() {
            out = out.add(&self.act_on_word(h, w, coproduct).scale(c));
        }
        self.normal_form(&out)
    }

    fn k_power_on_word(&self, power: i32, word: &[Generator]) -> AlgebraElement {
        let factor = self.q.get().powi(power * word_weight(word));
        AlgebraElement::monomial(Complex64::new(factor, 0.0), word.to_vec())
    }

    fn act_on_word(
        &self,
        h: HopfGenerator,
        word: &[Generator],
        coproduct: Coproduct,
    ) -> AlgebraElement {
        match h {
            HopfGenerator::K => return self.k_power_on_word(1, word),
            HopfGenerator::KInv => return self.k_power_on_word(-1, word),
            _ => {}
        }
        let Some((&first, rest)) = word.split_first() else {
            // e ▷ 1 = f ▷ 1 = 0
            return AlgebraElement::zero();
        };
        let s = coproduct.k_power();
        let head = self.act_on_generator(h, first);
        let left = head.concat(&self.k_power_on_word(s, rest));
        let right = self
            .k_power_on_word(-s, &[first])
            .concat(&self.act_on_word(h, rest, coproduct));
        left.add(&right)
    }

    fn act_on_generator(&self, h: HopfGenerator, g: Generator) -> AlgebraElement {
        use Generator::*;
        let q = self.q.get();
        let lift = |c: f64, g: Generator| AlgebraElement::monomial(Complex64::new(c, 0.0), vec![g]);
        let q2 = 1.0 + q * q;
        match (h, g) {
            (HopfGenerator::E, A) => lift(-q2 * q.powf(-2.5), B),
            (HopfGenerator::E, AStar) => AlgebraElement::zero(),
            (HopfGenerator::E, B) => lift(q.sqrt(), AStar),
            (HopfGenerator::F, A) => AlgebraElement::zero(),
            (HopfGenerator::F, AStar) => lift(q2 * q.powf(-1.5), B),
            (HopfGenerator::F, B) => lift(-q.powf(1.5), A),
            (HopfGenerator::K, _) | (HopfGenerator::KInv, _) => {
                let p = if h == HopfGenerator::K { 1 } else { -1 };
                self.k_power_on_word(p, &[g])
            }
        }
    }
}
