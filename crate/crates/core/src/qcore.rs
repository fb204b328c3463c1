//! Half-integer labels and q-numbers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact half-integer, stored as its doubled value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// `Some(n)` when the value is the integer `n`.
    pub const fn as_integer(self) -> Option<i32> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub const fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    /// Checks that `self` is a valid spin label `l ∈ {1/2, 3/2, ...}`.
    pub fn validate_spin(self) -> Result<()> {
        if self.twice >= 1 && self.twice % 2 == 1 {
            Ok(())
        } else {
            Err(Error::InvalidSpin(self))
        }
    }

    /// Checks that `m` is a magnetic label compatible with the spin `self`.
    pub fn validate_pairing(self, m: HalfInt) -> Result<()> {
        self.validate_spin()?;
        if is_valid_pair(self, m) {
            Ok(())
        } else {
            Err(Error::InvalidPairing { l: self, m })
        }
    }
}

/// `|m| ≤ l` and `m ≡ l (mod 1)`.
pub fn is_valid_pair(l: HalfInt, m: HalfInt) -> bool {
    m.twice.abs() <= l.twice && (l.twice - m.twice).rem_euclid(2) == 0
}

/// Constructs the half-integer `twice / 2`.
pub const fn half_int(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `p/2`, plain integers and decimals ending in `.5` or `.0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg}: {s:?}"),
        };
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad("bad numerator"))?;
            match den.trim() {
                "2" => Ok(HalfInt::from_twice(num)),
                "1" => Ok(HalfInt::from_int(num)),
                _ => Err(bad("denominator must be 1 or 2")),
            }
        } else if let Ok(n) = s.parse::<i32>() {
            Ok(HalfInt::from_int(n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad("not a number"))?;
            let twice = 2.0 * x;
            if twice.fract() != 0.0 || twice.abs() > f64::from(i32::MAX) {
                return Err(bad("not a half-integer"));
            }
            Ok(HalfInt::from_twice(twice as i32))
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The deformation parameter, `0 < q ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q <= 1.0 {
            Ok(QParam(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    /// Like [`QParam::new`] but additionally rejects `q = 1`, where `q^l`
    /// decay degenerates.
    pub fn new_deformed(q: f64) -> Result<Self> {
        let p = Self::new(q)?;
        if p.is_classical() {
            return Err(Error::InvalidConfig(
                "decay suites require q < 1".to_string(),
            ));
        }
        Ok(p)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }

    /// `q^x` for a half-integer exponent.
    pub fn pow(self, x: HalfInt) -> f64 {
        match x.as_integer() {
            Some(n) => self.0.powi(n),
            None => self.0.powf(x.value()),
        }
    }
}

/// The q-number `[n] = (q^n - q^{-n}) / (q - q^{-1})`, with the limit value
/// `n` at `q = 1`.
pub fn q_number(n: i32, q: QParam) -> f64 {
    if q.is_classical() {
        return f64::from(n);
    }
    let q = q.get();
    (q.powi(n) - q.powi(-n)) / (q - q.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn q(x: f64) -> QParam {
        QParam::new(x).unwrap()
    }

    #[test]
    fn q_number_examples() {
        assert_eq!(q_number(0, q(0.37)), 0.0);
        assert_relative_eq!(q_number(1, q(0.37)), 1.0, epsilon = 1e-15);
        // (0.125 - 8) / (0.5 - 2)
        assert_relative_eq!(q_number(3, q(0.5)), 5.25, epsilon = 1e-14);
        assert_relative_eq!(q_number(2, q(0.5)), 2.5, epsilon = 1e-14);
        assert_eq!(q_number(7, q(1.0)), 7.0);
        assert_eq!(q_number(-3, q(1.0)), -3.0);
    }

    #[test]
    fn half_int_labels() {
        let l = half_int(1);
        assert_eq!(l.value(), 0.5);
        assert!(l.validate_spin().is_ok());
        assert!(half_int(2).validate_spin().is_err());
        assert!(half_int(-1).validate_spin().is_err());
        assert!(matches!(
            half_int(1).validate_pairing(half_int(3)),
            Err(Error::InvalidPairing { .. })
        ));
        assert!(half_int(3).validate_pairing(half_int(0)).is_err());
        assert!(half_int(3).validate_pairing(half_int(-3)).is_ok());
        assert!(half_int(3).validate_pairing(half_int(1)).is_ok());
    }

    #[test]
    fn half_int_parsing() {
        assert_eq!("41/2".parse::<HalfInt>().unwrap(), half_int(41));
        assert_eq!("20.5".parse::<HalfInt>().unwrap(), half_int(41));
        assert_eq!("3".parse::<HalfInt>().unwrap(), half_int(6));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), half_int(-1));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.25".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
        assert_eq!(half_int(41).to_string(), "41/2");
        assert_eq!(half_int(-4).to_string(), "-2");
    }

    #[test]
    fn qparam_bounds() {
        assert!(QParam::new(0.0).is_err());
        assert!(QParam::new(1.2).is_err());
        assert!(QParam::new(f64::NAN).is_err());
        assert!(QParam::new(1.0).is_ok());
        assert!(QParam::new_deformed(1.0).is_err());
        assert_relative_eq!(q(0.25).pow(half_int(3)), 0.125, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn q_number_antisymmetric(n in -50i32..=50, x in 0.1f64..0.999) {
            let p = q(x);
            let a = q_number(n, p);
            let b = q_number(-n, p);
            prop_assert!((a + b).abs() <= 1e-14 * a.abs().max(1.0));
        }

        #[test]
        fn q_number_recursion(n in 1i32..=40, x in 0.1f64..0.999) {
            let p = q(x);
            let lhs = q_number(n + 1, p);
            let rhs = (x + x.recip()) * q_number(n, p) - q_number(n - 1, p);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }

        #[test]
        fn q_number_positive(n in 1i32..=60, x in 0.05f64..0.999) {
            prop_assert!(q_number(n, q(x)) > 0.0);
        }
    }
}
