//! Truncated 2-adic integers: a residue modulo `2^m` together with its
//! precision `m`. Enough for unit exponents, the halved exponents
//! `(k-1)/2`, and the two unit characters used by the coset labels.

use std::fmt;

use crate::error::{Error, Result};

/// Default precision for catalog parameters and CLI flags.
pub const DEFAULT_PRECISION: u32 = 16;

/// A 2-adic integer known modulo `2^precision`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoAdic {
    residue: u64,
    precision: u32,
}

impl TwoAdic {
    /// Reduce `value` modulo `2^precision`, `1 <= precision <= 64`.
    pub fn new(value: i64, precision: u32) -> Result<Self> {
        if precision == 0 || precision > 64 {
            return Err(Error::Parameter(format!(
                "2-adic precision must be in 1..=64, got {precision}"
            )));
        }
        let modulus = if precision == 64 {
            0u128
        } else {
            1u128 << precision
        };
        let residue = if precision == 64 {
            value as u64
        } else {
            (value as i128).rem_euclid(modulus as i128) as u64
        };
        Ok(TwoAdic { residue, precision })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_unit(&self) -> bool {
        self.residue & 1 == 1
    }

    fn mask(precision: u32) -> u64 {
        if precision == 64 {
            !0
        } else {
            (1u64 << precision) - 1
        }
    }

    fn reduced(residue: u64, precision: u32) -> Self {
        TwoAdic {
            residue: residue & Self::mask(precision),
            precision,
        }
    }

    /// Precision of a combined value: the coarser of the two operands.
    fn join(a: &Self, b: &Self) -> u32 {
        a.precision.min(b.precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        Self::reduced(self.residue.wrapping_add(other.residue), p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        Self::reduced(self.residue.wrapping_sub(other.residue), p)
    }

    pub fn neg(&self) -> Self {
        Self::reduced(self.residue.wrapping_neg(), self.precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        Self::reduced(self.residue.wrapping_mul(other.residue), p)
    }

    /// Multiplicative inverse; defined for units only.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::EvenOperand);
        }
        // Newton lifting: x -> x(2 - ax) doubles correct bits each step.
        let a = self.residue;
        let mut x = 1u64;
        for _ in 0..7 {
            x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
        }
        Ok(Self::reduced(x, self.precision))
    }

    /// Exact halving; requires an even residue and costs one precision bit.
    pub fn half(&self) -> Result<Self> {
        if self.residue & 1 == 1 {
            return Err(Error::Domain("cannot halve an odd 2-adic".into()));
        }
        if self.precision < 2 {
            return Err(Error::Precision {
                have: self.precision,
                need: 2,
            });
        }
        Ok(Self::reduced(self.residue >> 1, self.precision - 1))
    }

    /// `(k - 1) / 2` for odd `k`; the exponent shape used throughout the
    /// normalizer catalogs.
    pub fn half_less_one(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::EvenOperand);
        }
        let one = Self::reduced(1, self.precision);
        self.sub(&one).half()
    }

    /// `(1 - k) / 2` for odd `k`.
    pub fn half_one_less(&self) -> Result<Self> {
        Ok(self.half_less_one()?.neg())
    }

    /// Unit character `k -> (k-1)/2 mod 2`: trivial exactly on `1 mod 4`.
    pub fn theta1(&self) -> Result<bool> {
        if !self.is_unit() {
            return Err(Error::EvenOperand);
        }
        if self.precision < 2 {
            return Err(Error::Precision {
                have: self.precision,
                need: 2,
            });
        }
        Ok((self.residue >> 1) & 1 == 1)
    }

    /// Unit character `k -> (k^2-1)/8 mod 2`: trivial exactly on
    /// `±1 mod 8`.
    pub fn theta2(&self) -> Result<bool> {
        if !self.is_unit() {
            return Err(Error::EvenOperand);
        }
        if self.precision < 3 {
            return Err(Error::Precision {
                have: self.precision,
                need: 3,
            });
        }
        let k = self.residue & 7;
        Ok(k == 3 || k == 5)
    }
}

impl fmt::Display for TwoAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2^{}", self.residue, self.precision)
    }
}

impl fmt::Debug for TwoAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoAdic({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(k: i64) -> TwoAdic {
        TwoAdic::new(k, 16).unwrap()
    }

    #[test]
    fn theta_values() {
        assert!(unit(3).theta1().unwrap());
        assert!(!unit(5).theta1().unwrap());
        assert!(!unit(7).theta2().unwrap()); // (49-1)/8 = 6
        assert!(unit(3).theta2().unwrap()); // (9-1)/8 = 1
        assert!(!unit(1).theta1().unwrap());
        assert!(!unit(-1).theta2().unwrap());
    }

    #[test]
    fn theta_kernels_exhaustive_mod_16() {
        for k in (1..16i64).step_by(2) {
            let t = TwoAdic::new(k, 4).unwrap();
            assert_eq!(t.theta1().unwrap(), k.rem_euclid(4) != 1);
            let m8 = k.rem_euclid(8);
            assert_eq!(t.theta2().unwrap(), m8 == 3 || m8 == 5);
        }
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let three = TwoAdic::new(3, 10).unwrap();
        let inv = three.inverse().unwrap();
        assert_eq!(three.mul(&inv).residue(), 1);
        for k in [1i64, 5, 7, 11, 12345] {
            let t = TwoAdic::new(k | 1, 32).unwrap();
            assert_eq!(t.mul(&t.inverse().unwrap()).residue(), 1);
        }
    }

    #[test]
    fn unit_only_operations_reject_even() {
        let even = TwoAdic::new(4, 8).unwrap();
        assert_eq!(even.inverse(), Err(Error::EvenOperand));
        assert_eq!(even.theta1(), Err(Error::EvenOperand));
        assert_eq!(even.half_less_one(), Err(Error::EvenOperand));
    }

    #[test]
    fn low_precision_theta_is_an_error() {
        let k = TwoAdic::new(3, 2).unwrap();
        assert!(matches!(k.theta2(), Err(Error::Precision { .. })));
        let k = TwoAdic::new(1, 1).unwrap();
        assert!(matches!(k.theta1(), Err(Error::Precision { .. })));
    }

    #[test]
    fn halved_exponents() {
        assert_eq!(unit(7).half_less_one().unwrap().residue(), 3);
        assert_eq!(unit(7).half_less_one().unwrap().precision(), 15);
        assert_eq!(
            unit(7).half_one_less().unwrap(),
            unit(7).half_less_one().unwrap().neg()
        );
    }

    #[test]
    fn arithmetic_mod_power_of_two() {
        let a = TwoAdic::new(-3, 8).unwrap();
        assert_eq!(a.residue(), 253);
        assert_eq!(a.add(&TwoAdic::new(3, 8).unwrap()).residue(), 0);
        assert_eq!(
            TwoAdic::new(100, 4).unwrap().mul(&TwoAdic::new(7, 8).unwrap()).precision(),
            4
        );
    }
}
