//! Scalar traits shared by the polynomial and matrix code.
//!
//! Everything downstream is written against these traits so that the same
//! elimination, characteristic polynomial and canonical-form routines run over
//! `BigInt`, `BigRational`, number-field elements and polynomial rings.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Commutative ring with identity. Values are compared exactly.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A field: every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    /// Multiplicative inverse, `None` for zero.
    fn try_inv(&self) -> Option<Self>;
}

/// A field with a fixed ordering coming from a real embedding.
pub trait RealField: Field {
    /// Sign of the image under the fixed real embedding: -1, 0 or +1.
    fn sign(&self) -> i8;

    fn from_rational(q: &BigRational) -> Self;
}

/// Scalars with a notion of integrality (rational integers, or the monogenic
/// ring of integers of a number field).
pub trait Integrality {
    fn is_integral(&self) -> bool;
    /// Smallest positive integer `d` with `d * self` integral.
    fn denominator(&self) -> BigInt;
}

/// Euclidean domain with a size function used to drive the remainder down.
pub trait Euclidean: Ring {
    /// Quotient and remainder with `size(r) < size(d)`. `None` when `d` is zero
    /// or when the rounding step fails to reduce the size.
    fn div_rem_euclid(&self, d: &Self) -> Option<(Self, Self)>;
    fn size(&self) -> BigInt;
    /// Multiply by a unit so that the result is the preferred associate.
    fn normalize_unit(&self) -> (Self, Self);
}

impl Ring for BigInt {
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Euclidean for BigInt {
    fn div_rem_euclid(&self, d: &Self) -> Option<(Self, Self)> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_mod_floor(d);
        Some((q, r))
    }

    fn size(&self) -> BigInt {
        self.abs()
    }

    fn normalize_unit(&self) -> (Self, Self) {
        if self.is_negative() {
            (-self.clone(), BigInt::from(-1))
        } else {
            (self.clone(), BigInt::one())
        }
    }
}

impl Ring for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for BigRational {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl RealField for BigRational {
    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Integrality for BigRational {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn denominator(&self) -> BigInt {
        self.denom().clone()
    }
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Canonical `"p/q"` string (denominator always written, positive).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigInt {
    BigInt::from(p)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        let q = rat(-6, 4);
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(q));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(int(3).pow_u(5), int(243));
        assert_eq!(rat(1, 2).pow_u(3), rat(1, 8));
        assert_eq!(int(7).pow_u(0), int(1));
    }

    #[test]
    fn floor_division_keeps_remainder_nonnegative() {
        let (q, r) = int(-7).div_rem_euclid(&int(3)).unwrap();
        assert_eq!((q, r), (int(-3), int(2)));
    }
}
