//! Exact scalars: the rationals or a prime field of odd characteristic.
//!
//! The field is chosen once per session through [`Field`]; every [`Scalar`]
//! carries enough information to check that operands come from the same
//! field. Mixing fields is a programming error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not supported (use 0 or an odd prime)")]
    UnsupportedCharacteristic(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// The coefficient field of a computation session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds the field of the given characteristic: 0 for ℚ, an odd prime for F_p.
    pub fn from_characteristic(c: u64) -> Result<Self, FieldError> {
        match c {
            0 => Ok(Field::Rational),
            p if p > 2 && p < (1 << 31) && is_prime(p) => Ok(Field::Prime(p)),
            p => Err(FieldError::UnsupportedCharacteristic(p)),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Modular {
                residue: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Maps an exact rational into this field.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar, FieldError> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let reduce = |b: &BigInt| -> u64 {
                    let m = BigInt::from(p);
                    let r = ((b % &m) + &m) % &m;
                    r.to_u64().expect("residue fits in u64")
                };
                let num = reduce(q.numer());
                let den = reduce(q.denom());
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                let num = Scalar::Modular { residue: num, modulus: p };
                let den = Scalar::Modular { residue: den, modulus: p };
                Ok(&num * &den.inverse().expect("nonzero residue"))
            }
        }
    }

    /// Parses an integer or a fraction `a/b` into this field.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar, FieldError> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::Parse(text.to_string());
    let t = text.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if b.is_zero() {
                return Err(FieldError::DivisionByZero);
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept reduced, residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { residue: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { residue, .. } => *residue == 1,
        }
    }

    /// True when the value is `-1`.
    pub fn is_minus_one(&self) -> bool {
        (-self).is_one()
    }

    pub fn inverse(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { residue, modulus } => Scalar::Modular {
                residue: pow_mod(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// A display form that reads back through the expression parser, e.g. `-3/2`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Whether the printed form starts with a minus sign.
    pub fn is_negative_display(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Modular { .. } => false,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn same_modulus(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "scalars from different prime fields");
    a
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Modular { residue: a, modulus: p },
                Scalar::Modular { residue: b, modulus: q },
            ) => {
                let p = same_modulus(*p, *q);
                Scalar::Modular { residue: (a + b) % p, modulus: p }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Modular { residue: a, modulus: p },
                Scalar::Modular { residue: b, modulus: q },
            ) => {
                let p = same_modulus(*p, *q);
                Scalar::Modular { residue: a * b % p, modulus: p }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { residue, modulus } => Scalar::Modular {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{self}"),
            Scalar::Modular { modulus, .. } => write!(f, "{self} (mod {modulus})"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_is_canonical() {
        let f = Field::Prime(5);
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert_eq!(f.from_i64(7).to_string(), "2");
        let half = f.parse_scalar("1/2").unwrap();
        assert_eq!(&half * &f.from_i64(2), f.one());
    }

    #[test]
    fn rationals_reduce() {
        let q = Field::Rational.parse_scalar("4/6").unwrap();
        assert_eq!(q.to_string(), "2/3");
        assert_eq!(Field::Rational.parse_scalar("-3").unwrap().to_string(), "-3");
        assert!(Field::Rational.parse_scalar("1/0").is_err());
    }

    #[test]
    fn characteristic_two_is_rejected() {
        assert!(Field::from_characteristic(2).is_err());
        assert!(Field::from_characteristic(9).is_err());
        assert_eq!(Field::from_characteristic(7).unwrap(), Field::Prime(7));
    }

    #[test]
    fn denominators_divisible_by_p_fail() {
        assert_eq!(Field::Prime(3).parse_scalar("1/3"), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn inverse_and_pow() {
        let f = Field::Prime(7);
        for n in 1..7 {
            let a = f.from_i64(n);
            assert!((&a * &a.inverse().unwrap()).is_one());
        }
        assert_eq!(f.from_i64(3).pow(6), f.one());
        assert_eq!(Field::Rational.from_i64(2).pow(10), Field::Rational.from_i64(1024));
    }
}
