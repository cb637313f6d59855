//! Exact field elements: arbitrary-precision rationals and small prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest admissible characteristic (exclusive).
pub const PRIME_LIMIT: u32 = 1 << 16;

/// Base field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    /// Prime field 𝔽_p; `p` must be prime and below 2¹⁶.
    pub fn prime(p: u64) -> Result<Field> {
        if p < PRIME_LIMIT as u64 && is_prime(p) {
            Ok(Field::Prime(p as u32))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn check(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(*self, *other))
        }
    }

    /// All elements in canonical order; `None` for ℚ.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..*p).map(|v| Scalar::Prime { value: v, p: *p }).collect()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u32, p: u32 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_int(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_int(field, 1)
    }

    pub fn from_int(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    pub fn from_bigint(field: Field, v: &BigInt) -> Scalar {
        match field {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Scalar::Prime {
                    value: r.to_u32().unwrap(),
                    p,
                }
            }
        }
    }

    /// `num / den` in `field`; fails when `den` vanishes in the field.
    pub fn from_ratio(field: Field, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = Scalar::from_bigint(field, den);
        if d.is_zero() {
            return Err(Error::InvalidLiteral(format!("{num}/{den}"), field));
        }
        Scalar::from_bigint(field, num).checked_div(&d)
    }

    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn prime_value(&self) -> Option<u32> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Prime { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Sign for printing; prime-field elements are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Prime { .. } => false,
        }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, p: q }) if p == q => Ok(Scalar::Prime {
                value: (a + b) % p,
                p: *p,
            }),
            _ => Err(Error::FieldMismatch(self.field(), o.field())),
        }
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, p: q }) if p == q => Ok(Scalar::Prime {
                value: a * b % p,
                p: *p,
            }),
            _ => Err(Error::FieldMismatch(self.field(), o.field())),
        }
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        self.checked_mul(&o.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(num_traits::pow(r.clone(), e as usize)),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: pow_mod(*value, e, *p),
                p: *p,
            },
        }
    }

    /// Multiplies by a non-negative integer (used for derivatives).
    pub fn scale_int(&self, k: u64) -> Scalar {
        let f = self.field();
        match f {
            Field::Rationals => self * &Scalar::from_int(f, k as i64),
            Field::Prime(p) => self * &Scalar::from_int(f, (k % p as u64) as i64),
        }
    }
}

pub(crate) fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

// Operator forms panic on a field mismatch; callers validate contexts first.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.checked_add(o).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.checked_sub(o).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.checked_mul(o).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: (p - value) % p,
                p: *p,
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

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let a = Scalar::rational(6, -4);
        assert_eq!(a.to_string(), "-3/2");
        let Scalar::Rational(r) = &a else { panic!() };
        assert!(r.denom().is_positive());
    }

    #[test]
    fn prime_field_canonical() {
        let f = Field::prime(7).unwrap();
        assert_eq!(Scalar::from_int(f, -1).prime_value(), Some(6));
        let three = Scalar::from_int(f, 3);
        assert_eq!((&three * &three.inv().unwrap()), Scalar::one(f));
        assert_eq!(Scalar::from_ratio(f, &BigInt::from(1), &BigInt::from(2)).unwrap().prime_value(), Some(4));
    }

    #[test]
    fn field_validation() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(65537).is_err());
        assert!(Field::prime(65521).is_ok());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Scalar::from_int(Field::Rationals, 1);
        let b = Scalar::from_int(Field::Prime(5), 1);
        assert_eq!(a.checked_add(&b), Err(Error::FieldMismatch(Field::Rationals, Field::Prime(5))));
        assert!(b.checked_mul(&Scalar::from_int(Field::Prime(3), 1)).is_err());
    }

    #[test]
    fn literal_invalid_in_field() {
        let f = Field::Prime(3);
        assert!(Scalar::from_ratio(f, &BigInt::from(1), &BigInt::from(3)).is_err());
        assert_eq!(Scalar::zero(f).inv(), Err(Error::DivisionByZero));
    }
}
