//! Elements of k[t]/⟨tⁿ⟩ as dense coefficient vectors.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::var_names;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl TruncatedPoly {
    /// Coefficients beyond the truncation order are dropped; short input is
    /// zero-padded.
    pub fn new(field: Field, modulus: usize, coeffs: &[Scalar]) -> Result<TruncatedPoly> {
        assert!(modulus >= 1, "truncation order must be positive");
        let mut c: Vec<Scalar> = coeffs.iter().take(modulus).cloned().collect();
        for s in &c {
            field.check(&s.field())?;
        }
        c.resize(modulus, Scalar::zero(field));
        Ok(TruncatedPoly { field, coeffs: c })
    }

    pub fn from_ints(field: Field, modulus: usize, coeffs: &[i64]) -> TruncatedPoly {
        let c: Vec<Scalar> = coeffs.iter().map(|&v| Scalar::from_int(field, v)).collect();
        TruncatedPoly::new(field, modulus, &c).expect("same field")
    }

    pub fn zero(field: Field, modulus: usize) -> TruncatedPoly {
        TruncatedPoly::new(field, modulus, &[]).expect("same field")
    }

    pub fn one(field: Field, modulus: usize) -> TruncatedPoly {
        TruncatedPoly::new(field, modulus, &[Scalar::one(field)]).expect("same field")
    }

    /// The monomial tᵏ (zero when k ≥ n).
    pub fn t_power(field: Field, modulus: usize, k: usize) -> TruncatedPoly {
        let mut p = TruncatedPoly::zero(field, modulus);
        if k < modulus {
            p.coeffs[k] = Scalar::one(field);
        }
        p
    }

    /// Parses a polynomial expression in `t` and truncates it.
    pub fn parse(text: &str, field: Field, modulus: usize) -> Result<TruncatedPoly> {
        let p = parse_poly(text, &var_names(&["t"]), field)?;
        let deg = p.total_degree().unwrap_or(0) as usize;
        let mut c = vec![Scalar::zero(field); deg + 1];
        for (m, v) in p.terms() {
            c[m.0[0] as usize] = v.clone();
        }
        TruncatedPoly::new(field, modulus, &c)
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// t-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, o: &TruncatedPoly) -> Result<()> {
        self.field.check(&o.field)?;
        if self.modulus() != o.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), o.modulus()));
        }
        Ok(())
    }

    pub fn add(&self, o: &TruncatedPoly) -> Result<TruncatedPoly> {
        self.check(o)?;
        Ok(TruncatedPoly {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn neg(&self) -> TruncatedPoly {
        TruncatedPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> TruncatedPoly {
        TruncatedPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    /// Convolution truncated at tⁿ.
    pub fn mul(&self, o: &TruncatedPoly) -> Result<TruncatedPoly> {
        self.check(o)?;
        let n = self.modulus();
        let mut out = vec![Scalar::zero(self.field); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(TruncatedPoly {
            field: self.field,
            coeffs: out,
        })
    }

    /// Multiplication by t.
    pub fn shift(&self) -> TruncatedPoly {
        let mut c = vec![Scalar::zero(self.field)];
        c.extend(self.coeffs[..self.modulus() - 1].iter().cloned());
        TruncatedPoly {
            field: self.field,
            coeffs: c,
        }
    }

    /// Inverse of a unit by the coefficient recursion
    /// c₀ = 1/p₀, cₖ = −(1/p₀)·Σⱼ₌₁..ₖ pⱼ c₍ₖ₋ⱼ₎.
    pub fn invert(&self) -> Result<TruncatedPoly> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let inv0 = self.coeffs[0].inv()?;
        let mut c: Vec<Scalar> = Vec::with_capacity(self.modulus());
        c.push(inv0.clone());
        for k in 1..self.modulus() {
            let mut s = Scalar::zero(self.field);
            for j in 1..=k {
                s = &s + &(&self.coeffs[j] * &c[k - j]);
            }
            c.push(-&(&inv0 * &s));
        }
        Ok(TruncatedPoly {
            field: self.field,
            coeffs: c,
        })
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = crate::poly::MultiPoly::from_terms(
            &var_names(&["t"]),
            self.field,
            self.coeffs.iter().enumerate().map(|(i, c)| (crate::poly::Monomial(vec![i as u32]), c.clone())),
        );
        write!(f, "{p}")
    }
}

impl Serialize for TruncatedPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn mul_examples() {
        let a = TruncatedPoly::from_ints(Q, 2, &[1, 2]);
        let b = TruncatedPoly::from_ints(Q, 2, &[1, -2]);
        assert_eq!(a.mul(&b).unwrap(), TruncatedPoly::one(Q, 2));
        assert_eq!(a.mul(&TruncatedPoly::one(Q, 2)).unwrap(), a);
        for n in 1..6 {
            let t = TruncatedPoly::t_power(Q, n, 1);
            let tn1 = TruncatedPoly::t_power(Q, n, n - 1);
            assert!(t.mul(&tn1).unwrap().is_zero());
        }
    }

    #[test]
    fn mismatches() {
        let a = TruncatedPoly::one(Q, 2);
        assert_eq!(a.mul(&TruncatedPoly::one(Q, 3)), Err(Error::ModulusMismatch(2, 3)));
        assert!(matches!(a.mul(&TruncatedPoly::one(Field::Prime(3), 2)), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn invert_examples() {
        let p = TruncatedPoly::from_ints(Q, 3, &[2, 1, 1]);
        let inv = p.invert().unwrap();
        assert_eq!(inv.coeffs(), &[Scalar::rational(1, 2), Scalar::rational(-1, 4), Scalar::rational(-1, 8)]);
        assert_eq!(p.mul(&inv).unwrap(), TruncatedPoly::one(Q, 3));

        let p = TruncatedPoly::from_ints(Q, 4, &[1, 1]);
        assert_eq!(p.invert().unwrap(), TruncatedPoly::from_ints(Q, 4, &[1, -1, 1, -1]));
        assert_eq!(TruncatedPoly::one(Q, 5).invert().unwrap(), TruncatedPoly::one(Q, 5));
        assert_eq!(TruncatedPoly::from_ints(Q, 3, &[0, 1]).invert(), Err(Error::NotAUnit));
    }

    #[test]
    fn parse_and_print() {
        let p = TruncatedPoly::parse("-3-4*t + t^5", Q, 2).unwrap();
        assert_eq!(p, TruncatedPoly::from_ints(Q, 2, &[-3, -4]));
        assert_eq!(p.to_string(), "-4*t - 3");
    }
}
