//! Sparse multivariate polynomials over a [`Field`], kept in graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Exponent vector ordered graded-lexicographically: total degree first, then
/// the exponent of the earliest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<String>,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

pub fn var_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl MultiPoly {
    pub fn zero(vars: &[String], field: Field) -> MultiPoly {
        MultiPoly {
            vars: vars.to_vec(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(vars, c.field());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &[String], field: Field) -> MultiPoly {
        MultiPoly::constant(vars, Scalar::one(field))
    }

    pub fn var(vars: &[String], field: Field, name: &str) -> Result<MultiPoly> {
        let i = index_of(vars, name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(MultiPoly::monomial(vars, Monomial(e), Scalar::one(field)))
    }

    pub fn monomial(vars: &[String], m: Monomial, c: Scalar) -> MultiPoly {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut p = MultiPoly::zero(vars, c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &[String], field: Field, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> MultiPoly {
        let mut p = MultiPoly::zero(vars, field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(|| Scalar::zero(self.field)))
        } else {
            None
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn degree_in(&self, var: &str) -> Result<u32> {
        let i = index_of(&self.vars, var)?;
        Ok(self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
    }

    /// Indices of variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    fn check_context(&self, o: &MultiPoly) -> Result<()> {
        self.field.check(&o.field)?;
        if self.vars != o.vars {
            return Err(Error::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_context(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_context(o)?;
        let mut r = MultiPoly::zero(&self.vars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        MultiPoly::from_terms(&self.vars, self.field, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Moves the polynomial into another variable context. Every variable
    /// that occurs must be present in `new_vars`.
    pub fn reembed(&self, new_vars: &[String]) -> Result<MultiPoly> {
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| new_vars.iter().position(|w| w == v)).collect();
        let mut r = MultiPoly::zero(new_vars, self.field);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let j = map[i].ok_or_else(|| Error::UndeclaredVariable(self.vars[i].clone()))?;
                    e[j] += k;
                }
            }
            r.add_term(Monomial(e), c.clone());
        }
        Ok(r)
    }

    /// Simultaneous substitution. The result lives in this polynomial's
    /// variables followed by any new variables the bindings introduce.
    pub fn substitute(&self, bindings: &BTreeMap<String, MultiPoly>) -> Result<MultiPoly> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut target = self.vars.clone();
        for b in bindings.values() {
            self.field.check(&b.field)?;
            for v in &b.vars {
                if !target.contains(v) {
                    target.push(v.clone());
                }
            }
        }
        let images: Vec<MultiPoly> = self
            .vars
            .iter()
            .map(|v| match bindings.get(v) {
                Some(b) => b.reembed(&target),
                None => MultiPoly::var(&target, self.field, v),
            })
            .collect::<Result<_>>()?;
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|img| vec![MultiPoly::one(&target, self.field), img.clone()]).collect();
        let mut r = MultiPoly::zero(&target, self.field);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            r = &r + &t;
        }
        Ok(r)
    }

    /// Exact division: `Ok(Some(q))` with `q * d == self`, `Ok(None)` when `d`
    /// does not divide.
    pub fn exact_divide(&self, d: &MultiPoly) -> Result<Option<MultiPoly>> {
        self.check_context(d)?;
        let (dm, dc) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(&self.vars, self.field);
        while let Some((rm, rc)) = rem.leading_term() {
            let Some(qm) = rm.div(dm) else {
                return Ok(None);
            };
            let t = MultiPoly::monomial(&self.vars, qm, rc * &dc_inv);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Ok(Some(q))
    }

    /// Largest `k` with `prime^k` dividing `self`.
    pub fn multiplicity_along(&self, prime: &MultiPoly) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if prime.is_constant() {
            return Err(Error::ConstantPrime);
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_divide(prime)? {
            cur = q;
            k += 1;
        }
        Ok(k)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<MultiPoly> {
        let i = index_of(&self.vars, var)?;
        let mut r = MultiPoly::zero(&self.vars, self.field);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            r.add_term(Monomial(e), c.scale_int(m.0[i] as u64));
        }
        Ok(r)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.vars.len() {
            return Err(Error::Shape(format!("point of length {} for {} variables", point.len(), self.vars.len())));
        }
        for s in point {
            self.field.check(&s.field())?;
        }
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&m.0) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Fast evaluation over a prime field on canonical residues.
    ///
    /// Panics if the polynomial is over ℚ.
    pub fn eval_mod(&self, point: &[u32]) -> u32 {
        let Field::Prime(p) = self.field else {
            panic!("eval_mod on a rational polynomial");
        };
        let p = p as u64;
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = c.prime_value().unwrap() as u64;
            for (&x, &k) in point.iter().zip(&m.0) {
                for _ in 0..k {
                    t = t * x as u64 % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc as u32
    }

    /// Maps a rational polynomial into 𝔽_p (identity when already there).
    pub fn to_field(&self, field: Field) -> Result<MultiPoly> {
        if field == self.field {
            return Ok(self.clone());
        }
        let Field::Prime(_) = field else {
            return Err(Error::FieldMismatch(self.field, field));
        };
        let mut r = MultiPoly::zero(&self.vars, field);
        for (m, c) in &self.terms {
            let Scalar::Rational(q) = c else {
                return Err(Error::FieldMismatch(self.field, field));
            };
            r.add_term(m.clone(), Scalar::from_ratio(field, q.numer(), q.denom())?);
        }
        Ok(r)
    }

    /// `Some(c)` when `self == c * other`.
    pub fn scalar_multiple_of(&self, other: &MultiPoly) -> Option<Scalar> {
        if self.check_context(other).is_err() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero(self.field));
        }
        let (m, c) = other.leading_term()?;
        let c = &self.coefficient(m) * &c.inv().ok()?;
        (other.scale(&c) == *self).then_some(c)
    }
}

/// Laplace expansion along the first row of a square matrix.
pub fn determinant(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(m[0][0].vars(), m[0][0].field());
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let t = &m[0][j] * &determinant(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

pub(crate) fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter().position(|v| v == name).ok_or_else(|| Error::UndeclaredVariable(name.to_string()))
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.try_add(o).expect("polynomial context mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.try_sub(o).expect("polynomial context mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.try_mul(o).expect("polynomial context mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A homogeneous form in the two variables `x`, `y`. The zero form keeps
/// its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    poly: MultiPoly,
    degree: u32,
}

pub fn xy_vars() -> Vec<String> {
    var_names(&["x", "y"])
}

impl BinaryForm {
    pub fn new(poly: MultiPoly, degree: u32) -> Result<BinaryForm> {
        if poly.vars() != xy_vars().as_slice() {
            return Err(Error::VariableMismatch(format!("binary forms use (x, y), got {:?}", poly.vars())));
        }
        if poly.terms.keys().any(|m| m.degree() != degree) {
            return Err(Error::NotHomogeneous(format!("{poly} is not a form of degree {degree}")));
        }
        Ok(BinaryForm { poly, degree })
    }

    /// Infers the degree; the zero polynomial needs [`BinaryForm::zero`].
    pub fn from_poly(poly: MultiPoly) -> Result<BinaryForm> {
        let d = poly.total_degree().ok_or_else(|| Error::NotHomogeneous("zero form needs an explicit degree".into()))?;
        BinaryForm::new(poly, d)
    }

    pub fn zero(field: Field, degree: u32) -> BinaryForm {
        BinaryForm {
            poly: MultiPoly::zero(&xy_vars(), field),
            degree,
        }
    }

    /// Form from coefficients of xᵈ, xᵈ⁻¹y, …, yᵈ.
    pub fn from_coeffs(field: Field, coeffs: &[Scalar]) -> BinaryForm {
        let d = coeffs.len() as u32 - 1;
        let poly = MultiPoly::from_terms(
            &xy_vars(),
            field,
            coeffs.iter().enumerate().map(|(i, c)| (Monomial(vec![d - i as u32, i as u32]), c.clone())),
        );
        BinaryForm { poly, degree: d }
    }

    /// Coefficients of xᵈ, xᵈ⁻¹y, …, yᵈ.
    pub fn coeffs(&self) -> Vec<Scalar> {
        (0..=self.degree).map(|i| self.poly.coefficient(&Monomial(vec![self.degree - i, i]))).collect()
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn try_add(&self, o: &BinaryForm) -> Result<BinaryForm> {
        if self.degree != o.degree {
            return Err(Error::NotHomogeneous(format!("adding forms of degrees {} and {}", self.degree, o.degree)));
        }
        Ok(BinaryForm {
            poly: self.poly.try_add(&o.poly)?,
            degree: self.degree,
        })
    }

    pub fn try_sub(&self, o: &BinaryForm) -> Result<BinaryForm> {
        self.try_add(&o.neg())
    }

    pub fn mul(&self, o: &BinaryForm) -> Result<BinaryForm> {
        Ok(BinaryForm {
            poly: self.poly.try_mul(&o.poly)?,
            degree: self.degree + o.degree,
        })
    }

    pub fn scale(&self, c: &Scalar) -> BinaryForm {
        BinaryForm {
            poly: self.poly.scale(c),
            degree: self.degree,
        }
    }

    pub fn neg(&self) -> BinaryForm {
        BinaryForm {
            poly: -&self.poly,
            degree: self.degree,
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
