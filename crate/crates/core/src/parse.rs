//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := ('-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := var | rational | '(' expr ')'
//! rational := int ('/' uint)?
//! var      := letter (letter|digit)*
//! ```
//!
//! Whitespace is ignored; implicit multiplication is rejected.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{index_of, MultiPoly};
use crate::scalar::{Field, Scalar};

pub fn parse_poly(text: &str, vars: &[String], field: Field) -> Result<MultiPoly> {
    let mut p = Parser {
        chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
        pos: 0,
        end: text.len(),
        vars,
        field,
    };
    let e = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    field: Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|(i, _)| *i).unwrap_or(self.end)
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '(') {
            return Err(self.error("implicit multiplication is not supported; use '*'"));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let b = self.base()?;
        if self.eat('^') {
            let e = self.uint()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(b.pow(e));
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let den = if self.eat('/') { self.uint()? } else { BigInt::from(1) };
                let s = Scalar::from_ratio(self.field, &num, &den)?;
                Ok(MultiPoly::constant(self.vars, s))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric()) {
                    name.push(c);
                    self.pos += 1;
                }
                index_of(self.vars, &name)?;
                MultiPoly::var(self.vars, self.field, &name)
            }
            Some(_) => Err(self.error("expected a variable, number or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(self.error("expected an unsigned integer"));
        }
        Ok(digits.parse().expect("digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var_names;

    #[test]
    fn parses_paper_target() {
        let p = parse_poly("a^3 - g*(b - a*c)", &var_names(&["a", "b", "c", "g"]), Field::Rationals).unwrap();
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn zero_and_difference_of_squares() {
        let t = var_names(&["t"]);
        assert!(parse_poly("0", &t, Field::Rationals).unwrap().is_zero());
        let p = parse_poly("(1+t)*(1-t)", &t, Field::Rationals).unwrap();
        assert_eq!(p, parse_poly("1 - t^2", &t, Field::Rationals).unwrap());
        assert_eq!(p.to_string(), "-t^2 + 1");
    }

    #[test]
    fn errors_carry_positions() {
        let t = var_names(&["t"]);
        assert_eq!(
            parse_poly("2 t", &t, Field::Rationals),
            Err(Error::Syntax {
                pos: 2,
                msg: "implicit multiplication is not supported; use '*'".into()
            })
        );
        assert!(matches!(parse_poly("(t", &t, Field::Rationals), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("t +", &t, Field::Rationals), Err(Error::Syntax { pos: 3, .. })));
        assert_eq!(parse_poly("s", &t, Field::Rationals), Err(Error::UndeclaredVariable("s".into())));
        assert!(matches!(parse_poly("1/3", &t, Field::Prime(3)), Err(Error::InvalidLiteral(..))));
        assert!(matches!(parse_poly("1/0", &t, Field::Rationals), Err(Error::InvalidLiteral(..))));
    }

    #[test]
    fn prime_field_literals() {
        let t = var_names(&["t"]);
        let p = parse_poly("1/2*t + 7", &t, Field::Prime(5)).unwrap();
        assert_eq!(p.to_string(), "3*t + 2");
    }
}
