//! Parser for the compact polynomial syntax used on the command line,
//! e.g. `z1^2`, `3*z1*z2 - (1+2i)*z2^3`, `0.5i*z1 + z2`.
//!
//! Grammar: sums of products of factors; a factor is a real number, an
//! imaginary literal (`2i`, `i`), a variable `z<k>` (one-based), or a
//! parenthesized expression, optionally raised to a nonnegative integer power.

use super::poly::Polynomial;
use crate::cvec::C64;
use crate::error::{GleasonError, Result};

pub fn parse_polynomial(src: &str, n: usize) -> Result<Polynomial> {
    let mut p = Parser {
        chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        n,
    };
    let out = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> GleasonError {
        let s: String = self.chars.iter().collect();
        GleasonError::InvalidInput(format!(
            "polynomial `{s}` at column {}: {msg}",
            self.pos + 1
        ))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.n);
        let mut sign = 1.0;
        if let Some(c) = self.peek() {
            if c == '+' || c == '-' {
                sign = if c == '-' { -1.0 } else { 1.0 };
                self.pos += 1;
            }
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(C64::new(sign, 0.0));
            match self.peek() {
                Some('+') => {
                    sign = 1.0;
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -1.0;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                // implicit product such as `2z1` or `(1+i)z2`
                Some(c) if c == 'z' || c == '(' => {
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.factor()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.integer()?;
            let mut out = Polynomial::constant(self.n, C64::new(1.0, 0.0));
            for _ in 0..k {
                out = &out * &base;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<u32>()
            .map_err(|_| self.error("integer out of range"))
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('z') => {
                self.pos += 1;
                let k = self.integer()? as usize;
                if k == 0 || k > self.n {
                    return Err(self.error(&format!("variable z{k} outside 1..={}", self.n)));
                }
                Ok(Polynomial::coordinate(self.n, k - 1))
            }
            Some('i') => {
                self.pos += 1;
                Ok(Polynomial::constant(self.n, C64::new(0.0, 1.0)))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.' || c == 'e') {
                    // allow exponents like 1e-3
                    if self.peek() == Some('e')
                        && matches!(self.chars.get(self.pos + 1), Some('-') | Some('+'))
                    {
                        self.pos += 1;
                    }
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let v: f64 = s.parse().map_err(|_| self.error("bad number"))?;
                if self.peek() == Some('i') {
                    self.pos += 1;
                    return Ok(Polynomial::constant(self.n, C64::new(0.0, v)));
                }
                Ok(Polynomial::constant(self.n, C64::new(v, 0.0)))
            }
            _ => Err(self.error("expected a factor")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;

    #[test]
    fn parses_simple_forms() {
        let p = parse_polynomial("z1^2", 2).unwrap();
        assert_eq!(p, Polynomial::monomial(vec![2, 0], c(1.0, 0.0)));
        let q = parse_polynomial("3*z1*z2 - (1+2i)*z2^3", 2).unwrap();
        assert_eq!(q.coefficient(&[1, 1]), c(3.0, 0.0));
        assert_eq!(q.coefficient(&[0, 3]), c(-1.0, -2.0));
        let r = parse_polynomial("0.5i z1 + z2", 2).unwrap();
        assert_eq!(r.coefficient(&[1, 0]), c(0.0, 0.5));
        assert_eq!(r.coefficient(&[0, 1]), c(1.0, 0.0));
    }

    #[test]
    fn expands_powers_of_groups() {
        let p = parse_polynomial("(z1+z2)^2", 2).unwrap();
        assert_eq!(p.coefficient(&[1, 1]), c(2.0, 0.0));
        assert_eq!(p.coefficient(&[2, 0]), c(1.0, 0.0));
    }

    #[test]
    fn rejects_bad_variable() {
        assert!(parse_polynomial("z3", 2).is_err());
        assert!(parse_polynomial("z1 +", 2).is_err());
        assert!(parse_polynomial("z1)", 2).is_err());
    }
}
