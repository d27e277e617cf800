//! Holomorphic function oracles: anything that can be evaluated at points
//! of C^n. Polynomials, a few named rational functions, translated and
//! linearly combined oracles.

use std::sync::Arc;

use crate::cvec::{CVec, C64};
use crate::error::{GleasonError, Result};
use crate::polynomial::Polynomial;

pub trait HolomorphicOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[C64]) -> C64;

    /// Distance by which derivative circles may leave the domain. Zero by
    /// default, for polynomials too, so circles are held to the geometry.
    fn validity_margin(&self) -> f64 {
        0.0
    }

    fn as_polynomial(&self) -> Option<&Polynomial> {
        None
    }

    fn describe(&self) -> String;
}

impl HolomorphicOracle for Polynomial {
    fn dim(&self) -> usize {
        Polynomial::dim(self)
    }

    fn eval(&self, z: &[C64]) -> C64 {
        self.eval_unchecked(z)
    }

    fn as_polynomial(&self) -> Option<&Polynomial> {
        Some(self)
    }

    fn describe(&self) -> String {
        format!(
            "polynomial of degree {} ({} terms)",
            self.degree(),
            self.len()
        )
    }
}

/// Named rational test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Rational {
    /// `z1 / (2 - z2)`; holomorphic on |z2| < 2.
    Z1OverTwoMinusZ2,
    /// `(1 + z2) / (z1 - pole)`; singular on the hyperplane z1 = pole.
    ShiftedPole { pole: C64 },
}

impl Rational {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "z1/(2-z2)" | "z1_over_2_minus_z2" => Ok(Rational::Z1OverTwoMinusZ2),
            "(1+z2)/z1" | "pole_z1" => Ok(Rational::ShiftedPole {
                pole: C64::new(0.0, 0.0),
            }),
            other => Err(GleasonError::InvalidInput(format!(
                "unknown rational oracle `{other}` (known: z1/(2-z2), (1+z2)/z1)"
            ))),
        }
    }
}

impl HolomorphicOracle for Rational {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[C64]) -> C64 {
        match self {
            Rational::Z1OverTwoMinusZ2 => z[0] / (C64::new(2.0, 0.0) - z[1]),
            Rational::ShiftedPole { pole } => (C64::new(1.0, 0.0) + z[1]) / (z[0] - pole),
        }
    }

    fn describe(&self) -> String {
        match self {
            Rational::Z1OverTwoMinusZ2 => "z1/(2-z2)".into(),
            Rational::ShiftedPole { pole } => format!("(1+z2)/(z1-({pole}))"),
        }
    }
}

/// `u -> f(u + shift) - f(shift)`: moves the Gleason point `shift` to the
/// origin and subtracts the value there.
pub struct Recentered {
    inner: Arc<dyn HolomorphicOracle>,
    shift: CVec,
    value_at_shift: C64,
    poly: Option<Polynomial>,
}

impl Recentered {
    pub fn new(inner: Arc<dyn HolomorphicOracle>, shift: CVec) -> Result<Self> {
        if shift.len() != inner.dim() {
            return Err(GleasonError::DimensionMismatch {
                expected: inner.dim(),
                got: shift.len(),
            });
        }
        let value_at_shift = inner.eval(&shift);
        let poly = match inner.as_polynomial() {
            Some(p) => {
                let q = p.translate(&shift)?;
                let q = &q - &Polynomial::constant(q.dim(), q.constant_term());
                Some(q)
            }
            None => None,
        };
        Ok(Recentered {
            inner,
            shift,
            value_at_shift,
            poly,
        })
    }
}

impl HolomorphicOracle for Recentered {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, z: &[C64]) -> C64 {
        if let Some(p) = &self.poly {
            return p.eval_unchecked(z);
        }
        let zs: CVec = z.iter().zip(&self.shift).map(|(a, b)| a + b).collect();
        self.inner.eval(&zs) - self.value_at_shift
    }

    fn validity_margin(&self) -> f64 {
        self.inner.validity_margin()
    }

    fn as_polynomial(&self) -> Option<&Polynomial> {
        self.poly.as_ref()
    }

    fn describe(&self) -> String {
        format!(
            "{} recentred at {}",
            self.inner.describe(),
            crate::cvec::fmt_point(&self.shift)
        )
    }
}

/// `a f + b g`
pub struct LinearCombination {
    pub a: C64,
    pub f: Arc<dyn HolomorphicOracle>,
    pub b: C64,
    pub g: Arc<dyn HolomorphicOracle>,
}

impl HolomorphicOracle for LinearCombination {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn eval(&self, z: &[C64]) -> C64 {
        self.a * self.f.eval(z) + self.b * self.g.eval(z)
    }

    fn validity_margin(&self) -> f64 {
        self.f.validity_margin().min(self.g.validity_margin())
    }

    fn describe(&self) -> String {
        format!(
            "({})*[{}] + ({})*[{}]",
            self.a,
            self.f.describe(),
            self.b,
            self.g.describe()
        )
    }
}

/// Wraps a closure.
pub struct FnOracle<F> {
    pub n: usize,
    pub f: F,
    pub name: String,
}

impl<F> HolomorphicOracle for FnOracle<F>
where
    F: Fn(&[C64]) -> C64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, z: &[C64]) -> C64 {
        (self.f)(z)
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// Parses `poly:<expr>` or `rational:<name>`.
pub fn parse_oracle(spec: &str, n: usize) -> Result<Arc<dyn HolomorphicOracle>> {
    if let Some(expr) = spec.strip_prefix("poly:") {
        return Ok(Arc::new(crate::polynomial::parse_polynomial(expr, n)?));
    }
    if let Some(name) = spec.strip_prefix("rational:") {
        let r = Rational::parse(name)?;
        if n != 2 {
            return Err(GleasonError::DimensionMismatch {
                expected: 2,
                got: n,
            });
        }
        return Ok(Arc::new(r));
    }
    Err(GleasonError::InvalidInput(format!(
        "function spec `{spec}` must start with `poly:` or `rational:`"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;

    #[test]
    fn recentred_polynomial_vanishes_at_origin() {
        let p = crate::polynomial::parse_polynomial("z1*z2 + z1^3", 2).unwrap();
        let r = Recentered::new(Arc::new(p.clone()), vec![c(0.2, 0.1), c(-0.3, 0.0)]).unwrap();
        assert!(r.as_polynomial().unwrap().vanishes_at_origin());
        let u = [c(0.1, 0.2), c(0.05, -0.1)];
        let z = [u[0] + c(0.2, 0.1), u[1] + c(-0.3, 0.0)];
        let expect = p.eval(&z).unwrap() - p.eval(&[c(0.2, 0.1), c(-0.3, 0.0)]).unwrap();
        assert!((r.eval(&u) - expect).norm() < 1e-14);
    }

    #[test]
    fn parse_specs() {
        assert!(parse_oracle("poly:z1^2", 2).is_ok());
        assert!(parse_oracle("rational:z1/(2-z2)", 2).is_ok());
        assert!(parse_oracle("sin:z1", 2).is_err());
    }
}
