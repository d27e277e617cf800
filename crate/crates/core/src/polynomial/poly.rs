use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::cvec::C64;
use crate::error::{GleasonError, Result};

/// Exponent vector of a monomial `z^alpha = z_1^alpha_1 ... z_n^alpha_n`.
pub type MultiIndex = Vec<u32>;

/// Multivariate polynomial over C stored as a map from multi-index to
/// coefficient. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, C64>,
}

pub fn total_degree(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

/// All multi-indices in `n` variables with `lo <= |alpha| <= hi`, ordered by
/// total degree and then lexicographically.
pub fn multi_indices(n: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() == n - 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(n, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "polynomial needs at least one variable");
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: C64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn monomial(alpha: MultiIndex, c: C64) -> Self {
        let mut p = Self::zero(alpha.len());
        p.add_term(alpha, c);
        p
    }

    /// The coordinate function `z_i` (zero-based `i`).
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut alpha = vec![0; n];
        alpha[i] = 1;
        Self::monomial(alpha, C64::new(1.0, 0.0))
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        let mut p = Self::zero(n);
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(GleasonError::DimensionMismatch {
                    expected: n,
                    got: alpha.len(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: C64) {
        debug_assert_eq!(alpha.len(), self.n);
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(slot) => {
                if c != C64::new(0.0, 0.0) {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == C64::new(0.0, 0.0) {
                    slot.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> C64 {
        self.terms.get(alpha).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn constant_term(&self) -> C64 {
        self.coefficient(&vec![0; self.n])
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term() == C64::new(0.0, 0.0)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|a| total_degree(a))
            .max()
            .unwrap_or(0)
    }

    pub fn max_coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.n {
            return Err(GleasonError::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        Ok(())
    }

    /// Evaluates with a table of coordinate powers, so each monomial costs
    /// `n` multiplications.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        self.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub fn eval_unchecked(&self, z: &[C64]) -> C64 {
        let deg = self.degree() as usize;
        let powers: Vec<Vec<C64>> = z
            .iter()
            .map(|&zj| {
                let mut row = Vec::with_capacity(deg + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=deg {
                    row.push(acc);
                    acc *= zj;
                }
                row
            })
            .collect();
        self.terms
            .iter()
            .map(|(alpha, c)| {
                alpha
                    .iter()
                    .zip(&powers)
                    .fold(*c, |acc, (&k, row)| acc * row[k as usize])
            })
            .sum()
    }

    /// `D_i P`, zero-based coordinate index.
    pub fn partial(&self, i: usize) -> Result<Polynomial> {
        if i >= self.n {
            return Err(GleasonError::DimensionMismatch {
                expected: self.n,
                got: i + 1,
            });
        }
        let mut out = Polynomial::zero(self.n);
        for (alpha, c) in &self.terms {
            if alpha[i] == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta[i] -= 1;
            out.add_term(beta, c * alpha[i] as f64);
        }
        Ok(out)
    }

    /// Closed form of `T_i(P)(z) = int_0^1 D_i P(lambda z) d lambda`:
    /// each monomial `c z^alpha` maps to `c alpha_i z^(alpha - e_i) / |alpha|`.
    pub fn leibenzon(&self, i: usize) -> Result<Polynomial> {
        if i >= self.n {
            return Err(GleasonError::DimensionMismatch {
                expected: self.n,
                got: i + 1,
            });
        }
        if !self.vanishes_at_origin() {
            return Err(GleasonError::NonVanishing {
                constant: format!("{}", self.constant_term()),
            });
        }
        let mut out = Polynomial::zero(self.n);
        for (alpha, c) in &self.terms {
            if alpha[i] == 0 {
                continue;
            }
            let deg = total_degree(alpha) as f64;
            let mut beta = alpha.clone();
            beta[i] -= 1;
            out.add_term(beta, c * (alpha[i] as f64 / deg));
        }
        Ok(out)
    }

    /// All `n` Leibenzon components at once.
    pub fn leibenzon_all(&self) -> Result<Vec<Polynomial>> {
        (0..self.n).map(|i| self.leibenzon(i)).collect()
    }

    /// `int_0^1 D_i P(p + lambda (z - p)) d lambda` expanded in powers of z,
    /// so that `P(z) - P(p) = sum_i (z_i - p_i) f_i(z)`.
    ///
    /// Writing `p + lambda (z - p) = (1 - lambda) p + lambda z`, each power of
    /// `D_i P` expands with nonnegative Beta weights
    /// `int lambda^k (1 - lambda)^m = k! m! / (k + m + 1)!`, which avoids the
    /// cancellation of translating to p and back.
    pub fn leibenzon_at(&self, i: usize, p: &[C64]) -> Result<Polynomial> {
        self.check_point(p)?;
        if i >= self.n {
            return Err(GleasonError::DimensionMismatch {
                expected: self.n,
                got: i + 1,
            });
        }
        let deg = self.degree() as usize;
        let mut binom = vec![vec![0.0f64; deg + 1]; deg + 1];
        for k in 0..=deg {
            binom[k][0] = 1.0;
            for j in 1..=k {
                binom[k][j] = binom[k - 1][j - 1] + if j < k { binom[k - 1][j] } else { 0.0 };
            }
        }
        let pows: Vec<Vec<C64>> = p
            .iter()
            .map(|&x| {
                let mut row = vec![C64::new(1.0, 0.0); deg + 1];
                for k in 1..=deg {
                    row[k] = row[k - 1] * x;
                }
                row
            })
            .collect();
        let mut out = Polynomial::zero(self.n);
        for (alpha, c) in &self.terms {
            if alpha[i] == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta[i] -= 1;
            let total = total_degree(&beta) as usize;
            // (index, coefficient, |k|) over the partial products
            let mut partial: Vec<(MultiIndex, C64, usize)> =
                vec![(Vec::with_capacity(self.n), c * alpha[i] as f64, 0)];
            for (j, &b) in beta.iter().enumerate() {
                let b = b as usize;
                let mut next = Vec::with_capacity(partial.len() * (b + 1));
                for (idx, coef, kk) in &partial {
                    for k in 0..=b {
                        let w = binom[b][k] * pows[j][b - k];
                        if w == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut idx2 = idx.clone();
                        idx2.push(k as u32);
                        next.push((idx2, coef * w, kk + k));
                    }
                }
                partial = next;
            }
            for (idx, coef, kk) in partial {
                let weight = 1.0 / ((total + 1) as f64 * binom[total][kk]);
                out.add_term(idx, coef * weight);
            }
        }
        Ok(out)
    }

    /// `Q(z) = P(z + shift)` expanded in monomials.
    pub fn translate(&self, shift: &[C64]) -> Result<Polynomial> {
        self.check_point(shift)?;
        let deg = self.degree() as usize;
        // binom[k][j] = C(k, j)
        let mut binom = vec![vec![0.0f64; deg + 1]; deg + 1];
        for k in 0..=deg {
            binom[k][0] = 1.0;
            for j in 1..=k {
                binom[k][j] = binom[k - 1][j - 1] + if j < k { binom[k - 1][j] } else { 0.0 };
            }
        }
        let shift_pows: Vec<Vec<C64>> = shift
            .iter()
            .map(|&p| {
                let mut row = vec![C64::new(1.0, 0.0); deg + 1];
                for k in 1..=deg {
                    row[k] = row[k - 1] * p;
                }
                row
            })
            .collect();
        let mut out = Polynomial::zero(self.n);
        for (alpha, c) in &self.terms {
            // (z_j + p_j)^a = sum_b C(a, b) p_j^(a-b) z_j^b, expanded per coordinate
            let mut partial: Vec<(MultiIndex, C64)> = vec![(Vec::with_capacity(self.n), *c)];
            for (j, &a) in alpha.iter().enumerate() {
                let a = a as usize;
                let mut next = Vec::with_capacity(partial.len() * (a + 1));
                for (idx, coef) in &partial {
                    for b in 0..=a {
                        let w = binom[a][b] * shift_pows[j][a - b];
                        if w == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut idx2 = idx.clone();
                        idx2.push(b as u32);
                        next.push((idx2, coef * w));
                    }
                }
                partial = next;
            }
            for (idx, coef) in partial {
                out.add_term(idx, coef);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    /// Sup of `|P|` over a finite point set.
    pub fn sup_norm(&self, points: &[Vec<C64>]) -> f64 {
        points
            .iter()
            .map(|z| self.eval_unchecked(z).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    alpha: a.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Result<Self> {
        if json.n == 0 {
            return Err(GleasonError::InvalidInput("polynomial with n = 0".into()));
        }
        Self::from_terms(
            json.n,
            json.terms
                .iter()
                .map(|t| (t.alpha.clone(), C64::new(t.re, t.im))),
        )
    }
}

/// Wire format: `{n, terms: [{alpha: [..], re, im}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

fn combine(a: &Polynomial, b: &Polynomial, sign: f64) -> Polynomial {
    assert_eq!(a.n, b.n, "polynomial dimensions differ");
    let mut out = a.clone();
    for (alpha, c) in &b.terms {
        out.add_term(alpha.clone(), c * sign);
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, -1.0)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n, "polynomial dimensions differ");
        let mut out = Polynomial::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let ab: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(ab, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;

    fn z1z2() -> Polynomial {
        Polynomial::monomial(vec![1, 1], c(1.0, 0.0))
    }

    #[test]
    fn eval_square() {
        let p = Polynomial::monomial(vec![2, 0], c(1.0, 0.0));
        assert_eq!(p.eval(&[c(3.0, 0.0), c(0.0, 0.0)]).unwrap(), c(9.0, 0.0));
    }

    #[test]
    fn partials() {
        assert_eq!(z1z2().partial(0).unwrap(), Polynomial::coordinate(2, 1));
        let p = Polynomial::monomial(vec![2, 3], c(1.0, 0.0));
        assert_eq!(
            p.partial(1).unwrap(),
            Polynomial::monomial(vec![2, 2], c(3.0, 0.0))
        );
        assert!(matches!(
            p.partial(2),
            Err(GleasonError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn leibenzon_examples() {
        let sq = Polynomial::monomial(vec![2, 0], c(1.0, 0.0));
        assert_eq!(sq.leibenzon(0).unwrap(), Polynomial::coordinate(2, 0));
        assert!(sq.leibenzon(1).unwrap().is_zero());
        let p = z1z2();
        assert_eq!(
            p.leibenzon(0).unwrap(),
            Polynomial::monomial(vec![0, 1], c(0.5, 0.0))
        );
        assert_eq!(
            p.leibenzon(1).unwrap(),
            Polynomial::monomial(vec![1, 0], c(0.5, 0.0))
        );
    }

    #[test]
    fn leibenzon_rejects_constant_term() {
        let p = &Polynomial::constant(2, c(1.0, 0.0)) + &z1z2();
        assert!(matches!(
            p.leibenzon(0),
            Err(GleasonError::NonVanishing { .. })
        ));
    }

    #[test]
    fn monomial_rule_exhaustive() {
        for n in 1..=3usize {
            for alpha in multi_indices(n, 1, 10) {
                let p = Polynomial::monomial(alpha.clone(), c(1.0, 0.0));
                let deg = total_degree(&alpha) as f64;
                for i in 0..n {
                    let t = p.leibenzon(i).unwrap();
                    if alpha[i] == 0 {
                        assert!(t.is_zero());
                    } else {
                        let mut beta = alpha.clone();
                        beta[i] -= 1;
                        assert_eq!(t.len(), 1);
                        assert_eq!(t.coefficient(&beta), c(alpha[i] as f64 / deg, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn euler_identity_on_monomials() {
        // sum_i z_i D_i z^alpha = |alpha| z^alpha
        for alpha in multi_indices(3, 0, 6) {
            let p = Polynomial::monomial(alpha.clone(), c(1.0, 0.0));
            let mut acc = Polynomial::zero(3);
            for i in 0..3 {
                acc = &acc + &(&Polynomial::coordinate(3, i) * &p.partial(i).unwrap());
            }
            assert_eq!(acc, p.scale(c(total_degree(&alpha) as f64, 0.0)));
        }
    }

    #[test]
    fn translate_matches_pointwise() {
        let p = Polynomial::from_terms(
            2,
            vec![
                (vec![2, 1], c(1.0, -0.5)),
                (vec![0, 3], c(0.25, 0.0)),
                (vec![1, 0], c(0.0, 2.0)),
            ],
        )
        .unwrap();
        let shift = [c(0.3, -0.1), c(-0.2, 0.4)];
        let q = p.translate(&shift).unwrap();
        let z = [c(0.11, 0.7), c(-0.5, 0.05)];
        let zs = [z[0] + shift[0], z[1] + shift[1]];
        let lhs = q.eval(&z).unwrap();
        let rhs = p.eval(&zs).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn canonical_form_drops_cancelled_terms() {
        let p = z1z2();
        let d = &p - &p;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn multi_index_count() {
        // C(n + d, d) monomials of degree <= d
        assert_eq!(multi_indices(2, 0, 4).len(), 15);
        assert_eq!(multi_indices(3, 0, 3).len(), 20);
        assert_eq!(multi_indices(2, 1, 4).len(), 14);
    }

    #[test]
    fn leibenzon_at_matches_translation() {
        let p = Polynomial::from_terms(
            2,
            [
                (vec![3, 1], c(1.0, -0.5)),
                (vec![0, 4], c(0.0, 2.0)),
                (vec![1, 2], c(-1.5, 0.0)),
                (vec![1, 0], c(0.25, 0.0)),
                (vec![0, 0], c(3.0, 0.0)),
            ],
        )
        .unwrap();
        let at = [c(0.3, -0.2), c(-0.1, 0.4)];
        let shifted = p.translate(&at).unwrap();
        let q = &shifted - &Polynomial::constant(2, shifted.constant_term());
        let back = [-at[0], -at[1]];
        for i in 0..2 {
            let via_shift = q.leibenzon(i).unwrap().translate(&back).unwrap();
            let direct = p.leibenzon_at(i, &at).unwrap();
            assert!((&via_shift - &direct).max_coefficient_norm() < 1e-13);
        }
        let origin = [c(0.0, 0.0), c(0.0, 0.0)];
        let q0 = &p - &Polynomial::constant(2, p.constant_term());
        assert_eq!(
            p.leibenzon_at(0, &origin).unwrap(),
            q0.leibenzon(0).unwrap()
        );
    }
}
