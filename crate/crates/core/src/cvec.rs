//! Small helpers for vectors in C^n stored as `Vec<Complex64>`.
//!
//! The Hermitian product conjugates its second argument:
//! `herm(a, b) = sum_j a_j * conj(b_j)`. The real part of `herm` is the
//! Euclidean inner product of the underlying R^{2n} vectors.

use num_complex::Complex64;

pub type C64 = Complex64;
pub type CVec = Vec<Complex64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn herm(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn real_dot(a: &[C64], b: &[C64]) -> f64 {
    herm(a, b).re
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    norm_sqr(a).sqrt()
}

pub fn add(a: &[C64], b: &[C64]) -> CVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[C64], b: &[C64]) -> CVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[C64], s: C64) -> CVec {
    a.iter().map(|x| x * s).collect()
}

pub fn scale_re(a: &[C64], s: f64) -> CVec {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub fn axpy(a: &[C64], s: C64, b: &[C64]) -> CVec {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn normalized(a: &[C64]) -> Option<CVec> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale_re(a, 1.0 / n))
    } else {
        None
    }
}

pub fn zeros(n: usize) -> CVec {
    vec![C64::new(0.0, 0.0); n]
}

pub fn unit(n: usize, k: usize) -> CVec {
    let mut v = zeros(n);
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Real coordinate `k` of a point viewed in R^{2n}: (x_1, y_1, x_2, y_2, ...).
pub fn real_coord(a: &[C64], k: usize) -> f64 {
    let z = a[k / 2];
    if k % 2 == 0 {
        z.re
    } else {
        z.im
    }
}

/// The k-th real basis vector of R^{2n} as a complex vector.
pub fn real_unit(n: usize, k: usize) -> CVec {
    let mut v = zeros(n);
    v[k / 2] = if k % 2 == 0 { C64::new(1.0, 0.0) } else { I };
    v
}

pub fn fmt_point(a: &[C64]) -> String {
    let parts: Vec<String> = a.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
    format!("({})", parts.join(", "))
}
