//! Composite Gauss-Legendre quadrature with adaptive panel bisection.

use std::sync::OnceLock;

use crate::cvec::C64;
use crate::error::{GleasonError, Result};

pub const GAUSS_POINTS: usize = 16;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(t) and P_{n-1}(t)
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * pn - pm) / (t * t - 1.0);
            let dt = pn / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn rule16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_POINTS))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Panel acceptance: `|coarse - fine| <= tol * max(1, |estimate|)`,
    /// shared in proportion to panel length.
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-9,
            max_panels: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: C64,
    /// Sum of the accepted panel discrepancies.
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

fn panel<F: FnMut(f64) -> Result<C64>>(
    f: &mut F,
    a: f64,
    b: f64,
    evals: &mut usize,
) -> Result<C64> {
    let (x, w) = rule16();
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = C64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        sum += f(m + h * xi)? * *wi;
    }
    *evals += x.len();
    Ok(sum * h)
}

/// Adaptive composite 16-point Gauss-Legendre integral of `f` over [a, b].
pub fn integrate<F: FnMut(f64) -> Result<C64>>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<Quadrature> {
    let mut evaluations = 0;
    if a == b {
        return Ok(Quadrature {
            value: C64::new(0.0, 0.0),
            error: 0.0,
            panels: 0,
            evaluations,
        });
    }
    let whole = panel(&mut f, a, b, &mut evaluations)?;
    let scale = whole.norm().max(1.0);
    let len = (b - a).abs();
    let mut stack = vec![(a, b, whole)];
    let mut value = C64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut panels = 1;
    while let Some((lo, hi, coarse)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&mut f, lo, mid, &mut evaluations)?;
        let right = panel(&mut f, mid, hi, &mut evaluations)?;
        panels += 2;
        let fine = left + right;
        let diff = (fine - coarse).norm();
        let share = opts.tol * scale * (hi - lo).abs() / len;
        if diff <= share || (hi - lo).abs() < 1e-13 * len {
            value += fine;
            error += diff;
            continue;
        }
        if panels > opts.max_panels {
            return Err(GleasonError::QuadratureStall { panels });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    Ok(Quadrature {
        value,
        error,
        panels,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_to_degree_31() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for k in 0..=31 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_sqrt() {
        let q = integrate(
            |s| Ok(C64::new(s.sqrt(), 0.0)),
            0.0,
            1.0,
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((q.value.re - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn smooth_integrand_needs_one_refinement() {
        let q = integrate(
            |s| Ok(C64::new(0.0, s.cos())),
            0.0,
            2.0,
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((q.value.im - 2f64.sin()).abs() < 1e-14);
        assert_eq!(q.panels, 3);
    }

    #[test]
    fn budget_exhaustion_stalls() {
        let opts = QuadOptions {
            tol: 1e-15,
            max_panels: 8,
        };
        let r = integrate(
            |s| Ok(C64::new((1.0 / (s + 1e-9)).sin(), 0.0)),
            0.0,
            1.0,
            &opts,
        );
        assert!(matches!(r, Err(GleasonError::QuadratureStall { .. })));
    }
}
