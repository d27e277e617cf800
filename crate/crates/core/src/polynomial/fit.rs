use nalgebra::{DMatrix, DVector};

use super::poly::{multi_indices, MultiIndex, Polynomial};
use crate::cvec::{CVec, C64};
use crate::error::{GleasonError, Result};
use crate::oracle::HolomorphicOracle;

/// Condition-number ceiling for the scaled least-squares matrix.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct Approximant {
    pub poly: Polynomial,
    pub degree: u32,
    /// `max_S |f - P|`
    pub residual_sup: f64,
    /// root-mean-square residual over S
    pub residual_rms: f64,
    /// condition estimate of the column-scaled design matrix
    pub condition: f64,
}

/// Least-squares fit of `f` on the sample set by a polynomial of degree
/// `<= degree` with zero constant term.
///
/// The design matrix has one column per monomial `z^alpha`, `1 <= |alpha| <= d`
/// (no constant column, so the fit vanishes at 0 exactly). Columns are
/// scaled to unit norm and the system is solved by Householder QR.
pub fn fit_approximant(
    f: &dyn HolomorphicOracle,
    samples: &[CVec],
    degree: u32,
) -> Result<Approximant> {
    let n = f.dim();
    if degree == 0 {
        return Err(GleasonError::InvalidInput(
            "approximant degree must be >= 1".into(),
        ));
    }
    let basis: Vec<MultiIndex> = multi_indices(n, 1, degree);
    if samples.len() < basis.len() + 1 {
        return Err(GleasonError::InvalidInput(format!(
            "{} samples cannot determine {} coefficients",
            samples.len(),
            basis.len()
        )));
    }
    let rows = samples.len();
    let cols = basis.len();
    let mut a = DMatrix::<C64>::zeros(rows, cols);
    let mut rhs = DVector::<C64>::zeros(rows);
    for (r, z) in samples.iter().enumerate() {
        if z.len() != n {
            return Err(GleasonError::DimensionMismatch {
                expected: n,
                got: z.len(),
            });
        }
        rhs[r] = f.eval(z);
        for (col, alpha) in basis.iter().enumerate() {
            let mut m = C64::new(1.0, 0.0);
            for (zj, &k) in z.iter().zip(alpha) {
                m *= zj.powu(k);
            }
            a[(r, col)] = m;
        }
    }
    let mut col_scale = vec![1.0; cols];
    for col in 0..cols {
        let norm = a.column(col).norm();
        if norm == 0.0 {
            return Err(GleasonError::IllConditioned {
                condition: f64::INFINITY,
            });
        }
        col_scale[col] = 1.0 / norm;
        for r in 0..rows {
            a[(r, col)] *= col_scale[col];
        }
    }

    let sv = a.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if condition > MAX_CONDITION {
        return Err(GleasonError::IllConditioned { condition });
    }

    let qr = a.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let qtb = q.adjoint() * &rhs;
    let x = r
        .solve_upper_triangular(&qtb)
        .ok_or(GleasonError::IllConditioned {
            condition: f64::INFINITY,
        })?;

    let mut poly = Polynomial::zero(n);
    for (col, alpha) in basis.iter().enumerate() {
        poly.add_term(alpha.clone(), x[col] * col_scale[col]);
    }
    let mut sup: f64 = 0.0;
    let mut ss = 0.0;
    for (z, fz) in samples.iter().zip(rhs.iter()) {
        let e = (fz - poly.eval_unchecked(z)).norm();
        sup = sup.max(e);
        ss += e * e;
    }
    Ok(Approximant {
        poly,
        degree,
        residual_sup: sup,
        residual_rms: (ss / rows as f64).sqrt(),
        condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;
    use crate::oracle::Rational;
    use crate::polynomial::parse_polynomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ball_samples(count: usize, radius: f64, seed: u64) -> Vec<CVec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let z: CVec = (0..2)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            if crate::cvec::norm(&z) < radius {
                out.push(z);
            }
        }
        out
    }

    #[test]
    fn reproduces_polynomials() {
        let p = parse_polynomial("z1^3 - 2i*z1*z2 + 0.5*z2^2 + z2", 2).unwrap();
        let s = ball_samples(200, 0.9, 1);
        let fit = fit_approximant(&p, &s, 4).unwrap();
        assert!(fit.residual_sup < 1e-10, "{}", fit.residual_sup);
        assert!((fit.poly.coefficient(&[1, 1]) - c(0.0, -2.0)).norm() < 1e-9);
        assert!((fit.poly.coefficient(&[3, 0]) - c(1.0, 0.0)).norm() < 1e-9);
        assert!(fit.poly.coefficient(&[4, 0]).norm() < 1e-9);
    }

    #[test]
    fn fit_vanishes_at_origin() {
        let s = ball_samples(200, 0.9, 2);
        let fit = fit_approximant(&Rational::Z1OverTwoMinusZ2, &s, 5).unwrap();
        assert_eq!(fit.poly.constant_term(), c(0.0, 0.0));
        assert!(fit.poly.vanishes_at_origin());
    }

    #[test]
    fn rational_residual_decreases_with_degree() {
        // z1/(2 - z2) = sum_k z1 z2^k / 2^(k+1); the degree-d truncation error
        // on |z| < 0.9 is bounded by the geometric tail.
        let s = ball_samples(400, 0.9, 3);
        let mut prev = f64::INFINITY;
        for d in 2..=10 {
            let fit = fit_approximant(&Rational::Z1OverTwoMinusZ2, &s, d).unwrap();
            let tail = (0.9f64 / 2.0).powi(d as i32) / (1.0 - 0.45);
            assert!(
                fit.residual_sup < prev,
                "degree {d}: {} !< {prev}",
                fit.residual_sup
            );
            assert!(
                fit.residual_sup <= tail,
                "degree {d}: {} > {tail}",
                fit.residual_sup
            );
            prev = fit.residual_sup;
        }
    }

    #[test]
    fn too_few_samples() {
        let s = ball_samples(5, 0.9, 4);
        assert!(fit_approximant(&Rational::Z1OverTwoMinusZ2, &s, 3).is_err());
    }

    #[test]
    fn degenerate_samples_are_ill_conditioned() {
        // all samples on the line z2 = 0 cannot resolve z2 monomials
        let s: Vec<CVec> = (0..50)
            .map(|k| vec![c(0.01 * k as f64, 0.003 * k as f64), c(0.0, 0.0)])
            .collect();
        let p = parse_polynomial("z1", 2).unwrap();
        assert!(matches!(
            fit_approximant(&p, &s, 2),
            Err(GleasonError::IllConditioned { .. })
        ));
    }
}
