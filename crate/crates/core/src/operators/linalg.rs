//! Small dense complex systems by Cramer's rule.

use nalgebra::DMatrix;

use crate::cvec::{CVec, C64};
use crate::error::{GleasonError, Result};

pub const DETERMINANT_FLOOR: f64 = 1e-8;

/// Solves `rows x = rhs` by Cramer's rule, determinants via LU.
/// Returns the solution and `|det rows|`.
pub fn cramer_solve(rows: &[CVec], rhs: &[C64]) -> Result<(CVec, f64)> {
    let n = rows.len();
    if rhs.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(GleasonError::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let det = m.clone().determinant();
    if det.norm() < DETERMINANT_FLOOR {
        return Err(GleasonError::SingularSystem {
            determinant: det.norm(),
        });
    }
    let x = (0..n)
        .map(|k| {
            let mut mk = m.clone();
            for i in 0..n {
                mk[(i, k)] = rhs[i];
            }
            mk.determinant() / det
        })
        .collect();
    Ok((x, det.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_dense_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rows: Vec<CVec> = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                })
                .collect();
            let rhs: CVec = (0..3)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let m = DMatrix::from_fn(3, 3, |i, j| rows[i][j]);
            if m.clone().determinant().norm() < 1e-2 {
                continue;
            }
            let inv = m.try_inverse().unwrap();
            let (x, _) = cramer_solve(&rows, &rhs).unwrap();
            for i in 0..3 {
                let xi: C64 = (0..3).map(|j| inv[(i, j)] * rhs[j]).sum();
                assert!((xi - x[i]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_rows_are_rejected() {
        let rows = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ];
        assert!(matches!(
            cramer_solve(&rows, &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(GleasonError::SingularSystem { .. })
        ));
    }
}
