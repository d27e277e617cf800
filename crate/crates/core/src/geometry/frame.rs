use serde::{Deserialize, Serialize};

use super::Domain;
use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};

/// Inner unit normal and complex tangent frame at a boundary point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFrame {
    pub base: CVec,
    pub normal: CVec,
    pub tangents: Vec<CVec>,
}

fn checked_gradient(domain: &Domain, w: &[C64]) -> Result<CVec> {
    if w.len() != domain.dim() {
        return Err(GleasonError::DimensionMismatch {
            expected: domain.dim(),
            got: w.len(),
        });
    }
    let rv = domain.r(w);
    let tol = domain.boundary_tolerance();
    if rv.abs() > tol {
        return Err(GleasonError::NotOnBoundary {
            residual: rv.abs(),
            tolerance: tol,
        });
    }
    let g = domain.gradient(w);
    if cvec::norm(&g) < 1e-10 * domain.scale() / domain.diameter() {
        return Err(GleasonError::GradientVanishes {
            at: cvec::fmt_point(w),
        });
    }
    Ok(g)
}

/// `-grad r / |grad r|` at a boundary point.
pub fn inner_normal(domain: &Domain, w: &[C64]) -> Result<CVec> {
    let g = checked_gradient(domain, w)?;
    Ok(cvec::scale_re(&g, -1.0 / cvec::norm(&g)))
}

/// Acceptance threshold for Gram-Schmidt residuals of coordinate vectors.
fn seam_threshold(n: usize) -> f64 {
    (0.5f64).min(1.0 / (n as f64).sqrt())
}

/// Orthonormal basis of the complex tangent space `{v : <v, g> = 0}`.
///
/// Coordinate vectors are orthogonalized in index order against `g` and the
/// previously accepted tangents; a candidate is kept when its residual norm
/// reaches the seam threshold. Seams therefore sit where some residual
/// crosses the threshold; the frame is continuous away from them.
pub(crate) fn tangent_basis(g: &[C64]) -> Vec<CVec> {
    let n = g.len();
    let gh = cvec::normalized(g).expect("nonzero gradient");
    let residual = |v: &[C64], basis: &[CVec]| {
        let mut r = v.to_vec();
        for b in basis {
            let p = cvec::herm(&r, b);
            r = cvec::axpy(&r, -p, b);
        }
        r
    };
    let mut basis: Vec<CVec> = vec![gh];
    let mut tangents = Vec::with_capacity(n - 1);
    let tau = seam_threshold(n);
    let mut used = vec![false; n];
    for k in 0..n {
        if tangents.len() == n - 1 {
            break;
        }
        let r = residual(&cvec::unit(n, k), &basis);
        if cvec::norm(&r) >= tau {
            let t = cvec::normalized(&r).unwrap();
            basis.push(t.clone());
            tangents.push(t);
            used[k] = true;
        }
    }
    while tangents.len() < n - 1 {
        let (k, r) = (0..n)
            .filter(|k| !used[*k])
            .map(|k| (k, residual(&cvec::unit(n, k), &basis)))
            .max_by(|a, b| {
                cvec::norm(&a.1)
                    .total_cmp(&cvec::norm(&b.1))
                    .then(b.0.cmp(&a.0))
            })
            .expect("enough coordinate vectors");
        let t = cvec::normalized(&r).unwrap();
        basis.push(t.clone());
        tangents.push(t);
        used[k] = true;
    }
    tangents
}

pub fn tangent_frame(domain: &Domain, w: &[C64]) -> Result<BoundaryFrame> {
    let g = checked_gradient(domain, w)?;
    Ok(BoundaryFrame {
        base: w.to_vec(),
        normal: cvec::scale_re(&g, -1.0 / cvec::norm(&g)),
        tangents: tangent_basis(&g),
    })
}

/// Hermitian projection of `v` onto the complex line through 0 and `z`.
pub fn project_onto_line(v: &[C64], z: &[C64]) -> Result<CVec> {
    let zz = cvec::norm_sqr(z);
    if zz.sqrt() < 1e-14 {
        return Err(GleasonError::ZeroDirection);
    }
    Ok(cvec::scale(z, cvec::herm(v, z) / zz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::{c, I};
    use proptest::prelude::*;

    fn close(a: &[C64], b: &[C64]) -> bool {
        cvec::dist(a, b) < 1e-12
    }

    #[test]
    fn normals() {
        let ball = Domain::unit_ball(2);
        let n = inner_normal(&ball, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(close(&n, &[c(-1.0, 0.0), c(0.0, 0.0)]));
        let n = inner_normal(&ball, &[c(0.0, 0.0), I]).unwrap();
        assert!(close(&n, &[c(0.0, 0.0), -I]));
        // grad(|z1|^2 + 4|z2|^2 - 1) at (0, 1/2) is (0, 4), inner normal (0, -1)
        let ell = Domain::ellipsoid(&[1.0, 4.0]).unwrap();
        let n = inner_normal(&ell, &[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(close(&n, &[c(0.0, 0.0), c(-1.0, 0.0)]));
    }

    #[test]
    fn normal_errors() {
        let ball = Domain::unit_ball(2);
        assert!(matches!(
            inner_normal(&ball, &[c(0.5, 0.0), c(0.0, 0.0)]),
            Err(GleasonError::NotOnBoundary { .. })
        ));
        let flat = Domain::new(
            "flat",
            crate::geometry::DomainKind::Implicit {
                r: std::sync::Arc::new(|z: &[C64]| (z[0].norm_sqr() - 1.0).powi(3)),
            },
            1,
            1.0,
            vec![(-2.0, 2.0); 2],
            cvec::zeros(1),
            true,
        )
        .unwrap();
        assert!(matches!(
            inner_normal(&flat, &[c(1.0, 0.0)]),
            Err(GleasonError::GradientVanishes { .. })
        ));
    }

    #[test]
    fn frames() {
        let ball = Domain::unit_ball(2);
        let f = tangent_frame(&ball, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(close(&f.tangents[0], &[c(0.0, 0.0), c(1.0, 0.0)]));
        let f = tangent_frame(&ball, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(close(&f.tangents[0], &[c(1.0, 0.0), c(0.0, 0.0)]));
        let ell = Domain::ellipsoid(&[1.0, 4.0]).unwrap();
        let f = tangent_frame(&ell, &[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(close(&f.tangents[0], &[c(1.0, 0.0), c(0.0, 0.0)]));
    }

    #[test]
    fn projections() {
        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!(close(&project_onto_line(&e1, &e1).unwrap(), &e1));
        assert!(close(
            &project_onto_line(&e2, &e1).unwrap(),
            &[c(0.0, 0.0); 2]
        ));
        let p = project_onto_line(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), I]).unwrap();
        assert!(close(&p, &[c(0.5, -0.5), c(0.5, 0.5)]));
        assert_eq!(
            project_onto_line(&e1, &[c(0.0, 0.0); 2]),
            Err(GleasonError::ZeroDirection)
        );
    }

    fn cvec_strategy(n: usize) -> impl Strategy<Value = CVec> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_orthogonal(v in cvec_strategy(3), z in cvec_strategy(3)) {
            prop_assume!(cvec::norm(&z) > 1e-3);
            let p = project_onto_line(&v, &z).unwrap();
            let pp = project_onto_line(&p, &z).unwrap();
            prop_assert!(cvec::dist(&p, &pp) < 1e-12);
            let rest = cvec::sub(&v, &p);
            prop_assert!(cvec::herm(&rest, &z).norm() < 1e-12);
            prop_assert!(cvec::dist(&cvec::add(&p, &rest), &v) < 1e-15);
        }

        #[test]
        fn frame_annihilates_complex_gradient(w in cvec_strategy(3)) {
            prop_assume!(cvec::norm(&w) > 1e-2);
            let ell = Domain::ellipsoid(&[1.0, 4.0, 2.0]).unwrap();
            let b = ell.project_to_boundary(&w).unwrap();
            let f = tangent_frame(&ell, &b).unwrap();
            let dz = ell.complex_gradient(&b);
            let scale = cvec::norm(&dz);
            for t in &f.tangents {
                let s: C64 = t.iter().zip(&dz).map(|(a, b)| a * b).sum();
                prop_assert!(s.norm() < 1e-10 * scale);
                prop_assert!((cvec::norm(t) - 1.0).abs() < 1e-12);
            }
            let g01 = cvec::herm(&f.tangents[0], &f.tangents[1]);
            prop_assert!(1.0 - g01.norm_sqr() >= 1e-6);
            let step = cvec::axpy(&b, c(1e-4, 0.0), &f.normal);
            prop_assert!(ell.r(&step) < 0.0);
        }
    }
}
