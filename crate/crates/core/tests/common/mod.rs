#![allow(dead_code)]

use std::sync::OnceLock;

use gleason::cvec::{c, CVec, C64};
use gleason::geometry::{collar_cover, CollarCover, CoverParams, Domain};

/// `±e_k` and `±i e_k` on the unit sphere.
pub fn cross_centers(n: usize) -> Vec<CVec> {
    let mut out = Vec::new();
    for k in 0..n {
        for u in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[k] = u;
            out.push(v);
        }
    }
    out
}

pub fn ball() -> &'static (Domain, CollarCover) {
    static CELL: OnceLock<(Domain, CollarCover)> = OnceLock::new();
    CELL.get_or_init(|| {
        let d = Domain::unit_ball(2);
        let cover = collar_cover(&d, &CoverParams::default()).unwrap();
        (d, cover)
    })
}

pub fn ellipsoid() -> &'static (Domain, CollarCover) {
    static CELL: OnceLock<(Domain, CollarCover)> = OnceLock::new();
    CELL.get_or_init(|| {
        let d = Domain::ellipsoid(&[1.0, 4.0]).unwrap();
        let cover = collar_cover(&d, &CoverParams::default()).unwrap();
        (d, cover)
    })
}

/// `{1/2 < |z1| < 1} x {|z2| < 1}` with Gleason point (3/4, 0).
pub fn annulus() -> &'static (Domain, CollarCover) {
    static CELL: OnceLock<(Domain, CollarCover)> = OnceLock::new();
    CELL.get_or_init(|| {
        let d = Domain::annulus_product(0.5, 1.0, 1.0)
            .unwrap()
            .recentered(&[c(0.75, 0.0), c(0.0, 0.0)])
            .unwrap();
        let params = CoverParams {
            budget: 300,
            sigma_accept: 0.05,
            ..CoverParams::default()
        }
        .lenient();
        let cover = collar_cover(&d, &params).unwrap();
        (d, cover)
    })
}
