mod common;

use gleason::cconvex::check_line;
use gleason::cvec::{self, CVec, C64};
use gleason::geometry::Domain;
use gleason::operators::{decompose_polynomial, random_polynomial};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cvec_strategy(n: usize, r: f64) -> impl Strategy<Value = CVec> {
    prop::collection::vec((-r..r, -r..r), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_division_is_exact(seed in any::<u64>(), degree in 1u32..9, p in cvec_strategy(2, 0.5)) {
        let d = Domain::unit_ball(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = random_polynomial(2, degree, &mut rng);
        let r = decompose_polynomial(&poly, &p, &d).unwrap();
        prop_assert!(r.relative_remainder < 1e-12);
    }

    #[test]
    fn convex_slices_are_discs_at_both_resolutions(a in cvec_strategy(2, 0.6), b in cvec_strategy(2, 1.0)) {
        prop_assume!(cvec::norm(&b) > 1e-3);
        let b = cvec::normalized(&b).unwrap();
        let d = Domain::ellipsoid(&[1.0, 4.0]).unwrap();
        prop_assume!(d.contains(&a));
        let coarse = check_line(&d, 0, &a, &b, 64).unwrap();
        let fine = check_line(&d, 0, &a, &b, 128).unwrap();
        for l in [&coarse, &fine] {
            prop_assert!(l.connected && l.simply_connected && l.transversal);
            prop_assert!(l.failure.is_none());
        }
    }
}
