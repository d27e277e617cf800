mod common;

use gleason::cvec::{self, c, C64};
use gleason::error::GleasonError;
use gleason::geometry::verify_lemma1;
use gleason::operators::{
    build_k_sample, continuity_experiment, estimate_k, k_ratio, DecomposeOptions, KSampleOptions,
};
use gleason::oracle::Rational;
use gleason::polynomial::{parse_polynomial, Polynomial};

#[test]
fn lemma1_on_the_ball_has_no_violations() {
    let (d, cover) = common::ball();
    let rep = verify_lemma1(d, cover, 2000, 11);
    assert_eq!(rep.samples, 2000);
    assert_eq!(rep.violations, 0);
    let mut buf = Vec::new();
    rep.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("patch_id,s,t_abs,margin,inside\n"));
    assert_eq!(text.lines().count(), 2001);
}

#[test]
fn coordinate_function_ratio_is_one_over_its_sup_on_s() {
    let (d, cover) = common::ball();
    let sample =
        build_k_sample(d, cover, &cvec::zeros(2), 0.3, &KSampleOptions::default()).unwrap();
    for i in 0..2 {
        let p = Polynomial::coordinate(2, i);
        let sup = sample.s.iter().map(|x| x[i].norm()).fold(0.0, f64::max);
        let ratio = k_ratio(&p, &sample).unwrap();
        // T_i(z_i) = 1 and T_j(z_i) = 0
        assert!((ratio - 1.0 / sup).abs() < 1e-12);
    }
}

#[test]
fn sample_s_contains_b_and_stays_inside() {
    let (d, cover) = common::ball();
    let sample = build_k_sample(
        d,
        cover,
        &[c(0.1, 0.0), c(0.0, 0.1)],
        0.2,
        &KSampleOptions::default(),
    )
    .unwrap();
    assert_eq!(sample.b.len(), KSampleOptions::default().b_points);
    assert!(sample.b.iter().all(|x| sample.s.contains(x)));
    assert!(sample.s.iter().all(|x| d.contains(x)));
}

#[test]
fn k_table_is_deterministic() {
    let (d, cover) = common::ball();
    let sample =
        build_k_sample(d, cover, &cvec::zeros(2), 0.3, &KSampleOptions::default()).unwrap();
    let a = estimate_k(&sample, 2, &[1, 3, 5], 4, 9).unwrap();
    let b = estimate_k(&sample, 2, &[1, 3, 5], 4, 9).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rows.len(), 12);
    assert!(a.rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
}

fn tangential(z: &[C64]) -> Vec<C64> {
    cvec::normalized(&[-z[1].conj(), z[0].conj()]).unwrap()
}

#[test]
fn polynomial_deltas_decay_at_first_order() {
    let (d, cover) = common::ball();
    let p = parse_polynomial("0.25*z1^2 + 0.25*z1*z2 - 0.25*i*z2^3", 2).unwrap();
    let z = [c(0.05, 0.0), c(0.0, 0.99)];
    let ks: Vec<u32> = (3..=12).collect();
    let rep = continuity_experiment(
        &p,
        &z,
        &tangential(&z),
        &ks,
        d,
        cover,
        &DecomposeOptions::default(),
    )
    .unwrap();
    assert!(rep.decays_below(1e-4));
    for w in rep.rows.windows(2) {
        let ratio = w[1].delta_t / w[0].delta_t;
        assert!(
            ratio < 0.6,
            "halving the step must roughly halve the delta, got {ratio}"
        );
    }
}

#[test]
fn constant_sequence_has_zero_deltas() {
    let (d, cover) = common::ball();
    let z = [c(0.05, 0.0), c(0.0, 0.99)];
    let rep = continuity_experiment(
        &Rational::Z1OverTwoMinusZ2,
        &z,
        &cvec::zeros(2),
        &[3, 4, 5],
        d,
        cover,
        &Default::default(),
    )
    .unwrap();
    assert!(rep
        .rows
        .iter()
        .all(|r| r.delta_i == 0.0 && r.delta_t == 0.0));
}

#[test]
fn leaving_the_patch_is_a_seam() {
    let (d, cover) = common::ball();
    let z = [c(0.05, 0.0), c(0.0, 0.99)];
    let inward = [c(0.0, 0.0), c(0.0, -1.0)];
    let err = continuity_experiment(
        &Rational::Z1OverTwoMinusZ2,
        &z,
        &inward,
        &[1],
        d,
        cover,
        &Default::default(),
    )
    .unwrap_err();
    assert!(matches!(err, GleasonError::PatchSeam { .. }));
}
