mod common;

use gleason::cvec::{self, c, C64};
use gleason::error::GleasonError;
use gleason::geometry::{inner_normal, project_onto_line};
use gleason::planner::{mu, plan_path, validate_path, PlanKind, PlanOptions};

#[test]
fn radial_mu_on_the_ball() {
    let (d, _) = common::ball();
    let delta = 0.01;
    let z = [c(1.0 - delta, 0.0), c(0.0, 0.0)];
    let w = [c(1.0, 0.0), c(0.0, 0.0)];
    let n = inner_normal(d, &w).unwrap();
    assert!(cvec::dist(&n, &[c(-1.0, 0.0), c(0.0, 0.0)]) < 1e-12);
    let p = project_onto_line(&n, &w).unwrap();
    assert!(cvec::dist(&p, &[c(-1.0, 0.0), c(0.0, 0.0)]) < 1e-12);
    let m = mu(&z, &w, &w, d).unwrap();
    assert!((m - C64::new(-1.0 / (1.0 - delta), 0.0)).norm() < 1e-12);
}

#[test]
fn orthogonal_projection_is_not_collinear() {
    let (d, _) = common::ball();
    let w = [c(1.0, 0.0), c(0.0, 0.0)];
    let err = mu(&[c(0.0, 0.0), c(0.5, 0.0)], &w, &w, d).unwrap_err();
    assert!(matches!(err, GleasonError::NotCollinear { .. }));
}

#[test]
fn convex_interior_point_gets_the_straight_segment() {
    let (d, cover) = common::ball();
    let z = [c(0.3, -0.2), c(0.1, 0.4)];
    let plan = plan_path(d, cover, &z, &PlanOptions::default()).unwrap();
    assert_eq!(plan.kind, PlanKind::Interior);
    assert_eq!(plan.gamma1, vec![c(0.0, 0.0), c(1.0, 0.0)]);
    assert!(plan.gamma2.is_none());
    assert!(validate_path(d, cover, &plan, 400, None).passed());
}

#[test]
fn collar_plan_walks_the_radius() {
    let (d, cover) = common::ball();
    let z = [c(0.99, 0.0), c(0.0, 0.0)];
    let plan = plan_path(d, cover, &z, &PlanOptions::default()).unwrap();
    assert_eq!(plan.kind, PlanKind::Collar);
    let part = plan.gamma2.clone().unwrap();
    assert_eq!(plan.gamma(1.0), c(1.0, 0.0));
    // z + (1 - s) pi_w(n_k), w the chart foot of z and n_k the normal at its patch center
    let n = inner_normal(d, &part.center).unwrap();
    let p = project_onto_line(&n, &part.w).unwrap();
    for k in 0..=20 {
        let s = part.s_start + (1.0 - part.s_start) * k as f64 / 20.0;
        let want = cvec::axpy(&z, C64::new(1.0 - s, 0.0), &p);
        assert!(cvec::dist(&plan.point(s), &want) < 1e-9, "s = {s}");
        assert_eq!(plan.gamma(s), C64::new(1.0, 0.0) + part.mu * (1.0 - s));
    }
    let v = validate_path(d, cover, &plan, 800, None);
    assert!(v.passed(), "{:?}", v.failures);
}

#[test]
fn annulus_segment_exits_but_the_plan_detours() {
    let (d, cover) = common::annulus();
    let z = d.from_original(&[c(-0.75, 0.0), c(0.3, 0.0)]);
    let bad = (1..100).any(|k| !d.contains(&cvec::scale_re(&z, k as f64 / 100.0)));
    assert!(bad, "the straight segment must leave the domain");
    let plan = plan_path(d, cover, &z, &PlanOptions::default()).unwrap();
    assert!(plan.gamma1.len() > 2);
    assert!(plan.clearance_gamma1 >= cover.clearance * 0.999);
    let v = validate_path(d, cover, &plan, 2000, None);
    assert!(v.passed(), "{:?}", v.failures);
    assert!(v.min_clearance_gamma1 >= 0.98 * cover.clearance);
}

#[test]
fn perturbed_point_moves_the_curve_boundedly() {
    let (d, cover) = common::ball();
    let z = [c(0.4, 0.1), c(-0.3, 0.2)];
    let eta: Vec<C64> = z.iter().map(|x| x * 1e-3).collect();
    let plan = plan_path(d, cover, &z, &PlanOptions::default()).unwrap();
    let v = validate_path(d, cover, &plan, 400, Some(&eta));
    let dev = v.continuity_deviation.unwrap();
    let k = v.continuity_constant.unwrap();
    assert!(dev <= k * cvec::norm(&eta) * (1.0 + 1e-9));
    assert!(v.passed());
}

#[test]
fn corrupted_plan_is_flagged() {
    let (d, cover) = common::ball();
    let z = [c(0.5, 0.0), c(0.2, 0.0)];
    let mut plan = plan_path(d, cover, &z, &PlanOptions::default()).unwrap();
    plan.gamma1 = vec![c(0.0, 0.0), c(1.0, 1.5), c(1.0, 0.0)];
    plan.breaks = vec![0.0, 0.5, 1.0];
    let v = validate_path(d, cover, &plan, 400, None);
    assert!(!v.passed());
}

#[test]
fn raster_and_waypoint_plans_are_valid() {
    let (d, cover) = common::ball();
    let z = [c(0.3, 0.2), c(-0.1, 0.3)];
    for opts in [
        PlanOptions {
            force_raster: true,
            ..Default::default()
        },
        PlanOptions {
            waypoints: vec![c(0.5, 0.4)],
            ..Default::default()
        },
    ] {
        let plan = plan_path(d, cover, &z, &opts).unwrap();
        assert!(validate_path(d, cover, &plan, 800, None).passed());
    }
}

#[test]
fn tiny_points_use_the_small_plan() {
    let (d, cover) = common::ball();
    let plan = plan_path(
        d,
        cover,
        &[c(1e-4, 0.0), c(0.0, 0.0)],
        &PlanOptions::default(),
    )
    .unwrap();
    assert_eq!(plan.kind, PlanKind::Small);
}
