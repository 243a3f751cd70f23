use std::f64::consts::PI;

use heis_core::curves::{
    self, circle, horizontality_residual, lemniscate, lemniscate_lift, lemniscate_lift_height, lift_closed_defect,
    lift_horizontal, self_intersections, LiftSign, PlanarCurve,
};
use heis_core::quadrature::QuadratureSpec;
use heis_core::surfaces::cylinder_embedding;
use heis_core::Point1;
use proptest::prelude::*;

#[test]
fn printed_lemniscate_height_at_1000_parameters() {
    let lift = lemniscate_lift(LiftSign::Minus);
    let worst = (0..1000)
        .map(|k| {
            let tau = 2.0 * PI * k as f64 / 999.0;
            (lift.position(tau).t - lemniscate_lift_height(tau)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst:e}");
}

#[test]
fn lifts_of_opposite_sign_are_mirror_images() {
    let (m, p) = (lemniscate_lift(LiftSign::Minus), lemniscate_lift(LiftSign::Plus));
    for k in 0..100 {
        let tau = 0.0628 * k as f64;
        assert_eq!(m.position(tau).t, -p.position(tau).t);
    }
    assert!(horizontality_residual(&p, 4096) < 1e-14);
    assert!(horizontality_residual(&m.mirror_vertical(), 4096) < 1e-14);
    // the printed curve is not horizontal for theta = dt + (y/2)dx - (x/2)dy
    assert!(horizontality_residual(&m, 4096) > 0.1);
}

#[test]
fn lemniscate_lift_closes() {
    for sign in [LiftSign::Minus, LiftSign::Plus] {
        let g = lemniscate_lift(sign);
        let (a, b) = (g.position(0.0).coords(), g.position(2.0 * PI).coords());
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() <= 1e-10);
        }
    }
    assert!(lift_closed_defect(&lemniscate(), &QuadratureSpec::curve_default()).unwrap().abs() <= 1e-12);
}

#[test]
fn lemniscate_gap_and_cylinder_heights() {
    let g = lemniscate_lift(LiftSign::Minus);
    let crossings = self_intersections(&g, 1e-9, 4096);
    assert_eq!(crossings.len(), 1, "{crossings:?}");
    let c = crossings[0];
    assert!((c.tau1 - PI / 2.0).abs() < 1e-7 && (c.tau2 - 1.5 * PI).abs() < 1e-7);
    assert!((c.vertical_gap - 2.0 / 3.0).abs() <= 1e-6);
    for h in [0.1, 1.0 / 3.0, 0.6] {
        assert!(cylinder_embedding(&g, h, 4096).embedded, "h = {h}");
    }
    assert!(!cylinder_embedding(&g, 0.7, 4096).embedded);
}

#[test]
fn scaled_circle_lift_rise_is_area() {
    for rho in [0.5, 1.0, 3.0] {
        let c = circle(rho).unwrap();
        let lift = lift_horizontal(&c, Point1::new(rho, 0.0, 0.0), LiftSign::Plus, &QuadratureSpec::curve_default()).unwrap();
        let rise = lift.position(2.0 * PI).t;
        assert!((rise - PI * rho * rho).abs() <= 1e-12 * rho * rho);
        assert!(horizontality_residual(&lift, 512) < 1e-13 * rho * rho);
    }
}

fn ellipse(a: f64, b: f64) -> PlanarCurve {
    PlanarCurve::with_velocity(
        (0.0, 2.0 * PI),
        move |s| [a * s.cos(), b * s.sin()],
        move |s| [-a * s.sin(), b * s.cos()],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn left_translates_of_horizontal_lifts_stay_horizontal(
        gx in -3.0..3.0f64, gy in -3.0..3.0f64, gt in -3.0..3.0f64,
        a in 0.2..2.0f64, b in 0.2..2.0f64,
    ) {
        let lift = lift_horizontal(&ellipse(a, b), Point1::new(a, 0.0, 0.0), LiftSign::Plus, &QuadratureSpec::curve_default()).unwrap();
        let moved = lift.left_translate(Point1::new(gx, gy, gt));
        prop_assert!(horizontality_residual(&moved, 256) <= 1e-12 * (1.0 + gx.abs() + gy.abs()));
    }

    #[test]
    fn lift_rise_is_sign_times_enclosed_area(a in 0.2..2.0f64, b in 0.2..2.0f64) {
        for sign in [LiftSign::Plus, LiftSign::Minus] {
            let lift = lift_horizontal(&ellipse(a, b), Point1::new(a, 0.0, 0.0), sign, &QuadratureSpec::curve_default()).unwrap();
            prop_assert!((lift.position(2.0 * PI).t - sign.value() * PI * a * b).abs() <= 1e-12);
        }
    }

    #[test]
    fn dilated_lift_is_lift_of_scaled_curve(lambda in 0.1..4.0f64, tau in 0.0..6.28f64) {
        let g = lemniscate_lift(LiftSign::Plus);
        let scaled = lift_horizontal(&lemniscate().scaled(lambda), Point1::new(lambda, 0.0, 0.0), LiftSign::Plus, &QuadratureSpec::curve_default()).unwrap();
        let d = g.position(tau).dilate(lambda).unwrap();
        let s = scaled.position(tau);
        prop_assert!((d.t - s.t).abs() <= 1e-12 * lambda * lambda);
    }
}

#[test]
fn doubled_lemniscate_has_zero_gap() {
    let twice = lift_horizontal(&lemniscate().repeated(2), Point1::new(1.0, 0.0, 0.0), LiftSign::Minus, &QuadratureSpec::curve_default()).unwrap();
    assert!(curves::self_intersection_gap(&twice, 1e-9) < 1e-9);
}
