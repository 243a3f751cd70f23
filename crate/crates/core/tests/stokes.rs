use std::f64::consts::PI;

use heis_core::curves::{lemniscate_lift, vertical_segment, HCurve, LiftSign};
use heis_core::field::{field, Aabb, Bump, Field, FnField, Polynomial, ScalarField};
use heis_core::integrate::{
    boundary_integral, components_integral, integrate_curve, integrate_d, integrate_surface, seeded_bumps,
    stokes_residual, stokes_residual_curve, vertical_boundary_integral, vertical_term_vanishing, BumpSampler,
    StokesQuadrature, DEFAULT_SEED,
};
use heis_core::quadrature::QuadratureSpec;
use heis_core::rumin::{bump_form, weighted_bump_form, HForm};
use heis_core::scenes::{sigma_cylinder, StokesScene, SIGMA_HEIGHT};
use heis_core::surfaces::{lift_cylinder, BoundaryComponent, Orientation, ParamRect, ParamSurface};
use heis_core::Point1;

fn quick(panels: [usize; 2]) -> StokesQuadrature {
    StokesQuadrature {
        surface: QuadratureSpec::surface_default().with_panels(panels[0], panels[1]),
        curve: QuadratureSpec::curve_default(),
    }
}

#[test]
fn halfplane_two_form_matches_half_disk_volume() {
    // on {x = 0} with parameters (y, s): (theta ^ dy)(S_y, S_s) = -1, so the
    // integral of chi theta^dy is minus the mass of the bump on the half-disk
    let (rho, m) = (0.7, 8u32);
    let chi = field(Bump {
        center: [0.0, 0.0, 0.0],
        radius: rho,
        exponent: m,
    });
    let omega = HForm::Two {
        a: field(FnField::new(|_: &Point1| 0.0).with_support(Aabb::around([0.0; 3], rho))),
        b: chi,
    };
    let s = StokesScene::HalfPlane.surface().unwrap();
    let r = integrate_surface(&omega, &s, &QuadratureSpec::surface_default()).unwrap();
    let exact = -PI * rho * rho / (2.0 * (m + 1) as f64);
    assert!((r.value - exact).abs() <= 1e-9, "{} vs {exact}", r.value);
}

#[test]
fn swapping_parameters_flips_both_sides() {
    let s = sigma_cylinder(SIGMA_HEIGHT).unwrap();
    let omega = weighted_bump_form(s.boundary()[0].curve.position(1.0), 0.4, [1.0, -0.5]).unwrap();
    let quad = StokesScene::SigmaCylinder.quadrature();
    let a = stokes_residual(&s, &omega, &quad).unwrap();
    let [pu, pv] = StokesScene::SigmaCylinder.panels();
    let b = stokes_residual(&s.swapped(), &omega, &quick([pv, pu])).unwrap();
    assert!(a.lhs.value.abs() > 1e-3);
    assert!((a.lhs.value + b.lhs.value).abs() <= 1e-12);
    assert!((a.rhs.value + b.rhs.value).abs() <= 1e-12);
    assert!(a.residual <= 1e-6 && b.residual <= 1e-6);
}

#[test]
fn bump_near_one_edge_sees_only_that_component() {
    let s = sigma_cylinder(SIGMA_HEIGHT).unwrap();
    let lower = &s.boundary()[0];
    let omega = bump_form(lower.curve.position(2.5), 0.15).unwrap();
    let quad = StokesScene::SigmaCylinder.quadrature();
    let only = integrate_curve(&omega, &lower.curve, &quad.curve).unwrap().value;
    let upper = integrate_curve(&omega, &s.boundary()[1].curve, &quad.curve).unwrap().value;
    assert_eq!(upper, 0.0);
    let report = stokes_residual(&s, &omega, &quad).unwrap();
    assert_eq!(report.rhs.value, only);
    assert!(report.residual <= 1e-6);
}

#[test]
fn splitting_sigma_is_additive_and_interfaces_cancel() {
    let gamma = lemniscate_lift(LiftSign::Plus);
    let h = SIGMA_HEIGHT;
    let whole = lift_cylinder(&gamma, h).unwrap();
    let low = lift_cylinder(&gamma, h / 2.0).unwrap();
    let high = lift_cylinder(&gamma.vertical_translate(h / 2.0), h / 2.0).unwrap();
    let quad = quick([256, 8]);
    for spec in seeded_bumps(&whole, 3, DEFAULT_SEED, &BumpSampler::default()).unwrap() {
        let omega = spec.form().unwrap();
        let w = integrate_d(&omega, &whole, &quad.surface).unwrap().value;
        let parts = integrate_d(&omega, &low, &quad.surface).unwrap().value + integrate_d(&omega, &high, &quad.surface).unwrap().value;
        assert!((w - parts).abs() <= 1e-8, "{w} vs {parts}");
        let interface = components_integral(&omega, &[low.boundary()[1].clone(), high.boundary()[0].clone()], &quad.curve).unwrap();
        assert!(interface.value.abs() <= 1e-8);
    }
}

#[test]
fn residual_shrinks_under_refinement() {
    let s = sigma_cylinder(SIGMA_HEIGHT).unwrap();
    let spec = seeded_bumps(&s, 1, DEFAULT_SEED, &BumpSampler::default()).unwrap()[0];
    let omega = spec.form().unwrap();
    let coarse = stokes_residual(&s, &omega, &quick([32, 4])).unwrap();
    let fine = stokes_residual(&s, &omega, &quick([256, 16])).unwrap();
    assert!(fine.residual < coarse.residual, "{} !< {}", fine.residual, coarse.residual);
    assert!(fine.lhs.error() < coarse.lhs.error());
    assert!(fine.residual <= 1e-6);
}

/// `D omega` assembled as the coordinate exterior derivative of
/// `omega + (Xg - Yf) theta`, by central differences.
fn oracle_d_form(omega: &HForm) -> HForm {
    let HForm::One { f, g } = omega.clone() else { panic!("degree one") };
    let support = omega.support().expect("compact support");
    let coeff = |pick: usize| -> Field {
        let (f, g) = (f.clone(), g.clone());
        field(FnField::new(move |p: &Point1| oracle_coefficients(&f, &g, p.coords())[pick]).with_support(support))
    };
    HForm::Two { a: coeff(0), b: coeff(1) }
}

fn oracle_coefficients(f: &Field, g: &Field, q: [f64; 3]) -> [f64; 2] {
    let h = 1e-5;
    let grad = |fl: &Field, r: [f64; 3]| fl.taylor(&Point1::from_coords(r), 1).expect("exact field").gradient();
    let one_form = |r: [f64; 3]| {
        let (gf, gg) = (grad(f, r), grad(g, r));
        let c = (gg[0] - 0.5 * r[1] * gg[2]) - (gf[1] + 0.5 * r[0] * gf[2]);
        let p = Point1::from_coords(r);
        [f.value(&p) + 0.5 * r[1] * c, g.value(&p) - 0.5 * r[0] * c, c]
    };
    let d: [[f64; 3]; 3] = std::array::from_fn(|k| {
        let (mut a, mut b) = (q, q);
        a[k] += h;
        b[k] -= h;
        let (wa, wb) = (one_form(a), one_form(b));
        std::array::from_fn(|j| (wa[j] - wb[j]) / (2.0 * h))
    });
    // d w (u, v) = sum (d_i w_j - d_j w_i) u_i v_j
    let pair = |u: [f64; 3], v: [f64; 3]| {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += (d[i][j] - d[j][i]) * u[i] * v[j];
            }
        }
        s
    };
    let t = [0.0, 0.0, 1.0];
    [pair(t, [1.0, 0.0, -0.5 * q[1]]), pair(t, [0.0, 1.0, 0.5 * q[0]])]
}

#[test]
fn closed_form_d_integrates_like_the_oracle() {
    let s = StokesScene::HalfPlane.surface().unwrap();
    let quad = QuadratureSpec {
        richardson: false,
        ..QuadratureSpec::surface_default().with_panels(16, 16)
    };
    for spec in seeded_bumps(&s, 3, DEFAULT_SEED, &BumpSampler::default()).unwrap() {
        let omega = spec.form().unwrap();
        let closed = integrate_d(&omega, &s, &quad).unwrap().value;
        let oracle = integrate_surface(&oracle_d_form(&omega), &s, &quad).unwrap().value;
        assert!((closed - oracle).abs() <= 1e-8, "{closed} vs {oracle}");
    }
}

/// The square `{(0, u, v) : |u|, |v| <= 1}` with its boundary traversed
/// counterclockwise in `(u, v)`; the sides `u = +-1` are vertical.
fn vertical_square() -> ParamSurface {
    let side = |p: [f64; 3], d: [f64; 3]| {
        HCurve::with_velocity(
            (0.0, 2.0),
            move |s| Point1::new(p[0] + s * d[0], p[1] + s * d[1], p[2] + s * d[2]),
            move |_| d,
        )
    };
    let comp = |curve, orientation, label| BoundaryComponent { curve, orientation, label };
    ParamSurface::with_partials(
        ParamRect { u: (-1.0, 1.0), v: (-1.0, 1.0) },
        [false, false],
        |u, v| Point1::new(0.0, u, v),
        |_, _| ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
    )
    .with_boundary(vec![
        comp(side([0.0, -1.0, -1.0], [0.0, 1.0, 0.0]), Orientation::Positive, "bottom"),
        comp(side([0.0, 1.0, -1.0], [0.0, 0.0, 1.0]), Orientation::Positive, "right"),
        comp(side([0.0, -1.0, 1.0], [0.0, 1.0, 0.0]), Orientation::Negative, "top"),
        comp(side([0.0, -1.0, -1.0], [0.0, 0.0, 1.0]), Orientation::Negative, "left"),
    ])
}

#[test]
fn non_horizontal_boundary_picks_up_the_vertical_term() {
    let s = vertical_square();
    let quad = quick([32, 32]);
    let forms = [
        HForm::One {
            f: field(Polynomial::new(vec![(1.0, [0, 1, 1]), (-0.5, [1, 0, 2])])),
            g: field(Polynomial::new(vec![(2.0, [1, 1, 0]), (0.3, [0, 0, 3])])),
        },
        weighted_bump_form(Point1::new(0.2, 0.9, -0.3), 0.8, [1.0, 2.0]).unwrap(),
    ];
    for omega in &forms {
        let lhs = integrate_d(omega, &s, &quad.surface).unwrap().value;
        let rhs = boundary_integral(omega, &s, &quad.curve).unwrap().value;
        let vertical = vertical_boundary_integral(omega, s.boundary(), &quad.curve).unwrap().value;
        assert!(vertical.abs() > 1e-3);
        assert!((lhs - rhs - vertical).abs() <= 1e-9, "{lhs} vs {rhs} + {vertical}");
    }
}

#[test]
fn vertical_term_vanishes_on_sigma_only() {
    let s = sigma_cylinder(SIGMA_HEIGHT).unwrap();
    let quad = QuadratureSpec::curve_default();
    let bumps = seeded_bumps(&s, 20, DEFAULT_SEED, &BumpSampler::default()).unwrap();
    let mut control: f64 = 0.0;
    for spec in &bumps {
        let omega = spec.form().unwrap();
        assert!(vertical_term_vanishing(&s, &omega, &quad).unwrap() <= 1e-8);
        let seam = BoundaryComponent {
            curve: vertical_segment(s.boundary()[0].curve.position(0.0), SIGMA_HEIGHT),
            orientation: Orientation::Positive,
            label: "seam",
        };
        let seam_bump = bump_form(seam.curve.position(0.1), spec.radius).unwrap();
        control = control.max(vertical_boundary_integral(&seam_bump, &[seam], &quad).unwrap().value.abs());
    }
    assert!(control > 1e-3, "{control:e}");
}

#[test]
fn far_supports_integrate_to_zero() {
    let s = sigma_cylinder(SIGMA_HEIGHT).unwrap();
    let omega = bump_form(Point1::new(10.0, 10.0, 10.0), 0.5).unwrap();
    let r = stokes_residual(&s, &omega, &StokesScene::SigmaCylinder.quadrature()).unwrap();
    assert_eq!((r.lhs.value, r.rhs.value, r.residual), (0.0, 0.0, 0.0));
    let hp = StokesScene::HalfPlane.surface().unwrap();
    let r = stokes_residual(&hp, &bump_form(Point1::new(3.0, 0.0, 1.0), 0.5).unwrap(), &quick([8, 8])).unwrap();
    assert_eq!(r.residual, 0.0);
}

#[test]
fn one_dimensional_stokes_along_horizontal_curves() {
    let gamma = lemniscate_lift(LiftSign::Plus);
    let f = Polynomial::new(vec![(1.0, [2, 1, 0]), (-2.0, [0, 0, 2]), (0.5, [1, 0, 1])]);
    let r = stokes_residual_curve(&gamma, &f, &QuadratureSpec::curve_default()).unwrap();
    assert!(r <= 1e-10, "{r:e}");
    let open = vertical_segment(Point1::new(0.0, 1.0, 0.0), 1.0);
    // along a vertical segment the horizontal differential misses Tf
    assert!(stokes_residual_curve(&open, &f, &QuadratureSpec::curve_default()).unwrap() > 1e-3);
    assert!(f.value(&Point1::IDENTITY) == 0.0);
}
