//! Acceptance criteria 1-10, one PASS/FAIL line each. Exits nonzero when
//! any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use heis_cli::config::{Params, RunConfig, Scene};
use heis_core::curves::{
    lemniscate, lemniscate_lift, lemniscate_lift_height, lift_closed_defect, self_intersection_gap_with, vertical_segment,
    LiftSign,
};
use heis_core::field::{field, Field, Polynomial, Product, Wave};
use heis_core::group::{Heisenberg, Point, Point1};
use heis_core::integrate::{seeded_bumps, vertical_boundary_integral, vertical_term_vanishing, BumpSampler, DEFAULT_SEED};
use heis_core::quadrature::QuadratureSpec;
use heis_core::rumin::{bump_form, d0, d2, HForm, D};
use heis_core::scenes::{sigma_cylinder, StokesScene, SIGMA_HEIGHT};
use heis_core::surfaces::{
    characteristic_residual, cylinder_embedding, periodic_torus_major, torus_surface, BoundaryComponent, Orientation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<(bool, String), String>;

fn lift_oracle() -> Verdict {
    let g = lemniscate_lift(LiftSign::Minus);
    let err = (0..1000)
        .map(|k| {
            let tau = 2.0 * PI * k as f64 / 999.0;
            (g.position(tau).t - lemniscate_lift_height(tau)).abs()
        })
        .fold(0.0, f64::max);
    Ok((err <= 1e-8, format!("max |t - closed-form height| = {err:.3e} at 1000 parameters")))
}

fn lift_closure() -> Verdict {
    let g = lemniscate_lift(LiftSign::Minus);
    let (a, b) = (g.position(0.0).coords(), g.position(2.0 * PI).coords());
    let gap = (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max);
    let defect = lift_closed_defect(&lemniscate(), &QuadratureSpec::curve_default()).map_err(|e| e.to_string())?.abs();
    Ok((gap <= 1e-10 && defect <= 1e-12, format!("endpoint gap {gap:.3e}, closed-lift defect {defect:.3e}")))
}

fn gap_and_embedding() -> Verdict {
    let g = lemniscate_lift(LiftSign::Minus);
    let gap = self_intersection_gap_with(&g, 1e-9, 4096);
    let embeds: Vec<bool> = [0.1, 1.0 / 3.0, 0.6, 0.7].iter().map(|&h| cylinder_embedding(&g, h, 4096).embedded).collect();
    let ok = (gap - 2.0 / 3.0).abs() <= 1e-6 && embeds == [true, true, true, false];
    Ok((ok, format!("gap {gap:.12}, embedded for h = 0.1, 1/3, 0.6, 0.7: {embeds:?}")))
}

fn torus_non_characteristic() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [1, 2, 3] {
        let big = periodic_torus_major(1.0, n);
        let s = torus_surface(big, 1.0).map_err(|e| e.to_string())?;
        let mut least = f64::INFINITY;
        for i in 0..512 {
            for j in 0..512 {
                let (a, b) = characteristic_residual(&s, 2.0 * PI * i as f64 / 512.0, 2.0 * PI * j as f64 / 512.0);
                least = least.min(a.hypot(b));
            }
        }
        let bound = (big - 1.0).powi(2) / 2.0 - 1e-9;
        ok &= least >= bound;
        notes.push(format!("n={n}: min {least:.6} >= {bound:.6}"));
    }
    Ok((ok, notes.join("; ")))
}

fn foliation_periodicity() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [1u32, 2, 3] {
        let clock = Instant::now();
        let cfg = RunConfig {
            scene: Some(Scene::Foliation),
            params: Params {
                r: Some(1.0),
                n: Some(n),
                ..Params::default()
            },
            outputs: Vec::new(),
        };
        let (_, report, _) = heis_cli::commands::foliate::analyse(&cfg).map_err(|e| e.to_string())?;
        let secs = clock.elapsed().as_secs_f64();
        let [wu, wv] = report.windings;
        let closes = report.closed && report.closure_residual <= 1e-6;
        let windings = wu.abs() == 1 && wv.abs() == n as i64;
        ok &= closes && windings && secs <= 10.0;
        notes.push(format!(
            "n={n}: closed {closes} (residual {:.1e}), windings (u {wu}, v {wv}), {secs:.2}s",
            report.closure_residual
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn random_field(rng: &mut ChaCha8Rng, k: usize) -> Field {
    let poly = |rng: &mut ChaCha8Rng| {
        Polynomial::new(
            (0..6)
                .map(|_| {
                    let mut e = [0u8; 3];
                    for _ in 0..rng.random_range(0..=4) {
                        e[rng.random_range(0..3)] += 1;
                    }
                    (rng.random_range(-1.0..1.0), e)
                })
                .collect(),
        )
    };
    let wave = |rng: &mut ChaCha8Rng| Wave {
        amplitude: rng.random_range(0.5..1.5),
        wavevector: std::array::from_fn(|_| rng.random_range(-2.0..2.0)),
        phase: rng.random_range(0.0..6.0),
    };
    match k % 3 {
        0 => field(poly(rng)),
        1 => field(wave(rng)),
        _ => field(Product(field(poly(rng)), field(wave(rng)))),
    }
}

/// `d(f dx + g dy + (Xg - Yf) theta)` on `(T, X)` and `(T, Y)`, by central
/// differences of the coordinate components.
fn exterior_oracle(f: &Field, g: &Field, q: [f64; 3]) -> [f64; 2] {
    let h = 1e-5;
    let grad = |fl: &Field, r: [f64; 3]| fl.taylor(&Point1::from_coords(r), 1).expect("exact field").gradient();
    let w = |r: [f64; 3]| {
        let (gf, gg) = (grad(f, r), grad(g, r));
        let c = (gg[0] - 0.5 * r[1] * gg[2]) - (gf[1] + 0.5 * r[0] * gf[2]);
        let p = Point1::from_coords(r);
        [f.value(&p) + 0.5 * r[1] * c, g.value(&p) - 0.5 * r[0] * c, c]
    };
    let d: [[f64; 3]; 3] = std::array::from_fn(|k| {
        let (mut a, mut b) = (q, q);
        a[k] += h;
        b[k] -= h;
        let (wa, wb) = (w(a), w(b));
        std::array::from_fn(|j| (wa[j] - wb[j]) / (2.0 * h))
    });
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

fn rumin_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let (mut complex, mut oracle) = (0.0f64, 0.0f64);
    for k in 0..20 {
        let h = random_field(&mut rng, k);
        let (f, g) = (random_field(&mut rng, k + 1), random_field(&mut rng, k + 2));
        let alpha = HForm::One { f: f.clone(), g: g.clone() };
        let dd0 = D(&d0(&h)).map_err(|e| e.to_string())?;
        let d = D(&alpha).map_err(|e| e.to_string())?;
        let d2d = d2(&d).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let p = Point1::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            for v in dd0.coefficient_values(&p).into_iter().chain(d2d.coefficient_values(&p)) {
                complex = complex.max(v.abs());
            }
        }
        for _ in 0..50 {
            let p = Point1::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let closed = d.coefficient_values(&p);
            let o = exterior_oracle(&f, &g, p.coords());
            oracle = oracle.max((closed[0] - o[0]).abs()).max((closed[1] - o[1]).abs());
        }
    }
    Ok((
        complex <= 1e-10 && oracle <= 1e-8,
        format!("D d0 and d2 D residual {complex:.3e} (20 fields x 1000 points), closed D vs exterior oracle {oracle:.3e}"),
    ))
}

fn stokes_scenes() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for scene in StokesScene::ALL {
        let cfg = RunConfig {
            scene: Some(scene.name().parse().map_err(|e: heis_cli::CliError| e.to_string())?),
            params: Params::default(),
            outputs: Vec::new(),
        };
        let s = heis_cli::commands::stokes::evaluate(&cfg, DEFAULT_SEED).map_err(|e| e.to_string())?;
        let good = s.forms == 20 && s.max_residual <= 1e-6 && s.max_error_estimate <= 2e-7;
        ok &= good;
        notes.push(format!("{}: residual {:.2e}, error estimate {:.2e}", s.scene, s.max_residual, s.max_error_estimate));
    }
    Ok((ok, notes.join("; ")))
}

fn verticality() -> Verdict {
    let s = sigma_cylinder(SIGMA_HEIGHT).map_err(|e| e.to_string())?;
    let quad = QuadratureSpec::curve_default();
    let bumps = seeded_bumps(&s, 20, DEFAULT_SEED, &BumpSampler::default()).map_err(|e| e.to_string())?;
    let (mut horizontal, mut control) = (0.0f64, 0.0f64);
    for b in &bumps {
        let omega = b.form().map_err(|e| e.to_string())?;
        horizontal = horizontal.max(vertical_term_vanishing(&s, &omega, &quad).map_err(|e| e.to_string())?);
        let seam = BoundaryComponent {
            curve: vertical_segment(b.center, SIGMA_HEIGHT),
            orientation: Orientation::Positive,
            label: "vertical",
        };
        let probe = bump_form(b.center, b.radius).map_err(|e| e.to_string())?;
        control = control.max(vertical_boundary_integral(&probe, &[seam], &quad).map_err(|e| e.to_string())?.value.abs());
    }
    Ok((
        horizontal <= 1e-8 && control > 1e-3,
        format!("max |int upsilon| on boundary of Sigma {horizontal:.3e}; vertical-segment control {control:.3e}"),
    ))
}

fn group_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pt = || Point1::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let (mut axioms, mut dil, mut duality) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (p, q, r) = (pt(), pt(), pt());
        let diff = |a: Point1, b: Point1| (0..3).map(|k| (a.coords()[k] - b.coords()[k]).abs()).fold(0.0, f64::max);
        axioms = axioms.max(diff(p.mul(&q).mul(&r), p.mul(&q.mul(&r)))).max(diff(p.mul(&p.inverse()), Point1::IDENTITY));
        let l = 0.3 + (p.t.abs() % 3.0);
        let lhs = p.mul(&q).dilate(l).map_err(|e| e.to_string())?;
        let rhs = p.dilate(l).unwrap().mul(&q.dilate(l).unwrap());
        dil = dil.max(diff(lhs, rhs) / (1.0 + l * l));
        let fr = p.frame();
        duality = duality.max(fr[0].theta().abs()).max(fr[1].theta().abs()).max((fr[2].theta() - 1.0).abs());
    }
    // [X, Y] = T through the flows: for linear fields Euler steps are the exact flows
    let h = 1e-4;
    let flow = |c: [f64; 3], dir: usize, s: f64| match dir {
        0 => [c[0] + s, c[1], c[2] - 0.5 * c[1] * s],
        _ => [c[0], c[1] + s, c[2] + 0.5 * c[0] * s],
    };
    let p = [0.7, -1.2, 0.4];
    let q = flow(flow(flow(flow(p, 0, h), 1, h), 0, -h), 1, -h);
    let bracket = [(q[0] - p[0]) / (h * h), (q[1] - p[1]) / (h * h), (q[2] - p[2]) / (h * h)];
    let commutator = bracket[0].abs().max(bracket[1].abs()).max((bracket[2] - 1.0).abs());
    // dilation Jacobian is diag(l, l, l^2) in H^1 and diag(l, l, l, l, l^2) in H^2
    let mut volume = 0.0f64;
    for l in [0.5f64, 2.0, 3.7] {
        let e = |k| if k == 2 { 1.0 } else { 0.5 };
        let p1 = Point1::new(e(0), e(1), e(2));
        let d = p1.dilate(l).unwrap().coords();
        let det1 = (d[0] / p1.coords()[0]) * (d[1] / p1.coords()[1]) * (d[2] / p1.coords()[2]);
        let p2 = Point::<2>::from_parts([0.5, 0.5], [0.5, 0.5], 1.0);
        let v2 = p2.dilate(l).unwrap().to_vec();
        let det2: f64 = v2.iter().zip(p2.to_vec()).map(|(a, b)| a / b).product();
        volume = volume
            .max((det1 - l.powi(Heisenberg::<1>::Q as i32)).abs() / l.powi(4))
            .max((det2 - l.powi(Heisenberg::<2>::Q as i32)).abs() / l.powi(6));
    }
    let ok = axioms <= 1e-12 && dil <= 1e-12 && commutator <= 10.0 * h && duality <= 1e-14 && volume <= 1e-14;
    Ok((
        ok,
        format!(
            "axioms {axioms:.1e}, dilation {dil:.1e}, [X,Y]-T {commutator:.1e} (h = 1e-4), theta duality {duality:.1e}, volume {volume:.1e}"
        ),
    ))
}

fn determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("heis-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for k in 0..2 {
        let path = dir.join(format!("stokes-{k}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_heis"))
            .args(["stokes", "--scene", "sigma-cylinder", "--forms", "20", "--seed", "0x5EED", "-o"])
            .arg(&path)
            .env_remove("HEIS_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Ok((false, format!("run {k} exited with {:?}", out.status.code())));
        }
        reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    let same = reports[0] == reports[1];
    Ok((same, format!("two sigma-cylinder runs, {} bytes, identical: {same}", reports[0].len())))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("lemniscate lift oracle", lift_oracle),
        ("lift closure", lift_closure),
        ("self-intersection gap and cylinder embedding", gap_and_embedding),
        ("torus has no characteristic points", torus_non_characteristic),
        ("foliation periodicity", foliation_periodicity),
        ("rumin complex identities", rumin_identities),
        ("stokes theorem on three scenes", stokes_scenes),
        ("verticality of the correction term", verticality),
        ("group and frame suite", group_suite),
        ("determinism of stokes reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += !ok as usize;
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            clock.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
