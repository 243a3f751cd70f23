use std::f64::consts::PI;

use heis_core::curves::{lemniscate_lift, lemniscate_lift_height, self_intersection_gap_with, LiftSign};
use heis_core::field::{field, Polynomial};
use heis_core::rumin::{d0, d2, HForm, D};
use heis_core::Point1;

use crate::commands::{foliate, stokes};
use crate::config::{Params, RunConfig, Scene};
use crate::error::CliError;
use crate::Outcome;

struct Check {
    name: &'static str,
    value: f64,
    bound: f64,
}

fn checks() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let lift = lemniscate_lift(LiftSign::Minus);
    let formula = (0..100)
        .map(|k| {
            let tau = 2.0 * PI * k as f64 / 99.0;
            (lift.position(tau).t - lemniscate_lift_height(tau)).abs()
        })
        .fold(0.0, f64::max);
    out.push(Check { name: "lemniscate lift height", value: formula, bound: 1e-8 });
    let gap = self_intersection_gap_with(&lift, 1e-9, 1024);
    out.push(Check { name: "lemniscate vertical gap", value: (gap - 2.0 / 3.0).abs(), bound: 1e-6 });

    let h = field(Polynomial::new(vec![(1.0, [2, 1, 0]), (-0.5, [0, 1, 2]), (2.0, [1, 0, 1])]));
    let dd = D(&d0(&h))?;
    let alpha = HForm::One {
        f: h.clone(),
        g: field(Polynomial::new(vec![(1.0, [1, 2, 1]), (-3.0, [0, 0, 2])])),
    };
    let ddd = d2(&D(&alpha)?)?;
    let mut complex: f64 = 0.0;
    for k in 0..20 {
        let s = k as f64 * 0.37;
        let p = Point1::new(s.sin(), (2.0 * s).cos(), 0.5 * s - 1.0);
        let c = dd.coefficient_values(&p);
        complex = complex.max(c[0].abs()).max(c[1].abs());
        complex = complex.max(ddd.coefficient_values(&p)[0].abs());
    }
    out.push(Check { name: "rumin complex identities", value: complex, bound: 1e-10 });

    let torus = RunConfig {
        scene: Some(Scene::Foliation),
        params: Params {
            n: Some(2),
            ..Params::default()
        },
        outputs: Vec::new(),
    };
    let (_, report, _) = foliate::analyse(&torus)?;
    out.push(Check { name: "torus leaf closure (n = 2)", value: report.closure_residual, bound: 1e-6 });

    let hp = RunConfig {
        scene: Some(Scene::Halfplane),
        params: Params {
            forms: Some(3),
            ..Params::default()
        },
        outputs: Vec::new(),
    };
    let summary = stokes::evaluate(&hp, heis_core::integrate::DEFAULT_SEED)?;
    out.push(Check { name: "stokes on the half-plane", value: summary.max_residual, bound: 1e-6 });
    Ok(out)
}

pub fn run() -> Result<Outcome, CliError> {
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for c in checks()? {
        let ok = c.value <= c.bound;
        lines.push(format!("{} {}: {:e} (bound {:e})", if ok { "PASS" } else { "FAIL" }, c.name, c.value, c.bound));
        if !ok {
            failed.push(c.name);
        }
    }
    let failure = (!failed.is_empty()).then(|| CliError::Acceptance(format!("selftest failed: {}", failed.join(", "))));
    Ok(Outcome {
        stdout: lines.join("\n"),
        files: Vec::new(),
        failure,
    })
}
