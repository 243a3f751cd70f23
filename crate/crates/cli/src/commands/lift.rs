use std::path::PathBuf;

use heis_core::curves::{
    circle, horizontality_residual, lemniscate, lift_closed_defect, lift_horizontal, self_intersection_gap_with, HCurve,
    LiftSign, PlanarCurve,
};
use heis_core::quadrature::QuadratureSpec;
use heis_core::Point1;
use serde::Serialize;

use crate::config::{sibling, Format, RunConfig, Scene};
use crate::emit::{self, Csv};
use crate::error::CliError;
use crate::Outcome;

pub const GAP_SAMPLES: usize = 4096;
pub const DEFAULT_SAMPLES: usize = 1001;

#[derive(Debug, Serialize)]
pub struct LiftSummary {
    pub curve: String,
    pub sign: i32,
    pub contact_form: &'static str,
    pub samples: usize,
    pub start: [f64; 3],
    pub end: [f64; 3],
    pub closure_defect: f64,
    pub endpoint_gap: f64,
    pub horizontality_residual: f64,
    /// Smallest vertical gap over self-crossings of the projection; `None`
    /// when the projection does not cross itself.
    pub gap: Option<f64>,
}

fn planar_curve(cfg: &RunConfig) -> Result<(String, PlanarCurve), CliError> {
    let name = cfg.params.curve.clone().unwrap_or_else(|| "lemniscate".into());
    let curve = match name.as_str() {
        "lemniscate" => lemniscate(),
        "circle" => circle(cfg.params.radius.unwrap_or(1.0))?,
        other => return Err(CliError::Config(format!("unknown curve {other:?} (lemniscate, circle)"))),
    };
    Ok((name, curve))
}

pub fn build(cfg: &RunConfig) -> Result<(String, LiftSign, PlanarCurve, HCurve), CliError> {
    let scene = cfg.scene_or(Scene::Lift);
    if !matches!(scene, Scene::Lift | Scene::Lemniscate) {
        return Err(CliError::Config(format!("lift does not take scene {scene}")));
    }
    let (name, planar) = planar_curve(cfg)?;
    let sign = match cfg.params.sign.unwrap_or(-1) {
        1 => LiftSign::Plus,
        _ => LiftSign::Minus,
    };
    let [x, y] = planar.position(planar.domain.0);
    let lift = lift_horizontal(&planar, Point1::new(x, y, 0.0), sign, &QuadratureSpec::curve_default())?;
    Ok((name, sign, planar, lift))
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (name, sign, planar, lift) = build(cfg)?;
    let samples = cfg.params.samples.unwrap_or(DEFAULT_SAMPLES);
    let (contact_form, horizontal) = match sign {
        LiftSign::Plus => ("dt + (y/2) dx - (x/2) dy", lift.clone()),
        LiftSign::Minus => ("dt - (y/2) dx + (x/2) dy", lift.mirror_vertical()),
    };
    let gap = self_intersection_gap_with(&lift, 1e-9, GAP_SAMPLES);
    let (a, b) = lift.domain;
    let summary = LiftSummary {
        curve: name,
        sign: sign.value() as i32,
        contact_form,
        samples,
        start: lift.position(a).coords(),
        end: lift.position(b).coords(),
        closure_defect: lift_closed_defect(&planar, &QuadratureSpec::curve_default())?.abs(),
        endpoint_gap: lift.closure_gap(),
        horizontality_residual: horizontality_residual(&horizontal, GAP_SAMPLES),
        gap: gap.is_finite().then_some(gap),
    };

    let mut files = Vec::new();
    if let Some(path) = cfg.output(Format::Csv).map(PathBuf::from) {
        let mut lifted = Csv::new(&["tau", "x", "y", "t"]);
        let mut flat = Csv::new(&["tau", "x", "y", "t"]);
        for (tau, p) in lift.polyline(samples) {
            let [x, y, t] = p.coords();
            lifted.row(&[tau, x, y, t]);
            let [px, py] = planar.position(tau);
            flat.row(&[tau, px, py, 0.0]);
        }
        let planar_path = sibling(&path, "planar", "csv");
        emit::write(&path, lifted.as_str())?;
        emit::write(&planar_path, flat.as_str())?;
        files.extend([path, planar_path]);
    }
    let report = emit::json(&summary)?;
    let stdout = match cfg.output_or_sibling(Format::Json) {
        Some(p) => {
            emit::write(&p, &report)?;
            files.push(p);
            format!("lift {}: gap {:?}, closure defect {:e}", summary.curve, summary.gap, summary.closure_defect)
        }
        None => report,
    };
    Ok(Outcome {
        stdout,
        files,
        failure: None,
    })
}
