use heis_core::integrate::{seeded_bumps, stokes_sweep, BumpSampler, StokesReport};
use heis_core::quadrature::QuadratureSpec;
use heis_core::scenes::{sigma_cylinder, torus_band, StokesScene, BAND_ANGLE, BAND_TORUS_N, SIGMA_HEIGHT};
use heis_core::surfaces::ParamSurface;
use heis_core::Exec;
use serde::Serialize;

use crate::config::{Format, RunConfig, Scene};
use crate::emit;
use crate::error::CliError;
use crate::Outcome;

pub const DEFAULT_FORMS: usize = 20;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_QUADRATURE_TOLERANCE: f64 = 2e-7;

#[derive(Debug, Serialize)]
pub struct StokesCase {
    pub index: usize,
    pub center: [f64; 3],
    pub radius: f64,
    pub component: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Serialize)]
pub struct StokesSummary {
    pub scene: String,
    pub seed: u64,
    pub forms: usize,
    pub panels: [usize; 2],
    pub tolerance: f64,
    pub quadrature_tolerance: f64,
    pub max_residual: f64,
    pub max_error_estimate: f64,
    pub passed: bool,
    pub failing: Vec<usize>,
    pub cases: Vec<StokesCase>,
}

pub fn scene_of(cfg: &RunConfig) -> Result<StokesScene, CliError> {
    match cfg.scene_or(Scene::SigmaCylinder) {
        Scene::Halfplane => Ok(StokesScene::HalfPlane),
        Scene::SigmaCylinder => Ok(StokesScene::SigmaCylinder),
        Scene::Band => Ok(StokesScene::Band),
        other => Err(CliError::Config(format!("stokes runs on halfplane, sigma-cylinder or band, not {other}"))),
    }
}

pub fn surface(scene: StokesScene, cfg: &RunConfig) -> Result<ParamSurface, CliError> {
    let p = &cfg.params;
    Ok(match scene {
        StokesScene::HalfPlane => scene.surface()?,
        StokesScene::SigmaCylinder => sigma_cylinder(p.h.unwrap_or(SIGMA_HEIGHT))?,
        StokesScene::Band => torus_band(p.n.unwrap_or(BAND_TORUS_N), p.phi_max.unwrap_or(BAND_ANGLE))?,
    })
}

/// Runs the sweep and reports it; the caller decides on the exit status.
pub fn evaluate(cfg: &RunConfig, seed: u64) -> Result<StokesSummary, CliError> {
    let scene = scene_of(cfg)?;
    let s = surface(scene, cfg)?;
    let forms = cfg.params.forms.unwrap_or(DEFAULT_FORMS);
    let mut quad = scene.quadrature();
    if let Some([u, v]) = cfg.params.panels {
        quad.surface = QuadratureSpec::surface_default().with_panels(u, v);
    }
    let tolerance = cfg.params.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let quadrature_tolerance = cfg.params.quadrature_tolerance.unwrap_or(DEFAULT_QUADRATURE_TOLERANCE);
    let bumps = seeded_bumps(&s, forms, seed, &BumpSampler::default())?;
    let omegas = bumps.iter().map(|b| b.form()).collect::<Result<Vec<_>, _>>()?;
    let reports: Vec<StokesReport> = stokes_sweep(&s, &omegas, &quad, Exec::default())?;
    let cases: Vec<StokesCase> = bumps
        .iter()
        .zip(&reports)
        .enumerate()
        .map(|(index, (b, r))| StokesCase {
            index,
            center: b.center.coords(),
            radius: b.radius,
            component: b.component,
            lhs: r.lhs.value,
            rhs: r.rhs.value,
            residual: r.residual,
            error_estimate: r.error_estimate(),
        })
        .collect();
    let failing: Vec<usize> = cases.iter().filter(|c| !(c.residual <= tolerance)).map(|c| c.index).collect();
    Ok(StokesSummary {
        scene: scene.name().into(),
        seed,
        forms,
        panels: quad.surface.panels,
        tolerance,
        quadrature_tolerance,
        max_residual: cases.iter().map(|c| c.residual).fold(0.0, f64::max),
        max_error_estimate: cases.iter().map(|c| c.error_estimate).fold(0.0, f64::max),
        passed: failing.is_empty(),
        failing,
        cases,
    })
}

pub fn run(cfg: &RunConfig, seed: u64) -> Result<Outcome, CliError> {
    let summary = evaluate(cfg, seed)?;
    let json = emit::json(&summary)?;
    let mut files = Vec::new();
    let line = format!(
        "stokes {}: {} forms, max residual {:e}, max error estimate {:e}",
        summary.scene, summary.forms, summary.max_residual, summary.max_error_estimate
    );
    let stdout = match cfg.output_or_sibling(Format::Json) {
        Some(p) => {
            emit::write(&p, &json)?;
            files.push(p);
            line
        }
        None => json,
    };
    let imprecise: Vec<usize> = summary
        .cases
        .iter()
        .filter(|c| !(c.error_estimate <= summary.quadrature_tolerance))
        .map(|c| c.index)
        .collect();
    let failure = if !imprecise.is_empty() {
        Some(CliError::Numerical(format!("quadrature error estimate above tolerance for forms {imprecise:?}")))
    } else if !summary.passed {
        Some(CliError::Acceptance(format!("residual above {} for forms {:?}", summary.tolerance, summary.failing)))
    } else {
        None
    };
    Ok(Outcome { stdout, files, failure })
}
