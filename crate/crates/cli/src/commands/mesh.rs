use heis_core::scenes::{sigma_cylinder, torus_band, BAND_ANGLE, BAND_TORUS_N, SIGMA_HEIGHT};
use heis_core::surfaces::{vertical_halfplane, ParamSurface};

use crate::commands::foliate::Torus;
use crate::config::{sibling, Format, RunConfig, Scene};
use crate::emit::{self, Csv};
use crate::error::CliError;
use crate::Outcome;

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 1025;

pub fn default_resolution(scene: Scene) -> [usize; 2] {
    match scene {
        Scene::SigmaCylinder | Scene::Band => [256, 16],
        Scene::Halfplane => [41, 21],
        _ => [64, 32],
    }
}

pub fn surface(scene: Scene, cfg: &RunConfig) -> Result<ParamSurface, CliError> {
    let p = &cfg.params;
    Ok(match scene {
        Scene::SigmaCylinder => sigma_cylinder(p.h.unwrap_or(SIGMA_HEIGHT))?,
        Scene::Band => torus_band(p.n.unwrap_or(BAND_TORUS_N), p.phi_max.unwrap_or(BAND_ANGLE))?,
        Scene::Torus => Torus::from_config(cfg)?.surface()?,
        Scene::Halfplane => vertical_halfplane(),
        other => return Err(CliError::Config(format!("export-mesh needs a surface scene, not {other}"))),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let scene = cfg.scene_or(Scene::SigmaCylinder);
    let s = surface(scene, cfg)?;
    let obj = cfg
        .output_or_sibling(Format::Obj)
        .ok_or_else(|| CliError::Config("export-mesh needs an obj output".into()))?;
    let res = cfg.params.resolution.unwrap_or(default_resolution(scene));
    emit::write(&obj, &emit::surface_obj(&s, res))?;
    let mut files = vec![obj.clone()];
    let samples = cfg.params.samples.unwrap_or(DEFAULT_BOUNDARY_SAMPLES);
    for (i, comp) in s.boundary().iter().enumerate() {
        let sign = comp.orientation.sign();
        let mut csv = Csv::new(&["tau", "x", "y", "t", "orientation"]);
        for (tau, p) in comp.curve.polyline(samples) {
            let [x, y, t] = p.coords();
            csv.row(&[tau, x, y, t, sign]);
        }
        let tag = if sign > 0.0 { "plus" } else { "minus" };
        let path = sibling(&obj, &format!("boundary-{i}-{}-{tag}", comp.label), "csv");
        emit::write(&path, csv.as_str())?;
        files.push(path);
    }
    let stdout = format!(
        "export-mesh {scene}: {} x {} grid, {} boundary components",
        res[0],
        res[1],
        s.boundary().len()
    );
    Ok(Outcome {
        stdout,
        files,
        failure: None,
    })
}
