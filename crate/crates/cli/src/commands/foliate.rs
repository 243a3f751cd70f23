use std::f64::consts::PI;

use heis_core::foliation::{detect_period, trace_foliation, PeriodReport, Section, TraceOptions};
use heis_core::quadrature::{integrate_1d, QuadratureSpec};
use heis_core::surfaces::{periodic_torus_major, torus_leaf, torus_surface, ParamSurface};
use serde::Serialize;

use crate::config::{Format, RunConfig, Scene};
use crate::emit::{self, Csv};
use crate::error::CliError;
use crate::Outcome;

pub const DEFAULT_CLOSE_TOL: f64 = 1e-6;
pub const DEFAULT_RESOLUTION: [usize; 2] = [64, 32];
/// u-turns traced when the radii are not from the periodic family.
pub const GENERIC_TURNS: u32 = 10;

#[derive(Clone, Copy, Debug)]
pub struct Torus {
    pub r: f64,
    pub big_r: f64,
    pub n: Option<u32>,
}

impl Torus {
    pub fn from_config(cfg: &RunConfig) -> Result<Torus, CliError> {
        let r = cfg.params.r.unwrap_or(1.0);
        let n = cfg.params.n;
        let big_r = match (cfg.params.big_r, n) {
            (Some(big), _) => big,
            (None, Some(n)) => periodic_torus_major(r, n),
            (None, None) => periodic_torus_major(r, 2),
        };
        let n = if cfg.params.big_r.is_none() { Some(n.unwrap_or(2)) } else { n };
        Ok(Torus { r, big_r, n })
    }

    pub fn surface(&self) -> Result<ParamSurface, CliError> {
        Ok(torus_surface(self.big_r, self.r)?)
    }

    /// u-turns after which a leaf of the periodic family closes: one turn
    /// moves `v` by `-4 pi / n`.
    pub fn closing_turns(&self) -> u32 {
        match self.n {
            Some(n) if n % 2 == 0 => n / 2,
            Some(n) => n,
            None => GENERIC_TURNS,
        }
    }

    /// Horizontal arclength of one u-turn of a leaf.
    pub fn turn_length(&self) -> Result<f64, CliError> {
        let leaf = torus_leaf(self.big_r, self.r, (0.0, 0.0), 1)?;
        let speed = |u: f64| {
            let c = leaf.velocity(u).components();
            c[0].hypot(c[1])
        };
        Ok(integrate_1d(speed, 0.0, 2.0 * PI, &QuadratureSpec::curve_default()).value)
    }
}

#[derive(Debug, Serialize)]
pub struct FoliationSummary {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub n: Option<u32>,
    pub start: [f64; 2],
    pub arclength: f64,
    pub closed: bool,
    pub returns: Option<usize>,
    pub closure_residual: f64,
    pub first_return_residual: f64,
    /// Signed full turns in `(u, v)` between the start and the closing return.
    pub windings: [i64; 2],
    pub period_arclength: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

pub fn analyse(cfg: &RunConfig) -> Result<(Torus, PeriodReport, heis_core::foliation::FoliationTrace), CliError> {
    let scene = cfg.scene_or(Scene::Foliation);
    if !matches!(scene, Scene::Torus | Scene::Foliation) {
        return Err(CliError::Config(format!("foliate does not take scene {scene}")));
    }
    let torus = Torus::from_config(cfg)?;
    let s = torus.surface()?;
    let start = cfg.params.start.unwrap_or([0.0, 0.0]);
    let length = match cfg.params.arclength {
        Some(l) => l,
        None => (torus.closing_turns() as f64 + 0.5) * torus.turn_length()?,
    };
    let trace = trace_foliation(&s, (start[0], start[1]), length, &TraceOptions::default())?;
    if let Some(e) = &trace.truncated {
        return Err(CliError::Numerical(format!("trace stopped at s = {}: {e}", trace.arclength())));
    }
    let close = cfg.params.close_tolerance.unwrap_or(DEFAULT_CLOSE_TOL);
    let report = detect_period(&trace, Section { axis: 0, value: start[0] }, close)?;
    Ok((torus, report, trace))
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (torus, report, trace) = analyse(cfg)?;
    let summary = FoliationSummary {
        r: torus.r,
        big_r: torus.big_r,
        n: torus.n,
        start: trace.start(),
        arclength: trace.arclength(),
        closed: report.closed,
        returns: report.returns,
        closure_residual: report.closure_residual,
        first_return_residual: report.first_return_residual,
        windings: report.windings,
        period_arclength: report.period_arclength,
        steps_accepted: trace.stats.accepted,
        steps_rejected: trace.stats.rejected,
    };
    let mut files = Vec::new();
    if let Some(path) = cfg.output(Format::Csv) {
        let mut csv = Csv::new(&["s", "u", "v", "x", "y", "t"]);
        for p in &trace.samples {
            let [x, y, t] = p.point.coords();
            csv.row(&[p.s, p.uv[0], p.uv[1], x, y, t]);
        }
        emit::write(path, csv.as_str())?;
        files.push(path.to_path_buf());
    }
    if let Some(path) = cfg.output(Format::Obj) {
        let res = cfg.params.resolution.unwrap_or(DEFAULT_RESOLUTION);
        emit::write(path, &emit::surface_obj(&torus.surface()?, res))?;
        files.push(path.to_path_buf());
    }
    let json = emit::json(&summary)?;
    let stdout = match cfg.output_or_sibling(Format::Json) {
        Some(p) => {
            emit::write(&p, &json)?;
            files.push(p);
            format!(
                "foliate R = {}: closed {} after {:?} returns, windings {:?}, residual {:e}",
                torus.big_r, summary.closed, summary.returns, summary.windings, summary.closure_residual
            )
        }
        None => json,
    };
    Ok(Outcome {
        stdout,
        files,
        failure: None,
    })
}
