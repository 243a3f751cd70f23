//! Tracing leaves of the characteristic foliation in parameter space and
//! detecting closed leaves through Poincaré-section returns.

use crate::error::{HeisError, Result};
use crate::group::Point1;
use crate::ode::{self, Control, DenseStep, OdeOptions, StepStats};
use crate::surfaces::{foliation_direction, ParamSurface};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    pub ode: OdeOptions,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            ode: OdeOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    pub s: f64,
    /// Unwrapped parameters.
    pub uv: [f64; 2],
    pub point: Point1,
}

#[derive(Clone, Debug)]
pub struct FoliationTrace {
    pub samples: Vec<TraceSample>,
    pub steps: Vec<DenseStep<2>>,
    /// Full periods crossed in `u` and `v` (zero for non-periodic parameters).
    pub winding: [i64; 2],
    /// Parameter distance between the end and the start, modulo periods.
    pub closure_residual: f64,
    pub periods: [Option<f64>; 2],
    /// `+1` or `-1`: the global choice of sign for the direction field.
    pub orientation: f64,
    pub stats: StepStats,
    /// Set when tracing stopped early, e.g. near a characteristic point.
    pub truncated: Option<HeisError>,
}

impl FoliationTrace {
    pub fn start(&self) -> [f64; 2] {
        self.samples[0].uv
    }

    pub fn end(&self) -> [f64; 2] {
        self.samples[self.samples.len() - 1].uv
    }

    pub fn arclength(&self) -> f64 {
        self.samples[self.samples.len() - 1].s
    }

    /// Unwrapped parameters at arclength `s` from the dense output.
    pub fn param_at(&self, s: f64) -> Option<[f64; 2]> {
        let i = self.steps.partition_point(|st| st.s1() < s);
        let st = self.steps.get(i)?;
        (s >= st.s0 - 1e-14).then(|| st.eval(s))
    }
}

/// Distance of `d` to the nearest multiple of `period`.
pub fn wrapped(d: f64, period: Option<f64>) -> f64 {
    match period {
        Some(p) => (d - p * (d / p).round()).abs(),
        None => d.abs(),
    }
}

/// Traces the leaf through `start` for arclength `length` (measured in
/// the frame metric), oriented so that the initial `v`-velocity is
/// nonnegative.
pub fn trace_foliation(s: &ParamSurface, start: (f64, f64), length: f64, opts: &TraceOptions) -> Result<FoliationTrace> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(HeisError::InvalidParameter(format!("trace length must be positive, got {length}")));
    }
    let (d0, _) = foliation_direction(s, start.0, start.1)?;
    let orientation = if d0[1] > 1e-14 || (d0[1].abs() <= 1e-14 && d0[0] >= 0.0) {
        1.0
    } else {
        -1.0
    };
    let rhs = |_: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let (d, _) = foliation_direction(s, y[0], y[1])?;
        Ok([orientation * d[0], orientation * d[1]])
    };
    let mut steps = Vec::new();
    let mut samples = vec![TraceSample {
        s: 0.0,
        uv: [start.0, start.1],
        point: s.position(start.0, start.1),
    }];
    let run = ode::integrate(rhs, 0.0, [start.0, start.1], length, &opts.ode, |st| {
        steps.push(*st);
        let uv = st.end();
        samples.push(TraceSample {
            s: st.s1(),
            uv,
            point: s.position(uv[0], uv[1]),
        });
        Control::Continue
    })?;
    let periods = s.periods();
    let (a, b) = (samples[0].uv, samples[samples.len() - 1].uv);
    let winding = [0, 1].map(|k| periods[k].map_or(0, |p| ((b[k] - a[k]) / p).trunc() as i64));
    let closure_residual = wrapped(b[0] - a[0], periods[0]).hypot(wrapped(b[1] - a[1], periods[1]));
    Ok(FoliationTrace {
        samples,
        steps,
        winding,
        closure_residual,
        periods,
        orientation,
        stats: run.stats,
        truncated: run.interrupted,
    })
}

/// `{u = value}` (axis 0) or `{v = value}` (axis 1), modulo the period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Section {
    pub axis: usize,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectionCrossing {
    pub s: f64,
    pub uv: [f64; 2],
    pub direction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodReport {
    pub closed: bool,
    /// Index of the closing return (1 = first return).
    pub returns: Option<usize>,
    pub first_return_residual: f64,
    /// Residual at the closing return, or at the first return when open.
    pub closure_residual: f64,
    pub windings: [i64; 2],
    pub period_arclength: f64,
    pub return_point: [f64; 2],
    pub crossings: Vec<SectionCrossing>,
}

/// Bisection tolerance on arclength for section crossings.
pub const CROSSING_TOL: f64 = 1e-10;

/// All transversal crossings of `section` along the trace, in order.
pub fn section_crossings(trace: &FoliationTrace, section: Section) -> Vec<SectionCrossing> {
    let ax = section.axis;
    let period = trace.periods[ax];
    let mut out = Vec::new();
    for st in &trace.steps {
        let (c0, c1) = (st.start()[ax], st.end()[ax]);
        if c0 == c1 {
            continue;
        }
        let (lo, hi) = (c0.min(c1), c0.max(c1));
        let levels: Vec<f64> = match period {
            Some(p) => {
                let k0 = ((lo - section.value) / p).ceil() as i64;
                let k1 = ((hi - section.value) / p).floor() as i64;
                (k0..=k1).map(|k| section.value + k as f64 * p).collect()
            }
            None => vec![section.value],
        };
        let dir = (c1 - c0).signum();
        let mut found: Vec<SectionCrossing> = levels
            .into_iter()
            .filter(|&l| l > lo && l <= hi)
            .map(|l| {
                let g = |s: f64| st.eval(s)[ax] - l;
                let s = ode::bisect(g, st.s0, st.s1(), CROSSING_TOL);
                let mut uv = st.eval(s);
                uv[ax] = l;
                SectionCrossing { s, uv, direction: dir }
            })
            .collect();
        if dir < 0.0 {
            found.reverse();
        }
        out.extend(found);
    }
    out
}

/// First return to `section` that closes up to `close_tol`. The start of
/// the trace is the reference point when it lies on the section; otherwise
/// the first crossing is.
pub fn detect_period(trace: &FoliationTrace, section: Section, close_tol: f64) -> Result<PeriodReport> {
    if section.axis > 1 {
        return Err(HeisError::InvalidParameter(format!("section axis {} is not 0 or 1", section.axis)));
    }
    let ax = section.axis;
    let other = 1 - ax;
    let crossings = section_crossings(trace, section);
    let start = trace.start();
    let on_section = wrapped(start[ax] - section.value, trace.periods[ax]) <= 1e-12;
    let (reference, rest): (SectionCrossing, Vec<SectionCrossing>) = if on_section {
        let dir = trace
            .steps
            .first()
            .map(|st| (st.end()[ax] - st.start()[ax]).signum())
            .unwrap_or(0.0);
        (
            SectionCrossing {
                s: 0.0,
                uv: start,
                direction: dir,
            },
            crossings.iter().copied().filter(|c| c.s > 1e-9).collect(),
        )
    } else {
        match crossings.split_first() {
            Some((first, rest)) => (*first, rest.to_vec()),
            None => return Err(HeisError::Inconclusive("trace never crosses the section".into())),
        }
    };
    let returns: Vec<SectionCrossing> = rest.into_iter().filter(|c| c.direction == reference.direction).collect();
    if returns.is_empty() {
        return Err(HeisError::Inconclusive("fewer than two section crossings".into()));
    }
    let residual = |c: &SectionCrossing| wrapped(c.uv[other] - reference.uv[other], trace.periods[other]);
    let first_return_residual = residual(&returns[0]);
    let closing = returns.iter().position(|c| residual(c) <= close_tol);
    let ret = returns[closing.unwrap_or(0)];
    let windings = [0, 1].map(|k| trace.periods[k].map_or(0, |p| ((ret.uv[k] - reference.uv[k]) / p).round() as i64));
    Ok(PeriodReport {
        closed: closing.is_some(),
        returns: closing.map(|i| i + 1),
        first_return_residual,
        closure_residual: residual(&ret),
        windings,
        period_arclength: ret.s - reference.s,
        return_point: ret.uv,
        crossings,
    })
}

/// Largest `|theta(chord)| / |chord|` over consecutive samples, with
/// `theta` taken at the chord midpoint (the exact line integral of the
/// contact form over the straight chord).
pub fn chord_horizontality(trace: &FoliationTrace) -> f64 {
    trace
        .samples
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].point.coords(), w[1].point.coords());
            let c = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
            let th = c[2] + 0.5 * m[1] * c[0] - 0.5 * m[0] * c[1];
            let len = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
            if len > 0.0 {
                th.abs() / len
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}
