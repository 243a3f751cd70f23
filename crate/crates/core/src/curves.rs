//! Planar curves, horizontal curves in `H^1` and horizontal lifts.
//!
//! Under `theta = dt + (y/2) dx - (x/2) dy`, a curve over `(x, y)` is
//! horizontal exactly when `t' = (x y' - y x') / 2`. [`LiftSign::Plus`]
//! integrates that equation; [`LiftSign::Minus`] integrates its negative,
//! which is the height function printed for the lemniscate example
//! (`(-9 sin t - sin 3t) / 24`) and is horizontal for the mirrored contact
//! form `dt - (y/2) dx + (x/2) dy`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{HeisError, Result};
use crate::field::Aabb;
use crate::group::{Point1, TangentVector};
use crate::quadrature::{CumulativeIntegral, QuadratureSpec};

type Planar = Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>;
type Spatial = Arc<dyn Fn(f64) -> Point1 + Send + Sync>;
type SpatialVelocity = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;
type Clip = Arc<dyn Fn(&Aabb) -> Option<(f64, f64)> + Send + Sync>;

/// Relative step of the central-difference velocity fallback.
pub const VELOCITY_FD_STEP: f64 = 1e-6;

/// Half-width of the sampling window used for curves with unbounded domain.
pub const UNBOUNDED_WINDOW: f64 = 10.0;

fn fd_step(tau: f64) -> f64 {
    VELOCITY_FD_STEP * (1.0 + tau.abs())
}

/// A parametrized curve in the plane.
#[derive(Clone)]
pub struct PlanarCurve {
    pub domain: (f64, f64),
    position: Planar,
    velocity: Option<Planar>,
}

impl PlanarCurve {
    pub fn new(
        domain: (f64, f64),
        position: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
        velocity: Option<Planar>,
    ) -> Self {
        PlanarCurve {
            domain,
            position: Arc::new(position),
            velocity,
        }
    }

    pub fn with_velocity(
        domain: (f64, f64),
        position: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
        velocity: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        Self::new(domain, position, Some(Arc::new(velocity)))
    }

    pub fn position(&self, tau: f64) -> [f64; 2] {
        (self.position)(tau)
    }

    /// Exact velocity when supplied, central difference otherwise.
    pub fn velocity(&self, tau: f64) -> [f64; 2] {
        match &self.velocity {
            Some(v) => v(tau),
            None => {
                let h = fd_step(tau);
                let (a, b) = (self.position(tau + h), self.position(tau - h));
                [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)]
            }
        }
    }

    pub fn has_exact_velocity(&self) -> bool {
        self.velocity.is_some()
    }

    pub fn closure_gap(&self) -> f64 {
        let (p, q) = (self.position(self.domain.0), self.position(self.domain.1));
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        self.closure_gap() <= tol
    }

    /// Planar dilation `lambda * gamma`.
    pub fn scaled(&self, lambda: f64) -> PlanarCurve {
        let pos = self.position.clone();
        let this = self.clone();
        PlanarCurve::with_velocity(
            self.domain,
            move |tau| pos(tau).map(|c| lambda * c),
            move |tau| this.velocity(tau).map(|c| lambda * c),
        )
    }

    /// Same image traversed over `[a, a + k (b - a)]`, repeating the loop.
    pub fn repeated(&self, times: usize) -> PlanarCurve {
        let (a, b) = self.domain;
        PlanarCurve {
            domain: (a, a + times as f64 * (b - a)),
            position: self.position.clone(),
            velocity: self.velocity.clone(),
        }
    }

    /// Integrand `(x y' - y x') / 2` of the signed area and of the lift.
    pub fn area_density(&self, tau: f64) -> f64 {
        let p = self.position(tau);
        let v = self.velocity(tau);
        0.5 * (p[0] * v[1] - p[1] * v[0])
    }
}

/// A parametrized curve in `H^1`.
#[derive(Clone)]
pub struct HCurve {
    pub domain: (f64, f64),
    position: Spatial,
    velocity: Option<SpatialVelocity>,
    clip: Option<Clip>,
}

impl HCurve {
    pub fn new(
        domain: (f64, f64),
        position: impl Fn(f64) -> Point1 + Send + Sync + 'static,
        velocity: Option<SpatialVelocity>,
    ) -> Self {
        HCurve {
            domain,
            position: Arc::new(position),
            velocity,
            clip: None,
        }
    }

    pub fn with_velocity(
        domain: (f64, f64),
        position: impl Fn(f64) -> Point1 + Send + Sync + 'static,
        velocity: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    ) -> Self {
        Self::new(domain, position, Some(Arc::new(velocity)))
    }

    /// Restricts integration over an unbounded domain to the parameters
    /// whose image can meet a given box.
    pub fn with_clip(mut self, clip: impl Fn(&Aabb) -> Option<(f64, f64)> + Send + Sync + 'static) -> Self {
        self.clip = Some(Arc::new(clip));
        self
    }

    pub fn position(&self, tau: f64) -> Point1 {
        (self.position)(tau)
    }

    pub fn velocity(&self, tau: f64) -> TangentVector<1> {
        let base = self.position(tau);
        let v = match &self.velocity {
            Some(v) => v(tau),
            None => {
                let h = fd_step(tau);
                let (a, b) = (self.position(tau + h).coords(), self.position(tau - h).coords());
                [0, 1, 2].map(|k| (a[k] - b[k]) / (2.0 * h))
            }
        };
        TangentVector::new(base, v)
    }

    pub fn has_exact_velocity(&self) -> bool {
        self.velocity.is_some()
    }

    pub fn is_bounded(&self) -> bool {
        self.domain.0.is_finite() && self.domain.1.is_finite()
    }

    /// Parameter interval to integrate over when only `support` matters.
    /// `None` means the curve misses the box.
    pub fn integration_domain(&self, support: Option<&Aabb>) -> Result<Option<(f64, f64)>> {
        if self.is_bounded() {
            return Ok(Some(self.domain));
        }
        match (support, &self.clip) {
            (Some(b), Some(clip)) => Ok(clip(b)),
            _ => Err(HeisError::NonCompact),
        }
    }

    /// Domain, or a symmetric window of [`UNBOUNDED_WINDOW`] when unbounded.
    pub fn sampling_domain(&self) -> (f64, f64) {
        let (a, b) = self.domain;
        (
            if a.is_finite() { a } else { -UNBOUNDED_WINDOW },
            if b.is_finite() { b } else { UNBOUNDED_WINDOW },
        )
    }

    pub fn closure_gap(&self) -> f64 {
        if !self.is_bounded() {
            return f64::INFINITY;
        }
        let (p, q) = (self.position(self.domain.0).coords(), self.position(self.domain.1).coords());
        (0..3).map(|k| (p[k] - q[k]).powi(2)).sum::<f64>().sqrt()
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        self.closure_gap() <= tol
    }

    /// Image under a map whose differential is `dmap(p, v)`, evaluated at `p`.
    pub fn mapped(
        &self,
        map: impl Fn(&Point1) -> Point1 + Send + Sync + 'static,
        dmap: impl Fn(&Point1, [f64; 3]) -> [f64; 3] + Send + Sync + 'static,
    ) -> HCurve {
        let this = self.clone();
        let this_v = self.clone();
        HCurve {
            domain: self.domain,
            position: Arc::new(move |tau| map(&this.position(tau))),
            velocity: Some(Arc::new(move |tau| {
                let v = this_v.velocity(tau);
                dmap(&v.base, v.components())
            })),
            clip: None,
        }
    }

    /// Left translation `g . Gamma`.
    pub fn left_translate(&self, g: Point1) -> HCurve {
        let mut out = self.mapped(
            move |p| g.mul(p),
            move |_, v| [v[0], v[1], v[2] + 0.5 * (g.x[0] * v[1] - g.y[0] * v[0])],
        );
        out.clip = self.clip.clone().map(|clip| {
            let shifted: Clip = Arc::new(move |b: &Aabb| {
                // the translate meets `b` iff the original meets g^{-1} b;
                // only central translations are clipped exactly
                let mut pre = *b;
                pre.min[2] -= g.t;
                pre.max[2] -= g.t;
                if g.x[0] == 0.0 && g.y[0] == 0.0 {
                    clip(&pre)
                } else {
                    None
                }
            });
            shifted
        });
        out
    }

    /// Pointwise left multiplication by the central element `(0, 0, s)`.
    pub fn vertical_translate(&self, s: f64) -> HCurve {
        self.left_translate(Point1::new(0.0, 0.0, s))
    }

    pub fn rotate_t_axis(&self, phi: f64) -> HCurve {
        let (sn, cs) = phi.sin_cos();
        self.mapped(
            move |p| p.rotate_t_axis(phi),
            move |_, v| [cs * v[0] - sn * v[1], sn * v[0] + cs * v[1], v[2]],
        )
    }

    /// Image under `(x, y, t) -> (x, y, -t)`, exchanging the two contact
    /// form sign conventions.
    pub fn mirror_vertical(&self) -> HCurve {
        self.mapped(
            |p| Point1::new(p.x[0], p.y[0], -p.t),
            |_, v| [v[0], v[1], -v[2]],
        )
    }

    /// Same curve traversed backwards over the same domain.
    pub fn reversed(&self) -> HCurve {
        let (a, b) = self.domain;
        let this = self.clone();
        let this_v = self.clone();
        HCurve {
            domain: self.domain,
            position: Arc::new(move |tau| this.position(a + b - tau)),
            velocity: Some(Arc::new(move |tau| this_v.velocity(a + b - tau).components().map(|c| -c))),
            clip: self.clip.clone().map(|clip| {
                let rev: Clip = Arc::new(move |bx: &Aabb| clip(bx).map(|(lo, hi)| (a + b - hi, a + b - lo)));
                rev
            }),
        }
    }

    /// Samples `(tau, point)` on a uniform grid including both ends.
    pub fn polyline(&self, samples: usize) -> Vec<(f64, Point1)> {
        let (a, b) = self.sampling_domain();
        let n = samples.max(2);
        (0..n)
            .map(|i| {
                let tau = a + (b - a) * i as f64 / (n - 1) as f64;
                (tau, self.position(tau))
            })
            .collect()
    }
}

/// Sign in front of `(x y' - y x') / 2` in the lift equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum LiftSign {
    /// Horizontal for `theta = dt + (y/2) dx - (x/2) dy`.
    Plus,
    /// Reproduces the printed lemniscate lift; horizontal for the mirrored form.
    #[default]
    Minus,
}

impl LiftSign {
    pub fn value(self) -> f64 {
        match self {
            LiftSign::Plus => 1.0,
            LiftSign::Minus => -1.0,
        }
    }

    pub fn from_value(s: f64) -> Option<Self> {
        if s == 1.0 {
            Some(LiftSign::Plus)
        } else if s == -1.0 {
            Some(LiftSign::Minus)
        } else {
            None
        }
    }
}

/// Lift of `gamma` through `start`: `t(tau) = start.t + sign * int_a^tau (x y' - y x') / 2`.
pub fn lift_horizontal(gamma: &PlanarCurve, start: Point1, sign: LiftSign, quad: &QuadratureSpec) -> Result<HCurve> {
    let (a, b) = gamma.domain;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(HeisError::InvalidParameter(format!("lift needs a bounded domain, got [{a}, {b}]")));
    }
    let p0 = gamma.position(a);
    let scale = 1.0 + p0[0].abs().max(p0[1].abs());
    if (p0[0] - start.x[0]).abs() > 1e-12 * scale || (p0[1] - start.y[0]).abs() > 1e-12 * scale {
        return Err(HeisError::LiftStartMismatch {
            start_x: start.x[0],
            start_y: start.y[0],
            curve_x: p0[0],
            curve_y: p0[1],
        });
    }
    let s = sign.value();
    let g = gamma.clone();
    let density: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(move |tau: f64| g.area_density(tau));
    let table = CumulativeIntegral::new(&*density, a, b, quad.panels[0].max(1), quad.nodes);
    let g_pos = gamma.clone();
    let g_vel = gamma.clone();
    let t0 = start.t;
    Ok(HCurve::with_velocity(
        gamma.domain,
        move |tau| {
            let p = g_pos.position(tau);
            let h = table.eval(&*density, tau);
            Point1::new(p[0], p[1], t0 + s * h)
        },
        move |tau| {
            let v = g_vel.velocity(tau);
            [v[0], v[1], s * g_vel.area_density(tau)]
        },
    ))
}

/// Signed area `oint (x y' - y x') / 2`; the lift of a closed curve closes
/// exactly when this vanishes.
pub fn lift_closed_defect(gamma: &PlanarCurve, quad: &QuadratureSpec) -> Result<f64> {
    let gap = gamma.closure_gap();
    let p = gamma.position(gamma.domain.0);
    if gap > 1e-10 * (1.0 + p[0].abs().max(p[1].abs())) {
        return Err(HeisError::NotClosed { gap });
    }
    let g = gamma.clone();
    Ok(crate::quadrature::integrate_1d(move |tau| g.area_density(tau), gamma.domain.0, gamma.domain.1, quad).value)
}

/// `max |theta(Gamma'(tau))|` over `samples` uniform parameters.
pub fn horizontality_residual(curve: &HCurve, samples: usize) -> f64 {
    let (a, b) = curve.sampling_domain();
    let n = samples.max(1);
    (0..n)
        .map(|i| {
            let tau = if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
            curve.velocity(tau).theta().abs()
        })
        .fold(0.0, f64::max)
}

pub fn vertical_translate(curve: &HCurve, s: f64) -> HCurve {
    curve.vertical_translate(s)
}

/// A planar self-intersection `gamma(tau1) = gamma(tau2)` and the height
/// difference of the lifted curve there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub tau1: f64,
    pub tau2: f64,
    pub planar_gap: f64,
    pub vertical_gap: f64,
}

/// Default parameter sample count of the self-intersection search.
pub const SELF_INTERSECTION_SAMPLES: usize = 4096;

/// Planar self-intersections of the projection of `curve`.
///
/// Samples are hashed into cells on the `(x, y)` plane; pairs of samples in
/// neighbouring cells that are far apart along the curve are refined by
/// Newton's method on `gamma(tau1) - gamma(tau2) = 0`.
pub fn self_intersections(curve: &HCurve, tol: f64, samples: usize) -> Vec<Crossing> {
    let (a, b) = curve.sampling_domain();
    let n = samples.max(8);
    let span = b - a;
    let closed = curve.is_bounded() && {
        let (p, q) = (curve.position(a), curve.position(b));
        (p.x[0] - q.x[0]).hypot(p.y[0] - q.y[0]) <= tol
    };
    let count = if closed { n } else { n + 1 };
    let taus: Vec<f64> = (0..count).map(|i| a + span * i as f64 / n as f64).collect();
    let pts: Vec<[f64; 2]> = taus
        .iter()
        .map(|&tau| {
            let p = curve.position(tau);
            [p.x[0], p.y[0]]
        })
        .collect();

    let chord = |i: usize, j: usize| (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]);
    let mut arc = vec![0.0; count + 1];
    let mut max_chord: f64 = 0.0;
    for i in 0..count {
        let j = if i + 1 < count { i + 1 } else if closed { 0 } else { i };
        let c = chord(i, j);
        max_chord = max_chord.max(c);
        arc[i + 1] = arc[i] + c;
    }
    let total = arc[count];
    let cell = tol.max(2.0 * max_chord).max(f64::MIN_POSITIVE);
    let along = |i: usize, j: usize| {
        let d = (arc[i] - arc[j]).abs();
        if closed {
            d.min(total - d)
        } else {
            d
        }
    };

    let key = |p: &[f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }

    let wrap = |tau: f64| {
        if closed {
            a + (tau - a).rem_euclid(span)
        } else {
            tau.clamp(a, b)
        }
    };
    let param_gap = |t1: f64, t2: f64| {
        let d = (t1 - t2).abs();
        if closed {
            d.min(span - d)
        } else {
            d
        }
    };
    let min_param_sep = 4.0 * span / n as f64;

    let mut found: Vec<Crossing> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let (cx, cy) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &j in bucket {
                    if j <= i || along(i, j) <= 4.0 * cell {
                        continue;
                    }
                    let Some((t1, t2, res)) = refine_crossing(curve, taus[i], taus[j], tol, &wrap) else {
                        continue;
                    };
                    if param_gap(t1, t2) <= min_param_sep {
                        continue;
                    }
                    let dup = found.iter().any(|c| {
                        (param_gap(c.tau1, t1) < 1e-7 * span && param_gap(c.tau2, t2) < 1e-7 * span)
                            || (param_gap(c.tau1, t2) < 1e-7 * span && param_gap(c.tau2, t1) < 1e-7 * span)
                    });
                    if dup {
                        continue;
                    }
                    let (q1, q2) = (curve.position(t1), curve.position(t2));
                    found.push(Crossing {
                        tau1: t1.min(t2),
                        tau2: t1.max(t2),
                        planar_gap: res,
                        vertical_gap: (q1.t - q2.t).abs(),
                    });
                }
            }
        }
    }
    found.sort_by(|x, y| x.tau1.total_cmp(&y.tau1).then(x.tau2.total_cmp(&y.tau2)));
    found
}

fn refine_crossing(
    curve: &HCurve,
    mut t1: f64,
    mut t2: f64,
    tol: f64,
    wrap: &dyn Fn(f64) -> f64,
) -> Option<(f64, f64, f64)> {
    let planar = |tau: f64| {
        let p = curve.position(tau);
        [p.x[0], p.y[0]]
    };
    let residual = |t1: f64, t2: f64| {
        let (p, q) = (planar(t1), planar(t2));
        ([p[0] - q[0], p[1] - q[1]], (p[0] - q[0]).hypot(p[1] - q[1]))
    };
    let (mut f, mut r) = residual(t1, t2);
    for _ in 0..60 {
        if r <= 1e-14 {
            break;
        }
        let (v1, v2) = (curve.velocity(t1), curve.velocity(t2));
        // J = [gamma'(t1), -gamma'(t2)]
        let (j11, j21) = (v1.dx[0], v1.dy[0]);
        let (j12, j22) = (-v2.dx[0], -v2.dy[0]);
        let det = j11 * j22 - j12 * j21;
        let scale = (j11.hypot(j21) * j12.hypot(j22)).max(f64::MIN_POSITIVE);
        if det.abs() <= 1e-10 * scale {
            break;
        }
        let d1 = (j22 * f[0] - j12 * f[1]) / det;
        let d2 = (-j21 * f[0] + j11 * f[1]) / det;
        let (n1, n2) = (wrap(t1 - d1), wrap(t2 - d2));
        let (nf, nr) = residual(n1, n2);
        if !(nr < r) {
            break;
        }
        t1 = n1;
        t2 = n2;
        f = nf;
        r = nr;
    }
    (r <= tol).then_some((t1, t2, r))
}

/// Smallest height difference `|t(tau1) - t(tau2)|` over planar
/// self-intersections; `+inf` when the projection is simple.
pub fn self_intersection_gap(curve: &HCurve, tol: f64) -> f64 {
    self_intersection_gap_with(curve, tol, SELF_INTERSECTION_SAMPLES)
}

pub fn self_intersection_gap_with(curve: &HCurve, tol: f64, samples: usize) -> f64 {
    self_intersections(curve, tol, samples)
        .iter()
        .map(|c| c.vertical_gap)
        .fold(f64::INFINITY, f64::min)
}

// ---------------------------------------------------------------------------
// constructors

/// Lemniscate of Gerono `(cos tau, sin tau cos tau)`, `tau in [0, 2 pi]`.
pub fn lemniscate() -> PlanarCurve {
    PlanarCurve::with_velocity(
        (0.0, 2.0 * PI),
        |tau| [tau.cos(), tau.sin() * tau.cos()],
        |tau| [-tau.sin(), (2.0 * tau).cos()],
    )
}

/// Counterclockwise circle of radius `rho` about the origin.
pub fn circle(rho: f64) -> Result<PlanarCurve> {
    if !(rho > 0.0) {
        return Err(HeisError::NonPositiveRadius(rho));
    }
    Ok(PlanarCurve::with_velocity(
        (0.0, 2.0 * PI),
        move |tau| [rho * tau.cos(), rho * tau.sin()],
        move |tau| [-rho * tau.sin(), rho * tau.cos()],
    ))
}

/// Planar segment `p + tau (q - p)`, `tau in [0, 1]`.
pub fn segment(p: [f64; 2], q: [f64; 2]) -> PlanarCurve {
    let d = [q[0] - p[0], q[1] - p[1]];
    PlanarCurve::with_velocity((0.0, 1.0), move |tau| [p[0] + tau * d[0], p[1] + tau * d[1]], move |_| d)
}

/// Horizontal segment `p . (tau a, tau b, 0)`, `tau in [0, 1]`, ending at
/// `p . (a, b, 0)`.
pub fn horizontal_segment(p: Point1, direction: [f64; 2]) -> HCurve {
    let v = TangentVector::from_frame(p, [direction[0]], [direction[1]], 0.0).components();
    HCurve::with_velocity(
        (0.0, 1.0),
        move |tau| Point1::new(p.x[0] + tau * v[0], p.y[0] + tau * v[1], p.t + tau * v[2]),
        move |_| v,
    )
}

/// Vertical segment `p . (0, 0, tau)`, `tau in [0, length]`.
pub fn vertical_segment(p: Point1, length: f64) -> HCurve {
    HCurve::with_velocity(
        (0.0, length),
        move |tau| Point1::new(p.x[0], p.y[0], p.t + tau),
        |_| [0.0, 0.0, 1.0],
    )
}

/// Lift of the lemniscate through `(1, 0, 0)`.
pub fn lemniscate_lift(sign: LiftSign) -> HCurve {
    lift_horizontal(&lemniscate(), Point1::new(1.0, 0.0, 0.0), sign, &QuadratureSpec::curve_default())
        .expect("lemniscate starts at (1, 0)")
}

/// Closed-form height of the printed lemniscate lift.
pub fn lemniscate_lift_height(tau: f64) -> f64 {
    (-9.0 * tau.sin() - (3.0 * tau).sin()) / 24.0
}
