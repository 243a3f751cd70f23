//! Two-dimensional submanifolds of `H^1`: parametrized patches with oriented
//! boundary data, implicit surfaces, characteristic points, the projection
//! of `T` onto tangent planes and the characteristic direction field.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::curves::{self, HCurve};
use crate::error::{HeisError, Result};
use crate::field::{frame_gradient, Aabb, Field};
use crate::group::{Point1, TangentVector};
use crate::quadrature::CumulativeIntegral;

type SurfacePosition = Arc<dyn Fn(f64, f64) -> Point1 + Send + Sync>;
type SurfacePartials = Arc<dyn Fn(f64, f64) -> ([f64; 3], [f64; 3]) + Send + Sync>;
type SurfaceClip = Arc<dyn Fn(&Aabb) -> Option<ParamRect> + Send + Sync>;

/// Parameter rectangle `[u.0, u.1] x [v.0, v.1]`; bounds may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamRect {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl ParamRect {
    pub fn is_bounded(&self) -> bool {
        [self.u.0, self.u.1, self.v.0, self.v.1].iter().all(|c| c.is_finite())
    }

    pub fn width(&self) -> f64 {
        self.u.1 - self.u.0
    }

    pub fn height(&self) -> f64 {
        self.v.1 - self.v.0
    }
}

/// Orientation of a boundary component relative to the induced orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// One boundary curve, traversed as parametrized, with its sign in the
/// induced orientation (parameter rectangle edges taken counterclockwise).
#[derive(Clone)]
pub struct BoundaryComponent {
    pub curve: HCurve,
    pub orientation: Orientation,
    pub label: &'static str,
}

/// A parametrized surface patch in `H^1`.
#[derive(Clone)]
pub struct ParamSurface {
    pub domain: ParamRect,
    /// Periodicity of the `u` and `v` parameters over the domain.
    pub periodic: [bool; 2],
    position: SurfacePosition,
    partials: Option<SurfacePartials>,
    boundary: Vec<BoundaryComponent>,
    clip: Option<SurfaceClip>,
}

/// Relative step of the finite-difference partials fallback.
pub const PARTIALS_FD_STEP: f64 = 1e-6;

impl ParamSurface {
    pub fn new(
        domain: ParamRect,
        periodic: [bool; 2],
        position: impl Fn(f64, f64) -> Point1 + Send + Sync + 'static,
        partials: Option<SurfacePartials>,
    ) -> Self {
        ParamSurface {
            domain,
            periodic,
            position: Arc::new(position),
            partials,
            boundary: Vec::new(),
            clip: None,
        }
    }

    pub fn with_partials(
        domain: ParamRect,
        periodic: [bool; 2],
        position: impl Fn(f64, f64) -> Point1 + Send + Sync + 'static,
        partials: impl Fn(f64, f64) -> ([f64; 3], [f64; 3]) + Send + Sync + 'static,
    ) -> Self {
        Self::new(domain, periodic, position, Some(Arc::new(partials)))
    }

    pub fn with_boundary(mut self, boundary: Vec<BoundaryComponent>) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_clip(mut self, clip: impl Fn(&Aabb) -> Option<ParamRect> + Send + Sync + 'static) -> Self {
        self.clip = Some(Arc::new(clip));
        self
    }

    pub fn position(&self, u: f64, v: f64) -> Point1 {
        (self.position)(u, v)
    }

    /// `(S_u, S_v)` at `(u, v)`; central differences when no exact partials
    /// were supplied.
    pub fn partials(&self, u: f64, v: f64) -> (TangentVector<1>, TangentVector<1>) {
        let base = self.position(u, v);
        let (su, sv) = match &self.partials {
            Some(p) => p(u, v),
            None => {
                let hu = PARTIALS_FD_STEP * (1.0 + u.abs());
                let hv = PARTIALS_FD_STEP * (1.0 + v.abs());
                let d = |a: Point1, b: Point1, h: f64| {
                    let (a, b) = (a.coords(), b.coords());
                    [0, 1, 2].map(|k| (a[k] - b[k]) / (2.0 * h))
                };
                (
                    d(self.position(u + hu, v), self.position(u - hu, v), hu),
                    d(self.position(u, v + hv), self.position(u, v - hv), hv),
                )
            }
        };
        (TangentVector::new(base, su), TangentVector::new(base, sv))
    }

    pub fn boundary(&self) -> &[BoundaryComponent] {
        &self.boundary
    }

    pub fn is_compact(&self) -> bool {
        self.domain.is_bounded()
    }

    /// Parameter region to integrate over when only `support` matters;
    /// `Ok(None)` when the surface misses the support.
    pub fn integration_domain(&self, support: Option<&Aabb>) -> Result<Option<ParamRect>> {
        if self.is_compact() {
            return Ok(Some(self.domain));
        }
        match (support, &self.clip) {
            (Some(b), Some(clip)) => Ok(clip(b)),
            _ => Err(HeisError::NonCompact),
        }
    }

    /// Reparametrization `(u, v) -> S(v, u)`, which reverses the orientation.
    pub fn swapped(&self) -> ParamSurface {
        let this = self.clone();
        let this_p = self.clone();
        let clip = self.clip.clone();
        ParamSurface {
            domain: ParamRect {
                u: self.domain.v,
                v: self.domain.u,
            },
            periodic: [self.periodic[1], self.periodic[0]],
            position: Arc::new(move |u, v| this.position(v, u)),
            partials: Some(Arc::new(move |u, v| {
                let (su, sv) = this_p.partials(v, u);
                (sv.components(), su.components())
            })),
            boundary: self
                .boundary
                .iter()
                .map(|b| BoundaryComponent {
                    curve: b.curve.clone(),
                    orientation: b.orientation.flipped(),
                    label: b.label,
                })
                .collect(),
            clip: clip.map(|c| {
                let swapped: SurfaceClip = Arc::new(move |bx: &Aabb| c(bx).map(|r| ParamRect { u: r.v, v: r.u }));
                swapped
            }),
        }
    }

    /// Image under rotation by `phi` about the `t`-axis.
    pub fn rotated(&self, phi: f64) -> ParamSurface {
        let this = self.clone();
        let this_p = self.clone();
        ParamSurface {
            domain: self.domain,
            periodic: self.periodic,
            position: Arc::new(move |u, v| this.position(u, v).rotate_t_axis(phi)),
            partials: Some(Arc::new(move |u, v| {
                let (su, sv) = this_p.partials(u, v);
                (su.rotate_t_axis(phi).components(), sv.rotate_t_axis(phi).components())
            })),
            boundary: self
                .boundary
                .iter()
                .map(|b| BoundaryComponent {
                    curve: b.curve.rotate_t_axis(phi),
                    orientation: b.orientation,
                    label: b.label,
                })
                .collect(),
            clip: None,
        }
    }

    /// Smallest `|S_u x S_v|` (Euclidean) over an `n x n` grid of the domain.
    pub fn min_immersion_area(&self, n: usize) -> f64 {
        let rect = self.sampling_rect();
        grid(rect, n)
            .map(|(u, v)| {
                let (su, sv) = self.partials(u, v);
                let (a, b) = (su.components(), sv.components());
                let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Domain with infinite bounds replaced by a finite window.
    pub fn sampling_rect(&self) -> ParamRect {
        let w = curves::UNBOUNDED_WINDOW;
        let fin = |c: f64, d: f64| if c.is_finite() { c } else { d };
        ParamRect {
            u: (fin(self.domain.u.0, -w), fin(self.domain.u.1, w)),
            v: (fin(self.domain.v.0, -w), fin(self.domain.v.1, w)),
        }
    }

    /// Period lengths of the periodic parameters.
    pub fn periods(&self) -> [Option<f64>; 2] {
        [
            self.periodic[0].then(|| self.domain.width()),
            self.periodic[1].then(|| self.domain.height()),
        ]
    }
}

/// Iterates an `n x n` grid of cell-centred parameters.
pub fn grid(rect: ParamRect, n: usize) -> impl Iterator<Item = (f64, f64)> {
    let n = n.max(1);
    (0..n).flat_map(move |i| {
        (0..n).map(move |j| {
            (
                rect.u.0 + rect.width() * (i as f64 + 0.5) / n as f64,
                rect.v.0 + rect.height() * (j as f64 + 0.5) / n as f64,
            )
        })
    })
}

// ---------------------------------------------------------------------------
// constructors

/// `P = {(0, y, s) : s > 0}` parametrized by `(y, s)`; its boundary is the
/// `Y`-axis `{(0, y, 0)}` traversed with `y` increasing.
pub fn vertical_halfplane() -> ParamSurface {
    let axis = HCurve::with_velocity(
        (f64::NEG_INFINITY, f64::INFINITY),
        |y| Point1::new(0.0, y, 0.0),
        |_| [0.0, 1.0, 0.0],
    )
    .with_clip(|b| (b.min[0] <= 0.0 && b.max[0] >= 0.0 && b.min[2] <= 0.0 && b.max[2] >= 0.0).then_some((b.min[1], b.max[1])));
    ParamSurface::with_partials(
        ParamRect {
            u: (f64::NEG_INFINITY, f64::INFINITY),
            v: (0.0, f64::INFINITY),
        },
        [false, false],
        |y, s| Point1::new(0.0, y, s),
        |_, _| ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
    )
    .with_boundary(vec![BoundaryComponent {
        curve: axis,
        orientation: Orientation::Positive,
        label: "y-axis",
    }])
    .with_clip(|b| {
        if b.min[0] > 0.0 || b.max[0] < 0.0 || b.max[2] <= 0.0 {
            return None;
        }
        Some(ParamRect {
            u: (b.min[1], b.max[1]),
            v: (b.min[2].max(0.0), b.max[2]),
        })
    })
}

/// Closure tolerance for curves fed to surface constructors.
pub const CLOSURE_TOL: f64 = 1e-9;

/// `Sigma(tau, s) = Gamma(tau) . (0, 0, s)`, `s in [0, h]`. Boundary:
/// `Gamma` (positive) and its vertical translate by `h` (negative).
pub fn lift_cylinder(gamma: &HCurve, height: f64) -> Result<ParamSurface> {
    if !gamma.is_bounded() {
        return Err(HeisError::InvalidParameter("cylinder needs a bounded curve".into()));
    }
    let gap = gamma.closure_gap();
    if gap > CLOSURE_TOL {
        return Err(HeisError::NotClosed { gap });
    }
    if !(height > 0.0 && height.is_finite()) {
        return Err(HeisError::InvalidParameter(format!("cylinder height must be positive, got {height}")));
    }
    let g = gamma.clone();
    let gv = gamma.clone();
    Ok(ParamSurface::with_partials(
        ParamRect {
            u: gamma.domain,
            v: (0.0, height),
        },
        [true, false],
        move |tau, s| {
            let p = g.position(tau);
            Point1::new(p.x[0], p.y[0], p.t + s)
        },
        move |tau, _| (gv.velocity(tau).components(), [0.0, 0.0, 1.0]),
    )
    .with_boundary(vec![
        BoundaryComponent {
            curve: gamma.clone(),
            orientation: Orientation::Positive,
            label: "lower",
        },
        BoundaryComponent {
            curve: gamma.vertical_translate(height),
            orientation: Orientation::Negative,
            label: "upper",
        },
    ]))
}

/// Embedding verdict for a lift cylinder: it self-intersects exactly when
/// the height reaches the vertical gap of the base curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbeddingReport {
    pub embedded: bool,
    pub min_vertical_gap: f64,
}

pub fn cylinder_embedding(gamma: &HCurve, height: f64, samples: usize) -> EmbeddingReport {
    let gap = curves::self_intersection_gap_with(gamma, 1e-9, samples);
    EmbeddingReport {
        embedded: height < gap,
        min_vertical_gap: gap,
    }
}

/// Torus `((R + r cos u) cos v, (R + r cos u) sin v, r sin u)`.
pub fn torus_surface(major: f64, minor: f64) -> Result<ParamSurface> {
    check_torus(major, minor)?;
    let (big, r) = (major, minor);
    Ok(ParamSurface::with_partials(
        ParamRect {
            u: (0.0, 2.0 * PI),
            v: (0.0, 2.0 * PI),
        },
        [true, true],
        move |u, v| torus_point(big, r, u, v),
        move |u, v| torus_partials(big, r, u, v),
    ))
}

fn check_torus(major: f64, minor: f64) -> Result<()> {
    if major > minor && minor > 0.0 && major.is_finite() {
        Ok(())
    } else {
        Err(HeisError::InvalidTorusRadii { major, minor })
    }
}

fn torus_point(big: f64, r: f64, u: f64, v: f64) -> Point1 {
    let rho = big + r * u.cos();
    Point1::new(rho * v.cos(), rho * v.sin(), r * u.sin())
}

fn torus_partials(big: f64, r: f64, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    let rho = big + r * cu;
    ([-r * su * cv, -r * su * sv, r * cu], [-rho * sv, rho * cv, 0.0])
}

/// Major radius `sqrt(r^2 + r^2 n^(2/3))` of the periodic family, `r = minor`.
pub fn periodic_torus_major(minor: f64, n: u32) -> f64 {
    minor * (1.0 + (n as f64).powf(2.0 / 3.0)).sqrt()
}

/// Change of `v` along a characteristic leaf over one full turn in `u`:
/// `int_0^{2 pi} 2 r cos w / (R + r cos w)^2 dw = -4 pi r^2 / (R^2 - r^2)^(3/2)`.
pub fn torus_leaf_v_advance(major: f64, minor: f64) -> f64 {
    -4.0 * PI * minor * minor / (major * major - minor * minor).powf(1.5)
}

/// Characteristic leaf of the torus through `(u0, v0)` as a graph over `u`,
/// traversed for `u_turns` full turns in `u`. Along the torus the leaf
/// equation `dv/du = -theta(S_u) / theta(S_v) = 2 r cos u / (R + r cos u)^2`
/// does not depend on `v`, so `v(u)` is a quadrature.
pub fn torus_leaf(major: f64, minor: f64, start: (f64, f64), u_turns: u32) -> Result<HCurve> {
    check_torus(major, minor)?;
    if u_turns == 0 {
        return Err(HeisError::InvalidParameter("leaf needs at least one turn".into()));
    }
    let (big, r) = (major, minor);
    let (u0, v0) = start;
    let slope = move |u: f64| {
        let rho = big + r * u.cos();
        2.0 * r * u.cos() / (rho * rho)
    };
    let u1 = u0 + 2.0 * PI * u_turns as f64;
    let table = Arc::new(CumulativeIntegral::new(&slope, u0, u1, 256 * u_turns as usize, 8));
    let t2 = table.clone();
    Ok(HCurve::with_velocity(
        (u0, u1),
        move |u| torus_point(big, r, u, v0 + table.eval(&slope, u)),
        move |u| {
            let v = v0 + t2.eval(&slope, u);
            let (su, sv) = torus_partials(big, r, u, v);
            let dv = slope(u);
            [su[0] + dv * sv[0], su[1] + dv * sv[1], su[2] + dv * sv[2]]
        },
    ))
}

/// `(s, phi) -> rotate(phi, sigma(s))`, `phi in [0, phi_max]`. Boundary:
/// `sigma` (positive) and its rotation by `phi_max` (negative); when
/// `sigma` is not closed the two circular side arcs are included as well.
pub fn revolve_curve(sigma: &HCurve, phi_max: f64) -> Result<ParamSurface> {
    if !(phi_max > 0.0 && phi_max <= 2.0 * PI) {
        return Err(HeisError::InvalidRevolutionAngle(phi_max));
    }
    if !sigma.is_bounded() {
        return Err(HeisError::InvalidParameter("revolution needs a bounded curve".into()));
    }
    let closed = sigma.is_closed(CLOSURE_TOL);
    let s1 = sigma.clone();
    let s2 = sigma.clone();
    let mut boundary = vec![
        BoundaryComponent {
            curve: sigma.clone(),
            orientation: Orientation::Positive,
            label: "sigma",
        },
        BoundaryComponent {
            curve: sigma.rotate_t_axis(phi_max),
            orientation: Orientation::Negative,
            label: "rotated",
        },
    ];
    if !closed {
        let arc = |p: Point1, label: &'static str, orientation| {
            let c = HCurve::with_velocity(
                (0.0, phi_max),
                move |phi| p.rotate_t_axis(phi),
                move |phi| {
                    let q = p.rotate_t_axis(phi);
                    [-q.y[0], q.x[0], 0.0]
                },
            );
            BoundaryComponent {
                curve: c,
                orientation,
                label,
            }
        };
        boundary.push(arc(sigma.position(sigma.domain.1), "end-arc", Orientation::Positive));
        boundary.push(arc(sigma.position(sigma.domain.0), "start-arc", Orientation::Negative));
    }
    Ok(ParamSurface::with_partials(
        ParamRect {
            u: sigma.domain,
            v: (0.0, phi_max),
        },
        [closed, phi_max == 2.0 * PI],
        move |s, phi| s1.position(s).rotate_t_axis(phi),
        move |s, phi| {
            let d = s2.velocity(s).rotate_t_axis(phi);
            let q = d.base;
            (d.components(), [-q.y[0], q.x[0], 0.0])
        },
    )
    .with_boundary(boundary))
}

// ---------------------------------------------------------------------------
// pointwise geometry

/// `(theta(S_u), theta(S_v))`; both vanish exactly at characteristic points.
pub fn characteristic_residual(s: &ParamSurface, u: f64, v: f64) -> (f64, f64) {
    let (su, sv) = s.partials(u, v);
    (su.theta(), sv.theta())
}

/// `(Xf, Yf)` at `p`.
pub fn horizontal_gradient(f: &dyn crate::field::ScalarField, p: &Point1) -> (f64, f64) {
    let g = frame_gradient(f, p);
    (g[0], g[1])
}

/// Orthogonal projection of `T(p)` onto `span(S_u, S_v)` in the metric
/// making `X, Y, T` orthonormal.
pub fn project_t(s: &ParamSurface, u: f64, v: f64) -> Result<TangentVector<1>> {
    let (su, sv) = s.partials(u, v);
    let (g11, g12, g22) = (su.frame_dot(&su), su.frame_dot(&sv), sv.frame_dot(&sv));
    let det = g11 * g22 - g12 * g12;
    if !(det > 1e-14 * g11 * g22) {
        return Err(HeisError::DegenerateTangentPlane { u, v });
    }
    let (b1, b2) = (su.theta(), sv.theta());
    let c1 = (g22 * b1 - g12 * b2) / det;
    let c2 = (g11 * b2 - g12 * b1) / det;
    let (a, b) = (su.components(), sv.components());
    Ok(TangentVector::new(su.base, [0, 1, 2].map(|k| c1 * a[k] + c2 * b[k])))
}

/// Relative size below which `(theta(S_u), theta(S_v))` counts as zero.
pub const CHARACTERISTIC_GUARD: f64 = 1e-8;

/// Unit characteristic direction at `(u, v)`: the parameter velocity
/// `(theta(S_v), -theta(S_u)) / |W|`, where `W = theta(S_v) S_u - theta(S_u) S_v`
/// is horizontal and `|W|` is its frame length. Returns the parameter
/// velocity and `W / |W|`.
pub fn foliation_direction(s: &ParamSurface, u: f64, v: f64) -> Result<([f64; 2], TangentVector<1>)> {
    let (su, sv) = s.partials(u, v);
    let (tu, tv) = (su.theta(), sv.theta());
    let scale = su.frame_norm_sq().sqrt().max(sv.frame_norm_sq().sqrt()).max(1.0);
    if tu.hypot(tv) < CHARACTERISTIC_GUARD * scale {
        return Err(HeisError::CharacteristicPoint { u, v });
    }
    let (a, b) = (su.components(), sv.components());
    let w = [0, 1, 2].map(|k| tv * a[k] - tu * b[k]);
    let norm = w[0].hypot(w[1]);
    if !(norm > 0.0) {
        return Err(HeisError::DegenerateTangentPlane { u, v });
    }
    Ok((
        [tv / norm, -tu / norm],
        TangentVector::new(su.base, w.map(|c| c / norm)),
    ))
}

/// Level set `{f = 0}` inside a box.
#[derive(Clone)]
pub struct ImplicitSurface {
    pub f: Field,
    pub region: Aabb,
}

impl ImplicitSurface {
    pub fn new(f: Field, region: Aabb) -> Self {
        ImplicitSurface { f, region }
    }

    /// Smallest `|grad_H f|` over points of the zero set located on an
    /// `n^3` grid (sign changes along grid edges, refined linearly).
    /// `None` when no zero was found.
    pub fn min_horizontal_gradient(&self, n: usize) -> Option<f64> {
        let n = n.max(2);
        let at = |i: usize, j: usize, k: usize| {
            let c = [i, j, k]
                .iter()
                .enumerate()
                .map(|(a, &m)| self.region.min[a] + (self.region.max[a] - self.region.min[a]) * m as f64 / (n - 1) as f64)
                .collect::<Vec<_>>();
            Point1::new(c[0], c[1], c[2])
        };
        let mut best: Option<f64> = None;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = at(i, j, k);
                    let fp = self.f.value(&p);
                    for (di, dj, dk) in [(1, 0, 0), (0, 1, 0), (0, 0, 1)] {
                        if i + di >= n || j + dj >= n || k + dk >= n {
                            continue;
                        }
                        let q = at(i + di, j + dj, k + dk);
                        let fq = self.f.value(&q);
                        if fp == 0.0 || fp * fq < 0.0 {
                            let s = if fp == 0.0 { 0.0 } else { fp / (fp - fq) };
                            let (a, b) = (p.coords(), q.coords());
                            let z = Point1::from_coords([0, 1, 2].map(|m| a[m] + s * (b[m] - a[m])));
                            let (gx, gy) = horizontal_gradient(self.f.as_ref(), &z);
                            let g = gx.hypot(gy);
                            best = Some(best.map_or(g, |b: f64| b.min(g)));
                        }
                    }
                }
            }
        }
        best
    }
}
