//! Scalar fields on `H^1` with frame-derivative oracles.
//!
//! A field either supplies exact truncated Taylor expansions (polynomials,
//! waves, bumps and anything built from them), or only point values, in
//! which case frame derivatives fall back to central differences along the
//! flows of `X`, `Y`, `T`.

use std::fmt;
use std::sync::Arc;

use crate::group::Point1;
use crate::taylor::{Taylor, MAX_ORDER};

/// Shared handle to a scalar field.
pub type Field = Arc<dyn ScalarField>;

pub trait ScalarField: Send + Sync {
    fn value(&self, p: &Point1) -> f64;

    /// Truncated Taylor expansion about `p`, when exact derivatives of that
    /// order are available.
    fn taylor(&self, _p: &Point1, _order: usize) -> Option<Taylor> {
        None
    }

    /// Euclidean box outside which the field vanishes identically.
    fn support(&self) -> Option<Aabb> {
        None
    }

    fn has_exact_derivatives(&self) -> bool;

    /// Value, coordinate gradient and coordinate Hessian at `p`.
    fn coordinate_jet(&self, p: &Point1) -> Option<CoordinateJet> {
        self.taylor(p, 2).map(|t| CoordinateJet::from_taylor(&t))
    }
}

/// Second-order jet in the coordinates `(x, y, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoordinateJet {
    pub value: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
}

impl CoordinateJet {
    pub fn from_taylor(t: &Taylor) -> Self {
        let e = |k: usize| {
            let mut a = [0usize; 3];
            a[k] = 1;
            a
        };
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (e(i), e(j));
                hess[i][j] = t.partial(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
            }
        }
        CoordinateJet {
            value: t.value(),
            grad: t.gradient(),
            hess,
        }
    }

    /// Frame jet at `p`: `Z_i Z_j f = a_i^k a_j^l f_kl + a_i^k (d_k a_j^l) f_l`.
    pub fn to_frame(&self, p: &Point1) -> FrameJet {
        let a = FrameDir::ALL.map(|d| d.at(p));
        let mut grad = [0.0; 3];
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            grad[i] = (0..3).map(|k| a[i][k] * self.grad[k]).sum();
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += a[i][k] * a[j][l] * self.hess[k][l];
                    }
                }
                hess[i][j] = s;
            }
            // only the t-components of X and Y vary: d_y X^t = -1/2, d_x Y^t = 1/2
            hess[i][0] -= 0.5 * a[i][1] * self.grad[2];
            hess[i][1] += 0.5 * a[i][0] * self.grad[2];
        }
        FrameJet {
            value: self.value,
            grad,
            hess,
        }
    }
}

/// Axis-aligned box in coordinates `(x, y, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    pub fn around(center: [f64; 3], radius: f64) -> Self {
        Aabb {
            min: center.map(|c| c - radius),
            max: center.map(|c| c + radius),
        }
    }

    pub fn contains(&self, p: &Point1) -> bool {
        let c = p.coords();
        (0..3).all(|k| c[k] >= self.min[k] && c[k] <= self.max[k])
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        let mut out = *self;
        for k in 0..3 {
            out.min[k] = out.min[k].min(other.min[k]);
            out.max[k] = out.max[k].max(other.max[k]);
        }
        out
    }

    pub fn intersects(&self, other: &Aabb) -> bool {
        (0..3).all(|k| self.min[k] <= other.max[k] && other.min[k] <= self.max[k])
    }
}

/// Union of supports; `None` (unbounded) wins.
pub fn union_support(a: Option<Aabb>, b: Option<Aabb>) -> Option<Aabb> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.union(&b)),
        _ => None,
    }
}

/// One of the left-invariant fields `X`, `Y`, `T` of `H^1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameDir {
    X,
    Y,
    T,
}

impl FrameDir {
    pub const ALL: [FrameDir; 3] = [FrameDir::X, FrameDir::Y, FrameDir::T];

    /// Coordinate components at `p`.
    pub fn at(self, p: &Point1) -> [f64; 3] {
        match self {
            FrameDir::X => [1.0, 0.0, -0.5 * p.y[0]],
            FrameDir::Y => [0.0, 1.0, 0.5 * p.x[0]],
            FrameDir::T => [0.0, 0.0, 1.0],
        }
    }

    /// Time-`s` flow from `p`, i.e. right translation by `exp(s Z)`.
    pub fn flow(self, p: &Point1, s: f64) -> Point1 {
        let step = match self {
            FrameDir::X => Point1::new(s, 0.0, 0.0),
            FrameDir::Y => Point1::new(0.0, s, 0.0),
            FrameDir::T => Point1::new(0.0, 0.0, s),
        };
        p.mul(&step)
    }
}

/// Applies `Z = a(p) . grad` to an expansion about `p`; the order drops by one.
pub fn frame_derivative_taylor(t: &Taylor, p: &Point1, dir: FrameDir) -> Taylor {
    let order = t.order() - 1;
    match dir {
        FrameDir::T => t.derivative(2),
        FrameDir::X => {
            let y = Taylor::variable(1, p.y[0], order);
            t.derivative(0).axpy(-0.5, &y.mul(&t.derivative(2)))
        }
        FrameDir::Y => {
            let x = Taylor::variable(0, p.x[0], order);
            t.derivative(1).axpy(0.5, &x.mul(&t.derivative(2)))
        }
    }
}

fn scale_at(p: &Point1) -> f64 {
    let c = p.coords();
    1.0 + (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

/// First-order difference step along frame flows.
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Step for second-order (nested) frame derivatives.
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Central difference of `f` along the flow of `dir`.
pub fn fd_frame_derivative(f: &dyn ScalarField, p: &Point1, dir: FrameDir, step: f64) -> f64 {
    let h = step * scale_at(p);
    (f.value(&dir.flow(p, h)) - f.value(&dir.flow(p, -h))) / (2.0 * h)
}

/// `(Xf, Yf, Tf)` at `p`.
pub fn frame_gradient(f: &dyn ScalarField, p: &Point1) -> [f64; 3] {
    if let Some(t) = f.taylor(p, 1) {
        FrameDir::ALL.map(|d| frame_derivative_taylor(&t, p, d).value())
    } else {
        FrameDir::ALL.map(|d| fd_frame_derivative(f, p, d, FD_STEP_FIRST))
    }
}

/// Value, frame gradient and second frame derivatives `Z_i Z_j f` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameJet {
    pub value: f64,
    pub grad: [f64; 3],
    /// `hess[i][j] = Z_i (Z_j f)` with `Z = (X, Y, T)`.
    pub hess: [[f64; 3]; 3],
}

pub fn frame_jet(f: &dyn ScalarField, p: &Point1) -> FrameJet {
    match f.coordinate_jet(p) {
        Some(j) => j.to_frame(p),
        None => fd_frame_jet(f, p),
    }
}

/// Finite-difference jet: first derivatives with the small step, second
/// derivatives with the wider nested step.
pub fn fd_frame_jet(f: &dyn ScalarField, p: &Point1) -> FrameJet {
    let value = f.value(p);
    let grad = FrameDir::ALL.map(|d| fd_frame_derivative(f, p, d, FD_STEP_FIRST));
    let h = FD_STEP_SECOND * scale_at(p);
    let mut hess = [[0.0; 3]; 3];
    for (i, di) in FrameDir::ALL.iter().enumerate() {
        for (j, dj) in FrameDir::ALL.iter().enumerate() {
            hess[i][j] = if i == j {
                (f.value(&di.flow(p, h)) - 2.0 * value + f.value(&di.flow(p, -h))) / (h * h)
            } else {
                let at = |s: f64, r: f64| f.value(&dj.flow(&di.flow(p, s), r));
                (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
            };
        }
    }
    FrameJet { value, grad, hess }
}

// ---------------------------------------------------------------------------
// concrete fields

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn value(&self, _p: &Point1) -> f64 {
        self.0
    }
    fn taylor(&self, _p: &Point1, order: usize) -> Option<Taylor> {
        Some(Taylor::constant(self.0, order))
    }
    fn support(&self) -> Option<Aabb> {
        if self.0 == 0.0 {
            Some(Aabb::around([0.0; 3], 0.0))
        } else {
            None
        }
    }
    fn has_exact_derivatives(&self) -> bool {
        true
    }
}

/// Sparse polynomial `sum c x^i y^j t^k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<(f64, [u8; 3])>,
}

impl Polynomial {
    pub fn new(terms: Vec<(f64, [u8; 3])>) -> Self {
        Polynomial { terms }
    }

    pub fn x() -> Self {
        Polynomial::new(vec![(1.0, [1, 0, 0])])
    }

    pub fn y() -> Self {
        Polynomial::new(vec![(1.0, [0, 1, 0])])
    }

    pub fn t() -> Self {
        Polynomial::new(vec![(1.0, [0, 0, 1])])
    }

    /// Fourth power of the Korányi gauge minus one.
    pub fn koranyi_level() -> Self {
        Polynomial::new(vec![
            (1.0, [4, 0, 0]),
            (2.0, [2, 2, 0]),
            (1.0, [0, 4, 0]),
            (16.0, [0, 0, 2]),
            (-1.0, [0, 0, 0]),
        ])
    }
}

impl ScalarField for Polynomial {
    fn value(&self, p: &Point1) -> f64 {
        let c = p.coords();
        self.terms
            .iter()
            .map(|(k, e)| {
                k * c[0].powi(e[0] as i32) * c[1].powi(e[1] as i32) * c[2].powi(e[2] as i32)
            })
            .sum()
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        if order > MAX_ORDER {
            return None;
        }
        let vars = Taylor::coordinates(p.coords(), order);
        let mut acc = Taylor::zero(order);
        for (k, e) in &self.terms {
            let mono = vars[0]
                .powi(e[0] as u32)
                .mul(&vars[1].powi(e[1] as u32))
                .mul(&vars[2].powi(e[2] as u32));
            acc = acc.axpy(*k, &mono);
        }
        Some(acc)
    }

    fn has_exact_derivatives(&self) -> bool {
        true
    }
}

/// Plane wave `amplitude * cos(k . p + phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wave {
    pub amplitude: f64,
    pub wavevector: [f64; 3],
    pub phase: f64,
}

impl Wave {
    fn argument(&self, c: [f64; 3]) -> f64 {
        self.wavevector[0] * c[0] + self.wavevector[1] * c[1] + self.wavevector[2] * c[2] + self.phase
    }
}

impl ScalarField for Wave {
    fn value(&self, p: &Point1) -> f64 {
        self.amplitude * self.argument(p.coords()).cos()
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        if order > MAX_ORDER {
            return None;
        }
        let [x, y, t] = Taylor::coordinates(p.coords(), order);
        let k = self.wavevector;
        let arg = x
            .scale(k[0])
            .axpy(k[1], &y)
            .axpy(k[2], &t)
            .add_constant(self.phase);
        Some(arg.cos().scale(self.amplitude))
    }

    fn has_exact_derivatives(&self) -> bool {
        true
    }
}

/// Compactly supported bump `(1 - |p - c|^2 / rho^2)^m` inside the Euclidean
/// ball of radius `rho`, zero outside; of class `C^(m-1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub center: [f64; 3],
    pub radius: f64,
    pub exponent: u32,
}

impl Bump {
    fn profile_arg(&self, c: [f64; 3]) -> f64 {
        let r2: f64 = (0..3).map(|k| (c[k] - self.center[k]).powi(2)).sum();
        1.0 - r2 / (self.radius * self.radius)
    }
}

impl ScalarField for Bump {
    fn value(&self, p: &Point1) -> f64 {
        let q = self.profile_arg(p.coords());
        if q > 0.0 {
            q.powi(self.exponent as i32)
        } else {
            0.0
        }
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        // derivatives beyond the smoothness class are not continuous
        if order > MAX_ORDER || order >= self.exponent as usize {
            return None;
        }
        let c = p.coords();
        if self.profile_arg(c) <= 0.0 {
            return Some(Taylor::zero(order));
        }
        let vars = Taylor::coordinates(c, order);
        let inv = 1.0 / (self.radius * self.radius);
        let mut q = Taylor::constant(1.0, order);
        for k in 0..3 {
            let d = vars[k].add_constant(-self.center[k]);
            q = q.axpy(-inv, &d.mul(&d));
        }
        Some(q.powi(self.exponent))
    }

    fn support(&self) -> Option<Aabb> {
        Some(Aabb::around(self.center, self.radius))
    }

    fn coordinate_jet(&self, p: &Point1) -> Option<CoordinateJet> {
        if self.exponent < 3 {
            return None;
        }
        let c = p.coords();
        let q = self.profile_arg(c);
        if q <= 0.0 {
            return Some(CoordinateJet {
                value: 0.0,
                grad: [0.0; 3],
                hess: [[0.0; 3]; 3],
            });
        }
        let m = self.exponent as i32;
        let inv = 1.0 / (self.radius * self.radius);
        let dq: [f64; 3] = std::array::from_fn(|k| -2.0 * inv * (c[k] - self.center[k]));
        let (q0, q1, q2) = (q.powi(m), q.powi(m - 1), q.powi(m - 2));
        let (m1, m2) = (m as f64, (m * (m - 1)) as f64);
        let grad = dq.map(|d| m1 * q1 * d);
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                hess[i][j] = m2 * q2 * dq[i] * dq[j] - if i == j { 2.0 * inv * m1 * q1 } else { 0.0 };
            }
        }
        Some(CoordinateJet { value: q0, grad, hess })
    }

    fn has_exact_derivatives(&self) -> bool {
        true
    }
}

/// Frame derivative `Z f` of another field.
#[derive(Clone)]
pub struct FrameDerivative {
    pub base: Field,
    pub dir: FrameDir,
}

impl FrameDerivative {
    pub fn new(base: Field, dir: FrameDir) -> Self {
        FrameDerivative { base, dir }
    }
}

impl ScalarField for FrameDerivative {
    fn value(&self, p: &Point1) -> f64 {
        if let Some(t) = self.base.taylor(p, 1) {
            return frame_derivative_taylor(&t, p, self.dir).value();
        }
        // a difference of a difference needs the wider step
        let step = if self.base.has_exact_derivatives() {
            FD_STEP_FIRST
        } else {
            FD_STEP_SECOND
        };
        fd_frame_derivative(self.base.as_ref(), p, self.dir, step)
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        if order + 1 > MAX_ORDER {
            return None;
        }
        self.base
            .taylor(p, order + 1)
            .map(|t| frame_derivative_taylor(&t, p, self.dir))
    }

    fn support(&self) -> Option<Aabb> {
        self.base.support()
    }

    fn has_exact_derivatives(&self) -> bool {
        self.base.has_exact_derivatives()
    }
}

/// `sum_i w_i f_i`.
#[derive(Clone, Default)]
pub struct LinearCombination {
    pub terms: Vec<(f64, Field)>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(f64, Field)>) -> Self {
        LinearCombination { terms }
    }
}

impl ScalarField for LinearCombination {
    fn value(&self, p: &Point1) -> f64 {
        self.terms.iter().map(|(w, f)| w * f.value(p)).sum()
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        let mut acc = Taylor::zero(order);
        for (w, f) in &self.terms {
            acc = acc.axpy(*w, &f.taylor(p, order)?);
        }
        Some(acc)
    }

    fn support(&self) -> Option<Aabb> {
        let mut it = self.terms.iter().map(|(_, f)| f.support());
        let first = it.next().unwrap_or(Some(Aabb::around([0.0; 3], 0.0)));
        it.fold(first, union_support)
    }

    fn has_exact_derivatives(&self) -> bool {
        self.terms.iter().all(|(_, f)| f.has_exact_derivatives())
    }
}

/// Pointwise product `f g`.
#[derive(Clone)]
pub struct Product(pub Field, pub Field);

impl ScalarField for Product {
    fn value(&self, p: &Point1) -> f64 {
        self.0.value(p) * self.1.value(p)
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        Some(self.0.taylor(p, order)?.mul(&self.1.taylor(p, order)?))
    }

    fn support(&self) -> Option<Aabb> {
        match (self.0.support(), self.1.support()) {
            (Some(a), Some(b)) => {
                let mut out = a;
                for k in 0..3 {
                    out.min[k] = a.min[k].max(b.min[k]);
                    out.max[k] = a.max[k].min(b.max[k]);
                }
                Some(out)
            }
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        }
    }

    fn has_exact_derivatives(&self) -> bool {
        self.0.has_exact_derivatives() && self.1.has_exact_derivatives()
    }
}

/// Field known only through point values.
pub struct FnField<F> {
    f: F,
    support: Option<Aabb>,
}

impl<F: Fn(&Point1) -> f64 + Send + Sync> FnField<F> {
    pub fn new(f: F) -> Self {
        FnField { f, support: None }
    }

    pub fn with_support(mut self, support: Aabb) -> Self {
        self.support = Some(support);
        self
    }
}

impl<F> fmt::Debug for FnField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnField").field("support", &self.support).finish()
    }
}

impl<F: Fn(&Point1) -> f64 + Send + Sync> ScalarField for FnField<F> {
    fn value(&self, p: &Point1) -> f64 {
        (self.f)(p)
    }

    fn support(&self) -> Option<Aabb> {
        self.support
    }

    fn has_exact_derivatives(&self) -> bool {
        false
    }
}

/// Hides the exact derivatives of a field so that every derivative is taken
/// by finite differences.
#[derive(Clone)]
pub struct FiniteDifferenceOnly(pub Field);

impl ScalarField for FiniteDifferenceOnly {
    fn value(&self, p: &Point1) -> f64 {
        self.0.value(p)
    }

    fn support(&self) -> Option<Aabb> {
        self.0.support()
    }

    fn has_exact_derivatives(&self) -> bool {
        false
    }
}

pub fn field<F: ScalarField + 'static>(f: F) -> Field {
    Arc::new(f)
}
