//! Composite Gauss–Legendre quadrature on intervals and rectangles with a
//! half-resolution error estimate.

use std::f64::consts::PI;

use crate::exec::Exec;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Single-panel rule on `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Composite-rule configuration.
///
/// `panels[0]` is used for curves and for the first surface parameter,
/// `panels[1]` for the second surface parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub panels: [usize; 2],
    pub nodes: usize,
    /// Also integrate at half the panel count and report the difference.
    pub richardson: bool,
    /// Results whose error estimate exceeds this are flagged.
    pub tolerance: Option<f64>,
    pub exec: Exec,
}

impl QuadratureSpec {
    pub fn surface_default() -> Self {
        QuadratureSpec {
            panels: [64, 64],
            nodes: 8,
            richardson: true,
            tolerance: None,
            exec: Exec::default(),
        }
    }

    pub fn curve_default() -> Self {
        QuadratureSpec {
            panels: [256, 256],
            ..Self::surface_default()
        }
    }

    pub fn with_panels(mut self, u: usize, v: usize) -> Self {
        self.panels = [u, v];
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn rule(&self) -> GaussLegendre {
        GaussLegendre::new(self.nodes)
    }

    fn halved(&self) -> Option<[usize; 2]> {
        if self.richardson && self.panels[0] >= 2 && self.panels[1] >= 2 {
            Some([self.panels[0] / 2, self.panels[1] / 2])
        } else if self.richardson && self.panels[0] >= 2 {
            Some([self.panels[0] / 2, self.panels[1]])
        } else {
            None
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::surface_default()
    }
}

/// Quadrature value with its half-resolution error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// `|I(panels) - I(panels / 2)|`, when computed.
    pub error_estimate: Option<f64>,
    pub flagged: bool,
}

impl QuadResult {
    pub fn exact(value: f64) -> Self {
        QuadResult {
            value,
            error_estimate: Some(0.0),
            flagged: false,
        }
    }

    pub fn error(&self) -> f64 {
        self.error_estimate.unwrap_or(0.0)
    }

    pub(crate) fn with_flag(mut self, tol: Option<f64>) -> Self {
        if let (Some(tol), Some(err)) = (tol, self.error_estimate) {
            self.flagged = !(err <= tol);
        }
        if !self.value.is_finite() {
            self.flagged = true;
        }
        self
    }

    /// Sum of independent results; estimates add.
    pub fn combine(self, other: QuadResult, sign: f64) -> QuadResult {
        QuadResult {
            value: self.value + sign * other.value,
            error_estimate: match (self.error_estimate, other.error_estimate) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            flagged: self.flagged || other.flagged,
        }
    }
}

/// Composite rule over `[a, b]` split into `panels` equal panels.
pub fn composite_1d<F>(f: &F, a: f64, b: f64, panels: usize, rule: &GaussLegendre, exec: Exec) -> f64
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let h = (b - a) / panels as f64;
    exec.sum(panels, |k| {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        rule.integrate(f, lo, hi)
    })
}

/// Composite tensor rule over `[u0, u1] x [v0, v1]`.
pub fn composite_2d<F>(
    f: &F,
    u: (f64, f64),
    v: (f64, f64),
    panels: [usize; 2],
    rule: &GaussLegendre,
    exec: Exec,
) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let hu = (u.1 - u.0) / panels[0] as f64;
    let hv = (v.1 - v.0) / panels[1] as f64;
    let n = rule.len();
    // one task per u-panel; inner sums are sequential
    exec.sum(panels[0], |i| {
        let ulo = u.0 + i as f64 * hu;
        let uhi = if i + 1 == panels[0] { u.1 } else { ulo + hu };
        let (umid, uhalf) = (0.5 * (ulo + uhi), 0.5 * (uhi - ulo));
        let mut acc = 0.0;
        for j in 0..panels[1] {
            let vlo = v.0 + j as f64 * hv;
            let vhi = if j + 1 == panels[1] { v.1 } else { vlo + hv };
            let (vmid, vhalf) = (0.5 * (vlo + vhi), 0.5 * (vhi - vlo));
            let mut panel = 0.0;
            for a in 0..n {
                let uu = umid + uhalf * rule.nodes[a];
                let mut row = 0.0;
                for b in 0..n {
                    row += rule.weights[b] * f(uu, vmid + vhalf * rule.nodes[b]);
                }
                panel += rule.weights[a] * row;
            }
            acc += panel * uhalf * vhalf;
        }
        acc
    })
}

/// One-dimensional integral with error estimate per `spec` (uses `panels[0]`).
pub fn integrate_1d<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let rule = spec.rule();
    let value = composite_1d(&f, a, b, spec.panels[0], &rule, spec.exec);
    let error_estimate = spec.halved().map(|half| {
        let coarse = composite_1d(&f, a, b, half[0], &rule, spec.exec);
        (value - coarse).abs()
    });
    QuadResult {
        value,
        error_estimate,
        flagged: false,
    }
    .with_flag(spec.tolerance)
}

/// Two-dimensional integral with error estimate per `spec`.
pub fn integrate_2d<F>(f: F, u: (f64, f64), v: (f64, f64), spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let rule = spec.rule();
    let value = composite_2d(&f, u, v, spec.panels, &rule, spec.exec);
    let error_estimate = spec.halved().map(|half| {
        let coarse = composite_2d(&f, u, v, half, &rule, spec.exec);
        (value - coarse).abs()
    });
    QuadResult {
        value,
        error_estimate,
        flagged: false,
    }
    .with_flag(spec.tolerance)
}

/// Running integral `F(tau) = int_a^tau f` of a fixed integrand, tabulated at
/// panel edges and completed inside a panel with one more Gauss rule.
#[derive(Clone, Debug)]
pub struct CumulativeIntegral {
    a: f64,
    h: f64,
    cumulative: Vec<f64>,
    rule: GaussLegendre,
}

impl CumulativeIntegral {
    pub fn new<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, panels: usize, nodes: usize) -> Self {
        let rule = GaussLegendre::new(nodes);
        let h = (b - a) / panels as f64;
        let mut cumulative = Vec::with_capacity(panels + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..panels {
            let lo = a + k as f64 * h;
            acc += rule.integrate(f, lo, lo + h);
            cumulative.push(acc);
        }
        CumulativeIntegral { a, h, cumulative, rule }
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    pub fn eval<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, tau: f64) -> f64 {
        let panels = self.cumulative.len() - 1;
        let pos = (tau - self.a) / self.h;
        let k = if pos <= 0.0 {
            0
        } else {
            (pos.floor() as usize).min(panels.saturating_sub(1))
        };
        let lo = self.a + k as f64 * self.h;
        if tau == lo {
            return self.cumulative[k];
        }
        self.cumulative[k] + self.rule.integrate(f, lo, tau)
    }
}
