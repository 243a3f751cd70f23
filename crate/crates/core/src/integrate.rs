//! Pullback integration of Heisenberg forms over curves and surfaces, and
//! the Stokes check `int_S D omega = int_{dS} omega` for degree-one forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::HCurve;
use crate::error::{HeisError, Result};
use crate::exec::Exec;
use crate::field::{frame_gradient, Aabb, ScalarField};
use crate::group::{Point1, TangentVector};
use crate::quadrature::{integrate_1d, integrate_2d, QuadResult, QuadratureSpec};
use crate::rumin::{bump_form, d_coefficients, vertical_correction, HForm};
use crate::surfaces::{BoundaryComponent, ParamSurface};

/// Default seed for generated test forms.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// `int_Gamma omega = int omega(Gamma'(tau)) dtau`.
pub fn integrate_curve(omega: &HForm, gamma: &HCurve, quad: &QuadratureSpec) -> Result<QuadResult> {
    let HForm::One { f, g } = omega else {
        return Err(HeisError::DegreeMismatch {
            expected: 1,
            got: omega.degree(),
        });
    };
    let support = omega.support();
    let Some((a, b)) = gamma.integration_domain(support.as_ref())? else {
        return Ok(QuadResult::exact(0.0));
    };
    let integrand = |tau: f64| {
        let v = gamma.velocity(tau);
        let c = v.components();
        f.value(&v.base) * c[0] + g.value(&v.base) * c[1]
    };
    Ok(integrate_1d(integrand, a, b, quad))
}

/// `int int omega(S_u, S_v) du dv` in the stored parametrization.
pub fn integrate_surface(omega: &HForm, s: &ParamSurface, quad: &QuadratureSpec) -> Result<QuadResult> {
    let HForm::Two { a, b } = omega else {
        return Err(HeisError::DegreeMismatch {
            expected: 2,
            got: omega.degree(),
        });
    };
    let support = omega.support();
    let Some(rect) = s.integration_domain(support.as_ref())? else {
        return Ok(QuadResult::exact(0.0));
    };
    let integrand = |u: f64, v: f64| {
        let (su, sv) = s.partials(u, v);
        let p = su.base;
        if let Some(bx) = &support {
            if !bx.contains(&p) {
                return 0.0;
            }
        }
        let [tdx, tdy] = pullback_2(&su, &sv);
        a.value(&p) * tdx + b.value(&p) * tdy
    };
    Ok(integrate_2d(integrand, rect.u, rect.v, quad))
}

/// `int_S D omega` for a degree-one `omega`; the same integral as
/// `integrate_surface(&D(omega), ..)` with both coefficients evaluated
/// together.
pub fn integrate_d(omega: &HForm, s: &ParamSurface, quad: &QuadratureSpec) -> Result<QuadResult> {
    let HForm::One { f, g } = omega else {
        return Err(HeisError::DegreeMismatch {
            expected: 1,
            got: omega.degree(),
        });
    };
    let support = omega.support();
    let Some(rect) = s.integration_domain(support.as_ref())? else {
        return Ok(QuadResult::exact(0.0));
    };
    let integrand = |u: f64, v: f64| {
        let (su, sv) = s.partials(u, v);
        let p = su.base;
        if let Some(bx) = &support {
            if !bx.contains(&p) {
                return 0.0;
            }
        }
        let [tdx, tdy] = pullback_2(&su, &sv);
        let [a, b] = d_coefficients(f, g, &p);
        a * tdx + b * tdy
    };
    Ok(integrate_2d(integrand, rect.u, rect.v, quad))
}

/// `((theta^dx)(S_u, S_v), (theta^dy)(S_u, S_v))`.
fn pullback_2(su: &TangentVector<1>, sv: &TangentVector<1>) -> [f64; 2] {
    let (cu, cv) = (su.components(), sv.components());
    let (tu, tv) = (su.theta(), sv.theta());
    [tu * cv[0] - cu[0] * tv, tu * cv[1] - cu[1] * tv]
}

fn check_boundary(s: &ParamSurface) -> Result<()> {
    if s.boundary().is_empty() && !(s.periodic[0] && s.periodic[1]) {
        return Err(HeisError::MissingBoundary);
    }
    Ok(())
}

/// Sum over boundary components of sign times the curve integral. A
/// surface periodic in both parameters has empty boundary.
pub fn boundary_integral(omega: &HForm, s: &ParamSurface, quad: &QuadratureSpec) -> Result<QuadResult> {
    check_boundary(s)?;
    components_integral(omega, s.boundary(), quad)
}

pub fn components_integral(omega: &HForm, components: &[BoundaryComponent], quad: &QuadratureSpec) -> Result<QuadResult> {
    let mut acc = QuadResult::exact(0.0);
    for c in components {
        acc = acc.combine(integrate_curve(omega, &c.curve, quad)?, c.orientation.sign());
    }
    Ok(acc)
}

/// Panel settings for the two sides of a Stokes check.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesQuadrature {
    pub surface: QuadratureSpec,
    pub curve: QuadratureSpec,
}

impl Default for StokesQuadrature {
    fn default() -> Self {
        StokesQuadrature {
            surface: QuadratureSpec::surface_default(),
            curve: QuadratureSpec::curve_default(),
        }
    }
}

impl StokesQuadrature {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.surface.exec = exec;
        self.curve.exec = exec;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesReport {
    pub lhs: QuadResult,
    pub rhs: QuadResult,
    pub residual: f64,
}

impl StokesReport {
    /// Combined quadrature error estimate of both sides.
    pub fn error_estimate(&self) -> f64 {
        self.lhs.error() + self.rhs.error()
    }

    pub fn flagged(&self) -> bool {
        self.lhs.flagged || self.rhs.flagged
    }
}

/// `lhs = int_S D omega`, `rhs = int_{dS} omega`, `residual = |lhs - rhs|`.
pub fn stokes_residual(s: &ParamSurface, omega: &HForm, quad: &StokesQuadrature) -> Result<StokesReport> {
    if !omega.is_compactly_supported() && !s.is_compact() {
        return Err(HeisError::NonCompact);
    }
    let lhs = integrate_d(omega, s, &quad.surface)?;
    let rhs = boundary_integral(omega, s, &quad.curve)?;
    Ok(StokesReport {
        lhs,
        rhs,
        residual: (lhs.value - rhs.value).abs(),
    })
}

/// Stokes checks for many forms; parallel across forms per `exec`.
pub fn stokes_sweep(s: &ParamSurface, forms: &[HForm], quad: &StokesQuadrature, exec: Exec) -> Result<Vec<StokesReport>> {
    let inner = match exec {
        Exec::Parallel => quad.clone().with_exec(Exec::Sequential),
        Exec::Sequential => quad.clone(),
    };
    exec.map(forms.len(), |i| stokes_residual(s, &forms[i], &inner))
        .into_iter()
        .collect()
}

/// `|int_Gamma d0 f - (f(end) - f(start))|` along a bounded curve.
pub fn stokes_residual_curve(gamma: &HCurve, f: &dyn ScalarField, quad: &QuadratureSpec) -> Result<f64> {
    if !gamma.is_bounded() {
        return Err(HeisError::NonCompact);
    }
    let (a, b) = gamma.domain;
    let integrand = |tau: f64| {
        let v = gamma.velocity(tau);
        let g = frame_gradient(f, &v.base);
        let (fa, fb, _) = v.frame_coords();
        g[0] * fa[0] + g[1] * fb[0]
    };
    let lhs = integrate_1d(integrand, a, b, quad).value;
    Ok((lhs - (f.value(&gamma.position(b)) - f.value(&gamma.position(a)))).abs())
}

/// `sum sign int upsilon_omega` over the given curves.
pub fn vertical_boundary_integral(omega: &HForm, components: &[BoundaryComponent], quad: &QuadratureSpec) -> Result<QuadResult> {
    let upsilon = vertical_correction(omega)?;
    let support = omega.support();
    let mut acc = QuadResult::exact(0.0);
    for comp in components {
        let Some((a, b)) = comp.curve.integration_domain(support.as_ref())? else {
            continue;
        };
        let r = integrate_1d(|tau| upsilon.eval(&comp.curve.velocity(tau)), a, b, quad);
        acc = acc.combine(r, comp.orientation.sign());
    }
    Ok(acc)
}

/// `|int_{dS} upsilon_omega|`; vanishes when the boundary is horizontal.
pub fn vertical_term_vanishing(s: &ParamSurface, omega: &HForm, quad: &QuadratureSpec) -> Result<f64> {
    check_boundary(s)?;
    Ok(vertical_boundary_integral(omega, s.boundary(), quad)?.value.abs())
}

/// Placement of a generated bump form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSpec {
    pub center: Point1,
    pub radius: f64,
    /// Boundary component the center was taken from.
    pub component: usize,
}

impl BumpSpec {
    pub fn form(&self) -> Result<HForm> {
        bump_form(self.center, self.radius)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSampler {
    pub radius: (f64, f64),
    /// Fraction of centers placed exactly on the boundary.
    pub on_boundary: f64,
    /// Largest offset of the remaining centers, as a fraction of the radius.
    pub offset: f64,
    /// Boundary parameter window for unbounded components.
    pub window: (f64, f64),
}

impl Default for BumpSampler {
    fn default() -> Self {
        BumpSampler {
            radius: (0.2, 0.6),
            on_boundary: 0.5,
            offset: 0.5,
            window: (-1.0, 1.0),
        }
    }
}

/// `count` bump placements on or near the boundary of `s`, reproducible
/// from `seed`.
pub fn seeded_bumps(s: &ParamSurface, count: usize, seed: u64, sampler: &BumpSampler) -> Result<Vec<BumpSpec>> {
    let comps = s.boundary();
    if comps.is_empty() {
        return Err(HeisError::MissingBoundary);
    }
    if !(sampler.radius.0 > 0.0 && sampler.radius.0 <= sampler.radius.1) {
        return Err(HeisError::InvalidParameter("bump radius range must be positive and ordered".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let component = rng.random_range(0..comps.len());
        let curve = &comps[component].curve;
        let (a, b) = if curve.is_bounded() { curve.domain } else { sampler.window };
        let tau = rng.random_range(a..b);
        let radius = rng.random_range(sampler.radius.0..=sampler.radius.1);
        let mut c = curve.position(tau).coords();
        if rng.random::<f64>() >= sampler.on_boundary {
            let dir: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt().max(1e-12);
            let len = sampler.offset * radius * rng.random::<f64>();
            for k in 0..3 {
                c[k] += len * dir[k] / n;
            }
        }
        out.push(BumpSpec {
            center: Point1::from_coords(c),
            radius,
            component,
        });
    }
    Ok(out)
}

/// Support boxes of the generated forms, for diagnostics.
pub fn supports(bumps: &[BumpSpec]) -> Vec<Aabb> {
    bumps.iter().map(|b| Aabb::around(b.center.coords(), b.radius)).collect()
}
