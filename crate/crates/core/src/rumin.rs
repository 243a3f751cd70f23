//! The Rumin complex of `H^1` over the coframe `(dx, dy, theta)`:
//!
//! ```text
//! Omega^0 --d0--> Omega^1 --D--> Omega^2 --d2--> Omega^3
//! ```
//!
//! Degree-one forms are stored through their `theta`-free representative
//! `f dx + g dy`. With `c = Xg - Yf` the vertical correction is `c theta`,
//! and `D(f dx + g dy) = d(f dx + g dy + c theta)` reduces to
//! `(Tf - Xc) theta^dx + (Tg - Yc) theta^dy`.

use crate::error::{HeisError, Result};
use crate::field::{
    field, frame_derivative_taylor, frame_jet, union_support, Aabb, Bump, Field, FrameDerivative, FrameDir, LinearCombination,
    ScalarField,
};
use crate::group::{Point1, TangentVector};
use crate::taylor::{Taylor, MAX_ORDER};

/// A Heisenberg form on `H^1`.
#[derive(Clone)]
pub enum HForm {
    /// A function.
    Zero(Field),
    /// `f dx + g dy`.
    One { f: Field, g: Field },
    /// `a theta^dx + b theta^dy`.
    Two { a: Field, b: Field },
    /// `c theta^dx^dy`.
    Three(Field),
}

impl HForm {
    pub fn one(f: impl ScalarField + 'static, g: impl ScalarField + 'static) -> Self {
        HForm::One { f: field(f), g: field(g) }
    }

    pub fn two(a: impl ScalarField + 'static, b: impl ScalarField + 'static) -> Self {
        HForm::Two { a: field(a), b: field(b) }
    }

    pub fn degree(&self) -> usize {
        match self {
            HForm::Zero(_) => 0,
            HForm::One { .. } => 1,
            HForm::Two { .. } => 2,
            HForm::Three(_) => 3,
        }
    }

    pub fn coefficients(&self) -> Vec<&Field> {
        match self {
            HForm::Zero(c) | HForm::Three(c) => vec![c],
            HForm::One { f, g } => vec![f, g],
            HForm::Two { a, b } => vec![a, b],
        }
    }

    pub fn coefficient_values(&self, p: &Point1) -> Vec<f64> {
        self.coefficients().iter().map(|c| c.value(p)).collect()
    }

    /// Box outside which every coefficient vanishes; `None` if unbounded.
    pub fn support(&self) -> Option<Aabb> {
        let mut it = self.coefficients().into_iter().map(|c| c.support());
        let first = it.next().flatten();
        it.fold(first, union_support)
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.support().is_some()
    }

    fn expect_degree(&self, degree: usize) -> Result<()> {
        if self.degree() == degree {
            Ok(())
        } else {
            Err(HeisError::DegreeMismatch {
                expected: degree,
                got: self.degree(),
            })
        }
    }
}

fn combo(terms: Vec<(f64, Field)>) -> Field {
    field(LinearCombination::new(terms))
}

fn deriv(f: &Field, dir: FrameDir) -> Field {
    field(FrameDerivative::new(f.clone(), dir))
}

/// `d0 f = (Xf) dx + (Yf) dy`.
pub fn d0(f: &Field) -> HForm {
    HForm::One {
        f: deriv(f, FrameDir::X),
        g: deriv(f, FrameDir::Y),
    }
}

/// The vertical one-form `c theta`.
#[derive(Clone)]
pub struct VerticalForm {
    pub c: Field,
}

impl VerticalForm {
    pub fn eval(&self, v: &TangentVector<1>) -> f64 {
        self.c.value(&v.base) * v.theta()
    }
}

/// `c = Xg - Yf` for a degree-one form `f dx + g dy`.
#[derive(Clone)]
pub struct CorrectionCoefficient {
    pub f: Field,
    pub g: Field,
}

impl ScalarField for CorrectionCoefficient {
    fn value(&self, p: &Point1) -> f64 {
        match (self.f.taylor(p, 1), self.g.taylor(p, 1)) {
            (Some(tf), Some(tg)) => {
                frame_derivative_taylor(&tg, p, FrameDir::X).value() - frame_derivative_taylor(&tf, p, FrameDir::Y).value()
            }
            _ => crate::field::frame_gradient(self.g.as_ref(), p)[0] - crate::field::frame_gradient(self.f.as_ref(), p)[1],
        }
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        if order + 1 > MAX_ORDER {
            return None;
        }
        let tf = self.f.taylor(p, order + 1)?;
        let tg = self.g.taylor(p, order + 1)?;
        Some(frame_derivative_taylor(&tg, p, FrameDir::X).axpy(-1.0, &frame_derivative_taylor(&tf, p, FrameDir::Y)))
    }

    fn support(&self) -> Option<Aabb> {
        union_support(self.f.support(), self.g.support())
    }

    fn has_exact_derivatives(&self) -> bool {
        self.f.has_exact_derivatives() && self.g.has_exact_derivatives()
    }
}

/// `upsilon = (Xg - Yf) theta`, which annihilates horizontal vectors.
pub fn vertical_correction(alpha: &HForm) -> Result<VerticalForm> {
    alpha.expect_degree(1)?;
    let HForm::One { f, g } = alpha else { unreachable!() };
    Ok(VerticalForm {
        c: field(CorrectionCoefficient { f: f.clone(), g: g.clone() }),
    })
}

/// One coefficient of `D(f dx + g dy)`: `Tf - Xc` (`first`) or `Tg - Yc`.
#[derive(Clone)]
pub struct DCoefficient {
    pub f: Field,
    pub g: Field,
    pub first: bool,
}

impl ScalarField for DCoefficient {
    fn value(&self, p: &Point1) -> f64 {
        d_coefficients(&self.f, &self.g, p)[if self.first { 0 } else { 1 }]
    }

    fn taylor(&self, p: &Point1, order: usize) -> Option<Taylor> {
        if order + 2 > MAX_ORDER {
            return None;
        }
        let tf = self.f.taylor(p, order + 2)?;
        let tg = self.g.taylor(p, order + 2)?;
        let c = frame_derivative_taylor(&tg, p, FrameDir::X).axpy(-1.0, &frame_derivative_taylor(&tf, p, FrameDir::Y));
        let (own, dir) = if self.first { (&tf, FrameDir::X) } else { (&tg, FrameDir::Y) };
        let t_own = frame_derivative_taylor(own, p, FrameDir::T).truncate(order);
        Some(t_own.axpy(-1.0, &frame_derivative_taylor(&c, p, dir)))
    }

    fn support(&self) -> Option<Aabb> {
        union_support(self.f.support(), self.g.support())
    }

    fn has_exact_derivatives(&self) -> bool {
        self.f.has_exact_derivatives() && self.g.has_exact_derivatives()
    }
}

/// Both coefficients of `D(f dx + g dy)` at `p`, sharing the jets.
pub fn d_coefficients(f: &Field, g: &Field, p: &Point1) -> [f64; 2] {
    let jf = frame_jet(f.as_ref(), p);
    let jg = if std::sync::Arc::ptr_eq(f, g) { jf } else { frame_jet(g.as_ref(), p) };
    let c_x = jg.hess[0][0] - jf.hess[0][1];
    let c_y = jg.hess[1][0] - jf.hess[1][1];
    [jf.grad[2] - c_x, jg.grad[2] - c_y]
}

/// The second-order Rumin differential on degree-one forms.
#[allow(non_snake_case)]
pub fn D(alpha: &HForm) -> Result<HForm> {
    alpha.expect_degree(1)?;
    let HForm::One { f, g } = alpha else { unreachable!() };
    let coeff = |first| {
        field(DCoefficient {
            f: f.clone(),
            g: g.clone(),
            first,
        })
    };
    Ok(HForm::Two {
        a: coeff(true),
        b: coeff(false),
    })
}

/// `d2(a theta^dx + b theta^dy) = (Ya - Xb) theta^dx^dy`.
pub fn d2(beta: &HForm) -> Result<HForm> {
    beta.expect_degree(2)?;
    let HForm::Two { a, b } = beta else { unreachable!() };
    Ok(HForm::Three(combo(vec![(1.0, deriv(a, FrameDir::Y)), (-1.0, deriv(b, FrameDir::X))])))
}

/// Applies the next differential of the complex.
pub fn differential(form: &HForm) -> Result<HForm> {
    match form {
        HForm::Zero(f) => Ok(d0(f)),
        HForm::One { .. } => D(form),
        HForm::Two { .. } => d2(form),
        HForm::Three(_) => Err(HeisError::InvalidParameter("no differential above degree three".into())),
    }
}

/// Coframe values `(dx, dy, theta)` of a tangent vector.
pub fn coframe(v: &TangentVector<1>) -> [f64; 3] {
    let c = v.components();
    [c[0], c[1], v.theta()]
}

fn det2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Alternating evaluation of `form` at `p` on `vectors` (one per degree).
pub fn eval_form(form: &HForm, p: &Point1, vectors: &[TangentVector<1>]) -> Result<f64> {
    if vectors.len() != form.degree() {
        return Err(HeisError::ArgumentCount {
            degree: form.degree(),
            got: vectors.len(),
        });
    }
    let e: Vec<[f64; 3]> = vectors.iter().map(coframe).collect();
    Ok(match form {
        HForm::Zero(c) => c.value(p),
        HForm::One { f, g } => f.value(p) * e[0][0] + g.value(p) * e[0][1],
        HForm::Two { a, b } => {
            let tdx = det2([e[0][2], e[0][0]], [e[1][2], e[1][0]]);
            let tdy = det2([e[0][2], e[0][1]], [e[1][2], e[1][1]]);
            a.value(p) * tdx + b.value(p) * tdy
        }
        HForm::Three(c) => {
            // det of rows (theta, dx, dy)
            let m = |i: usize| [e[i][2], e[i][0], e[i][1]];
            let (r0, r1, r2) = (m(0), m(1), m(2));
            let det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
                + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
            c.value(p) * det
        }
    })
}

/// Profile exponent of test bumps; `C^7`, so `D` of a bump form is smooth
/// enough for high-order quadrature across the support boundary.
pub const BUMP_EXPONENT: u32 = 8;

/// `chi dx + chi dy` with `chi` a polynomial bump on the Euclidean ball.
pub fn bump_form(center: Point1, radius: f64) -> Result<HForm> {
    bump_form_with_exponent(center, radius, BUMP_EXPONENT)
}

pub fn bump_form_with_exponent(center: Point1, radius: f64, exponent: u32) -> Result<HForm> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(HeisError::NonPositiveRadius(radius));
    }
    if exponent < 3 {
        return Err(HeisError::InvalidParameter(format!("bump exponent {exponent} is below 3")));
    }
    let chi = field(Bump {
        center: center.coords(),
        radius,
        exponent,
    });
    Ok(HForm::One { f: chi.clone(), g: chi })
}

/// A scaled bump `w_f chi dx + w_g chi dy`.
pub fn weighted_bump_form(center: Point1, radius: f64, weights: [f64; 2]) -> Result<HForm> {
    let HForm::One { f, .. } = bump_form(center, radius)? else { unreachable!() };
    Ok(HForm::One {
        f: combo(vec![(weights[0], f.clone())]),
        g: combo(vec![(weights[1], f)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Constant, Polynomial};

    fn p() -> Point1 {
        Point1::new(0.3, -0.7, 0.2)
    }

    #[test]
    fn d0_examples() {
        let q = p();
        let zero = d0(&field(Constant(2.0)));
        assert_eq!(zero.coefficient_values(&q), vec![0.0, 0.0]);
        assert_eq!(d0(&field(Polynomial::x())).coefficient_values(&q), vec![1.0, 0.0]);
        let dt = d0(&field(Polynomial::t())).coefficient_values(&q);
        assert!((dt[0] - 0.35).abs() < 1e-15 && (dt[1] - 0.15).abs() < 1e-15);
    }

    #[test]
    fn correction_examples() {
        let q = p();
        let alpha = HForm::one(Polynomial::t(), Constant(0.0));
        let u = vertical_correction(&alpha).unwrap();
        assert!((u.c.value(&q) + 0.15).abs() < 1e-15);
        for v in &q.frame()[..2] {
            assert_eq!(u.eval(v), 0.0);
        }
        assert!(vertical_correction(&HForm::Zero(field(Constant(1.0)))).is_err());
    }

    #[test]
    fn d_of_t_dx() {
        // D(t dx) = (1 - X(-x/2)) theta^dx = 3/2 theta^dx
        let beta = D(&HForm::one(Polynomial::t(), Constant(0.0))).unwrap();
        let v = beta.coefficient_values(&p());
        assert!((v[0] - 1.5).abs() < 1e-14 && v[1].abs() < 1e-14, "{v:?}");
    }

    #[test]
    fn d_of_x_dy() {
        // c = X x = 1, so both coefficients vanish
        let beta = D(&HForm::one(Constant(0.0), Polynomial::x())).unwrap();
        assert_eq!(beta.coefficient_values(&p()), vec![0.0, 0.0]);
    }

    #[test]
    fn d2_examples() {
        let q = p();
        let g = d2(&HForm::two(Polynomial::t(), Constant(0.0))).unwrap();
        assert!((g.coefficient_values(&q)[0] - 0.15).abs() < 1e-15);
        let z = d2(&HForm::two(Constant(3.0), Constant(-1.0))).unwrap();
        assert_eq!(z.coefficient_values(&q), vec![0.0]);
    }

    #[test]
    fn eval_examples() {
        let q = p();
        let fr = q.frame();
        let w = HForm::two(Constant(1.0), Constant(0.0));
        assert_eq!(eval_form(&w, &q, &[fr[0], fr[2]]).unwrap(), -1.0);
        assert_eq!(eval_form(&w, &q, &[fr[2], fr[0]]).unwrap(), 1.0);
        let dx = HForm::one(Constant(1.0), Constant(0.0));
        assert_eq!(eval_form(&dx, &q, &[fr[1]]).unwrap(), 0.0);
        assert!(matches!(eval_form(&dx, &q, &[]), Err(HeisError::ArgumentCount { degree: 1, got: 0 })));
        let vol = HForm::Three(field(Constant(1.0)));
        assert_eq!(eval_form(&vol, &q, &[fr[2], fr[0], fr[1]]).unwrap(), 1.0);
    }

    #[test]
    fn bump_examples() {
        let c = Point1::new(0.5, 0.0, 0.1);
        let b = bump_form(c, 0.4).unwrap();
        assert_eq!(b.coefficient_values(&c), vec![1.0, 1.0]);
        assert_eq!(b.coefficient_values(&Point1::new(0.5, 0.41, 0.1)), vec![0.0, 0.0]);
        assert_eq!(b.support(), Some(Aabb::around([0.5, 0.0, 0.1], 0.4)));
        assert!(matches!(bump_form(c, 0.0), Err(HeisError::NonPositiveRadius(_))));
    }

    #[test]
    fn d_value_and_taylor_routes_agree() {
        let f = field(Polynomial::new(vec![(1.0, [1, 0, 1]), (-2.0, [0, 2, 1]), (0.5, [2, 1, 0])]));
        let g = field(Polynomial::new(vec![(0.3, [0, 0, 2]), (1.0, [1, 1, 1])]));
        let d = DCoefficient { f, g, first: false };
        let q = p();
        assert!((d.value(&q) - d.taylor(&q, 1).unwrap().value()).abs() < 1e-14);
    }
}
