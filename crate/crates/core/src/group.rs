//! Group law, dilations, rotations, left-invariant frame, contact form and
//! homogeneous gauge of the Heisenberg group `H^n` in exponential coordinates.
//!
//! Points are `(x, y, t)` with `x, y in R^n`. The group law is
//!
//! ```text
//! (x, y, t) . (x', y', t') = (x + x', y + y', t + t' + (<x, y'> - <y, x'>) / 2)
//! ```
//!
//! which is the law for which `X_j = d/dx_j - (y_j/2) d/dt`,
//! `Y_j = d/dy_j + (x_j/2) d/dt` and `T = d/dt` are left-invariant, with
//! `[X_j, Y_j] = T`. The contact form annihilating `span(X_j, Y_j)` is
//! `theta = dt + sum_j (y_j/2) dx_j - (x_j/2) dy_j`.

use crate::error::{HeisError, Result};

/// A point of `H^N` in exponential coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<const N: usize> {
    pub x: [f64; N],
    pub y: [f64; N],
    pub t: f64,
}

/// A point of the first Heisenberg group.
pub type Point1 = Point<1>;

impl<const N: usize> Point<N> {
    pub const IDENTITY: Self = Point {
        x: [0.0; N],
        y: [0.0; N],
        t: 0.0,
    };

    pub const fn from_parts(x: [f64; N], y: [f64; N], t: f64) -> Self {
        Point { x, y, t }
    }

    /// Like [`Point::from_parts`], rejecting non-finite coordinates.
    pub fn checked(x: [f64; N], y: [f64; N], t: f64) -> Result<Self> {
        let p = Point { x, y, t };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(HeisError::NonFinite)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(self.y.iter()).all(|c| c.is_finite()) && self.t.is_finite()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Group product `self . other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut x = [0.0; N];
        let mut y = [0.0; N];
        let mut symplectic = 0.0;
        for j in 0..N {
            x[j] = self.x[j] + other.x[j];
            y[j] = self.y[j] + other.y[j];
            symplectic += self.x[j] * other.y[j] - self.y[j] * other.x[j];
        }
        Point {
            x,
            y,
            t: self.t + other.t + 0.5 * symplectic,
        }
    }

    pub fn inverse(&self) -> Self {
        Point {
            x: self.x.map(|c| -c),
            y: self.y.map(|c| -c),
            t: -self.t,
        }
    }

    /// Heisenberg dilation `delta_lambda(x, y, t) = (lambda x, lambda y, lambda^2 t)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(HeisError::NonPositiveDilation(lambda));
        }
        Ok(Point {
            x: self.x.map(|c| lambda * c),
            y: self.y.map(|c| lambda * c),
            t: lambda * lambda * self.t,
        })
    }

    /// Korányi gauge `((|x|^2 + |y|^2)^2 + 16 t^2)^(1/4)`.
    pub fn koranyi_norm(&self) -> f64 {
        let r2: f64 = self
            .x
            .iter()
            .chain(self.y.iter())
            .map(|c| c * c)
            .sum();
        (r2 * r2 + 16.0 * self.t * self.t).sqrt().sqrt()
    }

    /// Coordinates as a flat `2N + 1` vector ordered `x_1..x_N, y_1..y_N, t`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * N + 1);
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.y);
        out.push(self.t);
        out
    }

    /// Left-invariant frame `X_1..X_N, Y_1..Y_N, T` at this point.
    pub fn frame(&self) -> Vec<TangentVector<N>> {
        let mut out = Vec::with_capacity(2 * N + 1);
        for j in 0..N {
            let mut dx = [0.0; N];
            dx[j] = 1.0;
            out.push(TangentVector {
                base: *self,
                dx,
                dy: [0.0; N],
                dt: -0.5 * self.y[j],
            });
        }
        for j in 0..N {
            let mut dy = [0.0; N];
            dy[j] = 1.0;
            out.push(TangentVector {
                base: *self,
                dx: [0.0; N],
                dy,
                dt: 0.5 * self.x[j],
            });
        }
        out.push(TangentVector {
            base: *self,
            dx: [0.0; N],
            dy: [0.0; N],
            dt: 1.0,
        });
        out
    }
}

impl Point1 {
    pub const fn new(x: f64, y: f64, t: f64) -> Self {
        Point {
            x: [x],
            y: [y],
            t,
        }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x[0], self.y[0], self.t]
    }

    pub fn from_coords(c: [f64; 3]) -> Self {
        Point1::new(c[0], c[1], c[2])
    }

    /// Rotation by `phi` about the `t`-axis; a group automorphism of `H^1`.
    pub fn rotate_t_axis(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let (x, y) = (self.x[0], self.y[0]);
        Point1::new(c * x - s * y, s * x + c * y, self.t)
    }
}

impl<const N: usize> std::ops::Mul for Point<N> {
    type Output = Point<N>;

    fn mul(self, rhs: Self) -> Self::Output {
        Point::mul(&self, &rhs)
    }
}

/// Tangent vector at `base`, stored in coordinate components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector<const N: usize> {
    pub base: Point<N>,
    pub dx: [f64; N],
    pub dy: [f64; N],
    pub dt: f64,
}

impl<const N: usize> TangentVector<N> {
    /// Contact form `theta` evaluated on this vector.
    pub fn theta(&self) -> f64 {
        let mut acc = self.dt;
        for j in 0..N {
            acc += 0.5 * (self.base.y[j] * self.dx[j] - self.base.x[j] * self.dy[j]);
        }
        acc
    }

    /// Components in the frame `(X_j, Y_j, T)`: `(dx(v), dy(v), theta(v))`.
    pub fn frame_coords(&self) -> ([f64; N], [f64; N], f64) {
        (self.dx, self.dy, self.theta())
    }

    /// Builds `sum a_j X_j + b_j Y_j + c T` at `base`.
    pub fn from_frame(base: Point<N>, a: [f64; N], b: [f64; N], c: f64) -> Self {
        let mut dt = c;
        for j in 0..N {
            dt += 0.5 * (base.x[j] * b[j] - base.y[j] * a[j]);
        }
        TangentVector {
            base,
            dx: a,
            dy: b,
            dt,
        }
    }

    /// Squared norm in the left-invariant metric making `X, Y, T` orthonormal.
    pub fn frame_norm_sq(&self) -> f64 {
        let th = self.theta();
        self.dx.iter().chain(self.dy.iter()).map(|c| c * c).sum::<f64>() + th * th
    }

    pub fn is_zero(&self) -> bool {
        self.dx.iter().chain(self.dy.iter()).all(|c| *c == 0.0) && self.dt == 0.0
    }
}

impl TangentVector<1> {
    pub const fn new(base: Point1, v: [f64; 3]) -> Self {
        TangentVector {
            base,
            dx: [v[0]],
            dy: [v[1]],
            dt: v[2],
        }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.dx[0], self.dy[0], self.dt]
    }

    /// Frame-metric inner product of two vectors at the same base.
    pub fn frame_dot(&self, other: &Self) -> f64 {
        self.dx[0] * other.dx[0] + self.dy[0] * other.dy[0] + self.theta() * other.theta()
    }

    /// Pushforward under [`Point1::rotate_t_axis`].
    pub fn rotate_t_axis(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        TangentVector::new(
            self.base.rotate_t_axis(phi),
            [
                c * self.dx[0] - s * self.dy[0],
                s * self.dx[0] + c * self.dy[0],
                self.dt,
            ],
        )
    }
}

/// Dimension data of `H^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Heisenberg<const N: usize>;

impl<const N: usize> Heisenberg<N> {
    /// Topological dimension `2N + 1`.
    pub const DIM: usize = 2 * N + 1;
    /// Homogeneous (Hausdorff) dimension `Q = 2N + 2`.
    pub const Q: usize = 2 * N + 2;

    pub const fn n(&self) -> usize {
        N
    }
}

pub fn multiply<const N: usize>(p: &Point<N>, q: &Point<N>) -> Point<N> {
    p.mul(q)
}

pub fn inverse<const N: usize>(p: &Point<N>) -> Point<N> {
    p.inverse()
}

pub fn dilate<const N: usize>(lambda: f64, p: &Point<N>) -> Result<Point<N>> {
    p.dilate(lambda)
}

pub fn rotate_t_axis(phi: f64, p: &Point1) -> Point1 {
    p.rotate_t_axis(phi)
}

pub fn frame_at<const N: usize>(p: &Point<N>) -> Vec<TangentVector<N>> {
    p.frame()
}

pub fn contact_eval<const N: usize>(v: &TangentVector<N>) -> f64 {
    v.theta()
}

pub fn koranyi_norm<const N: usize>(p: &Point<N>) -> f64 {
    p.koranyi_norm()
}

/// `d(p, q) = ||p^{-1} q||`.
pub fn koranyi_dist<const N: usize>(p: &Point<N>, q: &Point<N>) -> f64 {
    p.inverse().mul(q).koranyi_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_axis_points() {
        let p = Point1::new(1.0, 0.0, 0.0) * Point1::new(0.0, 1.0, 0.0);
        assert_eq!(p, Point1::new(1.0, 1.0, 0.5));
    }

    #[test]
    fn inverse_examples() {
        assert!(Point1::IDENTITY.inverse().is_identity());
        assert_eq!(Point1::new(1.0, 0.0, 0.0).inverse(), Point1::new(-1.0, 0.0, 0.0));
        let p = Point1::new(1.0, 1.0, 0.5);
        assert_eq!(p.inverse(), Point1::new(-1.0, -1.0, -0.5));
        assert!((p * p.inverse()).is_identity());
    }

    #[test]
    fn dilation_examples() {
        let p = Point1::new(1.0, 1.0, 1.0);
        assert_eq!(p.dilate(2.0).unwrap(), Point1::new(2.0, 2.0, 4.0));
        assert_eq!(p.dilate(1.0).unwrap(), p);
        assert!(matches!(p.dilate(0.0), Err(HeisError::NonPositiveDilation(_))));
        assert!(p.dilate(-1.0).is_err());
        assert!(p.dilate(f64::NAN).is_err());
    }

    #[test]
    fn frame_values() {
        let fr = Point1::IDENTITY.frame();
        assert_eq!(fr[0].components(), [1.0, 0.0, 0.0]);
        assert_eq!(fr[1].components(), [0.0, 1.0, 0.0]);
        assert_eq!(fr[2].components(), [0.0, 0.0, 1.0]);

        let fr = Point1::new(1.0, 2.0, 0.0).frame();
        assert_eq!(fr[0].components(), [1.0, 0.0, -1.0]);
        assert_eq!(fr[1].components(), [0.0, 1.0, 0.5]);
    }

    #[test]
    fn contact_form_on_sample_vector() {
        let v = TangentVector::new(Point1::new(1.0, 2.0, 0.0), [1.0, 1.0, 0.0]);
        assert_eq!(v.theta(), 0.5);
        // dual-basis route: frame coordinates reconstruct the vector
        let (a, b, c) = v.frame_coords();
        let w = TangentVector::from_frame(v.base, a, b, c);
        assert!((w.dt - v.dt).abs() < 1e-15);
        assert_eq!(c, 0.5);
    }

    #[test]
    fn theta_duality_on_frame() {
        let p = Point1::new(-0.3, 1.7, 2.0);
        let fr = p.frame();
        assert_eq!(fr[0].theta(), 0.0);
        assert_eq!(fr[1].theta(), 0.0);
        assert_eq!(fr[2].theta(), 1.0);
    }

    #[test]
    fn gauge_examples() {
        assert_eq!(Point1::new(1.0, 0.0, 0.0).koranyi_norm(), 1.0);
        assert_eq!(Point1::new(0.0, 0.0, 0.25).koranyi_norm(), 1.0);
        assert_eq!(Point1::IDENTITY.koranyi_norm(), 0.0);
    }

    #[test]
    fn rotation_examples() {
        let p = Point1::new(0.3, -0.2, 0.7);
        assert_eq!(p.rotate_t_axis(0.0), p);
        let q = Point1::new(1.0, 0.0, 0.0).rotate_t_axis(std::f64::consts::PI);
        assert!((q.x[0] + 1.0).abs() < 1e-15 && q.y[0].abs() < 1e-15 && q.t == 0.0);
    }

    #[test]
    fn homogeneous_dimension() {
        assert_eq!(Heisenberg::<1>::Q, 4);
        assert_eq!(Heisenberg::<3>::Q, 8);
        assert_eq!(Heisenberg::<2>::DIM, 5);
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(Point1::checked([f64::INFINITY], [0.0], 0.0), Err(HeisError::NonFinite));
        assert!(Point::<2>::checked([0.0, 1.0], [2.0, 3.0], 4.0).is_ok());
    }
}
