//! Truncated multivariate Taylor polynomials in the three coordinates of
//! `H^1`, used as exact derivative oracles for scalar fields.
//!
//! A [`Taylor`] of order `k` about a base point `p` stores the coefficients
//! `c_a` of `f(p + d) = sum_{|a| <= k} c_a d^a`, where `d = (dx, dy, dt)`.
//! Coordinate partials are recovered as `a! c_a`.

/// Highest supported expansion order.
pub const MAX_ORDER: usize = 4;

/// Monomials of degree at most `MAX_ORDER` in three variables.
pub const NUM_MONOMIALS: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) * (MAX_ORDER + 3) / 6;

const fn build_exponents() -> [[u8; 3]; NUM_MONOMIALS] {
    let mut out = [[0u8; 3]; NUM_MONOMIALS];
    let mut n = 0;
    let mut d = 0;
    while d <= MAX_ORDER {
        let mut i = d as isize;
        while i >= 0 {
            let mut j = (d as isize) - i;
            while j >= 0 {
                let k = d as isize - i - j;
                out[n] = [i as u8, j as u8, k as u8];
                n += 1;
                j -= 1;
            }
            i -= 1;
        }
        d += 1;
    }
    out
}

/// Exponent table in graded order.
pub const EXPONENTS: [[u8; 3]; NUM_MONOMIALS] = build_exponents();

/// Number of monomials of degree at most `order`.
pub const fn monomials_up_to(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

/// Position of `x^i y^j t^k` in [`EXPONENTS`].
pub const fn index(i: usize, j: usize, k: usize) -> usize {
    let d = i + j + k;
    d * (d + 1) * (d + 2) / 6 + (d - i) * (d - i + 1) / 2 + (d - i - j)
}

fn degree(e: &[u8; 3]) -> usize {
    (e[0] + e[1] + e[2]) as usize
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor {
    order: usize,
    c: [f64; NUM_MONOMIALS],
}

impl Taylor {
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "Taylor order {order} exceeds {MAX_ORDER}");
        Taylor {
            order,
            c: [0.0; NUM_MONOMIALS],
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut t = Self::zero(order);
        t.c[0] = value;
        t
    }

    /// The coordinate function `axis` (0 = x, 1 = y, 2 = t) about a point
    /// where it takes `value`.
    pub fn variable(axis: usize, value: f64, order: usize) -> Self {
        let mut t = Self::constant(value, order);
        if order >= 1 {
            t.c[1 + axis] = 1.0;
        }
        t
    }

    /// The three coordinate functions about `p`.
    pub fn coordinates(p: [f64; 3], order: usize) -> [Taylor; 3] {
        [
            Self::variable(0, p[0], order),
            Self::variable(1, p[1], order),
            Self::variable(2, p[2], order),
        ]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> f64 {
        if i + j + k > self.order {
            0.0
        } else {
            self.c[index(i, j, k)]
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..monomials_up_to(self.order)]
    }

    /// Coordinate partial derivative `d^(i+j+k) f / dx^i dy^j dt^k` at the base.
    pub fn partial(&self, i: usize, j: usize, k: usize) -> f64 {
        self.coeff(i, j, k) * (factorial(i) * factorial(j) * factorial(k)) as f64
    }

    /// Coordinate gradient at the base.
    pub fn gradient(&self) -> [f64; 3] {
        [self.coeff(1, 0, 0), self.coeff(0, 1, 0), self.coeff(0, 0, 1)]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut t = Self::zero(order);
        let m = monomials_up_to(order);
        t.c[..m].copy_from_slice(&self.c[..m]);
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut t = *self;
        for c in t.c[..monomials_up_to(self.order)].iter_mut() {
            *c *= s;
        }
        t
    }

    pub fn add_constant(&self, s: f64) -> Self {
        let mut t = *self;
        t.c[0] += s;
        t
    }

    /// `self + s * other`, truncated to the smaller order.
    pub fn axpy(&self, s: f64, other: &Taylor) -> Self {
        let order = self.order.min(other.order);
        let mut t = Self::zero(order);
        for n in 0..monomials_up_to(order) {
            t.c[n] = self.c[n] + s * other.c[n];
        }
        t
    }

    pub fn mul(&self, other: &Taylor) -> Self {
        let order = self.order.min(other.order);
        let mut t = Self::zero(order);
        let m = monomials_up_to(order);
        for a in 0..m {
            let ca = self.c[a];
            if ca == 0.0 {
                continue;
            }
            let ea = EXPONENTS[a];
            let rest = order - degree(&ea);
            for b in 0..monomials_up_to(rest) {
                let eb = EXPONENTS[b];
                let idx = index(
                    (ea[0] + eb[0]) as usize,
                    (ea[1] + eb[1]) as usize,
                    (ea[2] + eb[2]) as usize,
                );
                t.c[idx] += ca * other.c[b];
            }
        }
        t
    }

    pub fn powi(&self, mut n: u32) -> Self {
        let mut base = *self;
        let mut acc = Self::constant(1.0, self.order);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `g(self)` for a univariate `g` given its derivatives
    /// `g(a), g'(a), ..., g^(order)(a)` at `a = self.value()`.
    pub fn compose(&self, derivs: &[f64]) -> Self {
        let mut shift = *self;
        shift.c[0] = 0.0;
        let mut out = Self::constant(derivs[0], self.order);
        let mut power = Self::constant(1.0, self.order);
        let mut fact = 1.0;
        for (m, d) in derivs.iter().enumerate().take(self.order + 1).skip(1) {
            power = power.mul(&shift);
            fact *= m as f64;
            out = out.axpy(d / fact, &power);
        }
        out
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let derivs: Vec<f64> = (0..=self.order)
            .map(|m| match m % 4 {
                0 => c,
                1 => -s,
                2 => -c,
                _ => s,
            })
            .collect();
        self.compose(&derivs)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let derivs: Vec<f64> = (0..=self.order)
            .map(|m| match m % 4 {
                0 => s,
                1 => c,
                2 => -s,
                _ => -c,
            })
            .collect();
        self.compose(&derivs)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&vec![e; self.order + 1])
    }

    /// Partial derivative in `axis`; the result has order one less.
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 expansion");
        let order = self.order - 1;
        let mut t = Self::zero(order);
        for n in 0..monomials_up_to(order) {
            let mut e = EXPONENTS[n];
            e[axis] += 1;
            t.c[n] = e[axis] as f64 * self.c[index(e[0] as usize, e[1] as usize, e[2] as usize)];
        }
        t
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_matches_table() {
        for (n, e) in EXPONENTS.iter().enumerate() {
            assert_eq!(index(e[0] as usize, e[1] as usize, e[2] as usize), n);
        }
        assert_eq!(NUM_MONOMIALS, 35);
    }

    #[test]
    fn product_of_coordinates() {
        let p = [0.5, -2.0, 3.0];
        let [x, y, t] = Taylor::coordinates(p, 3);
        let f = x.mul(&y).mul(&t); // xyt
        assert!((f.value() - p[0] * p[1] * p[2]).abs() < 1e-15);
        assert_eq!(f.partial(1, 0, 0), p[1] * p[2]);
        assert_eq!(f.partial(1, 1, 0), p[2]);
        assert_eq!(f.partial(1, 1, 1), 1.0);
        assert_eq!(f.partial(2, 0, 0), 0.0);
    }

    #[test]
    fn trig_derivatives() {
        let [x, _, _] = Taylor::coordinates([0.7, 0.0, 0.0], 4);
        let s = x.scale(2.0).sin();
        for m in 0..=4 {
            let exact = 2f64.powi(m as i32)
                * match m % 4 {
                    0 => 1.4f64.sin(),
                    1 => 1.4f64.cos(),
                    2 => -1.4f64.sin(),
                    _ => -1.4f64.cos(),
                };
            assert!((s.partial(m, 0, 0) - exact).abs() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn derivative_lowers_order() {
        let [x, y, _] = Taylor::coordinates([1.0, 2.0, 0.0], 3);
        let f = x.powi(3).mul(&y); // x^3 y
        let fx = f.derivative(0); // 3 x^2 y
        assert_eq!(fx.order(), 2);
        assert!((fx.value() - 6.0).abs() < 1e-14);
        assert!((fx.partial(1, 0, 0) - 12.0).abs() < 1e-14);
        assert!((fx.partial(0, 1, 0) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn exp_of_sum() {
        let [x, y, t] = Taylor::coordinates([0.1, 0.2, 0.3], 2);
        let f = x.axpy(1.0, &y).axpy(1.0, &t).exp();
        let e = 0.6f64.exp();
        assert!((f.partial(1, 1, 0) - e).abs() < 1e-14);
        assert!((f.partial(0, 0, 2) - e).abs() < 1e-14);
    }
}
