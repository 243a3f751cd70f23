//! Dormand–Prince 5(4) with step-size control and continuous (dense) output.

use crate::error::{HeisError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-9,
            atol: 1e-12,
            max_step: 1e-2,
            initial_step: None,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// One accepted step `[s0, s0 + h]` with its interpolation data.
#[derive(Clone, Copy, Debug)]
pub struct DenseStep<const D: usize> {
    pub s0: f64,
    pub h: f64,
    rcont: [[f64; D]; 5],
}

impl<const D: usize> DenseStep<D> {
    pub fn start(&self) -> [f64; D] {
        self.rcont[0]
    }

    pub fn end(&self) -> [f64; D] {
        std::array::from_fn(|k| self.rcont[0][k] + self.rcont[1][k])
    }

    pub fn s1(&self) -> f64 {
        self.s0 + self.h
    }

    /// Continuous extension at `s` in the step.
    pub fn eval(&self, s: f64) -> [f64; D] {
        let th = (s - self.s0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        std::array::from_fn(|k| r[0][k] + th * (r[1][k] + th1 * (r[2][k] + th * (r[3][k] + th1 * r[4][k]))))
    }
}

/// What the observer wants after each accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Outcome of [`integrate`].
#[derive(Clone, Debug)]
pub struct OdeRun<const D: usize> {
    pub s: f64,
    pub y: [f64; D],
    pub stats: StepStats,
    /// The right-hand side failed before reaching the end.
    pub interrupted: Option<HeisError>,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn comb<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    std::array::from_fn(|k| y[k] + h * terms.iter().map(|(a, v)| a * v[k]).sum::<f64>())
}

/// Integrates `y' = f(s, y)` from `s0` to `s_end > s0`, handing every
/// accepted step to `observer`.
pub fn integrate<const D: usize, F, O>(
    f: F,
    s0: f64,
    y0: [f64; D],
    s_end: f64,
    opts: &OdeOptions,
    mut observer: O,
) -> Result<OdeRun<D>>
where
    F: Fn(f64, &[f64; D]) -> Result<[f64; D]>,
    O: FnMut(&DenseStep<D>) -> Control,
{
    if !(s_end > s0) || !y0.iter().all(|c| c.is_finite()) {
        return Err(HeisError::InvalidParameter("integration interval must be nonempty and finite".into()));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0 && opts.max_step > 0.0) {
        return Err(HeisError::InvalidParameter("tolerances and max step must be positive".into()));
    }
    let mut stats = StepStats::default();
    let mut s = s0;
    let mut y = y0;
    let mut k1 = match f(s, &y) {
        Ok(k) => k,
        Err(e) => {
            return Ok(OdeRun {
                s,
                y,
                stats,
                interrupted: Some(e),
            })
        }
    };
    stats.evaluations += 1;
    let mut h = opts.initial_step.unwrap_or(opts.max_step * 0.1).min(opts.max_step).min(s_end - s0);
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;

    macro_rules! stage {
        ($s:expr, $y:expr) => {
            match f($s, &$y) {
                Ok(k) => {
                    stats.evaluations += 1;
                    k
                }
                Err(e) => {
                    return Ok(OdeRun {
                        s,
                        y,
                        stats,
                        interrupted: Some(e),
                    })
                }
            }
        };
    }

    while s < s_end {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(HeisError::Inconclusive(format!("step budget exhausted at s = {s}")));
        }
        let last = s + h >= s_end - 1e-14 * s_end.abs().max(1.0);
        if last {
            h = s_end - s;
        }
        let k2 = stage!(s + C2 * h, comb(&y, h, &[(A21, &k1)]));
        let k3 = stage!(s + C3 * h, comb(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = stage!(s + C4 * h, comb(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = stage!(s + C5 * h, comb(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = stage!(s + h, comb(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = comb(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = stage!(s + h, y1);

        let mut err = 0.0;
        for k in 0..D {
            let e = h * (E1 * k1[k] + E3 * k3[k] + E4 * k4[k] + E5 * k5[k] + E6 * k6[k] + E7 * k7[k]);
            let sk = opts.atol + opts.rtol * y[k].abs().max(y1[k].abs());
            err += (e / sk) * (e / sk);
        }
        let err = (err / D as f64).sqrt();
        if !err.is_finite() {
            return Err(HeisError::NonFinite);
        }

        // Lund stabilization as in Hairer's dopri5
        let fac11 = err.powf(0.2 - 0.04 * 0.75);
        let fac = (fac11 / fac_old.powf(0.04) / 0.9).clamp(0.2, 10.0);
        if err <= 1.0 {
            fac_old = err.max(1e-4);
            let mut rcont = [[0.0; D]; 5];
            for k in 0..D {
                let ydiff = y1[k] - y[k];
                let bspl = h * k1[k] - ydiff;
                rcont[0][k] = y[k];
                rcont[1][k] = ydiff;
                rcont[2][k] = bspl;
                rcont[3][k] = ydiff - h * k7[k] - bspl;
                rcont[4][k] = h * (D1 * k1[k] + D3 * k3[k] + D4 * k4[k] + D5 * k5[k] + D6 * k6[k] + D7 * k7[k]);
            }
            let step = DenseStep { s0: s, h, rcont };
            stats.accepted += 1;
            s = if last { s_end } else { s + h };
            y = y1;
            k1 = k7;
            if observer(&step) == Control::Stop {
                break;
            }
            let mut hnew = (h / fac).min(opts.max_step);
            if last_rejected {
                hnew = hnew.min(h);
            }
            last_rejected = false;
            h = hnew;
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h /= (fac11 / 0.9).min(5.0);
        }
        if h < 1e-14 * s.abs().max(1.0) {
            return Err(HeisError::Inconclusive(format!("step size underflow at s = {s}")));
        }
    }
    Ok(OdeRun {
        s,
        y,
        stats,
        interrupted: None,
    })
}

/// Root of `g` on `[a, b]` by bisection to width `tol`, given a sign change.
pub fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut ga = g(a);
    while b - a > tol {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let opts = OdeOptions::default();
        let mut steps = Vec::new();
        let run = integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [1.0, 0.0],
            10.0,
            &opts,
            |st| {
                steps.push(*st);
                Control::Continue
            },
        )
        .unwrap();
        assert_eq!(run.s, 10.0);
        assert!((run.y[0] - 10f64.cos()).abs() < 1e-9);
        assert!(steps.iter().all(|s| s.h <= opts.max_step * (1.0 + 1e-12)));
        // dense output in the middle of steps
        for st in steps.iter().step_by(37) {
            let m = st.s0 + 0.37 * st.h;
            assert!((st.eval(m)[0] - m.cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn stiff_start_rejects_then_accepts() {
        let opts = OdeOptions {
            max_step: 1.0,
            initial_step: Some(1.0),
            ..Default::default()
        };
        let run = integrate(|_, y: &[f64; 1]| Ok([-50.0 * y[0]]), 0.0, [1.0], 1.0, &opts, |_| Control::Continue).unwrap();
        assert!(run.stats.rejected > 0);
        assert!((run.y[0] - (-50f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn observer_can_stop() {
        let mut n = 0;
        let run = integrate(|_, _: &[f64; 1]| Ok([1.0]), 0.0, [0.0], 1.0, &OdeOptions::default(), |_| {
            n += 1;
            if n == 3 {
                Control::Stop
            } else {
                Control::Continue
            }
        })
        .unwrap();
        assert_eq!(run.stats.accepted, 3);
        assert!(run.s < 1.0);
    }

    #[test]
    fn rhs_failure_interrupts() {
        let run = integrate(
            |s, _: &[f64; 1]| if s > 0.5 { Err(HeisError::NonFinite) } else { Ok([1.0]) },
            0.0,
            [0.0],
            1.0,
            &OdeOptions::default(),
            |_| Control::Continue,
        )
        .unwrap();
        assert!(run.interrupted.is_some());
        assert!(run.s <= 0.5 + 1e-12);
    }

    #[test]
    fn bisection() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }
}
