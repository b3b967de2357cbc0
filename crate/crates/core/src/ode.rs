//! Explicit Runge–Kutta integrators for small linear and Riccati systems.
//!
//! The state is anything that forms a real vector space with a max-norm;
//! sections ([`ComplexPair`]), fundamental matrices ([`Mat2`]) and Riccati
//! solutions ([`Quaternion`]) all qualify.

use core::ops::{Add, Mul, Sub};

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::mat2::Mat2;
use crate::quat::{ComplexPair, Quaternion};
use crate::{Error, Result};

pub trait OdeState:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn max_abs(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl OdeState for ComplexPair {
    fn max_abs(&self) -> f64 {
        ComplexPair::max_abs(*self)
    }
    fn is_finite(&self) -> bool {
        ComplexPair::is_finite(*self)
    }
}

impl OdeState for Mat2 {
    fn max_abs(&self) -> f64 {
        Mat2::max_abs(self)
    }
    fn is_finite(&self) -> bool {
        Mat2::is_finite(self)
    }
}

impl OdeState for Quaternion {
    fn max_abs(&self) -> f64 {
        Quaternion::max_abs(*self)
    }
    fn is_finite(&self) -> bool {
        Quaternion::is_finite(*self)
    }
}

/// Mixed error control: a step is accepted when the local error estimate
/// is below `atol + rtol·|y|` in the max-norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    pub const fn new(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol }
    }

    /// Pure relative control, with an absolute floor far below it.
    pub const fn relative(rtol: f64) -> Self {
        Self {
            rtol,
            atol: rtol * 1e-6,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::relative(1e-10)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl Stats {
    fn merge(&mut self, o: Stats) {
        self.accepted += o.accepted;
        self.rejected += o.rejected;
        self.evaluations += o.evaluations;
    }
}

const MAX_STEPS: usize = 2_000_000;

// Dormand–Prince 5(4) tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (fifth minus embedded fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand–Prince integration of `y' = f(t, y)` from `t0` to `t1`
/// (either direction). `h0` seeds the first step; `None` picks one from
/// the span.
pub fn dopri5<S, F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: S,
    tol: Tolerance,
    h0: Option<f64>,
) -> Result<(S, Stats)>
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
{
    let mut stats = Stats::default();
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((y0, stats));
    }
    let dir = span.signum();
    let min_step = 1e-13 * span.abs().max(t0.abs()).max(1.0);
    let mut h = h0.map_or(0.05 * span.abs(), f64::abs).min(span.abs());
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;

    while dir * (t1 - t) > 0.0 {
        if stats.accepted + stats.rejected > MAX_STEPS {
            return Err(Error::StepUnderflow { t });
        }
        let last = h >= (t1 - t).abs();
        if last {
            h = (t1 - t).abs();
        }
        let hs = dir * h;
        let k2 = f(t + C2 * hs, &(y + k1 * (A21 * hs)));
        let k3 = f(t + C3 * hs, &(y + (k1 * A31 + k2 * A32) * hs));
        let k4 = f(t + C4 * hs, &(y + (k1 * A41 + k2 * A42 + k3 * A43) * hs));
        let k5 = f(
            t + C5 * hs,
            &(y + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * hs),
        );
        let k6 = f(
            t + hs,
            &(y + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * hs),
        );
        let y_new = y + (k1 * B1 + k3 * B3 + k4 * B4 + k5 * B5 + k6 * B6) * hs;
        let k7 = f(t + hs, &y_new);
        stats.evaluations += 6;

        let err_vec = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * hs;
        let scale = tol.atol + tol.rtol * y.max_abs().max(y_new.max_abs());
        let err = err_vec.max_abs() / scale;

        if err <= 1.0 && y_new.is_finite() {
            stats.accepted += 1;
            t = if last { t1 } else { t + hs };
            y = y_new;
            k1 = k7;
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            stats.rejected += 1;
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h *= fac;
            if h < min_step {
                return Err(Error::StepUnderflow { t });
            }
        }
    }
    Ok((y, stats))
}

/// Integrates through the knots `ts` (monotone) and calls `visit(i, y)` at
/// each knot, starting with `visit(0, y0)`. Step-size history carries over
/// between knots.
pub fn dopri5_through<S, F, V>(
    mut f: F,
    ts: &[f64],
    y0: S,
    tol: Tolerance,
    mut visit: V,
) -> Result<Stats>
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
    V: FnMut(usize, &S),
{
    let mut stats = Stats::default();
    let Some(&first) = ts.first() else {
        return Ok(stats);
    };
    let _ = first;
    visit(0, &y0);
    let mut y = y0;
    for (i, w) in ts.windows(2).enumerate() {
        let (y1, s) = dopri5(&mut f, w[0], w[1], y, tol, None)?;
        stats.merge(s);
        y = y1;
        visit(i + 1, &y);
    }
    Ok(stats)
}

/// Classic fourth-order Runge–Kutta with `n` equal steps.
pub fn rk4<S, F>(mut f: F, t0: f64, t1: f64, y0: S, n: usize) -> S
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
{
    let n = n.max(1);
    let h = (t1 - t0) / n as f64;
    let mut y = y0;
    for s in 0..n {
        let t = t0 + s as f64 * h;
        y = rk4_step(&mut f, t, y, h);
    }
    y
}

pub fn rk4_step<S, F>(f: &mut F, t: f64, y: S, h: f64) -> S
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
{
    let k1 = f(t, &y);
    let k2 = f(t + 0.5 * h, &(y + k1 * (0.5 * h)));
    let k3 = f(t + 0.5 * h, &(y + k2 * (0.5 * h)));
    let k4 = f(t + h, &(y + k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}
