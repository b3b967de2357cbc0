//! Interpolation on uniform one-dimensional grids.

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

/// A four-point Lagrange stencil: indices into the samples and weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stencil {
    pub idx: [usize; 4],
    pub w: [f64; 4],
}

/// Lagrange weights for nodes at −1, 0, 1, 2 evaluated at `t`.
pub fn lagrange4(t: f64) -> [f64; 4] {
    let tm = t + 1.0;
    let t1 = t - 1.0;
    let t2 = t - 2.0;
    [
        -t * t1 * t2 / 6.0,
        tm * t1 * t2 / 2.0,
        -tm * t * t2 / 2.0,
        tm * t * t1 / 6.0,
    ]
}

/// Derivative of [`lagrange4`] with respect to `t`.
pub fn lagrange4_deriv(t: f64) -> [f64; 4] {
    [
        -(3.0 * t * t - 6.0 * t + 2.0) / 6.0,
        (3.0 * t * t - 4.0 * t - 1.0) / 2.0,
        -(3.0 * t * t - 2.0 * t - 2.0) / 2.0,
        (3.0 * t * t - 1.0) / 6.0,
    ]
}

/// Uniform grid `origin + k·step`, `k < n`, optionally periodic with
/// period `n·step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub origin: f64,
    pub step: f64,
    pub n: usize,
    pub periodic: bool,
}

impl Axis {
    pub fn node(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.step
    }

    /// Stencil for the value at `s`; non-periodic axes use one-sided
    /// stencils near the ends (and extrapolate outside).
    pub fn stencil(&self, s: f64, deriv: bool) -> Stencil {
        let u = (s - self.origin) / self.step;
        let n = self.n as isize;
        let mut base = u.floor() as isize;
        if !self.periodic {
            base = base.clamp(1, (n - 3).max(1));
        }
        let t = u - base as f64;
        let mut w = if deriv {
            lagrange4_deriv(t)
        } else {
            lagrange4(t)
        };
        if deriv {
            w.iter_mut().for_each(|v| *v /= self.step);
        }
        let mut idx = [0usize; 4];
        for (m, slot) in idx.iter_mut().enumerate() {
            let k = base - 1 + m as isize;
            *slot = if self.periodic {
                k.rem_euclid(n) as usize
            } else {
                k.clamp(0, n - 1) as usize
            };
        }
        Stencil { idx, w }
    }
}

/// Cubic Hermite interpolation of `(y, y')` data on `[x0, x1]`.
pub fn hermite(x0: f64, x1: f64, y0: f64, d0: f64, y1: f64, d1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dv = ((6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * d0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * h * d1)
        / h;
    (v, dv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubics_are_reproduced() {
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let dp = |x: f64| -2.0 + 1.5 * x * x;
        let ax = Axis {
            origin: 0.0,
            step: 0.1,
            n: 20,
            periodic: false,
        };
        for &s in &[0.03, 0.77, 1.88] {
            let st = ax.stencil(s, false);
            let v: f64 = st
                .idx
                .iter()
                .zip(st.w)
                .map(|(&k, w)| w * p(ax.node(k)))
                .sum();
            assert!((v - p(s)).abs() < 1e-12);
            let st = ax.stencil(s, true);
            let d: f64 = st
                .idx
                .iter()
                .zip(st.w)
                .map(|(&k, w)| w * p(ax.node(k)))
                .sum();
            assert!((d - dp(s)).abs() < 1e-10);
        }
        let (v, d) = hermite(0.2, 0.5, p(0.2), dp(0.2), p(0.5), dp(0.5), 0.31);
        assert!((v - p(0.31)).abs() < 1e-13 && (d - dp(0.31)).abs() < 1e-12);
    }

    #[test]
    fn periodic_wraps() {
        let n = 64;
        let ax = Axis {
            origin: 0.0,
            step: core::f64::consts::TAU / n as f64,
            n,
            periodic: true,
        };
        let s = -0.01;
        let st = ax.stencil(s, false);
        let v: f64 = st
            .idx
            .iter()
            .zip(st.w)
            .map(|(&k, w)| w * ax.node(k).sin())
            .sum();
        assert!((v - s.sin()).abs() < 1e-6);
    }
}
