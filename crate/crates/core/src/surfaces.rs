//! Surface providers: the round cylinder and the Delaunay surfaces of
//! revolution, all with `H = 1`.
//!
//! Both are rotationally symmetric about the `i`-axis and written as
//!
//! ```text
//! f(x, y) = −A(x)·i + R(x)·j e^{iy},   N = −cos ψ · j e^{iy} − sin ψ · i,
//! ```
//!
//! with `(A, R)` the profile curve and `ψ` its angle. In the conformal
//! coordinate `x` (arclength divided by `R`) the profile solves
//!
//! ```text
//! A′ = R cos ψ,   R′ = R sin ψ,   ψ′ = cos ψ − 2R,
//! ```
//!
//! and `R cos ψ − R²` is conserved. The cylinder of radius ½ is the
//! constant solution.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::interp::hermite;
use crate::ode::rk4_step;
use crate::patch::{ConformalPatch, Grid, Sample, SurfaceField};
use crate::quat::Quaternion;
use crate::{Error, Result};

/// `j e^{iy}` and `j i e^{iy}` as quaternions.
fn frame(y: f64) -> (Quaternion, Quaternion) {
    let (s, c) = y.sin_cos();
    (
        Quaternion::imaginary(0.0, c, -s),
        Quaternion::imaginary(0.0, -s, -c),
    )
}

/// The cylinder `f = ½(−ix + j e^{iy})`, `N = −j e^{iy}`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cylinder;

impl SurfaceField for Cylinder {
    fn sample(&self, x: f64, y: f64) -> Sample {
        let (je, jie) = frame(y);
        Sample {
            f: Quaternion::imaginary(-0.5 * x, 0.0, 0.0) + je * 0.5,
            n: -je,
            dfx: Quaternion::imaginary(-0.5, 0.0, 0.0),
            dfy: jie * 0.5,
            dnx: Quaternion::ZERO,
            dny: -jie,
        }
    }

    fn y_period(&self) -> Option<f64> {
        Some(core::f64::consts::TAU)
    }
}

/// Samples the cylinder on `[0, X] × [0, 2π)`.
pub fn cylinder_patch(nx: usize, ny: usize, x_len: f64) -> Result<ConformalPatch> {
    ConformalPatch::from_field(&Cylinder, Grid::periodic(nx, ny, 0.0, x_len)?, "cylinder")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DelaunayKind {
    Unduloid,
    Nodoid,
}

/// Profile state `(A, R, ψ)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Profile([f64; 3]);

impl core::ops::Add for Profile {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Profile([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl core::ops::Sub for Profile {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o * -1.0
    }
}

impl core::ops::Mul<f64> for Profile {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Profile([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl crate::ode::OdeState for Profile {
    fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

fn rhs(_x: f64, p: &Profile) -> Profile {
    let [_, r, psi] = p.0;
    let (s, c) = psi.sin_cos();
    Profile([r * c, r * s, c - 2.0 * r])
}

/// Profile step in the conformal coordinate.
pub const PROFILE_STEP: f64 = 1e-3;

/// A Delaunay surface with `H = 1`, tabulated along the conformal
/// coordinate and interpolated by cubic Hermite splines.
///
/// `neck` is the smallest radius of the profile. Unduloids need
/// `0 < neck ≤ ½` (`½` is the cylinder); nodoids accept any positive neck.
#[derive(Clone, Debug, PartialEq)]
pub struct Delaunay {
    pub kind: DelaunayKind,
    pub neck: f64,
    x_min: f64,
    nodes: Vec<Profile>,
}

impl Delaunay {
    /// Integrates the profile over `[x_min, x_max]` with the neck at `x = 0`.
    pub fn new(kind: DelaunayKind, neck: f64, x_min: f64, x_max: f64) -> Result<Self> {
        let ok = match kind {
            DelaunayKind::Unduloid => neck > 0.0 && neck <= 0.5,
            DelaunayKind::Nodoid => neck > 0.0 && neck.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidNeck(neck));
        }
        if !(x_min <= 0.0 && x_max >= 0.0 && x_max > x_min && (x_max - x_min).is_finite()) {
            return Err(Error::InvalidArgument(
                "Delaunay x range must contain 0".into(),
            ));
        }
        let psi0 = match kind {
            DelaunayKind::Unduloid => 0.0,
            DelaunayKind::Nodoid => core::f64::consts::PI,
        };
        let start = Profile([0.0, neck, psi0]);
        let k_lo = (-x_min / PROFILE_STEP).ceil() as usize + 1;
        let k_hi = (x_max / PROFILE_STEP).ceil() as usize + 1;
        let mut back = Vec::with_capacity(k_lo);
        let mut p = start;
        let mut f = rhs;
        for k in 0..k_lo {
            p = rk4_step(&mut f, -(k as f64) * PROFILE_STEP, p, -PROFILE_STEP);
            back.push(p);
        }
        let mut nodes: Vec<Profile> = back.into_iter().rev().collect();
        nodes.push(start);
        p = start;
        for k in 0..k_hi {
            p = rk4_step(&mut f, k as f64 * PROFILE_STEP, p, PROFILE_STEP);
            nodes.push(p);
        }
        if let Some(bad) = nodes
            .iter()
            .find(|q| !q.0.iter().all(|v| v.is_finite()) || q.0[1] <= 0.0)
        {
            return Err(Error::IntegrationFailure(alloc::format!(
                "profile left the domain: {:?}",
                bad.0
            )));
        }
        Ok(Self {
            kind,
            neck,
            x_min: -(k_lo as f64) * PROFILE_STEP,
            nodes,
        })
    }

    /// `(A, R, ψ)` and their `x`-derivatives at `x`.
    fn profile(&self, x: f64) -> (Profile, Profile) {
        let u = ((x - self.x_min) / PROFILE_STEP).clamp(0.0, (self.nodes.len() - 2) as f64);
        let k = (u.floor() as usize).min(self.nodes.len() - 2);
        let x0 = self.x_min + k as f64 * PROFILE_STEP;
        let x1 = x0 + PROFILE_STEP;
        let (p0, p1) = (self.nodes[k], self.nodes[k + 1]);
        let (d0, d1) = (rhs(x0, &p0), rhs(x1, &p1));
        let mut v = Profile::default();
        let mut dv = Profile::default();
        for c in 0..3 {
            let (a, b) = hermite(x0, x1, p0.0[c], d0.0[c], p1.0[c], d1.0[c], x);
            v.0[c] = a;
            dv.0[c] = b;
        }
        (v, dv)
    }

    /// `R cos ψ − R²` at the neck.
    pub fn first_integral(&self) -> f64 {
        let p = self.profile(0.0).0;
        p.0[1] * p.0[2].cos() - p.0[1] * p.0[1]
    }

    /// Largest drift of the first integral over the tabulated range.
    pub fn first_integral_drift(&self) -> f64 {
        let c0 = self.first_integral();
        self.nodes
            .iter()
            .map(|p| (p.0[1] * p.0[2].cos() - p.0[1] * p.0[1] - c0).abs())
            .fold(0.0, f64::max)
    }

    pub fn radius(&self, x: f64) -> f64 {
        self.profile(x).0 .0[1]
    }
}

impl SurfaceField for Delaunay {
    fn sample(&self, x: f64, y: f64) -> Sample {
        let ([a, r, psi], [_, _, dpsi]) = {
            let (p, d) = self.profile(x);
            (p.0, d.0)
        };
        let (je, jie) = frame(y);
        let (s, c) = psi.sin_cos();
        let i = Quaternion::I;
        Sample {
            f: i * -a + je * r,
            n: je * -c - i * s,
            dfx: (i * -c + je * s) * r,
            dfy: jie * r,
            dnx: (je * s - i * c) * dpsi,
            dny: jie * -c,
        }
    }

    fn y_period(&self) -> Option<f64> {
        Some(core::f64::consts::TAU)
    }
}

/// Samples a Delaunay surface on `[0, X] × [0, 2π)`.
pub fn delaunay_patch(
    kind: DelaunayKind,
    neck: f64,
    nx: usize,
    ny: usize,
    x_len: f64,
) -> Result<ConformalPatch> {
    let grid = Grid::periodic(nx, ny, 0.0, x_len)?;
    let d = Delaunay::new(kind, neck, 0.0, x_len)?;
    let name = match kind {
        DelaunayKind::Unduloid => "unduloid",
        DelaunayKind::Nodoid => "nodoid",
    };
    ConformalPatch::from_field(&d, grid, name)
}
