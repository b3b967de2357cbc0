//! Quaternions and their representation as pairs of complex numbers.
//!
//! A quaternion `q = w + x·i + y·j + z·k` is written as `q = q₀ + j·q₁` with
//! `q₀, q₁ ∈ ℂ = span{1, i}`. Since `j·β = β̄·j` for complex `β`,
//!
//! ```text
//! j·(y − z·i) = y·j − z·(j·i) = y·j + z·k
//! ```
//!
//! so the pair is `q₀ = w + x·i`, `q₁ = y − z·i`. This is the only place the
//! convention is spelled out; everything else goes through [`Quaternion::to_pair`]
//! and [`Quaternion::from_pair`].

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::mat2::Mat2;
use crate::{Error, Result, C64};

/// Threshold below which `|q|` counts as zero for inversion.
pub const ZERO_THRESHOLD: f64 = 1e-300;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn imaginary(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    /// Embeds `c = re + im·i`.
    pub fn from_complex(c: C64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> Self {
        Self::imaginary(self.x, self.y, self.z)
    }

    /// Imaginary part as a vector of `ℝ³` (coefficients of `i, j, k`).
    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_vector(v: [f64; 3]) -> Self {
        Self::imaginary(v[0], v[1], v[2])
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps tiny and huge values finite
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s = self * (1.0 / m);
        m * s.norm_sqr().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.w
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs())
    }

    /// Euclidean inner product on `ℝ⁴`.
    pub fn dot(self, o: Self) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `q̄ / |q|²`.
    pub fn inverse(self) -> Result<Self> {
        let n = self.norm();
        if !(n >= ZERO_THRESHOLD) {
            return Err(Error::ZeroQuaternion);
        }
        // divide twice by |q| instead of once by |q|² to stay in range
        Ok(self.conj() * (1.0 / n) * (1.0 / n))
    }

    pub fn to_pair(self) -> ComplexPair {
        ComplexPair::new(C64::new(self.w, self.x), C64::new(self.y, -self.z))
    }

    pub fn from_pair(p: ComplexPair) -> Self {
        Self::new(p.a0.re, p.a0.im, p.a1.re, -p.a1.im)
    }

    /// Matrix of `α ↦ q·α` in pair coordinates.
    ///
    /// With `q = q₀ + j·q₁` and `α = α₀ + j·α₁`,
    /// `q·α = (q₀α₀ − q̄₁α₁) + j·(q₁α₀ + q̄₀α₁)`.
    pub fn left_mul_matrix(self) -> Mat2 {
        let p = self.to_pair();
        Mat2::new(p.a0, -p.a1.conj(), p.a1, p.a0.conj())
    }

    /// Rotation quaternion `r` (unit) with `r·u·r⁻¹ = v` for unit imaginary `u`, `v`.
    pub fn rotation_between(u: Self, v: Self) -> Self {
        let u = u.im() * (1.0 / u.norm());
        let v = v.im() * (1.0 / v.norm());
        let r = Self::ONE - v * u;
        if r.norm() > 1e-8 {
            return r * (1.0 / r.norm());
        }
        // antipodal: a half turn about any axis orthogonal to u
        let trial = if u.x.abs() < 0.9 { Self::I } else { Self::J };
        let axis = trial - u * trial.dot(u);
        axis * (1.0 / axis.norm())
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        self * (1.0 / s)
    }
}

/// A quaternion `α = a0 + j·a1` viewed as an element of `ℂ²`.
///
/// The complex structure is right multiplication by `i`, which acts
/// diagonally: `α·λ = (a0·λ, a1·λ)` for complex `λ`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexPair {
    pub a0: C64,
    pub a1: C64,
}

impl ComplexPair {
    pub const fn new(a0: C64, a1: C64) -> Self {
        Self { a0, a1 }
    }

    pub fn e0() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn e1() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn norm(self) -> f64 {
        self.a0.norm().hypot(self.a1.norm())
    }

    pub fn max_abs(self) -> f64 {
        self.a0
            .re
            .abs()
            .max(self.a0.im.abs())
            .max(self.a1.re.abs())
            .max(self.a1.im.abs())
    }

    /// Right multiplication by `j`: `(a0 + j a1)·j = −ā1 + j·ā0`.
    pub fn right_j(self) -> Self {
        Self::new(-self.a1.conj(), self.a0.conj())
    }

    /// Rescales by a complex number so the larger component becomes 1.
    pub fn normalized_max(self) -> Self {
        let s = if self.a0.norm() >= self.a1.norm() {
            self.a0
        } else {
            self.a1
        };
        if s == C64::new(0.0, 0.0) {
            return self;
        }
        let inv = s.inv();
        Self::new(self.a0 * inv, self.a1 * inv)
    }

    pub fn unit(self) -> Self {
        self * (1.0 / self.norm())
    }

    pub fn is_finite(self) -> bool {
        self.a0.is_finite() && self.a1.is_finite()
    }
}

impl Add for ComplexPair {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a0 + o.a0, self.a1 + o.a1)
    }
}

impl Sub for ComplexPair {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a0 - o.a0, self.a1 - o.a1)
    }
}

impl Neg for ComplexPair {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a0, -self.a1)
    }
}

impl Mul<f64> for ComplexPair {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.a0 * s, self.a1 * s)
    }
}

/// Right multiplication by a complex scalar.
impl Mul<C64> for ComplexPair {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        Self::new(self.a0 * s, self.a1 * s)
    }
}

impl From<Quaternion> for ComplexPair {
    fn from(q: Quaternion) -> Self {
        q.to_pair()
    }
}

impl From<ComplexPair> for Quaternion {
    fn from(p: ComplexPair) -> Self {
        Quaternion::from_pair(p)
    }
}
