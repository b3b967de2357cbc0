//! 2×2 complex matrices: connection coefficients, fundamental matrices and
//! holonomies.

use core::ops::{Add, Mul, Neg, Sub};

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::quat::ComplexPair;
use crate::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2 {
    pub m: [[C64; 2]; 2],
}

/// Projective coordinate `α₁/α₀` of an eigenline, `∞` when `α₀ = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ratio {
    Finite(C64),
    Infinity,
}

impl Ratio {
    pub fn of(v: ComplexPair) -> Self {
        if v.a0.norm() <= 1e-300 * v.a1.norm().max(1e-300) || v.a0 == C64::new(0.0, 0.0) {
            Ratio::Infinity
        } else {
            Ratio::Finite(v.a1 / v.a0)
        }
    }

    /// Chordal distance on the Riemann sphere.
    pub fn chordal(self, other: Self) -> f64 {
        match (self, other) {
            (Ratio::Infinity, Ratio::Infinity) => 0.0,
            (Ratio::Finite(z), Ratio::Infinity) | (Ratio::Infinity, Ratio::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (Ratio::Finite(z), Ratio::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }

    pub fn finite(self) -> Option<C64> {
        match self {
            Ratio::Finite(z) => Some(z),
            Ratio::Infinity => None,
        }
    }

    /// Representative vector `(1, ρ)` or `(0, 1)`.
    pub fn vector(self) -> ComplexPair {
        match self {
            Ratio::Finite(z) => ComplexPair::new(C64::new(1.0, 0.0), z),
            Ratio::Infinity => ComplexPair::e1(),
        }
    }
}

/// Eigen-decomposition of a 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen2 {
    /// Eigenvalues, larger modulus first.
    pub values: [C64; 2],
    /// Eigenvectors scaled so the larger component is 1. For a degenerate
    /// eigenvalue with a one-dimensional eigenspace both entries coincide.
    pub vectors: [ComplexPair; 2],
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self {
            m: [[a, b], [c, d]],
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self::new(one, z, z, one)
    }

    pub fn scalar(s: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new(s, z, z, s)
    }

    pub fn from_columns(c0: ComplexPair, c1: ComplexPair) -> Self {
        Self::new(c0.a0, c1.a0, c0.a1, c1.a1)
    }

    pub fn column(&self, k: usize) -> ComplexPair {
        ComplexPair::new(self.m[0][k], self.m[1][k])
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(
            self.m[1][1] * inv,
            -self.m[0][1] * inv,
            -self.m[1][0] * inv,
            self.m[0][0] * inv,
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, z| acc.max(z.re.abs()).max(z.im.abs()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.is_finite())
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[0][1].conj(),
            self.m[1][0].conj(),
            self.m[1][1].conj(),
        )
    }

    /// `(tr/2, √((tr/2)² − det))` with the discriminant formed from the
    /// entries, so that it keeps relative accuracy when the matrix is close
    /// to a multiple of the identity.
    fn half_trace_disc(&self) -> (C64, C64) {
        let [[a, b], [c, d]] = self.m;
        let h = (a - d) * 0.5;
        ((a + d) * 0.5, (h * h + b * c).sqrt())
    }

    /// Eigenvalues ordered by decreasing modulus.
    ///
    /// When the spectrum is well separated in modulus the smaller one is
    /// `det / λ₁`, which keeps `λ₁λ₂ = det` to roundoff even when
    /// `|λ₁| ≫ |λ₂|`.
    pub fn eigenvalues(&self) -> [C64; 2] {
        let (half, disc) = self.half_trace_disc();
        let (l1, l2) = ordered(half, disc);
        if l1.norm() > 4.0 * l2.norm() {
            [l1, self.det() / l1]
        } else {
            [l1, l2]
        }
    }

    /// Eigenvector for a known eigenvalue, normalized so the larger
    /// component is 1. Falls back to `e0` when `self − λ` vanishes.
    pub fn eigenvector(&self, lambda: C64) -> ComplexPair {
        let a = self.m[0][0] - lambda;
        let b = self.m[0][1];
        let c = self.m[1][0];
        let d = self.m[1][1] - lambda;
        // kernel of [[a, b], [c, d]]: (b, −a) from row 0 or (d, −c) from row 1
        let r0 = ComplexPair::new(b, -a);
        let r1 = ComplexPair::new(d, -c);
        let v = if r0.norm() >= r1.norm() { r0 } else { r1 };
        if v.norm() == 0.0 {
            return ComplexPair::e0();
        }
        v.normalized_max()
    }

    pub fn eigen(&self) -> Eigen2 {
        let values = self.eigenvalues();
        Eigen2 {
            values,
            vectors: [self.eigenvector(values[0]), self.eigenvector(values[1])],
        }
    }

    /// Eigenvalues of a matrix known to lie in `SL(2, ℂ)`, larger modulus
    /// first. For `|λ₁| ≫ 1` the small one is `1/λ₁`: there the computed
    /// determinant is dominated by cancellation and must not be used.
    pub fn sl2_eigenvalues(&self) -> [C64; 2] {
        let (half, disc) = self.half_trace_disc();
        let (l1, l2) = ordered(half, disc);
        if l1.norm() > 2.0 {
            [l1, l1.inv()]
        } else {
            [l1, l2]
        }
    }

    /// [`Mat2::eigen`] for matrices in `SL(2, ℂ)`.
    pub fn sl2_eigen(&self) -> Eigen2 {
        let values = self.sl2_eigenvalues();
        Eigen2 {
            values,
            vectors: [self.eigenvector(values[0]), self.eigenvector(values[1])],
        }
    }
}

fn ordered(half: C64, disc: C64) -> (C64, C64) {
    if (half + disc).norm() >= (half - disc).norm() {
        (half + disc, half - disc)
    } else {
        (half - disc, half + disc)
    }
}

impl Add for Mat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.m[i][j] += o.m[i][j];
            }
        }
        r
    }
}

impl Sub for Mat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul for Mat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<ComplexPair> for Mat2 {
    type Output = ComplexPair;
    fn mul(self, v: ComplexPair) -> ComplexPair {
        ComplexPair::new(
            self.m[0][0] * v.a0 + self.m[0][1] * v.a1,
            self.m[1][0] * v.a0 + self.m[1][1] * v.a1,
        )
    }
}

impl Mul<C64> for Mat2 {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        let mut r = self;
        r.m.iter_mut().flatten().for_each(|z| *z *= s);
        r
    }
}

impl Mul<f64> for Mat2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        let mut r = self;
        r.m.iter_mut().flatten().for_each(|z| *z *= s);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_of_diagonalizable_matrix() {
        let p = Mat2::new(c(1.0, 0.0), c(2.0, 1.0), c(-0.5, 0.3), c(1.0, -1.0));
        let d = Mat2::new(c(3.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.2, -0.1));
        let h = p * d * p.inverse().unwrap();
        let e = h.eigen();
        assert!((e.values[0] - c(3.0, 1.0)).norm() < 1e-12);
        assert!((e.values[1] - c(0.2, -0.1)).norm() < 1e-12);
        for k in 0..2 {
            let r = h * e.vectors[k] - e.vectors[k] * e.values[k];
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn small_eigenvalue_keeps_relative_accuracy() {
        // det = 1 with eigenvalues e^{±30}
        let big = c(30.0_f64.exp(), 0.0);
        let p = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0));
        let h = p * Mat2::new(big, c(0.0, 0.0), c(0.0, 0.0), big.inv()) * p.inverse().unwrap();
        let e = h.sl2_eigenvalues();
        assert!(((e[1] - big.inv()) / big.inv()).norm() < 1e-12);
        assert!(((e[0] - big) / big).norm() < 1e-12);
    }

    #[test]
    fn ratio_chordal_distance() {
        assert_eq!(Ratio::Infinity.chordal(Ratio::Infinity), 0.0);
        assert!((Ratio::Finite(c(0.0, 0.0)).chordal(Ratio::Infinity) - 2.0).abs() < 1e-15);
        assert_eq!(Ratio::of(ComplexPair::e1()), Ratio::Infinity);
    }
}
