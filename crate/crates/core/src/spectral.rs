//! The spectral parameter `μ` and the scalars derived from it.
//!
//! The family of connections is written with two complex numbers
//!
//! ```text
//! a = (μ + μ⁻¹)/2,   b = i(μ⁻¹ − μ)/2,   a² + b² = 1,
//! ```
//!
//! acting on sections by right multiplication. Written as an operator on
//! `eℍ` the second coefficient is `(μ⁻¹ − μ)/2 · I` with `I` right
//! multiplication by `i`; as a complex scalar this is the `b` above.
//!
//! The square root `c = √(a − 1)` is the principal one (cut along the
//! negative real axis). Every `±` label of the cylinder formulas follows from
//! this choice, so results that carry such labels should be compared as sets.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::{Error, Result, C64};

/// Tolerance for classifying `μ` as unitary or real.
pub const CLASSIFY_TOL: f64 = 1e-10;
/// `|μ − 1|` below this counts as the trivial point `μ = 1`.
pub const ONE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParam {
    pub mu: C64,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub is_unit_circle: bool,
    pub is_real: bool,
    pub is_one: bool,
}

impl SpectralParam {
    pub fn new(mu: C64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidArgument("μ is not finite".into()));
        }
        if mu.norm() == 0.0 {
            return Err(Error::MuZero);
        }
        let inv = mu.inv();
        let a = (mu + inv) * 0.5;
        let b = (inv - mu) * C64::new(0.0, 0.5);
        Ok(Self {
            mu,
            a,
            b,
            c: (a - 1.0).sqrt(),
            is_unit_circle: (mu.norm() - 1.0).abs() < CLASSIFY_TOL,
            is_real: mu.im.abs() < CLASSIFY_TOL,
            is_one: (mu - 1.0).norm() < ONE_TOL,
        })
    }

    pub fn real(mu: f64) -> Result<Self> {
        Self::new(C64::new(mu, 0.0))
    }

    /// `μ = e^{iθ}`.
    pub fn unitary(theta: f64) -> Result<Self> {
        Self::new(C64::from_polar(1.0, theta))
    }

    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(C64::from_polar(r, theta))
    }

    /// The principal square root `ζ` of `μ`.
    pub fn zeta(&self) -> C64 {
        self.mu.sqrt()
    }

    /// `μ̄⁻¹`, the image under the real structure of the family.
    pub fn reality_partner(&self) -> Result<Self> {
        Self::new(self.mu.conj().inv())
    }

    /// `μ⁻¹`, which swaps the sign of `b` and keeps `a`.
    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.mu.inv())
    }

    /// `a² + b² − 1`, zero up to roundoff.
    pub fn pythagoras_defect(&self) -> f64 {
        (self.a * self.a + self.b * self.b - 1.0).norm()
    }

    pub fn require_not_one(&self) -> Result<()> {
        if self.is_one {
            Err(Error::MuOne)
        } else {
            Ok(())
        }
    }
}

/// A value of `μ` at which both cylinder multipliers equal `(−1)^{k+1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonancePoint {
    pub k: i32,
    pub mu_k: f64,
}

impl ResonancePoint {
    /// `μ_k = 2k² − 1 − 2k√(k² − 1)`, evaluated without cancellation as
    /// `(|k| + √(k² − 1))^{∓2}`.
    pub fn new(k: i32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "resonance index must be nonzero".into(),
            ));
        }
        let kk = f64::from(k.unsigned_abs());
        let s = kk + (kk * kk - 1.0).sqrt();
        let mu_k = if k > 0 { (s * s).recip() } else { s * s };
        Ok(Self { k, mu_k })
    }

    pub fn param(&self) -> Result<SpectralParam> {
        SpectralParam::real(self.mu_k)
    }

    /// Common value of the two cylinder multipliers at this point.
    pub fn multiplier(&self) -> f64 {
        if self.k % 2 == 0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// `μ_k` for `2 ≤ k ≤ k_max`.
pub fn resonance_points(k_max: i32) -> Result<Vec<ResonancePoint>> {
    if k_max < 2 {
        return Err(Error::InvalidArgument("k_max must be at least 2".into()));
    }
    (2..=k_max).map(ResonancePoint::new).collect()
}
