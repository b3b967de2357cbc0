//! Closed forms for the round cylinder `f = ½(−ix + j e^{iy})`.
//!
//! Parallel sections of `∇^μ` are
//!
//! ```text
//! α = (e^{−iy/2}, p₊ e^{iy/2}) m₊ e^{w} + (e^{−iy/2}, p₋ e^{iy/2}) m₋ e^{−w},
//! w = √2((a − 1)x − b y)/(4c),   p± = −(b ± √2 i c)/(a − 1),
//! ```
//!
//! with multipliers `h± = −e^{∓√2 b π/(2c)}` around `y ↦ y + 2π`.

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::quat::{ComplexPair, Quaternion};
use crate::spectral::SpectralParam;
use crate::{Error, Result, C64};

/// Selects one of the two eigen-solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderSolution {
    pub param: SpectralParam,
    pub wx: C64,
    pub wy: C64,
    pub p_plus: C64,
    pub p_minus: C64,
}

impl CylinderSolution {
    pub fn new(param: SpectralParam) -> Result<Self> {
        param.require_not_one()?;
        let (a, b, c) = (param.a, param.b, param.c);
        let s2 = 2f64.sqrt();
        let am1 = a - 1.0;
        Ok(Self {
            param,
            wx: am1 * s2 / (c * 4.0),
            wy: -b * s2 / (c * 4.0),
            p_plus: -(b + C64::new(0.0, s2) * c) / am1,
            p_minus: -(b - C64::new(0.0, s2) * c) / am1,
        })
    }

    pub fn p(&self, which: Branch) -> C64 {
        match which {
            Branch::Plus => self.p_plus,
            Branch::Minus => self.p_minus,
        }
    }

    pub fn w(&self, x: f64, y: f64) -> C64 {
        self.wx * x + self.wy * y
    }

    /// `α(x, y)` for mixing coefficients `m₊`, `m₋`.
    pub fn section(&self, m_plus: C64, m_minus: C64, x: f64, y: f64) -> ComplexPair {
        let w = self.w(x, y);
        let ep = w.exp();
        let em = (-w).exp();
        let l = C64::from_polar(1.0, -0.5 * y);
        let r = C64::from_polar(1.0, 0.5 * y);
        ComplexPair::new(
            l * (m_plus * ep + m_minus * em),
            r * (self.p_plus * m_plus * ep + self.p_minus * m_minus * em),
        )
    }

    /// The eigen-solution of one branch, with unit coefficient.
    pub fn eigen_section(&self, which: Branch, x: f64, y: f64) -> ComplexPair {
        match which {
            Branch::Plus => self.section(C64::new(1.0, 0.0), C64::new(0.0, 0.0), x, y),
            Branch::Minus => self.section(C64::new(0.0, 0.0), C64::new(1.0, 0.0), x, y),
        }
    }
}

/// `α(x, y) = section(m₊, m₋)` as a closure.
pub fn analytic_section(
    param: SpectralParam,
    m_plus: C64,
    m_minus: C64,
) -> Result<impl Fn(f64, f64) -> ComplexPair> {
    let s = CylinderSolution::new(param)?;
    Ok(move |x, y| s.section(m_plus, m_minus, x, y))
}

/// `(h₊, h₋)`.
pub fn analytic_monodromy(param: &SpectralParam) -> Result<(C64, C64)> {
    param.require_not_one()?;
    let e = param.b * (2f64.sqrt() * core::f64::consts::PI) / (param.c * 2.0);
    Ok((-(-e).exp(), -e.exp()))
}

/// Translational and rotational parts of the closed transforms for real or
/// unitary `μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidMotionData {
    pub t0: [C64; 2],
    pub t1: [C64; 2],
    pub r: [f64; 2],
}

impl RigidMotionData {
    fn idx(which: Branch) -> usize {
        match which {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }

    /// `T = T₀ + j e^{iy} T₁`.
    pub fn t(&self, which: Branch, y: f64) -> Quaternion {
        let k = Self::idx(which);
        Quaternion::from_complex(self.t0[k])
            + Quaternion::from_pair(ComplexPair::new(
                C64::new(0.0, 0.0),
                C64::from_polar(1.0, y) * self.t1[k],
            ))
    }

    /// `f̂ = f + T`.
    pub fn f_hat(&self, which: Branch, x: f64, y: f64) -> Quaternion {
        use crate::patch::SurfaceField;
        crate::surfaces::Cylinder.sample(x, y).f + self.t(which, y)
    }
}

pub fn analytic_rigid_motion(param: &SpectralParam) -> Result<RigidMotionData> {
    param.require_not_one()?;
    if !(param.is_real || param.is_unit_circle) {
        return Err(Error::OutOfRegime(alloc::format!(
            "μ = {} is neither real nor unitary",
            param.mu
        )));
    }
    let s = CylinderSolution::new(*param)?;
    let (a, b) = (param.a, param.b);
    let i = C64::new(0.0, 1.0);
    let mut d = RigidMotionData {
        t0: [C64::new(0.0, 0.0); 2],
        t1: [C64::new(0.0, 0.0); 2],
        r: [0.0; 2],
    };
    for (k, p) in [s.p_plus, s.p_minus].into_iter().enumerate() {
        let n2 = p.norm_sqr();
        let q = 1.0 + n2;
        let r = (a - 1.0).norm_sqr() + b.norm_sqr() - 4.0 * ((a - 1.0) * b.conj()).im * p.im / q;
        d.r[k] = r;
        d.t0[k] = (b.re - p.conj() * p.conj() * i * (2.0 * a.im / q) - i * ((1.0 - n2) / q * b.im))
            * (2.0 / r);
        d.t1[k] = (a.re - 1.0 + i * ((1.0 - n2) / q * a.im) - p * i * (2.0 * b.im / q)) * (2.0 / r);
    }
    Ok(d)
}
