//! Numerical core for μ-Darboux transforms of constant mean curvature surfaces.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: quaternion arithmetic, the associated family of flat
//! `SL(2, ℂ)` connections of an `H = 1` surface, parallel transport and
//! holonomy, the Darboux transform itself, the classical Riccati route, and
//! closed-form oracles for the round cylinder. File formats, meshes and the
//! command line live in the `cmc-darboux` companion crate.
//!
//! Conventions used throughout:
//!
//! * `ℝ³` is the imaginary quaternions; a surface `f` has Gauss map `N` with
//!   `∂f/∂y = N·∂f/∂x = −∂f/∂x·N`.
//! * A quaternion `α` is stored as the complex pair `(α₀, α₁)` with
//!   `α = α₀ + j·α₁`, see [`quat::ComplexPair`].
//! * Complex scalars `a`, `b` of the spectral parameter act on sections by
//!   right multiplication.

#![no_std]

extern crate alloc;

pub mod curvature;
pub mod cylinder;
pub mod darboux;
pub mod error;
pub mod family;
pub mod holonomy;
pub mod interp;
pub mod mat2;
pub mod ode;
pub mod patch;
pub mod quat;
pub mod riccati;
pub mod scan;
pub mod spectral;
pub mod surfaces;

pub use error::{Error, Result};
pub use mat2::Mat2;
pub use quat::{ComplexPair, Quaternion};
pub use spectral::SpectralParam;

/// Complex scalar type used everywhere.
pub type C64 = num_complex::Complex64;
