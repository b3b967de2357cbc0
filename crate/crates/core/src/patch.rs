//! Conformal patches: surfaces given either as continuous fields or as
//! samples on a uniform grid, and the structural checks they must pass.
//!
//! A patch carries `f`, the Gauss map `N` and the partial derivatives of
//! both. The orientation convention is `∂f/∂y = N·∂f/∂x = −∂f/∂x·N`, and the
//! `H = 1` normalization reads `½(∂N/∂x − N·∂N/∂y) = −∂f/∂x`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::interp::{Axis, Stencil};
use crate::quat::Quaternion;
use crate::{Error, Result};

/// Surface data at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Sample {
    pub f: Quaternion,
    pub n: Quaternion,
    pub dfx: Quaternion,
    pub dfy: Quaternion,
    pub dnx: Quaternion,
    pub dny: Quaternion,
}

impl Sample {
    /// The parallel surface `g = f + N` with Gauss map `−N`.
    pub fn parallel(&self) -> Self {
        Self {
            f: self.f + self.n,
            n: -self.n,
            dfx: self.dfx + self.dnx,
            dfy: self.dfy + self.dny,
            dnx: -self.dnx,
            dny: -self.dny,
        }
    }
}

/// A conformal immersion that can be evaluated anywhere in its domain.
pub trait SurfaceField: Sync {
    fn sample(&self, x: f64, y: f64) -> Sample;
    /// Period in `y`, when the surface closes up in that direction.
    fn y_period(&self) -> Option<f64>;
}

impl<T: SurfaceField + ?Sized> SurfaceField for &T {
    fn sample(&self, x: f64, y: f64) -> Sample {
        (**self).sample(x, y)
    }
    fn y_period(&self) -> Option<f64> {
        (**self).y_period()
    }
}

/// Uniform rectangular grid. In a periodic direction the last node is one
/// step short of the period, so no sample is duplicated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    /// Length of the `y` range; the period when `y_periodic`.
    pub y_len: f64,
    pub y_periodic: bool,
}

impl Grid {
    /// `nx × ny` grid over `[x0, x1] × [0, 2π)`, periodic in `y`.
    pub fn periodic(nx: usize, ny: usize, x0: f64, x1: f64) -> Result<Self> {
        let g = Self {
            nx,
            ny,
            x0,
            x1,
            y0: 0.0,
            y_len: TAU,
            y_periodic: true,
        };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidArgument(
                "grid needs at least 2 nodes per direction".into(),
            ));
        }
        if self.y_periodic && !self.ny.is_multiple_of(2) {
            return Err(Error::InvalidArgument(
                "periodic grids need an even ny".into(),
            ));
        }
        if !(self.x1 > self.x0)
            || !(self.y_len > 0.0)
            || !self.x0.is_finite()
            || !self.x1.is_finite()
        {
            return Err(Error::InvalidArgument(
                "empty or non-finite grid range".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        if self.y_periodic {
            self.y_len / self.ny as f64
        } else {
            self.y_len / (self.ny - 1) as f64
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x1
        } else {
            self.x0 + i as f64 * self.hx()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    /// `y` nodes, followed by `y0 + y_len` when periodic so that a sweep
    /// over them closes the loop.
    pub fn ys_closed(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.ny).map(|j| self.y(j)).collect();
        if self.y_periodic {
            v.push(self.y0 + self.y_len);
        }
        v
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    /// Same grid with both steps halved.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx - 1,
            ny: if self.y_periodic {
                2 * self.ny
            } else {
                2 * self.ny - 1
            },
            ..*self
        }
    }

    fn x_axis(&self) -> Axis {
        Axis {
            origin: self.x0,
            step: self.hx(),
            n: self.nx,
            periodic: false,
        }
    }

    fn y_axis(&self) -> Axis {
        Axis {
            origin: self.y0,
            step: self.hy(),
            n: self.ny,
            periodic: self.y_periodic,
        }
    }
}

/// Tolerance on `|N| = 1` for imported samples.
pub const UNIT_NORMAL_TOL: f64 = 1e-6;

/// A surface sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalPatch {
    pub grid: Grid,
    pub f: Vec<Quaternion>,
    pub n: Vec<Quaternion>,
    pub dfx: Vec<Quaternion>,
    pub dfy: Vec<Quaternion>,
    /// Derivatives of `N`; exact when sampled from a field, finite
    /// differences otherwise.
    pub dnx: Vec<Quaternion>,
    pub dny: Vec<Quaternion>,
    /// `|∂f/∂x|` per vertex.
    pub conformal_factor: Vec<f64>,
    pub h_target: f64,
    /// Factor applied to reach `H = 1`.
    pub scale: f64,
    pub provenance: String,
    pub parallel_of_source: bool,
}

impl ConformalPatch {
    pub fn from_field<F: SurfaceField + ?Sized>(
        field: &F,
        grid: Grid,
        provenance: &str,
    ) -> Result<Self> {
        grid.check()?;
        if grid.y_periodic
            && field
                .y_period()
                .is_none_or(|p| (p - grid.y_len).abs() > 1e-12 * p)
        {
            return Err(Error::NotPeriodic);
        }
        let mut samples = Vec::with_capacity(grid.len());
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                samples.push(field.sample(grid.x(i), grid.y(j)));
            }
        }
        Ok(Self::assemble(grid, &samples, provenance))
    }

    fn assemble(grid: Grid, s: &[Sample], provenance: &str) -> Self {
        Self {
            grid,
            f: s.iter().map(|v| v.f).collect(),
            n: s.iter().map(|v| v.n).collect(),
            dfx: s.iter().map(|v| v.dfx).collect(),
            dfy: s.iter().map(|v| v.dfy).collect(),
            dnx: s.iter().map(|v| v.dnx).collect(),
            dny: s.iter().map(|v| v.dny).collect(),
            conformal_factor: s.iter().map(|v| v.dfx.norm()).collect(),
            h_target: 1.0,
            scale: 1.0,
            provenance: provenance.into(),
            parallel_of_source: false,
        }
    }

    /// Builds a patch from raw samples (as read from a file), checking the
    /// schema and differentiating `N` numerically.
    pub fn from_samples(
        grid: Grid,
        f: Vec<Quaternion>,
        n: Vec<Quaternion>,
        dfx: Vec<Quaternion>,
        dfy: Vec<Quaternion>,
        provenance: &str,
    ) -> Result<Self> {
        grid.check()
            .map_err(|e| Error::SchemaViolation(alloc::format!("{e}")))?;
        let len = grid.len();
        for (name, v) in [("f", &f), ("N", &n), ("dfx", &dfx), ("dfy", &dfy)] {
            if v.len() != len {
                return Err(Error::SchemaViolation(alloc::format!(
                    "{name} has {} records, expected {len}",
                    v.len()
                )));
            }
            if let Some(k) = v.iter().position(|q| !q.is_finite()) {
                return Err(Error::SchemaViolation(alloc::format!(
                    "non-finite {name} at record {k}"
                )));
            }
        }
        if let Some(k) = n
            .iter()
            .position(|q| (q.norm() - 1.0).abs() > UNIT_NORMAL_TOL || q.w.abs() > UNIT_NORMAL_TOL)
        {
            return Err(Error::SchemaViolation(alloc::format!(
                "normal at record {k} is not unit imaginary (|N| = {})",
                n[k].norm()
            )));
        }
        let dnx = differentiate(&grid, &n, true);
        let dny = differentiate(&grid, &n, false);
        Ok(Self {
            conformal_factor: dfx.iter().map(|q| q.norm()).collect(),
            grid,
            f,
            n,
            dfx,
            dfy,
            dnx,
            dny,
            h_target: 1.0,
            scale: 1.0,
            provenance: provenance.into(),
            parallel_of_source: false,
        })
    }

    pub fn sample_at(&self, i: usize, j: usize) -> Sample {
        let k = self.grid.index(i, j);
        Sample {
            f: self.f[k],
            n: self.n[k],
            dfx: self.dfx[k],
            dfy: self.dfy[k],
            dnx: self.dnx[k],
            dny: self.dny[k],
        }
    }

    pub fn samples(&self) -> impl Iterator<Item = Sample> + '_ {
        (0..self.grid.len()).map(move |k| self.sample_at(k / self.grid.ny, k % self.grid.ny))
    }

    /// The parallel surface `g = f + N` with Gauss map `−N`.
    pub fn parallel_surface(&self) -> Self {
        let s: Vec<Sample> = self.samples().map(|s| s.parallel()).collect();
        let mut p = Self::assemble(self.grid, &s, &self.provenance);
        p.scale = self.scale;
        p.parallel_of_source = !self.parallel_of_source;
        p
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Fourth-order central differences (one-sided cubic stencils at open ends).
fn differentiate(grid: &Grid, v: &[Quaternion], along_x: bool) -> Vec<Quaternion> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut out = alloc::vec![Quaternion::ZERO; v.len()];
    let (axis, n) = if along_x {
        (grid.x_axis(), nx)
    } else {
        (grid.y_axis(), ny)
    };
    for i in 0..nx {
        for j in 0..ny {
            let k = if along_x { i } else { j };
            let at = |m: usize| {
                if along_x {
                    v[grid.index(m, j)]
                } else {
                    v[grid.index(i, m)]
                }
            };
            let interior = axis.periodic || (k >= 2 && k + 2 < n);
            let d = if interior && n >= 5 {
                let w = |o: isize| at((k as isize + o).rem_euclid(n as isize) as usize);
                (w(-2) - w(-1) * 8.0 + w(1) * 8.0 - w(2)) * (1.0 / (12.0 * axis.step))
            } else {
                let st = axis.stencil(axis.node(k), true);
                combine(&st, at)
            };
            out[grid.index(i, j)] = d;
        }
    }
    out
}

fn combine(st: &Stencil, at: impl Fn(usize) -> Quaternion) -> Quaternion {
    st.idx
        .iter()
        .zip(st.w)
        .fold(Quaternion::ZERO, |acc, (&k, w)| acc + at(k) * w)
}

/// Evaluates a sampled patch between vertices by tensor-product cubic
/// Lagrange interpolation.
#[derive(Clone, Debug)]
pub struct PatchField<'a> {
    pub patch: &'a ConformalPatch,
}

impl<'a> PatchField<'a> {
    pub fn new(patch: &'a ConformalPatch) -> Self {
        Self { patch }
    }
}

impl SurfaceField for PatchField<'_> {
    fn sample(&self, x: f64, y: f64) -> Sample {
        let g = &self.patch.grid;
        let sx = g.x_axis().stencil(x, false);
        let sy = g.y_axis().stencil(y, false);
        let mut out = Sample::default();
        for (a, &i) in sx.idx.iter().enumerate() {
            for (b, &j) in sy.idx.iter().enumerate() {
                let w = sx.w[a] * sy.w[b];
                let s = self.patch.sample_at(i, j);
                out.f += s.f * w;
                out.n += s.n * w;
                out.dfx += s.dfx * w;
                out.dfy += s.dfy * w;
                out.dnx += s.dnx * w;
                out.dny += s.dny * w;
            }
        }
        out.n = out.n * (1.0 / out.n.norm());
        out
    }

    fn y_period(&self) -> Option<f64> {
        let g = &self.patch.grid;
        g.y_periodic.then_some(g.y_len)
    }
}

/// Maximum residuals of the structural equations over a patch.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ValidationReport {
    /// `max ||N| − 1| + |Re N|`.
    pub unit_normal: f64,
    /// `max (||fx|² − |fy|²| + 2|⟨fx, fy⟩|) / |fx|²`.
    pub conformality: f64,
    /// `max |fy − N fx|`.
    pub left_structure: f64,
    /// `max |fy + fx N|`.
    pub right_structure: f64,
    /// `max |½(Nx − N Ny) + fx| + |½(Ny + N Nx) + fy|`.
    pub h_relation: f64,
    /// Second-order central differences of `f` against the stored
    /// derivatives. This one is a discretization error of size `O(h²)`.
    pub fd_consistency: f64,
}

impl ValidationReport {
    /// Largest of the pointwise algebraic residuals (everything except
    /// `fd_consistency`).
    pub fn max_pointwise(&self) -> f64 {
        self.unit_normal
            .max(self.conformality)
            .max(self.left_structure)
            .max(self.right_structure)
            .max(self.h_relation)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_pointwise() <= tol
    }
}

pub fn validate_sample(s: &Sample) -> ValidationReport {
    let e = s.dfx.norm_sqr();
    let g = s.dfy.norm_sqr();
    let conf = if e > 0.0 {
        ((e - g).abs() + 2.0 * s.dfx.dot(s.dfy).abs()) / e
    } else {
        f64::INFINITY
    };
    let hx = (s.dnx - s.n * s.dny) * 0.5 + s.dfx;
    let hy = (s.dny + s.n * s.dnx) * 0.5 + s.dfy;
    ValidationReport {
        unit_normal: (s.n.norm() - 1.0).abs() + s.n.w.abs(),
        conformality: conf,
        left_structure: (s.dfy - s.n * s.dfx).norm(),
        right_structure: (s.dfy + s.dfx * s.n).norm(),
        h_relation: hx.norm() + hy.norm(),
        fd_consistency: 0.0,
    }
}

pub fn validate(p: &ConformalPatch) -> ValidationReport {
    let g = &p.grid;
    let mut r = ValidationReport::default();
    for s in p.samples() {
        let v = validate_sample(&s);
        r.unit_normal = r.unit_normal.max(v.unit_normal);
        r.conformality = r.conformality.max(v.conformality);
        r.left_structure = r.left_structure.max(v.left_structure);
        r.right_structure = r.right_structure.max(v.right_structure);
        r.h_relation = r.h_relation.max(v.h_relation);
    }
    let (hx, hy) = (g.hx(), g.hy());
    for i in 0..g.nx {
        for j in 0..g.ny {
            let k = g.index(i, j);
            if i > 0 && i + 1 < g.nx {
                let d = (p.f[g.index(i + 1, j)] - p.f[g.index(i - 1, j)]) * (0.5 / hx);
                r.fd_consistency = r.fd_consistency.max((d - p.dfx[k]).norm());
            }
            if g.y_periodic || (j > 0 && j + 1 < g.ny) {
                let jp = (j + 1) % g.ny;
                let jm = (j + g.ny - 1) % g.ny;
                let d = (p.f[g.index(i, jp)] - p.f[g.index(i, jm)]) * (0.5 / hy);
                r.fd_consistency = r.fd_consistency.max((d - p.dfy[k]).norm());
            }
        }
    }
    r
}
