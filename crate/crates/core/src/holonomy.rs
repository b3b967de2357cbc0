//! Parallel transport along paths and holonomy around the periodic
//! direction.

use alloc::vec::Vec;

use crate::family::ConnectionForm;
use crate::mat2::{Mat2, Ratio};
use crate::ode::{dopri5, dopri5_through, OdeState, Tolerance};
use crate::patch::SurfaceField;
use crate::quat::ComplexPair;
use crate::{Error, Result, C64};

/// Relative tolerance for flagging `h₊ = h₋`.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// A transported section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectionState {
    pub x: f64,
    pub y: f64,
    pub value: ComplexPair,
}

/// Transports `v` (a section or a fundamental matrix) along the straight
/// segment `from → to`.
pub fn transport_segment<F, S>(
    form: &ConnectionForm<F>,
    from: (f64, f64),
    to: (f64, f64),
    v: S,
    tol: Tolerance,
) -> Result<S>
where
    F: SurfaceField,
    S: OdeState + MatLike,
{
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    if dx == 0.0 && dy == 0.0 {
        return Ok(v);
    }
    let f = |t: f64, s: &S| s.left_mul(form.along(from.0 + t * dx, from.1 + t * dy, dx, dy));
    Ok(dopri5(f, 0.0, 1.0, v, tol, None)?.0)
}

/// States that a connection matrix can act on from the left.
pub trait MatLike {
    fn left_mul(&self, m: Mat2) -> Self;
}

impl MatLike for ComplexPair {
    fn left_mul(&self, m: Mat2) -> Self {
        m * *self
    }
}

impl MatLike for Mat2 {
    fn left_mul(&self, m: Mat2) -> Self {
        m * *self
    }
}

/// Transports `initial` along the polyline through `path`.
pub fn transport<F: SurfaceField>(
    form: &ConnectionForm<F>,
    path: &[(f64, f64)],
    initial: ComplexPair,
    tol: Tolerance,
) -> Result<SectionState> {
    if initial.norm() == 0.0 {
        return Err(Error::InvalidArgument("initial section is zero".into()));
    }
    let Some(&start) = path.first() else {
        return Err(Error::InvalidArgument("empty path".into()));
    };
    let mut v = initial;
    for w in path.windows(2) {
        v = transport_segment(form, w[0], w[1], v, tol)?;
    }
    let end = *path.last().unwrap_or(&start);
    Ok(SectionState {
        x: end.0,
        y: end.1,
        value: v,
    })
}

/// Fundamental matrix along the line `x = x0` at each of the knots `ys`,
/// starting from the identity at `ys[0]`.
pub fn fundamental_y<F: SurfaceField>(
    form: &ConnectionForm<F>,
    x0: f64,
    ys: &[f64],
    tol: Tolerance,
) -> Result<Vec<Mat2>> {
    let mut out = Vec::with_capacity(ys.len());
    let f = |y: f64, m: &Mat2| form.at(x0, y).1 * *m;
    dopri5_through(f, ys, Mat2::identity(), tol, |_, m| out.push(*m))?;
    Ok(out)
}

/// Fundamental matrix along `y = y0` at each of the knots `xs`.
pub fn fundamental_x<F: SurfaceField>(
    form: &ConnectionForm<F>,
    y0: f64,
    xs: &[f64],
    tol: Tolerance,
) -> Result<Vec<Mat2>> {
    let mut out = Vec::with_capacity(xs.len());
    let f = |x: f64, m: &Mat2| form.at(x, y0).0 * *m;
    dopri5_through(f, xs, Mat2::identity(), tol, |_, m| out.push(*m))?;
    Ok(out)
}

/// Eigenlines of a holonomy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EigenRatios {
    /// Two distinct eigenlines, as `α₁/α₀`.
    Pair(Ratio, Ratio),
    /// The holonomy is a multiple of the identity.
    FullEigenspace,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolonomyData {
    pub x0: f64,
    pub y0: f64,
    pub matrix: Mat2,
    pub h_plus: C64,
    pub h_minus: C64,
    /// Eigenvectors for `h₊`, `h₋`, largest component 1.
    pub vectors: [ComplexPair; 2],
    pub ratios: EigenRatios,
    pub degenerate: bool,
    pub diagonalizable: bool,
}

impl HolonomyData {
    pub fn from_matrix(matrix: Mat2, x0: f64, y0: f64) -> Self {
        let e = matrix.sl2_eigen();
        let [hp, hm] = e.values;
        // a scalar holonomy perturbed by roundoff splits its eigenvalues by
        // the square root of the perturbation, so test the matrix itself too
        let scalar = is_scalar(&matrix);
        let degenerate = scalar || (hp - hm).norm() < DEGENERACY_TOL * hp.norm().max(1.0);
        let diagonalizable = !degenerate || scalar;
        let ratios = if degenerate && scalar {
            EigenRatios::FullEigenspace
        } else {
            EigenRatios::Pair(Ratio::of(e.vectors[0]), Ratio::of(e.vectors[1]))
        };
        Self {
            x0,
            y0,
            matrix,
            h_plus: hp,
            h_minus: hm,
            vectors: e.vectors,
            ratios,
            degenerate,
            diagonalizable,
        }
    }

    pub fn det(&self) -> C64 {
        self.matrix.det()
    }

    pub fn eigenvalues(&self) -> [C64; 2] {
        [self.h_plus, self.h_minus]
    }
}

fn is_scalar(m: &Mat2) -> bool {
    let h = m.trace() * 0.5;
    (*m - Mat2::scalar(h)).norm() <= 1e-7 * m.norm().max(1.0)
}

/// Holonomy of `∇^μ` around `y ↦ y + period` at `x = x0`, based at `y = 0`.
pub fn holonomy_y<F: SurfaceField>(
    form: &ConnectionForm<F>,
    x0: f64,
    tol: Tolerance,
) -> Result<HolonomyData> {
    let period = form.field.y_period().ok_or(Error::NotPeriodic)?;
    let (m, _) = dopri5(
        |y, m: &Mat2| form.at(x0, y).1 * *m,
        0.0,
        period,
        Mat2::identity(),
        tol,
        None,
    )?;
    Ok(HolonomyData::from_matrix(m, x0, 0.0))
}

/// Eigenlines of `h` as points of `ℂ ∪ {∞}`.
pub fn eigen_ratios(h: &Mat2) -> Result<EigenRatios> {
    let d = HolonomyData::from_matrix(*h, 0.0, 0.0);
    if !d.diagonalizable {
        return Err(Error::NonDiagonalizable);
    }
    Ok(d.ratios)
}

/// Distance between two unordered pairs of complex numbers.
pub fn set_distance(a: [C64; 2], b: [C64; 2]) -> f64 {
    let d1 = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    let d2 = (a[0] - b[1]).norm().max((a[1] - b[0]).norm());
    d1.min(d2)
}

/// Relative version of [`set_distance`].
pub fn set_distance_rel(a: [C64; 2], b: [C64; 2]) -> f64 {
    let rel = |p: C64, q: C64| (p - q).norm() / q.norm().max(1e-300);
    let d1 = rel(a[0], b[0]).max(rel(a[1], b[1]));
    let d2 = rel(a[0], b[1]).max(rel(a[1], b[0]));
    d1.min(d2)
}
