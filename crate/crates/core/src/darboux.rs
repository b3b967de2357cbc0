//! μ-Darboux transforms `f̂ = f + T` from parallel sections of `∇^μ`.
//!
//! For a parallel section `α` (as a quaternion field in pair coordinates)
//!
//! ```text
//! T⁻¹ = ½ (N α (a − 1) α⁻¹ + α b α⁻¹),   N̂ = −T N T⁻¹,
//! ```
//!
//! and `T` only depends on the complex line through `α`. Derivatives of `T`
//! follow in closed form: with `P = α(a−1)α⁻¹`, `Q = α b α⁻¹` and
//! `X = dα α⁻¹ = −df T⁻¹`,
//!
//! ```text
//! d(T⁻¹) = ½ (dN P + N [X, P] + [X, Q]),   dT = −T d(T⁻¹) T.
//! ```

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::curvature::{mean_curvature, CurvatureReport};
use crate::family::ConnectionForm;
use crate::holonomy::{fundamental_y, holonomy_y, transport_segment, HolonomyData};
use crate::mat2::Mat2;
use crate::ode::{dopri5, Tolerance};
use crate::patch::{ConformalPatch, Grid, Sample, SurfaceField};
use crate::quat::{ComplexPair, Quaternion};
use crate::spectral::SpectralParam;
use crate::{Error, Result, C64};

/// `|T⁻¹|` below this is treated as a numerical breakdown.
pub const NEAR_SINGULAR: f64 = 1e-12;

fn commutator(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b - b * a
}

/// Transform data at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformSample {
    pub t: Quaternion,
    pub dtx: Quaternion,
    pub dty: Quaternion,
    /// `f̂`, `N̂` and their derivatives.
    pub hat: Sample,
}

/// `T` and the transformed surface data at a point where the source has
/// data `s` and the parallel section is `alpha`.
pub fn transform_sample(
    alpha: ComplexPair,
    s: &Sample,
    p: &SpectralParam,
) -> Result<TransformSample> {
    let scale = alpha.max_abs();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidArgument(
            "section vanishes or overflowed".into(),
        ));
    }
    let a = Quaternion::from_pair(alpha * (1.0 / scale));
    let ai = a.inverse()?;
    let pq = a * Quaternion::from_complex(p.a - 1.0) * ai;
    let qq = a * Quaternion::from_complex(p.b) * ai;
    let t_inv = (s.n * pq + qq) * 0.5;
    let m = t_inv.norm();
    if m < NEAR_SINGULAR {
        return Err(Error::NearSingularT(m));
    }
    let t = t_inv.inverse()?;
    let d_tinv = |df: Quaternion, dn: Quaternion| {
        let x = -(df * t_inv);
        (dn * pq + s.n * commutator(x, pq) + commutator(x, qq)) * 0.5
    };
    let dix = d_tinv(s.dfx, s.dnx);
    let diy = d_tinv(s.dfy, s.dny);
    let dtx = -(t * dix * t);
    let dty = -(t * diy * t);
    let n_hat = -(t * s.n * t_inv);
    let dn_hat = |dt: Quaternion, dn: Quaternion, di: Quaternion| {
        -(dt * s.n * t_inv) - t * dn * t_inv - t * s.n * di
    };
    Ok(TransformSample {
        t,
        dtx,
        dty,
        hat: Sample {
            f: s.f + t,
            n: n_hat,
            dfx: s.dfx + dtx,
            dfy: s.dfy + dty,
            dnx: dn_hat(dtx, s.dnx, dix),
            dny: dn_hat(dty, s.dny, diy),
        },
    })
}

/// How the initial section was chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Closure {
    /// Eigenline of the holonomy for `h₊` (larger modulus first).
    Plus,
    Minus,
    /// `m₊ α₊ + m₋ α₋` at a resonance point.
    Mix(C64, C64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransformKind {
    /// Arbitrary initial section.
    Generic,
    Closed(Closure),
}

/// Order of the transport sweep over the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SweepOrder {
    /// Along the base row in `x`, then every column in `y`.
    #[default]
    XThenY,
    /// Along the base column in `y`, then every row in `x`.
    YThenX,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformOptions {
    pub tol: Tolerance,
    /// Largest accepted `y`-period mismatch for closed transforms.
    pub closed_tol: f64,
    pub order: SweepOrder,
    /// Column of the basepoint; `None` picks the column nearest `x = 0`.
    pub base_column: Option<usize>,
}

impl Default for TransformOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::relative(1e-12),
            closed_tol: 1e-6,
            order: SweepOrder::XThenY,
            base_column: None,
        }
    }
}

impl TransformOptions {
    fn base(&self, grid: &Grid) -> usize {
        self.base_column.unwrap_or_else(|| {
            (0..grid.nx)
                .min_by(|&a, &b| grid.x(a).abs().total_cmp(&grid.x(b).abs()))
                .unwrap_or(0)
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RealPartStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl RealPartStats {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }

    /// Largest distance of `Re f̂` from `value`.
    pub fn deviation_from(&self, value: f64) -> f64 {
        (self.max - value).abs().max((self.min - value).abs())
    }
}

/// A transform sampled on the grid of its source.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformResult {
    pub param: SpectralParam,
    pub kind: TransformKind,
    pub source: ConformalPatch,
    /// Parallel section, rescaled per vertex.
    pub alpha: Vec<ComplexPair>,
    pub t: Vec<Quaternion>,
    pub f_hat: Vec<Quaternion>,
    pub n_hat: Vec<Quaternion>,
    pub dfx_hat: Vec<Quaternion>,
    pub dfy_hat: Vec<Quaternion>,
    pub dnx_hat: Vec<Quaternion>,
    pub dny_hat: Vec<Quaternion>,
    pub real_part: RealPartStats,
    /// `max |f̂(x, y + period) − f̂(x, y)|` for periodic sources.
    pub closedness: Option<f64>,
    pub base_column: usize,
}

impl TransformResult {
    pub fn grid(&self) -> &Grid {
        &self.source.grid
    }

    /// Whether the `y`-period mismatch is below `tol`.
    pub fn is_closed(&self, tol: f64) -> bool {
        self.closedness.is_some_and(|c| c <= tol)
    }

    /// `Im f̂` with the real part dropped.
    pub fn im_f_hat(&self) -> Vec<Quaternion> {
        self.f_hat.iter().map(|q| q.im()).collect()
    }

    pub fn mean_curvature(&self) -> Result<CurvatureReport> {
        mean_curvature(&self.f_hat, self.grid())
    }

    /// Largest `||N̂| − 1| + |Re N̂|`.
    pub fn n_hat_defect(&self) -> f64 {
        self.n_hat
            .iter()
            .map(|n| (n.norm() - 1.0).abs() + n.w.abs())
            .fold(0.0, f64::max)
    }

    /// Classicality residual of `f̂` as a Darboux transform of `f`.
    pub fn wedge_residual(&self) -> f64 {
        wedge_residual(
            &self.source.dfx,
            &self.source.dfy,
            &self.dfx_hat,
            &self.dfy_hat,
            &self.t,
        )
    }

    /// `max |f̂ − expected(x, y)|`.
    pub fn max_deviation(&self, expected: impl Fn(f64, f64) -> Quaternion) -> f64 {
        let g = self.grid();
        let mut worst = 0.0_f64;
        for i in 0..g.nx {
            for j in 0..g.ny {
                worst = worst.max((self.f_hat[g.index(i, j)] - expected(g.x(i), g.y(j))).norm());
            }
        }
        worst
    }

    /// `max |Im T|`, the distance of `Im f̂` from `f`.
    pub fn distance_to_source(&self) -> f64 {
        self.t.iter().map(|t| t.im().norm()).fold(0.0, f64::max)
    }

    /// Largest conformality residual of `f̂`, as in patch validation.
    pub fn conformality(&self) -> f64 {
        self.dfx_hat
            .iter()
            .zip(&self.dfy_hat)
            .map(|(a, b)| {
                let e = a.norm_sqr();
                ((e - b.norm_sqr()).abs() + 2.0 * a.dot(*b).abs()) / e
            })
            .fold(0.0, f64::max)
    }
}

/// `max |ω(∂x)η(∂y) − ω(∂y)η(∂x)|` (and the same with the factors swapped)
/// for `ω = df`, `η = T⁻¹ df♯ T⁻¹`, relative to `|df||df♯|/|T|²`. Vanishes
/// exactly when `f♯ = f + T` is a classical Darboux transform.
pub fn wedge_residual(
    dfx: &[Quaternion],
    dfy: &[Quaternion],
    dgx: &[Quaternion],
    dgy: &[Quaternion],
    t: &[Quaternion],
) -> f64 {
    let mut worst = 0.0_f64;
    for k in 0..t.len() {
        let Ok(ti) = t[k].inverse() else {
            return f64::INFINITY;
        };
        let ex = ti * dgx[k] * ti;
        let ey = ti * dgy[k] * ti;
        let r1 = (dfx[k] * ey - dfy[k] * ex).norm();
        let r2 = (ex * dfy[k] - ey * dfx[k]).norm();
        let scale = dfx[k].norm() * dgx[k].norm() / t[k].norm_sqr();
        worst = worst.max(r1.max(r2) / scale);
    }
    worst
}

fn normalized(v: ComplexPair) -> ComplexPair {
    v * (1.0 / v.max_abs())
}

/// Transports a section through knots on a straight line, renormalizing
/// between knots so that exponential growth cannot overflow.
fn sweep_line<F: SurfaceField>(
    form: &ConnectionForm<F>,
    points: &[(f64, f64)],
    v0: ComplexPair,
    tol: Tolerance,
) -> Result<Vec<ComplexPair>> {
    let mut out = Vec::with_capacity(points.len());
    let mut v = normalized(v0);
    out.push(v);
    for w in points.windows(2) {
        v = normalized(transport_segment(form, w[0], w[1], v, tol)?);
        out.push(v);
    }
    Ok(out)
}

/// Section values on the grid (row-major) plus one extra value per column
/// at `y0 + period` when the grid is periodic.
struct SectionGrid {
    values: Vec<ComplexPair>,
    closing: Vec<ComplexPair>,
}

fn sweep<F: SurfaceField>(
    form: &ConnectionForm<F>,
    grid: &Grid,
    initial: ComplexPair,
    base: usize,
    opts: &TransformOptions,
) -> Result<SectionGrid> {
    let ys = grid.ys_closed();
    let xs = grid.xs();
    let (nx, ny) = (grid.nx, grid.ny);
    let mut values = alloc::vec![ComplexPair::default(); nx * ny];
    let mut closing = Vec::new();
    match opts.order {
        SweepOrder::XThenY => {
            let row = along_x_from(form, &xs, grid.y0, base, initial, opts.tol)?;
            for i in 0..nx {
                let pts: Vec<(f64, f64)> = ys.iter().map(|&y| (xs[i], y)).collect();
                let col = sweep_line(form, &pts, row[i], opts.tol)?;
                values[i * ny..(i + 1) * ny].copy_from_slice(&col[..ny]);
                if grid.y_periodic {
                    closing.push(col[ny]);
                }
            }
        }
        SweepOrder::YThenX => {
            let pts: Vec<(f64, f64)> = ys.iter().map(|&y| (xs[base], y)).collect();
            let col = sweep_line(form, &pts, initial, opts.tol)?;
            let rows = if grid.y_periodic { ny + 1 } else { ny };
            let mut closing_rows = alloc::vec![ComplexPair::default(); nx];
            for (j, &start) in col.iter().enumerate().take(rows) {
                let row = along_x_from(form, &xs, ys[j], base, start, opts.tol)?;
                for i in 0..nx {
                    if j < ny {
                        values[i * ny + j] = row[i];
                    } else {
                        closing_rows[i] = row[i];
                    }
                }
            }
            if grid.y_periodic {
                closing = closing_rows;
            }
        }
    }
    Ok(SectionGrid { values, closing })
}

/// Section along the row `y`, starting from `v` at column `base`.
fn along_x_from<F: SurfaceField>(
    form: &ConnectionForm<F>,
    xs: &[f64],
    y: f64,
    base: usize,
    v: ComplexPair,
    tol: Tolerance,
) -> Result<Vec<ComplexPair>> {
    let fwd: Vec<(f64, f64)> = xs[base..].iter().map(|&x| (x, y)).collect();
    let bwd: Vec<(f64, f64)> = xs[..=base].iter().rev().map(|&x| (x, y)).collect();
    let f = sweep_line(form, &fwd, v, tol)?;
    let b = sweep_line(form, &bwd, v, tol)?;
    let mut row: Vec<ComplexPair> = b.into_iter().rev().collect();
    row.extend_from_slice(&f[1..]);
    Ok(row)
}

fn assemble<F: SurfaceField>(
    form: &ConnectionForm<F>,
    grid: &Grid,
    sections: SectionGrid,
    kind: TransformKind,
    base: usize,
) -> Result<TransformResult> {
    let p = &form.param;
    let source = ConformalPatch::from_field(&form.field, *grid, "source")?;
    let n = grid.len();
    let mut r = TransformResult {
        param: *p,
        kind,
        alpha: sections.values,
        t: Vec::with_capacity(n),
        f_hat: Vec::with_capacity(n),
        n_hat: Vec::with_capacity(n),
        dfx_hat: Vec::with_capacity(n),
        dfy_hat: Vec::with_capacity(n),
        dnx_hat: Vec::with_capacity(n),
        dny_hat: Vec::with_capacity(n),
        real_part: RealPartStats {
            mean: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        },
        closedness: None,
        base_column: base,
        source,
    };
    for k in 0..n {
        let ts = transform_sample(r.alpha[k], &r.source.sample_at(k / grid.ny, k % grid.ny), p)?;
        r.t.push(ts.t);
        r.f_hat.push(ts.hat.f);
        r.n_hat.push(ts.hat.n);
        r.dfx_hat.push(ts.hat.dfx);
        r.dfy_hat.push(ts.hat.dfy);
        r.dnx_hat.push(ts.hat.dnx);
        r.dny_hat.push(ts.hat.dny);
        let re = ts.hat.f.w;
        r.real_part.mean += re / n as f64;
        r.real_part.min = r.real_part.min.min(re);
        r.real_part.max = r.real_part.max.max(re);
    }
    if grid.y_periodic {
        let mut worst = 0.0_f64;
        for (i, v) in sections.closing.iter().enumerate() {
            let s = form.field.sample(grid.x(i), grid.y0 + grid.y_len);
            let t_end = transform_sample(*v, &s, p)?.t;
            worst = worst.max((s.f + t_end - r.f_hat[grid.index(i, 0)]).norm());
        }
        r.closedness = Some(worst);
    }
    Ok(r)
}

/// The μ-Darboux transform given by the parallel section with value
/// `initial` at the basepoint `(x_base, y0)`.
pub fn mu_darboux<F: SurfaceField>(
    form: &ConnectionForm<F>,
    grid: &Grid,
    initial: ComplexPair,
    opts: &TransformOptions,
) -> Result<TransformResult> {
    form.param.require_not_one()?;
    grid.check()?;
    if initial.norm() == 0.0 || !initial.is_finite() {
        return Err(Error::InvalidArgument(
            "initial section must be nonzero".into(),
        ));
    }
    let base = opts.base(grid);
    let sections = sweep(form, grid, initial, base, opts)?;
    assemble(form, grid, sections, TransformKind::Generic, base)
}

/// Eigen-solutions `α₊`, `α₋` at `(x, y0)` when the holonomy is a multiple
/// of the identity: they are the eigenvectors of `dH/dμ`, normalized to
/// `α₀ = 1` where possible. Ordered by decreasing `Im(λ / h)` for the
/// eigenvalues `λ` of `dH/dμ`.
pub fn resonance_basis<F: SurfaceField + Clone>(
    form: &ConnectionForm<F>,
    x: f64,
    tol: Tolerance,
) -> Result<[ComplexPair; 2]> {
    let h = holonomy_y(form, x, tol)?;
    if !(h.degenerate && h.diagonalizable) {
        return Err(Error::NotResonant);
    }
    let mu = form.param.mu;
    let eps = 1e-5 * mu.norm();
    let at = |m: C64| -> Result<Mat2> {
        let f = ConnectionForm::new(form.field.clone(), SpectralParam::new(m)?);
        Ok(holonomy_y(&f, x, tol)?.matrix)
    };
    let d = at(mu + eps)? - at(mu - eps)?;
    let e = d.eigen();
    let key = |l: C64| (l / h.h_plus).im;
    let (v0, v1) = if key(e.values[0]) >= key(e.values[1]) {
        (e.vectors[0], e.vectors[1])
    } else {
        (e.vectors[1], e.vectors[0])
    };
    let unit_first = |v: ComplexPair| {
        if v.a0.norm() > 1e-8 {
            v * v.a0.inv()
        } else {
            v
        }
    };
    Ok([unit_first(v0), unit_first(v1)])
}

/// A closed μ-Darboux transform: from a holonomy eigenline, or from a mix
/// of the two eigen-solutions at a resonance point.
///
/// Eigenlines are computed column by column from the local holonomy (its
/// eigenvalues do not depend on the column), so no section is ever
/// transported across `x`. This keeps the subdominant branch accurate when
/// the two solutions grow at very different rates in `x`.
pub fn closed_mu_darboux<F: SurfaceField + Clone>(
    form: &ConnectionForm<F>,
    grid: &Grid,
    which: Closure,
    opts: &TransformOptions,
) -> Result<TransformResult> {
    form.param.require_not_one()?;
    grid.check()?;
    if !grid.y_periodic || form.field.y_period().is_none() {
        return Err(Error::NotPeriodic);
    }
    let base = opts.base(grid);
    let h0 = holonomy_y(form, grid.x(base), opts.tol)?;
    if !h0.diagonalizable {
        return Err(Error::NonDiagonalizable);
    }
    let result = if h0.degenerate {
        let [ap, am] = resonance_basis(form, grid.x(base), opts.tol)?;
        let (mp, mm) = match which {
            Closure::Plus => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            Closure::Minus => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
            Closure::Mix(p, m) => (p, m),
        };
        let initial = ap * mp + am * mm;
        let sections = sweep(form, grid, initial, base, opts)?;
        assemble(form, grid, sections, TransformKind::Closed(which), base)?
    } else {
        let target = match which {
            Closure::Plus => h0.h_plus,
            Closure::Minus => h0.h_minus,
            Closure::Mix(..) => return Err(Error::NotResonant),
        };
        let sections = per_column_eigen(form, grid, target, opts.tol)?;
        assemble(form, grid, sections, TransformKind::Closed(which), base)?
    };
    let c = result.closedness.unwrap_or(f64::INFINITY);
    if c > opts.closed_tol {
        return Err(Error::NotClosed(c));
    }
    Ok(result)
}

fn per_column_eigen<F: SurfaceField>(
    form: &ConnectionForm<F>,
    grid: &Grid,
    target: C64,
    tol: Tolerance,
) -> Result<SectionGrid> {
    let ys = grid.ys_closed();
    let ny = grid.ny;
    let mut values = Vec::with_capacity(grid.len());
    let mut closing = Vec::with_capacity(grid.nx);
    for i in 0..grid.nx {
        let phis = fundamental_y(form, grid.x(i), &ys, tol)?;
        let h = HolonomyData::from_matrix(phis[ny], grid.x(i), grid.y0);
        let k = if (h.h_plus - target).norm() <= (h.h_minus - target).norm() {
            0
        } else {
            1
        };
        let v = h.vectors[k];
        for phi in &phis[..ny] {
            values.push(normalized(*phi * v));
        }
        closing.push(normalized(phis[ny] * v));
    }
    Ok(SectionGrid { values, closing })
}

/// Distances of closed transforms from the source surface along a ray of
/// spectral parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    /// `(μ, max_p |Im f̂ − f|)`, minimized over the two closed transforms.
    pub samples: Vec<(C64, f64)>,
}

impl LimitReport {
    /// Whether the distances decrease along the samples.
    pub fn is_monotone(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 < w[0].1)
    }

    /// Least-squares slope of `log distance` against `log |μ|`.
    pub fn log_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .map(|(m, d)| (m.norm().ln(), d.ln()))
            .collect();
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / n, sy / n);
        let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| {
            (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx) * (p.0 - mx))
        });
        num / den
    }
}

/// Closed transforms at each `μ` in `mus`, reporting how far `Im f̂` is from
/// `f`.
pub fn limit_to_source<F: SurfaceField + Clone>(
    field: &F,
    grid: &Grid,
    mus: &[C64],
    opts: &TransformOptions,
) -> Result<LimitReport> {
    let mut samples = Vec::with_capacity(mus.len());
    for &mu in mus {
        let form = ConnectionForm::new(field.clone(), SpectralParam::new(mu)?);
        let mut best = f64::INFINITY;
        for which in [Closure::Plus, Closure::Minus] {
            let r = closed_mu_darboux(&form, grid, which, opts)?;
            best = best.min(r.distance_to_source());
        }
        samples.push((mu, best));
    }
    Ok(LimitReport { samples })
}

/// A transform evaluated anywhere: the section is carried from the nearest
/// grid vertex of a computed transform to the requested point.
#[derive(Clone, Debug)]
pub struct DarbouxField<F> {
    pub form: ConnectionForm<F>,
    pub grid: Grid,
    pub alpha: Vec<ComplexPair>,
    pub tol: Tolerance,
    /// Constant real part removed from `f̂`.
    pub real_offset: f64,
}

impl<F: SurfaceField> DarbouxField<F> {
    fn section_at(&self, x: f64, y: f64) -> ComplexPair {
        let g = &self.grid;
        let i = ((x - g.x0) / g.hx()).round().clamp(0.0, (g.nx - 1) as f64) as usize;
        let jr = ((y - g.y0) / g.hy()).round();
        let (j, yj) = if g.y_periodic {
            let n = g.ny as f64;
            let j = (((jr % n) + n) % n) as usize;
            (j, g.y0 + jr * g.hy())
        } else {
            let j = jr.clamp(0.0, (g.ny - 1) as f64) as usize;
            (j, g.y(j))
        };
        let v = self.alpha[g.index(i, j)];
        let (xi, d) = (g.x(i), ((x - g.x(i)).abs() + (y - yj).abs()));
        if d == 0.0 {
            return v;
        }
        let (dx, dy) = (x - xi, y - yj);
        let f = |t: f64, s: &ComplexPair| self.form.along(xi + t * dx, yj + t * dy, dx, dy) * *s;
        dopri5(f, 0.0, 1.0, v, self.tol, Some(1.0))
            .map(|r| r.0)
            .unwrap_or(v)
    }
}

impl<F: SurfaceField> SurfaceField for DarbouxField<F> {
    fn sample(&self, x: f64, y: f64) -> Sample {
        let s = self.form.field.sample(x, y);
        let alpha = self.section_at(x, y);
        match transform_sample(alpha, &s, &self.form.param) {
            Ok(ts) => {
                let mut h = ts.hat;
                h.f.w -= self.real_offset;
                h
            }
            Err(_) => Sample {
                f: Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN),
                ..Sample::default()
            },
        }
    }

    fn y_period(&self) -> Option<f64> {
        self.grid.y_periodic.then_some(self.grid.y_len)
    }
}

/// Conformality residual accepted by [`iterate`].
pub const ITERATE_CONFORMALITY_TOL: f64 = 1e-4;

/// Turns a closed transform into a surface that can be transformed again.
///
/// The transform is conformal in the source coordinates, with
/// `∂f̂/∂y = N̂ ∂f̂/∂x` and `H = 1` for the normal `N̂ = −T N T⁻¹`, so the
/// coordinates are kept as they are; the conformality residual is checked
/// against [`ITERATE_CONFORMALITY_TOL`]. The constant real part is removed.
pub fn iterate<F: SurfaceField>(
    form: ConnectionForm<F>,
    result: &TransformResult,
    closed_tol: f64,
) -> Result<DarbouxField<F>> {
    let g = *result.grid();
    if g.y_periodic && !result.is_closed(closed_tol) {
        return Err(Error::NotClosed(result.closedness.unwrap_or(f64::INFINITY)));
    }
    for i in 0..g.nx {
        for j in 0..g.ny {
            let k = g.index(i, j);
            let m = result.dfx_hat[k].norm().min(result.dfy_hat[k].norm());
            if !(m > 1e-8 * result.source.conformal_factor[k]) {
                return Err(Error::NotImmersed { i, j });
            }
        }
    }
    let c = result.conformality();
    if c > ITERATE_CONFORMALITY_TOL {
        return Err(Error::ConformalityLoss(c));
    }
    Ok(DarbouxField {
        form,
        grid: g,
        alpha: result.alpha.clone(),
        tol: Tolerance::relative(1e-13),
        real_offset: result.real_part.mean,
    })
}
