//! Classical Darboux transforms of an `H = 1` surface through the Riccati
//! equation
//!
//! ```text
//! dT = r T dg T − df,   (T − N)² = r⁻¹ − 1,   g = f + N,
//! ```
//!
//! with `f♯ = f + T`. The constraint is a first integral of the flow. For
//! `r ∈ (0, 1)` the solution is `T = N ± √(r⁻¹ − 1)`; otherwise `T − N` is
//! imaginary and the transform is the μ-Darboux transform at a real
//! `μ = â ∓ √(â² − 1)`, `â = 1 − 2r`.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::curvature::{mean_curvature, CurvatureReport};
use crate::darboux::{mu_darboux, wedge_residual, SweepOrder, TransformOptions, TransformResult};
use crate::family::ConnectionForm;
use crate::ode::{dopri5, Tolerance};
use crate::patch::{ConformalPatch, Grid, SurfaceField};
use crate::quat::{ComplexPair, Quaternion};
use crate::spectral::SpectralParam;
use crate::{Error, Result, C64};

/// `|T|` beyond this aborts the integration.
pub const BLOW_UP: f64 = 1e8;

/// Which solution of `(T₀ − N)² = r⁻¹ − 1` to start from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RiccatiBranch {
    /// `T₀ = N + s·√(r⁻¹ − 1)` for `r ∈ (0, 1)`, `s = ±1`.
    Real(f64),
    /// `T₀ = N + √(1 − r⁻¹)·v` for `r ∉ [0, 1]`, `v` unit imaginary.
    Imaginary(Quaternion),
}

impl RiccatiBranch {
    /// `+1` on the real branch, `k` on the imaginary one.
    pub fn default_for(r: f64) -> Self {
        if r > 0.0 && r < 1.0 {
            RiccatiBranch::Real(1.0)
        } else {
            RiccatiBranch::Imaginary(Quaternion::K)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiccatiSpec {
    pub r: f64,
    pub branch: RiccatiBranch,
    /// Grid column of the basepoint; the basepoint row is `y0`.
    pub base_column: usize,
    pub x0: f64,
    pub y0: f64,
    pub n0: Quaternion,
    pub t0: Quaternion,
}

impl RiccatiSpec {
    /// `|(T₀ − N)² − (r⁻¹ − 1)|`.
    pub fn constraint_residual(&self) -> f64 {
        constraint(self.t0, self.n0, self.r)
    }
}

fn constraint(t: Quaternion, n: Quaternion, r: f64) -> f64 {
    let d = t - n;
    (d * d - Quaternion::real(r.recip() - 1.0)).norm()
}

/// Initial value of `T` at `(x(base_column), y0)`.
pub fn init_t<F: SurfaceField>(
    field: &F,
    grid: &Grid,
    base_column: Option<usize>,
    r: f64,
    branch: RiccatiBranch,
) -> Result<RiccatiSpec> {
    if !r.is_finite() || r == 0.0 || r == 1.0 {
        return Err(Error::InvalidR(r));
    }
    grid.check()?;
    let base = resolve_base(grid, base_column)?;
    let (x0, y0) = (grid.x(base), grid.y0);
    let n0 = field.sample(x0, y0).n;
    let inner = r > 0.0 && r < 1.0;
    let t0 = match branch {
        RiccatiBranch::Real(s) if inner => {
            if s != 1.0 && s != -1.0 {
                return Err(Error::InvalidArgument("sign must be ±1".into()));
            }
            n0 + Quaternion::real(s * (r.recip() - 1.0).sqrt())
        }
        RiccatiBranch::Imaginary(v) if !inner => {
            let v = v.im();
            if !(v.norm() > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(
                    "direction must be a nonzero imaginary quaternion".into(),
                ));
            }
            n0 + v * ((1.0 - r.recip()).sqrt() / v.norm())
        }
        _ => return Err(Error::InvalidR(r)),
    };
    Ok(RiccatiSpec {
        r,
        branch,
        base_column: base,
        x0,
        y0,
        n0,
        t0,
    })
}

fn resolve_base(grid: &Grid, base: Option<usize>) -> Result<usize> {
    match base {
        Some(b) if b < grid.nx => Ok(b),
        Some(b) => Err(Error::InvalidArgument(alloc::format!(
            "base column {b} outside the grid"
        ))),
        None => Ok((0..grid.nx)
            .min_by(|&a, &b| grid.x(a).abs().total_cmp(&grid.x(b).abs()))
            .unwrap_or(0)),
    }
}

/// Riccati right-hand side `r T dg T − df` in the direction `(dx, dy)`.
fn rhs<F: SurfaceField>(
    field: &F,
    r: f64,
    x: f64,
    y: f64,
    dx: f64,
    dy: f64,
    t: Quaternion,
) -> Quaternion {
    let s = field.sample(x, y);
    let df = s.dfx * dx + s.dfy * dy;
    let dg = df + s.dnx * dx + s.dny * dy;
    t * dg * t * r - df
}

fn segment<F: SurfaceField>(
    field: &F,
    r: f64,
    from: (f64, f64),
    to: (f64, f64),
    t: Quaternion,
    tol: Tolerance,
) -> Result<Quaternion> {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let f = |s: f64, q: &Quaternion| rhs(field, r, from.0 + s * dx, from.1 + s * dy, dx, dy, *q);
    let (out, _) = dopri5(f, 0.0, 1.0, t, tol, None).map_err(|e| match e {
        Error::StepUnderflow { .. } if t.norm() > 1e3 => Error::BlowUp(t.norm()),
        other => other,
    })?;
    let m = out.norm();
    if !(m <= BLOW_UP) {
        return Err(Error::BlowUp(m));
    }
    Ok(out)
}

fn line<F: SurfaceField>(
    field: &F,
    r: f64,
    pts: &[(f64, f64)],
    t0: Quaternion,
    tol: Tolerance,
) -> Result<Vec<Quaternion>> {
    let mut out = Vec::with_capacity(pts.len());
    let mut t = t0;
    out.push(t);
    for w in pts.windows(2) {
        t = segment(field, r, w[0], w[1], t, tol)?;
        out.push(t);
    }
    Ok(out)
}

fn row<F: SurfaceField>(
    field: &F,
    r: f64,
    xs: &[f64],
    y: f64,
    base: usize,
    t: Quaternion,
    tol: Tolerance,
) -> Result<Vec<Quaternion>> {
    let fwd: Vec<(f64, f64)> = xs[base..].iter().map(|&x| (x, y)).collect();
    let bwd: Vec<(f64, f64)> = xs[..=base].iter().rev().map(|&x| (x, y)).collect();
    let f = line(field, r, &fwd, t, tol)?;
    let b = line(field, r, &bwd, t, tol)?;
    let mut out: Vec<Quaternion> = b.into_iter().rev().collect();
    out.extend_from_slice(&f[1..]);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiccatiOptions {
    pub tol: Tolerance,
    pub order: SweepOrder,
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::relative(1e-12),
            order: SweepOrder::XThenY,
        }
    }
}

/// A classical Darboux transform sampled on the source grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiResult {
    pub spec: RiccatiSpec,
    pub source: ConformalPatch,
    pub t: Vec<Quaternion>,
    pub f_sharp: Vec<Quaternion>,
    pub dfx_sharp: Vec<Quaternion>,
    pub dfy_sharp: Vec<Quaternion>,
    /// `max |(T − N)² − (r⁻¹ − 1)|` over the grid.
    pub first_integral: f64,
    /// `max |T(x, y0 + period) − T(x, y0)|` for periodic grids.
    pub closedness: Option<f64>,
}

impl RiccatiResult {
    pub fn grid(&self) -> &Grid {
        &self.source.grid
    }

    /// Mean curvature of `Im f♯`.
    pub fn mean_curvature(&self) -> Result<CurvatureReport> {
        mean_curvature(&self.f_sharp, self.grid())
    }

    pub fn wedge_residual(&self) -> f64 {
        wedge_residual(
            &self.source.dfx,
            &self.source.dfy,
            &self.dfx_sharp,
            &self.dfy_sharp,
            &self.t,
        )
    }

    /// `max |f♯ − f̂|` against a transform on the same grid.
    pub fn distance_to(&self, other: &TransformResult) -> f64 {
        self.f_sharp
            .iter()
            .zip(&other.f_hat)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |f♯ − expected(x, y)|`.
    pub fn max_deviation(&self, expected: impl Fn(f64, f64) -> Quaternion) -> f64 {
        let g = self.grid();
        let mut worst = 0.0_f64;
        for i in 0..g.nx {
            for j in 0..g.ny {
                worst = worst.max((self.f_sharp[g.index(i, j)] - expected(g.x(i), g.y(j))).norm());
            }
        }
        worst
    }
}

/// Solves the Riccati equation over `grid` from the initial data in `spec`.
pub fn integrate_riccati<F: SurfaceField>(
    field: &F,
    grid: &Grid,
    spec: &RiccatiSpec,
    opts: &RiccatiOptions,
) -> Result<RiccatiResult> {
    grid.check()?;
    let (nx, ny) = (grid.nx, grid.ny);
    if spec.base_column >= nx {
        return Err(Error::InvalidArgument(
            "base column outside the grid".into(),
        ));
    }
    let (r, tol, base) = (spec.r, opts.tol, spec.base_column);
    let xs = grid.xs();
    let ys = grid.ys_closed();
    let mut t = alloc::vec![Quaternion::ZERO; nx * ny];
    let mut closing = Vec::new();
    match opts.order {
        SweepOrder::XThenY => {
            let first = row(field, r, &xs, grid.y0, base, spec.t0, tol)?;
            for i in 0..nx {
                let pts: Vec<(f64, f64)> = ys.iter().map(|&y| (xs[i], y)).collect();
                let col = line(field, r, &pts, first[i], tol)?;
                t[i * ny..(i + 1) * ny].copy_from_slice(&col[..ny]);
                if grid.y_periodic {
                    closing.push(col[ny]);
                }
            }
        }
        SweepOrder::YThenX => {
            let pts: Vec<(f64, f64)> = ys.iter().map(|&y| (xs[base], y)).collect();
            let col = line(field, r, &pts, spec.t0, tol)?;
            closing = alloc::vec![Quaternion::ZERO; nx];
            for (j, &start) in col.iter().enumerate() {
                let rw = row(field, r, &xs, ys[j], base, start, tol)?;
                for i in 0..nx {
                    if j < ny {
                        t[i * ny + j] = rw[i];
                    } else {
                        closing[i] = rw[i];
                    }
                }
            }
            if !grid.y_periodic {
                closing.clear();
            }
        }
    }
    let source = ConformalPatch::from_field(field, *grid, "source")?;
    let n = grid.len();
    let mut out = RiccatiResult {
        spec: *spec,
        t: Vec::with_capacity(n),
        f_sharp: Vec::with_capacity(n),
        dfx_sharp: Vec::with_capacity(n),
        dfy_sharp: Vec::with_capacity(n),
        first_integral: 0.0,
        closedness: None,
        source,
    };
    for (k, &tk) in t.iter().enumerate() {
        let s = out.source.sample_at(k / ny, k % ny);
        let x = grid.x(k / ny);
        let y = grid.y(k % ny);
        out.first_integral = out.first_integral.max(constraint(tk, s.n, r));
        out.f_sharp.push(s.f + tk);
        out.dfx_sharp
            .push(s.dfx + rhs(field, r, x, y, 1.0, 0.0, tk));
        out.dfy_sharp
            .push(s.dfy + rhs(field, r, x, y, 0.0, 1.0, tk));
        out.t.push(tk);
    }
    if grid.y_periodic {
        let worst = closing
            .iter()
            .enumerate()
            .map(|(i, c)| (*c - t[grid.index(i, 0)]).norm())
            .fold(0.0, f64::max);
        out.closedness = Some(worst);
    }
    Ok(out)
}

/// `â = 1 − 2r` and the two values of `μ` with `(μ + μ⁻¹)/2 = â`: real
/// and reciprocal for `r ∉ [0, 1]`, conjugate on the unit circle for
/// `r ∈ (0, 1)`. The first has `|μ| ≤ 1` (or `Im μ ≥ 0`).
pub fn correspondence(r: f64) -> Result<[C64; 2]> {
    if !r.is_finite() || r == 0.0 || r == 1.0 {
        return Err(Error::InvalidR(r));
    }
    let a = 1.0 - 2.0 * r;
    if r > 0.0 && r < 1.0 {
        let s = (1.0 - a * a).sqrt();
        Ok([C64::new(a, s), C64::new(a, -s)])
    } else {
        // a ∓ √(a² − 1) without cancellation
        let big = a + a.signum() * (a * a - 1.0).sqrt();
        Ok([C64::new(big.recip(), 0.0), C64::new(big, 0.0)])
    }
}

/// The spectral parameter and initial section at the basepoint for which
/// the μ-Darboux transform reproduces the Riccati solution started at
/// `spec.t0`.
///
/// With `b̂ = 2(T⁻¹ + rN)` one has `T⁻¹ = ½(N(â − 1) + b̂)`. On the real
/// branch `b̂` is a real number and `μ = â + i b̂`; otherwise `b̂` is
/// imaginary, `μ = â − |b̂|` and the section rotates `i` onto `b̂/|b̂|`.
pub fn matching_transform(spec: &RiccatiSpec) -> Result<(SpectralParam, ComplexPair)> {
    let a = 1.0 - 2.0 * spec.r;
    let b_hat = (spec.t0.inverse()? + spec.n0 * spec.r) * 2.0;
    match spec.branch {
        RiccatiBranch::Real(_) => {
            let p = SpectralParam::new(C64::new(a, b_hat.w))?;
            Ok((p, ComplexPair::e0()))
        }
        RiccatiBranch::Imaginary(_) => {
            let b0 = b_hat.im().norm();
            let p = SpectralParam::real(a - b0)?;
            let rot = Quaternion::rotation_between(Quaternion::I, b_hat.im());
            Ok((p, rot.to_pair()))
        }
    }
}

/// One row of [`cmc_classical_panel`].
#[derive(Clone, Debug, PartialEq)]
pub struct PanelEntry {
    pub r: f64,
    pub mu: Option<C64>,
    /// `max |H − 1|` of `Im f♯` over the grid.
    pub curvature_error: Option<f64>,
    pub wedge: Option<f64>,
    /// `max |f♯ − f̂|` against the matching μ-Darboux transform.
    pub match_error: Option<f64>,
    pub first_integral: Option<f64>,
    pub error: Option<Error>,
}

/// Integrates the Riccati equation for each `r`, measures `H` and the
/// classicality residual of `f♯`, and compares with the matching μ-Darboux
/// transform. Failures are recorded per entry.
pub fn cmc_classical_panel<F: SurfaceField + Clone>(
    field: &F,
    grid: &Grid,
    rs: &[f64],
    opts: &RiccatiOptions,
) -> Vec<PanelEntry> {
    rs.iter()
        .map(|&r| {
            let mut e = PanelEntry {
                r,
                mu: None,
                curvature_error: None,
                wedge: None,
                match_error: None,
                first_integral: None,
                error: None,
            };
            if let Err(err) = panel_entry(field, grid, r, opts, &mut e) {
                e.error = Some(err);
            }
            e
        })
        .collect()
}

fn panel_entry<F: SurfaceField + Clone>(
    field: &F,
    grid: &Grid,
    r: f64,
    opts: &RiccatiOptions,
    e: &mut PanelEntry,
) -> Result<()> {
    let spec = init_t(field, grid, None, r, RiccatiBranch::default_for(r))?;
    let res = integrate_riccati(field, grid, &spec, opts)?;
    e.first_integral = Some(res.first_integral);
    e.wedge = Some(res.wedge_residual());
    e.curvature_error = Some(res.mean_curvature()?.max_deviation);
    let (p, alpha) = matching_transform(&spec)?;
    e.mu = Some(p.mu);
    let form = ConnectionForm::new(field.clone(), p);
    let topts = TransformOptions {
        tol: opts.tol,
        order: opts.order,
        base_column: Some(spec.base_column),
        ..TransformOptions::default()
    };
    let dt = mu_darboux(&form, grid, alpha, &topts)?;
    e.match_error = Some(res.distance_to(&dt));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::Cylinder;

    fn grid() -> Grid {
        Grid::periodic(9, 32, -0.5, 0.5).unwrap()
    }

    #[test]
    fn initial_values() {
        let g = grid();
        let s = init_t(&Cylinder, &g, None, 0.5, RiccatiBranch::Real(1.0)).unwrap();
        assert!((s.t0 - s.n0 - Quaternion::ONE).norm() < 1e-15);
        let s = init_t(
            &Cylinder,
            &g,
            None,
            -1.0,
            RiccatiBranch::Imaginary(Quaternion::K),
        )
        .unwrap();
        assert!((s.t0 - s.n0 - Quaternion::K * 2f64.sqrt()).norm() < 1e-15);
        assert!(s.constraint_residual() < 1e-12);
        assert_eq!(
            init_t(&Cylinder, &g, None, 1.0, RiccatiBranch::Real(1.0)),
            Err(Error::InvalidR(1.0))
        );
        assert_eq!(
            init_t(
                &Cylinder,
                &g,
                None,
                0.5,
                RiccatiBranch::Imaginary(Quaternion::K)
            ),
            Err(Error::InvalidR(0.5))
        );
    }

    #[test]
    fn half_gives_shifted_parallel_surface() {
        let g = grid();
        let s = init_t(&Cylinder, &g, None, 0.5, RiccatiBranch::Real(1.0)).unwrap();
        let res = integrate_riccati(&Cylinder, &g, &s, &RiccatiOptions::default()).unwrap();
        let dev = res.max_deviation(|x, y| {
            let c = Cylinder.sample(x, y);
            c.f + c.n + Quaternion::ONE
        });
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn correspondence_values() {
        let m = correspondence(-1.0).unwrap();
        assert!((m[0].re - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((m[1].re - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-14);
        let m = correspondence(0.5).unwrap();
        assert!((m[0] - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn matches_real_mu_transform() {
        let g = grid();
        let s = init_t(
            &Cylinder,
            &g,
            None,
            -1.0,
            RiccatiBranch::Imaginary(Quaternion::new(0.0, 0.3, -0.5, 0.8)),
        )
        .unwrap();
        let (p, alpha) = matching_transform(&s).unwrap();
        assert!((p.mu.re - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
        let res = integrate_riccati(&Cylinder, &g, &s, &RiccatiOptions::default()).unwrap();
        assert!(res.first_integral < 1e-9, "{}", res.first_integral);
        let form = ConnectionForm::new(Cylinder, p);
        let dt = mu_darboux(&form, &g, alpha, &TransformOptions::default()).unwrap();
        assert!((dt.t[g.index(s.base_column, 0)] - s.t0).norm() < 1e-12);
        assert!(res.distance_to(&dt) < 1e-8, "{}", res.distance_to(&dt));
    }
}
