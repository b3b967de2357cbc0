//! Mean curvature of a gridded surface from finite-difference fundamental
//! forms.
//!
//! Derivatives are second-order central differences, the normal is
//! `f_x × f_y / |f_x × f_y|`, and `H = (eG − 2fF + gE) / (2(EG − F²))`. With
//! this sign the unit sphere with inward normal has `H = 1`.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::patch::Grid;
use crate::quat::Quaternion;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub nx: usize,
    pub ny: usize,
    /// Per-vertex `H`, `NaN` where the stencil does not fit.
    pub values: Vec<f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `max |H − 1|` over the evaluated vertices.
    pub max_deviation: f64,
    pub count: usize,
}

impl CurvatureReport {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny + j]
    }
}

type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Mean curvature of the imaginary parts of `points` (row-major on `grid`)
/// at every vertex whose central stencil fits, restricted to columns
/// `i_range` when given.
pub fn mean_curvature(points: &[Quaternion], grid: &Grid) -> Result<CurvatureReport> {
    mean_curvature_in(points, grid, 1..grid.nx.saturating_sub(1))
}

pub fn mean_curvature_in(
    points: &[Quaternion],
    grid: &Grid,
    cols: core::ops::Range<usize>,
) -> Result<CurvatureReport> {
    let (nx, ny) = (grid.nx, grid.ny);
    if points.len() != grid.len() {
        return Err(Error::InvalidArgument(
            "point count does not match the grid".into(),
        ));
    }
    if nx < 3 || ny < 3 {
        return Err(Error::InvalidArgument(
            "curvature needs at least 3×3 vertices".into(),
        ));
    }
    let (hx, hy) = (grid.hx(), grid.hy());
    let p = |i: usize, j: usize| points[grid.index(i, j)].vector();
    let mut values = alloc::vec![f64::NAN; nx * ny];
    let (mut sum, mut count) = (0.0, 0usize);
    let (mut lo, mut hi, mut dev) = (f64::INFINITY, f64::NEG_INFINITY, 0.0_f64);
    let cols = cols.start.max(1)..cols.end.min(nx - 1);
    for i in cols {
        for j in 0..ny {
            let (jm, jp) = if grid.y_periodic {
                ((j + ny - 1) % ny, (j + 1) % ny)
            } else if j == 0 || j + 1 == ny {
                continue;
            } else {
                (j - 1, j + 1)
            };
            let c = p(i, j);
            let fx = scale(sub(p(i + 1, j), p(i - 1, j)), 0.5 / hx);
            let fy = scale(sub(p(i, jp), p(i, jm)), 0.5 / hy);
            let fxx = scale(
                sub(sub(p(i + 1, j), c), sub(c, p(i - 1, j))),
                1.0 / (hx * hx),
            );
            let fyy = scale(sub(sub(p(i, jp), c), sub(c, p(i, jm))), 1.0 / (hy * hy));
            let fxy = scale(
                sub(
                    sub(p(i + 1, jp), p(i + 1, jm)),
                    sub(p(i - 1, jp), p(i - 1, jm)),
                ),
                0.25 / (hx * hy),
            );
            let (e1, f1, g1) = (dot(fx, fx), dot(fx, fy), dot(fy, fy));
            let det = e1 * g1 - f1 * f1;
            if !(det > 1e-14 * e1 * g1) || !det.is_finite() {
                return Err(Error::DegenerateMetric { i, j });
            }
            let n = cross(fx, fy);
            let n = scale(n, 1.0 / dot(n, n).sqrt());
            let (e2, f2, g2) = (dot(fxx, n), dot(fxy, n), dot(fyy, n));
            let h = (e2 * g1 - 2.0 * f2 * f1 + g2 * e1) / (2.0 * det);
            values[i * ny + j] = h;
            sum += h;
            count += 1;
            lo = lo.min(h);
            hi = hi.max(h);
            dev = dev.max((h - 1.0).abs());
        }
    }
    Ok(CurvatureReport {
        nx,
        ny,
        values,
        mean: if count > 0 {
            sum / count as f64
        } else {
            f64::NAN
        },
        min: lo,
        max: hi,
        max_deviation: dev,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patch::{ConformalPatch, Grid};
    use crate::surfaces::Cylinder;

    fn sphere(theta: f64, phi: f64) -> Quaternion {
        // φ runs clockwise so that f_θ × f_φ points inward
        Quaternion::imaginary(
            theta.sin() * phi.cos(),
            -theta.sin() * phi.sin(),
            theta.cos(),
        )
    }

    #[test]
    fn unit_sphere_has_h_one() {
        let h = 1e-3;
        let grid = Grid {
            nx: 5,
            ny: 5,
            x0: 1.0,
            x1: 1.0 + 4.0 * h,
            y0: 0.3,
            y_len: 4.0 * h,
            y_periodic: false,
        };
        let pts: Vec<Quaternion> = (0..25)
            .map(|k| sphere(grid.x(k / 5), grid.y(k % 5)))
            .collect();
        let r = mean_curvature(&pts, &grid).unwrap();
        assert_eq!(r.count, 9);
        assert!(r.max_deviation < 1e-6, "{}", r.max_deviation);
    }

    #[test]
    fn cylinder_is_second_order() {
        let err = |ny| {
            let g = Grid::periodic(8, ny, 0.0, 1.0).unwrap();
            let p = ConformalPatch::from_field(&Cylinder, g, "c").unwrap();
            mean_curvature(&p.f, &g).unwrap().max_deviation
        };
        let (a, b) = (err(256), err(512));
        assert!(a < 2e-4 && (a / b - 4.0).abs() < 0.05, "{a} {b}");
        let fine = Grid {
            nx: 4,
            ny: 4,
            x0: 0.0,
            x1: 3e-3,
            y0: 0.0,
            y_len: 3e-3,
            y_periodic: false,
        };
        let p = ConformalPatch::from_field(&Cylinder, fine, "c");
        assert!(p.is_ok());
        let pts: Vec<Quaternion> = (0..16)
            .map(|k| crate::patch::SurfaceField::sample(&Cylinder, fine.x(k / 4), fine.y(k % 4)).f)
            .collect();
        assert!(mean_curvature(&pts, &fine).unwrap().max_deviation < 1e-6);
    }

    #[test]
    fn collapsed_grid_is_degenerate() {
        let g = Grid {
            nx: 3,
            ny: 3,
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y_len: 1.0,
            y_periodic: false,
        };
        let pts = alloc::vec![Quaternion::I; 9];
        assert!(matches!(
            mean_curvature(&pts, &g),
            Err(Error::DegenerateMetric { .. })
        ));
    }
}
