//! Holonomy eigen-data over the spectral plane: multipliers, eigenlines,
//! resonance points, asymptotics at `μ → 0, ∞` and the reality involution
//! `μ ↦ μ̄⁻¹`.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::darboux::resonance_basis;
use crate::family::ConnectionForm;
use crate::holonomy::{holonomy_y, set_distance_rel, HolonomyData};
use crate::mat2::{Mat2, Ratio};
use crate::ode::Tolerance;
use crate::patch::SurfaceField;
use crate::quat::ComplexPair;
use crate::spectral::SpectralParam;
use crate::{Error, Result, C64};

/// Radius of the disk around `μ = 1` left out of default panels.
pub const EXCLUDE_NEAR_ONE: f64 = 0.05;
/// `||h| − 1|` below this counts as unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub tol: Tolerance,
    /// Line `x = x0` on which holonomies are computed.
    pub x0: f64,
    /// Width below which a resonance bracket counts as converged.
    pub refine_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::relative(1e-12),
            x0: 0.0,
            refine_tol: 1e-12,
        }
    }
}

/// Holonomy eigen-data at one spectral value.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanSample {
    pub mu: C64,
    pub h: [C64; 2],
    /// Eigenlines `α₁/α₀` for `h[0]`, `h[1]`.
    pub rho: [Ratio; 2],
    /// Eigenvectors for `h[0]`, `h[1]`, unit length.
    pub vectors: [ComplexPair; 2],
    pub det: C64,
    pub degenerate: bool,
    /// `|det(v₊, v₋)|` of the unit eigenvectors.
    pub coincidence: f64,
    /// Set when the sample brackets a located resonance.
    pub near_resonance: bool,
    pub error: Option<Error>,
}

impl ScanSample {
    fn failed(mu: C64, e: Error) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        Self {
            mu,
            h: [nan; 2],
            rho: [Ratio::Infinity; 2],
            vectors: [ComplexPair::default(); 2],
            det: nan,
            degenerate: false,
            coincidence: f64::NAN,
            near_resonance: false,
            error: Some(e),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    fn unimodular(&self) -> bool {
        self.h
            .iter()
            .all(|h| (h.norm() - 1.0).abs() < UNIMODULAR_TOL)
    }
}

fn unit(v: ComplexPair) -> ComplexPair {
    v * (1.0 / v.norm())
}

/// Holonomy eigen-data at `mu`.
pub fn scan_one<F: SurfaceField + Clone>(
    field: &F,
    mu: C64,
    opts: &ScanOptions,
) -> Result<ScanSample> {
    let p = SpectralParam::new(mu)?;
    p.require_not_one()?;
    let form = ConnectionForm::new(field.clone(), p);
    let h = holonomy_y(&form, opts.x0, opts.tol)?;
    if !h.diagonalizable {
        return Err(Error::NonDiagonalizable);
    }
    let vectors = if h.degenerate {
        resonance_basis(&form, opts.x0, opts.tol)?
    } else {
        h.vectors
    };
    let (v0, v1) = (unit(vectors[0]), unit(vectors[1]));
    // near a resonance the eigenvalue order carries no information; pair
    // each multiplier with its eigenline through the Rayleigh quotient
    let rayleigh = |v: ComplexPair| {
        let w = h.matrix * v;
        v.a0.conj() * w.a0 + v.a1.conj() * w.a1
    };
    let values = if h.degenerate {
        [rayleigh(v0), rayleigh(v1)]
    } else {
        [h.h_plus, h.h_minus]
    };
    Ok(ScanSample {
        mu,
        h: values,
        rho: [Ratio::of(v0), Ratio::of(v1)],
        vectors: [v0, v1],
        det: h.det(),
        degenerate: h.degenerate,
        coincidence: Mat2::from_columns(v0, v1).det().norm(),
        near_resonance: false,
        error: None,
    })
}

/// A resonance point located by bisection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resonance {
    pub mu: f64,
    /// Common multiplier at `mu`.
    pub multiplier: C64,
    /// `|h₊ − h₋|` at `mu`.
    pub gap: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Index of the eigenvalue of `s` whose eigenline is closest to `reference`.
fn label(s: &ScanSample, reference: ComplexPair) -> usize {
    let r = Ratio::of(reference);
    if s.rho[0].chordal(r) <= s.rho[1].chordal(r) {
        0
    } else {
        1
    }
}

/// `Im h` of the eigenvalue that continues `reference`; changes sign where
/// two unimodular multipliers meet at `±1`.
fn labeled_gap<F: SurfaceField + Clone>(
    field: &F,
    mu: f64,
    reference: ComplexPair,
    opts: &ScanOptions,
) -> Result<(f64, ScanSample, usize)> {
    let s = scan_one(field, C64::new(mu, 0.0), opts)?;
    let k = label(&s, reference);
    Ok((s.h[k].im, s, k))
}

/// Bisection for a resonance inside `[lo, hi]`, given the eigenline to
/// follow at `lo`.
pub fn refine_resonance<F: SurfaceField + Clone>(
    field: &F,
    mut lo: f64,
    mut hi: f64,
    reference: ComplexPair,
    opts: &ScanOptions,
) -> Result<Resonance> {
    let bracket = (lo, hi);
    let (mut g_lo, s, k) = labeled_gap(field, lo, reference, opts)?;
    let mut reference = s.vectors[k];
    let (g_hi, _, _) = labeled_gap(field, hi, reference, opts)?;
    if g_lo * g_hi > 0.0 {
        return Err(Error::InvalidArgument(
            "bracket does not contain a resonance".into(),
        ));
    }
    let mut iterations = 0;
    while hi - lo > opts.refine_tol * hi.abs().max(1.0) && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        let (g, s, k) = labeled_gap(field, mid, reference, opts)?;
        iterations += 1;
        if g == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (g < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g;
            reference = s.vectors[k];
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    let s = scan_one(field, C64::new(mu, 0.0), opts)?;
    Ok(Resonance {
        mu,
        multiplier: (s.h[0] + s.h[1]) * 0.5,
        gap: (s.h[0] - s.h[1]).norm(),
        bracket,
        iterations,
    })
}

/// Consecutive real samples with unimodular multipliers across which the
/// continued eigenvalue crosses the real axis.
fn brackets(samples: &[ScanSample]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, w) in samples.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        if !(a.is_ok() && b.is_ok()) || a.mu.im != 0.0 || b.mu.im != 0.0 {
            continue;
        }
        if !(a.unimodular() && b.unimodular()) || a.degenerate || b.degenerate {
            continue;
        }
        let kb = label(b, a.vectors[0]);
        if a.h[0].im * b.h[kb].im < 0.0 {
            out.push((i, i + 1));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub samples: Vec<ScanSample>,
    pub resonances: Vec<Resonance>,
    /// Reality-involution residual over the sample pairs found in the set.
    pub reality_residual: Option<f64>,
}

impl ScanReport {
    pub fn failures(&self) -> usize {
        self.samples.iter().filter(|s| !s.is_ok()).count()
    }

    /// Largest `|det H − 1|`.
    pub fn det_defect(&self) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.is_ok())
            .map(|s| (s.det - 1.0).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_coincidence(&self) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.is_ok())
            .map(|s| s.coincidence)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Scans `mus` in order; see [`scan_with`].
pub fn scan<F: SurfaceField + Clone>(field: &F, mus: &[C64], opts: &ScanOptions) -> ScanReport {
    scan_with(field, mus, opts, |mus, one| {
        mus.iter().map(|&m| one(m)).collect()
    })
}

/// Scans `mus` with a caller-supplied mapper, which must return the
/// samples in input order (a parallel map qualifies). Resonances are
/// located between consecutive real samples and refined by bisection.
pub fn scan_with<F, M>(field: &F, mus: &[C64], opts: &ScanOptions, map: M) -> ScanReport
where
    F: SurfaceField + Clone,
    M: FnOnce(&[C64], &(dyn Fn(C64) -> ScanSample + Sync)) -> Vec<ScanSample>,
{
    let one = |mu: C64| scan_one(field, mu, opts).unwrap_or_else(|e| ScanSample::failed(mu, e));
    let mut samples = map(mus, &one);
    let mut resonances = Vec::new();
    for (a, b) in brackets(&samples) {
        let (lo, hi) = (samples[a].mu.re, samples[b].mu.re);
        let (lo, hi, reference) = if lo < hi {
            (lo, hi, samples[a].vectors[0])
        } else {
            (
                hi,
                lo,
                samples[b].vectors[label(&samples[b], samples[a].vectors[0])],
            )
        };
        if let Ok(r) = refine_resonance(field, lo, hi, reference, opts) {
            resonances.push(r);
            samples[a].near_resonance = true;
            samples[b].near_resonance = true;
        }
    }
    for s in samples.iter_mut() {
        if s.degenerate {
            s.near_resonance = true;
        }
    }
    let mut report = ScanReport {
        samples,
        resonances,
        reality_residual: None,
    };
    report.reality_residual = reality_involution_check(&report);
    report
}

/// Largest relative set distance between `{h(μ̄⁻¹)}` and `{h̄(μ)}` over the
/// pairs present in the report (self-paired samples included). `None` when
/// no pair is present.
pub fn reality_involution_check(report: &ScanReport) -> Option<f64> {
    let ok: Vec<&ScanSample> = report.samples.iter().filter(|s| s.is_ok()).collect();
    let mut worst: Option<f64> = None;
    for s in &ok {
        let partner = s.mu.conj().inv();
        let Some(t) = ok
            .iter()
            .find(|t| (t.mu - partner).norm() <= 1e-12 * partner.norm().max(1.0))
        else {
            continue;
        };
        let d = set_distance_rel(t.h, [s.h[0].conj(), s.h[1].conj()]);
        worst = Some(worst.map_or(d, |w: f64| w.max(d)));
    }
    worst
}

/// `mus` together with their images under `μ ↦ μ̄⁻¹`, without duplicates.
pub fn close_under_reality(mus: &[C64]) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(2 * mus.len());
    for &m in mus {
        for c in [m, m.conj().inv()] {
            if !out
                .iter()
                .any(|o| (*o - c).norm() <= 1e-12 * c.norm().max(1.0))
            {
                out.push(c);
            }
        }
    }
    out
}

/// `|μ| ∈ {radii}` × `arg μ ∈ {args}`, dropping points within
/// [`EXCLUDE_NEAR_ONE`] of `μ = 1`.
pub fn polar_panel(radii: &[f64], args: &[f64]) -> Vec<C64> {
    let mut out = Vec::new();
    for &r in radii {
        for &t in args {
            let m = C64::from_polar(r, t);
            if (m - 1.0).norm() >= EXCLUDE_NEAR_ONE {
                out.push(m);
            }
        }
    }
    out
}

/// `n` equally spaced real values in `[lo, hi]`.
pub fn real_segment(lo: f64, hi: f64, n: usize) -> Vec<C64> {
    let n = n.max(2);
    (0..n)
        .map(|k| C64::new(lo + (hi - lo) * k as f64 / (n - 1) as f64, 0.0))
        .collect()
}

/// Which end of the spectral plane an expansion describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    /// `ζ → ∞`: `log h = ±(w ζ + u₀ + u₁ ζ⁻¹ + …)`.
    Infinity,
    /// `ζ → 0`: `log h = ±(w ζ⁻¹ + u₀ + u₁ ζ + …)`.
    Zero,
}

/// Least-squares expansion of one continued branch of `log h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchFit {
    /// Coefficients of the leading power, the constant and the first
    /// correction.
    pub leading: C64,
    pub constant: C64,
    pub correction: C64,
    /// Largest `|log h − fit|` over the samples.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticFit {
    pub end: End,
    pub branches: [BranchFit; 2],
}

impl AsymptoticFit {
    /// `|w₊ + w₋|` and `|u₀₊ + u₀₋|` reduced modulo `2πi`: both vanish when
    /// `h₊h₋ = 1` holds along the samples.
    pub fn antisymmetry_defect(&self) -> (f64, f64) {
        let [a, b] = self.branches;
        let two_pi = core::f64::consts::TAU;
        let s = a.constant + b.constant;
        let k = (s.im / two_pi).round();
        (
            (a.leading + b.leading).norm(),
            (s - C64::new(0.0, k * two_pi)).norm(),
        )
    }
}

/// Fits `log h±` against `(ζ, 1, ζ⁻¹)` (or the mirrored basis at the zero
/// end) for `μ = ζ²`. The samples must lie in order along a path on which
/// `log h` is continued by unwrapping; a jump of more than `π/2` between
/// consecutive samples is a [`Error::BranchJump`].
pub fn fit_asymptotics<F: SurfaceField + Clone>(
    field: &F,
    zetas: &[C64],
    end: End,
    opts: &ScanOptions,
) -> Result<AsymptoticFit> {
    if zetas.len() < 4 {
        return Err(Error::InvalidArgument(
            "need at least 4 samples for a 3-term fit".into(),
        ));
    }
    let samples: Vec<ScanSample> = zetas
        .iter()
        .map(|z| scan_one(field, z * z, opts))
        .collect::<Result<_>>()?;
    let mut logs = [
        Vec::with_capacity(zetas.len()),
        Vec::with_capacity(zetas.len()),
    ];
    let mut refs = [samples[0].vectors[0], samples[0].vectors[1]];
    for (i, s) in samples.iter().enumerate() {
        let k0 = label(s, refs[0]);
        let ks = [k0, 1 - k0];
        for b in 0..2 {
            let h = s.h[ks[b]];
            let raw = C64::new(h.norm().ln(), h.arg());
            let value = match logs[b].last() {
                None => raw,
                Some(&prev) => {
                    let prev: C64 = prev;
                    let two_pi = core::f64::consts::TAU;
                    let k = ((prev.im - raw.im) / two_pi).round();
                    let v = C64::new(raw.re, raw.im + k * two_pi);
                    if (v.im - prev.im).abs() > core::f64::consts::FRAC_PI_2 {
                        return Err(Error::BranchJump(i - 1, i));
                    }
                    v
                }
            };
            logs[b].push(value);
            refs[b] = s.vectors[ks[b]];
        }
    }
    let basis = |z: C64| -> [C64; 3] {
        match end {
            End::Infinity => [z, C64::new(1.0, 0.0), z.inv()],
            End::Zero => [z.inv(), C64::new(1.0, 0.0), z],
        }
    };
    let rows: Vec<[C64; 3]> = zetas.iter().map(|&z| basis(z)).collect();
    let mut branches = [BranchFit {
        leading: C64::new(0.0, 0.0),
        constant: C64::new(0.0, 0.0),
        correction: C64::new(0.0, 0.0),
        residual: 0.0,
    }; 2];
    for b in 0..2 {
        let c = least_squares3(&rows, &logs[b])?;
        let residual = rows
            .iter()
            .zip(&logs[b])
            .map(|(r, y)| (r[0] * c[0] + r[1] * c[1] + r[2] * c[2] - y).norm())
            .fold(0.0, f64::max);
        branches[b] = BranchFit {
            leading: c[0],
            constant: c[1],
            correction: c[2],
            residual,
        };
    }
    Ok(AsymptoticFit { end, branches })
}

/// Complex least squares for three unknowns by modified Gram–Schmidt.
fn least_squares3(rows: &[[C64; 3]], y: &[C64]) -> Result<[C64; 3]> {
    let m = rows.len();
    let mut q: [Vec<C64>; 3] = [
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| r[1]).collect(),
        rows.iter().map(|r| r[2]).collect(),
    ];
    let mut r = [[C64::new(0.0, 0.0); 3]; 3];
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    for k in 0..3 {
        for j in 0..k {
            let (head, tail) = q.split_at_mut(k);
            let d = dot(&head[j], &tail[0]);
            r[j][k] = d;
            for i in 0..m {
                tail[0][i] -= head[j][i] * d;
            }
        }
        let n = dot(&q[k], &q[k]).re.sqrt();
        if !(n > 1e-300) {
            return Err(Error::InvalidArgument("degenerate fit basis".into()));
        }
        r[k][k] = C64::new(n, 0.0);
        q[k].iter_mut().for_each(|v| *v /= n);
    }
    let qty = [dot(&q[0], y), dot(&q[1], y), dot(&q[2], y)];
    let mut c = [C64::new(0.0, 0.0); 3];
    for k in (0..3).rev() {
        let mut s = qty[k];
        for j in k + 1..3 {
            s -= r[k][j] * c[j];
        }
        c[k] = s / r[k][k];
    }
    Ok(c)
}

/// Samples `ζ = ρ e^{iφ}` for `ρ` evenly spaced in `[lo, hi]`.
pub fn zeta_ray(lo: f64, hi: f64, n: usize, phi: f64) -> Vec<C64> {
    let n = n.max(2);
    (0..n)
        .map(|k| C64::from_polar(lo + (hi - lo) * k as f64 / (n - 1) as f64, phi))
        .collect()
}

/// Convenience: `HolonomyData` at `mu` on the line `x = opts.x0`.
pub fn holonomy_at<F: SurfaceField + Clone>(
    field: &F,
    mu: C64,
    opts: &ScanOptions,
) -> Result<HolonomyData> {
    holonomy_y(
        &ConnectionForm::new(field.clone(), SpectralParam::new(mu)?),
        opts.x0,
        opts.tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ResonancePoint;
    use crate::surfaces::Cylinder;
    use core::f64::consts::PI;

    #[test]
    fn finds_first_resonances() {
        let mus = real_segment(0.012, 0.9, 90);
        let rep = scan(&Cylinder, &mus, &ScanOptions::default());
        assert_eq!(rep.failures(), 0);
        let mut found: Vec<f64> = rep.resonances.iter().map(|r| r.mu).collect();
        found.sort_by(f64::total_cmp);
        assert_eq!(found.len(), 3, "{found:?}");
        let exact: Vec<f64> = [4, 3, 2]
            .iter()
            .map(|&k| ResonancePoint::new(k).unwrap().mu_k)
            .collect();
        for (m, e) in found.iter().zip(&exact) {
            assert!((m - e).abs() < 1e-10, "{m} {e}");
        }
        assert!(rep.det_defect() < 1e-9);
    }

    #[test]
    fn cylinder_eigenlines_never_meet() {
        let mus = polar_panel(&[0.1, 0.5, 2.0, 8.0], &[0.0, PI / 4.0, PI / 2.0, PI]);
        let rep = scan(
            &Cylinder,
            &close_under_reality(&mus),
            &ScanOptions::default(),
        );
        assert_eq!(rep.failures(), 0);
        assert!(rep.min_coincidence() > 0.1, "{}", rep.min_coincidence());
        assert!(rep.reality_residual.unwrap() < 1e-7);
    }

    #[test]
    fn leading_coefficient_at_infinity() {
        let zs = zeta_ray(10.0, 30.0, 81, 0.0);
        let fit = fit_asymptotics(&Cylinder, &zs, End::Infinity, &ScanOptions::default()).unwrap();
        for b in fit.branches {
            assert!((b.leading.norm() - PI / 2.0).abs() < 1e-3, "{b:?}");
            assert!(b.leading.re.abs() < 1e-6);
        }
        let (w, u) = fit.antisymmetry_defect();
        assert!(w < 1e-6 && u < 1e-6, "{w} {u}");
    }
}
