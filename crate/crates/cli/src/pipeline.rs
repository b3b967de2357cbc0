//! Runs one operation end to end and writes its artifacts.

use std::fs;
use std::path::PathBuf;

use cmc_darboux_core::cylinder::analytic_monodromy;
use cmc_darboux_core::darboux::{
    closed_mu_darboux, iterate, mu_darboux, Closure, TransformKind, TransformOptions,
    TransformResult,
};
use cmc_darboux_core::family::ConnectionForm;
use cmc_darboux_core::holonomy::{holonomy_y, set_distance_rel, EigenRatios};
use cmc_darboux_core::mat2::Ratio;
use cmc_darboux_core::ode::Tolerance;
use cmc_darboux_core::patch::{ConformalPatch, Grid, PatchField, Sample, SurfaceField};
use cmc_darboux_core::riccati::{
    init_t, integrate_riccati, matching_transform, RiccatiBranch, RiccatiOptions,
};
use cmc_darboux_core::scan::{
    fit_asymptotics, polar_panel, scan_with, zeta_ray, End, ScanOptions, ScanReport, ScanSample,
};
use cmc_darboux_core::spectral::{resonance_points, ResonancePoint};
use cmc_darboux_core::surfaces::{Cylinder, Delaunay, DelaunayKind};
use cmc_darboux_core::{ComplexPair, Quaternion, SpectralParam, C64};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ClosureChoice, Operation, ScanChoice, Settings, SurfaceChoice};
use crate::error::{CliError, CliResult};
use crate::mesh::QuadMesh;
use crate::patch_io;
use crate::report::{complex, plot_script, scan_json, write_scan_csv};

/// Extra `x` range tabulated around the grid for Delaunay profiles, so
/// that transport steps near the ends stay inside the table.
const PROFILE_MARGIN: f64 = 1.0;

/// Any surface the command line can produce.
#[derive(Clone, Debug)]
pub enum AnyField<'a> {
    Cylinder(Cylinder),
    Delaunay(Delaunay),
    Patch(PatchField<'a>),
}

impl SurfaceField for AnyField<'_> {
    fn sample(&self, x: f64, y: f64) -> Sample {
        match self {
            AnyField::Cylinder(c) => c.sample(x, y),
            AnyField::Delaunay(d) => d.sample(x, y),
            AnyField::Patch(p) => p.sample(x, y),
        }
    }

    fn y_period(&self) -> Option<f64> {
        match self {
            AnyField::Cylinder(c) => c.y_period(),
            AnyField::Delaunay(d) => d.y_period(),
            AnyField::Patch(p) => p.y_period(),
        }
    }
}

/// Where a loaded patch lives while the run borrows it.
pub enum SurfaceSource {
    Analytic,
    Loaded(ConformalPatch),
}

pub fn load_source(s: &Settings) -> CliResult<SurfaceSource> {
    match &s.surface {
        SurfaceChoice::Patch { path } => Ok(SurfaceSource::Loaded(patch_io::load(path)?)),
        _ => Ok(SurfaceSource::Analytic),
    }
}

/// The surface and the grid it is sampled on.
pub fn build_field<'a>(s: &Settings, src: &'a SurfaceSource) -> CliResult<(AnyField<'a>, Grid)> {
    let x1 = s.x0 + s.x_len;
    let grid = || Ok::<_, CliError>(Grid::periodic(s.nx, s.ny, s.x0, x1)?);
    let delaunay = |kind, neck| -> CliResult<(AnyField<'a>, Grid)> {
        let d = Delaunay::new(
            kind,
            neck,
            s.x0.min(0.0) - PROFILE_MARGIN,
            x1.max(0.0) + PROFILE_MARGIN,
        )?;
        Ok((AnyField::Delaunay(d), grid()?))
    };
    match (&s.surface, src) {
        (SurfaceChoice::Cylinder, _) => Ok((AnyField::Cylinder(Cylinder), grid()?)),
        (SurfaceChoice::Unduloid { neck }, _) => delaunay(DelaunayKind::Unduloid, *neck),
        (SurfaceChoice::Nodoid { neck }, _) => delaunay(DelaunayKind::Nodoid, *neck),
        (SurfaceChoice::Patch { .. }, SurfaceSource::Loaded(p)) => {
            Ok((AnyField::Patch(PatchField::new(p)), p.grid))
        }
        (SurfaceChoice::Patch { .. }, SurfaceSource::Analytic) => {
            Err(CliError::Config("patch surface was not loaded".into()))
        }
    }
}

/// Output directory and the format flags.
pub struct Output {
    pub dir: PathBuf,
    obj: bool,
    ply: bool,
}

impl Output {
    pub fn create(s: &Settings) -> CliResult<Self> {
        fs::create_dir_all(&s.output).map_err(|e| CliError::io(&s.output, e))?;
        Ok(Self {
            dir: s.output.clone(),
            obj: s.obj,
            ply: s.ply,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_json(&self, name: &str, v: &Value) -> CliResult<()> {
        let p = self.path(name);
        let mut text = serde_json::to_string_pretty(v).map_err(|e| CliError::io(&p, e))?;
        text.push('\n');
        fs::write(&p, text).map_err(|e| CliError::io(&p, e))
    }

    pub fn write_text(&self, name: &str, text: &str) -> CliResult<()> {
        let p = self.path(name);
        fs::write(&p, text).map_err(|e| CliError::io(&p, e))
    }

    /// Writes `name.obj` / `name.ply` as requested.
    pub fn write_mesh(
        &self,
        name: &str,
        points: &[Quaternion],
        grid: &Grid,
        weld: bool,
    ) -> CliResult<()> {
        let m = QuadMesh::from_grid(points, grid, weld);
        if self.obj {
            let p = self.path(&format!("{name}.obj"));
            let f = fs::File::create(&p).map_err(|e| CliError::io(&p, e))?;
            m.write_obj(std::io::BufWriter::new(f), name)
                .map_err(|e| CliError::io(&p, e))?;
        }
        if self.ply {
            let p = self.path(&format!("{name}.ply"));
            let f = fs::File::create(&p).map_err(|e| CliError::io(&p, e))?;
            m.write_ply(std::io::BufWriter::new(f))
                .map_err(|e| CliError::io(&p, e))?;
        }
        Ok(())
    }
}

/// Reproducibility stamp: the resolved settings, the tool version and the
/// tolerances. Contains no timestamps, so reruns are byte-identical.
pub fn stamp(s: &Settings) -> Value {
    json!({
        "tool": "cmc-darboux",
        "version": env!("CARGO_PKG_VERSION"),
        "operation": s.operation.name(),
        "settings": serde_json::to_value(s).unwrap_or(Value::Null),
        "tolerances": serde_json::to_value(s.tolerances).unwrap_or(Value::Null),
    })
}

/// Runs the configured operation. On failure `error.json` is written to the
/// output directory when it exists.
pub fn run(s: &Settings) -> CliResult<Value> {
    let out = Output::create(s)?;
    out.write_json("stamp.json", &stamp(s))?;
    let r = run_in(s, &out);
    if let Err(e) = &r {
        let _ = out.write_json("error.json", &e.to_json());
    }
    r
}

fn run_in(s: &Settings, out: &Output) -> CliResult<Value> {
    let src = load_source(s)?;
    let (field, grid) = build_field(s, &src)?;
    match s.operation {
        Operation::Transform => op_transform(s, out, field, &grid),
        Operation::Holonomy => op_holonomy(s, out, field),
        Operation::Resonances => op_resonances(s, out, field),
        Operation::Riccati => op_riccati(s, out, field, &grid),
        Operation::SpectralScan => op_scan(s, out, field),
        Operation::Iterate => op_iterate(s, out, field, &grid),
        Operation::Validate => op_validate(s, out, field, &grid, &src),
    }
}

fn tol(s: &Settings) -> Tolerance {
    Tolerance::relative(s.tolerances.rtol)
}

fn transform_options(s: &Settings) -> TransformOptions {
    TransformOptions {
        tol: tol(s),
        closed_tol: s.tolerances.closed,
        ..TransformOptions::default()
    }
}

fn scan_options(s: &Settings) -> ScanOptions {
    ScanOptions {
        tol: tol(s),
        x0: s.x0,
        ..ScanOptions::default()
    }
}

/// Computes one transform with the requested closure.
pub fn transform_with<F: SurfaceField + Clone>(
    form: &ConnectionForm<F>,
    grid: &Grid,
    closure: ClosureChoice,
    mix: Option<[C64; 2]>,
    initial: ComplexPair,
    opts: &TransformOptions,
) -> CliResult<TransformResult> {
    let periodic = grid.y_periodic && form.field.y_period().is_some();
    let closed = |w| closed_mu_darboux(form, grid, w, opts).map_err(CliError::from);
    let chosen = match (closure, mix) {
        (ClosureChoice::Generic, _) => None,
        (ClosureChoice::Auto, _) if !periodic => None,
        (_, Some([p, m])) => Some(Closure::Mix(p, m)),
        (ClosureChoice::Minus, None) => Some(Closure::Minus),
        (ClosureChoice::Plus | ClosureChoice::Auto, None) => Some(Closure::Plus),
    };
    match chosen {
        Some(w) => closed(w),
        None => Ok(mu_darboux(form, grid, initial, opts)?),
    }
}

/// `Re f̂` predicted for a μ-Darboux transform at `μ`: `cot(θ/2)` on the
/// unit circle, `0` on the real line, `Im a / Im((a − 1) b̄)` elsewhere.
pub fn expected_real_part(p: &SpectralParam) -> f64 {
    if p.is_unit_circle {
        let theta = p.mu.arg();
        (theta / 2.0).tan().recip()
    } else if p.is_real {
        0.0
    } else {
        p.a.im / ((p.a - 1.0) * p.b.conj()).im
    }
}

fn kind_name(k: TransformKind) -> String {
    match k {
        TransformKind::Generic => "generic".into(),
        TransformKind::Closed(Closure::Plus) => "closed-plus".into(),
        TransformKind::Closed(Closure::Minus) => "closed-minus".into(),
        TransformKind::Closed(Closure::Mix(..)) => "closed-mix".into(),
    }
}

/// Summary of a transform: real part, closedness, curvature, classicality.
pub fn transform_summary(r: &TransformResult, closed_tol: f64) -> Value {
    let p = &r.param;
    let expected = expected_real_part(p);
    let curvature = r.mean_curvature().map(|c| {
        json!({
            "mean": c.mean,
            "min": c.min,
            "max": c.max,
            "max_deviation": c.max_deviation,
            "count": c.count,
        })
    });
    let wedge = r.wedge_residual();
    json!({
        "mu": complex(p.mu),
        "a": complex(p.a),
        "b": complex(p.b),
        "kind": kind_name(r.kind),
        "real_part": {
            "mean": r.real_part.mean,
            "min": r.real_part.min,
            "max": r.real_part.max,
            "spread": r.real_part.spread(),
            "expected": expected,
            "deviation": r.real_part.deviation_from(expected),
        },
        "closedness": r.closedness,
        "closed": r.is_closed(closed_tol),
        "mean_curvature": curvature.unwrap_or_else(|e| json!({ "error": e.to_string() })),
        "wedge_residual": wedge,
        "classical": wedge <= 1e-6,
        "normal_defect": r.n_hat_defect(),
        "conformality": r.conformality(),
        "distance_to_source": r.distance_to_source(),
    })
}

fn write_transform_meshes(
    out: &Output,
    r: &TransformResult,
    closed_tol: f64,
    name: &str,
) -> CliResult<bool> {
    let weld = r.is_closed(closed_tol);
    out.write_mesh(name, &r.im_f_hat(), r.grid(), weld)?;
    Ok(weld)
}

fn source_meshes(out: &Output, p: &ConformalPatch) -> CliResult<()> {
    out.write_mesh("f", &p.f, &p.grid, true)?;
    let g: Vec<Quaternion> = p.f.iter().zip(&p.n).map(|(f, n)| *f + *n).collect();
    out.write_mesh("g", &g, &p.grid, true)
}

fn initial_pair(s: &Settings) -> ComplexPair {
    let [a, b, c, d] = s.initial;
    ComplexPair::new(C64::new(a, b), C64::new(c, d))
}

fn op_transform(s: &Settings, out: &Output, field: AnyField, grid: &Grid) -> CliResult<Value> {
    let param = SpectralParam::new(s.require_mu()?)?;
    param.require_not_one()?;
    let form = ConnectionForm::new(field, param);
    let opts = transform_options(s);
    let r = transform_with(&form, grid, s.closure, s.mix, initial_pair(s), &opts)?;
    source_meshes(out, &r.source)?;
    let welded = write_transform_meshes(out, &r, s.tolerances.closed, "f_hat")?;
    let mut summary = transform_summary(&r, s.tolerances.closed);
    summary["seam"] = json!(if welded { "welded" } else { "open" });
    out.write_json("summary.json", &summary)?;
    Ok(summary)
}

fn ratio_json(r: Ratio) -> Value {
    match r {
        Ratio::Finite(z) => complex(z),
        Ratio::Infinity => json!("inf"),
    }
}

fn op_holonomy(s: &Settings, out: &Output, field: AnyField) -> CliResult<Value> {
    let param = SpectralParam::new(s.require_mu()?)?;
    let cylinder = matches!(field, AnyField::Cylinder(_));
    let form = ConnectionForm::new(field, param);
    let h = holonomy_y(&form, s.x0, tol(s))?;
    let m = h.matrix.m;
    let ratios = match h.ratios {
        EigenRatios::Pair(a, b) => json!([ratio_json(a), ratio_json(b)]),
        EigenRatios::FullEigenspace => json!("full"),
    };
    let mut v = json!({
        "mu": complex(param.mu),
        "x0": s.x0,
        "matrix": [[complex(m[0][0]), complex(m[0][1])], [complex(m[1][0]), complex(m[1][1])]],
        "h_plus": complex(h.h_plus),
        "h_minus": complex(h.h_minus),
        "det_defect": (h.det() - 1.0).norm(),
        "eigenlines": ratios,
        "degenerate": h.degenerate,
        "diagonalizable": h.diagonalizable,
    });
    if cylinder {
        let (p, m) = analytic_monodromy(&param)?;
        v["analytic"] = json!({
            "h_plus": complex(p),
            "h_minus": complex(m),
            "relative_error": set_distance_rel([h.h_plus, h.h_minus], [p, m]),
        });
    }
    out.write_json("holonomy.json", &v)?;
    Ok(v)
}

fn par_map(mus: &[C64], one: &(dyn Fn(C64) -> ScanSample + Sync)) -> Vec<ScanSample> {
    mus.par_iter().map(|&m| one(m)).collect()
}

/// `n` log-spaced real values in `[lo, hi]`.
pub fn log_segment(lo: f64, hi: f64, n: usize) -> Vec<C64> {
    let n = n.max(2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| C64::new((a + (b - a) * k as f64 / (n - 1) as f64).exp(), 0.0))
        .collect()
}

fn op_resonances(s: &Settings, out: &Output, field: AnyField) -> CliResult<Value> {
    let cylinder = matches!(field, AnyField::Cylinder(_));
    let points = resonance_points(s.kmax)?;
    // stop halfway (geometrically) between μ_kmax and μ_(kmax+1)
    let next = ResonancePoint::new(s.kmax + 1)?.mu_k;
    let lo = points.last().map_or(next, |p| (p.mu_k * next).sqrt());
    let mus = log_segment(lo, 0.9, 60 * s.kmax as usize);
    let opts = scan_options(s);
    let report = scan_with(&field, &mus, &opts, par_map);
    let mut rows = Vec::new();
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::io(&out.path("resonances.csv"), e);
    wtr.write_record([
        "k",
        "mu_exact",
        "mu_found",
        "abs_error",
        "h_plus_re",
        "h_plus_im",
        "h_minus_re",
        "h_minus_im",
        "expected_multiplier",
        "deviation_from_expected",
        "deviation_from_minus_one",
    ])
    .map_err(csv_err)?;
    let exact_for = |mu: f64| -> Option<ResonancePoint> {
        if !cylinder {
            return None;
        }
        points
            .iter()
            .copied()
            .find(|p| (p.mu_k - mu).abs() <= 1e-6 * p.mu_k.max(1e-3))
    };
    let mut found = Vec::new();
    for r in &report.resonances {
        let p = SpectralParam::real(r.mu)?;
        let h = holonomy_y(&ConnectionForm::new(field.clone(), p), s.x0, tol(s))?;
        let exact = exact_for(r.mu);
        found.push((exact.map(|e| e.k), r.mu, h.h_plus, h.h_minus));
    }
    for p in points.iter().filter(|_| cylinder) {
        if !found.iter().any(|f| f.0 == Some(p.k)) {
            found.push((
                Some(p.k),
                f64::NAN,
                C64::new(f64::NAN, 0.0),
                C64::new(f64::NAN, 0.0),
            ));
        }
    }
    found.sort_by(|a, b| match (a.0, b.0) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => b.1.total_cmp(&a.1),
    });
    for (k, mu, hp, hm) in found {
        let exact = k.map(ResonancePoint::new).transpose()?;
        let dev = |t: f64| (hp - t).norm().max((hm - t).norm());
        let expected = exact.map(|e| e.multiplier());
        let cell = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        wtr.write_record([
            k.map(|k| k.to_string()).unwrap_or_default(),
            cell(exact.map(|e| e.mu_k)),
            mu.to_string(),
            cell(exact.map(|e| (e.mu_k - mu).abs())),
            hp.re.to_string(),
            hp.im.to_string(),
            hm.re.to_string(),
            hm.im.to_string(),
            cell(expected),
            cell(expected.map(dev)),
            dev(-1.0).to_string(),
        ])
        .map_err(csv_err)?;
        rows.push(json!({
            "k": k,
            "mu_exact": exact.map(|e| e.mu_k),
            "mu_found": mu,
            "h_plus": complex(hp),
            "h_minus": complex(hm),
            "expected_multiplier": expected,
            "deviation_from_expected": expected.map(dev),
        }));
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::io(&out.path("resonances.csv"), e))?;
    out.write_text("resonances.csv", &String::from_utf8_lossy(&bytes))?;
    let v = json!({
        "kmax": s.kmax,
        "samples": mus.len(),
        "failures": report.failures(),
        "resonances": rows,
    });
    out.write_json("resonances.json", &v)?;
    Ok(v)
}

fn op_riccati(s: &Settings, out: &Output, field: AnyField, grid: &Grid) -> CliResult<Value> {
    let r =
        s.r.ok_or_else(|| CliError::Config("riccati needs --r".into()))?;
    let branch = if r > 0.0 && r < 1.0 {
        RiccatiBranch::Real(s.sign)
    } else {
        RiccatiBranch::Imaginary(s.direction())
    };
    let spec = init_t(&field, grid, None, r, branch)?;
    let opts = RiccatiOptions {
        tol: tol(s),
        ..RiccatiOptions::default()
    };
    let res = integrate_riccati(&field, grid, &spec, &opts)?;
    let (p, alpha) = matching_transform(&spec)?;
    let form = ConnectionForm::new(field, p);
    let topts = TransformOptions {
        base_column: Some(spec.base_column),
        ..transform_options(s)
    };
    let matched = mu_darboux(&form, grid, alpha, &topts)
        .map(|dt| res.distance_to(&dt))
        .ok();
    let curvature = res.mean_curvature().ok().map(|c| c.max_deviation);
    let closed = res.closedness.is_some_and(|c| c <= s.tolerances.closed);
    let im: Vec<Quaternion> = res.f_sharp.iter().map(|q| q.im()).collect();
    out.write_mesh("f_sharp", &im, grid, closed)?;
    let v = json!({
        "r": r,
        "first_integral_target": r.recip() - 1.0,
        "first_integral_defect": res.first_integral,
        "closedness": res.closedness,
        "closed": closed,
        "wedge_residual": res.wedge_residual(),
        "curvature_max_deviation": curvature,
        "matching_mu": complex(p.mu),
        "match_error": matched,
    });
    out.write_json("riccati.json", &v)?;
    Ok(v)
}

fn op_scan(s: &Settings, out: &Output, field: AnyField) -> CliResult<Value> {
    let mus = match &s.scan {
        ScanChoice::Real { lo, hi, n } => log_or_linear(*lo, *hi, *n),
        ScanChoice::Polar { radii, args } => polar_panel(radii, args),
    };
    let opts = scan_options(s);
    let report: ScanReport = scan_with(&field, &mus, &opts, par_map);
    let mut fits = Vec::new();
    if s.fit {
        let inf = zeta_ray(10.0, 30.0, 81, 0.0);
        let zero: Vec<C64> = inf.iter().rev().map(|z| z.inv()).collect();
        fits.push(fit_asymptotics(&field, &inf, End::Infinity, &opts)?);
        fits.push(fit_asymptotics(&field, &zero, End::Zero, &opts)?);
    }
    let mut buf = Vec::new();
    write_scan_csv(&mut buf, &report).map_err(|e| CliError::io(&out.path("scan.csv"), e))?;
    out.write_text("scan.csv", &String::from_utf8_lossy(&buf))?;
    out.write_text("plot_scan.py", &plot_script("scan.csv"))?;
    let v = scan_json(&report, &fits);
    out.write_json("scan.json", &v)?;
    Ok(v)
}

/// Log spacing for positive ranges, linear otherwise.
fn log_or_linear(lo: f64, hi: f64, n: usize) -> Vec<C64> {
    if lo > 0.0 {
        log_segment(lo, hi, n)
    } else {
        cmc_darboux_core::scan::real_segment(lo, hi, n)
    }
}

fn op_iterate(s: &Settings, out: &Output, field: AnyField, grid: &Grid) -> CliResult<Value> {
    let p1 = SpectralParam::new(s.require_mu()?)?;
    let mu2 = s
        .iterate_mu
        .ok_or_else(|| CliError::Config("iterate needs a second μ".into()))?;
    let p2 = SpectralParam::new(mu2)?;
    p1.require_not_one()?;
    p2.require_not_one()?;
    let opts = transform_options(s);
    let form = ConnectionForm::new(field, p1);
    let closure = match s.closure {
        ClosureChoice::Generic => ClosureChoice::Auto,
        c => c,
    };
    let first = transform_with(&form, grid, closure, s.mix, initial_pair(s), &opts)?;
    let surface = iterate(form, &first, s.tolerances.closed)?;
    let form2 = ConnectionForm::new(surface, p2);
    let second = transform_with(
        &form2,
        grid,
        s.iterate_closure,
        s.iterate_mix,
        ComplexPair::e0(),
        &opts,
    )?;
    source_meshes(out, &first.source)?;
    write_transform_meshes(out, &first, s.tolerances.closed, "f_hat")?;
    write_transform_meshes(out, &second, s.tolerances.closed, "f_hat2")?;
    let v = json!({
        "first": transform_summary(&first, s.tolerances.closed),
        "second": transform_summary(&second, s.tolerances.closed),
    });
    out.write_json("summary.json", &v)?;
    Ok(v)
}

fn op_validate(
    s: &Settings,
    out: &Output,
    field: AnyField,
    grid: &Grid,
    src: &SurfaceSource,
) -> CliResult<Value> {
    let sampled;
    let patch = match src {
        SurfaceSource::Loaded(p) => p,
        SurfaceSource::Analytic => {
            sampled = ConformalPatch::from_field(&field, *grid, provenance(&s.surface))?;
            patch_io::save(&out.path("patch.jsonl"), &sampled)
                .map_err(|e| CliError::io(&out.path("patch.jsonl"), e))?;
            &sampled
        }
    };
    let r = patch.validate();
    let passes = r.passes(s.tolerances.validation);
    let v = json!({
        "provenance": patch.provenance,
        "nx": patch.grid.nx,
        "ny": patch.grid.ny,
        "unit_normal": r.unit_normal,
        "conformality": r.conformality,
        "left_structure": r.left_structure,
        "right_structure": r.right_structure,
        "h_relation": r.h_relation,
        "fd_consistency": r.fd_consistency,
        "max_pointwise": r.max_pointwise(),
        "tolerance": s.tolerances.validation,
        "passes": passes,
    });
    out.write_json("validation.json", &v)?;
    if passes {
        Ok(v)
    } else {
        Err(CliError::Validation(format!(
            "largest structural residual {:e} exceeds {:e}",
            r.max_pointwise(),
            s.tolerances.validation
        )))
    }
}

fn provenance(s: &SurfaceChoice) -> &'static str {
    match s {
        SurfaceChoice::Cylinder => "cylinder",
        SurfaceChoice::Unduloid { .. } => "unduloid",
        SurfaceChoice::Nodoid { .. } => "nodoid",
        SurfaceChoice::Patch { .. } => "patch",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_real_parts() {
        let p = SpectralParam::unitary(std::f64::consts::FRAC_PI_2).unwrap();
        assert!((expected_real_part(&p) - 1.0).abs() < 1e-12);
        let p = SpectralParam::real(0.25).unwrap();
        assert_eq!(expected_real_part(&p), 0.0);
        let p = SpectralParam::new(C64::new(0.0, 2.0)).unwrap();
        assert!((expected_real_part(&p) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn log_segment_endpoints() {
        let v = log_segment(0.01, 1.0, 3);
        assert!((v[1].re - 0.1).abs() < 1e-15 && (v[2].re - 1.0).abs() < 1e-15);
    }
}
