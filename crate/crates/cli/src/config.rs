//! Run configuration: a TOML file, command-line overrides, and the resolved
//! settings the pipeline runs on.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use cmc_darboux_core::spectral::ResonancePoint;
use cmc_darboux_core::{Quaternion, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Transform,
    Holonomy,
    Resonances,
    Riccati,
    SpectralScan,
    Iterate,
    Validate,
}

impl Operation {
    pub fn name(self) -> &'static str {
        match self {
            Operation::Transform => "transform",
            Operation::Holonomy => "holonomy",
            Operation::Resonances => "resonances",
            Operation::Riccati => "riccati",
            Operation::SpectralScan => "spectral-scan",
            Operation::Iterate => "iterate",
            Operation::Validate => "validate",
        }
    }
}

/// The configuration file. Every key is optional; unknown keys are
/// rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub operation: Option<Operation>,
    pub output: Option<PathBuf>,
    pub surface: SurfaceSection,
    pub grid: GridSection,
    pub mu: MuSection,
    pub scan: ScanSection,
    pub riccati: RiccatiSection,
    pub iterate: IterateSection,
    pub format: FormatSection,
    pub tolerances: ToleranceSection,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurfaceSection {
    /// `cylinder`, `unduloid`, `nodoid` or `patch`.
    pub kind: Option<String>,
    pub neck: Option<f64>,
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub x0: Option<f64>,
    pub x_len: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MuSection {
    /// `"re,im"`, `"re"` or `"mu2"` … `"mu9"`.
    pub value: Option<String>,
    /// `[r, θ]`.
    pub polar: Option<[f64; 2]>,
    /// `[m₊, m₋]` real or `[re₊, im₊, re₋, im₋]`.
    pub mix: Option<Vec<f64>>,
    /// `auto`, `plus`, `minus` or `generic`.
    pub closure: Option<String>,
    /// Initial section `[re α₀, im α₀, re α₁, im α₁]` for generic transforms.
    pub initial: Option<[f64; 4]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    /// `real` or `polar`.
    pub kind: Option<String>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub n: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub args: Option<Vec<f64>>,
    pub kmax: Option<i32>,
    /// Fit the expansions of `log h` at both ends.
    pub fit: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RiccatiSection {
    pub r: Option<f64>,
    pub dir: Option<[f64; 3]>,
    /// `+` or `-`.
    pub sign: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IterateSection {
    pub mu: Option<String>,
    pub mix: Option<Vec<f64>>,
    pub closure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FormatSection {
    pub obj: Option<bool>,
    pub ply: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceSection {
    pub rtol: Option<f64>,
    pub closed: Option<f64>,
    pub validation: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Applies `other` on top of `self`: every key set in `other` wins.
    pub fn overlay(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident).+) => {
                if other.$($f).+.is_some() {
                    self.$($f).+ = other.$($f).+;
                }
            };
        }
        take!(operation);
        take!(output);
        take!(surface.kind);
        take!(surface.neck);
        take!(surface.path);
        take!(grid.nx);
        take!(grid.ny);
        take!(grid.x0);
        take!(grid.x_len);
        take!(mu.value);
        take!(mu.polar);
        take!(mu.mix);
        take!(mu.closure);
        take!(mu.initial);
        take!(scan.kind);
        take!(scan.lo);
        take!(scan.hi);
        take!(scan.n);
        take!(scan.radii);
        take!(scan.args);
        take!(scan.kmax);
        take!(scan.fit);
        take!(riccati.r);
        take!(riccati.dir);
        take!(riccati.sign);
        take!(iterate.mu);
        take!(iterate.mix);
        take!(iterate.closure);
        take!(format.obj);
        take!(format.ply);
        take!(tolerances.rtol);
        take!(tolerances.closed);
        take!(tolerances.validation);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SurfaceChoice {
    Cylinder,
    Unduloid { neck: f64 },
    Nodoid { neck: f64 },
    Patch { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureChoice {
    Auto,
    Plus,
    Minus,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScanChoice {
    Real { lo: f64, hi: f64, n: usize },
    Polar { radii: Vec<f64>, args: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative tolerance of every ODE integration.
    pub rtol: f64,
    /// Largest `y`-period mismatch of a closed transform.
    pub closed: f64,
    /// Largest structural residual accepted by `validate`.
    pub validation: f64,
}

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub operation: Operation,
    pub output: PathBuf,
    pub surface: SurfaceChoice,
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x_len: f64,
    #[serde(serialize_with = "ser_complex_opt")]
    pub mu: Option<C64>,
    #[serde(serialize_with = "ser_mix_opt")]
    pub mix: Option<[C64; 2]>,
    pub closure: ClosureChoice,
    pub initial: [f64; 4],
    pub scan: ScanChoice,
    pub kmax: i32,
    pub fit: bool,
    pub r: Option<f64>,
    pub dir: [f64; 3],
    pub sign: f64,
    #[serde(serialize_with = "ser_complex_opt")]
    pub iterate_mu: Option<C64>,
    #[serde(serialize_with = "ser_mix_opt")]
    pub iterate_mix: Option<[C64; 2]>,
    pub iterate_closure: ClosureChoice,
    pub obj: bool,
    pub ply: bool,
    pub tolerances: Tolerances,
}

fn ser_complex_opt<S: serde::Serializer>(v: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
    v.map(|z| [z.re, z.im]).serialize(s)
}

fn ser_mix_opt<S: serde::Serializer>(v: &Option<[C64; 2]>, s: S) -> Result<S::Ok, S::Error> {
    v.map(|m| [m[0].re, m[0].im, m[1].re, m[1].im]).serialize(s)
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses `"re,im"`, `"re"`, or a resonance literal `"mu2"` … `"mu9"`.
pub fn parse_mu(s: &str) -> CliResult<C64> {
    let t = s.trim();
    if let Some(k) = t.strip_prefix("mu") {
        let k: i32 = k
            .parse()
            .map_err(|_| bad(format!("unknown μ literal {t:?}")))?;
        if !(2..=9).contains(&k) {
            return Err(bad(format!("resonance literal {t:?} must be mu2 … mu9")));
        }
        let p = ResonancePoint::new(k).map_err(|e| bad(e.to_string()))?;
        return Ok(C64::new(p.mu_k, 0.0));
    }
    let parts = parse_list(t)?;
    match parts.as_slice() {
        [re] => Ok(C64::new(*re, 0.0)),
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(bad(format!("μ must be \"re,im\" or \"re\", got {t:?}"))),
    }
}

/// Comma-separated floats.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("not a number: {p:?}")))
        })
        .collect()
}

fn parse_mix(v: &[f64]) -> CliResult<[C64; 2]> {
    match *v {
        [p, m] => Ok([C64::new(p, 0.0), C64::new(m, 0.0)]),
        [pr, pi, mr, mi] => Ok([C64::new(pr, pi), C64::new(mr, mi)]),
        _ => Err(bad("mix needs 2 real or 4 (re, im) numbers")),
    }
}

fn parse_closure(s: Option<&str>) -> CliResult<ClosureChoice> {
    match s.unwrap_or("auto") {
        "auto" => Ok(ClosureChoice::Auto),
        "plus" | "+" => Ok(ClosureChoice::Plus),
        "minus" | "-" => Ok(ClosureChoice::Minus),
        "generic" => Ok(ClosureChoice::Generic),
        o => Err(bad(format!(
            "closure must be auto, plus, minus or generic, got {o:?}"
        ))),
    }
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be finite")))
    }
}

impl Settings {
    /// Resolves a configuration, filling in defaults and checking ranges.
    pub fn resolve(c: &RunConfig) -> CliResult<Self> {
        let operation = c.operation.ok_or_else(|| bad("no operation given"))?;
        let surface = match c.surface.kind.as_deref() {
            None if c.surface.path.is_some() => SurfaceChoice::Patch {
                path: c.surface.path.clone().unwrap_or_default(),
            },
            None | Some("cylinder") => SurfaceChoice::Cylinder,
            Some("unduloid") => SurfaceChoice::Unduloid {
                neck: c.surface.neck.ok_or_else(|| bad("unduloid needs a neck"))?,
            },
            Some("nodoid") => SurfaceChoice::Nodoid {
                neck: c.surface.neck.ok_or_else(|| bad("nodoid needs a neck"))?,
            },
            Some("patch") => SurfaceChoice::Patch {
                path: c
                    .surface
                    .path
                    .clone()
                    .ok_or_else(|| bad("patch surface needs a path"))?,
            },
            Some(o) => return Err(bad(format!("unknown surface {o:?}"))),
        };
        let mu = match (&c.mu.value, c.mu.polar) {
            (Some(_), Some(_)) => return Err(bad("give μ either as a value or in polar form")),
            (Some(s), None) => Some(parse_mu(s)?),
            (None, Some([r, t])) => Some(C64::from_polar(finite("|μ|", r)?, finite("arg μ", t)?)),
            (None, None) => None,
        };
        if let Some(m) = mu {
            if !m.is_finite() {
                return Err(bad("μ must be finite"));
            }
        }
        let scan = match c.scan.kind.as_deref().unwrap_or("real") {
            "real" => {
                let lo = c.scan.lo.unwrap_or(0.02);
                let hi = c.scan.hi.unwrap_or(0.9);
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(bad("scan range needs lo < hi"));
                }
                ScanChoice::Real {
                    lo,
                    hi,
                    n: c.scan.n.unwrap_or(200).max(2),
                }
            }
            "polar" => ScanChoice::Polar {
                radii: c
                    .scan
                    .radii
                    .clone()
                    .unwrap_or_else(|| vec![0.05, 0.2, 0.5, 2.0, 5.0, 20.0]),
                args: c
                    .scan
                    .args
                    .clone()
                    .unwrap_or_else(|| (0..8).map(|k| k as f64 * TAU / 8.0).collect()),
            },
            o => return Err(bad(format!("scan kind must be real or polar, got {o:?}"))),
        };
        let kmax = c.scan.kmax.unwrap_or(5);
        if !(2..=40).contains(&kmax) {
            return Err(bad("kmax must lie in 2 … 40"));
        }
        let sign = match c.riccati.sign.as_deref().unwrap_or("+") {
            "+" | "plus" | "1" | "+1" => 1.0,
            "-" | "minus" | "-1" => -1.0,
            o => return Err(bad(format!("sign must be + or -, got {o:?}"))),
        };
        let dir = c.riccati.dir.unwrap_or([0.0, 0.0, 1.0]);
        if !dir.iter().all(|v| v.is_finite()) || dir.iter().all(|v| *v == 0.0) {
            return Err(bad("direction must be a finite nonzero vector"));
        }
        let tolerances = Tolerances {
            rtol: c.tolerances.rtol.unwrap_or(1e-12),
            closed: c.tolerances.closed.unwrap_or(1e-6),
            validation: c.tolerances.validation.unwrap_or(1e-6),
        };
        for (n, v) in [
            ("rtol", tolerances.rtol),
            ("closed", tolerances.closed),
            ("validation", tolerances.validation),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(format!("tolerance {n} must be positive")));
            }
        }
        let nx = c.grid.nx.unwrap_or(64);
        let ny = c.grid.ny.unwrap_or(256);
        if nx < 2 || ny < 4 || !ny.is_multiple_of(2) {
            return Err(bad("grid needs nx ≥ 2 and an even ny ≥ 4"));
        }
        let x_len = finite("x_len", c.grid.x_len.unwrap_or(TAU))?;
        if x_len <= 0.0 {
            return Err(bad("x_len must be positive"));
        }
        Ok(Self {
            operation,
            output: c.output.clone().unwrap_or_else(|| PathBuf::from("out")),
            surface,
            nx,
            ny,
            x0: finite("x0", c.grid.x0.unwrap_or(0.0))?,
            x_len,
            mu,
            mix: c.mu.mix.as_deref().map(parse_mix).transpose()?,
            closure: parse_closure(c.mu.closure.as_deref())?,
            initial: c.mu.initial.unwrap_or([1.0, 0.0, 0.0, 0.0]),
            scan,
            kmax,
            fit: c.scan.fit.unwrap_or(false),
            r: c.riccati.r,
            dir,
            sign,
            iterate_mu: c.iterate.mu.as_deref().map(parse_mu).transpose()?,
            iterate_mix: c.iterate.mix.as_deref().map(parse_mix).transpose()?,
            iterate_closure: parse_closure(c.iterate.closure.as_deref())?,
            obj: c.format.obj.unwrap_or(true),
            ply: c.format.ply.unwrap_or(false),
            tolerances,
        })
    }

    pub fn require_mu(&self) -> CliResult<C64> {
        self.mu
            .ok_or_else(|| bad("this operation needs --mu or --mu-polar"))
    }

    pub fn direction(&self) -> Quaternion {
        Quaternion::from_vector(self.dir)
    }
}
