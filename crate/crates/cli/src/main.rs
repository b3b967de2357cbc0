use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cmc_darboux::config::{parse_list, Operation, RunConfig};
use cmc_darboux::{run, CliError, ExitStatus, Settings};

/// μ-Darboux transforms of constant mean curvature surfaces.
#[derive(Parser, Debug)]
#[command(name = "cmc-darboux", version)]
struct Cli {
    #[command(subcommand)]
    op: Op,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Op {
    /// Transform a surface at one spectral value and export meshes.
    Transform,
    /// Holonomy of the connection at one spectral value.
    Holonomy,
    /// Locate the resonance points on the real axis.
    Resonances,
    /// Integrate the classical Riccati equation.
    Riccati,
    /// Scan holonomy eigen-data over a set of spectral values.
    SpectralScan,
    /// Transform twice: the second transform starts from the first.
    Iterate,
    /// Check the structure equations of a surface.
    Validate,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// TOML run configuration; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// cylinder, unduloid, nodoid or patch.
    #[arg(long, global = true)]
    surface: Option<String>,
    #[arg(long, global = true)]
    neck: Option<f64>,
    /// Patch file to import.
    #[arg(long, global = true)]
    patch: Option<PathBuf>,
    #[arg(long, global = true)]
    nx: Option<usize>,
    #[arg(long, global = true)]
    ny: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    x0: Option<f64>,
    #[arg(long, global = true)]
    x_len: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `re,im`, `re`, or `mu2` … `mu9`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    /// `r,theta`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu_polar: Option<String>,
    /// Coefficients of the two eigen-solutions at a resonance point.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mix: Option<String>,
    /// auto, plus, minus or generic.
    #[arg(long, global = true)]
    closure: Option<String>,
    /// Second spectral value for `iterate`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mix2: Option<String>,
    #[arg(long, global = true)]
    kmax: Option<i32>,
    /// real or polar.
    #[arg(long, global = true)]
    scan: Option<String>,
    #[arg(long, global = true)]
    lo: Option<f64>,
    #[arg(long, global = true)]
    hi: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Fit the expansions of log h at both ends.
    #[arg(long, global = true)]
    fit: bool,
    #[arg(long, global = true, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Direction `x,y,z` of the initial Riccati value.
    #[arg(long, global = true, allow_hyphen_values = true)]
    dir: Option<String>,
    /// `+` or `-`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long, global = true)]
    rtol: Option<f64>,
    /// Also write binary PLY meshes.
    #[arg(long, global = true)]
    ply: bool,
    /// Skip OBJ meshes.
    #[arg(long, global = true)]
    no_obj: bool,
}

fn op(o: Op) -> Operation {
    match o {
        Op::Transform => Operation::Transform,
        Op::Holonomy => Operation::Holonomy,
        Op::Resonances => Operation::Resonances,
        Op::Riccati => Operation::Riccati,
        Op::SpectralScan => Operation::SpectralScan,
        Op::Iterate => Operation::Iterate,
        Op::Validate => Operation::Validate,
    }
}

fn pair(s: &str) -> Result<[f64; 2], CliError> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok([*a, *b]),
        _ => Err(CliError::Config(format!("expected two numbers, got {s:?}"))),
    }
}

fn overrides(cli: &Cli) -> Result<RunConfig, CliError> {
    let f = &cli.flags;
    let mut c = RunConfig {
        operation: Some(op(cli.op)),
        output: f.out.clone(),
        ..RunConfig::default()
    };
    c.surface.kind = f.surface.clone();
    if f.patch.is_some() {
        c.surface.path = f.patch.clone();
        c.surface.kind.get_or_insert_with(|| "patch".into());
    }
    c.surface.neck = f.neck;
    c.grid.nx = f.nx;
    c.grid.ny = f.ny;
    c.grid.x0 = f.x0;
    c.grid.x_len = f.x_len;
    c.mu.value = f.mu.clone();
    c.mu.polar = f.mu_polar.as_deref().map(pair).transpose()?;
    c.mu.mix = f.mix.as_deref().map(parse_list).transpose()?;
    c.mu.closure = f.closure.clone();
    c.iterate.mu = f.mu2.clone();
    c.iterate.mix = f.mix2.as_deref().map(parse_list).transpose()?;
    c.scan.kmax = f.kmax;
    c.scan.kind = f.scan.clone();
    c.scan.lo = f.lo;
    c.scan.hi = f.hi;
    c.scan.n = f.samples;
    c.scan.fit = f.fit.then_some(true);
    c.riccati.r = f.r;
    c.riccati.dir = match f.dir.as_deref().map(parse_list).transpose()? {
        None => None,
        Some(v) if v.len() == 3 => Some([v[0], v[1], v[2]]),
        Some(_) => return Err(CliError::Config("--dir needs x,y,z".into())),
    };
    c.riccati.sign = f.sign.clone();
    c.tolerances.rtol = f.rtol;
    c.format.ply = f.ply.then_some(true);
    c.format.obj = f.no_obj.then_some(false);
    Ok(c)
}

fn execute(cli: &Cli) -> Result<serde_json::Value, CliError> {
    let file = match &cli.flags.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut merged = file.overlay(overrides(cli)?);
    // the subcommand names the operation; a file may not contradict it
    merged.operation = Some(op(cli.op));
    let settings = Settings::resolve(&merged)?;
    run(&settings)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).unwrap_or_default();
            // a closed pipe on stdout is not a failure of the run
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(ExitStatus::Ok as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.status() as u8)
        }
    }
}
