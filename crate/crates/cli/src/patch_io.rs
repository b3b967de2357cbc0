//! Plain-text patch files.
//!
//! The first line is a JSON header object; each following line is a JSON
//! array with the 16 numbers `f, N, ∂f/∂x, ∂f/∂y` (quaternion components
//! `w, x, y, z`) of one vertex, in grid order (`y` fastest). Numbers are
//! written with 17 significant digits, so a write/read cycle is exact.

use std::io::{BufRead, Write};

use cmc_darboux_core::patch::{ConformalPatch, Grid};
use cmc_darboux_core::{Error, Quaternion, Result};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "cmc-patch";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y_len: f64,
    pub y_periodic: bool,
    pub provenance: String,
}

impl Header {
    pub fn grid(&self) -> Grid {
        Grid {
            nx: self.nx,
            ny: self.ny,
            x0: self.x0,
            x1: self.x1,
            y0: self.y0,
            y_len: self.y_len,
            y_periodic: self.y_periodic,
        }
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::SchemaViolation(msg.into())
}

fn write_number(out: &mut String, v: f64) {
    use std::fmt::Write as _;
    let _ = write!(out, "{v:.16e}");
}

pub fn write_patch<W: Write>(mut w: W, p: &ConformalPatch) -> std::io::Result<()> {
    let g = &p.grid;
    let header = Header {
        format: FORMAT.into(),
        version: VERSION,
        nx: g.nx,
        ny: g.ny,
        x0: g.x0,
        x1: g.x1,
        y0: g.y0,
        y_len: g.y_len,
        y_periodic: g.y_periodic,
        provenance: p.provenance.clone(),
    };
    serde_json::to_writer(&mut w, &header)?;
    writeln!(w)?;
    let mut line = String::with_capacity(400);
    for k in 0..g.len() {
        line.clear();
        line.push('[');
        for (n, q) in [p.f[k], p.n[k], p.dfx[k], p.dfy[k]].iter().enumerate() {
            for (m, v) in q.to_array().iter().enumerate() {
                if n + m > 0 {
                    line.push(',');
                }
                write_number(&mut line, *v);
            }
        }
        line.push_str("]\n");
        w.write_all(line.as_bytes())?;
    }
    w.flush()
}

/// Reads a patch, checking the schema before the structural data is used.
pub fn read_patch<R: BufRead>(r: R) -> Result<ConformalPatch> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| schema("empty file"))?
        .map_err(|e| schema(e.to_string()))?;
    let header: Header =
        serde_json::from_str(&first).map_err(|e| schema(format!("header: {e}")))?;
    if header.format != FORMAT {
        return Err(schema(format!("unknown format {:?}", header.format)));
    }
    if header.version != VERSION {
        return Err(schema(format!("unsupported version {}", header.version)));
    }
    let grid = header.grid();
    let len = header
        .nx
        .checked_mul(header.ny)
        .ok_or_else(|| schema("grid size overflows"))?;
    let mut cols: [Vec<Quaternion>; 4] = Default::default();
    let mut count = 0usize;
    for (k, line) in lines.enumerate() {
        let line = line.map_err(|e| schema(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        if count >= len {
            return Err(schema(format!("more than {len} records")));
        }
        let v: Vec<f64> =
            serde_json::from_str(&line).map_err(|e| schema(format!("record {k}: {e}")))?;
        if v.len() != 16 {
            return Err(schema(format!(
                "record {k} has {} fields, expected 16",
                v.len()
            )));
        }
        for (c, col) in cols.iter_mut().enumerate() {
            col.push(Quaternion::new(
                v[4 * c],
                v[4 * c + 1],
                v[4 * c + 2],
                v[4 * c + 3],
            ));
        }
        count += 1;
    }
    if count != len {
        return Err(schema(format!("{count} records, expected {len}")));
    }
    let [f, n, dfx, dfy] = cols;
    ConformalPatch::from_samples(grid, f, n, dfx, dfy, &header.provenance)
}

pub fn save(path: &std::path::Path, p: &ConformalPatch) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    write_patch(std::io::BufWriter::new(file), p)
}

pub fn load(path: &std::path::Path) -> std::result::Result<ConformalPatch, crate::CliError> {
    let file = std::fs::File::open(path).map_err(|e| crate::CliError::io(path, e))?;
    read_patch(std::io::BufReader::new(file)).map_err(crate::CliError::from)
}
