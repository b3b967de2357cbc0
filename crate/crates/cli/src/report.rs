//! CSV and JSON reports, and the plotting script emitted next to scan CSVs.

use std::io::Write;

use cmc_darboux_core::mat2::Ratio;
use cmc_darboux_core::scan::{AsymptoticFit, ScanReport, ScanSample};
use cmc_darboux_core::C64;
use serde_json::{json, Value};

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn ratio_parts(r: Ratio) -> (String, String) {
    match r {
        Ratio::Finite(z) => (z.re.to_string(), z.im.to_string()),
        Ratio::Infinity => ("inf".into(), "inf".into()),
    }
}

pub const SCAN_COLUMNS: [&str; 15] = [
    "mu_re",
    "mu_im",
    "h_plus_re",
    "h_plus_im",
    "h_minus_re",
    "h_minus_im",
    "rho_plus_re",
    "rho_plus_im",
    "rho_minus_re",
    "rho_minus_im",
    "coincidence",
    "degenerate",
    "near_resonance",
    "det_defect",
    "error",
];

fn scan_row(s: &ScanSample) -> Vec<String> {
    let (rp_re, rp_im) = ratio_parts(s.rho[0]);
    let (rm_re, rm_im) = ratio_parts(s.rho[1]);
    vec![
        s.mu.re.to_string(),
        s.mu.im.to_string(),
        s.h[0].re.to_string(),
        s.h[0].im.to_string(),
        s.h[1].re.to_string(),
        s.h[1].im.to_string(),
        rp_re,
        rp_im,
        rm_re,
        rm_im,
        s.coincidence.to_string(),
        u8::from(s.degenerate).to_string(),
        u8::from(s.near_resonance).to_string(),
        (s.det - 1.0).norm().to_string(),
        s.error.as_ref().map(|e| e.to_string()).unwrap_or_default(),
    ]
}

/// One row per scan sample.
pub fn write_scan_csv<W: Write>(w: W, report: &ScanReport) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SCAN_COLUMNS)?;
    for s in &report.samples {
        out.write_record(scan_row(s))?;
    }
    out.flush()?;
    Ok(())
}

pub fn fit_json(fit: &AsymptoticFit) -> Value {
    let (lead, rest) = fit.antisymmetry_defect();
    json!({
        "end": format!("{:?}", fit.end).to_lowercase(),
        "branches": fit.branches.iter().map(|b| json!({
            "leading": complex(b.leading),
            "constant": complex(b.constant),
            "correction": complex(b.correction),
            "residual": b.residual,
        })).collect::<Vec<_>>(),
        "antisymmetry_defect": [lead, rest],
    })
}

pub fn scan_json(report: &ScanReport, fits: &[AsymptoticFit]) -> Value {
    json!({
        "samples": report.samples.len(),
        "failures": report.failures(),
        "det_defect": report.det_defect(),
        "min_coincidence": report.min_coincidence(),
        "reality_residual": report.reality_residual,
        "resonances": report.resonances.iter().map(|r| json!({
            "mu": r.mu,
            "multiplier": complex(r.multiplier),
            "gap": r.gap,
            "bracket": [r.bracket.0, r.bracket.1],
            "iterations": r.iterations,
        })).collect::<Vec<_>>(),
        "fits": fits.iter().map(fit_json).collect::<Vec<_>>(),
    })
}

/// A matplotlib script that plots `|h±|`, `arg h±` and the eigenline
/// coincidence from a scan CSV.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
# Plots the holonomy scan in {csv_name}.
import csv
import math
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{csv_name}"
rows = [r for r in csv.DictReader(open(path)) if not r["error"]]


def c(r, k):
    return complex(float(r[k + "_re"]), float(r[k + "_im"]))


mu = [c(r, "mu") for r in rows]
real = all(abs(m.imag) < 1e-14 for m in mu)
t = [m.real for m in mu] if real else list(range(len(mu)))
fig, ax = plt.subplots(3, 1, sharex=True, figsize=(7, 9))
for k, style in (("h_plus", "-"), ("h_minus", "--")):
    h = [c(r, k) for r in rows]
    ax[0].plot(t, [math.log(abs(v)) for v in h], style, label=k)
    ax[1].plot(t, [math.atan2(v.imag, v.real) for v in h], style, label=k)
ax[2].plot(t, [float(r["coincidence"]) for r in rows])
for r, x in zip(rows, t):
    if r["near_resonance"] == "1":
        for a in ax:
            a.axvline(x, color="grey", lw=0.5)
ax[0].set_ylabel("log |h|")
ax[1].set_ylabel("arg h")
ax[2].set_ylabel("|det(v+, v-)|")
ax[2].set_xlabel("mu" if real else "sample")
ax[0].legend()
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"#
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmc_darboux_core::scan::{scan, ScanOptions};
    use cmc_darboux_core::surfaces::Cylinder;

    #[test]
    fn csv_has_one_row_per_sample() {
        let mus = [C64::new(0.5, 0.0), C64::new(2.0, 1.0), C64::new(1.0, 0.0)];
        let r = scan(&Cylinder, &mus, &ScanOptions::default());
        let mut buf = Vec::new();
        write_scan_csv(&mut buf, &r).unwrap();
        let mut rd = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(rd.headers().unwrap().len(), SCAN_COLUMNS.len());
        let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 3);
        assert!(!rows[2][14].is_empty());
        assert!(rows[0][14].is_empty());
    }

    #[test]
    fn plot_script_names_the_csv() {
        assert!(plot_script("scan.csv").contains("\"scan.csv\""));
    }
}
