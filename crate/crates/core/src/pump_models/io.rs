//! Plain-text kernel files.
//!
//! ```text
//! # pdc-coherence cross-spectral density
//! format = csd-text-v1
//! center = 2.0000000000000000e1
//! span_half_width = 8.4852813742385713e0
//! n_points = 257
//! layout = dense
//! <re> <im> <re> <im> ...        (one kernel row per line, row-major)
//! ```
//!
//! Floats are written with 17 significant digits, which round-trips every
//! `f64` exactly. `layout` is `dense` or `delta-sheet` and may be omitted
//! (defaults to `dense`). Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pump_models::{FrequencyGrid, KernelLayout, TabulatedKernel};

pub const FORMAT_TAG: &str = "csd-text-v1";

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn kernel_to_string(kernel: &TabulatedKernel) -> String {
    let g = kernel.grid();
    let mut out = String::new();
    out.push_str("# pdc-coherence cross-spectral density\n");
    let _ = writeln!(out, "format = {FORMAT_TAG}");
    let _ = writeln!(out, "center = {}", fmt_f64(g.center()));
    let _ = writeln!(out, "span_half_width = {}", fmt_f64(g.span_half_width()));
    let _ = writeln!(out, "n_points = {}", g.n_points());
    let layout = match kernel.layout() {
        KernelLayout::Dense => "dense",
        KernelLayout::DeltaSheet => "delta-sheet",
    };
    let _ = writeln!(out, "layout = {layout}");
    let m = kernel.matrix();
    for j in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|k| format!("{} {}", fmt_f64(m[(j, k)].re), fmt_f64(m[(j, k)].im)))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
}

pub fn kernel_from_str(text: &str) -> Result<TabulatedKernel> {
    let mut center = None;
    let mut span = None;
    let mut n = None;
    let mut layout = KernelLayout::Dense;
    let mut format_seen = false;
    let mut values: Vec<f64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let key = key.trim();
            match key {
                "format" => {
                    if value.trim() != FORMAT_TAG {
                        return Err(Error::Parse(format!("unsupported format {:?}", value.trim())));
                    }
                    format_seen = true;
                }
                "center" => center = Some(parse_num::<f64>(key, value)?),
                "span_half_width" => span = Some(parse_num::<f64>(key, value)?),
                "n_points" => n = Some(parse_num::<usize>(key, value)?),
                "layout" => {
                    layout = match value.trim() {
                        "dense" => KernelLayout::Dense,
                        "delta-sheet" => KernelLayout::DeltaSheet,
                        other => return Err(Error::Parse(format!("unknown layout {other:?}"))),
                    }
                }
                other => return Err(Error::Parse(format!("unknown header field {other:?}"))),
            }
            continue;
        }
        for tok in line.split_whitespace() {
            values.push(parse_num::<f64>("kernel entry", tok)?);
        }
    }
    if !format_seen {
        return Err(Error::Parse("missing format line".into()));
    }
    let (center, span, n) = match (center, span, n) {
        (Some(c), Some(s), Some(n)) => (c, s, n),
        _ => return Err(Error::Parse("header needs center, span_half_width and n_points".into())),
    };
    let grid = FrequencyGrid::new(center, span, n)?;
    if values.len() != 2 * n * n {
        return Err(Error::Parse(format!(
            "expected {} numbers for a {n}x{n} kernel, found {}",
            2 * n * n,
            values.len()
        )));
    }
    let matrix = DMatrix::from_fn(n, n, |j, k| {
        let i = 2 * (j * n + k);
        Complex64::new(values[i], values[i + 1])
    });
    TabulatedKernel::new(grid, matrix, layout)
}

pub fn save_kernel(kernel: &TabulatedKernel, path: &Path) -> Result<()> {
    fs::write(path, kernel_to_string(kernel))?;
    Ok(())
}

pub fn load_kernel(path: &Path) -> Result<TabulatedKernel> {
    kernel_from_str(&fs::read_to_string(path)?)
}
