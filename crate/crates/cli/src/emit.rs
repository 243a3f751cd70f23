//! File emitters: CSV with a header row, Wavefront OBJ with `v`/`f` records
//! only, and pretty-printed JSON.

use std::fmt::Write as _;
use std::path::Path;

use heis_core::surfaces::ParamSurface;
use heis_core::Point1;
use serde::Serialize;

use crate::error::CliError;

/// A real in CSV: 17 significant digits, scientific notation.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Csv {
    text: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        Csv {
            text: format!("{}\n", header.join(",")),
            width: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.width);
        let cells: Vec<String> = values.iter().map(|&v| real(v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Triangulated parameter grid of `s`. `res = [nu, nv]` vertices per
/// direction; along a periodic parameter the last row wraps onto the first.
/// Triangles are counterclockwise in `(u, v)`.
pub fn surface_obj(s: &ParamSurface, res: [usize; 2]) -> String {
    let rect = s.sampling_rect();
    let periodic = s.periodic;
    let coord = |k: usize, i: usize| {
        let (a, b) = if k == 0 { rect.u } else { rect.v };
        let steps = if periodic[k] { res[k] } else { res[k] - 1 };
        a + (b - a) * i as f64 / steps as f64
    };
    let mut out = String::new();
    for i in 0..res[0] {
        for j in 0..res[1] {
            let p = s.position(coord(0, i), coord(1, j));
            vertex(&mut out, &p);
        }
    }
    let id = |i: usize, j: usize| (i % res[0]) * res[1] + (j % res[1]) + 1;
    let cells = |k: usize| if periodic[k] { res[k] } else { res[k] - 1 };
    for i in 0..cells(0) {
        for j in 0..cells(1) {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let _ = writeln!(out, "f {a} {b} {c}");
            let _ = writeln!(out, "f {a} {c} {d}");
        }
    }
    out
}

fn vertex(out: &mut String, p: &Point1) {
    let [x, y, t] = p.coords();
    let _ = writeln!(out, "v {} {} {}", real(x), real(y), real(t));
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}
