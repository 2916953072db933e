//! CSV and PGM writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Field;

/// Comment lines placed at the top of every CSV.
#[derive(Clone, Debug, Default)]
pub struct Provenance {
    pub lines: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(command: &str, config_hash: &str) -> Self {
        Self {
            lines: vec![
                ("generator".into(), format!("fracavity {}", env!("CARGO_PKG_VERSION"))),
                ("command".into(), command.into()),
                ("config_hash".into(), config_hash.into()),
            ],
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    fn header(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(s, "# {k} = {v}");
        }
        s
    }
}

fn write(path: &Path, text: String) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Columns `x_um, intensity, phase`.
pub fn write_field_csv(path: &Path, field: &Field, prov: &Provenance) -> Result<()> {
    let mut s = prov.header();
    s.push_str("x_um,intensity,phase\n");
    let grid = field.grid();
    for (j, z) in field.samples().iter().enumerate() {
        let _ = writeln!(s, "{:e},{:e},{:e}", grid.x(j), z.norm_sqr(), z.arg());
    }
    write(path, s)
}

/// Arbitrary named columns of equal length.
pub fn write_columns_csv(path: &Path, names: &[&str], columns: &[Vec<String>], prov: &Provenance) -> Result<()> {
    let mut s = prov.header();
    s.push_str(&names.join(","));
    s.push('\n');
    let rows = columns.first().map(|c| c.len()).unwrap_or(0);
    for r in 0..rows {
        let row: Vec<&str> = columns.iter().map(|c| c[r].as_str()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    write(path, s)
}

/// Row-major matrix, one CSV line per row.
pub fn write_matrix_csv(path: &Path, data: &[f64], cols: usize, prov: &Provenance) -> Result<()> {
    let mut s = prov.header();
    for row in data.chunks(cols) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    write(path, s)
}

/// 8-bit binary PGM scaled so the maximum maps to 255.
pub fn write_pgm(path: &Path, data: &[f64], width: usize, height: usize) -> Result<()> {
    if data.len() != width * height {
        return Err(Error::Numeric(format!(
            "image buffer holds {} values, expected {width}x{height}",
            data.len()
        )));
    }
    let max = data.iter().copied().fold(0.0, f64::max);
    let mut bytes = format!("P5\n{width} {height}\n255\n").into_bytes();
    bytes.extend(data.iter().map(|&v| {
        if max > 0.0 {
            (255.0 * v / max).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    fs::write(path, bytes).map_err(Error::from)
}

/// Reads the numeric rows of a CSV written by this module, skipping comments and the header.
pub fn read_numeric_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: std::result::Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match cells {
            Ok(v) => rows.push(v),
            Err(_) if rows.is_empty() => continue, // column header
            Err(_) => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: "non-numeric cell".into(),
                })
            }
        }
    }
    Ok(rows)
}
