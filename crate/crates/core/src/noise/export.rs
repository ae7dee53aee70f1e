//! CSV, plain PGM and SVG output of sampled noise grids.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::NoiseGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFormat {
    Csv,
    Pgm,
    Svg,
}

impl GridFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GridFormat::Csv => "csv",
            GridFormat::Pgm => "pgm",
            GridFormat::Svg => "svg",
        }
    }
}

impl fmt::Display for GridFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for GridFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(GridFormat::Csv),
            "pgm" => Ok(GridFormat::Pgm),
            "svg" | "svg-heatmap" => Ok(GridFormat::Svg),
            other => Err(Error::Config(format!("unknown grid format '{other}' (csv, pgm, svg)"))),
        }
    }
}

/// Header `t,x,value`, then one row per sample with t varying slowest.
/// Numbers use the shortest representation that parses back exactly.
pub fn write_csv<W: Write>(grid: &NoiseGrid, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,x,value")?;
    for (i, t) in grid.t_axis.iter().enumerate() {
        for (j, x) in grid.x_axis.iter().enumerate() {
            writeln!(out, "{t},{x},{}", grid.value(i, j))?;
        }
    }
    Ok(())
}

/// 8-bit gray levels from min–max normalization; a constant grid maps to 128.
fn gray_levels(values: &[f64]) -> Vec<u8> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return vec![128; values.len()];
    }
    values
        .iter()
        .map(|v| ((v - lo) / (hi - lo) * 255.0).round() as u8)
        .collect()
}

/// Plain (P2) PGM with x across and the latest time on the top row.
pub fn write_pgm<W: Write>(grid: &NoiseGrid, mut out: W) -> std::io::Result<()> {
    let (nt, nx) = (grid.t_axis.len(), grid.x_axis.len());
    let g = gray_levels(&grid.values);
    writeln!(out, "P2\n{nx} {nt}\n255")?;
    for i in (0..nt).rev() {
        let row = &g[i * nx..(i + 1) * nx];
        // Plain PGM lines should stay under 70 characters.
        for chunk in row.chunks(16) {
            let line: Vec<String> = chunk.iter().map(u8::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
    }
    Ok(())
}

const CELL: usize = 4;
const MARGIN: usize = 40;

/// Heatmap of `rect` cells with the latest time at the top and labelled axes.
pub fn write_svg<W: Write>(grid: &NoiseGrid, mut out: W) -> std::io::Result<()> {
    let (nt, nx) = (grid.t_axis.len(), grid.x_axis.len());
    let g = gray_levels(&grid.values);
    let (w, h) = (nx * CELL + 2 * MARGIN, nt * CELL + 2 * MARGIN);
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )?;
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#)?;
    for i in 0..nt {
        let y = MARGIN + (nt - 1 - i) * CELL;
        for j in 0..nx {
            let v = g[i * nx + j];
            let x = MARGIN + j * CELL;
            writeln!(
                out,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="rgb({v},{v},{v})"/>"#
            )?;
        }
    }
    let fmt_end = |v: Option<&f64>| v.map(|v| format!("{v:.3}")).unwrap_or_default();
    let (x0, x1) = (fmt_end(grid.x_axis.first()), fmt_end(grid.x_axis.last()));
    let (t0, t1) = (fmt_end(grid.t_axis.first()), fmt_end(grid.t_axis.last()));
    let bottom = h - MARGIN / 3;
    writeln!(out, r#"<g font-family="sans-serif" font-size="11" fill="black">"#)?;
    writeln!(out, r#"<text x="{MARGIN}" y="{bottom}">{x0}</text>"#)?;
    writeln!(
        out,
        r#"<text x="{}" y="{bottom}" text-anchor="end">{x1}</text>"#,
        w - MARGIN
    )?;
    writeln!(
        out,
        r#"<text x="{}" y="{bottom}" text-anchor="middle">x [c/H0]</text>"#,
        w / 2
    )?;
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{t0}</text>"#,
        MARGIN - 4,
        h - MARGIN
    )?;
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{t1}</text>"#,
        MARGIN - 4,
        MARGIN + 10
    )?;
    writeln!(
        out,
        r#"<text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">t [1/H0]</text>"#,
        h / 2,
        h / 2
    )?;
    writeln!(out, "</g>\n</svg>")?;
    Ok(())
}

pub fn export_grid(grid: &NoiseGrid, path: &Path, format: GridFormat) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    match format {
        GridFormat::Csv => write_csv(grid, &mut out),
        GridFormat::Pgm => write_pgm(grid, &mut out),
        GridFormat::Svg => write_svg(grid, &mut out),
    }
    .and_then(|_| out.flush())
    .map_err(|e| Error::io(path, e))
}

/// Reads the CSV layout written by [`write_csv`] back into
/// (t axis, x axis, values).
pub fn parse_grid_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == "t,x,value" => {}
        other => return Err(Error::Format(format!("expected header 't,x,value', found {other:?}"))),
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!(
                "row {}: expected 3 fields, found {}",
                n + 1,
                fields.len()
            )));
        }
        let mut vals = [0.0; 3];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("row {}: '{f}': {e}", n + 1)))?;
        }
        rows.push(vals);
    }
    let mut t_axis: Vec<f64> = Vec::new();
    for r in &rows {
        if t_axis.last() != Some(&r[0]) {
            t_axis.push(r[0]);
        }
    }
    if t_axis.is_empty() {
        return Ok((Vec::new(), Vec::new(), Vec::new()));
    }
    let nx = rows.len() / t_axis.len();
    if nx * t_axis.len() != rows.len() {
        return Err(Error::Format("rows do not form a rectangular grid".into()));
    }
    let x_axis: Vec<f64> = rows[..nx].iter().map(|r| r[1]).collect();
    for (i, r) in rows.iter().enumerate() {
        if r[0] != t_axis[i / nx] || r[1] != x_axis[i % nx] {
            return Err(Error::Format(format!("row {} breaks the grid order", i + 1)));
        }
    }
    Ok((t_axis, x_axis, rows.iter().map(|r| r[2]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(values: Vec<f64>) -> NoiseGrid {
        NoiseGrid {
            t_axis: vec![0.0, 0.5],
            x_axis: vec![-1.0, 1.0],
            values,
            seed: 1,
            n_modes: 4,
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut buf = Vec::new();
        write_csv(&grid(vec![1.0, 2.0, 3.0, 4.0]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "t,x,value");
        assert_eq!(lines[2], "0,1,2");
    }

    #[test]
    fn csv_round_trip() {
        let g = grid(vec![0.1234567890123, -1e-300, 3.5e12, -0.0]);
        let mut buf = Vec::new();
        write_csv(&g, &mut buf).unwrap();
        let (t, x, v) = parse_grid_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(t, g.t_axis);
        assert_eq!(x, g.x_axis);
        for (a, b) in v.iter().zip(&g.values) {
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn malformed_csv_rejected() {
        assert!(matches!(parse_grid_csv("a,b\n1,2"), Err(Error::Format(_))));
        assert!(parse_grid_csv("t,x,value\n0,0,1\n0,1").is_err());
        assert!(parse_grid_csv("t,x,value\n0,0,1\n0,1,2\n1,0,3").is_err());
    }

    #[test]
    fn constant_grid_is_mid_gray() {
        let mut buf = Vec::new();
        write_pgm(&grid(vec![0.7; 4]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("P2\n2 2\n255\n"));
        let px: Vec<&str> = text.lines().skip(3).flat_map(|l| l.split(' ')).collect();
        assert_eq!(px, vec!["128"; 4]);
    }

    #[test]
    fn pgm_spans_full_range_with_time_upward() {
        let mut buf = Vec::new();
        write_pgm(&grid(vec![0.0, 1.0, 2.0, 4.0]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(rows, vec!["128 255", "0 64"]);
    }

    #[test]
    fn svg_has_cells_and_labels() {
        let mut buf = Vec::new();
        write_svg(&grid(vec![0.0, 1.0, 2.0, 3.0]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.matches("<rect x=").count(), 4);
        assert!(text.contains("x [c/H0]") && text.contains("t [1/H0]"));
        assert!(text.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn format_names() {
        assert_eq!("CSV".parse::<GridFormat>().unwrap(), GridFormat::Csv);
        assert_eq!("svg-heatmap".parse::<GridFormat>().unwrap(), GridFormat::Svg);
        assert!("png".parse::<GridFormat>().is_err());
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let r = export_grid(
            &grid(vec![0.0; 4]),
            Path::new("/nonexistent/dir/g.csv"),
            GridFormat::Csv,
        );
        assert!(matches!(r, Err(Error::Io { .. })));
    }
}
