use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::args::Format;
use crate::CliError;

/// Formats `x` with six significant digits, switching to exponent notation
/// for very large or very small magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exp) {
        format!("{x:.*}", (5 - exp).max(0) as usize)
    } else {
        sci
    }
}

/// Rounds half away from zero to two decimals, deciding ties on the
/// decimal expansion so that `2.175` gives `2.18`.
pub fn round2(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let text = format!("{:.9}", x.abs());
    let (int, frac) = text.split_once('.').unwrap();
    let mut cents: u128 = int.parse::<u128>().unwrap() * 100 + frac[..2].parse::<u128>().unwrap();
    if frac.as_bytes()[2] >= b'5' {
        cents += 1;
    }
    let sign = if x < 0.0 && cents != 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", cents / 100, cents % 100)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W, format: Format) -> csv::Result<()> {
        let mut wr = csv::WriterBuilder::new().delimiter(format.delimiter()).from_writer(w);
        wr.write_record(&self.header)?;
        for row in &self.rows {
            wr.write_record(row)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Writes to `path`, or standard output when `None`.
    pub fn emit(&self, path: Option<&Path>, format: Format) -> Result<(), CliError> {
        let res = match path {
            Some(p) => {
                let f = File::create(p).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
                self.write_to(io::BufWriter::new(f), format)
            }
            None => self.write_to(io::stdout().lock(), format),
        };
        res.map_err(|e| CliError::Io(format!("write failed: {e}")))
    }
}

/// A named polyline for [`write_svg`].
pub struct Curve<'a> {
    pub label: String,
    pub points: &'a [(f64, f64)],
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Renders curves as a minimal SVG line plot.
pub fn render_svg(curves: &[Curve], x_label: &str, y_label: &str) -> String {
    let (w, h, m) = (800.0, 500.0, 60.0);
    let pts = curves.iter().flat_map(|c| c.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts.filter(|p| p.0.is_finite() && p.1.is_finite()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        w - 2.0 * m,
        h - 2.0 * m
    );
    let text = |x: f64, y: f64, anchor: &str, t: &str| {
        format!("<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"12\" text-anchor=\"{anchor}\">{t}</text>\n")
    };
    s += &text(m, h - m + 18.0, "middle", &sig6(x0));
    s += &text(w - m, h - m + 18.0, "middle", &sig6(x1));
    s += &text(m - 6.0, h - m + 4.0, "end", &sig6(y0));
    s += &text(m - 6.0, m + 4.0, "end", &sig6(y1));
    s += &text(w / 2.0, h - 15.0, "middle", x_label);
    s += &text(18.0, h / 2.0, "middle", y_label);
    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = c
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        s +=
            &format!("<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" points=\"{}\"/>\n", path.join(" "));
        s += &format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            w - m - 150.0,
            m + 16.0 * (i as f64 + 1.0),
            c.label
        );
    }
    s += "</svg>\n";
    s
}

pub fn write_svg(path: &Path, curves: &[Curve], x_label: &str, y_label: &str) -> Result<(), CliError> {
    std::fs::write(path, render_svg(curves, x_label, y_label))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
