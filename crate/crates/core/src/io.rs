//! Geometry files: Geomview VECT, flat CSV and JSON.
//!
//! Coordinates are written with the shortest representation that parses back
//! to the same `f64`, so a round trip is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{GeomError, LinkConfiguration, PolyCurve, Provenance, Vec3};

pub const CSV_HEADER: &str = "component,vertex,x,y,z";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("component {component}: {source}")]
    Geometry {
        component: usize,
        #[source]
        source: GeomError,
    },
    #[error("unknown geometry format {0:?}")]
    UnknownFormat(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    File(#[from] std::io::Error),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryFormat {
    Vect,
    Csv,
    Json,
}

impl GeometryFormat {
    /// Guesses from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension()
            .and_then(|e| e.to_str())
            .and_then(|e| e.to_ascii_lowercase().parse().ok())
    }

    /// Guesses from file contents.
    pub fn sniff(text: &str) -> Option<Self> {
        let t = text.trim_start();
        if t.starts_with("VECT") {
            Some(GeometryFormat::Vect)
        } else if t.starts_with('{') {
            Some(GeometryFormat::Json)
        } else if t.starts_with(CSV_HEADER) {
            Some(GeometryFormat::Csv)
        } else {
            None
        }
    }
}

impl FromStr for GeometryFormat {
    type Err = IoError;
    fn from_str(s: &str) -> Result<Self, IoError> {
        match s {
            "vect" => Ok(GeometryFormat::Vect),
            "csv" => Ok(GeometryFormat::Csv),
            "json" => Ok(GeometryFormat::Json),
            _ => Err(IoError::UnknownFormat(s.to_string())),
        }
    }
}

pub fn write_vect(link: &LinkConfiguration) -> String {
    let comps = &link.components;
    let total: usize = comps.iter().map(PolyCurve::len).sum();
    let mut out = String::with_capacity(total * 60 + 64);
    out.push_str("VECT\n");
    let _ = writeln!(out, "{} {} 0", comps.len(), total);
    let counts: Vec<String> = comps
        .iter()
        .map(|c| {
            let n = c.len() as i64;
            (if c.is_closed() { -n } else { n }).to_string()
        })
        .collect();
    let _ = writeln!(out, "{}", counts.join(" "));
    let zeros = vec!["0"; comps.len()];
    let _ = writeln!(out, "{}", zeros.join(" "));
    for c in comps {
        for v in c.vertices() {
            let _ = writeln!(out, "{} {} {}", v.x, v.y, v.z);
        }
    }
    out
}

pub fn write_csv(link: &LinkConfiguration) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, c) in link.components.iter().enumerate() {
        for (j, v) in c.vertices().iter().enumerate() {
            let _ = writeln!(out, "{i},{j},{},{},{}", v.x, v.y, v.z);
        }
    }
    out
}

pub fn write_json(link: &LinkConfiguration) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(link)?;
    s.push('\n');
    Ok(s)
}

pub fn to_text(link: &LinkConfiguration, format: GeometryFormat) -> Result<String, IoError> {
    match format {
        GeometryFormat::Vect => Ok(write_vect(link)),
        GeometryFormat::Csv => Ok(write_csv(link)),
        GeometryFormat::Json => write_json(link),
    }
}

pub fn export_geometry(
    link: &LinkConfiguration,
    format: GeometryFormat,
    path: &Path,
) -> Result<(), IoError> {
    fs::write(path, to_text(link, format)?)?;
    Ok(())
}

/// Whitespace-separated tokens with their 1-based positions; `#` starts a comment.
struct Tokens<'a> {
    items: Vec<(usize, usize, &'a str)>,
    next: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut last_line = 0;
        for (ln, line) in text.lines().enumerate() {
            last_line = ln + 1;
            let body = line.split('#').next().unwrap_or("");
            let mut col = 0;
            for piece in body.split(|c: char| c.is_ascii_whitespace()) {
                if !piece.is_empty() {
                    items.push((ln + 1, col + 1, piece));
                }
                col += piece.len() + 1;
            }
        }
        Self {
            items,
            next: 0,
            last_line,
        }
    }

    fn take(&mut self, what: &str) -> Result<(usize, usize, &'a str), IoError> {
        let t = self.items.get(self.next).copied().ok_or_else(|| {
            parse_err(
                self.last_line + 1,
                1,
                format!("unexpected end of file, expected {what}"),
            )
        })?;
        self.next += 1;
        Ok(t)
    }

    fn parse<T: FromStr>(&mut self, what: &str) -> Result<(usize, usize, T), IoError> {
        let (l, c, s) = self.take(what)?;
        s.parse()
            .map(|v| (l, c, v))
            .map_err(|_| parse_err(l, c, format!("expected {what}, found {s:?}")))
    }
}

pub fn parse_vect(text: &str) -> Result<Vec<PolyCurve>, IoError> {
    let mut tk = Tokens::new(text);
    let (l, c, magic) = tk.take("VECT header")?;
    if magic != "VECT" {
        return Err(parse_err(l, c, format!("expected VECT, found {magic:?}")));
    }
    let (_, _, n_lines) = tk.parse::<usize>("component count")?;
    let (vl, vc, n_vertices) = tk.parse::<usize>("vertex count")?;
    let (_, _, n_colors) = tk.parse::<usize>("color count")?;
    let mut counts = Vec::with_capacity(n_lines);
    for _ in 0..n_lines {
        let (l, c, n) = tk.parse::<i64>("per-component vertex count")?;
        if n == 0 {
            return Err(parse_err(l, c, "component with no vertices"));
        }
        counts.push((n.unsigned_abs() as usize, n < 0));
    }
    let sum: usize = counts.iter().map(|c| c.0).sum();
    if sum != n_vertices {
        return Err(parse_err(
            vl,
            vc,
            format!("header says {n_vertices} vertices, components hold {sum}"),
        ));
    }
    let mut color_sum = 0usize;
    for _ in 0..n_lines {
        color_sum += tk.parse::<usize>("per-component color count")?.2;
    }
    if color_sum != n_colors {
        return Err(parse_err(
            vl,
            vc,
            format!("color counts sum to {color_sum}, header says {n_colors}"),
        ));
    }
    let mut curves = Vec::with_capacity(n_lines);
    for (i, &(n, closed)) in counts.iter().enumerate() {
        let mut vs = Vec::with_capacity(n);
        for _ in 0..n {
            let x = tk.parse::<f64>("x coordinate")?.2;
            let y = tk.parse::<f64>("y coordinate")?.2;
            let z = tk.parse::<f64>("z coordinate")?.2;
            vs.push(Vec3::new(x, y, z));
        }
        curves.push(
            PolyCurve::new(vs, closed).map_err(|source| IoError::Geometry {
                component: i,
                source,
            })?,
        );
    }
    for _ in 0..n_colors * 4 {
        tk.parse::<f64>("color component")?;
    }
    if let Some(&(l, c, s)) = tk.items.get(tk.next) {
        return Err(parse_err(l, c, format!("trailing data {s:?}")));
    }
    Ok(curves)
}

pub fn parse_csv(text: &str) -> Result<Vec<PolyCurve>, IoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((_, h)) => {
            return Err(parse_err(
                1,
                1,
                format!("expected header {CSV_HEADER:?}, found {h:?}"),
            ))
        }
        None => return Err(parse_err(1, 1, "empty file")),
    }
    let mut groups: Vec<Vec<Vec3>> = Vec::new();
    for (ln, line) in lines {
        let line_no = ln + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = Vec::with_capacity(5);
        let mut col = 1;
        for f in line.split(',') {
            fields.push((col, f.trim()));
            col += f.len() + 1;
        }
        if fields.len() != 5 {
            return Err(parse_err(
                line_no,
                1,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let int = |k: usize, what: &str| -> Result<usize, IoError> {
            let (c, s) = fields[k];
            s.parse()
                .map_err(|_| parse_err(line_no, c, format!("expected {what}, found {s:?}")))
        };
        let float = |k: usize| -> Result<f64, IoError> {
            let (c, s) = fields[k];
            s.parse()
                .map_err(|_| parse_err(line_no, c, format!("expected a number, found {s:?}")))
        };
        let comp = int(0, "component index")?;
        let vert = int(1, "vertex index")?;
        if comp == groups.len() {
            groups.push(Vec::new());
        } else if comp + 1 != groups.len() {
            return Err(parse_err(
                line_no,
                fields[0].0,
                format!("component {comp} out of order"),
            ));
        }
        let g = groups.last_mut().expect("pushed above");
        if vert != g.len() {
            return Err(parse_err(
                line_no,
                fields[1].0,
                format!("vertex {vert} out of order, expected {}", g.len()),
            ));
        }
        g.push(Vec3::new(float(2)?, float(3)?, float(4)?));
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(i, vs)| {
            PolyCurve::closed(vs).map_err(|source| IoError::Geometry {
                component: i,
                source,
            })
        })
        .collect()
}

pub fn parse_json(text: &str) -> Result<LinkConfiguration, IoError> {
    let link: LinkConfiguration = serde_json::from_str(text)?;
    link.validate().map_err(|source| IoError::Geometry {
        component: 0,
        source,
    })?;
    Ok(link)
}

/// Formats without link metadata come back as a single-winding link with one
/// component per curve.
pub fn from_text(text: &str, format: GeometryFormat) -> Result<LinkConfiguration, IoError> {
    let curves = match format {
        GeometryFormat::Json => return parse_json(text),
        GeometryFormat::Vect => parse_vect(text)?,
        GeometryFormat::Csv => parse_csv(text)?,
    };
    let q = curves.len() as u32;
    LinkConfiguration::new(curves, 1, q, Provenance::new("import")).map_err(|source| {
        IoError::Geometry {
            component: 0,
            source,
        }
    })
}

/// Reads a geometry file, choosing the format by extension or contents.
pub fn import_geometry(path: &Path) -> Result<LinkConfiguration, IoError> {
    let text = fs::read_to_string(path)?;
    let format = GeometryFormat::from_path(path)
        .or_else(|| GeometryFormat::sniff(&text))
        .ok_or_else(|| IoError::UnknownFormat(path.display().to_string()))?;
    from_text(&text, format)
}
