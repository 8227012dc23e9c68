//! Text formats.
//!
//! Point sets: a header line `d m r R count`, optionally followed by the `d`
//! coordinates of the window's lower corner when the window is not centered,
//! then one line `x_1 ... x_d color` per point. Points generated from a
//! lattice append their two integer lattice coordinates. Lines starting with
//! `#` and blank lines are ignored.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every coordinate bit for bit.

use std::io::{BufRead, Write};

use serde::Serialize;
use serde_json::json;

use crate::analysis::InequalityReport;
use crate::correlations::{AutocorrelationMeasure, CorrelationTensor};
use crate::diffraction::DiffractionEstimate;
use crate::error::{Error, Result};
use crate::pointset::{ColoredPoint, ColoredPointSet, Window};

fn join(values: &[f64], sep: &str) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn write_point_set<W: Write>(mut out: W, points: &ColoredPointSet) -> Result<()> {
    let window = points.window();
    write!(
        out,
        "{} {} {} {} {}",
        points.dimension(),
        points.num_colors(),
        points.separation(),
        window.edge(),
        points.len()
    )?;
    if !window.is_centered() {
        write!(out, " {}", join(window.lower(), " "))?;
    }
    writeln!(out)?;
    for i in 0..points.len() {
        write!(out, "{} {}", join(points.position(i), " "), points.color(i))?;
        if let Some([n, m]) = points.lattice_coords(i) {
            write!(out, " {n} {m}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn parse<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} {token:?}"),
    })
}

pub fn read_point_set<R: BufRead>(input: R) -> Result<ColoredPointSet> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            l.as_ref()
                .map(|s| !s.trim().is_empty() && !s.trim_start().starts_with('#'))
                .unwrap_or(true)
        });
    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    let header = header?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 5 {
        return Err(Error::Parse {
            line: header_line,
            message: "header must be `d m r R count`".into(),
        });
    }
    let d: usize = parse(tokens[0], header_line, "dimension")?;
    let m: usize = parse(tokens[1], header_line, "color count")?;
    let r: f64 = parse(tokens[2], header_line, "separation")?;
    let edge: f64 = parse(tokens[3], header_line, "window edge")?;
    let count: usize = parse(tokens[4], header_line, "point count")?;
    let window = match tokens.len() - 5 {
        0 => Window::centered(d, edge),
        extra if extra == d => {
            let lower = tokens[5..]
                .iter()
                .map(|t| parse(t, header_line, "lower corner"))
                .collect::<Result<Vec<f64>>>()?;
            Window::from_lower(lower, edge)?
        }
        _ => {
            return Err(Error::Parse {
                line: header_line,
                message: format!("header has {} fields, expected 5 or {}", tokens.len(), 5 + d),
            })
        }
    };

    let mut plain = Vec::with_capacity(count);
    let mut with_lattice = Vec::new();
    for (line_no, line) in lines {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != d + 1 && tokens.len() != d + 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {} or {} fields, got {}", d + 1, d + 3, tokens.len()),
            });
        }
        let position = tokens[..d]
            .iter()
            .map(|t| parse(t, line_no, "coordinate"))
            .collect::<Result<Vec<f64>>>()?;
        let color = parse(tokens[d], line_no, "color")?;
        let point = ColoredPoint::new(position, color);
        if tokens.len() == d + 3 {
            let n = parse(tokens[d + 1], line_no, "lattice coordinate")?;
            let k = parse(tokens[d + 2], line_no, "lattice coordinate")?;
            with_lattice.push((point, [n, k]));
        } else {
            plain.push(point);
        }
    }
    let found = plain.len() + with_lattice.len();
    if found != count {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header announces {count} points, file has {found}"),
        });
    }
    match (plain.is_empty(), with_lattice.is_empty()) {
        (_, true) => ColoredPointSet::new(m, r, window, plain),
        (true, false) => ColoredPointSet::with_lattice_coords(m, r, window, with_lattice),
        (false, false) => Err(Error::Parse {
            line: header_line,
            message: "either all points or none carry lattice coordinates".into(),
        }),
    }
}

fn header(prefix: &str, d: usize) -> String {
    if d == 1 {
        prefix.to_string()
    } else {
        (1..=d).map(|j| format!("{prefix}{j}")).collect::<Vec<_>>().join(",")
    }
}

/// Rows `t,eta` (or `t1,...,td,eta`).
pub fn write_autocorrelation_csv<W: Write>(mut out: W, ac: &AutocorrelationMeasure) -> Result<()> {
    writeln!(out, "{},eta", header("t", ac.dimension()))?;
    for e in ac.entries() {
        writeln!(out, "{},{}", join(&e.displacement, ","), e.value)?;
    }
    Ok(())
}

pub fn autocorrelation_json(ac: &AutocorrelationMeasure) -> serde_json::Value {
    json!({
        "estimator": "eroded-window",
        "radius_used": ac.radius_used(),
        "max_lag": ac.max_lag(),
        "weights": ac.weights().weights(),
        "intensity": ac.intensity(),
        "entries": ac.entries(),
    })
}

/// Rows `t1,...,tn,value`; in dimension above one each `t_i` is written as
/// space-separated coordinates.
pub fn write_correlation_csv<W: Write>(mut out: W, tensor: &CorrelationTensor) -> Result<()> {
    let names: Vec<String> = (1..=tensor.order).map(|i| format!("t{i}")).collect();
    writeln!(out, "{},value", names.join(","))?;
    for e in &tensor.entries {
        let fields: Vec<String> = e.tuple.iter().map(|t| join(t, " ")).collect();
        writeln!(out, "{},{}", fields.join(","), e.value)?;
    }
    Ok(())
}

pub fn correlation_json(tensor: &CorrelationTensor) -> serde_json::Value {
    json!({
        "estimator": "eroded-window",
        "order": tensor.order,
        "radius_used": tensor.radius_used,
        "weights": tensor.weights,
        "entries": tensor.entries,
    })
}

/// Rows `k,intensity,method`.
pub fn write_diffraction_csv<W: Write>(mut out: W, diff: &DiffractionEstimate) -> Result<()> {
    let d = diff.entries().first().map_or(1, |e| e.k.len());
    writeln!(out, "{},intensity,method", header("k", d))?;
    for e in diff.entries() {
        writeln!(out, "{},{},{}", join(&e.k, ","), e.intensity, diff.method())?;
    }
    Ok(())
}

pub fn diffraction_json(diff: &DiffractionEstimate) -> serde_json::Value {
    json!({
        "method": diff.method().to_string(),
        "scale_used": diff.scale_used(),
        "weights": diff.weights(),
        "entries": diff.entries(),
    })
}

/// Rows `k,t,lhs,rhs,slack,pass`.
pub fn write_inequality_csv<W: Write>(mut out: W, report: &InequalityReport) -> Result<()> {
    writeln!(out, "k,t,lhs,rhs,slack,pass")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            join(&r.k, " "),
            join(&r.t, " "),
            r.lhs,
            r.rhs,
            r.slack,
            r.pass
        )?;
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
