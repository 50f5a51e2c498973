//! CSV file formats.
//!
//! Polygon CSV: header `x,y`, one vertex per line, row order = vertex
//! order. Trace CSV: header `k,i,x,y`, k-major. All reals are written
//! with Rust's shortest round-trip formatting, so read(write(p)) is the
//! identity on values; files are UTF-8 with LF line endings.

use crate::error::{CliError, CliResult};
use polygonflow_core::{IterationTrace, Polygon};
use std::fmt::Write as _;
use std::path::Path;

pub fn polygon_to_csv(p: &Polygon) -> String {
    let mut out = String::from("x,y\n");
    for i in 0..p.n() {
        let _ = writeln!(out, "{},{}", p.xs()[i], p.ys()[i]);
    }
    out
}

pub fn trace_to_csv(trace: &IterationTrace) -> String {
    let mut out = String::from("k,i,x,y\n");
    for (k, snap) in trace.polygons().iter().enumerate() {
        for i in 0..snap.n() {
            let _ = writeln!(out, "{},{},{},{}", k, i, snap.xs()[i], snap.ys()[i]);
        }
    }
    out
}

pub fn write_polygon_csv(p: &Polygon, path: &Path) -> CliResult<()> {
    std::fs::write(path, polygon_to_csv(p)).map_err(|e| CliError::io(path, e))
}

pub fn write_trace_csv(trace: &IterationTrace, path: &Path) -> CliResult<()> {
    std::fs::write(path, trace_to_csv(trace)).map_err(|e| CliError::io(path, e))
}

pub fn read_polygon_csv(path: &Path) -> CliResult<Polygon> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_polygon_csv(&text)
}

pub fn parse_polygon_csv(text: &str) -> CliResult<Polygon> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == "x,y" => {}
        Some((_, header)) => {
            return Err(CliError::Format {
                line: 1,
                message: format!("expected header \"x,y\", got \"{}\"", header.trim_end()),
            });
        }
        None => {
            return Err(CliError::Format { line: 1, message: "empty file".into() });
        }
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut last_line = 1;
    for (idx, line) in lines {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split(',');
        let (x, y) = match (fields.next(), fields.next(), fields.next()) {
            (Some(x), Some(y), None) => (x, y),
            _ => {
                return Err(CliError::Format {
                    line: line_no,
                    message: "expected exactly two comma-separated fields".into(),
                });
            }
        };
        let parse = |s: &str| -> CliResult<f64> {
            s.trim().parse::<f64>().map_err(|_| CliError::Format {
                line: line_no,
                message: format!("not a real number: \"{}\"", s),
            })
        };
        xs.push(parse(x)?);
        ys.push(parse(y)?);
    }
    Polygon::new(xs, ys).map_err(|e| CliError::Format { line: last_line, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let p = Polygon::random(17, 42, 1.0).unwrap();
        let csv = polygon_to_csv(&p);
        let q = parse_polygon_csv(&csv).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn header_only_is_too_few_vertices() {
        let err = parse_polygon_csv("x,y\n").unwrap_err();
        match err {
            CliError::Format { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains("3 vertices"));
            }
            other => panic!("unexpected error {:?}", other),
        }
    }

    #[test]
    fn bad_header_and_bad_fields_report_lines() {
        assert!(matches!(
            parse_polygon_csv("a,b\n1,2\n"),
            Err(CliError::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_polygon_csv("x,y\n1,2\n3,nope\n5,6\n"),
            Err(CliError::Format { line: 3, .. })
        ));
        assert!(matches!(
            parse_polygon_csv("x,y\n1,2,3\n"),
            Err(CliError::Format { line: 2, .. })
        ));
    }

    #[test]
    fn trace_csv_has_one_row_per_vertex_per_step() {
        use polygonflow_core::{iterate, DivisionScheme, IterationMode};
        let p = Polygon::new(vec![1.0, -1.0, -1.0, 1.0], vec![1.0, 1.0, -1.0, -1.0]).unwrap();
        let scheme = DivisionScheme::uniform(0.5).unwrap();
        let trace = iterate(&p, &scheme, 2, IterationMode::Unnormalized).unwrap();
        let csv = trace_to_csv(&trace);
        // Header plus 3 snapshots x 4 vertices.
        assert_eq!(csv.lines().count(), 1 + 12);
        assert!(csv.starts_with("k,i,x,y\n"));
        assert!(csv.ends_with('\n'));
    }
}
