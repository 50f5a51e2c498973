//! Static SVG rendering of iteration traces: selected frames overlaid,
//! earlier frames lighter.

use crate::error::{CliError, CliResult};
use polygonflow_core::{IterationTrace, Polygon};
use std::fmt::Write as _;
use std::path::Path;

/// Frame indices rendered when the caller does not choose: matches the
/// customary overlay density, clipped to the trace length.
pub const DEFAULT_FRAMES: [usize; 8] = [0, 1, 2, 5, 10, 25, 50, 100];

const CANVAS: u32 = 640;

/// A renderable selection of trace frames with a fixed viewport.
#[derive(Debug, Clone)]
pub struct SvgScene {
    frames: Vec<(usize, Polygon)>,
    /// (min_x, min_y, width, height): the step-0 bounding interval plus a
    /// 5% margin on every side.
    viewport: (f64, f64, f64, f64),
}

impl SvgScene {
    /// Selects `DEFAULT_FRAMES` (clipped to the trace) and computes the
    /// viewport from the first snapshot.
    pub fn from_trace(trace: &IterationTrace) -> Self {
        let ks: Vec<usize> = DEFAULT_FRAMES
            .iter()
            .copied()
            .filter(|&k| k < trace.len())
            .collect();
        Self::from_trace_frames(trace, &ks)
    }

    pub fn from_trace_frames(trace: &IterationTrace, ks: &[usize]) -> Self {
        let frames = ks
            .iter()
            .filter(|&&k| k < trace.len())
            .map(|&k| (k, trace.snapshot(k).clone()))
            .collect();
        let ((x0, x1), (y0, y1)) = trace.snapshot(0).bounding_interval();
        let pad = |lo: f64, hi: f64| {
            let span = hi - lo;
            let margin = if span > 0.0 { 0.05 * span } else { 0.5 };
            (lo - margin, hi + margin)
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Self { frames, viewport: (x0, y0, x1 - x0, y1 - y0) }
    }

    /// Well-formed SVG 1.1 document; byte-deterministic for equal input.
    pub fn render(&self) -> String {
        let (vx, vy, vw, vh) = self.viewport;
        let stroke_width = 0.005 * vw.max(vh);
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
            CANVAS, CANVAS, vx, vy, vw, vh
        );
        // Flip the y axis so larger y renders upward.
        let _ = writeln!(out, r#"<g transform="translate(0 {}) scale(1 -1)">"#, 2.0 * vy + vh);
        let count = self.frames.len();
        for (idx, (k, poly)) in self.frames.iter().enumerate() {
            let gray = if count > 1 {
                204 - (204 * idx) / (count - 1)
            } else {
                0
            };
            let mut points = String::new();
            for i in 0..poly.n() {
                if i > 0 {
                    points.push(' ');
                }
                let _ = write!(points, "{},{}", poly.xs()[i], poly.ys()[i]);
            }
            let _ = writeln!(
                out,
                r##"<polygon data-step="{0}" fill="none" stroke="#{1:02x}{1:02x}{1:02x}" stroke-width="{2}" points="{3}"/>"##,
                k, gray, stroke_width, points
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, "</svg>");
        out
    }
}

pub fn write_svg(scene: &SvgScene, path: &Path) -> CliResult<()> {
    std::fs::write(path, scene.render()).map_err(|e| CliError::io(path, e))
}
