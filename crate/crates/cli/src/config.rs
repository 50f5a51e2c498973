//! Configuration: JSON file plus flag overrides, validated into a
//! [`RunConfig`].
//!
//! Field-level validation (ranges, scheme shape, mode names) happens
//! here for every command; per-command presence requirements (which
//! commands need a polygon source, a scheme, and so on) are enforced at
//! dispatch in [`crate::commands`].

use crate::error::{CliError, CliResult};
use polygonflow_core::{DivisionScheme, IterationMode};
use serde::Deserialize;
use std::path::PathBuf;

pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_HALF_WIDTH: f64 = 1.0;
pub const DEFAULT_QMAX: i64 = 1000;
pub const DEFAULT_THETA_U: f64 = 0.3;
pub const DEFAULT_THETA_V: f64 = 1.2;
pub const DEFAULT_SWEEP_NS: [usize; 3] = [10, 20, 50];
pub const DEFAULT_SWEEP_XIS: [f64; 3] = [0.2, 0.25, 0.4];

/// Raw, possibly partial configuration; unknown keys are rejected.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub n: Option<usize>,
    pub xi: Option<f64>,
    pub xi_list: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub input: Option<PathBuf>,
    pub half_width: Option<f64>,
    pub theta_u: Option<f64>,
    pub theta_v: Option<f64>,
    pub k: Option<usize>,
    pub qmax: Option<i64>,
    pub out_trace: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub out_report: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub sweep_ns: Option<Vec<usize>>,
    pub sweep_xis: Option<Vec<f64>>,
}

impl RawConfig {
    /// Parses a JSON document, rejecting syntax errors and unknown keys.
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Overlays `other` on top of `self`; fields set in `other` win.
    pub fn merged_with(mut self, other: RawConfig) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            n, xi, xi_list, steps, seed, mode, input, half_width, theta_u, theta_v, k, qmax,
            out_trace, out_svg, out_report, out_dir, sweep_ns, sweep_xis
        );
        self
    }
}

/// Fully validated run configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub scheme: Option<DivisionScheme>,
    pub steps: usize,
    pub seed: Option<u64>,
    pub mode: IterationMode,
    pub input: Option<PathBuf>,
    pub half_width: f64,
    pub theta_u: f64,
    pub theta_v: f64,
    pub k: usize,
    pub qmax: i64,
    pub out_trace: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub out_report: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub sweep_ns: Vec<usize>,
    pub sweep_xis: Vec<f64>,
}

impl RunConfig {
    /// Vertex count, from `n` or inferred from a per-segment list.
    pub fn vertex_count(&self) -> Option<usize> {
        self.n.or(match &self.scheme {
            Some(DivisionScheme::PerSegment(xis)) => Some(xis.len()),
            _ => None,
        })
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{}: {}", field, msg))
}

/// Validates fields and applies defaults (mode = normalized, steps = 100).
pub fn validate(raw: RawConfig) -> CliResult<RunConfig> {
    if let Some(n) = raw.n {
        if n < 3 {
            return Err(invalid("n", "a polygon needs at least 3 vertices"));
        }
    }

    let scheme = match (raw.xi, &raw.xi_list) {
        (Some(_), Some(_)) => {
            return Err(invalid("xi", "give either xi or xi_list, not both"));
        }
        (Some(xi), None) => Some(DivisionScheme::uniform(xi).map_err(|e| invalid("xi", e))?),
        (None, Some(xis)) => {
            let scheme =
                DivisionScheme::per_segment(xis.clone()).map_err(|e| invalid("xi_list", e))?;
            if let Some(n) = raw.n {
                if xis.len() != n {
                    return Err(invalid(
                        "xi_list",
                        format!("{} division points for n = {}", xis.len(), n),
                    ));
                }
            }
            Some(scheme)
        }
        (None, None) => None,
    };

    let mode = match raw.mode.as_deref() {
        None | Some("normalized") => IterationMode::Normalized,
        Some("unnormalized") => IterationMode::Unnormalized,
        Some(other) => {
            return Err(invalid(
                "mode",
                format!("expected \"normalized\" or \"unnormalized\", got \"{}\"", other),
            ));
        }
    };

    let half_width = raw.half_width.unwrap_or(DEFAULT_HALF_WIDTH);
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(invalid("half_width", "must be positive"));
    }

    let qmax = raw.qmax.unwrap_or(DEFAULT_QMAX);
    if qmax < 1 {
        return Err(invalid("qmax", "must be at least 1"));
    }

    for (name, value) in [("theta_u", raw.theta_u), ("theta_v", raw.theta_v)] {
        if let Some(v) = value {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
    }

    if let Some(ns) = &raw.sweep_ns {
        if ns.iter().any(|&n| n < 3) {
            return Err(invalid("sweep_ns", "every n must be at least 3"));
        }
    }
    if let Some(xis) = &raw.sweep_xis {
        for &xi in xis {
            DivisionScheme::uniform(xi).map_err(|e| invalid("sweep_xis", e))?;
        }
    }

    Ok(RunConfig {
        n: raw.n,
        scheme,
        steps: raw.steps.unwrap_or(DEFAULT_STEPS),
        seed: raw.seed,
        mode,
        input: raw.input,
        half_width,
        theta_u: raw.theta_u.unwrap_or(DEFAULT_THETA_U),
        theta_v: raw.theta_v.unwrap_or(DEFAULT_THETA_V),
        k: raw.k.unwrap_or(0),
        qmax,
        out_trace: raw.out_trace,
        out_svg: raw.out_svg,
        out_report: raw.out_report,
        out_dir: raw.out_dir,
        sweep_ns: raw.sweep_ns.unwrap_or_else(|| DEFAULT_SWEEP_NS.to_vec()),
        sweep_xis: raw.sweep_xis.unwrap_or_else(|| DEFAULT_SWEEP_XIS.to_vec()),
    })
}

/// Parses and validates a JSON config document.
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    validate(RawConfig::from_json(text)?)
}
