//! Command implementations.
//!
//! Output conventions: CSV and SVG artifacts are written to their
//! `--out-*` paths when given; a command's primary text output (the CSV
//! for `gen` and `predict`, the JSON report for the analysis commands)
//! falls back to standard output when its path is absent.

use crate::config::RunConfig;
use crate::csvio;
use crate::error::{CliError, CliResult};
use crate::report::{self, to_json_string};
use crate::svg::{write_svg, SvgScene};
use polygonflow_core::ellipse::{drifted_phases, fit_ellipse, published_sigma, CoefficientMatrix};
use polygonflow_core::harmonic::{predicted_trace, rotation_number};
use polygonflow_core::hetero::LimitPrediction;
use polygonflow_core::periodicity;
use polygonflow_core::spectral;
use polygonflow_core::{
    iterate, DivisionScheme, IterationMode, IterationTrace, Polygon, TransformMatrix,
};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Gen,
    Iterate,
    Spectrum,
    Predict,
    Ellipse,
    Period,
    Hetero,
    Sweep,
}

/// Runs one command against a validated configuration. Returns after all
/// requested files are written; errors carry the exit-code class.
pub fn run(cmd: CommandKind, cfg: &RunConfig) -> CliResult<()> {
    match cmd {
        CommandKind::Gen => run_gen(cfg),
        CommandKind::Iterate => run_iterate(cfg),
        CommandKind::Spectrum => run_spectrum(cfg),
        CommandKind::Predict => run_predict(cfg),
        CommandKind::Ellipse => run_ellipse(cfg),
        CommandKind::Period => run_period(cfg),
        CommandKind::Hetero => run_hetero(cfg),
        CommandKind::Sweep => run_sweep(cfg),
    }
}

fn missing(field: &str, hint: &str) -> CliError {
    CliError::Validation(format!("{}: required {}", field, hint))
}

fn require_n(cfg: &RunConfig) -> CliResult<usize> {
    cfg.vertex_count().ok_or_else(|| missing("n", "for this command"))
}

fn require_uniform_xi(cfg: &RunConfig) -> CliResult<f64> {
    match &cfg.scheme {
        Some(DivisionScheme::Uniform(xi)) => Ok(*xi),
        Some(DivisionScheme::PerSegment(_)) => Err(CliError::Validation(
            "xi: this command needs a uniform division point, not xi_list".into(),
        )),
        None => Err(missing("xi", "for this command")),
    }
}

fn require_scheme(cfg: &RunConfig) -> CliResult<DivisionScheme> {
    cfg.scheme.clone().ok_or_else(|| missing("xi", "(or xi_list) for this command"))
}

/// Polygon source: exactly one of an input CSV or (n, seed).
fn load_polygon(cfg: &RunConfig) -> CliResult<Polygon> {
    match (&cfg.input, cfg.vertex_count(), cfg.seed) {
        (Some(path), _, None) => csvio::read_polygon_csv(path),
        (Some(_), _, Some(_)) => Err(CliError::Validation(
            "input: give either an input file or (n, seed), not both".into(),
        )),
        (None, Some(n), Some(seed)) => Ok(Polygon::random(n, seed, cfg.half_width)?),
        (None, _, _) => Err(CliError::Validation(
            "input: a polygon source is required: either input or (n, seed)".into(),
        )),
    }
}

fn emit(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn mode_name(mode: IterationMode) -> String {
    match mode {
        IterationMode::Normalized => "normalized".into(),
        IterationMode::Unnormalized => "unnormalized".into(),
    }
}

fn interval_json(p: &Polygon) -> [[f64; 2]; 2] {
    let ((x0, x1), (y0, y1)) = p.bounding_interval();
    [[x0, x1], [y0, y1]]
}

fn write_trace_outputs(cfg: &RunConfig, trace: &IterationTrace) -> CliResult<()> {
    if let Some(path) = &cfg.out_trace {
        csvio::write_trace_csv(trace, path)?;
    }
    if let Some(path) = &cfg.out_svg {
        write_svg(&SvgScene::from_trace(trace), path)?;
    }
    Ok(())
}

fn run_gen(cfg: &RunConfig) -> CliResult<()> {
    if cfg.input.is_some() {
        return Err(CliError::Validation("input: gen generates its own polygon".into()));
    }
    let n = require_n(cfg)?;
    let seed = cfg.seed.ok_or_else(|| missing("seed", "to generate a polygon"))?;
    let polygon = Polygon::random(n, seed, cfg.half_width)?;
    emit(cfg.out_trace.as_ref(), &csvio::polygon_to_csv(&polygon))
}

fn run_iterate(cfg: &RunConfig) -> CliResult<()> {
    let polygon = load_polygon(cfg)?;
    let scheme = require_scheme(cfg)?;
    let trace = iterate(&polygon, &scheme, cfg.steps, cfg.mode)?;
    write_trace_outputs(cfg, &trace)?;

    let last = trace.snapshot(trace.len() - 1);
    let (cx, cy) = last.centroid();
    let &(nx, ny) = trace.norms().last().expect("trace has at least one snapshot");
    let ellipse_fit = if cfg.mode == IterationMode::Normalized && last.n() >= 6 {
        let points: Vec<(f64, f64)> = (0..last.n())
            .map(|i| (last.xs()[i], last.ys()[i]))
            .collect();
        fit_ellipse(&points).ok().map(|fit| report::EllipseFitJson {
            center: [fit.center.0, fit.center.1],
            semi_axes: [fit.semi_axes.0, fit.semi_axes.1],
            angle: fit.angle,
        })
    } else {
        None
    };
    let (xi, xi_list) = match &scheme {
        DivisionScheme::Uniform(xi) => (Some(*xi), None),
        DivisionScheme::PerSegment(xis) => (None, Some(xis.clone())),
    };
    let summary = report::IterateReport {
        n: polygon.n(),
        mode: mode_name(cfg.mode),
        xi,
        xi_list,
        steps: cfg.steps,
        seed: cfg.seed,
        final_centroid: [cx, cy],
        final_norms: [nx, ny],
        initial_interval: interval_json(trace.snapshot(0)),
        final_interval: interval_json(last),
        ellipse_fit,
    };
    emit(cfg.out_report.as_ref(), &to_json_string(&summary))
}

fn run_spectrum(cfg: &RunConfig) -> CliResult<()> {
    let n = require_n(cfg)?;
    let xi = require_uniform_xi(cfg)?;
    let mut csv = String::from("j,re_lambda,im_lambda,abs_lambda\n");
    for j in 0..n {
        let lambda = spectral::eigenvalue(n, xi, j);
        csv.push_str(&format!("{},{},{},{}\n", j, lambda.re, lambda.im, lambda.norm()));
    }
    emit(cfg.out_trace.as_ref(), &csv)?;

    let summary = if n >= 5 {
        let damping = spectral::damping_factor(n, xi)?;
        report::SpectrumSummary {
            n,
            xi,
            rho: Some(damping.rho),
            rho_closed_form: Some(spectral::rho_closed_form(n, xi)),
            rho_printed_form: Some(spectral::rho_printed_form(n, xi)),
            argmin_xi: Some(damping.argmin_xi),
        }
    } else {
        report::SpectrumSummary {
            n,
            xi,
            rho: None,
            rho_closed_form: None,
            rho_printed_form: None,
            argmin_xi: None,
        }
    };
    emit(cfg.out_report.as_ref(), &to_json_string(&summary))
}

fn run_predict(cfg: &RunConfig) -> CliResult<()> {
    let n = require_n(cfg)?;
    let xi = require_uniform_xi(cfg)?;
    let rn = rotation_number(n, xi)?;
    let trace = predicted_trace(cfg.theta_u, cfg.theta_v, &rn, cfg.steps);
    if let Some(path) = &cfg.out_svg {
        write_svg(&SvgScene::from_trace(&trace), path)?;
    }
    emit(cfg.out_trace.as_ref(), &csvio::trace_to_csv(&trace))
}

fn run_ellipse(cfg: &RunConfig) -> CliResult<()> {
    let n = require_n(cfg)?;
    let xi = require_uniform_xi(cfg)?;
    let rn = rotation_number(n, xi)?;
    let (a_phase, b_phase) = drifted_phases(cfg.theta_u, cfg.theta_v, rn.phase, cfg.k);
    let dec = CoefficientMatrix::from_phases(a_phase, b_phase).decompose(n);
    let (p1, p2) = published_sigma(cfg.theta_u, cfg.theta_v, cfg.k, rn.phase, n);
    let discrepancy = (dec.semi_axes.0 - p1).abs().max((dec.semi_axes.1 - p2).abs()) > 1e-9;
    let summary = report::EllipseReport {
        n,
        xi,
        theta_u: cfg.theta_u,
        theta_v: cfg.theta_v,
        k: cfg.k,
        a_phase,
        b_phase,
        sigma_svd: [dec.sigma1, dec.sigma2],
        sigma_published: [p1, p2],
        semi_axes: [dec.semi_axes.0, dec.semi_axes.1],
        orientation_rad: dec.orientation().ok(),
        discrepancy_flag: discrepancy,
    };
    emit(cfg.out_report.as_ref(), &to_json_string(&summary))
}

fn run_period(cfg: &RunConfig) -> CliResult<()> {
    let n = require_n(cfg)?;
    let xi = require_uniform_xi(cfg)?;
    let rn = rotation_number(n, xi)?;
    let trace = if cfg.steps >= 2 {
        Some(predicted_trace(cfg.theta_u, cfg.theta_v, &rn, cfg.steps))
    } else {
        None
    };
    if let Some(t) = &trace {
        write_trace_outputs(cfg, t)?;
    }
    let rep = periodicity::period_report(n, xi, cfg.qmax, trace.as_ref(), 1e-8)?;
    let summary = report::PeriodReportJson {
        n,
        xi,
        arg_z: rn.phase,
        qmax: cfg.qmax,
        exact: rep.exact.map(|e| report::ExactPeriodJson { period: e.period, p: e.p, q: e.q }),
        near: rep
            .near
            .iter()
            .map(|c| report::NearPeriodJson { period: c.period, deviation: c.deviation })
            .collect(),
        empirical: rep.empirical.map(|e| report::EmpiricalPeriodJson {
            period: e.period,
            distance: e.distance,
            offset: e.offset,
        }),
    };
    emit(cfg.out_report.as_ref(), &to_json_string(&summary))
}

fn run_hetero(cfg: &RunConfig) -> CliResult<()> {
    let polygon = load_polygon(cfg)?;
    let scheme = require_scheme(cfg)?;
    let transform = TransformMatrix::new(polygon.n(), scheme.clone())?;
    let prediction = LimitPrediction::compute(&polygon, &transform)?;
    // The limit analysis concerns the raw (unnormalized) dynamics.
    let trace = iterate(&polygon, &scheme, cfg.steps, IterationMode::Unnormalized)?;
    write_trace_outputs(cfg, &trace)?;

    let last = trace.snapshot(trace.len() - 1);
    let (lx, ly) = prediction.point;
    let max_deviation = (0..last.n())
        .map(|i| (last.xs()[i] - lx).hypot(last.ys()[i] - ly))
        .fold(0.0, f64::max);
    let (ex, ey) = last.centroid();
    let xis = match &scheme {
        DivisionScheme::Uniform(xi) => vec![*xi; polygon.n()],
        DivisionScheme::PerSegment(xis) => xis.clone(),
    };
    let summary = report::HeteroReport {
        n: polygon.n(),
        xis,
        steps: cfg.steps,
        weights: prediction.weights,
        limit_point: [lx, ly],
        spectral_gap: prediction.spectral_gap,
        empirical_limit: [ex, ey],
        max_deviation,
    };
    emit(cfg.out_report.as_ref(), &to_json_string(&summary))
}

fn sweep_threads(task_count: usize) -> usize {
    let requested = std::env::var("POLYGONFLOW_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        });
    requested.min(task_count).max(1)
}

fn run_sweep(cfg: &RunConfig) -> CliResult<()> {
    let seed = cfg.seed.ok_or_else(|| missing("seed", "to generate sweep polygons"))?;
    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("sweep"));
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;

    let tasks: Vec<(usize, f64)> = cfg
        .sweep_ns
        .iter()
        .flat_map(|&n| cfg.sweep_xis.iter().map(move |&xi| (n, xi)))
        .collect();
    let results: Mutex<Vec<Option<CliResult<report::SweepRun>>>> =
        Mutex::new((0..tasks.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = sweep_threads(tasks.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= tasks.len() {
                    break;
                }
                let (n, xi) = tasks[idx];
                let run = sweep_task(cfg, &out_dir, n, xi, seed);
                results.lock().expect("sweep worker poisoned lock")[idx] = Some(run);
            });
        }
    });

    let mut runs = Vec::with_capacity(tasks.len());
    for slot in results.into_inner().expect("sweep lock intact") {
        runs.push(slot.expect("every task visited")?);
    }
    let summary = report::SweepSummary {
        mode: mode_name(cfg.mode),
        steps: cfg.steps,
        seed,
        runs,
    };
    let report_path = cfg
        .out_report
        .clone()
        .unwrap_or_else(|| out_dir.join("summary.json"));
    std::fs::write(&report_path, to_json_string(&summary))
        .map_err(|e| CliError::io(&report_path, e))
}

fn sweep_task(
    cfg: &RunConfig,
    out_dir: &Path,
    n: usize,
    xi: f64,
    seed: u64,
) -> CliResult<report::SweepRun> {
    let polygon = Polygon::random(n, seed, cfg.half_width)?;
    let scheme = DivisionScheme::uniform(xi)?;
    let trace = iterate(&polygon, &scheme, cfg.steps, cfg.mode)?;
    let trace_path = out_dir.join(format!("trace_n{}_xi{}.csv", n, xi));
    let svg_path = out_dir.join(format!("frames_n{}_xi{}.svg", n, xi));
    csvio::write_trace_csv(&trace, &trace_path)?;
    write_svg(&SvgScene::from_trace(&trace), &svg_path)?;

    let last = trace.snapshot(trace.len() - 1);
    let (final_max_distance_to_centroid, fit_angle) = match cfg.mode {
        IterationMode::Unnormalized => {
            let (cx, cy) = last.centroid();
            let d = (0..last.n())
                .map(|i| (last.xs()[i] - cx).hypot(last.ys()[i] - cy))
                .fold(0.0, f64::max);
            (Some(d), None)
        }
        IterationMode::Normalized => {
            let points: Vec<(f64, f64)> =
                (0..last.n()).map(|i| (last.xs()[i], last.ys()[i])).collect();
            (None, fit_ellipse(&points).ok().map(|fit| fit.angle))
        }
    };
    Ok(report::SweepRun {
        n,
        xi,
        trace: trace_path.display().to_string(),
        svg: svg_path.display().to_string(),
        final_max_distance_to_centroid,
        fit_angle,
    })
}
