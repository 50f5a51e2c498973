//! JSON report shapes. Field order is fixed by the struct definitions,
//! so serialization is byte-deterministic for equal inputs.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct SpectrumSummary {
    pub n: usize,
    pub xi: f64,
    /// Eigenvalue-ratio damping factor; absent for n < 5 where no second
    /// nontrivial magnitude class exists.
    pub rho: Option<f64>,
    /// Corrected closed form, for cross-checking rho.
    pub rho_closed_form: Option<f64>,
    /// The published simplification, evaluated literally; reported side
    /// by side, not used as ground truth.
    pub rho_printed_form: Option<f64>,
    pub argmin_xi: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct EllipseReport {
    pub n: usize,
    pub xi: f64,
    pub theta_u: f64,
    pub theta_v: f64,
    pub k: usize,
    pub a_phase: f64,
    pub b_phase: f64,
    /// Exact singular values (unscaled).
    pub sigma_svd: [f64; 2],
    /// Published closed-form values (scaled by sqrt(2/n), as printed).
    pub sigma_published: [f64; 2],
    /// sqrt(2/n) * sigma from the exact SVD.
    pub semi_axes: [f64; 2],
    pub orientation_rad: Option<f64>,
    /// True when the published formula and the exact SVD disagree beyond
    /// 1e-9 on the scaled semi-axes.
    pub discrepancy_flag: bool,
}

#[derive(Debug, Serialize)]
pub struct ExactPeriodJson {
    pub period: u64,
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Serialize)]
pub struct NearPeriodJson {
    pub period: u64,
    pub deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct EmpiricalPeriodJson {
    pub period: usize,
    pub distance: f64,
    pub offset: usize,
}

#[derive(Debug, Serialize)]
pub struct PeriodReportJson {
    pub n: usize,
    pub xi: f64,
    pub arg_z: f64,
    pub qmax: i64,
    pub exact: Option<ExactPeriodJson>,
    pub near: Vec<NearPeriodJson>,
    pub empirical: Option<EmpiricalPeriodJson>,
}

#[derive(Debug, Serialize)]
pub struct EllipseFitJson {
    pub center: [f64; 2],
    pub semi_axes: [f64; 2],
    pub angle: f64,
}

#[derive(Debug, Serialize)]
pub struct IterateReport {
    pub n: usize,
    pub mode: String,
    pub xi: Option<f64>,
    pub xi_list: Option<Vec<f64>>,
    pub steps: usize,
    pub seed: Option<u64>,
    pub final_centroid: [f64; 2],
    /// Centered coordinate-vector norms of the last snapshot.
    pub final_norms: [f64; 2],
    pub initial_interval: [[f64; 2]; 2],
    pub final_interval: [[f64; 2]; 2],
    /// Conic fit of the last snapshot (normalized runs with enough
    /// vertices); absent when the fit is not applicable.
    pub ellipse_fit: Option<EllipseFitJson>,
}

#[derive(Debug, Serialize)]
pub struct HeteroReport {
    pub n: usize,
    pub xis: Vec<f64>,
    pub steps: usize,
    pub weights: Vec<f64>,
    pub limit_point: [f64; 2],
    pub spectral_gap: f64,
    /// Centroid of the final snapshot of the unnormalized run.
    pub empirical_limit: [f64; 2],
    /// Largest distance from any final vertex to the predicted limit.
    pub max_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepRun {
    pub n: usize,
    pub xi: f64,
    pub trace: String,
    pub svg: String,
    /// Unnormalized runs: largest final vertex distance to the centroid.
    pub final_max_distance_to_centroid: Option<f64>,
    /// Normalized runs: fitted principal-axis angle of the last snapshot.
    pub fit_angle: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub mode: String,
    pub steps: usize,
    pub seed: u64,
    pub runs: Vec<SweepRun>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}
