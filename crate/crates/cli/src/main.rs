//! polygonflow: iterate edge-division averaging on polygons and analyze
//! the dynamics (spectra, closed-form predictions, limiting ellipses,
//! periodicity, heterogeneous schemes).

use clap::{Args, Parser, Subcommand};
use polygonflow_cli::config::{validate, RawConfig};
use polygonflow_cli::error::{CliError, CliResult};
use polygonflow_cli::{run, CommandKind};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "polygonflow", version, about = "Polygon averaging dynamics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random polygon CSV
    Gen(CommonArgs),
    /// Iterate the transform on a polygon; emit trace, SVG, and report
    Iterate(CommonArgs),
    /// Eigenvalues and damping factor of the uniform transform
    Spectrum(CommonArgs),
    /// Closed-form prediction of the normalized dynamics as a trace
    Predict(CommonArgs),
    /// Limiting-ellipse decomposition at one step
    Ellipse(CommonArgs),
    /// Exact, near, and empirical periodicity of the limit dynamics
    Period(CommonArgs),
    /// Per-segment division points: weights and limit point
    Hetero(CommonArgs),
    /// Batch of (n, xi) runs in parallel with a summary
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Vertex count
    #[arg(long)]
    n: Option<usize>,
    /// Uniform division point in (0, 1)
    #[arg(long)]
    xi: Option<f64>,
    /// Per-segment division points, comma separated
    #[arg(long = "xi-list", value_delimiter = ',')]
    xi_list: Option<Vec<f64>>,
    /// Iteration steps (default 100)
    #[arg(long)]
    steps: Option<usize>,
    /// RNG seed for generated polygons
    #[arg(long)]
    seed: Option<u64>,
    /// normalized | unnormalized (default normalized)
    #[arg(long)]
    mode: Option<String>,
    /// Read the polygon from this CSV instead of generating one
    #[arg(long)]
    input: Option<PathBuf>,
    /// Half-width of the coordinate box for generated polygons
    #[arg(long = "half-width")]
    half_width: Option<f64>,
    /// Phase of the first coordinate vector (default 0.3)
    #[arg(long = "theta-u")]
    theta_u: Option<f64>,
    /// Phase of the second coordinate vector (default 1.2)
    #[arg(long = "theta-v")]
    theta_v: Option<f64>,
    /// Step index for the ellipse decomposition (default 0)
    #[arg(long)]
    k: Option<usize>,
    /// Largest denominator scanned for periods (default 1000)
    #[arg(long)]
    qmax: Option<i64>,
    /// Trace / polygon CSV output path
    #[arg(long = "out-trace")]
    out_trace: Option<PathBuf>,
    /// SVG output path
    #[arg(long = "out-svg")]
    out_svg: Option<PathBuf>,
    /// JSON report output path
    #[arg(long = "out-report")]
    out_report: Option<PathBuf>,
    /// Output directory for sweep artifacts (default "sweep")
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    /// Vertex counts for sweep, comma separated (default 10,20,50)
    #[arg(long = "sweep-ns", value_delimiter = ',')]
    sweep_ns: Option<Vec<usize>>,
    /// Division points for sweep, comma separated (default 0.2,0.25,0.4)
    #[arg(long = "sweep-xis", value_delimiter = ',')]
    sweep_xis: Option<Vec<f64>>,
}

impl CommonArgs {
    fn into_raw(self) -> CliResult<RawConfig> {
        let from_file = match &self.config {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                RawConfig::from_json(&text)?
            }
            None => RawConfig::default(),
        };
        let overrides = RawConfig {
            n: self.n,
            xi: self.xi,
            xi_list: self.xi_list,
            steps: self.steps,
            seed: self.seed,
            mode: self.mode,
            input: self.input,
            half_width: self.half_width,
            theta_u: self.theta_u,
            theta_v: self.theta_v,
            k: self.k,
            qmax: self.qmax,
            out_trace: self.out_trace,
            out_svg: self.out_svg,
            out_report: self.out_report,
            out_dir: self.out_dir,
            sweep_ns: self.sweep_ns,
            sweep_xis: self.sweep_xis,
        };
        Ok(from_file.merged_with(overrides))
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let (kind, args) = match cli.command {
        Command::Gen(a) => (CommandKind::Gen, a),
        Command::Iterate(a) => (CommandKind::Iterate, a),
        Command::Spectrum(a) => (CommandKind::Spectrum, a),
        Command::Predict(a) => (CommandKind::Predict, a),
        Command::Ellipse(a) => (CommandKind::Ellipse, a),
        Command::Period(a) => (CommandKind::Period, a),
        Command::Hetero(a) => (CommandKind::Hetero, a),
        Command::Sweep(a) => (CommandKind::Sweep, a),
    };
    let cfg = validate(args.into_raw()?)?;
    run(kind, &cfg)
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {}", err);
        std::process::exit(err.exit_code());
    }
}
