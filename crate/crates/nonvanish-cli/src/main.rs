//! Batch CLI: approximate, scan, extract, count zeros, and re-verify
//! reports. Exit codes: 0 success, 1 usage or schema error, 2 pipeline
//! error (error name written into the report), 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nonvanish::engine::{nonvanishing_approx_with, PipelineConfig, TargetFunction};
use nonvanish::error::Error;
use nonvanish::io;
use nonvanish::poly;
use nonvanish::region::CompactRegion;
use nonvanish::zeta::{
    count_zeros_rectangle, extract_polynomial_from_shift, scan_shifts_to_csv, Rectangle,
    ScanConfig, ZetaEvaluator,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_PIPELINE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nonvanish",
    about = "Nonvanishing polynomial approximation on compact plane sets, with a zeta shift laboratory",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RegionFunctionArgs {
    /// Region JSON file.
    #[arg(long)]
    region: PathBuf,
    /// Function JSON file.
    #[arg(long)]
    function: PathBuf,
    /// Target sup-norm tolerance.
    #[arg(long)]
    epsilon: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate the function by a polynomial nonvanishing on the region.
    Approx {
        #[command(flatten)]
        common: RegionFunctionArgs,
        /// Output report JSON path.
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG error-heatmap path.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Degree cap for the fit escalation.
        #[arg(long, default_value_t = 64)]
        degree_max: usize,
        /// Verification samples per boundary element.
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        /// Recorded in the report; runs are deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scan vertical zeta shifts against the target over a t-grid.
    Scan {
        #[command(flatten)]
        common: RegionFunctionArgs,
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        t_step: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Continue an interrupted scan from the rows already in --out.
        #[arg(long, default_value_t = false)]
        resume: bool,
        /// Samples per boundary element for the sup estimates.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Extract a polynomial from a zero-free zeta shift at height T.
    Extract {
        /// Shift height T (must exceed 2).
        #[arg(long)]
        t_shift: f64,
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count zeta zeros in a rectangle by the argument principle.
    Zeros {
        /// Rectangle as re_min,re_max,im_min,im_max.
        #[arg(long)]
        rect: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a report at doubled sample resolution.
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("NONVANISH_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version go to stdout and are not failures.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

fn usage_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

/// Input problems exit 1; anything the engine itself raises exits 2.
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Schema { .. } | Error::Io(_) | Error::InvalidRegion(_) | Error::InvalidFunction(_)
    )
}

fn load_region(path: &Path) -> Result<CompactRegion, Error> {
    let text = std::fs::read_to_string(path)?;
    io::parse_region_json(&text)?.build()
}

fn load_function(path: &Path) -> Result<TargetFunction, Error> {
    let text = std::fs::read_to_string(path)?;
    io::parse_function_json(&text)?.build(&ZetaEvaluator::default())
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema: &'a str,
    status: &'a str,
    error: &'a str,
    message: String,
}

fn write_error_report(out: &Path, e: &Error) {
    let report = ErrorReport {
        schema: io::SCHEMA_VERSION,
        status: "error",
        error: e.name(),
        message: e.to_string(),
    };
    if let Ok(text) = serde_json::to_string_pretty(&report) {
        let _ = std::fs::write(out, text + "\n");
    }
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Approx { common, out, plot, degree_max, samples, seed } => {
            cmd_approx(common, out, plot, degree_max, samples, seed)
        }
        Command::Scan { common, t_min, t_max, t_step, out, resume, samples, seed } => {
            cmd_scan(common, t_min, t_max, t_step, out, resume, samples, seed)
        }
        Command::Extract { t_shift, region, epsilon, out } => cmd_extract(t_shift, region, epsilon, out),
        Command::Zeros { rect, out } => cmd_zeros(rect, out),
        Command::Verify { report, region, function } => cmd_verify(report, region, function),
    }
}

fn cmd_approx(
    common: RegionFunctionArgs,
    out: PathBuf,
    plot: Option<PathBuf>,
    degree_max: usize,
    samples: usize,
    seed: u64,
) -> u8 {
    if !(common.epsilon > 0.0 && common.epsilon.is_finite()) {
        return usage_error("--epsilon must be positive and finite");
    }
    if degree_max == 0 || samples < 16 {
        return usage_error("--degree-max must be at least 1 and --samples at least 16");
    }
    let region = match load_region(&common.region) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let f = match load_function(&common.function) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let cfg = PipelineConfig {
        degree_cap: degree_max,
        boundary_samples: samples,
        fit_samples: 256.max(4 * degree_max),
        seed,
        ..PipelineConfig::default()
    };
    match nonvanishing_approx_with(&f, &region, common.epsilon, &cfg) {
        Ok(report) => {
            if let Err(e) = std::fs::write(&out, io::report_to_json(&report) + "\n") {
                return usage_error(e);
            }
            if let Some(plot_path) = plot {
                let svg =
                    nonvanish::plot::render_error_heatmap(&region, &f, &report.polynomial(), 160);
                if let Err(e) = std::fs::write(&plot_path, svg) {
                    return usage_error(e);
                }
            }
            println!(
                "ok: degree {} sup_error {:.6e} min_modulus {:.6e} -> {}",
                report.degree,
                report.sup_error,
                report.min_modulus,
                out.display()
            );
            EXIT_OK
        }
        Err(e) if is_usage(&e) => usage_error(e),
        Err(e) => {
            write_error_report(&out, &e);
            eprintln!("pipeline error: {e}");
            EXIT_PIPELINE
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    common: RegionFunctionArgs,
    t_min: f64,
    t_max: f64,
    t_step: f64,
    out: PathBuf,
    resume: bool,
    samples: usize,
    _seed: u64,
) -> u8 {
    if !(common.epsilon > 0.0 && common.epsilon.is_finite()) {
        return usage_error("--epsilon must be positive and finite");
    }
    if !(t_step > 0.0) || !t_min.is_finite() || !t_max.is_finite() || t_max < t_min {
        return usage_error("--t-step must be positive and --t-min <= --t-max");
    }
    if samples < 8 {
        return usage_error("--samples must be at least 8");
    }
    let region = match load_region(&common.region) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let f = match load_function(&common.function) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let ev = ZetaEvaluator::default();
    let cfg = ScanConfig { boundary_samples: samples, interior_resolution: 12 };
    match scan_shifts_to_csv(
        &ev, &f, &region, common.epsilon, t_min, t_max, t_step, &cfg, &out, resume,
    ) {
        Ok(outcome) => {
            println!(
                "ok: {} grid points, density {:.6} at epsilon {:.3e} -> {}",
                outcome.records.len(),
                outcome.density,
                outcome.epsilon,
                out.display()
            );
            EXIT_OK
        }
        Err(e) if is_usage(&e) => usage_error(e),
        Err(e) => {
            eprintln!("pipeline error: {e}");
            EXIT_PIPELINE
        }
    }
}

#[derive(Serialize)]
struct ExtractOut<'a> {
    schema: &'a str,
    status: &'a str,
    polynomial: Vec<[f64; 2]>,
    #[serde(flatten)]
    report: &'a nonvanish::zeta::ExtractionReport,
}

fn cmd_extract(t_shift: f64, region_path: PathBuf, epsilon: f64, out: PathBuf) -> u8 {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return usage_error("--epsilon must be positive and finite");
    }
    let region = match load_region(&region_path) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let ev = ZetaEvaluator::default();
    match extract_polynomial_from_shift(&ev, t_shift, &region, epsilon) {
        Ok((p, report)) => {
            let payload = ExtractOut {
                schema: io::SCHEMA_VERSION,
                status: "ok",
                polynomial: p.to_pairs(),
                report: &report,
            };
            match serde_json::to_string_pretty(&payload) {
                Ok(text) => {
                    if let Err(e) = std::fs::write(&out, text + "\n") {
                        return usage_error(e);
                    }
                }
                Err(e) => return usage_error(e),
            }
            println!(
                "ok: degree {} gap {:.6e} delta {:.6e} -> {}",
                report.degree,
                report.gap,
                report.delta,
                out.display()
            );
            EXIT_OK
        }
        Err(e) if is_usage(&e) => usage_error(e),
        Err(e) => {
            write_error_report(&out, &e);
            eprintln!("pipeline error: {e}");
            EXIT_PIPELINE
        }
    }
}

#[derive(Serialize)]
struct ZerosOut<'a> {
    schema: &'a str,
    status: &'a str,
    rectangle: [f64; 4],
    count: i64,
    contour_samples: usize,
    winding_residual: f64,
}

fn cmd_zeros(rect: String, out: PathBuf) -> u8 {
    let parts: Vec<f64> = rect
        .split(',')
        .filter_map(|s| s.trim().parse().ok())
        .collect();
    if parts.len() != 4 {
        return usage_error("--rect must be four comma-separated numbers: re_min,re_max,im_min,im_max");
    }
    let rectangle = match Rectangle::new(parts[0], parts[1], parts[2], parts[3]) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    match count_zeros_rectangle(&ZetaEvaluator::default(), rectangle) {
        Ok(result) => {
            let payload = ZerosOut {
                schema: io::SCHEMA_VERSION,
                status: "ok",
                rectangle: [
                    result.rectangle.re_min,
                    result.rectangle.re_max,
                    result.rectangle.im_min,
                    result.rectangle.im_max,
                ],
                count: result.count,
                contour_samples: result.contour_samples,
                winding_residual: result.winding_residual,
            };
            match serde_json::to_string_pretty(&payload) {
                Ok(text) => {
                    if let Err(e) = std::fs::write(&out, text + "\n") {
                        return usage_error(e);
                    }
                }
                Err(e) => return usage_error(e),
            }
            println!("ok: {} zero(s), residual {:.3e} -> {}", result.count, result.winding_residual, out.display());
            EXIT_OK
        }
        Err(e) => {
            write_error_report(&out, &e);
            eprintln!("pipeline error: {e}");
            EXIT_PIPELINE
        }
    }
}

fn cmd_verify(report_path: PathBuf, region_path: PathBuf, function_path: PathBuf) -> u8 {
    let report_text = match std::fs::read_to_string(&report_path) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let report = match io::parse_report_json(&report_text) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let region = match load_region(&region_path) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let f = match load_function(&function_path) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    if region.hash() != report.region_hash {
        return usage_error("region file does not match the report's region hash");
    }
    let p = report.polynomial();

    // Recompute at doubled resolution, pinning the boundary points nearest
    // each root just like the original audit.
    let mut pts = region.boundary_samples(2 * report.boundary_samples_per_component);
    pts.extend(region.interior_samples(2 * report.interior_grid_resolution));
    let mut sup_error = 0.0f64;
    let mut min_modulus = f64::INFINITY;
    for &z in &pts {
        let pv = p.eval(z);
        sup_error = sup_error.max((pv - f.eval(z)).norm());
        min_modulus = min_modulus.min(pv.norm());
    }
    if p.degree() >= 1 {
        match poly::find_roots(&p) {
            Ok(roots) => {
                for r in roots.roots {
                    let pin = region.nearest_boundary_point(r);
                    min_modulus = min_modulus.min(p.eval(pin).norm());
                }
            }
            Err(e) => {
                eprintln!("pipeline error: {e}");
                return EXIT_PIPELINE;
            }
        }
    }

    let sup_ok = sup_error <= 1.1 * report.sup_error + 1e-15;
    let min_ok = min_modulus >= 0.9 * report.min_modulus - 1e-15;
    println!(
        "recheck at 2x resolution: sup_error {:.6e} (reported {:.6e}), min_modulus {:.6e} (reported {:.6e})",
        sup_error, report.sup_error, min_modulus, report.min_modulus
    );
    if sup_ok && min_ok {
        println!("ok: report verified");
        EXIT_OK
    } else {
        eprintln!("verification failed: estimates degraded by more than 10%");
        EXIT_VERIFY
    }
}
