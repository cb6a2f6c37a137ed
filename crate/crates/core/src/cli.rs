//! `refmlm` command-line driver.
//!
//! Data goes to the output stream (or to files), diagnostics to the error
//! stream. Exit code 0 on success, 2 on usage errors, 1 on runtime failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{self, Convention, ReportFormat};
use crate::arith::{log_decompose, mitchell_multiply, UWord};
use crate::imaging::{self, GrayImage, Kernel, NoiseSpec};
use crate::kom::{kom_trace, KomVariant, MiddleTerm, Model, MultiplierConfig};
use crate::pipeline::{self, StageTiming};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "refmlm",
    version,
    about = "Mitchell and error-free recursive log multiplier toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two operands through a multiplier model.
    Mul(MulArgs),
    /// Error statistics of a model against the true product.
    Analyze(AnalyzeArgs),
    /// Cycle count (and optional schedule) of one KOM stage.
    Pipeline(PipelineArgs),
    /// Salt-and-pepper noise followed by Gaussian smoothing of a PGM image.
    Filter(FilterArgs),
    /// Print a 3×3 Gaussian kernel.
    Kernel(KernelArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Operand width in bits (power of two, 2..=32).
    #[arg(long, default_value_t = 8, value_parser = parse_u32_literal)]
    pub width: u32,
    /// exact | mitchell | refmlm | mitchell-kom
    #[arg(long, default_value = "refmlm")]
    pub model: Model,
    /// four-product | three-product
    #[arg(long, default_value = "four-product")]
    pub variant: KomVariant,
}

impl ModelArgs {
    fn config(&self) -> Result<MultiplierConfig, CliError> {
        MultiplierConfig::new(self.model, self.variant, self.width).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct MulArgs {
    #[arg(value_parser = parse_u64_literal)]
    pub a: u64,
    #[arg(value_parser = parse_u64_literal)]
    pub b: u64,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Show the logarithm decomposition or the KOM split.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Pair set for exhaustive runs.
    #[arg(long, conflicts_with_all = ["samples", "seed"])]
    pub convention: Option<Convention>,
    /// Draw this many random pairs instead of enumerating.
    #[arg(long, value_parser = parse_u64_literal)]
    pub samples: Option<u64>,
    #[arg(long, requires = "samples", value_parser = parse_u64_literal)]
    pub seed: Option<u64>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    pub format: ReportFormat,
    /// Report destination; the report goes to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, value_parser = parse_u64_literal)]
    pub pairs: u64,
    #[arg(long, conflicts_with = "non_pipelined")]
    pub pipelined: bool,
    #[arg(long)]
    pub non_pipelined: bool,
    /// Initiation interval override.
    #[arg(long, value_parser = parse_u64_literal)]
    pub ii: Option<u64>,
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Salt-and-pepper density in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value = "1", value_parser = parse_u64_literal)]
    pub seed: u64,
    /// exact | mitchell | refmlm | mitchell-kom
    #[arg(long, default_value = "refmlm")]
    pub model: Model,
    #[arg(long, default_value = "four-product")]
    pub variant: KomVariant,
    /// Build the kernel from σ instead of using the default constants.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 8, requires = "sigma")]
    pub scale_shift: u32,
    /// Metrics report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    pub format: ReportFormat,
    /// Also write the noisy intermediate image.
    #[arg(long)]
    pub save_noisy: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 8, requires = "sigma")]
    pub scale_shift: u32,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

/// Accepts decimal, `0b…` and `0x…` literals, with optional `_` separators.
pub fn parse_u64_literal(s: &str) -> Result<u64, String> {
    let clean: String = s.chars().filter(|&c| c != '_').collect();
    let (digits, radix) = if let Some(rest) = clean.strip_prefix("0b").or_else(|| clean.strip_prefix("0B")) {
        (rest, 2)
    } else if let Some(rest) = clean.strip_prefix("0x").or_else(|| clean.strip_prefix("0X")) {
        (rest, 16)
    } else {
        (clean.as_str(), 10)
    };
    u64::from_str_radix(digits, radix).map_err(|e| format!("invalid number `{s}`: {e}"))
}

fn parse_u32_literal(s: &str) -> Result<u32, String> {
    let v = parse_u64_literal(s)?;
    u32::try_from(v).map_err(|_| format!("`{s}` is out of range"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Mul(a) => cmd_mul(a, out),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Pipeline(a) => cmd_pipeline(a, out),
        Command::Filter(a) => cmd_filter(a, out),
        Command::Kernel(a) => cmd_kernel(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Failure(e.to_string())
}

fn cmd_mul(args: &MulArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = args.model.config()?;
    let width = cfg.width();
    let operand =
        |v: u64| UWord::new(v, width).map_err(|_| CliError::Usage(format!("operand {v} does not fit in {width} bits")));
    let (a, b) = (operand(args.a)?, operand(args.b)?);
    let p_true = args.a * args.b;
    let p_model = cfg.multiply_raw(args.a, args.b);
    let abs_err = p_true as i128 - p_model as i128;

    writeln!(out, "model: {} ({}, {} bits)", cfg.model(), cfg.variant(), width).map_err(io_err)?;
    writeln!(out, "true product: {p_true}").map_err(io_err)?;
    writeln!(out, "model product: {p_model}").map_err(io_err)?;
    writeln!(out, "absolute error: {abs_err}").map_err(io_err)?;
    match analysis::error_rate(p_true, p_model) {
        Ok(er) => writeln!(out, "relative error: {:.6}%", er * 100.0),
        Err(_) => writeln!(out, "relative error: undefined"),
    }
    .map_err(io_err)?;

    if args.trace {
        write_mul_trace(a, b, &cfg, out)?;
    }
    Ok(())
}

fn write_mul_trace(a: UWord, b: UWord, cfg: &MultiplierConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match cfg.model() {
        Model::Mitchell => {
            if a.value() == 0 || b.value() == 0 {
                writeln!(out, "trace: zero operand, product forced to 0").map_err(io_err)?;
                return Ok(());
            }
            let (da, db) = (log_decompose(a).unwrap(), log_decompose(b).unwrap());
            let p = mitchell_multiply(a, b).map_err(|e| CliError::Failure(e.to_string()))?;
            let bits = |m: u64, k: u32| {
                if k == 0 {
                    String::from("0")
                } else {
                    format!("{:0k$b}", m, k = k as usize)
                }
            };
            writeln!(out, "log(a) = k1.x1 = {:b}.{}", da.k, bits(da.mantissa_bits, da.k)).map_err(io_err)?;
            writeln!(out, "log(b) = k2.x2 = {:b}.{}", db.k, bits(db.mantissa_bits, db.k)).map_err(io_err)?;
            writeln!(out, "k1={} x1={} k2={} x2={}", da.k, da.fraction(), db.k, db.fraction()).map_err(io_err)?;
            writeln!(out, "carry case (x1+x2 >= 1): {}", p.carry_case).map_err(io_err)?;
            writeln!(out, "product bits: {:b}", p.value.value()).map_err(io_err)?;
        }
        Model::Refmlm | Model::MitchellKom if cfg.width() >= 4 => {
            let t = kom_trace(a, b, cfg).map_err(|e| CliError::Failure(e.to_string()))?;
            writeln!(out, "a_L={} a_H={}", t.a.low, t.a.high).map_err(io_err)?;
            writeln!(out, "b_L={} b_H={}", t.b.low, t.b.high).map_err(io_err)?;
            writeln!(out, "low={} high={}", t.low, t.high).map_err(io_err)?;
            match t.middle {
                MiddleTerm::Pair { mid1, mid2 } => {
                    writeln!(out, "mid1={mid1} mid2={mid2} mid={}", mid1 + mid2).map_err(io_err)?
                }
                MiddleTerm::Cross { lhs, rhs, value } => writeln!(
                    out,
                    "(a_L-a_H)={} (b_H-b_L)={} cross={} mid={}",
                    lhs.to_i128(),
                    rhs.to_i128(),
                    value,
                    t.low + t.high + value
                )
                .map_err(io_err)?,
            }
            writeln!(out, "product bits: {:b}", t.product).map_err(io_err)?;
        }
        _ => writeln!(out, "trace: no intermediate values for this model").map_err(io_err)?,
    }
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = args.model.config()?;
    let stats = match args.samples {
        Some(samples) => analysis::analyze_sampled(&cfg, samples, args.seed.unwrap_or(1)),
        None => analysis::analyze_exhaustive(&cfg, args.convention.unwrap_or_default()),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut report = Vec::new();
    analysis::export_report(&stats, args.format, &mut report).map_err(io_err)?;
    writeln!(out, "{}", stats.summary_line()).map_err(io_err)?;
    match &args.out {
        Some(path) => fs::write(path, &report).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?,
        None => out.write_all(&report).map_err(io_err)?,
    }
    Ok(())
}

fn cmd_pipeline(args: &PipelineArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let pipelined = !args.non_pipelined;
    let timing = match args.ii {
        Some(ii) => StageTiming::with_initiation_interval(pipelined, ii),
        None if pipelined => Ok(StageTiming::pipelined()),
        None => Ok(StageTiming::non_pipelined()),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let total = pipeline::simulate_stream(args.pairs, &timing).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.trace {
        let events = pipeline::trace_stream(args.pairs, &timing).map_err(|e| CliError::Usage(e.to_string()))?;
        pipeline::write_trace(out, &events).map_err(io_err)?;
    }
    writeln!(out, "total cycles: {total}").map_err(io_err)?;
    Ok(())
}

/// Metrics of one filter run: the two PSNR columns of the experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterReport {
    pub model: Model,
    pub variant: KomVariant,
    pub noise_density: f64,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub mse_corrupted: f64,
    pub mse_smoothed: f64,
    /// `None` when the corrupted image equals the original.
    pub psnr_corrupted_db: Option<f64>,
    /// `None` when the smoothed image equals the original.
    pub psnr_smoothed_db: Option<f64>,
}

impl FilterReport {
    fn to_csv(&self) -> String {
        let db = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "undefined".into());
        format!(
            "# model={},variant={},noise={},seed={}\nfield,value\nrows,{}\ncols,{}\nmse_corrupted,{:.6}\nmse_smoothed,{:.6}\npsnr_corrupted_db,{}\npsnr_smoothed_db,{}\n",
            self.model,
            self.variant,
            self.noise_density,
            self.seed,
            self.rows,
            self.cols,
            self.mse_corrupted,
            self.mse_smoothed,
            db(self.psnr_corrupted_db),
            db(self.psnr_smoothed_db),
        )
    }
}

/// Noise, smoothing and metrics for one image; shared by the CLI and examples.
pub fn run_filter_experiment(
    original: &GrayImage,
    noise: &NoiseSpec,
    kernel: &Kernel,
    cfg: &MultiplierConfig,
) -> Result<(GrayImage, GrayImage, FilterReport), imaging::ImageError> {
    let noisy = imaging::add_salt_pepper(original, noise);
    let smoothed = imaging::convolve3x3(&noisy, kernel, cfg)?;
    let report = FilterReport {
        model: cfg.model(),
        variant: cfg.variant(),
        noise_density: noise.density(),
        seed: noise.seed(),
        rows: original.rows(),
        cols: original.cols(),
        mse_corrupted: imaging::mse(original, &noisy)?,
        mse_smoothed: imaging::mse(original, &smoothed)?,
        psnr_corrupted_db: imaging::psnr(original, &noisy).ok(),
        psnr_smoothed_db: imaging::psnr(original, &smoothed).ok(),
    };
    Ok((noisy, smoothed, report))
}

fn cmd_filter(args: &FilterArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let usage = |e: imaging::ImageError| CliError::Usage(e.to_string());
    let cfg = MultiplierConfig::new(args.model, args.variant, 8).map_err(|e| CliError::Usage(e.to_string()))?;
    let noise = NoiseSpec::new(args.noise, args.seed).map_err(usage)?;
    let kernel = match args.sigma {
        Some(sigma) => imaging::gaussian_kernel_from_sigma(sigma, args.scale_shift).map_err(usage)?,
        None => imaging::gaussian_kernel_default(),
    };
    let bytes = fs::read(&args.input).map_err(|e| CliError::Failure(format!("{}: {e}", args.input.display())))?;
    let original =
        imaging::load_pgm(&bytes).map_err(|e| CliError::Failure(format!("{}: {e}", args.input.display())))?;

    let (noisy, smoothed, report) =
        run_filter_experiment(&original, &noise, &kernel, &cfg).map_err(|e| CliError::Failure(e.to_string()))?;

    let write = |path: &PathBuf, data: &[u8]| {
        fs::write(path, data).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
    };
    if let Some(path) = &args.save_noisy {
        write(path, &imaging::save_pgm(&noisy))?;
    }
    write(&args.out, &imaging::save_pgm(&smoothed))?;

    let text = match args.format {
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => {
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Failure(e.to_string()))? + "\n"
        }
    };
    match &args.report {
        Some(path) => write(path, text.as_bytes())?,
        None => out.write_all(text.as_bytes()).map_err(io_err)?,
    }
    let db = |v: Option<f64>| v.map(|x| format!("{x:.4} dB")).unwrap_or_else(|| "undefined".into());
    writeln!(
        out,
        "PSNR corrupted: {}  PSNR smoothed: {}",
        db(report.psnr_corrupted_db),
        db(report.psnr_smoothed_db)
    )
    .map_err(io_err)?;
    Ok(())
}

fn cmd_kernel(args: &KernelArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kernel = match args.sigma {
        Some(sigma) => {
            imaging::gaussian_kernel_from_sigma(sigma, args.scale_shift).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None => imaging::gaussian_kernel_default(),
    };
    for row in kernel.coefficients() {
        writeln!(out, "{} {} {}", row[0], row[1], row[2]).map_err(io_err)?;
    }
    writeln!(out, "sum={} scale_shift={}", kernel.sum(), kernel.scale_shift()).map_err(io_err)?;
    Ok(())
}
