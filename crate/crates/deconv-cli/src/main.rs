//! `deconv` — adaptive density deconvolution from the command line.
//!
//! Subcommands:
//!
//! * `estimate` — fit a density to noisy observations from a text file;
//! * `simulate` — run the Monte-Carlo program of a TOML config file;
//! * `rates` — emit theoretical-rate abacus curves;
//! * `penalty` — emit penalty curves over the bandwidth grid.
//!
//! Every invocation writes a `run-manifest.json` next to its outputs with
//! the exact command line, seed and tool version, so any output can be
//! reproduced bit-for-bit.

use clap::{Args, Parser, Subcommand};
use deconv::config::ConfigFile;
use deconv::densities::DensityId;
use deconv::error::{Error, Result};
use deconv::estimator::select;
use deconv::experiments::run as run_experiment;
use deconv::noise::{NoiseKind, NoiseModel};
use deconv::penalty::{penalty, PenaltyFamily, PenaltySpec};
use deconv::rates::{abacus, theoretical_rate, RateSpec};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "deconv",
    version,
    about = "Adaptive nonparametric density deconvolution by penalized projection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a density from noisy observations in a text file.
    Estimate(EstimateArgs),
    /// Run the Monte-Carlo simulation program of a TOML config file.
    Simulate(SimulateArgs),
    /// Emit theoretical-rate abacus curves as CSV.
    Rates(RatesArgs),
    /// Emit a penalty curve over the bandwidth grid as CSV.
    Penalty(PenaltyArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Input file: UTF-8 text, one decimal observation per line.
    #[arg(long)]
    input: PathBuf,
    /// Noise kind: laplace, gauss or none.
    #[arg(long)]
    noise: String,
    /// Noise level sigma (exclusive with --s2n).
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Signal-to-noise ratio; sigma = 1/sqrt(s2n) (exclusive with --sigma).
    #[arg(long)]
    s2n: Option<f64>,
    /// Transform size exponent: N = 2^M coefficients.
    #[arg(long = "M", default_value_t = 8, value_parser = clap::value_parser!(u32).range(8..=11))]
    m: u32,
    /// Bandwidth grid step.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Lower edge of the output grid.
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    grid_min: f64,
    /// Upper edge of the output grid.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    grid_max: f64,
    /// Number of output grid points.
    #[arg(long, default_value_t = 201)]
    grid_points: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rayon thread count (overrides the config's `threads`; default: all
    /// cores).  Results are identical for any value.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct RatesArgs {
    /// Density key (e.g. mixgamma, gauss, cauchy).
    #[arg(long)]
    density: String,
    /// Noise kind: laplace, gauss or none.
    #[arg(long)]
    noise: String,
    /// Noise level sigma (exclusive with --s2n).
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Signal-to-noise ratio (exclusive with --sigma; default 4).
    #[arg(long)]
    s2n: Option<f64>,
    /// Comma-separated sample sizes.
    #[arg(long, default_value = "100,250,500,1000,2500")]
    n_values: String,
    /// Vertical offset added to ln(rate) in the abacus column.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    offset: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct PenaltyArgs {
    /// Penalty family: new-laplace, new-gaussian, old-laplace, old-gaussian.
    #[arg(long)]
    family: String,
    /// Sample size entering the penalty scale.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Noise level sigma (exclusive with --s2n; default 0).
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Signal-to-noise ratio (exclusive with --sigma).
    #[arg(long)]
    s2n: Option<f64>,
    /// Bandwidth grid step.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Largest bandwidth of the curve.
    #[arg(long, default_value_t = 10.0 * std::f64::consts::PI)]
    ell_max: f64,
    /// Replace the smoothed zeta(l) by plain max(l, pi).
    #[arg(long, default_value_t = false)]
    unsmoothed_zeta: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Written alongside every output; `invocation` is the exact reproduction
/// recipe.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    config: Option<String>,
    seed: Option<u64>,
    out_dir: String,
    version: String,
    timestamp_unix: u64,
    invocation: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, config: Option<&Path>, seed: Option<u64>, out_dir: &Path) -> Self {
        RunManifest {
            command: command.to_string(),
            config: config.map(|p| p.display().to_string()),
            seed,
            out_dir: out_dir.display().to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            invocation: std::env::args().collect(),
        }
    }

    fn write(&self, out_dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::config(format!("cannot serialise manifest: {e}")))?;
        std::fs::write(out_dir.join("run-manifest.json"), text + "\n")?;
        Ok(())
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Rates(args) => cmd_rates(&args),
        Command::Penalty(args) => cmd_penalty(&args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

/// Parse a sample file: one decimal per line, blank lines ignored.
fn parse_sample(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("non-finite observation {v}"),
                })
            }
            Err(_) => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("not a decimal number: {t:?}"),
                })
            }
        }
    }
    Ok(values)
}

/// Resolve the (sigma, s2n) pair from the two exclusive flags.
///
/// For a real noise kind exactly one of the two must be given; for the
/// noiseless kind neither may be (sigma = 0).  The returned s2n is what the
/// penalty factors use: `1/sigma²` when sigma was given.
fn resolve_noise(kind: NoiseKind, sigma: Option<f64>, s2n: Option<f64>) -> Result<(f64, f64)> {
    match kind {
        NoiseKind::None => {
            if sigma.is_some_and(|s| s != 0.0) || s2n.is_some() {
                return Err(Error::config(
                    "--noise none means sigma = 0; do not pass --sigma or --s2n",
                ));
            }
            // The ratio is irrelevant at sigma = 0 (the plain penalty form
            // never reads it); any positive value works.
            Ok((0.0, 1.0))
        }
        _ => match (sigma, s2n) {
            (Some(_), Some(_)) => Err(Error::config(
                "--sigma and --s2n are mutually exclusive; pass one of them",
            )),
            (None, None) => Err(Error::config(
                "a real noise kind needs --sigma or --s2n to fix its level",
            )),
            (Some(s), None) => {
                if !(s.is_finite() && s > 0.0) {
                    return Err(Error::domain(format!(
                        "sigma must be positive and finite, got {s}"
                    )));
                }
                Ok((s, 1.0 / (s * s)))
            }
            (None, Some(r)) => {
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::domain(format!(
                        "s2n must be positive and finite, got {r}"
                    )));
                }
                Ok((1.0 / r.sqrt(), r))
            }
        },
    }
}

fn family_for(kind: NoiseKind) -> PenaltyFamily {
    match kind {
        NoiseKind::Laplace => PenaltyFamily::NewLaplace,
        NoiseKind::Gaussian => PenaltyFamily::NewGaussian,
        NoiseKind::None => PenaltyFamily::NewLaplace,
    }
}

fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let sample = parse_sample(&args.input)?;
    if sample.len() < 2 {
        return Err(Error::size(format!(
            "need at least 2 observations, got {}",
            sample.len()
        )));
    }
    let kind = NoiseKind::parse(&args.noise)?;
    let (sigma, s2n) = resolve_noise(kind, args.sigma, args.s2n)?;
    let noise = NoiseModel::new(kind, sigma)?;
    let mut spec = PenaltySpec::new(family_for(kind), sample.len(), s2n, sigma)?;
    spec.delta_grid = args.delta;

    let estimate = select(&sample, &noise, &spec, args.m)?;

    if !args.grid_min.is_finite() || !args.grid_max.is_finite() || args.grid_min >= args.grid_max {
        return Err(Error::config(format!(
            "output grid needs finite grid_min < grid_max, got [{}, {}]",
            args.grid_min, args.grid_max
        )));
    }
    if args.grid_points < 2 {
        return Err(Error::config("output grid needs at least 2 points"));
    }
    let step = (args.grid_max - args.grid_min) / (args.grid_points - 1) as f64;
    let xs: Vec<f64> = (0..args.grid_points)
        .map(|i| args.grid_min + i as f64 * step)
        .collect();
    let ys = estimate.evaluate(&xs);

    let mut csv = String::from("x,g_hat\n");
    for (x, y) in xs.iter().zip(&ys) {
        writeln!(csv, "{x},{y}").expect("write to string");
    }
    std::fs::create_dir_all(&args.out)?;
    std::fs::write(args.out.join("estimate.csv"), csv)?;
    RunManifest::new("estimate", Some(&args.input), None, &args.out).write(&args.out)?;

    println!(
        "selected ell={} contrast={} penalty={} n={} noise={} sigma={}",
        estimate.ell,
        estimate.contrast,
        estimate
            .penalty
            .map(|p| p.to_string())
            .unwrap_or_else(|| "none".to_string()),
        sample.len(),
        kind.key(),
        sigma
    );
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let file = ConfigFile::from_path(&args.config)?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| file.run.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let threads = args.threads.or(file.run.threads).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config(format!("cannot build thread pool: {e}")))?;

    let configs = file.experiment_configs()?;
    if configs.is_empty() {
        return Err(Error::config("config file has no [[experiment]] sections"));
    }
    std::fs::create_dir_all(&out_dir)?;
    for (i, cfg) in configs.iter().enumerate() {
        let table = pool.install(|| run_experiment(cfg))?;
        let name = format!("{}-{}.csv", cfg.mode.key(), i + 1);
        std::fs::write(out_dir.join(&name), table.to_csv())?;
        println!("wrote {}", out_dir.join(&name).display());
    }
    RunManifest::new("simulate", Some(&args.config), Some(file.run.seed), &out_dir)
        .write(&out_dir)?;
    Ok(())
}

fn parse_n_values(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let t = part.trim();
        if t.is_empty() {
            continue;
        }
        out.push(t.parse::<usize>().map_err(|_| {
            Error::config(format!("invalid sample size {t:?} in --n-values"))
        })?);
    }
    if out.is_empty() {
        return Err(Error::config("--n-values must list at least one sample size"));
    }
    Ok(out)
}

fn cmd_rates(args: &RatesArgs) -> Result<()> {
    let density = DensityId::parse(&args.density)?;
    let kind = NoiseKind::parse(&args.noise)?;
    // When neither level flag is given, default to s2n = 4 (the
    // middle-of-the-road ratio of the simulation program).
    let (sigma, _) = match (args.sigma, args.s2n, kind) {
        (None, None, NoiseKind::None) => (0.0, 1.0),
        (None, None, _) => resolve_noise(kind, None, Some(4.0))?,
        (s, r, _) => resolve_noise(kind, s, r)?,
    };
    let spec = RateSpec::new(density, kind, sigma)?;
    let ns = parse_n_values(&args.n_values)?;
    let points = abacus(&spec, &ns, args.offset)?;

    let mut csv = String::from("n,ln_n,rate,abacus\n");
    for p in &points {
        let rate = theoretical_rate(&spec, p.n)?;
        writeln!(csv, "{},{},{},{}", p.n, p.ln_n, rate, p.value).expect("write to string");
    }
    std::fs::create_dir_all(&args.out)?;
    std::fs::write(args.out.join("rates.csv"), csv)?;
    RunManifest::new("rates", None, None, &args.out).write(&args.out)?;
    println!(
        "wrote {} ({} points, density={}, noise={}, sigma={})",
        args.out.join("rates.csv").display(),
        points.len(),
        density.key(),
        kind.key(),
        sigma
    );
    Ok(())
}

fn cmd_penalty(args: &PenaltyArgs) -> Result<()> {
    let family = PenaltyFamily::parse(&args.family)?;
    let kind = match family {
        PenaltyFamily::NewLaplace | PenaltyFamily::OldLaplace => NoiseKind::Laplace,
        PenaltyFamily::NewGaussian | PenaltyFamily::OldGaussian => NoiseKind::Gaussian,
    };
    // Default level: sigma = 0 (the noiseless penalty curve).
    let (sigma, s2n) = match (args.sigma, args.s2n) {
        (None, None) | (Some(0.0), None) => (0.0, 1.0),
        (s, r) => resolve_noise(kind, s, r)?,
    };
    let mut spec = PenaltySpec::new(family, args.n, s2n, sigma)?;
    spec.delta_grid = args.delta;
    spec.ell_max = args.ell_max;
    spec.unsmoothed_zeta = args.unsmoothed_zeta;

    let mut csv = String::from("ell,pen\n");
    let mut m = 1usize;
    loop {
        let ell = m as f64 * args.delta;
        if ell > args.ell_max {
            break;
        }
        let pen = penalty(&spec, ell)?;
        writeln!(csv, "{ell},{pen}").expect("write to string");
        m += 1;
    }
    std::fs::create_dir_all(&args.out)?;
    std::fs::write(args.out.join("penalty.csv"), csv)?;
    RunManifest::new("penalty", None, None, &args.out).write(&args.out)?;
    println!(
        "wrote {} (family={}, n={}, sigma={})",
        args.out.join("penalty.csv").display(),
        family.key(),
        args.n,
        sigma
    );
    Ok(())
}
