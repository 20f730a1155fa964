//! The Monte-Carlo simulation harness: MISE tables and ratio studies over a
//! catalog of test densities, noise laws, sample sizes and signal-to-noise
//! ratios.
//!
//! # Reproducibility
//!
//! Every random draw flows through a named channel: the channel label (which
//! covers the density, the noise law and the sample size — but deliberately
//! *not* the signal-to-noise ratio or the study mode) is hashed together with
//! the master seed into a ChaCha8 seed, and the replication index selects the
//! ChaCha8 stream.  Consequences:
//!
//! * reruns with the same master seed are byte-identical, regardless of the
//!   rayon thread count (replications are collected in index order);
//! * cells that differ only in signal-to-noise ratio share the same signal
//!   and the same standardised noise draws (the noise is scaled by its σ), so
//!   MISE comparisons across the s2n axis are coupled;
//! * paired designs (the ratio studies) evaluate both arms on the same data.

use crate::densities::{DensityId, TestDensity};
use crate::error::{Error, Result};
use crate::estimator::select_with_grid;
use crate::noise::{NoiseKind, NoiseModel};
use crate::penalty::{model_grid, PenaltyFamily, PenaltySpec};
use crate::risk::{aggregate, ise_exact, ise_interval};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;

/// Study design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Plain MISE table: estimate with the matching penalty, score the ISE.
    BasicMise,
    /// Data-driven signal-to-noise: penalties use `ŝ2n` estimated from the
    /// sample, against the oracle that knows the true value.
    S2nEstimated,
    /// Dependent signal: AR-type or non-mixing inputs with the same marginal,
    /// against independent draws.
    Dependent,
    /// Wrong noise family in the estimator (Laplace ↔ Gaussian), against the
    /// correctly specified one.
    Misspecified,
    /// Estimator pretends the data are noiseless, against the correct one.
    IgnoreNoise,
    /// Interval ISE vs exact spectral ISE on the same fits.
    E1VsE2,
}

impl Mode {
    /// Stable textual key.
    pub fn key(&self) -> &'static str {
        match self {
            Mode::BasicMise => "basic",
            Mode::S2nEstimated => "s2n-estimated",
            Mode::Dependent => "dependent",
            Mode::Misspecified => "misspecified",
            Mode::IgnoreNoise => "ignore-noise",
            Mode::E1VsE2 => "e1-vs-e2",
        }
    }

    /// Parse a textual key.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "basic" => Mode::BasicMise,
            "s2n-estimated" => Mode::S2nEstimated,
            "dependent" => Mode::Dependent,
            "misspecified" => Mode::Misspecified,
            "ignore-noise" => Mode::IgnoreNoise,
            "e1-vs-e2" => Mode::E1VsE2,
            other => {
                return Err(Error::config(format!(
                    "unknown experiment mode {other:?} (expected one of basic, \
                     s2n-estimated, dependent, misspecified, ignore-noise, e1-vs-e2)"
                )))
            }
        })
    }

    fn is_ratio(&self) -> bool {
        !matches!(self, Mode::BasicMise)
    }
}

/// How each replication is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IseChoice {
    /// Interval ISE when the density has a pdf, exact spectral ISE otherwise.
    Auto,
    /// Always interval ISE (errors on the stable laws).
    E1,
    /// Always exact spectral ISE.
    E2,
}

impl IseChoice {
    /// Stable textual key.
    pub fn key(&self) -> &'static str {
        match self {
            IseChoice::Auto => "auto",
            IseChoice::E1 => "e1",
            IseChoice::E2 => "e2",
        }
    }

    /// Parse a textual key.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(IseChoice::Auto),
            "e1" => Ok(IseChoice::E1),
            "e2" => Ok(IseChoice::E2),
            other => Err(Error::config(format!(
                "unknown ISE choice {other:?} (expected auto, e1 or e2)"
            ))),
        }
    }
}

/// Default sample sizes of the simulation program.
pub const DEFAULT_N_VALUES: [usize; 5] = [100, 250, 500, 1000, 2500];
/// Default signal-to-noise ratios of the simulation program.
pub const DEFAULT_S2N_VALUES: [f64; 5] = [2.0, 4.0, 10.0, 100.0, 1000.0];
/// Default replication count.
pub const DEFAULT_REPS: usize = 1000;
/// Default interval-ISE grid size.
pub const DEFAULT_E1_POINTS: usize = 512;

/// Full description of one simulation study.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub densities: Vec<DensityId>,
    pub noises: Vec<NoiseKind>,
    pub n_values: Vec<usize>,
    pub s2n_values: Vec<f64>,
    pub reps: usize,
    /// Transform size exponent (`N = 2^m_exp`).
    pub m_exp: u32,
    /// Bandwidth grid step Δ.
    pub delta_grid: f64,
    /// Bandwidth cap for the model grid.
    pub ell_max: f64,
    /// Penalty cap for the model grid.
    pub pen_max: f64,
    /// Interval-ISE grid size.
    pub e1_points: usize,
    pub ise: IseChoice,
    /// AR coefficient for [`Mode::Dependent`] (required by the AR kinds).
    pub dependence_a: Option<f64>,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// A config with the catalog defaults; the density and noise lists start
    /// empty and must be filled in before [`run`].
    pub fn new(mode: Mode) -> Self {
        ExperimentConfig {
            mode,
            densities: Vec::new(),
            noises: Vec::new(),
            n_values: DEFAULT_N_VALUES.to_vec(),
            s2n_values: DEFAULT_S2N_VALUES.to_vec(),
            reps: DEFAULT_REPS,
            m_exp: 8,
            delta_grid: PenaltySpec::DEFAULT_DELTA,
            ell_max: PenaltySpec::DEFAULT_ELL_MAX,
            pen_max: PenaltySpec::DEFAULT_PEN_MAX,
            e1_points: DEFAULT_E1_POINTS,
            ise: IseChoice::Auto,
            dependence_a: None,
            master_seed: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.densities.is_empty() {
            return Err(Error::config("experiment needs at least one density"));
        }
        if self.noises.is_empty() {
            return Err(Error::config("experiment needs at least one noise kind"));
        }
        if self.n_values.is_empty() || self.s2n_values.is_empty() {
            return Err(Error::config(
                "experiment needs at least one sample size and one s2n value",
            ));
        }
        if self.n_values.iter().any(|&n| n < 2) {
            return Err(Error::config("sample sizes must be at least 2"));
        }
        if self
            .s2n_values
            .iter()
            .any(|&s| !s.is_finite() || s <= 0.0)
        {
            return Err(Error::config("s2n values must be positive and finite"));
        }
        if self.reps == 0 {
            return Err(Error::config("replication count must be positive"));
        }
        match self.mode {
            Mode::Dependent => {
                let needs_a = self
                    .densities
                    .iter()
                    .any(|d| !matches!(d, DensityId::Uniform));
                if needs_a {
                    match self.dependence_a {
                        Some(a) if a > 0.0 && a < 1.0 => {}
                        Some(a) => {
                            return Err(Error::config(format!(
                                "AR dependence coefficient must lie in (0, 1), got {a}"
                            )))
                        }
                        None => {
                            return Err(Error::config(
                                "dependent mode with an AR kind needs dependence_a",
                            ))
                        }
                    }
                }
                for d in &self.densities {
                    dependent_kind_for(*d)?;
                }
            }
            Mode::Misspecified => {
                if self.noises.iter().any(|k| matches!(k, NoiseKind::None)) {
                    return Err(Error::config(
                        "misspecified mode needs a real noise kind (laplace or gauss)",
                    ));
                }
            }
            Mode::E1VsE2 => {
                for d in &self.densities {
                    if !matches!(
                        d,
                        DensityId::Exponential
                            | DensityId::ChiSq3
                            | DensityId::Laplace
                            | DensityId::Cauchy
                    ) {
                        return Err(Error::config(format!(
                            "the E1-vs-E2 study covers exponential, chisq3, laplace \
                             and cauchy only, got {}",
                            d.key()
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// One cell of a MISE table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiseCell {
    pub density: DensityId,
    pub noise: NoiseKind,
    pub n: usize,
    pub s2n: f64,
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub reps: usize,
}

/// One cell of a paired ratio study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioCell {
    pub density: DensityId,
    pub noise: NoiseKind,
    pub n: usize,
    pub s2n: f64,
    /// `mean_numerator / mean_denominator` (NaN if the denominator mean is
    /// below `1e-12`).
    pub ratio: f64,
    pub mean_numerator: f64,
    pub mean_denominator: f64,
    pub reps: usize,
}

/// A completed MISE table.
#[derive(Debug, Clone)]
pub struct MiseTable {
    pub mode: Mode,
    pub cells: Vec<MiseCell>,
}

/// A completed ratio table.
#[derive(Debug, Clone)]
pub struct RatioTable {
    pub mode: Mode,
    pub cells: Vec<RatioCell>,
}

/// Output of [`run`]: one table, shaped by the study mode.
#[derive(Debug, Clone)]
pub enum TableOutput {
    Mise(MiseTable),
    Ratio(RatioTable),
}

impl MiseTable {
    /// Render as CSV.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("density,noise,n,s2n,mean,median,sd,reps\n");
        for c in &self.cells {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                c.density.key(),
                c.noise.key(),
                c.n,
                c.s2n,
                c.mean,
                c.median,
                c.sd,
                c.reps
            )
            .expect("write to string");
        }
        s
    }
}

impl RatioTable {
    /// Render as CSV.
    pub fn to_csv(&self) -> String {
        let mut s =
            String::from("density,noise,n,s2n,ratio,mean_numerator,mean_denominator,reps\n");
        for c in &self.cells {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                c.density.key(),
                c.noise.key(),
                c.n,
                c.s2n,
                c.ratio,
                c.mean_numerator,
                c.mean_denominator,
                c.reps
            )
            .expect("write to string");
        }
        s
    }
}

impl TableOutput {
    /// Render as CSV.
    pub fn to_csv(&self) -> String {
        match self {
            TableOutput::Mise(t) => t.to_csv(),
            TableOutput::Ratio(t) => t.to_csv(),
        }
    }

    /// The study mode that produced the table.
    pub fn mode(&self) -> Mode {
        match self {
            TableOutput::Mise(t) => t.mode,
            TableOutput::Ratio(t) => t.mode,
        }
    }
}

// ---------------------------------------------------------------------------
// Random channels
// ---------------------------------------------------------------------------

/// 64-bit FNV-1a.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A ChaCha8 generator for one named channel and replication index.
///
/// The seed hashes the master seed bytes followed by the label; the
/// replication index selects the stream, so replications are independent and
/// individually addressable.
pub fn channel_rng(master_seed: u64, label: &str, rep: u64) -> ChaCha8Rng {
    let mut bytes = Vec::with_capacity(8 + label.len());
    bytes.extend_from_slice(&master_seed.to_le_bytes());
    bytes.extend_from_slice(label.as_bytes());
    let mut rng = ChaCha8Rng::seed_from_u64(fnv1a64(&bytes));
    rng.set_stream(rep);
    rng
}

fn signal_label(density: DensityId, noise: NoiseKind, n: usize) -> String {
    format!("x|{}|{}|n={}", density.key(), noise.key(), n)
}

fn noise_label(density: DensityId, noise: NoiseKind, n: usize) -> String {
    format!("eps|{}|{}|n={}", density.key(), noise.key(), n)
}

// ---------------------------------------------------------------------------
// Dependent-signal generators
// ---------------------------------------------------------------------------

/// Dependent-signal generators sharing the catalog marginals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DependentKind {
    /// Stationary AR(1) Gaussian chain, marginal standard normal.
    GaussAr,
    /// Coin-switched pair of AR(1) chains with drifts, marginal equal to the
    /// two-component normal mixture of the catalog.
    MixedGaussAr,
    /// Non-mixing dyadic recursion `U' = U/2 + Bernoulli(1/2)`, marginal
    /// uniform.
    NonmixingUniform,
}

fn dependent_kind_for(id: DensityId) -> Result<DependentKind> {
    match id {
        DensityId::Gauss => Ok(DependentKind::GaussAr),
        DensityId::MixGauss => Ok(DependentKind::MixedGaussAr),
        DensityId::Uniform => Ok(DependentKind::NonmixingUniform),
        other => Err(Error::config(format!(
            "no dependent generator for density {}; use gauss, mixgauss or uniform",
            other.key()
        ))),
    }
}

/// Draw `n` dependent signal values after a burn-in of 1000 steps.
///
/// The AR kinds need `0 < a < 1`; the dyadic recursion ignores `a`.  All
/// chains start at zero.  The mixed-Gaussian chain draws both innovations
/// each step and one selection coin per *kept* step, then scales by √2 so
/// that the marginal matches the catalog's two-component normal mixture.
pub fn gen_dependent<R: Rng + ?Sized>(
    kind: DependentKind,
    a: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    const BURN_IN: usize = 1000;
    match kind {
        DependentKind::GaussAr => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::domain(format!(
                    "AR coefficient must lie in (0, 1), got {a}"
                )));
            }
            let sig_eta = (1.0 - a * a).sqrt();
            let mut y = 0.0;
            let mut out = Vec::with_capacity(n);
            for i in 0..BURN_IN + n {
                let eta: f64 = rng.sample(rand_distr::StandardNormal);
                y = a * y + sig_eta * eta;
                if i >= BURN_IN {
                    out.push(y);
                }
            }
            Ok(out)
        }
        DependentKind::MixedGaussAr => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::domain(format!(
                    "AR coefficient must lie in (0, 1), got {a}"
                )));
            }
            let sig_eta = (1.0 - a * a).sqrt();
            let b1 = -3.0 * (1.0 - a);
            let b2 = 2.0 * (1.0 - a);
            let mut y1 = 0.0;
            let mut y2 = 0.0;
            let mut out = Vec::with_capacity(n);
            for i in 0..BURN_IN + n {
                let eta1: f64 = rng.sample(rand_distr::StandardNormal);
                let eta2: f64 = rng.sample(rand_distr::StandardNormal);
                y1 = b1 + a * y1 + sig_eta * eta1;
                y2 = b2 + a * y2 + sig_eta * eta2;
                if i >= BURN_IN {
                    let pick_first = rng.random::<bool>();
                    let y = if pick_first { y1 } else { y2 };
                    out.push(2.0f64.sqrt() * y);
                }
            }
            Ok(out)
        }
        DependentKind::NonmixingUniform => {
            let mut u = 0.0;
            let mut out = Vec::with_capacity(n);
            for i in 0..BURN_IN + n {
                let coin = if rng.random::<bool>() { 1.0 } else { 0.0 };
                u = 0.5 * u + coin;
                if i >= BURN_IN {
                    out.push(3.0f64.sqrt() * (u - 1.0));
                }
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// The runner
// ---------------------------------------------------------------------------

fn family_for(kind: NoiseKind) -> PenaltyFamily {
    match kind {
        NoiseKind::Laplace => PenaltyFamily::NewLaplace,
        NoiseKind::Gaussian => PenaltyFamily::NewGaussian,
        // With σ = 0 both calibrated families coincide.
        NoiseKind::None => PenaltyFamily::NewLaplace,
    }
}

fn penalty_spec(
    cfg: &ExperimentConfig,
    kind: NoiseKind,
    n: usize,
    s2n: f64,
) -> Result<PenaltySpec> {
    let sigma = match kind {
        NoiseKind::None => 0.0,
        _ => 1.0 / s2n.sqrt(),
    };
    let mut spec = PenaltySpec::new(family_for(kind), n, s2n, sigma)?;
    spec.delta_grid = cfg.delta_grid;
    spec.ell_max = cfg.ell_max;
    spec.pen_max = cfg.pen_max;
    Ok(spec)
}

fn score(
    est: &crate::estimator::ProjectionEstimate,
    density: &TestDensity,
    choice: IseChoice,
    e1_points: usize,
) -> Result<f64> {
    let use_interval = match choice {
        IseChoice::Auto => density.has_pdf,
        IseChoice::E1 => true,
        IseChoice::E2 => false,
    };
    if use_interval {
        ise_interval(est, density, e1_points).map(|r| r.ise)
    } else {
        ise_exact(est, density).map(|r| r.ise)
    }
}

fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
}

#[derive(Debug, Clone, Copy)]
struct CellSpec {
    density: DensityId,
    noise: NoiseKind,
    n: usize,
    s2n: f64,
}

fn cell_specs(cfg: &ExperimentConfig) -> Vec<CellSpec> {
    let mut out = Vec::new();
    for &density in &cfg.densities {
        for &noise in &cfg.noises {
            for &n in &cfg.n_values {
                for &s2n in &cfg.s2n_values {
                    out.push(CellSpec {
                        density,
                        noise,
                        n,
                        s2n,
                    });
                }
            }
        }
    }
    out
}

/// Collect per-replication values in index order (deterministic regardless of
/// the rayon thread count).
fn par_reps<T, F>(reps: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(&f)
        .collect::<Result<Vec<T>>>()
}

fn ratio_of(num_mean: f64, den_mean: f64) -> f64 {
    if den_mean.abs() < 1e-12 {
        f64::NAN
    } else {
        num_mean / den_mean
    }
}

/// Run a study described by `cfg` and return its table.
///
/// Cells are evaluated one after another; replications inside a cell run in
/// parallel on the ambient rayon pool.
pub fn run(cfg: &ExperimentConfig) -> Result<TableOutput> {
    cfg.validate()?;
    if cfg.mode.is_ratio() {
        let mut cells = Vec::new();
        for spec in cell_specs(cfg) {
            cells.push(run_ratio_cell(cfg, spec)?);
        }
        Ok(TableOutput::Ratio(RatioTable {
            mode: cfg.mode,
            cells,
        }))
    } else {
        let mut cells = Vec::new();
        for spec in cell_specs(cfg) {
            cells.push(run_mise_cell(cfg, spec)?);
        }
        Ok(TableOutput::Mise(MiseTable {
            mode: cfg.mode,
            cells,
        }))
    }
}

fn make_observations(
    density: &TestDensity,
    noise: &NoiseModel,
    n: usize,
    seed: u64,
    x_label: &str,
    e_label: &str,
    rep: u64,
) -> Vec<f64> {
    let mut rng_x = channel_rng(seed, x_label, rep);
    let x = density.sample(n, &mut rng_x);
    if noise.sigma == 0.0 {
        return x;
    }
    let mut rng_e = channel_rng(seed, e_label, rep);
    let eps = noise.sample(n, &mut rng_e);
    x.iter().zip(&eps).map(|(a, e)| a + noise.sigma * e).collect()
}

fn run_mise_cell(cfg: &ExperimentConfig, spec: CellSpec) -> Result<MiseCell> {
    let density = TestDensity::new(spec.density);
    let noise = NoiseModel::from_s2n(spec.noise, spec.s2n)?;
    let pen_spec = penalty_spec(cfg, spec.noise, spec.n, spec.s2n)?;
    let grid = model_grid(&pen_spec)?;
    let x_label = signal_label(spec.density, spec.noise, spec.n);
    let e_label = noise_label(spec.density, spec.noise, spec.n);

    let values = par_reps(cfg.reps, |rep| {
        let z = make_observations(
            &density,
            &noise,
            spec.n,
            cfg.master_seed,
            &x_label,
            &e_label,
            rep,
        );
        let est = select_with_grid(&z, &noise, &grid, cfg.m_exp)?;
        score(&est, &density, cfg.ise, cfg.e1_points)
    })?;
    let agg = aggregate(&values)?;
    Ok(MiseCell {
        density: spec.density,
        noise: spec.noise,
        n: spec.n,
        s2n: spec.s2n,
        mean: agg.mean,
        median: agg.median,
        sd: agg.sd,
        reps: agg.count,
    })
}

fn run_ratio_cell(cfg: &ExperimentConfig, spec: CellSpec) -> Result<RatioCell> {
    let pairs = match cfg.mode {
        Mode::S2nEstimated => s2n_estimated_pairs(cfg, spec)?,
        Mode::Dependent => dependent_pairs(cfg, spec)?,
        Mode::Misspecified => misspecified_pairs(cfg, spec)?,
        Mode::IgnoreNoise => ignore_noise_pairs(cfg, spec)?,
        Mode::E1VsE2 => e1_vs_e2_pairs(cfg, spec)?,
        Mode::BasicMise => unreachable!("basic mode is not a ratio study"),
    };
    let num_mean = pairs.iter().map(|p| p.0).sum::<f64>() / pairs.len() as f64;
    let den_mean = pairs.iter().map(|p| p.1).sum::<f64>() / pairs.len() as f64;
    Ok(RatioCell {
        density: spec.density,
        noise: spec.noise,
        n: spec.n,
        s2n: spec.s2n,
        ratio: ratio_of(num_mean, den_mean),
        mean_numerator: num_mean,
        mean_denominator: den_mean,
        reps: pairs.len(),
    })
}

/// Penalties driven by `ŝ2n = max(V̂ar(Z)/σ² - 1, 1/0.6)` against the oracle
/// that knows the true signal-to-noise ratio.
fn s2n_estimated_pairs(cfg: &ExperimentConfig, spec: CellSpec) -> Result<Vec<(f64, f64)>> {
    let density = TestDensity::new(spec.density);
    let noise = NoiseModel::from_s2n(spec.noise, spec.s2n)?;
    let pen_true = penalty_spec(cfg, spec.noise, spec.n, spec.s2n)?;
    let grid_true = model_grid(&pen_true)?;
    let x_label = signal_label(spec.density, spec.noise, spec.n);
    let e_label = noise_label(spec.density, spec.noise, spec.n);

    par_reps(cfg.reps, |rep| {
        let z = make_observations(
            &density,
            &noise,
            spec.n,
            cfg.master_seed,
            &x_label,
            &e_label,
            rep,
        );
        let est_true = select_with_grid(&z, &noise, &grid_true, cfg.m_exp)?;
        let den = score(&est_true, &density, cfg.ise, cfg.e1_points)?;
        // With σ = 0 the penalties never read the signal-to-noise ratio, so
        // the two arms coincide exactly.
        let num = if noise.sigma == 0.0 {
            den
        } else {
            let s2n_hat =
                (sample_variance(&z) / (noise.sigma * noise.sigma) - 1.0).max(1.0 / 0.6);
            let mut pen_hat = pen_true.clone();
            pen_hat.s2n = s2n_hat;
            let grid_hat = model_grid(&pen_hat)?;
            let est_hat = select_with_grid(&z, &noise, &grid_hat, cfg.m_exp)?;
            score(&est_hat, &density, cfg.ise, cfg.e1_points)?
        };
        Ok((num, den))
    })
}

/// Dependent signal vs independent draws, with shared noise per replication.
fn dependent_pairs(cfg: &ExperimentConfig, spec: CellSpec) -> Result<Vec<(f64, f64)>> {
    let density = TestDensity::new(spec.density);
    let kind = dependent_kind_for(spec.density)?;
    let a = cfg.dependence_a.unwrap_or(0.5);
    let noise = NoiseModel::from_s2n(spec.noise, spec.s2n)?;
    let pen = penalty_spec(cfg, spec.noise, spec.n, spec.s2n)?;
    let grid = model_grid(&pen)?;
    let x_label = signal_label(spec.density, spec.noise, spec.n);
    let e_label = noise_label(spec.density, spec.noise, spec.n);

    par_reps(cfg.reps, |rep| {
        let arm = |dependent: bool| -> Result<f64> {
            let mut rng_x = channel_rng(cfg.master_seed, &x_label, rep);
            let x = if dependent {
                gen_dependent(kind, a, spec.n, &mut rng_x)?
            } else {
                density.sample(spec.n, &mut rng_x)
            };
            let z: Vec<f64> = if noise.sigma == 0.0 {
                x
            } else {
                let mut rng_e = channel_rng(cfg.master_seed, &e_label, rep);
                let eps = noise.sample(spec.n, &mut rng_e);
                x.iter().zip(&eps).map(|(a, e)| a + noise.sigma * e).collect()
            };
            let est = select_with_grid(&z, &noise, &grid, cfg.m_exp)?;
            score(&est, &density, cfg.ise, cfg.e1_points)
        };
        let num = arm(true)?;
        let den = arm(false)?;
        Ok((num, den))
    })
}

/// Wrong noise family in the estimator against the correctly specified one,
/// on the same observations.
fn misspecified_pairs(cfg: &ExperimentConfig, spec: CellSpec) -> Result<Vec<(f64, f64)>> {
    let density = TestDensity::new(spec.density);
    let noise_true = NoiseModel::from_s2n(spec.noise, spec.s2n)?;
    let wrong_kind = match spec.noise {
        NoiseKind::Laplace => NoiseKind::Gaussian,
        NoiseKind::Gaussian => NoiseKind::Laplace,
        NoiseKind::None => unreachable!("validated out"),
    };
    let noise_wrong = NoiseModel::new(wrong_kind, noise_true.sigma)?;
    let grid_true = model_grid(&penalty_spec(cfg, spec.noise, spec.n, spec.s2n)?)?;
    let grid_wrong = model_grid(&penalty_spec(cfg, wrong_kind, spec.n, spec.s2n)?)?;
    let x_label = signal_label(spec.density, spec.noise, spec.n);
    let e_label = noise_label(spec.density, spec.noise, spec.n);

    par_reps(cfg.reps, |rep| {
        let z = make_observations(
            &density,
            &noise_true,
            spec.n,
            cfg.master_seed,
            &x_label,
            &e_label,
            rep,
        );
        let est_wrong = select_with_grid(&z, &noise_wrong, &grid_wrong, cfg.m_exp)?;
        let num = score(&est_wrong, &density, cfg.ise, cfg.e1_points)?;
        let est_true = select_with_grid(&z, &noise_true, &grid_true, cfg.m_exp)?;
        let den = score(&est_true, &density, cfg.ise, cfg.e1_points)?;
        Ok((num, den))
    })
}

/// Estimator that pretends the data are noiseless against the correct one,
/// on the same observations.
fn ignore_noise_pairs(cfg: &ExperimentConfig, spec: CellSpec) -> Result<Vec<(f64, f64)>> {
    let density = TestDensity::new(spec.density);
    let noise_true = NoiseModel::from_s2n(spec.noise, spec.s2n)?;
    let noise_ignored = NoiseModel::new(NoiseKind::None, 0.0)?;
    let grid_true = model_grid(&penalty_spec(cfg, spec.noise, spec.n, spec.s2n)?)?;
    let mut pen_zero = penalty_spec(cfg, spec.noise, spec.n, spec.s2n)?;
    pen_zero.sigma = 0.0;
    let grid_zero = model_grid(&pen_zero)?;
    let x_label = signal_label(spec.density, spec.noise, spec.n);
    let e_label = noise_label(spec.density, spec.noise, spec.n);

    par_reps(cfg.reps, |rep| {
        let z = make_observations(
            &density,
            &noise_true,
            spec.n,
            cfg.master_seed,
            &x_label,
            &e_label,
            rep,
        );
        let est_zero = select_with_grid(&z, &noise_ignored, &grid_zero, cfg.m_exp)?;
        let num = score(&est_zero, &density, cfg.ise, cfg.e1_points)?;
        let est_true = select_with_grid(&z, &noise_true, &grid_true, cfg.m_exp)?;
        let den = score(&est_true, &density, cfg.ise, cfg.e1_points)?;
        Ok((num, den))
    })
}

/// Exact spectral ISE over interval ISE on the same fits.
fn e1_vs_e2_pairs(cfg: &ExperimentConfig, spec: CellSpec) -> Result<Vec<(f64, f64)>> {
    let density = TestDensity::new(spec.density);
    let noise = NoiseModel::from_s2n(spec.noise, spec.s2n)?;
    let grid = model_grid(&penalty_spec(cfg, spec.noise, spec.n, spec.s2n)?)?;
    let x_label = signal_label(spec.density, spec.noise, spec.n);
    let e_label = noise_label(spec.density, spec.noise, spec.n);

    par_reps(cfg.reps, |rep| {
        let z = make_observations(
            &density,
            &noise,
            spec.n,
            cfg.master_seed,
            &x_label,
            &e_label,
            rep,
        );
        let est = select_with_grid(&z, &noise, &grid, cfg.m_exp)?;
        let e2 = ise_exact(&est, &density)?.ise;
        let e1 = ise_interval(&est, &density, cfg.e1_points)?.ise;
        Ok((e2, e1))
    })
}
