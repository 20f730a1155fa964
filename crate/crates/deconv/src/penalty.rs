//! Calibrated penalties for the penalized-projection model selection, and
//! the model grid they induce.
//!
//! A projection model is indexed by its bandwidth `ℓ_m = m·Δ` (the sinc space
//! of functions with spectrum in `[-ℓ_m, ℓ_m]`).  The selection criterion is
//! `contrast(m) + pen(ℓ_m)`, and the penalties here are the calibrated
//! data-free upper bounds on the estimator's variance term.
//!
//! Two generations of penalties are provided for each error law:
//!
//! * the *current* penalties ([`PenaltyFamily::NewLaplace`],
//!   [`PenaltyFamily::NewGaussian`]) with leading constant `2.5/n`, the
//!   signal-to-noise factor `(1 - 1/s2n)²` and the smoothed logarithmic term
//!   `8·(ln ζ(ℓ))^{5/2}`;
//! * the *older* penalties (`OldLaplace`, `OldGaussian`) with constant `6/n`
//!   and the term `π·(ln(ℓ/π))^{5/2}` — kept for comparison plots.
//!
//! At `σ = 0` the Laplace and Gaussian penalties of the current generation
//! coincide; by default this degenerate case drops the signal-to-noise
//! factor entirely and uses `(2.5/n)·(ℓ + 8·(ln ζ(ℓ))^{5/2})`
//! (see [`PenaltySpec::zero_sigma_plain`]).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre_128_unit;

/// Which penalty formula to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PenaltyFamily {
    /// Current Laplace-error penalty (`2.5/n` scale, degree-5 polynomial in ℓ).
    NewLaplace,
    /// Current Gaussian-error penalty (`2.5/n` scale, exponential integral factor).
    NewGaussian,
    /// Older Laplace-error penalty (`6/n` scale).
    OldLaplace,
    /// Older Gaussian-error penalty (`6/n` scale).
    OldGaussian,
}

impl PenaltyFamily {
    /// Stable textual key, used by the command-line interface.
    pub fn key(&self) -> &'static str {
        match self {
            PenaltyFamily::NewLaplace => "new-laplace",
            PenaltyFamily::NewGaussian => "new-gaussian",
            PenaltyFamily::OldLaplace => "old-laplace",
            PenaltyFamily::OldGaussian => "old-gaussian",
        }
    }

    /// Parse a textual key.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "new-laplace" => Ok(PenaltyFamily::NewLaplace),
            "new-gaussian" => Ok(PenaltyFamily::NewGaussian),
            "old-laplace" => Ok(PenaltyFamily::OldLaplace),
            "old-gaussian" => Ok(PenaltyFamily::OldGaussian),
            other => Err(Error::config(format!(
                "unknown penalty family {other:?} (expected new-laplace, new-gaussian, \
                 old-laplace or old-gaussian)"
            ))),
        }
    }
}

/// Everything needed to evaluate a penalty and build the model grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltySpec {
    pub family: PenaltyFamily,
    /// Sample size.
    pub n: usize,
    /// Signal-to-noise ratio entering the `(1 - 1/s2n)²` and `(1 + 1/s2n)²`
    /// factors.  Kept separate from `sigma` because some experiments plug an
    /// *estimated* ratio into the factors while the level stays true.
    pub s2n: f64,
    /// Noise level `σ` entering the polynomial and exponential terms.
    pub sigma: f64,
    /// Grid step: model `m` has bandwidth `ℓ_m = m·delta_grid`.
    pub delta_grid: f64,
    /// Bandwidth cap for the model grid.
    pub ell_max: f64,
    /// Penalty cap for the model grid: models whose penalty exceeds this are
    /// pointless (the empirical contrast is bounded) and only waste work.
    pub pen_max: f64,
    /// If true (default), `σ = 0` uses the reduced penalty
    /// `(2.5/n)(ℓ + 8(ln ζ(ℓ))^{5/2})` with no signal-to-noise factor.
    pub zero_sigma_plain: bool,
    /// If true, replace the smoothed `ζ(ℓ)` by the plain `max(ℓ, π)` —
    /// only interesting for comparing penalty shapes.
    pub unsmoothed_zeta: bool,
}

impl PenaltySpec {
    /// Default grid parameters: step 0.1, bandwidth cap `10π`, penalty cap 5.
    pub const DEFAULT_DELTA: f64 = 0.1;
    pub const DEFAULT_ELL_MAX: f64 = 10.0 * PI;
    pub const DEFAULT_PEN_MAX: f64 = 5.0;

    /// Build a spec with the default grid parameters.
    pub fn new(family: PenaltyFamily, n: usize, s2n: f64, sigma: f64) -> Result<Self> {
        let spec = PenaltySpec {
            family,
            n,
            s2n,
            sigma,
            delta_grid: Self::DEFAULT_DELTA,
            ell_max: Self::DEFAULT_ELL_MAX,
            pen_max: Self::DEFAULT_PEN_MAX,
            zero_sigma_plain: true,
            unsmoothed_zeta: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Replace the grid parameters.
    pub fn with_grid(mut self, delta: f64, ell_max: f64, pen_max: f64) -> Result<Self> {
        self.delta_grid = delta;
        self.ell_max = ell_max;
        self.pen_max = pen_max;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("penalty requires a sample size n >= 1"));
        }
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(Error::domain(format!(
                "penalty noise level must be finite and nonnegative, got {}",
                self.sigma
            )));
        }
        if !self.s2n.is_finite() || self.s2n <= 0.0 {
            return Err(Error::domain(format!(
                "signal-to-noise ratio must be finite and positive, got {}",
                self.s2n
            )));
        }
        if self.snr_factor_active() && self.s2n <= 1.0 {
            return Err(Error::domain(format!(
                "the factor (1 - 1/s2n)^2 degenerates for s2n <= 1, got {}",
                self.s2n
            )));
        }
        if !(self.delta_grid.is_finite() && self.delta_grid > 0.0) {
            return Err(Error::domain(format!(
                "grid step must be finite and positive, got {}",
                self.delta_grid
            )));
        }
        if !(self.ell_max.is_finite() && self.ell_max > 0.0) {
            return Err(Error::domain(format!(
                "bandwidth cap must be finite and positive, got {}",
                self.ell_max
            )));
        }
        if !(self.pen_max.is_finite() && self.pen_max > 0.0) {
            return Err(Error::domain(format!(
                "penalty cap must be finite and positive, got {}",
                self.pen_max
            )));
        }
        Ok(())
    }

    /// Whether the `(1 - 1/s2n)²` factor participates for this spec.
    fn snr_factor_active(&self) -> bool {
        match self.family {
            PenaltyFamily::NewLaplace | PenaltyFamily::NewGaussian => {
                !(self.sigma == 0.0 && self.zero_sigma_plain)
            }
            // The older penalties never had the factor.
            PenaltyFamily::OldLaplace | PenaltyFamily::OldGaussian => false,
        }
    }

    fn zeta_at(&self, ell: f64) -> f64 {
        if self.unsmoothed_zeta {
            ell.max(PI)
        } else {
            zeta(ell)
        }
    }
}

/// The smoothed bandwidth floor `ζ(ℓ)`:
///
/// `ζ(ℓ) = π·1{ℓ<4} + ((ℓ-2)²/(4(π-2)))·1{2<=ℓ<4} + ℓ·1{ℓ>=4}`.
///
/// The first two indicators overlap on `[2, 4)` by design: there the value
/// is `π + (ℓ-2)²/(4(π-2))`, which leaves `ζ ≡ π` below 2, rises smoothly
/// through `ζ(3) ≈ 3.3606`, and hands over to the identity at 4 (with a
/// small downward step of ≈ 0.018, inherited from the published form).
/// It is a smoother version of `max(ℓ, π)` and keeps `ln ζ` bounded away
/// from 0.
pub fn zeta(ell: f64) -> f64 {
    let mut z = 0.0;
    if ell < 4.0 {
        z += PI;
    }
    if (2.0..4.0).contains(&ell) {
        let d = ell - 2.0;
        z += d * d / (4.0 * (PI - 2.0));
    }
    if ell >= 4.0 {
        z += ell;
    }
    z
}

/// `∫₀¹ exp((c·x)²) dx`, the Gaussian-penalty integral factor.
///
/// Evaluated with the cached 128-point Gauss–Legendre rule.  For `c² > 700`
/// the value would overflow `f64`; `+∞` is returned as a sentinel so grid
/// construction treats such models as unaffordable rather than erroring.
pub fn exp_square_integral(c: f64) -> f64 {
    let c2 = c * c;
    if c2 > 700.0 {
        return f64::INFINITY;
    }
    gauss_legendre_128_unit()
        .iter()
        .map(|&(x, w)| w * (c2 * x * x).exp())
        .sum()
}

fn check_ell(ell: f64) -> Result<()> {
    if !(ell.is_finite() && ell > 0.0) {
        return Err(Error::domain(format!(
            "penalty bandwidth must be finite and positive, got {ell}"
        )));
    }
    Ok(())
}

/// `ln(ζ)^{5/2}` term of the current penalties.
fn log_term_new(spec: &PenaltySpec, ell: f64) -> f64 {
    8.0 * spec.zeta_at(ell).ln().powf(2.5)
}

/// `π·ln(ℓ/π)^{5/2}` term of the older penalties; the logarithm's argument
/// is clamped at 1 so bandwidths below π contribute zero instead of NaN.
fn log_term_old(ell: f64) -> f64 {
    PI * (ell / PI).max(1.0).ln().powf(2.5)
}

/// Evaluate the penalty of `spec.family` at bandwidth `ell`.
pub fn penalty(spec: &PenaltySpec, ell: f64) -> Result<f64> {
    match spec.family {
        PenaltyFamily::NewLaplace => pen_laplace(spec, ell),
        PenaltyFamily::NewGaussian => pen_gaussian(spec, ell),
        PenaltyFamily::OldLaplace => pen_old_laplace(spec, ell),
        PenaltyFamily::OldGaussian => pen_old_gaussian(spec, ell),
    }
}

/// Current Laplace-error penalty:
///
/// `pen(ℓ) = (2.5/n)·(1-1/s2n)²·[ℓ + 8(ln ζ(ℓ))^{5/2} + 2σ²ℓ³/3 +
///            3(1+1/s2n)²σ⁴ℓ⁵/10]`
///
/// reducing at `σ = 0` (with [`PenaltySpec::zero_sigma_plain`]) to
/// `(2.5/n)·(ℓ + 8(ln ζ(ℓ))^{5/2})`.
pub fn pen_laplace(spec: &PenaltySpec, ell: f64) -> Result<f64> {
    check_ell(ell)?;
    spec.validate()?;
    let n = spec.n as f64;
    let base = ell + log_term_new(spec, ell);
    if spec.sigma == 0.0 && spec.zero_sigma_plain {
        return Ok(2.5 / n * base);
    }
    let s2 = spec.sigma * spec.sigma;
    let up = 1.0 + 1.0 / spec.s2n;
    let down = 1.0 - 1.0 / spec.s2n;
    let body = base + 2.0 * s2 * ell.powi(3) / 3.0 + 0.3 * up * up * s2 * s2 * ell.powi(5);
    Ok(2.5 / n * down * down * body)
}

/// Current Gaussian-error penalty:
///
/// `pen(ℓ) = (2.5/n)·(1-1/s2n)²·[ℓ + 8(ln ζ(ℓ))^{5/2} + σ²ℓ³/3] ·
///            ∫₀¹ exp((σℓx)²) dx`
///
/// reducing at `σ = 0` exactly like [`pen_laplace`] (the integral is 1).
pub fn pen_gaussian(spec: &PenaltySpec, ell: f64) -> Result<f64> {
    check_ell(ell)?;
    spec.validate()?;
    let n = spec.n as f64;
    let base = ell + log_term_new(spec, ell);
    if spec.sigma == 0.0 && spec.zero_sigma_plain {
        return Ok(2.5 / n * base);
    }
    let s2 = spec.sigma * spec.sigma;
    let down = 1.0 - 1.0 / spec.s2n;
    let body = base + s2 * ell.powi(3) / 3.0;
    Ok(2.5 / n * down * down * body * exp_square_integral(spec.sigma * ell))
}

/// Older Laplace-error penalty:
/// `pen(ℓ) = (6/n)·[ℓ + π(ln(ℓ/π))^{5/2} + σ²ℓ³/3 + σ⁴ℓ⁵/20]`.
pub fn pen_old_laplace(spec: &PenaltySpec, ell: f64) -> Result<f64> {
    check_ell(ell)?;
    spec.validate()?;
    let n = spec.n as f64;
    let s2 = spec.sigma * spec.sigma;
    Ok(6.0 / n * (ell + log_term_old(ell) + s2 * ell.powi(3) / 3.0 + s2 * s2 * ell.powi(5) / 20.0))
}

/// Older Gaussian-error penalty:
/// `pen(ℓ) = (6/n)·[ℓ + π(ln(ℓ/π))^{5/2} + σ²ℓ³/3] · ∫₀¹ exp((σℓx)²) dx`.
pub fn pen_old_gaussian(spec: &PenaltySpec, ell: f64) -> Result<f64> {
    check_ell(ell)?;
    spec.validate()?;
    let n = spec.n as f64;
    let s2 = spec.sigma * spec.sigma;
    let body = ell + log_term_old(ell) + s2 * ell.powi(3) / 3.0;
    Ok(6.0 / n * body * exp_square_integral(spec.sigma * ell))
}

/// The model grid induced by a [`PenaltySpec`]: bandwidths `ℓ_m = m·Δ` for
/// `m = 1, 2, ...` with their penalties, stopping at the first model whose
/// bandwidth exceeds `ell_max` *or* whose penalty exceeds `pen_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelGrid {
    /// Bandwidths `ℓ_m`, so `ells[i]` is model `m = i + 1`.
    pub ells: Vec<f64>,
    /// Penalty values aligned with `ells`.
    pub pens: Vec<f64>,
    /// The grid step Δ.
    pub delta: f64,
    /// Noise level the penalties were computed with.
    pub sigma: f64,
}

/// Build the model grid for `spec`.
///
/// Fails with [`Error::Config`] when even the first model is out of cap
/// (an empty grid would make selection meaningless).
pub fn model_grid(spec: &PenaltySpec) -> Result<ModelGrid> {
    spec.validate()?;
    let mut ells = Vec::new();
    let mut pens = Vec::new();
    let mut m = 1usize;
    loop {
        let ell = m as f64 * spec.delta_grid;
        if ell > spec.ell_max {
            break;
        }
        let pen = penalty(spec, ell)?;
        if pen > spec.pen_max {
            break;
        }
        ells.push(ell);
        pens.push(pen);
        m += 1;
    }
    if ells.is_empty() {
        return Err(Error::config(format!(
            "empty model grid: the first bandwidth {} already violates the caps \
             (ell_max = {}, pen_max = {})",
            spec.delta_grid, spec.ell_max, spec.pen_max
        )));
    }
    Ok(ModelGrid {
        ells,
        pens,
        delta: spec.delta_grid,
        sigma: spec.sigma,
    })
}
