//! Theoretical MISE rates for every catalog density under each noise law,
//! plus "abacus" curves (log-rate against log-sample-size) for plotting.
//!
//! Each catalog density carries spectral smoothness constants `(s, r, b)`
//! describing the decay `|g*(x)|² ≍ |x|^{-2s-r·…} exp(-2b|x|^r)` of its
//! characteristic function: `r = 0` is polynomial (ordinary-smooth) decay
//! with exponent governed by `s`, `r > 0` is exponential (super-smooth)
//! decay, and the Féjer-type laws have compactly supported spectrum (no bias
//! at all beyond a fixed bandwidth).  Combining this with the noise: Laplace
//! noise has polynomial spectral decay of degree 2, Gaussian noise decay
//! `exp(-σ²x²/2)`, and the noiseless column is the classical density
//! estimation problem.  The resulting rate menu (up to constants):
//!
//! | density \ noise | none (σ = 0)    | Laplace            | Gaussian (σ)                                   |
//! |-----------------|-----------------|--------------------|------------------------------------------------|
//! | `r = 0`         | `n^{-2s/(2s+1)}`| `n^{-2s/(2s+5)}`   | `(ln n)^{-s}`                                  |
//! | `0 < r < 2`     | `(ln n)^{1/r}/n`| `(ln n)^{5/r}/n`   | `(ln n)^{-s} exp(-2b (ln n/σ²)^{r/2})`         |
//! | `r = 2`         | `(ln n)^{1/2}/n`| `(ln n)^{5/2}/n`   | `(ln n)^{-(σ²-1)/(2(σ²+1))} n^{-1/(1+σ²)}`     |
//! | Féjer-type      | `n^{-1}`        | `n^{-1}`           | `n^{-1}`                                       |
//!
//! Rates are defined for `n ≥ 3` (so `ln n > 1`); several super-smooth
//! density/Laplace noise entries such as `(ln n)^{20}/n` *increase* over a
//! long initial stretch (until `ln n` exceeds the log-power) and only decay
//! eventually — the formulas are asymptotic orders, not finite-sample bounds.

use crate::densities::DensityId;
use crate::error::{Error, Result};
use crate::noise::NoiseKind;

/// Spectral smoothness constants of a catalog density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothness {
    /// Polynomial index: for `r = 0`, `|g*|` decays like `|x|^{-s-1/2}`.
    pub s: f64,
    /// Exponential index (0 for ordinary-smooth laws).
    pub r: f64,
    /// Exponential scale (meaningful only when `r > 0`).
    pub b: f64,
}

/// The smoothness constants of a density, or `None` for the Féjer-type laws
/// (compactly supported spectrum).
pub fn smoothness(id: DensityId) -> Option<Smoothness> {
    let (s, r, b) = match id {
        DensityId::Uniform | DensityId::Exponential => (0.5, 0.0, 0.0),
        DensityId::ChiSq3 => (1.0, 0.0, 0.0),
        DensityId::Laplace | DensityId::Gamma2 => (1.5, 0.0, 0.0),
        DensityId::MixGamma => (4.5, 0.0, 0.0),
        DensityId::Stable14 => (-0.375, 0.25, 1.0),
        DensityId::Stable12 => (-0.25, 0.5, 1.0),
        DensityId::Stable34 => (-0.125, 0.75, 1.0),
        DensityId::Cauchy => (0.0, 1.0, 1.0),
        DensityId::Gauss | DensityId::MixGauss => (0.25, 2.0, 0.5),
        DensityId::Fejer1 | DensityId::Fejer5 | DensityId::Fejer10 | DensityId::Fejer13 => {
            return None
        }
    };
    Some(Smoothness { s, r, b })
}

/// A (density, noise, σ) triple for which a rate is requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSpec {
    pub density: DensityId,
    pub noise: NoiseKind,
    pub sigma: f64,
}

impl RateSpec {
    /// Build a spec; `sigma` must be finite and non-negative, and must be 0
    /// for the noiseless kind.  A zero `sigma` under any kind selects the
    /// noiseless column.
    pub fn new(density: DensityId, noise: NoiseKind, sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::domain(format!(
                "noise level must be finite and non-negative, got {sigma}"
            )));
        }
        if matches!(noise, NoiseKind::None) && sigma != 0.0 {
            return Err(Error::domain(
                "the noiseless kind requires sigma = 0".to_string(),
            ));
        }
        Ok(RateSpec {
            density,
            noise,
            sigma,
        })
    }

    /// Build a spec from a signal-to-noise ratio (`σ = 1/√s2n`).
    pub fn from_s2n(density: DensityId, noise: NoiseKind, s2n: f64) -> Result<Self> {
        if !(s2n.is_finite() && s2n > 0.0) {
            return Err(Error::domain(format!(
                "signal-to-noise ratio must be positive and finite, got {s2n}"
            )));
        }
        let sigma = match noise {
            NoiseKind::None => 0.0,
            _ => 1.0 / s2n.sqrt(),
        };
        RateSpec::new(density, noise, sigma)
    }
}

/// The theoretical MISE rate (up to constants) at sample size `n ≥ 3`.
///
/// Every (density, noise) pair maps to exactly one formula of the menu in
/// the module docs; the value is always positive and finite.
pub fn theoretical_rate(spec: &RateSpec, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!(
            "rate formulas are defined for n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let Some(sm) = smoothness(spec.density) else {
        // Compactly supported spectrum: no bias once the bandwidth covers
        // it, so the rate is parametric under every noise law.
        return Ok(1.0 / nf);
    };
    let noiseless = spec.sigma == 0.0 || matches!(spec.noise, NoiseKind::None);
    let rate = if noiseless {
        if sm.r == 0.0 {
            nf.powf(-2.0 * sm.s / (2.0 * sm.s + 1.0))
        } else {
            ln_n.powf(1.0 / sm.r) / nf
        }
    } else {
        match spec.noise {
            NoiseKind::Laplace => {
                if sm.r == 0.0 {
                    nf.powf(-2.0 * sm.s / (2.0 * sm.s + 5.0))
                } else {
                    ln_n.powf(5.0 / sm.r) / nf
                }
            }
            NoiseKind::Gaussian => {
                let sig2 = spec.sigma * spec.sigma;
                if sm.r == 0.0 {
                    ln_n.powf(-sm.s)
                } else if sm.r == 2.0 {
                    ln_n.powf(-0.5 * (sig2 - 1.0) / (sig2 + 1.0)) * nf.powf(-1.0 / (1.0 + sig2))
                } else {
                    ln_n.powf(-sm.s) * (-2.0 * sm.b * (ln_n / sig2).powf(0.5 * sm.r)).exp()
                }
            }
            NoiseKind::None => unreachable!("noiseless handled above"),
        }
    };
    Ok(rate)
}

/// One point of an abacus curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbacusPoint {
    pub n: usize,
    pub ln_n: f64,
    /// `ln rate(n) + offset`.
    pub value: f64,
}

/// Abacus curve `(ln n, ln rate + offset)` over the given sample sizes —
/// on these axes an ordinary-smooth rate is a straight line whose slope is
/// its polynomial exponent.
pub fn abacus(spec: &RateSpec, ns: &[usize], offset: f64) -> Result<Vec<AbacusPoint>> {
    ns.iter()
        .map(|&n| {
            let rate = theoretical_rate(spec, n)?;
            Ok(AbacusPoint {
                n,
                ln_n: (n as f64).ln(),
                value: rate.ln() + offset,
            })
        })
        .collect()
}
