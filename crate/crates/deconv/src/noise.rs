//! Noise models for the deconvolution problem `Z = X + σ·ε`.
//!
//! The error `ε` is standardised (unit variance where applicable) and the
//! level `σ` scales it in the data generator; accordingly [`NoiseModel::cf`]
//! is the characteristic function of the *standard* error, and callers
//! evaluate it at `σ·x` when they need the characteristic function of `σ·ε`.
//!
//! Both supported laws are symmetric, so their characteristic functions are
//! real-valued; `cf` returns `f64`.
//!
//! Each model also carries the smoothness constants `(γ, κ₀, μ, δ)` of the
//! lower bound `|cf(x)| ≥ κ₀·(x²+1)^{-γ/2}·exp(-μ·|x|^δ)`, which drive the
//! theoretical rate formulas:
//!
//! * Laplace: `cf(x) = 1/(1 + x²/2)`, `(γ, κ₀, μ, δ) = (2, 1/2, 0, 0)`;
//! * Gaussian: `cf(x) = exp(-x²/2)`, `(γ, κ₀, μ, δ) = (0, 1, 1/2, 2)`;
//! * None: `cf ≡ 1` (direct density estimation), `(0, 1, 0, 0)`.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};

/// The distribution family of the error `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// Unit-variance Laplace error, density `exp(-√2·|x|)/√2`.
    Laplace,
    /// Standard Gaussian error.
    Gaussian,
    /// No error at all: `Z = X` (direct density estimation).
    None,
}

impl NoiseKind {
    /// Stable textual key, used in CSV output and configuration files.
    pub fn key(&self) -> &'static str {
        match self {
            NoiseKind::Laplace => "laplace",
            NoiseKind::Gaussian => "gauss",
            NoiseKind::None => "none",
        }
    }

    /// Parse a textual key (`laplace`, `gauss`, `none`).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "laplace" => Ok(NoiseKind::Laplace),
            "gauss" | "gaussian" => Ok(NoiseKind::Gaussian),
            "none" => Ok(NoiseKind::None),
            other => Err(Error::config(format!(
                "unknown noise kind {other:?} (expected laplace, gauss or none)"
            ))),
        }
    }
}

/// An error distribution together with its level `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// Noise level multiplying the standard error in `Z = X + σ·ε`.
    pub sigma: f64,
}

impl NoiseModel {
    /// Build a model from an explicit level `σ >= 0`.
    ///
    /// [`NoiseKind::None`] requires `σ = 0`.
    pub fn new(kind: NoiseKind, sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::domain(format!(
                "noise level sigma must be finite and nonnegative, got {sigma}"
            )));
        }
        if kind == NoiseKind::None && sigma != 0.0 {
            return Err(Error::domain(format!(
                "noise kind `none` requires sigma = 0, got {sigma}"
            )));
        }
        Ok(NoiseModel { kind, sigma })
    }

    /// Build a model from a signal-to-noise ratio: `σ = 1/√s2n`.
    ///
    /// Since the test densities have unit variance, `s2n = Var(X)/Var(σε) =
    /// 1/σ²`.  For [`NoiseKind::None`] the ratio is ignored and `σ = 0`.
    pub fn from_s2n(kind: NoiseKind, s2n: f64) -> Result<Self> {
        if kind == NoiseKind::None {
            return NoiseModel::new(kind, 0.0);
        }
        if !s2n.is_finite() || s2n <= 0.0 {
            return Err(Error::domain(format!(
                "signal-to-noise ratio must be finite and positive, got {s2n}"
            )));
        }
        NoiseModel::new(kind, 1.0 / s2n.sqrt())
    }

    /// Characteristic function of the *standard* error at `x`.
    ///
    /// Real-valued because both laws are symmetric; strictly positive
    /// everywhere, so deconvolution never divides by zero (though the
    /// Gaussian value underflows to subnormals/zero for large arguments —
    /// the estimator guards that case).
    pub fn cf(&self, x: f64) -> f64 {
        match self.kind {
            NoiseKind::Laplace => 1.0 / (1.0 + 0.5 * x * x),
            NoiseKind::Gaussian => (-0.5 * x * x).exp(),
            NoiseKind::None => 1.0,
        }
    }

    /// Cumulative distribution function of the standard error.
    ///
    /// Available for the two genuine laws; [`NoiseKind::None`] is a point
    /// mass and is rejected.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        match self.kind {
            NoiseKind::Laplace => {
                let t = std::f64::consts::SQRT_2 * x;
                Ok(if x < 0.0 {
                    0.5 * t.exp()
                } else {
                    1.0 - 0.5 * (-t).exp()
                })
            }
            NoiseKind::Gaussian => {
                Ok(0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2))
            }
            NoiseKind::None => Err(Error::unsupported(
                "noise kind `none` has no distribution function".to_string(),
            )),
        }
    }

    /// Draw `n` standard (unscaled) errors.
    ///
    /// The level `σ` is *not* applied here; data generators compute
    /// `Z = X + σ·ε` themselves.  Draw order per variate is fixed (Laplace:
    /// one `Exp(1)` then one sign bit) so streams are reproducible.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match self.kind {
            NoiseKind::Laplace => (0..n)
                .map(|_| {
                    let magnitude: f64 = rng.sample::<f64, _>(Exp1) / std::f64::consts::SQRT_2;
                    if rng.random::<bool>() {
                        magnitude
                    } else {
                        -magnitude
                    }
                })
                .collect(),
            NoiseKind::Gaussian => (0..n).map(|_| rng.sample(StandardNormal)).collect(),
            NoiseKind::None => vec![0.0; n],
        }
    }

    /// Smoothness constants `(γ, κ₀, μ, δ)` of the characteristic-function
    /// lower bound `|cf(x)| ≥ κ₀·(x²+1)^{-γ/2}·exp(-μ·|x|^δ)`.
    pub fn smoothness_constants(&self) -> (f64, f64, f64, f64) {
        match self.kind {
            NoiseKind::Laplace => (2.0, 0.5, 0.0, 0.0),
            NoiseKind::Gaussian => (0.0, 1.0, 0.5, 2.0),
            NoiseKind::None => (0.0, 1.0, 0.0, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cf_reference_values() {
        let lap = NoiseModel::new(NoiseKind::Laplace, 1.0).unwrap();
        assert_eq!(lap.cf(0.0), 1.0);
        assert_eq!(lap.cf(std::f64::consts::SQRT_2), 0.5);
        let gau = NoiseModel::new(NoiseKind::Gaussian, 1.0).unwrap();
        assert_eq!(gau.cf(0.0), 1.0);
        assert!((gau.cf(1.0) - (-0.5f64).exp()).abs() < 1e-15);
        let none = NoiseModel::new(NoiseKind::None, 0.0).unwrap();
        assert_eq!(none.cf(123.4), 1.0);
    }

    #[test]
    fn cf_is_even_and_positive() {
        for kind in [NoiseKind::Laplace, NoiseKind::Gaussian, NoiseKind::None] {
            let m = NoiseModel::new(kind, 0.0).unwrap();
            for i in 0..200 {
                let x = -10.0 + i as f64 * 0.1;
                assert!(m.cf(x) > 0.0);
                assert_eq!(m.cf(x), m.cf(-x));
            }
        }
    }

    #[test]
    fn s2n_conversion() {
        let m = NoiseModel::from_s2n(NoiseKind::Laplace, 4.0).unwrap();
        assert_eq!(m.sigma, 0.5);
        let none = NoiseModel::from_s2n(NoiseKind::None, 4.0).unwrap();
        assert_eq!(none.sigma, 0.0);
        assert!(NoiseModel::from_s2n(NoiseKind::Gaussian, 0.0).is_err());
        assert!(NoiseModel::from_s2n(NoiseKind::Gaussian, -1.0).is_err());
    }

    #[test]
    fn invalid_levels_are_rejected() {
        assert!(NoiseModel::new(NoiseKind::Laplace, -0.1).is_err());
        assert!(NoiseModel::new(NoiseKind::Laplace, f64::NAN).is_err());
        assert!(NoiseModel::new(NoiseKind::None, 0.5).is_err());
    }

    #[test]
    fn samples_have_unit_variance_and_zero_mean() {
        let n = 1_000_000;
        for kind in [NoiseKind::Laplace, NoiseKind::Gaussian] {
            let m = NoiseModel::new(kind, 1.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let xs = m.sample(n, &mut rng);
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
            assert!(mean.abs() < 5e-3, "{kind:?}: mean = {mean}");
            assert!((var - 1.0).abs() < 1e-2, "{kind:?}: var = {var}");
        }
        let none = NoiseModel::new(NoiseKind::None, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        assert!(none.sample(10, &mut rng).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn cdf_matches_density_law() {
        let lap = NoiseModel::new(NoiseKind::Laplace, 1.0).unwrap();
        assert!((lap.cdf(0.0).unwrap() - 0.5).abs() < 1e-15);
        // P(|X| <= 1/√2) = 1 - exp(-1) for the unit-variance Laplace law.
        let p = lap.cdf(0.5f64.sqrt()).unwrap() - lap.cdf(-(0.5f64.sqrt())).unwrap();
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        let gau = NoiseModel::new(NoiseKind::Gaussian, 1.0).unwrap();
        assert!((gau.cdf(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((gau.cdf(1.96).unwrap() - 0.975).abs() < 3e-4);
        let none = NoiseModel::new(NoiseKind::None, 0.0).unwrap();
        assert!(none.cdf(0.0).is_err());
    }

    #[test]
    fn smoothness_bound_constants() {
        // The bound |cf(x)| >= κ₀·(x²+1)^{-γ/2}·exp(-μ|x|^δ) must hold; a
        // fine grid check lives in the property suite, spot-check here.
        for kind in [NoiseKind::Laplace, NoiseKind::Gaussian, NoiseKind::None] {
            let m = NoiseModel::new(kind, 0.0).unwrap();
            let (gamma, kappa0, mu, delta) = m.smoothness_constants();
            for &x in &[0.0f64, 0.5, 1.0, 3.0, 10.0] {
                let bound = kappa0 * (x * x + 1.0).powf(-gamma / 2.0)
                    * (-mu * x.abs().powf(delta)).exp();
                assert!(
                    m.cf(x) >= bound - 1e-15,
                    "{kind:?} at {x}: cf={} bound={bound}",
                    m.cf(x)
                );
            }
        }
    }
}
