//! Adaptive density deconvolution by penalized projection on sinc spaces.
//!
//! Given observations `Z = X + σε` of a signal `X` contaminated by noise
//! with a known law, this crate estimates the density `g` of `X` without
//! assuming a shape for it.  The estimator expands `g` on the orthonormal
//! sinc basis of a bandlimited space (band `[-ℓ, ℓ]`), unbiasedly estimates
//! the expansion coefficients from the empirical characteristic function of
//! the observations divided by the noise characteristic function, and picks
//! the bandwidth `ℓ` by minimising a penalized empirical contrast, with
//! penalties calibrated separately for Laplace and Gaussian noise.
//!
//! The pieces:
//!
//! * [`densities`] — a catalog of sixteen test densities (standardised to
//!   unit variance where it exists) with samplers, characteristic functions
//!   and closed-form spectral tail energies;
//! * [`noise`] — the noise laws (Laplace, Gaussian, or none) with their
//!   characteristic functions and samplers;
//! * [`estimator`] — FFT-based coefficient estimation and penalized model
//!   selection over a bandwidth grid;
//! * [`penalty`] — the calibrated penalty functions and the model grid they
//!   induce;
//! * [`risk`] — integrated squared error by interval quadrature or by exact
//!   spectral decomposition;
//! * [`experiments`] — a reproducible Monte-Carlo harness (MISE tables,
//!   paired ratio studies, dependent-data generators);
//! * [`rates`] — theoretical MISE rates and abacus curves;
//! * [`config`] — TOML run configurations;
//! * [`spectral`], [`quad`] — the FFT and quadrature workhorses.
//!
//! # Example
//!
//! ```
//! use deconv::densities::{DensityId, TestDensity};
//! use deconv::estimator::select;
//! use deconv::noise::{NoiseKind, NoiseModel};
//! use deconv::penalty::{PenaltyFamily, PenaltySpec};
//! use rand::SeedableRng;
//!
//! // Simulate: chi-squared(3) signal (standardised), Laplace noise at
//! // signal-to-noise ratio 4.
//! let n = 500;
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let density = TestDensity::new(DensityId::ChiSq3);
//! let noise = NoiseModel::from_s2n(NoiseKind::Laplace, 4.0)?;
//! let x = density.sample(n, &mut rng);
//! let eps = noise.sample(n, &mut rng);
//! let z: Vec<f64> = x.iter().zip(&eps).map(|(x, e)| x + noise.sigma * e).collect();
//!
//! // Estimate: penalized projection with the matching calibrated penalty.
//! let spec = PenaltySpec::new(PenaltyFamily::NewLaplace, n, 4.0, noise.sigma)?;
//! let estimate = select(&z, &noise, &spec, 8)?;
//! assert!(estimate.ell > 0.0);
//! let at_mode = estimate.evaluate_at(-0.6);
//! assert!(at_mode.is_finite());
//! # Ok::<(), deconv::Error>(())
//! ```

pub mod config;
pub mod densities;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod noise;
pub mod penalty;
pub mod quad;
pub mod rates;
pub mod risk;
pub mod spectral;

pub use error::{Error, Result};
