//! Integrated squared error (ISE) of a fitted estimate against a catalog
//! density, by two methods:
//!
//! * **E1** ([`ise_interval`]): trapezoid quadrature of `(ĝ - g)²` over the
//!   density's evaluation interval — requires a closed-form pdf;
//! * **E2** ([`ise_exact`]): exact spectral decomposition
//!   `ISE = tail_energy(ℓ)/(2π) + Σ_j |a_j - â_j|²`, where the reference
//!   coefficients `a_j` are obtained from the true characteristic function
//!   `g*` through *the same* discretised transform as the estimator — so the
//!   variance part measures exactly the estimation error on the model, and
//!   the bias part the energy outside it.  Works for every catalog entry,
//!   including the stable laws.
//!
//! Replication-level summaries are produced by [`aggregate`].

use crate::densities::TestDensity;
use crate::error::{Error, Result};
use crate::estimator::{coeffs_from_spectrum, ProjectionEstimate};
use std::f64::consts::PI;

/// Which ISE evaluation method produced a [`RiskResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IseMethod {
    /// Interval quadrature of `(ĝ - g)²` against the closed-form pdf.
    E1,
    /// Exact spectral method: tail energy plus coefficient differences.
    E2,
}

impl IseMethod {
    /// Stable textual key (`e1`, `e2`).
    pub fn key(&self) -> &'static str {
        match self {
            IseMethod::E1 => "e1",
            IseMethod::E2 => "e2",
        }
    }

    /// Parse a textual key.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "e1" => Ok(IseMethod::E1),
            "e2" => Ok(IseMethod::E2),
            other => Err(Error::config(format!(
                "unknown ISE method {other:?} (expected e1 or e2)"
            ))),
        }
    }
}

/// The integrated squared error of one fitted estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskResult {
    /// The integrated squared error.
    pub ise: f64,
    /// Method that produced it.
    pub method: IseMethod,
    /// Spectral bias `tail_energy(ℓ)/(2π)` (E2 only; 0 for E1).
    pub bias_part: f64,
    /// Coefficient error `Σ_j |a_j - â_j|²` (E2 only; 0 for E1).
    pub variance_part: f64,
    /// Bandwidth of the scored estimate.
    pub ell_used: f64,
}

/// E1: trapezoid ISE over the density's evaluation interval.
///
/// `grid_points >= 64` nodes are required (512 is the conventional default);
/// densities without a closed-form pdf are rejected with
/// [`Error::Unsupported`].
pub fn ise_interval(
    estimate: &ProjectionEstimate,
    density: &TestDensity,
    grid_points: usize,
) -> Result<RiskResult> {
    if !density.has_pdf {
        return Err(Error::unsupported(format!(
            "density {} has no closed-form pdf; use the exact spectral method",
            density.id.key()
        )));
    }
    let (a, b) = density.interval.ok_or_else(|| {
        Error::unsupported(format!(
            "density {} has no evaluation interval",
            density.id.key()
        ))
    })?;
    if grid_points < 64 {
        return Err(Error::domain(format!(
            "interval ISE needs at least 64 quadrature nodes, got {grid_points}"
        )));
    }
    let h = (b - a) / (grid_points - 1) as f64;
    let mut acc = 0.0;
    for i in 0..grid_points {
        let x = a + i as f64 * h;
        let diff = estimate.evaluate_at(x) - density.pdf(x)?;
        let w = if i == 0 || i == grid_points - 1 {
            0.5 * h
        } else {
            h
        };
        acc += w * diff * diff;
    }
    Ok(RiskResult {
        ise: acc,
        method: IseMethod::E1,
        bias_part: 0.0,
        variance_part: 0.0,
        ell_used: estimate.ell,
    })
}

/// Reference coefficients `a_j` of `density` on the estimate's model,
/// computed from `g*` through the estimator's own discretised transform.
pub fn reference_coefficients(
    density: &TestDensity,
    ell: f64,
    m_exp: u32,
) -> Result<Vec<num_complex::Complex64>> {
    coeffs_from_spectrum(|x| Ok(density.cf(x)), ell, m_exp)
}

/// E2: exact spectral ISE `tail_energy(ℓ)/(2π) + Σ_j |a_j - â_j|²`.
///
/// By construction `ise == bias_part + variance_part` exactly.
pub fn ise_exact(estimate: &ProjectionEstimate, density: &TestDensity) -> Result<RiskResult> {
    let bias = density.tail_energy(estimate.ell)? / (2.0 * PI);
    let reference = reference_coefficients(density, estimate.ell, estimate.m_exp)?;
    let variance: f64 = reference
        .iter()
        .zip(&estimate.coeffs)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(RiskResult {
        ise: bias + variance,
        method: IseMethod::E2,
        bias_part: bias,
        variance_part: variance,
        ell_used: estimate.ell,
    })
}

/// Summary of replication-level values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    /// Median (average of the middle pair for even counts).
    pub median: f64,
    /// Sample standard deviation (denominator `count - 1`); 0 for a single
    /// value.
    pub sd: f64,
    pub count: usize,
}

/// Aggregate replication values; errors on an empty slice.
pub fn aggregate(values: &[f64]) -> Result<Aggregate> {
    if values.is_empty() {
        return Err(Error::size("cannot aggregate zero replications"));
    }
    let count = values.len();
    let mean = values.iter().sum::<f64>() / count as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN risk values"));
    let median = if count % 2 == 1 {
        sorted[count / 2]
    } else {
        0.5 * (sorted[count / 2 - 1] + sorted[count / 2])
    };
    let sd = if count > 1 {
        let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
        (ss / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(Aggregate {
        mean,
        median,
        sd,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::DensityId;
    use crate::quad::adaptive_simpson;
    use num_complex::Complex64;

    fn perfect_estimate(id: DensityId, ell: f64, m_exp: u32) -> ProjectionEstimate {
        let d = TestDensity::new(id);
        let coeffs = reference_coefficients(&d, ell, m_exp).unwrap();
        let contrast = -coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>();
        ProjectionEstimate {
            ell,
            m_exp,
            coeffs,
            contrast,
            penalty: None,
        }
    }

    #[test]
    fn exact_method_with_perfect_coefficients_is_pure_bias() {
        // Cauchy at ℓ = 1: tail energy e^{-2}, so ISE = e^{-2}/(2π)
        // ≈ 0.0215392793.
        let d = TestDensity::new(DensityId::Cauchy);
        let est = perfect_estimate(DensityId::Cauchy, 1.0, 8);
        let r = ise_exact(&est, &d).unwrap();
        assert_eq!(r.variance_part, 0.0);
        let oracle = (-2.0f64).exp() / (2.0 * PI);
        assert!((r.ise - oracle).abs() < 1e-15, "ise = {}", r.ise);
        assert!((r.ise - 0.0215392793).abs() < 1e-9, "ise = {}", r.ise);
        assert_eq!(r.ise, r.bias_part + r.variance_part);
        assert_eq!(r.ell_used, 1.0);
        assert_eq!(r.method, IseMethod::E2);
    }

    #[test]
    fn exact_method_perturbation_is_pure_variance_shift() {
        let d = TestDensity::new(DensityId::Gauss);
        let mut est = perfect_estimate(DensityId::Gauss, 2.0, 6);
        let mut eta_sq = 0.0;
        for (i, c) in est.coeffs.iter_mut().enumerate() {
            let eta = 1e-3 * ((i as f64 * 0.7).sin());
            *c += Complex64::new(eta, 0.0);
            eta_sq += eta * eta;
        }
        let r = ise_exact(&est, &d).unwrap();
        assert!((r.variance_part - eta_sq).abs() < 1e-12);
        assert!((r.ise - (r.bias_part + r.variance_part)).abs() < 1e-15);
    }

    #[test]
    fn exact_method_works_for_stable() {
        let d = TestDensity::new(DensityId::Stable12);
        let est = perfect_estimate(DensityId::Stable12, 3.0, 8);
        let r = ise_exact(&est, &d).unwrap();
        assert!(r.ise > 0.0 && r.ise.is_finite());
        assert_eq!(r.variance_part, 0.0);
    }

    #[test]
    fn interval_method_zero_estimate_recovers_density_energy() {
        // With ĝ ≡ 0 the interval ISE is ∫_I g², checked against an
        // independent adaptive quadrature.
        let d = TestDensity::new(DensityId::Cauchy);
        let est = ProjectionEstimate {
            ell: 1.0,
            m_exp: 8,
            coeffs: vec![Complex64::new(0.0, 0.0); 256],
            contrast: 0.0,
            penalty: None,
        };
        let r = ise_interval(&est, &d, 512).unwrap();
        let oracle = adaptive_simpson(
            |x| {
                let g = d.pdf(x).unwrap();
                g * g
            },
            -10.0,
            10.0,
            1e-12,
        );
        assert!(
            (r.ise - oracle).abs() / oracle < 1e-3,
            "{} vs {oracle}",
            r.ise
        );
        assert_eq!(r.method, IseMethod::E1);
    }

    #[test]
    fn interval_method_self_convergence() {
        // Doubling the grid moves the value by well under 0.5%.
        let d = TestDensity::new(DensityId::Gauss);
        let est = perfect_estimate(DensityId::Gauss, 4.0, 8);
        let r512 = ise_interval(&est, &d, 512).unwrap();
        let r1024 = ise_interval(&est, &d, 1024).unwrap();
        let denom = r512.ise.abs().max(1e-12);
        assert!(
            (r512.ise - r1024.ise).abs() / denom < 5e-3,
            "{} vs {}",
            r512.ise,
            r1024.ise
        );
    }

    #[test]
    fn interval_method_guards() {
        let stable = TestDensity::new(DensityId::Stable12);
        let est = perfect_estimate(DensityId::Gauss, 2.0, 6);
        assert!(matches!(
            ise_interval(&est, &stable, 512),
            Err(Error::Unsupported(_))
        ));
        let gauss = TestDensity::new(DensityId::Gauss);
        assert!(matches!(
            ise_interval(&est, &gauss, 32),
            Err(Error::Domain(_))
        ));
        assert!(ise_interval(&est, &gauss, 64).is_ok());
    }

    #[test]
    fn aggregate_reference() {
        let a = aggregate(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(a.mean, 2.5);
        assert_eq!(a.median, 2.5);
        assert!((a.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(a.count, 4);
        let b = aggregate(&[7.0]).unwrap();
        assert_eq!(b.median, 7.0);
        assert_eq!(b.sd, 0.0);
        let c = aggregate(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(c.median, 2.0);
        assert!(aggregate(&[]).is_err());
    }
}
