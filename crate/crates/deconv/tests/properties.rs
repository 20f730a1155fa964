//! Cross-module invariants: transform algebra, sampler/catalog agreement,
//! pdf normalisation, noise characteristic-function bounds, penalty shape,
//! refinement stability and risk-method ordering.  Finer-grained unit
//! properties live next to their modules.

use std::f64::consts::PI;

use deconv::densities::{DensityId, TestDensity};
use deconv::estimator::{coefficients, empirical_cf, select};
use deconv::noise::{NoiseKind, NoiseModel};
use deconv::penalty::{penalty, zeta, PenaltyFamily, PenaltySpec};
use deconv::quad::{adaptive_simpson, sine_integral};
use deconv::risk::{ise_exact, ise_interval};
use deconv::spectral::{fft, ifft};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson pre-split into `panels` so oscillatory integrands cannot
/// alias to a constant at the coarse pass.
fn panel_quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, tol: f64) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        acc += adaptive_simpson(&f, lo, lo + h, tol / panels as f64);
    }
    acc
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fft_roundtrip(v in complex_vec(256)) {
        let back = ifft(&fft(&v).unwrap()).unwrap();
        for (a, b) in v.iter().zip(&back) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn fft_is_linear(x in complex_vec(128), y in complex_vec(128), a in -2.0f64..2.0) {
        let combined: Vec<Complex64> =
            x.iter().zip(&y).map(|(u, w)| a * u + w).collect();
        let lhs = fft(&combined).unwrap();
        let fx = fft(&x).unwrap();
        let fy = fft(&y).unwrap();
        for (l, (u, w)) in lhs.iter().zip(fx.iter().zip(&fy)) {
            prop_assert!((l - (a * u + w)).norm() <= 1e-11);
        }
    }

    #[test]
    fn fft_parseval(v in complex_vec(256)) {
        let spectrum = fft(&v).unwrap();
        let time: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let freq: f64 = spectrum.iter().map(|c| c.norm_sqr()).sum::<f64>() / 256.0;
        prop_assert!((time - freq).abs() <= 1e-10 * time.max(1.0));
    }
}

/// Every catalog sampler reproduces its characteristic function.
#[test]
fn samplers_match_characteristic_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7001);
    let n = 20_000usize;
    let tol = 4.0 / (n as f64).sqrt();
    for id in DensityId::ALL {
        let density = TestDensity::new(id);
        let sample = density.sample(n, &mut rng);
        for &x in &[0.5, 1.0, 2.0] {
            let diff = (empirical_cf(&sample, x).unwrap() - density.cf(x)).norm();
            assert!(
                diff <= tol,
                "{}: |empirical cf - cf| = {diff} at x = {x} (tol {tol})",
                id.key()
            );
        }
    }
}

/// Noise samplers reproduce their distribution functions (Kolmogorov-Smirnov).
#[test]
fn noise_samplers_match_cdfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7002);
    let n = 1_000_000usize;
    for kind in [NoiseKind::Laplace, NoiseKind::Gaussian] {
        let noise = NoiseModel::new(kind, 1.0).unwrap();
        let mut draws = noise.sample(n, &mut rng);
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, &d) in draws.iter().enumerate() {
            let f = noise.cdf(d).unwrap();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((f - lo).abs()).max((f - hi).abs());
        }
        assert!(ks < 0.002, "{}: KS statistic {ks}", kind.key());
    }
}

/// Closed-form pdfs integrate to one.  Windows are wide enough that the
/// leftover mass is analytic or negligible; the Cauchy and Féjer families
/// get exact tail closures (arctangent and sine-integral respectively).
#[test]
fn pdfs_integrate_to_one() {
    let quad_tol = 1e-9;
    for id in DensityId::ALL {
        let density = TestDensity::new(id);
        if !density.has_pdf {
            continue;
        }
        let pdf = |x: f64| density.pdf(x).unwrap();
        let mass = match id {
            DensityId::Uniform => {
                let a = 3.0f64.sqrt();
                panel_quad(pdf, -a, a, 16, quad_tol)
            }
            DensityId::Cauchy => {
                let t = 50.0f64;
                let tail = 1.0 - (2.0 / PI) * t.atan();
                panel_quad(pdf, -t, t, 64, quad_tol) + tail
            }
            DensityId::Fejer1 | DensityId::Fejer5 | DensityId::Fejer10 | DensityId::Fejer13 => {
                let p = match id {
                    DensityId::Fejer1 => 1.0,
                    DensityId::Fejer5 => 5.0,
                    DensityId::Fejer10 => 10.0,
                    _ => 13.0,
                };
                let t = 40.0;
                // Integration by parts: ∫_T^∞ (1-cos px)/(pπx²) dx
                //   = (1/(pπ)) [(1 - cos pT)/T + p (π/2 - Si(pT))].
                let tail = 2.0 / (p * PI)
                    * ((1.0 - (p * t).cos()) / t + p * (PI / 2.0 - sine_integral(p * t)));
                let panels = (2.0 * p * t).ceil() as usize;
                panel_quad(pdf, -t, t, panels, quad_tol) + tail
            }
            DensityId::Gauss => panel_quad(pdf, -9.0, 9.0, 32, quad_tol),
            DensityId::MixGauss => panel_quad(pdf, -20.0, 20.0, 64, quad_tol),
            DensityId::Laplace => panel_quad(pdf, -40.0, 40.0, 64, quad_tol),
            // The one-sided laws: a hair below the support edge plus a long
            // right window that outruns their exponential tails.
            DensityId::Exponential => panel_quad(pdf, -1.0, 60.0, 64, quad_tol),
            DensityId::ChiSq3 => panel_quad(pdf, -1.0, 80.0, 96, quad_tol),
            DensityId::Gamma2 => panel_quad(pdf, -1.0, 80.0, 96, quad_tol),
            DensityId::MixGamma => panel_quad(pdf, -1.0, 200.0, 256, quad_tol),
            _ => unreachable!("stable laws carry no closed-form pdf"),
        };
        assert!(
            (mass - 1.0).abs() <= 1e-6,
            "{}: pdf mass {mass}",
            id.key()
        );
    }
}

/// The characteristic-function lower bound advertised by
/// `smoothness_constants` holds on a wide frequency grid.
#[test]
fn noise_cf_respects_advertised_lower_bound() {
    for kind in [NoiseKind::Laplace, NoiseKind::Gaussian, NoiseKind::None] {
        let noise = NoiseModel::new(kind, if kind == NoiseKind::None { 0.0 } else { 1.0 })
            .unwrap();
        let (gamma, kappa0, mu, delta) = noise.smoothness_constants();
        let mut x = -100.0f64;
        while x <= 100.0 {
            let bound = kappa0 * (x * x + 1.0).powf(-gamma / 2.0) * (-mu * x.abs().powf(delta)).exp();
            assert!(
                noise.cf(x) >= bound - 1e-12,
                "{}: cf({x}) = {} below bound {bound}",
                kind.key(),
                noise.cf(x)
            );
            x += 0.05;
        }
    }
}

/// Shape of the ζ weight: bounded below by π, identity beyond 4, continuous
/// at 2, and the documented downstep at 4.
#[test]
fn zeta_shape() {
    let mut ell = 0.0f64;
    while ell <= 12.0 {
        assert!(zeta(ell) >= PI - 1e-15, "zeta({ell}) = {}", zeta(ell));
        if ell >= 4.0 {
            assert_eq!(zeta(ell), ell);
        }
        ell += 0.01;
    }
    assert!((zeta(2.0 - 1e-9) - zeta(2.0)).abs() < 1e-8, "continuity at 2");
    let step = zeta(4.0 - 1e-12) - zeta(4.0);
    let expected = PI + 1.0 / (PI - 2.0) - 4.0;
    assert!(
        (step - expected).abs() < 1e-5,
        "downstep at 4: {step} vs {expected}"
    );
}

/// Penalties scale exactly like 1/n and vanish for large samples.
#[test]
fn penalty_scales_inversely_with_n() {
    let spec_at = |n: usize| {
        PenaltySpec::new(PenaltyFamily::NewLaplace, n, 6.25, 0.4).unwrap()
    };
    let ell = 2.0;
    let p100 = penalty(&spec_at(100), ell).unwrap();
    let p10k = penalty(&spec_at(10_000), ell).unwrap();
    assert!(
        (p100 * 100.0 - p10k * 10_000.0).abs() <= 1e-12 * (p100 * 100.0),
        "n * pen(n) must be constant: {} vs {}",
        p100 * 100.0,
        p10k * 10_000.0
    );
    let huge = penalty(&spec_at(1_000_000_000_000), ell).unwrap();
    assert!(huge < 1e-9, "pen at n = 1e12 is {huge}");
}

/// Refining the transform (M = 8 -> 11) barely moves the contrast of the
/// selected model: the frequency power sum is a converged Riemann sum.
#[test]
fn contrast_stable_under_transform_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(7003);
    let density = TestDensity::new(DensityId::ChiSq3);
    let noise = NoiseModel::new(NoiseKind::Laplace, 0.5).unwrap();
    let n = 300usize;
    let x = density.sample(n, &mut rng);
    let eps = noise.sample(n, &mut rng);
    let z: Vec<f64> = x.iter().zip(&eps).map(|(a, b)| a + 0.5 * b).collect();
    let spec = PenaltySpec::new(PenaltyFamily::NewLaplace, n, 4.0, 0.5).unwrap();
    let coarse = select(&z, &noise, &spec, 8).unwrap();
    let fine = coefficients(&z, coarse.ell, &noise, 11).unwrap();
    let rel = (coarse.contrast - fine.contrast).abs() / coarse.contrast.abs();
    assert!(rel < 1e-3, "relative contrast change {rel}");
}

/// The exact spectral ISE dominates the interval ISE on the same fit: the
/// interval integral misses tail mass by construction.
#[test]
fn exact_ise_dominates_interval_ise() {
    let mut rng = ChaCha8Rng::seed_from_u64(7004);
    let density = TestDensity::new(DensityId::Laplace);
    let noise = NoiseModel::new(NoiseKind::Laplace, 0.5).unwrap();
    let spec = PenaltySpec::new(PenaltyFamily::NewLaplace, 100, 4.0, 0.5).unwrap();
    let mut sum_e1 = 0.0;
    let mut sum_e2 = 0.0;
    for _ in 0..40 {
        let x = density.sample(100, &mut rng);
        let eps = noise.sample(100, &mut rng);
        let z: Vec<f64> = x.iter().zip(&eps).map(|(a, b)| a + 0.5 * b).collect();
        let est = select(&z, &noise, &spec, 8).unwrap();
        let e1 = ise_interval(&est, &density, 512).unwrap().ise;
        let e2 = ise_exact(&est, &density).unwrap().ise;
        assert!(e2 >= e1 - 2e-3, "replication with E2 = {e2} far below E1 = {e1}");
        sum_e1 += e1;
        sum_e2 += e2;
    }
    assert!(
        sum_e2 >= sum_e1,
        "mean E2 {} below mean E1 {}",
        sum_e2 / 40.0,
        sum_e1 / 40.0
    );
}
