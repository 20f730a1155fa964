//! Power-of-two discrete Fourier transforms and the midpoint Riemann–Fourier
//! sum used to discretise coefficient integrals.
//!
//! Conventions:
//!
//! * [`fft`] is the unnormalised forward transform
//!   `F[k] = Σ_j x[j]·exp(-2πi·jk/N)`.
//! * [`ifft`] is the normalised inverse transform
//!   `Y[j] = (1/N)·Σ_k x[k]·exp(+2πi·jk/N)`, so `ifft(fft(x)) == x`.
//! * [`riemann_fourier`] evaluates, for `j = 0..N-1`, the midpoint Riemann
//!   sum `R[j] = (1/N)·Σ_k u[k]·exp(i·jπ·(2k-1)/N)`, which approximates the
//!   Fourier coefficient `(1/2)∫_{-1}^{1} u(x)·exp(ijπx) dx` when `u[k]`
//!   holds the values of `u` at the nodes returned by [`riemann_nodes`].
//!
//! All routines allocate fresh output and never mutate their input.  Inputs
//! must have nonzero power-of-two length ([`Error::Size`] otherwise).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Core iterative radix-2 transform; `sign` is the sign of the exponent.
fn transform(x: &[Complex64], sign: f64) -> Result<Vec<Complex64>> {
    let n = x.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::size(format!(
            "transform length must be a nonzero power of two, got {n}"
        )));
    }
    let mut a = x.to_vec();
    if n == 1 {
        return Ok(a);
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let ang = sign * 2.0 * PI / len as f64;
        // Twiddles straight from sin/cos per stage: the transform is not a
        // hot path in this crate and the direct evaluation keeps rounding
        // error at the few-ulp level instead of compounding a recurrence.
        let twiddle: Vec<Complex64> = (0..half)
            .map(|k| Complex64::from_polar(1.0, ang * k as f64))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = a[start + k];
                let v = a[start + k + half] * twiddle[k];
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
    Ok(a)
}

/// Unnormalised forward transform `F[k] = Σ_j x[j]·exp(-2πi·jk/N)`.
pub fn fft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(x, -1.0)
}

/// Normalised inverse transform `Y[j] = (1/N)·Σ_k x[k]·exp(+2πi·jk/N)`.
pub fn ifft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut y = transform(x, 1.0)?;
    let scale = 1.0 / y.len() as f64;
    for c in y.iter_mut() {
        *c *= scale;
    }
    Ok(y)
}

/// Midpoint nodes for [`riemann_fourier`], wrapped into `[-1, 1)`.
///
/// The raw nodes are `x_k = (2k-1)/N` for `k = 0..N-1`; nodes at or above 1
/// are wrapped down by the period 2.  The wrapped set is the symmetric
/// midpoint grid `{±1/N, ±3/N, ...}`, so odd integrands sum to exactly zero.
/// For 2-periodic integrands evaluating at wrapped or raw nodes is
/// equivalent.
pub fn riemann_nodes(n: usize) -> Result<Vec<f64>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::size(format!(
            "node count must be a nonzero power of two, got {n}"
        )));
    }
    Ok((0..n)
        .map(|k| {
            let x = (2.0 * k as f64 - 1.0) / n as f64;
            if x >= 1.0 {
                x - 2.0
            } else {
                x
            }
        })
        .collect())
}

/// Midpoint Riemann–Fourier sums `R[j] = (1/N)·Σ_k u[k]·exp(i·jπ·(2k-1)/N)`.
///
/// Factoring the node offset out of the exponential reduces the sum to a
/// single inverse transform with a per-slot phase:
/// `R[j] = exp(-i·jπ/N) · ifft(u)[j]`.
pub fn riemann_fourier(u: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = u.len();
    let mut out = ifft(u)?;
    for (j, c) in out.iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, -(j as f64) * PI / n as f64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Direct O(N²) evaluation of the `ifft` definition.
    fn ifft_direct(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &v) in x.iter().enumerate() {
                    acc += v * Complex64::from_polar(1.0, 2.0 * PI * (j * k) as f64 / n as f64);
                }
                acc / n as f64
            })
            .collect()
    }

    fn random_vector(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect()
    }

    #[test]
    fn ifft_of_delta_is_flat() {
        let mut x = vec![Complex64::new(0.0, 0.0); 8];
        x[0] = Complex64::new(1.0, 0.0);
        let y = ifft(&x).unwrap();
        for c in y {
            assert_eq!(c, Complex64::new(0.125, 0.0));
        }
    }

    #[test]
    fn ifft_of_constant_is_delta() {
        let x = vec![Complex64::new(1.0, 0.0); 8];
        let y = ifft(&x).unwrap();
        assert!((y[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for c in &y[1..] {
            assert!(c.norm() <= 1e-15);
        }
    }

    #[test]
    fn ifft_matches_direct_sum_at_256() {
        let x = random_vector(256, 7);
        let fast = ifft(&x).unwrap();
        let slow = ifft_direct(&x);
        let max_err = fast
            .iter()
            .zip(&slow)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(max_err < 1e-12, "max_err = {max_err}");
    }

    #[test]
    fn fft_ifft_roundtrip() {
        for &n in &[8usize, 64, 256] {
            let x = random_vector(n, n as u64);
            let y = ifft(&fft(&x).unwrap()).unwrap();
            let max_err = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(max_err < 1e-12, "n={n}: max_err = {max_err}");
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(matches!(ifft(&[]), Err(Error::Size(_))));
        let x = vec![Complex64::new(1.0, 0.0); 12];
        assert!(matches!(ifft(&x), Err(Error::Size(_))));
        assert!(matches!(fft(&x), Err(Error::Size(_))));
        assert!(matches!(riemann_fourier(&x), Err(Error::Size(_))));
        assert!(matches!(riemann_nodes(0), Err(Error::Size(_))));
    }

    #[test]
    fn input_is_not_mutated() {
        let x = random_vector(64, 3);
        let copy = x.clone();
        let _ = fft(&x).unwrap();
        let _ = ifft(&x).unwrap();
        let _ = riemann_fourier(&x).unwrap();
        assert_eq!(x, copy);
    }

    #[test]
    fn riemann_nodes_are_wrapped_midpoints() {
        let nodes = riemann_nodes(8).unwrap();
        assert_eq!(nodes[0], -0.125);
        for &x in &nodes {
            assert!((-1.0..1.0).contains(&x));
        }
        // Symmetric set: odd functions sum to zero exactly.
        let sum: f64 = nodes.iter().sum();
        assert_eq!(sum, 0.0);
    }

    #[test]
    fn riemann_fourier_constant_function() {
        let n = 64;
        let u = vec![Complex64::new(1.0, 0.0); n];
        let r = riemann_fourier(&u).unwrap();
        assert!((r[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for c in &r[1..] {
            assert!(c.norm() <= 1e-12);
        }
    }

    #[test]
    fn riemann_fourier_pure_mode() {
        // u(x) = exp(-iπx) concentrates all mass on j = 1, exactly.
        let n = 64;
        let nodes = riemann_nodes(n).unwrap();
        let u: Vec<Complex64> = nodes
            .iter()
            .map(|&x| Complex64::from_polar(1.0, -PI * x))
            .collect();
        let r = riemann_fourier(&u).unwrap();
        assert!((r[1] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        for (j, c) in r.iter().enumerate() {
            if j != 1 {
                assert!(c.norm() < 1e-13, "leak at {j}: {c}");
            }
        }
    }

    #[test]
    fn riemann_fourier_odd_function() {
        // u(x) = x on the wrapped midpoint grid: the j = 0 slot is the plain
        // average, which vanishes by symmetry.
        let n = 64;
        let nodes = riemann_nodes(n).unwrap();
        let u: Vec<Complex64> = nodes.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let r = riemann_fourier(&u).unwrap();
        assert!(r[0].norm() <= 2.0 / n as f64);
        assert!(r[0].norm() < 1e-14);
    }

    #[test]
    fn riemann_fourier_matches_direct_sum() {
        for &n in &[8usize, 64, 256] {
            let u = random_vector(n, 1000 + n as u64);
            let fast = riemann_fourier(&u).unwrap();
            let slow: Vec<Complex64> = (0..n)
                .map(|j| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, &v) in u.iter().enumerate() {
                        let ang = (j as f64) * PI * (2.0 * k as f64 - 1.0) / n as f64;
                        acc += v * Complex64::from_polar(1.0, ang);
                    }
                    acc / n as f64
                })
                .collect();
            let max_err = fast
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(max_err < 1e-12, "n={n}: max_err = {max_err}");
        }
    }
}
