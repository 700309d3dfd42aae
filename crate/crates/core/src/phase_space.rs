//! Complex Gaussian phase-space vectors and the unitary DFT pair that maps
//! single-carrier CVs onto Gaussian subcarriers.
//!
//! A sample `z = x + i p` carries the position quadrature in its real part
//! and the momentum quadrature in its imaginary part. The `variance` of a
//! vector is the complex variance `E|z|^2`; each quadrature carries half of it.
//!
//! Both transforms are normalized by `1/sqrt(n)`, so they are unitary:
//!
//! ```text
//! inverse_dft:  d_i = n^{-1/2} sum_k z_k e^{-i 2 pi i k / n}
//! dft:          z_k = n^{-1/2} sum_i d_i e^{+i 2 pi i k / n}
//! ```

use crate::error::{ensure_positive, invalid, Result};
use crate::rng::{streams, CounterStream};
use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// Zero-mean circularly symmetric complex Gaussian vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGaussianVector {
    samples: Vec<Complex64>,
    variance: f64,
}

/// Gaussian subcarrier vector, the image of a [`ComplexGaussianVector`]
/// under [`inverse_dft`].
#[derive(Debug, Clone, PartialEq)]
pub struct SubcarrierVector {
    samples: Vec<Complex64>,
    variance: f64,
}

macro_rules! vector_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(samples: Vec<Complex64>, variance: f64) -> Result<Self> {
                if samples.is_empty() {
                    return Err(invalid("vector length must be >= 1"));
                }
                ensure_positive("variance", variance)?;
                Ok(Self { samples, variance })
            }

            pub fn samples(&self) -> &[Complex64] {
                &self.samples
            }

            pub fn into_samples(self) -> Vec<Complex64> {
                self.samples
            }

            /// Declared complex variance `E|z|^2`.
            pub fn variance(&self) -> f64 {
                self.variance
            }

            /// Variance of each quadrature, `variance / 2`.
            pub fn quadrature_variance(&self) -> f64 {
                self.variance / 2.0
            }

            pub fn len(&self) -> usize {
                self.samples.len()
            }

            pub fn is_empty(&self) -> bool {
                self.samples.is_empty()
            }

            pub fn norm_sqr(&self) -> f64 {
                self.samples.iter().map(|z| z.norm_sqr()).sum()
            }

            /// `(x, p)` quadrature pairs.
            pub fn quadratures(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
                self.samples.iter().map(|z| (z.re, z.im))
            }
        }
    };
}

vector_common!(ComplexGaussianVector);
vector_common!(SubcarrierVector);

/// Draws `n` i.i.d. circular complex Gaussians with `E|z|^2 = variance`.
pub fn sample_gaussian_vector(n: usize, variance: f64, seed: u64) -> Result<ComplexGaussianVector> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    ensure_positive("variance", variance)?;
    let mut rng = CounterStream::new(seed, streams::PHASE_SPACE);
    let samples = (0..n).map(|_| rng.complex_normal(variance)).collect();
    Ok(ComplexGaussianVector { samples, variance })
}

fn unitary_transform(input: &[Complex64], direction: FftDirection) -> Vec<Complex64> {
    let n = input.len();
    let mut buf = input.to_vec();
    let fft = FftPlanner::new().plan_fft(n, direction);
    fft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Single-carrier CVs to Gaussian subcarriers.
pub fn inverse_dft(z: &ComplexGaussianVector) -> SubcarrierVector {
    SubcarrierVector {
        samples: unitary_transform(&z.samples, FftDirection::Forward),
        variance: z.variance,
    }
}

/// Gaussian subcarriers back to single-carrier CVs.
pub fn dft(d: &SubcarrierVector) -> ComplexGaussianVector {
    ComplexGaussianVector {
        samples: unitary_transform(&d.samples, FftDirection::Inverse),
        variance: d.variance,
    }
}

/// Applies the subcarrier-domain transform `F(.)` to a subcarrier vector
/// in place of a fresh type; used by the channel map `y = F(T) F(d) + F(Delta)`.
pub(crate) fn fourier_samples(d: &SubcarrierVector) -> Vec<Complex64> {
    unitary_transform(&d.samples, FftDirection::Inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Direct O(n^2) summation with sign `sign` in the exponent.
    fn naive(v: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = v.len();
        (0..n)
            .map(|i| {
                v.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (k, z)| {
                    let ang = sign * 2.0 * PI * (i * k) as f64 / n as f64;
                    acc + z * Complex64::from_polar(1.0, ang)
                }) / (n as f64).sqrt()
            })
            .collect()
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(sample_gaussian_vector(0, 1.0, 1).is_err());
        assert!(sample_gaussian_vector(3, 0.0, 1).is_err());
        assert!(sample_gaussian_vector(3, -1.0, 1).is_err());
        assert!(SubcarrierVector::new(vec![], 1.0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_gaussian_vector(4, 1.0, 7).unwrap();
        let b = sample_gaussian_vector(4, 1.0, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_gaussian_vector(4, 1.0, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_mean_energy() {
        let z = sample_gaussian_vector(100_000, 2.0, 1).unwrap();
        let mean = z.norm_sqr() / z.len() as f64;
        assert!((1.97..=2.03).contains(&mean), "mean |z|^2 = {mean}");
    }

    #[test]
    fn quadratures_uncorrelated_and_balanced() {
        let z = sample_gaussian_vector(100_000, 1.0, 2).unwrap();
        let n = z.len() as f64;
        let (mx, mp) = z.quadratures().fold((0.0, 0.0), |a, (x, p)| (a.0 + x, a.1 + p));
        let (mx, mp) = (mx / n, mp / n);
        let (mut vx, mut vp, mut cov) = (0.0, 0.0, 0.0);
        for (x, p) in z.quadratures() {
            vx += (x - mx) * (x - mx);
            vp += (p - mp) * (p - mp);
            cov += (x - mx) * (p - mp);
        }
        assert!((cov / (n - 1.0)).abs() < 0.01);
        assert!((vx / (n - 1.0) - 0.5).abs() < 0.01);
        assert!((vp / (n - 1.0) - 0.5).abs() < 0.01);
    }

    #[test]
    fn constant_maps_to_scaled_impulse() {
        let c = Complex64::new(0.3, -1.1);
        let z = ComplexGaussianVector::new(vec![c; 4], 1.0).unwrap();
        let d = inverse_dft(&z);
        assert_relative_eq!(d.samples()[0].re, 2.0 * c.re, epsilon = 1e-12);
        assert_relative_eq!(d.samples()[0].im, 2.0 * c.im, epsilon = 1e-12);
        for s in &d.samples()[1..] {
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn impulse_maps_to_constant() {
        let mut v = vec![Complex64::new(0.0, 0.0); 4];
        v[0] = Complex64::new(1.0, 0.0);
        let d = SubcarrierVector::new(v, 1.0).unwrap();
        for s in dft(&d).samples() {
            assert!((s - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn transforms_match_direct_summation() {
        let z = sample_gaussian_vector(8, 1.0, 3).unwrap();
        let d = inverse_dft(&z);
        for (a, b) in d.samples().iter().zip(naive(z.samples(), -1.0)) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_relative_eq!(d.norm_sqr(), z.norm_sqr(), max_relative = 1e-12);

        let d16 = SubcarrierVector::new(sample_gaussian_vector(16, 1.0, 4).unwrap().into_samples(), 1.0).unwrap();
        let back = dft(&d16);
        for (a, b) in back.samples().iter().zip(naive(d16.samples(), 1.0)) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_relative_eq!(back.norm_sqr(), d16.norm_sqr(), max_relative = 1e-12);
    }

    #[test]
    fn fourier_preserves_gaussian_statistics() {
        // 10^5 aggregated components from blocks of 64.
        let mut energy = 0.0;
        let mut count = 0usize;
        for seed in 0..1563u64 {
            let z = sample_gaussian_vector(64, 1.5, seed).unwrap();
            let d = inverse_dft(&z);
            energy += d.norm_sqr();
            count += d.len();
        }
        let var = energy / count as f64;
        assert!((var / 1.5 - 1.0).abs() < 0.02, "variance {var}");
    }

    proptest! {
        #[test]
        fn unitary_round_trip(seed in any::<u64>(), n in 1usize..64) {
            let z = sample_gaussian_vector(n, 1.0, seed).unwrap();
            let d = inverse_dft(&z);
            let back = dft(&d);
            prop_assert!((d.norm_sqr() - z.norm_sqr()).abs() <= 1e-10 * z.norm_sqr());
            for (a, b) in back.samples().iter().zip(z.samples()) {
                prop_assert!((a - b).norm() < 1e-10);
            }
            let d2 = inverse_dft(&dft(&d));
            for (a, b) in d2.samples().iter().zip(d.samples()) {
                prop_assert!((a - b).norm() < 1e-10);
            }
        }
    }
}
