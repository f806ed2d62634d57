//! In-place radix-2 FFT for the power-of-two grids used by the propagators.
//!
//! Forward transform uses `exp(-i 2π jm / N)`; the inverse uses `exp(+i 2π jm / N)` and
//! divides by `N`, so `inverse(forward(x)) == x`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    twiddles: Vec<Complex64>,
    reversed: Vec<usize>,
}

impl Fft {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let bits = len.trailing_zeros();
        let reversed = (0..len)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        let twiddles = (0..len / 2)
            .map(|k| {
                let phase = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(libm::cos(phase), libm::sin(phase))
            })
            .collect();
        Ok(Self {
            len,
            twiddles,
            reversed,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / self.len as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        for (i, &j) in self.reversed.iter().enumerate() {
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for block in data.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            half *= 2;
        }
    }
}

/// Angular frequencies (or transverse wavenumbers) of the FFT bins for sample spacing `step`,
/// in standard order: `0, 1, ..., N/2 - 1, -N/2, ..., -1` times `2π / (N step)`.
pub fn frequencies(len: usize, step: f64) -> Vec<f64> {
    let unit = 2.0 * PI / (len as f64 * step);
    (0..len)
        .map(|m| {
            let m = if m < len / 2 {
                m as f64
            } else {
                m as f64 - len as f64
            };
            m * unit
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive_dft(input: &[Complex64]) -> Vec<Complex64> {
        let n = input.len();
        (0..n)
            .map(|m| {
                input
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let phase = -2.0 * PI * (j * m) as f64 / n as f64;
                        x * Complex64::new(libm::cos(phase), libm::sin(phase))
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for &n in &[1usize, 2, 4, 8, 64] {
            let input: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new(libm::sin(0.3 * j as f64) + 0.1, libm::cos(1.7 * j as f64)))
                .collect();
            let mut fast = input.clone();
            Fft::new(n).unwrap().forward(&mut fast);
            for (a, b) in fast.iter().zip(naive_dft(&input)) {
                assert!((a - b).norm() < 1e-10, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let fft = Fft::new(32).unwrap();
        let input: Vec<Complex64> = (0..32)
            .map(|j| Complex64::new(j as f64, -0.5 * j as f64))
            .collect();
        let mut data = input.clone();
        fft.forward(&mut data);
        fft.inverse(&mut data);
        for (a, b) in data.iter().zip(&input) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(Fft::new(12).unwrap_err(), Error::NotPowerOfTwo(12));
        assert!(Fft::new(0).is_err());
    }

    #[test]
    fn bin_frequencies() {
        let f = frequencies(4, 0.5);
        let unit = 2.0 * PI / 2.0;
        assert_eq!(f, vec![0.0, unit, -2.0 * unit, -unit]);
    }
}
