//! Chirp-Z (Bluestein) evaluation of uniform-frequency sums with arbitrary
//! step: `out[n] = sum_b f[b] exp(i theta b n)`.
//!
//! The projection formula needs the chord function on the lattice of doubled
//! arguments 2(x - X), whose frequency step 2 dp dq / hbar is generally not a
//! DFT bin; Bluestein's identity b n = (b^2 + n^2 - (n-b)^2)/2 turns the sum
//! into one linear convolution regardless of the step.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct ChirpPlan {
    n_in: usize,
    n_out: usize,
    size: usize,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    kernel_hat: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl ChirpPlan {
    pub fn new(n_in: usize, n_out: usize, theta: f64) -> Self {
        let size = (n_in + n_out - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(size);
        let ifft = planner.plan_fft_inverse(size);

        let half_chirp = |k: usize| {
            let phase = 0.5 * theta * (k as f64) * (k as f64);
            Complex64::from_polar(1.0, phase)
        };
        let pre: Vec<Complex64> = (0..n_in).map(half_chirp).collect();
        let post: Vec<Complex64> = (0..n_out).map(half_chirp).collect();

        // kernel c[k] = exp(-i theta k^2 / 2), laid out cyclically for the
        // linear convolution range k in [-(n_in-1), n_out-1]
        let mut kernel = vec![Complex64::new(0.0, 0.0); size];
        for (k, slot) in kernel.iter_mut().enumerate().take(n_out) {
            *slot = half_chirp(k).conj();
        }
        for k in 1..n_in {
            kernel[size - k] = half_chirp(k).conj();
        }
        fft.process(&mut kernel);

        Self {
            n_in,
            n_out,
            size,
            pre,
            post,
            kernel_hat: kernel,
            fft,
            ifft,
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// Evaluate `out[n] = sum_b input[b] exp(i theta b n)` for n = 0..n_out.
    pub fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.n_in);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.size];
        for (b, (x, chirp)) in input.iter().zip(&self.pre).enumerate() {
            buf[b] = x * chirp;
        }
        self.fft.process(&mut buf);
        for (v, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *v *= k;
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.size as f64;
        (0..self.n_out)
            .map(|n| buf[n] * self.post[n] * scale)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(input: &[Complex64], n_out: usize, theta: f64) -> Vec<Complex64> {
        (0..n_out)
            .map(|n| {
                input
                    .iter()
                    .enumerate()
                    .map(|(b, x)| x * Complex64::from_polar(1.0, theta * (b * n) as f64))
                    .sum()
            })
            .collect()
    }

    fn pseudo_random(n: usize) -> Vec<Complex64> {
        // deterministic LCG-style fill, no RNG dependency needed here
        let mut state = 0x2545f4914f6cdd1du64;
        (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                Complex64::new(a, b)
            })
            .collect()
    }

    #[test]
    fn matches_naive_sum() {
        for &(n_in, n_out, theta) in
            &[(13usize, 7usize, 0.37), (32, 32, -1.234), (17, 40, 0.0102)]
        {
            let input = pseudo_random(n_in);
            let plan = ChirpPlan::new(n_in, n_out, theta);
            let fast = plan.apply(&input);
            let slow = naive(&input, n_out, theta);
            for (f, s) in fast.iter().zip(&slow) {
                assert!((f - s).norm() < 1e-11, "{f} vs {s}");
            }
        }
    }

    #[test]
    fn zero_step_reduces_to_plain_sum() {
        let input = pseudo_random(24);
        let total: Complex64 = input.iter().sum();
        let plan = ChirpPlan::new(24, 5, 0.0);
        for v in plan.apply(&input) {
            assert!((v - total).norm() < 1e-12);
        }
    }
}
