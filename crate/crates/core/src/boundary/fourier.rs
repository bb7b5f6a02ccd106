//! Uniform circle grids and the FFT-based analytic projection.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::BoundaryError;

/// `M` equispaced nodes `ωʲ = e^{2πij/M}` with cached forward/inverse plans.
#[derive(Clone)]
pub struct CircleGrid {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CircleGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CircleGrid").field("m", &self.m).finish()
    }
}

impl CircleGrid {
    pub fn new(m: usize) -> Result<Self, BoundaryError> {
        if m < 8 || !m.is_power_of_two() {
            return Err(BoundaryError::InvalidArgument(format!(
                "grid size must be a power of two >= 8, got {m}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self { m, forward: planner.plan_fft_forward(m), inverse: planner.plan_fft_inverse(m) })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn node(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / self.m as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.m).map(|j| self.node(j))
    }

    /// Fourier coefficients `ĥ_k = M⁻¹ Σ_j h_j ω^{−jk}`, `k = 0..M−1`.
    pub fn coefficients(&self, samples: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(samples.len(), self.m);
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Values of `Σ_k coeffs[k]·(ρωʲ)^k` at every node, `coeffs.len() ≤ M`.
    pub fn synthesize(&self, coeffs: &[Complex64], radius: f64) -> Vec<Complex64> {
        assert!(coeffs.len() <= self.m, "more coefficients than grid nodes");
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        let mut rk = 1.0;
        for (slot, c) in buf.iter_mut().zip(coeffs) {
            *slot = c * rk;
            rk *= radius;
        }
        self.inverse.process(&mut buf);
        buf
    }

    /// Analytic part of a real function sampled on the grid: the `c_k`,
    /// `0 ≤ k < M/2`, with `(2πi)⁻¹∮ h(u)/(u − ζ) du = Σ c_k ζ^k` for `|ζ| < 1`.
    pub fn project(&self, samples: &[f64]) -> Result<Vec<Complex64>, BoundaryError> {
        if samples.len() != self.m {
            return Err(BoundaryError::InvalidArgument(format!(
                "expected {} samples, got {}",
                self.m,
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(BoundaryError::NonFinite("cauchy_project samples"));
        }
        let buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        let mut c = self.coefficients(&buf);
        c.truncate(self.m / 2);
        c[0].im = 0.0;
        Ok(c)
    }
}

/// One-shot analytic projection on an `M = samples.len()` grid.
pub fn cauchy_project(samples: &[f64]) -> Result<Vec<Complex64>, BoundaryError> {
    CircleGrid::new(samples.len())?.project(samples)
}
