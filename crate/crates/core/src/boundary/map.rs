//! θ coefficients and the exterior conformal map reconstructed from them.

use num_complex::Complex64;

use super::fourier::CircleGrid;
use super::BoundaryError;
use crate::potential::RadialProfile;

/// Relative positivity floor for θ on the circle.
pub const THETA_FLOOR: f64 = 1e-12;

/// Laurent polynomial `θ(ζ) = Σ_{|j|≤d} b_j ζ^j` with `b_{−j} = conj b_j`.
///
/// Only `b_0..b_d` are stored; `b_0` is real.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCoefficients {
    b: Vec<Complex64>,
}

impl ThetaCoefficients {
    pub fn new(mut b: Vec<Complex64>) -> Result<Self, BoundaryError> {
        if b.is_empty() {
            return Err(BoundaryError::InvalidArgument("θ needs at least b_0".into()));
        }
        if b.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(BoundaryError::NonFinite("θ coefficients"));
        }
        b[0].im = 0.0;
        Ok(Self { b })
    }

    pub fn constant(b0: f64) -> Self {
        Self { b: vec![Complex64::new(b0, 0.0)] }
    }

    pub fn degree(&self) -> usize {
        self.b.len() - 1
    }

    /// `b_j` for any `j ∈ [−d, d]`, zero outside.
    pub fn coeff(&self, j: isize) -> Complex64 {
        let k = j.unsigned_abs();
        match self.b.get(k) {
            Some(c) if j >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn nonnegative(&self) -> &[Complex64] {
        &self.b
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        let inv = zeta.inv();
        let (mut pos, mut neg) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let mut acc = self.b[0];
        for c in &self.b[1..] {
            pos *= zeta;
            neg *= inv;
            acc += c * pos + c.conj() * neg;
        }
        acc
    }

    /// Real value at `e^{iφ}`.
    pub fn on_circle(&self, phi: f64) -> f64 {
        self.b[0].re
            + 2.0
                * self.b[1..]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (c * Complex64::from_polar(1.0, (k + 1) as f64 * phi)).re)
                    .sum::<f64>()
    }

    /// Values on every node of `grid`.
    pub fn sample(&self, grid: &CircleGrid) -> Vec<f64> {
        grid.synthesize(&self.b, 1.0).iter().map(|v| 2.0 * v.re - self.b[0].re).collect()
    }

    /// `[b_0, Re b_1, Im b_1, …]`.
    pub fn to_unknowns(&self) -> Vec<f64> {
        let mut x = vec![self.b[0].re];
        for c in &self.b[1..] {
            x.push(c.re);
            x.push(c.im);
        }
        x
    }

    pub fn from_unknowns(x: &[f64]) -> Self {
        assert!(x.len() % 2 == 1, "unknown vector has odd length 2d + 1");
        let mut b = vec![Complex64::new(x[0], 0.0)];
        b.extend(x[1..].chunks(2).map(|p| Complex64::new(p[0], p[1])));
        Self { b }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { b: self.b.iter().map(|c| c * s).collect() }
    }
}

/// `f(ζ) = a·ζ⁻¹·exp(Σ_{k≥0} c_k ζ^k)` with `2 log a + c_0 = 0`.
///
/// Maps the unit disk onto the complement of the droplet, `0 ↦ ∞`, with
/// `(1/f)′(0) = a`. The pole amplitude `lim ζf(ζ) = 1/a` is the conformal
/// radius of the droplet.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    pub a: f64,
    pub c: Vec<Complex64>,
    pub grid_size: usize,
    /// Coefficients past this index are below roundoff.
    n_eff: usize,
}

impl ConformalMap {
    pub fn from_coefficients(c: Vec<Complex64>, grid_size: usize) -> Result<Self, BoundaryError> {
        if c.is_empty() {
            return Err(BoundaryError::InvalidArgument("map needs at least c_0".into()));
        }
        if c.len() > grid_size / 2 {
            return Err(BoundaryError::InvalidArgument(format!(
                "{} coefficients do not fit a grid of {grid_size}",
                c.len()
            )));
        }
        if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(BoundaryError::NonFinite("map coefficients"));
        }
        let a = (-0.5 * c[0].re).exp();
        let top = c[1..].iter().map(|v| v.norm()).fold(0.0, f64::max);
        let n_eff = c
            .iter()
            .rposition(|v| v.norm() > 1e-18 * top.max(1e-300))
            .map_or(1, |i| i + 1)
            .max(1);
        Ok(Self { a, c, grid_size, n_eff })
    }

    pub fn conformal_radius(&self) -> f64 {
        self.a * self.c[0].re.exp()
    }

    /// `Σ c_k ζ^k` (Horner over the significant coefficients).
    pub fn log_series(&self, zeta: Complex64) -> Complex64 {
        self.c[..self.n_eff].iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * zeta + c)
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        self.a / zeta * self.log_series(zeta).exp()
    }

    /// `ζ·f′(ζ)/f(ζ) = −1 + Σ k c_k ζ^k`.
    pub fn zeta_log_derivative(&self, zeta: Complex64) -> Complex64 {
        let s = self.c[1..self.n_eff]
            .iter()
            .enumerate()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * zeta + c * (k as f64 + 1.0));
        s * zeta - 1.0
    }

    pub fn derivative(&self, zeta: Complex64) -> Complex64 {
        self.eval(zeta) * self.zeta_log_derivative(zeta) / zeta
    }

    /// `f` on the nodes of `grid` scaled to radius ρ.
    pub fn on_grid(&self, grid: &CircleGrid, radius: f64) -> Vec<Complex64> {
        let series = grid.synthesize(&self.c, radius);
        series
            .iter()
            .enumerate()
            .map(|(j, s)| self.a / (grid.node(j) * radius) * s.exp())
            .collect()
    }

    /// `ζf′/f` on the nodes of `grid` (unit radius).
    pub fn zeta_log_derivative_on_grid(&self, grid: &CircleGrid) -> Vec<Complex64> {
        let weighted: Vec<Complex64> =
            self.c.iter().enumerate().map(|(k, c)| c * k as f64).collect();
        grid.synthesize(&weighted, 1.0).iter().map(|s| s - 1.0).collect()
    }
}

/// Reconstructs `f` from θ: samples `log I⁻¹(θ)` on an `M`-point grid,
/// projects onto its analytic part and sets `a = exp(−c_0/2)`.
pub fn build_map(
    theta: &ThetaCoefficients,
    profile: &RadialProfile,
    grid: &CircleGrid,
) -> Result<ConformalMap, BoundaryError> {
    let values = theta.sample(grid);
    let (min, max) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if !(min > THETA_FLOOR * max) || !max.is_finite() {
        return Err(BoundaryError::ThetaNonPositive { min, max });
    }
    let logs = values
        .iter()
        .map(|&t| profile.moment_inverse(t).map(f64::ln))
        .collect::<Result<Vec<_>, _>>()?;
    let c = grid.project(&logs)?;
    ConformalMap::from_coefficients(c, grid.len())
}

/// `f(ζ) = (aζ)⁻¹ ∏ (1 − ζ/ζ_j)^{1/b}` for roots outside the closed unit disk,
/// written in series form.
pub fn closed_form_map(
    b: f64,
    a: f64,
    roots: &[Complex64],
    grid_size: usize,
) -> Result<ConformalMap, BoundaryError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(BoundaryError::InvalidArgument(format!("need a, b > 0, got a = {a}, b = {b}")));
    }
    if let Some(r) = roots.iter().find(|r| r.norm() <= 1.0) {
        return Err(BoundaryError::RootInsideDisk(*r));
    }
    let n = grid_size / 2;
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    c[0] = Complex64::new(-2.0 * a.ln(), 0.0);
    for root in roots {
        let inv = root.inv();
        let mut p = inv;
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            *ck -= p / (b * k as f64);
            p *= inv;
            if p.norm() < 1e-300 {
                break;
            }
        }
    }
    ConformalMap::from_coefficients(c, grid_size)
}
