//! Potential family `W(z) = Φ(|z|²) − P(z) − conj P(z)`.
//!
//! The radial part Φ comes either as a power law `C·s^b` or from the
//! generalized block model, where `Φ(s) = m·coupling·Q⁻¹(s)` with
//! `Q(x) = ∏(x + αᵢ)`. Everything downstream needs three derived functions
//! of Φ: the density `g(s) = π⁻¹(sΦ′(s))′`, the moment `I(s) = sΦ′(s)` and
//! its inverse.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("non-finite input to {0}")]
    NonFinite(&'static str),
    #[error("invalid radial profile: {0}")]
    InvalidProfile(String),
    #[error("density is not positive at s = {s} (g = {g})")]
    NonPositiveDensity { s: f64, g: f64 },
    #[error("could not bracket the inverse for target {0}")]
    InversionFailure(f64),
    #[error("argument {0} is outside the domain")]
    OutOfDomain(f64),
}

pub type Result<T> = std::result::Result<T, PotentialError>;

/// `Q(x) = ∏(x + αᵢ)` on `[x_min, ∞)`, `x_min = −min αᵢ`.
///
/// Internally everything is evaluated in `u = x − x_min` with the shifted
/// roots `δᵢ = αᵢ − min α ≥ 0`, which keeps `Q` relatively accurate near
/// its zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPolynomial {
    alphas: Vec<f64>,
    shifts: Vec<f64>,
    x_min: f64,
}

impl BlockPolynomial {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(PotentialError::InvalidProfile("alphas must be non-empty".into()));
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(PotentialError::NonFinite("alphas"));
        }
        let min = alphas.iter().copied().fold(f64::INFINITY, f64::min);
        let shifts = alphas.iter().map(|a| a - min).collect();
        Ok(Self { alphas, shifts, x_min: -min })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    /// Left end of the domain where `Q` is increasing.
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// True when the smallest α is attained more than once, so `Q′(x_min) = 0`.
    pub fn repeated_min(&self) -> bool {
        self.shifts.iter().filter(|&&d| d == 0.0).count() > 1
    }

    /// Same polynomial shifted so that `Σαᵢ = 0`.
    pub fn centered(&self) -> Self {
        let mean = self.alphas.iter().sum::<f64>() / self.m() as f64;
        Self::new(self.alphas.iter().map(|a| a - mean).collect()).expect("finite alphas")
    }

    /// `λᵢ = αᵢ − αᵢ₋₁` with the index taken cyclically.
    pub fn lambdas(&self) -> Vec<f64> {
        let m = self.m();
        (0..m).map(|i| self.alphas[i] - self.alphas[(i + m - 1) % m]).collect()
    }

    pub(crate) fn eval_u(&self, u: f64) -> f64 {
        self.shifts.iter().map(|d| u + d).product()
    }

    pub(crate) fn prime_u(&self, u: f64) -> f64 {
        (0..self.m())
            .map(|i| {
                self.shifts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, d)| u + d)
                    .product::<f64>()
            })
            .sum()
    }

    pub(crate) fn second_u(&self, u: f64) -> f64 {
        let m = self.m();
        let mut acc = 0.0;
        for i in 0..m {
            for k in 0..m {
                if i == k {
                    continue;
                }
                acc += self
                    .shifts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i && j != k)
                    .map(|(_, d)| u + d)
                    .product::<f64>();
            }
        }
        acc
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.alphas.iter().map(|a| x + a).product()
    }

    pub fn prime(&self, x: f64) -> f64 {
        self.prime_u(x - self.x_min)
    }

    pub fn second(&self, x: f64) -> f64 {
        self.second_u(x - self.x_min)
    }

    /// `u ≥ 0` with `Q(x_min + u) = s`.
    pub(crate) fn inverse_u(&self, s: f64) -> Result<f64> {
        if !s.is_finite() {
            return Err(PotentialError::NonFinite("q_inv"));
        }
        if s < 0.0 {
            return Err(PotentialError::OutOfDomain(s));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        invert_increasing(|u| (self.eval_u(u), self.prime_u(u)), s, 0.0)
    }

    /// Unique `x ≥ x_min` with `Q(x) = s`.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        Ok(self.x_min + self.inverse_u(s)?)
    }
}

/// Solves `f(x) = target` for an increasing `f` on `[lo, ∞)` with `f(lo) ≤ target`.
///
/// Bracket is grown geometrically from `[lo, lo + 1]`; the iteration is
/// Newton, falling back to bisection whenever a step leaves the bracket.
pub(crate) fn invert_increasing<F>(f: F, target: f64, lo: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut a = lo;
    let mut width = 1.0;
    let mut b = lo + width;
    let mut grown = 0;
    while f(b).0 < target {
        a = b;
        width *= 2.0;
        b = lo + width;
        grown += 1;
        if grown > 2000 || !b.is_finite() {
            return Err(PotentialError::InversionFailure(target));
        }
    }
    let tol = 1e-14 * target.abs().max(f64::MIN_POSITIVE);
    let mut x = 0.5 * (a + b);
    for _ in 0..400 {
        let (fx, dfx) = f(x);
        let r = fx - target;
        if r.abs() <= tol {
            return Ok(x);
        }
        if r < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let newton = x - r / dfx;
        x = if dfx > 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if b - a <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            return Ok(x);
        }
    }
    Ok(x)
}

/// Rotationally invariant part Φ of the potential.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    /// `Φ(s) = c·s^b`.
    Power { c: f64, b: f64 },
    /// `Φ(s) = m·coupling·Q⁻¹(s)`.
    Generalized { q: BlockPolynomial, coupling: f64 },
}

impl RadialProfile {
    pub fn power(c: f64, b: f64) -> Result<Self> {
        if !c.is_finite() || !b.is_finite() {
            return Err(PotentialError::NonFinite("power profile"));
        }
        if c <= 0.0 || b <= 0.0 {
            return Err(PotentialError::InvalidProfile(format!(
                "power profile needs C > 0 and b > 0, got C = {c}, b = {b}"
            )));
        }
        Ok(Self::Power { c, b })
    }

    pub fn generalized(alphas: Vec<f64>, coupling: f64) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(PotentialError::NonFinite("coupling"));
        }
        if coupling <= 0.0 {
            return Err(PotentialError::InvalidProfile(format!(
                "coupling must be positive, got {coupling}"
            )));
        }
        let profile = Self::Generalized { q: BlockPolynomial::new(alphas)?, coupling };
        profile.validate()?;
        Ok(profile)
    }

    /// Block count; 1 for the power family.
    pub fn m(&self) -> usize {
        match self {
            Self::Power { .. } => 1,
            Self::Generalized { q, .. } => q.m(),
        }
    }

    pub fn block_polynomial(&self) -> Option<&BlockPolynomial> {
        match self {
            Self::Power { .. } => None,
            Self::Generalized { q, .. } => Some(q),
        }
    }

    /// Whether `g(s)` blows up as `s → 0`.
    pub fn singular_at_origin(&self) -> bool {
        match self {
            Self::Power { b, .. } => *b < 1.0,
            Self::Generalized { q, .. } => q.repeated_min(),
        }
    }

    fn scale(&self) -> f64 {
        match self {
            Self::Power { c, .. } => *c,
            Self::Generalized { q, coupling } => q.m() as f64 * coupling,
        }
    }

    pub fn phi(&self, s: f64) -> f64 {
        match self {
            Self::Power { c, b } => c * s.powf(*b),
            Self::Generalized { q, .. } => self.scale() * q.inverse(s.max(0.0)).unwrap_or(f64::NAN),
        }
    }

    pub fn phi_prime(&self, s: f64) -> f64 {
        match self {
            Self::Power { c, b } => c * b * s.powf(b - 1.0),
            Self::Generalized { q, .. } => {
                let u = q.inverse_u(s.max(1e-300)).unwrap_or(f64::NAN);
                self.scale() / q.prime_u(u)
            }
        }
    }

    /// `I(s) = sΦ′(s) = π∫₀ˢ g`.
    pub fn moment(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Power { c, b } => c * b * s.powf(*b),
            Self::Generalized { q, .. } => {
                let u = q.inverse_u(s).unwrap_or(f64::NAN);
                self.scale() * q.eval_u(u) / q.prime_u(u)
            }
        }
    }

    /// `s ≥ 0` with `I(s) = y`.
    pub fn moment_inverse(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(PotentialError::NonFinite("moment_inverse"));
        }
        if y < 0.0 {
            return Err(PotentialError::OutOfDomain(y));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        match self {
            Self::Power { c, b } => Ok((y / (c * b)).powf(1.0 / b)),
            Self::Generalized { q, .. } => {
                // I = scale·Q/Q′ is increasing in x with derivative
                // scale·(Q′² − QQ″)/Q′², so invert in x and map back through Q.
                let scale = self.scale();
                let u = invert_increasing(
                    |u| {
                        let (v, d1, d2) = (q.eval_u(u), q.prime_u(u), q.second_u(u));
                        (scale * v / d1, scale * (d1 * d1 - v * d2) / (d1 * d1))
                    },
                    y,
                    0.0,
                )?;
                Ok(q.eval_u(u))
            }
        }
    }

    /// `g(s) = π⁻¹(sΦ′(s))′`.
    pub fn density(&self, s: f64) -> Result<f64> {
        if !s.is_finite() {
            return Err(PotentialError::NonFinite("density"));
        }
        if s < 0.0 {
            return Err(PotentialError::OutOfDomain(s));
        }
        let g = match self {
            Self::Power { c, b } => c * b * b * s.powf(b - 1.0) / PI,
            Self::Generalized { q, .. } => {
                if s == 0.0 && q.repeated_min() {
                    f64::INFINITY
                } else {
                    let u = q.inverse_u(s)?;
                    let (v, d1, d2) = (q.eval_u(u), q.prime_u(u), q.second_u(u));
                    self.scale() * (d1 * d1 - v * d2) / (PI * d1 * d1 * d1)
                }
            }
        };
        if g.is_nan() || g <= 0.0 {
            return Err(PotentialError::NonPositiveDensity { s, g });
        }
        Ok(g)
    }

    /// Radius² of the unit-mass disk: `I⁻¹(1)`.
    pub fn unit_disk_s(&self) -> f64 {
        self.moment_inverse(1.0).expect("valid profile inverts I at 1")
    }

    /// Checks `g > 0` on 256 log-spaced points in `[1e-8, 4·I⁻¹(1)]`
    /// and `I(s) → 0` as `s → 0`.
    pub fn validate(&self) -> Result<()> {
        let top = 4.0 * self.moment_inverse(1.0)?;
        let (lo, hi) = (1e-8_f64.ln(), top.max(2e-8).ln());
        for k in 0..256 {
            let s = (lo + (hi - lo) * k as f64 / 255.0).exp();
            self.density(s)?;
        }
        let near_zero = self.moment(1e-12);
        if !(near_zero.abs() < 1e-3) {
            return Err(PotentialError::InvalidProfile(format!(
                "I(s) does not vanish at 0 (I(1e-12) = {near_zero})"
            )));
        }
        Ok(())
    }
}

/// `W(z) = Φ(|z|²) − 2·Re P(z)` on the disk of radius `domain_radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub radial: RadialProfile,
    /// `p₁..p_d` of `P(z) = Σ p_k z^k`; trailing zeros trimmed.
    poly: Vec<Complex64>,
    pub domain_radius: f64,
}

impl Potential {
    pub fn new(radial: RadialProfile, mut poly: Vec<Complex64>, domain_radius: f64) -> Result<Self> {
        if poly.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(PotentialError::NonFinite("polynomial coefficients"));
        }
        if !(domain_radius.is_finite() && domain_radius > 0.0) {
            return Err(PotentialError::InvalidProfile(format!(
                "domain radius must be positive, got {domain_radius}"
            )));
        }
        while poly.last().is_some_and(|p| p.norm() == 0.0) {
            poly.pop();
        }
        Ok(Self { radial, poly, domain_radius })
    }

    /// Potential with the default domain radius `2·√(I⁻¹(1))`.
    pub fn with_default_domain(radial: RadialProfile, poly: Vec<Complex64>) -> Result<Self> {
        let r = 2.0 * radial.moment_inverse(1.0)?.sqrt();
        Self::new(radial, poly, r)
    }

    pub fn poly(&self) -> &[Complex64] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len()
    }

    /// Same potential with `P` scaled by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            radial: self.radial.clone(),
            poly: self.poly.iter().map(|p| p * t).collect(),
            domain_radius: self.domain_radius,
        }
    }

    pub fn p(&self, z: Complex64) -> Complex64 {
        self.poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, p| (acc + p) * z)
    }

    /// `P′(z) = Σ k·p_k z^{k−1}`.
    pub fn p_prime(&self, z: Complex64) -> Complex64 {
        self.poly
            .iter()
            .enumerate()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, p)| acc * z + p * (k as f64 + 1.0))
    }

    pub fn w(&self, z: Complex64) -> f64 {
        self.radial.phi(z.norm_sqr()) - 2.0 * self.p(z).re
    }

    pub fn eval_w(&self, z: Complex64) -> Result<f64> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(PotentialError::NonFinite("eval_w"));
        }
        Ok(self.w(z))
    }
}
