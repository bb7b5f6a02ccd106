//! Metropolis sampling of the eigenvalue gas
//! `exp(−N Σ W(zᵢ)) ∏_{i<j} |zᵢ − zⱼ|²`, optionally with the generalized
//! model's `∏ √Q′(xᵢ)` factor, and the estimators used to compare samples
//! with the predicted droplet.

mod chain;
mod checkpoint;
mod density;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::genmat::SurfacePoint;
use crate::potential::{BlockPolynomial, Potential, PotentialError, RadialProfile};

pub use chain::{run_chain, run_chains, ChainOutput, ChainSpec, EigenConfiguration, Snapshot};
pub use checkpoint::{decode_checkpoint, encode_checkpoint, Checkpoint, CHECKPOINT_VERSION};
pub use density::{estimate_density, ks_distance, radial_cdf, DensityGrid, GridSpec, RadialCdf};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GasError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no samples")]
    EmptyInput,
    #[error("checkpoint corrupt: {0}")]
    CheckpointCorrupt(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

impl From<std::io::Error> for GasError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GasError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Standard,
    /// Adds `½ Σ log Q′(Q⁻¹(|zᵢ|²))`; needs a generalized radial profile.
    Generalized,
}

/// Clamp for `u = x − x_min` when the minimum of `α` is repeated.
const U_FLOOR: f64 = 1e-12;

/// One-particle part of the log weight.
#[derive(Debug, Clone)]
pub(crate) struct SiteWeight {
    pot: Potential,
    n: f64,
    jacobian: Option<(BlockPolynomial, f64)>,
}

impl SiteWeight {
    pub(crate) fn new(pot: &Potential, model: Model, n: usize) -> Result<Self> {
        let jacobian = match (model, &pot.radial) {
            (Model::Standard, _) => None,
            (Model::Generalized, RadialProfile::Generalized { q, coupling }) => {
                Some((q.clone(), q.m() as f64 * coupling))
            }
            (Model::Generalized, _) => {
                return Err(GasError::InvalidArgument("generalized model needs a generalized profile".into()))
            }
        };
        Ok(Self { pot: pot.clone(), n: n as f64, jacobian })
    }

    pub(crate) fn eval(&self, z: Complex64) -> f64 {
        let s = z.norm_sqr();
        match &self.jacobian {
            None => -self.n * self.pot.w(z),
            Some((q, scale)) => {
                let Ok(u) = q.inverse_u(s) else { return f64::NEG_INFINITY };
                let phi = scale * (q.x_min() + u);
                let w = phi - 2.0 * self.pot.p(z).re;
                let u = if q.repeated_min() { u.max(U_FLOOR) } else { u };
                -self.n * w + 0.5 * q.prime_u(u).ln()
            }
        }
    }
}

/// `−N Σ W(zᵢ) + 2 Σ_{i<j} log|zᵢ − zⱼ|` plus, for the generalized model,
/// `½ Σ log Q′(Q⁻¹(|zᵢ|²))`. Returns `−∞` for coincident points or points
/// outside the domain disk.
pub fn log_weight(z: &[Complex64], pot: &Potential, model: Model) -> Result<f64> {
    let site = SiteWeight::new(pot, model, z.len())?;
    Ok(log_weight_with(z, &site, pot.domain_radius))
}

pub(crate) fn log_weight_with(z: &[Complex64], site: &SiteWeight, radius: f64) -> f64 {
    if z.iter().any(|w| !(w.norm() <= radius)) {
        return f64::NEG_INFINITY;
    }
    let mut acc: f64 = z.iter().map(|&w| site.eval(w)).sum();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm_sqr();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += d.ln();
        }
    }
    acc
}

/// Lifts an eigenvalue to the surface `|z|² = Q(x)` with uniformly random
/// phases summing to `arg z`.
pub fn surface_lift<R: Rng + ?Sized>(z: Complex64, q: &BlockPolynomial, rng: &mut R) -> Result<SurfacePoint> {
    let x = q.inverse(z.norm_sqr())?;
    let m = q.m();
    let mut phases: Vec<f64> = (0..m.saturating_sub(1)).map(|_| TAU * rng.random::<f64>()).collect();
    let rest: f64 = phases.iter().sum();
    phases.push((z.arg() - rest).rem_euclid(TAU));
    Ok(SurfacePoint { z, x, phases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn gaussian() -> Potential {
        Potential::with_default_domain(RadialProfile::power(1.0, 1.0).unwrap(), vec![]).unwrap()
    }

    #[test]
    fn log_weight_examples() {
        let pot = gaussian();
        assert!((log_weight(&[c(0.0, 0.0), c(1.0, 0.0)], &pot, Model::Standard).unwrap() + 2.0).abs() < 1e-15);
        let w = c(0.3, -0.4);
        assert!((log_weight(&[w], &pot, Model::Standard).unwrap() + pot.w(w)).abs() < 1e-15);
        assert_eq!(log_weight(&[w, w], &pot, Model::Standard).unwrap(), f64::NEG_INFINITY);
        assert_eq!(log_weight(&[c(5.0, 0.0)], &pot, Model::Standard).unwrap(), f64::NEG_INFINITY);
        assert!(log_weight(&[w], &pot, Model::Generalized).is_err());
    }

    #[test]
    fn generalized_jacobian_example() {
        let gen = RadialProfile::generalized(vec![0.0, 0.0], 1.0).unwrap();
        let pot = Potential::new(gen, vec![], 4.0).unwrap();
        let z = [c(1.0, 0.0), c(2.0, 0.0)];
        let std = log_weight(&z, &pot, Model::Standard).unwrap();
        let g = log_weight(&z, &pot, Model::Generalized).unwrap();
        assert!((g - std - 0.5 * (2f64.ln() + 4f64.ln())).abs() < 1e-12);
        // hand value of the standard part: Φ(s) = 2√s, N = 2
        assert!((std - (-2.0 * (2.0 + 4.0) + 1f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn single_block_reduces_to_standard() {
        let gen = RadialProfile::generalized(vec![0.0], 1.0).unwrap();
        let pot = Potential::new(gen, vec![c(0.1, 0.0)], 3.0).unwrap();
        let z = [c(0.2, 0.1), c(-0.5, 0.3), c(0.0, -0.7)];
        assert_eq!(
            log_weight(&z, &pot, Model::Standard).unwrap(),
            log_weight(&z, &pot, Model::Generalized).unwrap()
        );
    }

    #[test]
    fn repeated_minimum_is_clamped_at_origin() {
        let gen = RadialProfile::generalized(vec![0.0, 0.0], 1.0).unwrap();
        let pot = Potential::new(gen, vec![], 3.0).unwrap();
        let v = log_weight(&[c(0.0, 0.0)], &pot, Model::Generalized).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn surface_lift_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = BlockPolynomial::new(vec![0.0, 0.0]).unwrap();
        let p = surface_lift(c(2.0, 0.0), &q, &mut rng).unwrap();
        assert!((p.x - 2.0).abs() < 1e-14);
        p.validate(&[0.0, 0.0]).unwrap();

        let q = BlockPolynomial::new(vec![-1.0, 1.0]).unwrap();
        let p = surface_lift(c(3f64.sqrt(), 0.0), &q, &mut rng).unwrap();
        assert!((p.x - 2.0).abs() < 1e-13);
        p.validate(&[-1.0, 1.0]).unwrap();

        let p = surface_lift(c(0.0, 0.0), &q, &mut rng).unwrap();
        assert_eq!(p.x, 1.0);
    }

    proptest! {
        #[test]
        fn permutation_invariant(seed in any::<u64>(), n in 2usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pot = Potential::new(RadialProfile::power(0.7, 1.3).unwrap(), vec![c(0.1, 0.2)], 3.0).unwrap();
            let z: Vec<Complex64> = (0..n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
            let mut rev = z.clone();
            rev.reverse();
            let a = log_weight(&z, &pot, Model::Standard).unwrap();
            let b = log_weight(&rev, &pot, Model::Standard).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn lift_lands_on_surface(re in -2.0f64..2.0, im in -2.0f64..2.0, seed in any::<u64>()) {
            let alphas = vec![-0.5, 0.25, 1.0];
            let q = BlockPolynomial::new(alphas.clone()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = surface_lift(c(re, im), &q, &mut rng).unwrap();
            prop_assert!(p.validate(&alphas).is_ok());
        }
    }
}
