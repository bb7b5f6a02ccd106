//! Run configuration: a single JSON document with unknown keys rejected,
//! and its content fingerprint.

use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boundary::SolveOptions;
use crate::gas::{ChainSpec, Model};
use crate::potential::{Potential, RadialProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RadialConfig {
    Power {
        #[serde(rename = "C")]
        c: f64,
        b: f64,
    },
    Generalized {
        alphas: Vec<f64>,
        coupling: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub radial: RadialConfig,
    /// `[re, im]` of p₁, p₂, … in `P(z) = Σ p_k z^k`.
    #[serde(default)]
    pub poly: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_radius: Option<f64>,
}

impl PotentialConfig {
    pub fn build(&self) -> anyhow::Result<Potential> {
        let radial = match &self.radial {
            RadialConfig::Power { c, b } => RadialProfile::power(*c, *b)?,
            RadialConfig::Generalized { alphas, coupling } => RadialProfile::generalized(alphas.clone(), *coupling)?,
        };
        let poly = self.poly.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(match self.domain_radius {
            Some(r) => Potential::new(radial, poly, r)?,
            None => Potential::with_default_domain(radial, poly)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub grid_size: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub continuation_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolveOptions::default();
        Self { grid_size: o.grid_size, tol: o.tol, max_iter: o.max_iter, continuation_steps: o.continuation_steps }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolveOptions {
        SolveOptions {
            grid_size: self.grid_size,
            tol: self.tol,
            max_iter: self.max_iter,
            continuation_steps: self.continuation_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub n: usize,
    pub sweeps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub chains: u64,
    pub model: Model,
    /// Sweeps between checkpoint writes; 0 writes only at the end.
    pub checkpoint_every: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            n: 64,
            sweeps: 20_000,
            burn_in: 5_000,
            thin: 100,
            seed: 0,
            chains: 4,
            model: Model::Standard,
            checkpoint_every: 0,
        }
    }
}

impl SamplerConfig {
    pub fn chain_spec(&self) -> ChainSpec {
        ChainSpec {
            n: self.n,
            sweeps: self.sweeps,
            burn_in: self.burn_in,
            thin: self.thin,
            seed: self.seed,
            model: self.model,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint_dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("invalid config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.potential.build()?;
        self.sampler.chain_spec().validate()?;
        if self.sampler.chains == 0 {
            bail!("sampler.chains must be positive");
        }
        if self.sampler.model == Model::Generalized && !matches!(self.potential.radial, RadialConfig::Generalized { .. }) {
            bail!("the generalized model needs a generalized radial profile");
        }
        Ok(())
    }

    /// First 16 hex digits of SHA-256 over the key-sorted compact JSON.
    pub fn fingerprint(&self) -> String {
        // serde_json::Value keeps object keys sorted
        let canonical = serde_json::to_value(self).expect("config serializes").to_string();
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
