//! Single-particle Metropolis chains.

use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::checkpoint::{decode_checkpoint, encode_checkpoint, Checkpoint};
use super::{log_weight_with, GasError, Model, Result, SiteWeight};
use crate::potential::Potential;

const COINCIDENCE: f64 = 1e-14;
const TARGET_LOW: f64 = 0.30;
const TARGET_HIGH: f64 = 0.40;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainSpec {
    pub n: usize,
    pub sweeps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub model: Model,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(GasError::InvalidArgument("need at least one particle".into()));
        }
        if self.thin == 0 {
            return Err(GasError::InvalidArgument("thin must be positive".into()));
        }
        if self.sweeps <= self.burn_in {
            return Err(GasError::InvalidArgument(format!(
                "sweeps ({}) must exceed burn_in ({})",
                self.sweeps, self.burn_in
            )));
        }
        Ok(())
    }

    /// Stable hash of everything that determines a chain's trajectory.
    pub fn model_hash(&self, pot: &Potential, chain: u64) -> u64 {
        let key = format!(
            "{:?}|{:?}|{:?}|{:?}|n={}|burn={}|thin={}|seed={}|chain={}",
            pot.radial,
            pot.poly(),
            pot.domain_radius,
            self.model,
            self.n,
            self.burn_in,
            self.thin,
            self.seed,
            chain
        );
        let digest = Sha256::digest(key.as_bytes());
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub sweep: u64,
    pub z: Vec<Complex64>,
}

/// Chain state: positions, proposal width, running log weight and RNG.
#[derive(Debug, Clone)]
pub struct EigenConfiguration {
    pub z: Vec<Complex64>,
    pub sigma: f64,
    pub cached_logw: f64,
    pub sweep: u64,
    pub chain: u64,
    rng: ChaCha8Rng,
    site: SiteWeight,
    radius: f64,
    hash: u64,
    burn_in: u64,
    accepted: u64,
    proposed: u64,
}

impl EigenConfiguration {
    /// Fresh chain: uniform points in the equilibrium disk of the
    /// unperturbed profile, `σ = r₀/√N`.
    pub fn new(pot: &Potential, spec: &ChainSpec, chain: u64) -> Result<Self> {
        spec.validate()?;
        let site = SiteWeight::new(pot, spec.model, spec.n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(chain);
        let r0 = pot.radial.unit_disk_s().sqrt().min(pot.domain_radius);
        let z: Vec<Complex64> = (0..spec.n)
            .map(|_| {
                let r = r0 * rng.random::<f64>().sqrt();
                Complex64::from_polar(r, TAU * rng.random::<f64>())
            })
            .collect();
        let cached_logw = log_weight_with(&z, &site, pot.domain_radius);
        if !cached_logw.is_finite() {
            return Err(GasError::InvalidArgument("initial configuration has zero weight".into()));
        }
        Ok(Self {
            sigma: r0 / (spec.n as f64).sqrt(),
            z,
            cached_logw,
            sweep: 0,
            chain,
            rng,
            site,
            radius: pot.domain_radius,
            hash: spec.model_hash(pot, chain),
            burn_in: spec.burn_in,
            accepted: 0,
            proposed: 0,
        })
    }

    pub fn from_checkpoint(bytes: &[u8], pot: &Potential, spec: &ChainSpec, chain: u64) -> Result<Self> {
        spec.validate()?;
        let cp = decode_checkpoint(bytes)?;
        let hash = spec.model_hash(pot, chain);
        if cp.model_hash != hash {
            return Err(GasError::CheckpointCorrupt("model hash does not match the configuration".into()));
        }
        if cp.z.len() != spec.n {
            return Err(GasError::CheckpointCorrupt(format!("checkpoint has N = {}", cp.z.len())));
        }
        if cp.stream != chain {
            return Err(GasError::CheckpointCorrupt("checkpoint belongs to another chain".into()));
        }
        let mut rng = ChaCha8Rng::from_seed(cp.seed);
        rng.set_stream(cp.stream);
        rng.set_word_pos(cp.word_pos);
        Ok(Self {
            z: cp.z,
            sigma: cp.sigma,
            cached_logw: cp.cached_logw,
            sweep: cp.sweep,
            chain,
            rng,
            site: SiteWeight::new(pot, spec.model, spec.n)?,
            radius: pot.domain_radius,
            hash,
            burn_in: spec.burn_in,
            accepted: 0,
            proposed: 0,
        })
    }

    pub fn checkpoint(&self) -> Vec<u8> {
        encode_checkpoint(&Checkpoint {
            model_hash: self.hash,
            sweep: self.sweep,
            seed: self.rng.get_seed(),
            stream: self.rng.get_stream(),
            word_pos: self.rng.get_word_pos(),
            sigma: self.sigma,
            cached_logw: self.cached_logw,
            z: self.z.clone(),
        })
    }

    /// Overall acceptance rate since construction or resume.
    pub fn acceptance(&self) -> f64 {
        if self.proposed == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Log-weight change for moving particle `i` to `w`, `None` if rejected
    /// outright.
    pub fn delta(&self, i: usize, w: Complex64) -> Option<f64> {
        if !(w.norm() <= self.radius) {
            return None;
        }
        let old = self.z[i];
        let mut d = self.site.eval(w) - self.site.eval(old);
        let mut prod = 1.0f64;
        for (j, &zj) in self.z.iter().enumerate() {
            if j == i {
                continue;
            }
            let num = (w - zj).norm_sqr();
            if num < COINCIDENCE * COINCIDENCE {
                return None;
            }
            prod *= num / (old - zj).norm_sqr();
            if !(1e-150..=1e150).contains(&prod) {
                d += prod.ln();
                prod = 1.0;
            }
        }
        d += prod.ln();
        d.is_finite().then_some(d)
    }

    /// `N` single-particle updates, then (during burn-in) one σ adjustment.
    pub fn mh_sweep(&mut self) {
        let n = self.z.len();
        let mut accepted = 0;
        for i in 0..n {
            let g1: f64 = self.rng.sample(StandardNormal);
            let g2: f64 = self.rng.sample(StandardNormal);
            let w = self.z[i] + Complex64::new(g1, g2) * self.sigma;
            let Some(d) = self.delta(i, w) else { continue };
            if d >= 0.0 || self.rng.random::<f64>() < d.exp() {
                self.z[i] = w;
                self.cached_logw += d;
                accepted += 1;
            }
        }
        self.sweep += 1;
        self.accepted += accepted as u64;
        self.proposed += n as u64;
        if self.sweep <= self.burn_in {
            let rate = accepted as f64 / n as f64;
            if rate < TARGET_LOW {
                self.sigma *= 0.9;
            } else if rate > TARGET_HIGH {
                self.sigma *= 1.1;
            }
        }
    }

    /// Full recomputation of the log weight.
    pub fn recompute_logw(&self) -> f64 {
        log_weight_with(&self.z, &self.site, self.radius)
    }

    #[cfg(test)]
    pub(crate) fn set_sigma(&mut self, s: f64) {
        self.sigma = s;
    }
}

#[derive(Debug, Clone)]
pub struct ChainOutput {
    pub chain: u64,
    pub snapshots: Vec<Snapshot>,
    pub acceptance: f64,
    pub final_state: EigenConfiguration,
}

/// Advances `state` to `spec.sweeps`, passing every retained snapshot to
/// `sink`. With `checkpoint`, the state is written there every `every`
/// sweeps and at the end.
pub fn run_chain<F>(
    mut state: EigenConfiguration,
    spec: &ChainSpec,
    checkpoint: Option<(&Path, u64)>,
    mut sink: F,
) -> Result<EigenConfiguration>
where
    F: FnMut(Snapshot) -> Result<()>,
{
    spec.validate()?;
    while state.sweep < spec.sweeps {
        state.mh_sweep();
        let s = state.sweep;
        if s > spec.burn_in && (s - spec.burn_in) % spec.thin == 0 {
            sink(Snapshot { sweep: s, z: state.z.clone() })?;
        }
        if let Some((path, every)) = checkpoint {
            if (every > 0 && s % every == 0) || s == spec.sweeps {
                write_atomic(path, &state.checkpoint())?;
            }
        }
    }
    Ok(state)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs chains `0..chains` in parallel (at most `threads` at a time when
/// given), collecting snapshots in memory.
pub fn run_chains(pot: &Potential, spec: &ChainSpec, chains: u64, threads: Option<usize>) -> Result<Vec<ChainOutput>> {
    spec.validate()?;
    let job = |chain: u64| -> Result<ChainOutput> {
        let state = EigenConfiguration::new(pot, spec, chain)?;
        let mut snapshots = Vec::new();
        let final_state = run_chain(state, spec, None, |s| {
            snapshots.push(s);
            Ok(())
        })?;
        Ok(ChainOutput { chain, snapshots, acceptance: final_state.acceptance(), final_state })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| GasError::InvalidArgument(e.to_string()))?;
    pool.install(|| (0..chains).into_par_iter().map(job).collect())
}
