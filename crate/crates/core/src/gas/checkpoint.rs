//! Binary checkpoint format, little-endian:
//!
//! ```text
//! "NMGAS1" | version u16 | N u32 | model hash u64 | sweep u64
//! | rng seed [u8; 32] | stream u64 | word pos u128
//! | sigma f64 | cached log weight f64 | z (re, im) × N
//! | SHA-256 of everything above
//! ```

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::{GasError, Result};

pub const CHECKPOINT_VERSION: u16 = 1;
const MAGIC: &[u8; 6] = b"NMGAS1";
const HEADER: usize = 6 + 2 + 4 + 8 + 8 + 32 + 8 + 16 + 8 + 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub model_hash: u64,
    pub sweep: u64,
    pub seed: [u8; 32],
    pub stream: u64,
    pub word_pos: u128,
    pub sigma: f64,
    pub cached_logw: f64,
    pub z: Vec<Complex64>,
}

pub fn encode_checkpoint(cp: &Checkpoint) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 16 * cp.z.len() + 32);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(cp.z.len() as u32).to_le_bytes());
    out.extend_from_slice(&cp.model_hash.to_le_bytes());
    out.extend_from_slice(&cp.sweep.to_le_bytes());
    out.extend_from_slice(&cp.seed);
    out.extend_from_slice(&cp.stream.to_le_bytes());
    out.extend_from_slice(&cp.word_pos.to_le_bytes());
    out.extend_from_slice(&cp.sigma.to_le_bytes());
    out.extend_from_slice(&cp.cached_logw.to_le_bytes());
    for z in &cp.z {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const K: usize>(&mut self) -> [u8; K] {
        let out: [u8; K] = self.buf[self.pos..self.pos + K].try_into().expect("length checked up front");
        self.pos += K;
        out
    }
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<Checkpoint> {
    let corrupt = |m: &str| GasError::CheckpointCorrupt(m.to_string());
    if bytes.len() < HEADER + 32 {
        return Err(corrupt("truncated"));
    }
    let (body, sum) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != sum {
        return Err(corrupt("checksum mismatch"));
    }
    let mut r = Reader { buf: body, pos: 0 };
    if &r.take::<6>() != MAGIC {
        return Err(corrupt("bad magic"));
    }
    let version = u16::from_le_bytes(r.take());
    if version != CHECKPOINT_VERSION {
        return Err(corrupt(&format!("unsupported version {version}")));
    }
    let n = u32::from_le_bytes(r.take()) as usize;
    if body.len() != HEADER + 16 * n {
        return Err(corrupt("length does not match N"));
    }
    let model_hash = u64::from_le_bytes(r.take());
    let sweep = u64::from_le_bytes(r.take());
    let seed = r.take::<32>();
    let stream = u64::from_le_bytes(r.take());
    let word_pos = u128::from_le_bytes(r.take());
    let sigma = f64::from_le_bytes(r.take());
    let cached_logw = f64::from_le_bytes(r.take());
    let z = (0..n)
        .map(|_| Complex64::new(f64::from_le_bytes(r.take()), f64::from_le_bytes(r.take())))
        .collect();
    Ok(Checkpoint { model_hash, sweep, seed, stream, word_pos, sigma, cached_logw, z })
}
