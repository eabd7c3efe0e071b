//! Seeded, splittable random streams.
//!
//! A stream is keyed by hashing its full derivation path (master seed,
//! clip id, corruption family, severity, stage tag) into a ChaCha key, so
//! the sequence a consumer sees depends only on that path — never on thread
//! scheduling, manifest order, or how much randomness a sibling stage drew.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::hashing::derive_key;
use crate::media::Severity;

#[derive(Clone, Debug)]
pub struct RngStream {
    key: [u8; 32],
    rng: ChaCha12Rng,
}

impl RngStream {
    /// Derives the stream for one (seed, clip, family, severity, stage) cell.
    pub fn derive(
        master_seed: u64,
        clip_id: &str,
        family: &str,
        severity: Severity,
        stage: &str,
    ) -> RngStream {
        Self::from_fields([
            b"avcorrupt.v1".as_slice(),
            &master_seed.to_le_bytes(),
            clip_id.as_bytes(),
            family.as_bytes(),
            &[severity.level()],
            stage.as_bytes(),
        ])
    }

    /// Derives a stream from arbitrary ordered fields.
    pub fn from_fields<'a>(fields: impl IntoIterator<Item = &'a [u8]>) -> RngStream {
        let key = derive_key(fields);
        RngStream {
            key,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Splits off an independent child stream. The child depends on this
    /// stream's key and the tag only, not on how much the parent has drawn.
    pub fn child(&self, tag: &str) -> RngStream {
        Self::from_fields([self.key.as_slice(), tag.as_bytes()])
    }

    /// Child stream indexed by an integer (per-frame sub-streams).
    pub fn child_indexed(&self, tag: &str, index: usize) -> RngStream {
        Self::from_fields([
            self.key.as_slice(),
            tag.as_bytes(),
            &(index as u64).to_le_bytes(),
        ])
    }

    /// Uniform draw in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        // 53 high bits of a u64 → dyadic rational in [0, 1).
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw strictly inside `(0, 1)`.
    pub fn unit_open(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw strictly inside `(-bound, bound)`.
    pub fn symmetric_open(&mut self, bound: f64) -> f64 {
        bound * (2.0 * self.unit_open() - 1.0)
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        // Rejection sampling for unbiased selection.
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.rng.next_u64();
            if v < zone {
                return (v % n) as usize;
            }
        }
    }

    /// Standard normal draw (Box–Muller; two uniforms per pair of draws
    /// would be wasteful here, so the spare is simply discarded).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.unit_open();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest);
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
