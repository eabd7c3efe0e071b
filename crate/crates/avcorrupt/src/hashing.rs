//! Stable content hashing and seed-key derivation.
//!
//! Everything reproducibility-related in this crate funnels through the two
//! functions here: provenance digests use [`Hasher128`], and RNG stream keys
//! are derived with [`derive_key`]. Both are plain arithmetic with fixed
//! constants, so results are identical across platforms and runs. These are
//! integrity digests, not cryptographic hashes.

/// 128-bit content digest, rendered as 32 hex characters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ContentHash(pub [u64; 2]);

impl ContentHash {
    pub fn to_hex(self) -> String {
        format!("{:016x}{:016x}", self.0[0], self.0[1])
    }
}

impl std::fmt::Display for ContentHash {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:016x}{:016x}", self.0[0], self.0[1])
    }
}

const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
// Second lane starts from a distinct basis so the two 64-bit states never
// collapse into one another.
const LANE2_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Streaming FNV-1a over two independently seeded lanes.
#[derive(Clone, Debug)]
pub struct Hasher128 {
    a: u64,
    b: u64,
}

impl Default for Hasher128 {
    fn default() -> Self {
        Self::new()
    }
}

impl Hasher128 {
    pub fn new() -> Self {
        Hasher128 {
            a: FNV_OFFSET,
            b: FNV_OFFSET ^ LANE2_OFFSET,
        }
    }

    pub fn update(&mut self, bytes: &[u8]) {
        let mut a = self.a;
        let mut b = self.b;
        for &byte in bytes {
            a = (a ^ u64::from(byte)).wrapping_mul(FNV_PRIME);
            b = (b ^ u64::from(byte.rotate_left(3))).wrapping_mul(FNV_PRIME);
        }
        self.a = a;
        self.b = b;
    }

    /// Absorbs a length-prefixed field, so `("ab","c")` and `("a","bc")`
    /// hash differently.
    pub fn update_field(&mut self, bytes: &[u8]) {
        self.update(&(bytes.len() as u64).to_le_bytes());
        self.update(bytes);
    }

    pub fn finish(&self) -> ContentHash {
        // Final avalanche so short inputs still diffuse into both words.
        ContentHash([splitmix64(self.a), splitmix64(self.b ^ self.a)])
    }
}

/// Hashes a byte slice in one call.
pub fn hash_bytes(bytes: &[u8]) -> ContentHash {
    let mut h = Hasher128::new();
    h.update(bytes);
    h.finish()
}

/// SplitMix64 finalizer (Steele et al.), used for avalanching and for
/// expanding a digest into wider key material.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a 32-byte RNG key from an ordered list of fields.
pub fn derive_key<'a>(fields: impl IntoIterator<Item = &'a [u8]>) -> [u8; 32] {
    let mut h = Hasher128::new();
    for field in fields {
        h.update_field(field);
    }
    let ContentHash([w0, w1]) = h.finish();
    let w2 = splitmix64(w0 ^ 0x5851_f42d_4c95_7f2d);
    let w3 = splitmix64(w1 ^ 0x1405_7b7e_f767_814f);
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&w0.to_le_bytes());
    key[8..16].copy_from_slice(&w1.to_le_bytes());
    key[16..24].copy_from_slice(&w2.to_le_bytes());
    key[24..32].copy_from_slice(&w3.to_le_bytes());
    key
}
