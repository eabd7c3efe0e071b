//! Audio-side corruptions: SNR-scaled additive noise, block-DCT bitrate
//! quantization, pool overlays, and random silencing.

use thiserror::Error;

use crate::catalog::{AudioBranch, CorruptionFamily, NoiseKind};
use crate::dct::Dct;
use crate::media::{mean_square, AudioBuffer, MediaError, Severity};
use crate::pool::{select_asset, prepare_overlay, PoolError, PoolManifest};
use crate::rng::RngStream;

use rand_distr::{Distribution, Poisson};

/// Waveform block length for the bitrate-quantization codec.
pub const DCT_BLOCK: usize = 1024;

/// Bitrate exponents per severity: the quantizer uses `2^c` levels.
pub const DCT_BIT_EXPONENTS: [u32; 5] = [24, 16, 8, 4, 2];

/// Fraction of samples silenced per severity.
pub const SILENCE_FRACTIONS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

/// Poisson intensity scale for shot noise: `lambda_i = SHOT_INTENSITY * |x_i|`
/// on the peak-normalized waveform. The constant only shapes the noise; its
/// level is absorbed by SNR scaling.
pub const SHOT_INTENSITY: f64 = 100.0;

/// Probability that an impulse-noise entry is nonzero (salt and pepper in
/// equal parts). Severity acts purely through the SNR.
pub const IMPULSE_DENSITY: f64 = 0.1;

#[derive(Debug, Error)]
pub enum AudioCorruptError {
    #[error("signal power is zero; SNR scaling undefined")]
    SilentSignal,
    #[error("noise power is zero; SNR scaling undefined")]
    SilentNoise,
    #[error("signal length {signal} != noise length {noise}")]
    LengthMismatch { signal: usize, noise: usize },
    #[error("empty signal")]
    EmptySignal,
    #[error("SNR schedule must be strictly decreasing in severity")]
    BadSchedule,
    #[error("family '{0}' has no audio overlay branch")]
    NotAnOverlayFamily(CorruptionFamily),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Media(#[from] MediaError),
}

/// Severity → target SNR in dB. The default runs 40 dB (mild) down to
/// 0 dB (extreme) in steps of 10.
#[derive(Clone, Debug, PartialEq)]
pub struct SnrSchedule {
    snr_db: [f64; 5],
}

impl Default for SnrSchedule {
    fn default() -> Self {
        SnrSchedule {
            snr_db: [40.0, 30.0, 20.0, 10.0, 0.0],
        }
    }
}

impl SnrSchedule {
    /// Schedules must be strictly decreasing: lower SNR = higher severity.
    pub fn new(snr_db: [f64; 5]) -> Result<Self, AudioCorruptError> {
        if snr_db.windows(2).any(|w| w[1] >= w[0]) {
            return Err(AudioCorruptError::BadSchedule);
        }
        Ok(SnrSchedule { snr_db })
    }

    pub fn snr_db(&self, severity: Severity) -> f64 {
        self.snr_db[severity.index()]
    }
}

/// Bookkeeping for one SNR mix: the scaling factor and the powers it was
/// computed from.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct MixReport {
    pub beta: f64,
    pub p_sig: f64,
    pub p_noise_raw: f64,
    pub p_noise_scaled: f64,
    pub requested_snr_db: f64,
    pub achieved_snr_db: f64,
}

/// Scales `noise` so the mix hits `snr_db` and adds it to the signal:
/// `out = x + beta * n` with `beta = sqrt(P_sig / (10^(SNR/10) * P_n))`.
///
/// The output is intentionally not clipped; clamping would change the noise
/// power and break the SNR contract. Integer export clamps at write time.
pub fn mix_at_snr(
    signal: &AudioBuffer,
    noise: &[f32],
    snr_db: f64,
) -> Result<(AudioBuffer, MixReport), AudioCorruptError> {
    if signal.len() != noise.len() {
        return Err(AudioCorruptError::LengthMismatch {
            signal: signal.len(),
            noise: noise.len(),
        });
    }
    let p_sig = signal.power();
    let p_noise_raw = mean_square(noise);
    if p_sig == 0.0 {
        return Err(AudioCorruptError::SilentSignal);
    }
    if p_noise_raw == 0.0 {
        return Err(AudioCorruptError::SilentNoise);
    }
    let beta = (p_sig / (10f64.powf(snr_db / 10.0) * p_noise_raw)).sqrt();

    let mut mixed = Vec::with_capacity(signal.len());
    let mut scaled_energy = 0.0f64;
    for (&x, &n) in signal.samples().iter().zip(noise) {
        let scaled = beta * f64::from(n);
        scaled_energy += scaled * scaled;
        mixed.push((f64::from(x) + scaled) as f32);
    }
    let p_noise_scaled = scaled_energy / signal.len() as f64;
    let report = MixReport {
        beta,
        p_sig,
        p_noise_raw,
        p_noise_scaled,
        requested_snr_db: snr_db,
        achieved_snr_db: 10.0 * (p_sig / p_noise_scaled).log10(),
    };
    Ok((AudioBuffer::new(mixed, signal.sample_rate())?, report))
}

/// Synthesizes a raw (unscaled) noise vector of the signal's length.
///
/// Shapes follow the digital-corruption definitions: gaussian draws a
/// standard normal; impulse draws a sparse ±1 salt-and-pepper vector from a
/// uniform mask; shot draws mean-removed Poisson counts with intensity
/// proportional to the peak-normalized waveform; speckle multiplies a
/// standard normal into the waveform so the additive component scales with
/// the local signal.
pub fn gen_noise(
    kind: NoiseKind,
    signal: &AudioBuffer,
    rng: &mut RngStream,
) -> Result<Vec<f32>, AudioCorruptError> {
    if signal.is_empty() {
        return Err(AudioCorruptError::EmptySignal);
    }
    let n = signal.len();
    let noise = match kind {
        NoiseKind::Gaussian => (0..n).map(|_| rng.standard_normal() as f32).collect(),
        NoiseKind::Impulse => (0..n)
            .map(|_| {
                let u = rng.unit();
                if u < IMPULSE_DENSITY / 2.0 {
                    -1.0
                } else if u < IMPULSE_DENSITY {
                    1.0
                } else {
                    0.0
                }
            })
            .collect(),
        NoiseKind::Shot => {
            let peak = signal
                .samples()
                .iter()
                .fold(0.0f32, |acc, &s| acc.max(s.abs()));
            if peak == 0.0 {
                return Err(AudioCorruptError::SilentSignal);
            }
            signal
                .samples()
                .iter()
                .map(|&s| {
                    let lambda = SHOT_INTENSITY * f64::from(s.abs() / peak);
                    if lambda <= 0.0 {
                        return 0.0f32;
                    }
                    let draw = Poisson::new(lambda)
                        .expect("lambda > 0")
                        .sample(rng);
                    (draw - lambda) as f32
                })
                .collect()
        }
        NoiseKind::Speckle => signal
            .samples()
            .iter()
            .map(|&s| (f64::from(s) * rng.standard_normal()) as f32)
            .collect(),
    };
    Ok(noise)
}

/// Number of quantization levels for a severity: `2^c`, `c in [24,16,8,4,2]`.
pub fn quantization_levels(severity: Severity) -> f64 {
    2f64.powi(DCT_BIT_EXPONENTS[severity.index()] as i32)
}

/// Bitrate-quantization codec: split into 1024-sample blocks (the tail block
/// keeps its own length), orthonormal DCT, per-block max normalization,
/// symmetric mid-tread rounding to `2^c` levels, inverse DCT, concatenate.
pub fn dct_compress(signal: &AudioBuffer, severity: Severity) -> AudioBuffer {
    quantize_blocks(signal, Some(quantization_levels(severity)))
}

/// The same block transform with quantization disabled — a pure
/// DCT/IDCT round trip.
pub fn dct_roundtrip(signal: &AudioBuffer) -> AudioBuffer {
    quantize_blocks(signal, None)
}

fn quantize_blocks(signal: &AudioBuffer, levels: Option<f64>) -> AudioBuffer {
    use std::sync::OnceLock;
    static FULL_BLOCK: OnceLock<Dct> = OnceLock::new();

    let mut out = Vec::with_capacity(signal.len());
    for block in signal.samples().chunks(DCT_BLOCK) {
        let dct_full;
        let dct: &Dct = if block.len() == DCT_BLOCK {
            FULL_BLOCK.get_or_init(|| Dct::new(DCT_BLOCK))
        } else {
            dct_full = Dct::new(block.len());
            &dct_full
        };
        let time: Vec<f64> = block.iter().map(|&s| f64::from(s)).collect();
        let mut freq = vec![0.0; block.len()];
        dct.forward(&time, &mut freq);

        let peak = freq.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if peak == 0.0 {
            // All-zero block passes through unchanged.
            out.extend(block.iter().copied());
            continue;
        }
        if let Some(levels) = levels {
            let half = levels / 2.0 - 0.5;
            for v in &mut freq {
                *v = (*v / peak * half).round() / half * peak;
            }
        }
        let mut back = vec![0.0; block.len()];
        dct.inverse(&freq, &mut back);
        out.extend(back.iter().map(|&v| v as f32));
    }
    AudioBuffer::new(out, signal.sample_rate()).expect("length and finiteness preserved")
}

/// Result of overlaying a pool asset at the scheduled SNR.
#[derive(Clone, Debug)]
pub struct OverlayOutcome {
    pub audio: AudioBuffer,
    pub mix: MixReport,
    pub asset_id: String,
}

/// Overlay corruption: select one asset for the family, fit it to the
/// signal (resample, window/tile), and mix at the default schedule's SNR.
/// Asset choice and window placement come from the `select` and `overlay`
/// child streams of `rng`.
pub fn overlay_corrupt(
    signal: &AudioBuffer,
    family: CorruptionFamily,
    severity: Severity,
    pool: &PoolManifest,
    rng: &RngStream,
) -> Result<OverlayOutcome, AudioCorruptError> {
    if family.audio_branch() != AudioBranch::Overlay {
        return Err(AudioCorruptError::NotAnOverlayFamily(family));
    }
    let asset = select_asset(pool, family.name(), &mut rng.child("select"))?;
    let overlay = prepare_overlay(
        asset,
        signal.sample_rate(),
        signal.len(),
        &mut rng.child("overlay"),
    )?;
    let snr = SnrSchedule::default().snr_db(severity);
    let (audio, mix) = mix_at_snr(signal, overlay.samples(), snr)?;
    Ok(OverlayOutcome {
        audio,
        mix,
        asset_id: asset.asset_id.clone(),
    })
}

/// Silenced regions of one clip: non-overlapping `(start, len)` segments.
#[derive(Clone, Debug, Default)]
pub struct SilenceMask {
    pub segments: Vec<(usize, usize)>,
}

impl SilenceMask {
    /// Total silenced sample count.
    pub fn silenced(&self) -> usize {
        self.segments.iter().map(|&(_, len)| len).sum()
    }

    pub fn covers(&self, index: usize) -> bool {
        self.segments
            .iter()
            .any(|&(start, len)| index >= start && index < start + len)
    }
}

/// Zeroes exactly `ceil(f(severity) * len)` samples, placed as one to five
/// non-overlapping contiguous segments whose count, lengths, and offsets all
/// come from `rng`.
pub fn silence_random(
    signal: &AudioBuffer,
    severity: Severity,
    rng: &mut RngStream,
) -> (AudioBuffer, SilenceMask) {
    let len = signal.len();
    assert!(len >= 10, "silencing needs at least 10 samples");
    let fraction = SILENCE_FRACTIONS[severity.index()];
    let target = (fraction * len as f64).ceil() as usize;

    let max_segments = target.min(5);
    let n_segments = 1 + rng.below(max_segments);

    // Split the silenced total into n positive parts: distinct cut points
    // in 1..target.
    let mut cuts = std::collections::BTreeSet::new();
    while cuts.len() < n_segments - 1 {
        cuts.insert(1 + rng.below(target - 1));
    }
    let mut seg_lens = Vec::with_capacity(n_segments);
    let mut prev = 0;
    for &c in &cuts {
        seg_lens.push(c - prev);
        prev = c;
    }
    seg_lens.push(target - prev);

    // Distribute the unsilenced samples into n+1 gaps (before/between/after)
    // by sorting n draws over 0..=free.
    let free = len - target;
    let mut marks: Vec<usize> = (0..n_segments).map(|_| rng.below(free + 1)).collect();
    marks.sort_unstable();
    let mut gaps = Vec::with_capacity(n_segments + 1);
    let mut last = 0;
    for &m in &marks {
        gaps.push(m - last);
        last = m;
    }
    gaps.push(free - last);

    let mut samples = signal.samples().to_vec();
    let mut mask = SilenceMask::default();
    let mut cursor = 0;
    for (i, &seg_len) in seg_lens.iter().enumerate() {
        cursor += gaps[i];
        for s in &mut samples[cursor..cursor + seg_len] {
            *s = 0.0;
        }
        mask.segments.push((cursor, seg_len));
        cursor += seg_len;
    }
    let out = AudioBuffer::new(samples, signal.sample_rate()).expect("length preserved");
    (out, mask)
}
