//! Core media containers: mono PCM audio, RGB frame sequences, and the
//! paired clip that every corruption acts on.

mod frames;
mod png_dir;
mod wav;

pub use frames::{Frame, FrameSequence};
pub use png_dir::{load_frames, save_frames};
pub use wav::{load_wav, save_wav};

use thiserror::Error;

/// Lowest sample rate accepted for an [`AudioBuffer`].
pub const MIN_SAMPLE_RATE: u32 = 8000;

#[derive(Debug, Error)]
pub enum MediaError {
    #[error("audio contains no samples")]
    EmptyAudio,
    #[error("sample rate {0} Hz is below the {MIN_SAMPLE_RATE} Hz minimum")]
    SampleRateTooLow(u32),
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),
    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt WAV header: {0}")]
    CorruptHeader(String),
    #[error("frame at index {index} is {found_w}x{found_h}, expected {want_w}x{want_h}")]
    MixedDimensions {
        index: usize,
        want_w: usize,
        want_h: usize,
        found_w: usize,
        found_h: usize,
    },
    #[error("frame index {0} is missing (gap in %06d.png numbering)")]
    MissingIndex(usize),
    #[error("directory contains no %06d.png frames")]
    NoFrames,
    #[error("frame data length {got} does not match {w}x{h}x3")]
    BadFrameLength { got: usize, w: usize, h: usize },
    #[error("severity level {0} outside 1..=5")]
    BadSeverity(u8),
    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Mono floating-point PCM audio. Samples are nominally in `[-1, 1]` but the
/// container does not clip: corruption stages may push values outside that
/// range, and clamping happens only at integer export.
#[derive(Clone, Debug, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f32>,
    sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Result<Self, MediaError> {
        if samples.is_empty() {
            return Err(MediaError::EmptyAudio);
        }
        if sample_rate < MIN_SAMPLE_RATE {
            return Err(MediaError::SampleRateTooLow(sample_rate));
        }
        if let Some(idx) = samples.iter().position(|s| !s.is_finite()) {
            return Err(MediaError::NonFiniteSample(idx));
        }
        Ok(AudioBuffer {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }

    /// Mean-square power, accumulated in f64.
    pub fn power(&self) -> f64 {
        mean_square(&self.samples)
    }

    /// Canonical content digest: little-endian f32 sample bytes plus the rate.
    pub fn content_hash(&self) -> crate::hashing::ContentHash {
        let mut h = crate::hashing::Hasher128::new();
        h.update(&self.sample_rate.to_le_bytes());
        for s in &self.samples {
            h.update(&s.to_le_bytes());
        }
        h.finish()
    }
}

/// Mean of squared values, accumulated in f64.
pub fn mean_square(samples: &[f32]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let sum: f64 = samples.iter().map(|&s| f64::from(s) * f64::from(s)).sum();
    sum / samples.len() as f64
}

/// Corruption severity level, 1 (mild) through 5 (extreme).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Severity(u8);

impl Severity {
    pub const ALL: [Severity; 5] = [
        Severity(1),
        Severity(2),
        Severity(3),
        Severity(4),
        Severity(5),
    ];

    pub fn new(level: u8) -> Result<Self, MediaError> {
        if (1..=5).contains(&level) {
            Ok(Severity(level))
        } else {
            Err(MediaError::BadSeverity(level))
        }
    }

    pub fn level(self) -> u8 {
        self.0
    }

    /// Zero-based index into the per-severity parameter tables.
    pub fn index(self) -> usize {
        usize::from(self.0) - 1
    }
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One paired audio/frames test clip.
#[derive(Clone, Debug)]
pub struct AvClip {
    pub audio: AudioBuffer,
    pub frames: FrameSequence,
    pub clip_id: String,
    pub labels: Vec<usize>,
}
