//! Deterministic co-occurring audio-visual corruption synthesis, robustness
//! metrics, and entropy-weighted test-time adaptation.

pub mod audio_corrupt;
pub mod av2c;
pub mod catalog;
pub mod cli;
pub mod dct;
pub mod hashing;
pub mod media;
pub mod metrics;
pub mod pipeline;
pub mod pool;
pub mod rng;
pub mod synth;
pub mod visual_corrupt;

pub use catalog::{CorruptionFamily, CorruptionGroup};
pub use media::{AudioBuffer, AvClip, Frame, FrameSequence, Severity};
pub use rng::RngStream;
