//! Corrupts one synthetic clip with a single (family, severity) cell and
//! writes the result next to its provenance record.
//!
//! Run: cargo run --example corrupt_clip [family] [severity]

use avcorrupt::catalog::CorruptionFamily;
use avcorrupt::media::{save_frames, save_wav, Severity};
use avcorrupt::pipeline::{corrupt_clip, CorruptionSpec};
use avcorrupt::synth;

fn main() {
    let family: CorruptionFamily = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "rain".into())
        .parse()
        .expect("valid corruption family");
    let severity = Severity::new(
        std::env::args()
            .nth(2)
            .map(|s| s.parse().expect("integer severity"))
            .unwrap_or(3),
    )
    .expect("severity 1-5");

    let out = std::env::temp_dir().join("avcorrupt-examples/corrupt_clip");
    std::fs::create_dir_all(&out).unwrap();

    let pool = synth::builtin_pool(&out.join("pool")).expect("built-in pool");
    let clip = synth::fixture_clip("demo-clip", 224, 224, 8, 32_000, 16_000, 42);
    let spec = CorruptionSpec {
        family,
        severity,
        master_seed: 7,
    };

    let (corrupted, record) = corrupt_clip(&clip, &spec, &pool).expect("corruption");
    save_wav(&corrupted.audio, &out.join("audio.wav")).unwrap();
    save_frames(&corrupted.frames, &out.join("frames")).unwrap();
    std::fs::write(
        out.join("provenance.json"),
        serde_json::to_string_pretty(&record).unwrap(),
    )
    .unwrap();

    println!("applied {family} severity {severity} to both modalities");
    if let Some(mix) = &record.mix {
        println!(
            "  audio SNR: requested {:.1} dB, achieved {:.6} dB (beta {:.6})",
            mix.requested_snr_db, mix.achieved_snr_db, mix.beta
        );
    }
    if let Some(asset) = &record.audio_asset_id {
        println!("  overlay asset: {asset}");
    }
    println!("  audio digest:  {}", record.audio_digest);
    println!("  frames digest: {}", record.frames_digest);
    println!("output: {}", out.display());
}
