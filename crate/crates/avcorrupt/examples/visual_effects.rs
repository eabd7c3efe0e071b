//! Applies all fifteen visual corruption branches to one natural-looking
//! test frame at a chosen severity and writes a PNG per family.
//!
//! Run: cargo run --example visual_effects [severity]

use avcorrupt::catalog::CorruptionFamily;
use avcorrupt::media::{FrameSequence, Severity};
use avcorrupt::rng::RngStream;
use avcorrupt::synth;
use avcorrupt::visual_corrupt::apply_visual;

fn main() {
    let severity = Severity::new(
        std::env::args()
            .nth(1)
            .map(|s| s.parse().expect("integer severity"))
            .unwrap_or(3),
    )
    .expect("severity 1-5");

    let out = std::env::temp_dir().join("avcorrupt-examples/visual_effects");
    std::fs::create_dir_all(&out).unwrap();
    let pool = synth::builtin_pool(&out.join("pool")).expect("built-in pool");

    let frame = synth::natural_test_frame(256, 256, 12);
    let seq = FrameSequence::new(vec![frame.clone()]).unwrap();
    save_png(&frame, &out.join("clean.png"));

    for family in CorruptionFamily::ALL {
        let rng = RngStream::derive(3, "showcase", family.name(), severity, "visual");
        let result = apply_visual(&seq, family, severity, &pool, &rng).expect("visual branch");
        save_png(
            &result.frames.frames()[0],
            &out.join(format!("{}.png", family.name())),
        );
        println!("{:<14} written{}", family.name(), match result.texture_asset_id {
            Some(id) => format!(" (texture {id})"),
            None => String::new(),
        });
    }
    println!("output: {}", out.display());
}

fn save_png(frame: &avcorrupt::media::Frame, path: &std::path::Path) {
    image::RgbImage::from_raw(frame.width() as u32, frame.height() as u32, frame.to_rgb8())
        .expect("buffer size")
        .save(path)
        .expect("png write");
}
