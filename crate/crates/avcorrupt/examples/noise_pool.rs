//! Writes the built-in noise pool to disk, validates it, and demonstrates
//! deterministic per-clip asset selection: the same clip always draws the
//! same asset, different clips spread over the pool.
//!
//! Run: cargo run --example noise_pool

use avcorrupt::media::Severity;
use avcorrupt::pool::select_asset;
use avcorrupt::rng::RngStream;
use avcorrupt::synth;

fn main() {
    let dir = std::env::temp_dir().join("avcorrupt-examples/noise_pool");
    let pool = synth::builtin_pool(&dir).expect("built-in pool");

    println!("pool written to {}", dir.display());
    for (family, assets) in pool.families() {
        println!("  {family}: {} assets", assets.len());
    }

    let severity = Severity::new(4).unwrap();
    println!("\nper-clip selection for family 'underwater' (seed 9):");
    for clip in 0..6 {
        let clip_id = format!("clip-{clip:03}");
        let mut rng =
            RngStream::derive(9, &clip_id, "underwater", severity, "audio").child("select");
        let asset = select_asset(&pool, "underwater", &mut rng).expect("selection");
        // Drawing again for the same clip gives the same asset.
        let mut again =
            RngStream::derive(9, &clip_id, "underwater", severity, "audio").child("select");
        assert_eq!(
            select_asset(&pool, "underwater", &mut again).unwrap().asset_id,
            asset.asset_id
        );
        println!(
            "  {clip_id} -> {} ({:.2}s at {} Hz)",
            asset.asset_id,
            asset.duration_s.unwrap_or(0.0),
            asset.native_rate.unwrap_or(0)
        );
    }
}
