//! Runs the full 75-cell corruption grid (15 families x 5 severities) over
//! a small synthetic dataset and prints the per-cell summary plus the
//! output-tree digest. Rerunning reproduces the digest byte for byte.
//!
//! Run: cargo run --release --example corruption_grid

use avcorrupt::catalog::CorruptionFamily;
use avcorrupt::media::Severity;
use avcorrupt::pipeline::{corrupt_dataset, load_dataset_manifest, tree_digest, CorruptionSpec};
use avcorrupt::synth;

fn main() {
    let root = std::env::temp_dir().join("avcorrupt-examples/corruption_grid");
    let _ = std::fs::remove_dir_all(&root);
    let data_dir = root.join("dataset");
    let out_dir = root.join("corrupted");

    let manifest_path =
        synth::write_fixture_dataset(&data_dir, 2, 64, 64, 4, 16_000).expect("fixture dataset");
    let manifest = load_dataset_manifest(&manifest_path).expect("manifest");
    let pool = synth::builtin_pool(&root.join("pool")).expect("built-in pool");

    let mut ok = 0;
    let mut failed = 0;
    for family in CorruptionFamily::ALL {
        for severity in Severity::ALL {
            let spec = CorruptionSpec {
                family,
                severity,
                master_seed: 2024,
            };
            let summary =
                corrupt_dataset(&manifest, &spec, &pool, &out_dir, 4).expect("cell run");
            ok += summary.clips_ok;
            failed += summary.clips_failed;
        }
    }
    println!("grid complete: {ok} clip-cells ok, {failed} failed");
    println!(
        "tree digest: {}",
        tree_digest(&out_dir).expect("digest").to_hex()
    );
    println!("output: {}", out_dir.display());
}
