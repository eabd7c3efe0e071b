//! Manifest-driven noise pools: the per-family sets of overlay recordings
//! (and frost textures) from which one asset is deterministically selected
//! per clip.

mod resample;

pub use resample::resample;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::media::{self, AudioBuffer, Frame, MediaError};
use crate::rng::RngStream;

pub const MANIFEST_VERSION: u32 = 1;

/// Default audio pool sizes for the six environmental families.
pub const ENVIRONMENTAL_POOL_SIZES: [(&str, usize); 6] = [
    ("snow", 15),
    ("frost", 5),
    ("spatter", 8),
    ("wind", 8),
    ("rain", 8),
    ("underwater", 31),
];

#[derive(Debug, Error)]
pub enum PoolError {
    #[error("manifest schema error: {0}")]
    Schema(String),
    #[error("family '{family}' asset '{id}': file not found: {path}")]
    MissingAsset {
        family: String,
        id: String,
        path: PathBuf,
    },
    #[error("family '{family}' asset '{id}' failed to load: {source}")]
    AssetLoad {
        family: String,
        id: String,
        source: MediaError,
    },
    #[error("family '{0}' declares no assets")]
    EmptyFamily(String),
    #[error("family '{0}' not present in the pool manifest")]
    UnknownFamily(String),
    #[error("duplicate asset id '{id}' in family '{family}'")]
    DuplicateAssetId { family: String, id: String },
    #[error("asset '{id}' is {found}, expected {expected}")]
    KindMismatch {
        id: String,
        expected: AssetKind,
        found: AssetKind,
    },
    #[error("decode failure for asset '{id}': {source}")]
    Decode { id: String, source: MediaError },
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssetKind {
    Audio,
    Image,
}

impl std::fmt::Display for AssetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AssetKind::Audio => "audio",
            AssetKind::Image => "image",
        })
    }
}

/// One overlay asset. `native_rate` and `duration_s` are filled in from the
/// file during manifest validation (audio only).
#[derive(Clone, Debug)]
pub struct NoiseAsset {
    pub asset_id: String,
    pub kind: AssetKind,
    pub path: PathBuf,
    pub native_rate: Option<u32>,
    pub duration_s: Option<f64>,
}

impl NoiseAsset {
    pub fn load_audio(&self) -> Result<AudioBuffer, PoolError> {
        if self.kind != AssetKind::Audio {
            return Err(PoolError::KindMismatch {
                id: self.asset_id.clone(),
                expected: AssetKind::Audio,
                found: self.kind,
            });
        }
        media::load_wav(&self.path).map_err(|source| PoolError::Decode {
            id: self.asset_id.clone(),
            source,
        })
    }

    pub fn load_image(&self) -> Result<Frame, PoolError> {
        if self.kind != AssetKind::Image {
            return Err(PoolError::KindMismatch {
                id: self.asset_id.clone(),
                expected: AssetKind::Image,
                found: self.kind,
            });
        }
        let img = image::open(&self.path)
            .map_err(|e| PoolError::Decode {
                id: self.asset_id.clone(),
                source: MediaError::Image(e),
            })?
            .into_rgb8();
        Frame::from_rgb8(img.width() as usize, img.height() as usize, img.as_raw()).map_err(
            |source| PoolError::Decode {
                id: self.asset_id.clone(),
                source,
            },
        )
    }
}

/// Validated pool: family name → ordered asset list.
#[derive(Clone, Debug)]
pub struct PoolManifest {
    families: BTreeMap<String, Vec<NoiseAsset>>,
}

#[derive(Serialize, Deserialize)]
struct ManifestFile {
    version: u32,
    families: BTreeMap<String, Vec<ManifestAsset>>,
}

#[derive(Serialize, Deserialize)]
struct ManifestAsset {
    id: String,
    kind: AssetKind,
    path: String,
}

/// Loads and eagerly validates a pool manifest. Every referenced file must
/// exist and decode; audio metadata is captured while doing so.
pub fn load_manifest(path: &Path) -> Result<PoolManifest, PoolError> {
    let text = std::fs::read_to_string(path)?;
    let parsed: ManifestFile =
        serde_json::from_str(&text).map_err(|e| PoolError::Schema(e.to_string()))?;
    if parsed.version != MANIFEST_VERSION {
        return Err(PoolError::Schema(format!(
            "unsupported manifest version {} (expected {MANIFEST_VERSION})",
            parsed.version
        )));
    }
    let base = path.parent().unwrap_or(Path::new("."));

    let mut families = BTreeMap::new();
    for (family, assets) in parsed.families {
        if assets.is_empty() {
            return Err(PoolError::EmptyFamily(family));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut resolved = Vec::with_capacity(assets.len());
        for asset in assets {
            if !seen.insert(asset.id.clone()) {
                return Err(PoolError::DuplicateAssetId {
                    family,
                    id: asset.id,
                });
            }
            let full = base.join(&asset.path);
            if !full.is_file() {
                return Err(PoolError::MissingAsset {
                    family,
                    id: asset.id,
                    path: full,
                });
            }
            let mut noise = NoiseAsset {
                asset_id: asset.id,
                kind: asset.kind,
                path: full,
                native_rate: None,
                duration_s: None,
            };
            match asset.kind {
                AssetKind::Audio => {
                    let buf = noise.load_audio().map_err(|e| match e {
                        PoolError::Decode { id, source } => PoolError::AssetLoad {
                            family: family.clone(),
                            id,
                            source,
                        },
                        other => other,
                    })?;
                    noise.native_rate = Some(buf.sample_rate());
                    noise.duration_s = Some(buf.duration_s());
                }
                AssetKind::Image => {
                    noise.load_image().map_err(|e| match e {
                        PoolError::Decode { id, source } => PoolError::AssetLoad {
                            family: family.clone(),
                            id,
                            source,
                        },
                        other => other,
                    })?;
                }
            }
            resolved.push(noise);
        }
        families.insert(family, resolved);
    }
    Ok(PoolManifest { families })
}

impl PoolManifest {
    pub fn families(&self) -> impl Iterator<Item = (&str, &[NoiseAsset])> {
        self.families.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn family(&self, name: &str) -> Result<&[NoiseAsset], PoolError> {
        self.families
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| PoolError::UnknownFamily(name.to_string()))
    }

    pub fn has_family(&self, name: &str) -> bool {
        self.families.contains_key(name)
    }
}

/// Uniform deterministic selection of one asset from a family's list,
/// driven solely by the supplied stream.
pub fn select_asset<'p>(
    pool: &'p PoolManifest,
    family: &str,
    rng: &mut RngStream,
) -> Result<&'p NoiseAsset, PoolError> {
    let assets = pool.family(family)?;
    Ok(&assets[rng.below(assets.len())])
}

/// Prepares an audio overlay: decode, resample to `target_rate`, then cut a
/// window of exactly `target_len` samples. Assets longer than the target
/// contribute a random contiguous window; shorter assets are tiled (looped)
/// before the window is cut.
pub fn prepare_overlay(
    asset: &NoiseAsset,
    target_rate: u32,
    target_len: usize,
    rng: &mut RngStream,
) -> Result<AudioBuffer, PoolError> {
    assert!(target_len > 0, "zero-length overlay");
    let decoded = asset.load_audio()?;
    let samples = if decoded.sample_rate() == target_rate {
        decoded.samples().to_vec()
    } else {
        resample(decoded.samples(), decoded.sample_rate(), target_rate)
    };

    let windowed = if samples.len() >= target_len {
        let start = rng.below(samples.len() - target_len + 1);
        samples[start..start + target_len].to_vec()
    } else {
        // Tile one extra period so the window start can fall anywhere in
        // the first period.
        let copies = target_len / samples.len() + 2;
        let mut tiled = Vec::with_capacity(copies * samples.len());
        for _ in 0..copies {
            tiled.extend_from_slice(&samples);
        }
        let start = rng.below(samples.len());
        tiled[start..start + target_len].to_vec()
    };
    AudioBuffer::new(windowed, target_rate).map_err(|source| PoolError::Decode {
        id: asset.asset_id.clone(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{save_wav, Severity};
    use tempfile::tempdir;

    fn write_tone(path: &Path, freq: f64, rate: u32, seconds: f64) {
        let n = (f64::from(rate) * seconds) as usize;
        let samples: Vec<f32> = (0..n)
            .map(|i| {
                (std::f64::consts::TAU * freq * i as f64 / f64::from(rate)).sin() as f32 * 0.5
            })
            .collect();
        save_wav(&AudioBuffer::new(samples, rate).unwrap(), path).unwrap();
    }

    fn manifest_with(dir: &Path, families: &[(&str, usize)]) -> PathBuf {
        let mut fam_json = serde_json::Map::new();
        for (family, n) in families {
            let mut assets = Vec::new();
            for i in 0..*n {
                let name = format!("{family}_{i:02}.wav");
                write_tone(&dir.join(&name), 200.0 + i as f64 * 10.0, 16000, 0.25);
                assets.push(serde_json::json!({
                    "id": format!("{family}-{i:02}"),
                    "kind": "audio",
                    "path": name,
                }));
            }
            fam_json.insert((*family).to_string(), serde_json::Value::Array(assets));
        }
        let manifest = serde_json::json!({ "version": 1, "families": fam_json });
        let path = dir.join("pool.json");
        std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
        path
    }

    fn rng(stage: &str) -> RngStream {
        RngStream::derive(99, "clip", "rain", Severity::new(2).unwrap(), stage)
    }

    #[test]
    fn missing_asset_is_reported() {
        let dir = tempdir().unwrap();
        let manifest = serde_json::json!({
            "version": 1,
            "families": { "rain": [ { "id": "r0", "kind": "audio", "path": "gone.wav" } ] }
        });
        let path = dir.path().join("pool.json");
        std::fs::write(&path, manifest.to_string()).unwrap();
        assert!(matches!(
            load_manifest(&path),
            Err(PoolError::MissingAsset { .. })
        ));
    }

    #[test]
    fn empty_family_is_rejected() {
        let dir = tempdir().unwrap();
        let manifest = serde_json::json!({ "version": 1, "families": { "rain": [] } });
        let path = dir.path().join("pool.json");
        std::fs::write(&path, manifest.to_string()).unwrap();
        match load_manifest(&path) {
            Err(PoolError::EmptyFamily(f)) => assert_eq!(f, "rain"),
            other => panic!("expected EmptyFamily, got {other:?}"),
        }
    }

    #[test]
    fn selection_is_uniform_over_31_assets() {
        let dir = tempdir().unwrap();
        let path = manifest_with(dir.path(), &[("underwater", 31)]);
        let pool = load_manifest(&path).unwrap();
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for draw in 0..31_000usize {
            let mut r = RngStream::from_fields([b"sel".as_slice(), &draw.to_le_bytes()]);
            let asset = select_asset(&pool, "underwater", &mut r).unwrap();
            *counts.entry(asset.asset_id.clone()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 31);
        // Chi-square, 30 dof, 99.9th percentile ≈ 59.7; also the spec's
        // coarse 1000 ± 150 envelope.
        let chi2: f64 = counts
            .values()
            .map(|&c| {
                let d = c as f64 - 1000.0;
                d * d / 1000.0
            })
            .sum();
        assert!(chi2 < 59.7, "chi2 = {chi2}");
        for &c in counts.values() {
            assert!((850..=1150).contains(&c), "count {c}");
        }
    }

    #[test]
    fn selection_is_deterministic_and_order_insensitive() {
        let dir = tempdir().unwrap();
        let path = manifest_with(dir.path(), &[("rain", 8), ("wind", 8)]);
        let pool = load_manifest(&path).unwrap();
        let first = select_asset(&pool, "rain", &mut rng("select"))
            .unwrap()
            .asset_id
            .clone();
        let again = select_asset(&pool, "rain", &mut rng("select"))
            .unwrap()
            .asset_id
            .clone();
        assert_eq!(first, again);

        // Same draw against a pool whose unrelated families differ.
        let dir2 = tempdir().unwrap();
        let path2 = manifest_with(dir2.path(), &[("rain", 8), ("snow", 3)]);
        let pool2 = load_manifest(&path2).unwrap();
        let cross = select_asset(&pool2, "rain", &mut rng("select"))
            .unwrap()
            .asset_id
            .clone();
        assert_eq!(first, cross);
    }

    #[test]
    fn singleton_family_always_selected() {
        let dir = tempdir().unwrap();
        let path = manifest_with(dir.path(), &[("crowd", 1)]);
        let pool = load_manifest(&path).unwrap();
        for seed in 0..20u64 {
            let mut r = RngStream::from_fields([b"s".as_slice(), &seed.to_le_bytes()]);
            assert_eq!(
                select_asset(&pool, "crowd", &mut r).unwrap().asset_id,
                "crowd-00"
            );
        }
    }

    #[test]
    fn unknown_family_is_an_error() {
        let dir = tempdir().unwrap();
        let path = manifest_with(dir.path(), &[("rain", 2)]);
        let pool = load_manifest(&path).unwrap();
        assert!(matches!(
            select_asset(&pool, "fog", &mut rng("select")),
            Err(PoolError::UnknownFamily(_))
        ));
    }

    #[test]
    fn overlay_window_without_resampling() {
        let dir = tempdir().unwrap();
        let path = manifest_with(dir.path(), &[("wind", 1)]);
        let pool = load_manifest(&path).unwrap();
        let asset = &pool.family("wind").unwrap()[0];
        let out = prepare_overlay(asset, 16000, 1000, &mut rng("overlay")).unwrap();
        assert_eq!(out.len(), 1000);
        assert_eq!(out.sample_rate(), 16000);
    }

    #[test]
    fn overlay_resamples_to_target_rate() {
        let dir = tempdir().unwrap();
        write_tone(&dir.path().join("hum.wav"), 440.0, 44_100, 2.0);
        let manifest = serde_json::json!({
            "version": 1,
            "families": { "concert": [ { "id": "hum", "kind": "audio", "path": "hum.wav" } ] }
        });
        let path = dir.path().join("pool.json");
        std::fs::write(&path, manifest.to_string()).unwrap();
        let pool = load_manifest(&path).unwrap();
        let asset = &pool.family("concert").unwrap()[0];
        assert_eq!(asset.native_rate, Some(44_100));

        let out = prepare_overlay(asset, 16_000, 24_000, &mut rng("overlay")).unwrap();
        assert_eq!(out.len(), 24_000);
        assert_eq!(out.sample_rate(), 16_000);
    }

    #[test]
    fn short_assets_are_tiled_to_length() {
        let dir = tempdir().unwrap();
        let path = manifest_with(dir.path(), &[("smoke", 1)]); // 0.25 s = 4000 samples
        let pool = load_manifest(&path).unwrap();
        let asset = &pool.family("smoke").unwrap()[0];
        let out = prepare_overlay(asset, 16000, 160_000, &mut rng("overlay")).unwrap();
        assert_eq!(out.len(), 160_000);
        // Tiling implies exact periodicity at the asset length.
        let period = 4000;
        for i in 0..period {
            assert_eq!(out.samples()[i], out.samples()[i + period]);
        }
    }
}
