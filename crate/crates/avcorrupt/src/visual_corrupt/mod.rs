//! Frame-side corruptions: digital noise, JPEG-style compression, weather
//! effects, underwater/smoke/crowd simulation, and interference rotation,
//! all dispatched per family and severity.

pub mod crowd;
pub mod jpeg;
pub mod noise;
pub mod rain;
pub mod raster;
pub mod rotate;
pub mod smoke;
pub mod underwater;
pub mod weather;

pub use crowd::{crowd_frames, CrowdParams};
pub use jpeg::{jpeg_like_compress, psnr};
pub use noise::digital_noise_frames;
pub use rain::{rain_frames, RainParams};
pub use rotate::{rotate_frame, rotate_frames, rotation_bound_deg};
pub use smoke::{smoke_frames, SmokeParams};
pub use underwater::{underwater_frames, UnderwaterParams};
pub use weather::{
    brightness_frames, frost_frames, snow_frames, spatter_frames, wind_frames,
    wind_frames_at_angle, FrostParams, SnowParams, SpatterParams,
};

use thiserror::Error;

use crate::catalog::{CorruptionFamily, NoiseKind};
use crate::media::{FrameSequence, MediaError, Severity};
use crate::pool::{select_asset, PoolError, PoolManifest};
use crate::rng::RngStream;

#[derive(Debug, Error)]
pub enum VisualError {
    #[error("frames are {width}x{height}; the block codec needs at least 8x8")]
    TooSmall { width: usize, height: usize },
    #[error("pool has no '{0}' image family (required for frost)")]
    MissingAssetFamily(String),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Media(#[from] MediaError),
}

/// Per-family, per-severity visual constants. The digital rows follow the
/// ImageNet-C reference tables; the remaining rows are this crate's
/// calibration, monotone in degradation.
#[derive(Clone, Debug)]
pub struct VisualParams {
    pub gaussian_sigma: [f32; 5],
    pub impulse_amount: [f32; 5],
    pub shot_photons: [f32; 5],
    pub speckle_sigma: [f32; 5],
    pub jpeg_quality: [u8; 5],
    pub snow: [SnowParams; 5],
    pub frost: [FrostParams; 5],
    pub spatter: [SpatterParams; 5],
    pub wind_radius: [usize; 5],
    pub brightness_delta: [f32; 5],
    pub rain: [RainParams; 5],
    pub underwater: [UnderwaterParams; 5],
    pub smoke: [SmokeParams; 5],
    pub crowd: [CrowdParams; 5],
    pub rotation_bound_deg: [f64; 5],
}

impl Default for VisualParams {
    fn default() -> Self {
        VisualParams {
            gaussian_sigma: [0.08, 0.12, 0.18, 0.26, 0.38],
            impulse_amount: [0.03, 0.06, 0.09, 0.17, 0.27],
            shot_photons: [60.0, 25.0, 12.0, 5.0, 3.0],
            speckle_sigma: [0.15, 0.20, 0.35, 0.45, 0.60],
            jpeg_quality: [25, 18, 15, 10, 7],
            snow: [
                SnowParams { coverage: 0.008, blur_radius: 4, intensity: 0.55 },
                SnowParams { coverage: 0.014, blur_radius: 6, intensity: 0.62 },
                SnowParams { coverage: 0.022, blur_radius: 8, intensity: 0.70 },
                SnowParams { coverage: 0.032, blur_radius: 10, intensity: 0.78 },
                SnowParams { coverage: 0.045, blur_radius: 12, intensity: 0.85 },
            ],
            frost: [
                FrostParams { keep: 1.00, texture: 0.20 },
                FrostParams { keep: 0.90, texture: 0.35 },
                FrostParams { keep: 0.80, texture: 0.50 },
                FrostParams { keep: 0.70, texture: 0.65 },
                FrostParams { keep: 0.60, texture: 0.80 },
            ],
            spatter: [
                SpatterParams { coverage: 0.03, blob_sigma: 3.0, opacity: 0.50 },
                SpatterParams { coverage: 0.06, blob_sigma: 3.0, opacity: 0.58 },
                SpatterParams { coverage: 0.10, blob_sigma: 3.0, opacity: 0.66 },
                SpatterParams { coverage: 0.15, blob_sigma: 3.0, opacity: 0.74 },
                SpatterParams { coverage: 0.21, blob_sigma: 3.0, opacity: 0.82 },
            ],
            wind_radius: [5, 7, 10, 13, 16],
            brightness_delta: [0.1, 0.2, 0.3, 0.4, 0.5],
            rain: [
                RainParams { zoom: 1.3, coverage: 0.006, blur_radius: 5, blend: 0.45 },
                RainParams { zoom: 1.4, coverage: 0.012, blur_radius: 7, blend: 0.55 },
                RainParams { zoom: 1.5, coverage: 0.020, blur_radius: 9, blend: 0.65 },
                RainParams { zoom: 1.6, coverage: 0.030, blur_radius: 11, blend: 0.72 },
                RainParams { zoom: 1.7, coverage: 0.045, blur_radius: 13, blend: 0.80 },
            ],
            underwater: [
                UnderwaterParams { red_attenuation: 0.12, blur_sigma: 0.6, contrast: 0.92, haze: 0.06 },
                UnderwaterParams { red_attenuation: 0.22, blur_sigma: 1.0, contrast: 0.84, haze: 0.12 },
                UnderwaterParams { red_attenuation: 0.32, blur_sigma: 1.5, contrast: 0.76, haze: 0.18 },
                UnderwaterParams { red_attenuation: 0.42, blur_sigma: 2.1, contrast: 0.68, haze: 0.25 },
                UnderwaterParams { red_attenuation: 0.52, blur_sigma: 2.8, contrast: 0.60, haze: 0.32 },
            ],
            smoke: [
                SmokeParams { blur_sigma: 6.0, strength: 0.20 },
                SmokeParams { blur_sigma: 8.0, strength: 0.30 },
                SmokeParams { blur_sigma: 10.0, strength: 0.40 },
                SmokeParams { blur_sigma: 12.0, strength: 0.50 },
                SmokeParams { blur_sigma: 14.0, strength: 0.60 },
            ],
            crowd: [
                CrowdParams { area_fraction: 0.05, opacity: 0.85 },
                CrowdParams { area_fraction: 0.10, opacity: 0.85 },
                CrowdParams { area_fraction: 0.17, opacity: 0.85 },
                CrowdParams { area_fraction: 0.25, opacity: 0.85 },
                CrowdParams { area_fraction: 0.35, opacity: 0.85 },
            ],
            rotation_bound_deg: [11.0, 17.0, 23.0, 29.0, 35.0],
        }
    }
}

impl VisualParams {
    /// Checks that every table degrades monotonically with severity.
    pub fn validate(&self) -> Result<(), String> {
        fn rising<T: PartialOrd + std::fmt::Debug>(name: &str, xs: &[T]) -> Result<(), String> {
            for w in xs.windows(2) {
                if w[1] < w[0] {
                    return Err(format!("{name} not non-decreasing: {xs:?}"));
                }
            }
            Ok(())
        }
        fn falling<T: PartialOrd + std::fmt::Debug>(name: &str, xs: &[T]) -> Result<(), String> {
            for w in xs.windows(2) {
                if w[1] > w[0] {
                    return Err(format!("{name} not non-increasing: {xs:?}"));
                }
            }
            Ok(())
        }
        rising("gaussian_sigma", &self.gaussian_sigma)?;
        rising("impulse_amount", &self.impulse_amount)?;
        falling("shot_photons", &self.shot_photons)?;
        rising("speckle_sigma", &self.speckle_sigma)?;
        falling("jpeg_quality", &self.jpeg_quality)?;
        rising("snow.coverage", &self.snow.map(|p| p.coverage))?;
        rising("snow.blur_radius", &self.snow.map(|p| p.blur_radius))?;
        rising("snow.intensity", &self.snow.map(|p| p.intensity))?;
        falling("frost.keep", &self.frost.map(|p| p.keep))?;
        rising("frost.texture", &self.frost.map(|p| p.texture))?;
        rising("spatter.coverage", &self.spatter.map(|p| p.coverage))?;
        rising("spatter.opacity", &self.spatter.map(|p| p.opacity))?;
        rising("wind_radius", &self.wind_radius)?;
        rising("brightness_delta", &self.brightness_delta)?;
        rising("rain.coverage", &self.rain.map(|p| p.coverage))?;
        rising("rain.blur_radius", &self.rain.map(|p| p.blur_radius))?;
        rising("rain.blend", &self.rain.map(|p| p.blend))?;
        rising("underwater.red", &self.underwater.map(|p| p.red_attenuation))?;
        rising("underwater.blur", &self.underwater.map(|p| p.blur_sigma))?;
        falling("underwater.contrast", &self.underwater.map(|p| p.contrast))?;
        rising("underwater.haze", &self.underwater.map(|p| p.haze))?;
        rising("smoke.strength", &self.smoke.map(|p| p.strength))?;
        rising("crowd.area", &self.crowd.map(|p| p.area_fraction))?;
        rising("rotation_bound", &self.rotation_bound_deg)?;
        Ok(())
    }
}

/// Result of the visual branch: the corrupted frames plus the frost texture
/// asset id when one was selected (for provenance).
#[derive(Clone, Debug)]
pub struct VisualOutcome {
    pub frames: FrameSequence,
    pub texture_asset_id: Option<String>,
}

/// Routes one family to its visual implementation at the given severity.
/// `jpeg_like_compress` and `underwater_frames` are deterministic and do not
/// touch the stream; everything else derives child streams from `rng`.
pub fn apply_visual(
    seq: &FrameSequence,
    family: CorruptionFamily,
    severity: Severity,
    pool: &PoolManifest,
    rng: &RngStream,
) -> Result<VisualOutcome, VisualError> {
    let params = VisualParams::default();
    let i = severity.index();
    let plain = |frames: FrameSequence| VisualOutcome {
        frames,
        texture_asset_id: None,
    };
    Ok(match family {
        CorruptionFamily::Gaussian => plain(digital_noise_frames(
            seq,
            NoiseKind::Gaussian,
            params.gaussian_sigma[i],
            rng,
        )),
        CorruptionFamily::Impulse => plain(digital_noise_frames(
            seq,
            NoiseKind::Impulse,
            params.impulse_amount[i],
            rng,
        )),
        CorruptionFamily::Shot => plain(digital_noise_frames(
            seq,
            NoiseKind::Shot,
            params.shot_photons[i],
            rng,
        )),
        CorruptionFamily::Speckle => plain(digital_noise_frames(
            seq,
            NoiseKind::Speckle,
            params.speckle_sigma[i],
            rng,
        )),
        CorruptionFamily::Compression => plain(jpeg_like_compress(seq, params.jpeg_quality[i])?),
        CorruptionFamily::Snow => plain(snow_frames(seq, params.snow[i], rng)),
        CorruptionFamily::Frost => {
            let key = CorruptionFamily::FROST_TEXTURE_KEY;
            if !pool.has_family(key) {
                return Err(VisualError::MissingAssetFamily(key.to_string()));
            }
            let asset = select_asset(pool, key, &mut rng.child("texture_select"))?;
            let texture = asset.load_image()?;
            VisualOutcome {
                frames: frost_frames(seq, &texture, params.frost[i], rng),
                texture_asset_id: Some(asset.asset_id.clone()),
            }
        }
        CorruptionFamily::Spatter => plain(spatter_frames(seq, params.spatter[i], rng)),
        CorruptionFamily::Wind => plain(wind_frames(seq, params.wind_radius[i], rng)),
        CorruptionFamily::Rain => plain(rain_frames(seq, params.rain[i], rng)),
        CorruptionFamily::Underwater => plain(underwater_frames(seq, params.underwater[i])),
        CorruptionFamily::Concert => plain(brightness_frames(seq, params.brightness_delta[i])),
        CorruptionFamily::Smoke => plain(smoke_frames(seq, params.smoke[i], rng)),
        CorruptionFamily::Crowd => plain(crowd_frames(seq, params.crowd[i], rng)),
        CorruptionFamily::Interference => {
            plain(rotate_frames(seq, params.rotation_bound_deg[i], rng).0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sev(l: u8) -> Severity {
        Severity::new(l).unwrap()
    }

    fn pool() -> (tempfile::TempDir, PoolManifest) {
        let dir = tempfile::tempdir().unwrap();
        let pool = crate::synth::builtin_pool(dir.path()).unwrap();
        (dir, pool)
    }

    fn fixture(seed: u64) -> FrameSequence {
        crate::synth::fixture_frames(48, 48, 2, seed)
    }

    fn clip_rng(family: CorruptionFamily, severity: Severity) -> RngStream {
        RngStream::derive(33, "clip-x", family.name(), severity, "visual")
    }

    #[test]
    fn default_params_validate() {
        VisualParams::default().validate().unwrap();
    }

    #[test]
    fn every_family_preserves_shape_and_range() {
        let (_dir, pool) = pool();
        let seq = fixture(0);
        for family in CorruptionFamily::ALL {
            for level in [1, 5] {
                let severity = sev(level);
                let out =
                    apply_visual(&seq, family, severity, &pool, &clip_rng(family, severity))
                        .unwrap_or_else(|e| panic!("{family}: {e}"));
                assert_eq!(out.frames.width(), 48, "{family}");
                assert_eq!(out.frames.height(), 48, "{family}");
                assert_eq!(out.frames.len(), 2, "{family}");
                for frame in out.frames.frames() {
                    for &v in frame.data() {
                        assert!((0.0..=1.0).contains(&v), "{family}: pixel {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_families_ignore_the_stream() {
        let (_dir, pool) = pool();
        let seq = fixture(1);
        for family in [CorruptionFamily::Compression, CorruptionFamily::Underwater] {
            let a = apply_visual(&seq, family, sev(3), &pool, &clip_rng(family, sev(3))).unwrap();
            let other = RngStream::derive(999, "other-clip", "other", sev(1), "other");
            let b = apply_visual(&seq, family, sev(3), &pool, &other).unwrap();
            assert_eq!(a.frames, b.frames, "{family} output depends on the rng");
        }
    }

    #[test]
    fn random_families_are_reproducible() {
        let (_dir, pool) = pool();
        let seq = fixture(2);
        for family in CorruptionFamily::ALL {
            let a = apply_visual(&seq, family, sev(4), &pool, &clip_rng(family, sev(4))).unwrap();
            let b = apply_visual(&seq, family, sev(4), &pool, &clip_rng(family, sev(4))).unwrap();
            assert_eq!(a.frames, b.frames, "{family} not reproducible");
            assert_eq!(a.texture_asset_id, b.texture_asset_id);
        }
    }

    #[test]
    fn frost_without_textures_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        // A pool with audio families only.
        let audio_only = {
            let sub = dir.path().join("audio_only");
            std::fs::create_dir_all(&sub).unwrap();
            let audio = crate::synth::fixture_audio(8000, 16_000, 0);
            crate::media::save_wav(&audio, &sub.join("a.wav")).unwrap();
            let manifest = serde_json::json!({
                "version": 1,
                "families": { "frost": [ { "id": "a", "kind": "audio", "path": "a.wav" } ] }
            });
            let path = sub.join("pool.json");
            std::fs::write(&path, manifest.to_string()).unwrap();
            crate::pool::load_manifest(&path).unwrap()
        };
        let seq = fixture(3);
        let err = apply_visual(
            &seq,
            CorruptionFamily::Frost,
            sev(2),
            &audio_only,
            &clip_rng(CorruptionFamily::Frost, sev(2)),
        )
        .unwrap_err();
        assert!(matches!(err, VisualError::MissingAssetFamily(_)));
    }

    #[test]
    fn frost_reports_the_selected_texture() {
        let (_dir, pool) = pool();
        let seq = fixture(4);
        let out = apply_visual(
            &seq,
            CorruptionFamily::Frost,
            sev(3),
            &pool,
            &clip_rng(CorruptionFamily::Frost, sev(3)),
        )
        .unwrap();
        assert!(out.texture_asset_id.unwrap().starts_with("frost-texture-"));
    }

    #[test]
    fn severity_monotonicity_spot_check() {
        // The full 15-family sweep lives in the acceptance suite; this
        // guards the two most composition-heavy families at module level.
        let (_dir, pool) = pool();
        let seq = fixture(5);
        for family in [CorruptionFamily::Rain, CorruptionFamily::Snow] {
            let mut previous = -1.0f64;
            for level in 1..=5u8 {
                let severity = sev(level);
                let out =
                    apply_visual(&seq, family, severity, &pool, &clip_rng(family, severity))
                        .unwrap();
                let mse = sequence_mse(&seq, &out.frames);
                assert!(
                    mse >= previous,
                    "{family} severity {level}: mse {mse} < {previous}"
                );
                previous = mse;
            }
        }
    }

    fn sequence_mse(a: &FrameSequence, b: &FrameSequence) -> f64 {
        let mut acc = 0.0;
        let mut count = 0usize;
        for (fa, fb) in a.frames().iter().zip(b.frames()) {
            for (&x, &y) in fa.data().iter().zip(fb.data()) {
                let d = f64::from(x) - f64::from(y);
                acc += d * d;
            }
            count += fa.data().len();
        }
        acc / count as f64
    }
}
