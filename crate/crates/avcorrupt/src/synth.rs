//! Procedural fixture synthesis: natural-looking test frames, tonal test
//! audio, and the built-in overlay pool.
//!
//! The paper's overlay recordings are Freesound assets that cannot be
//! redistributed here, so the built-in pool synthesizes a sound-alike per
//! family (hiss, rumble, patter, sirens, babble, ...). Everything is seeded
//! through fixed derivation paths, so two machines writing the built-in
//! pool produce byte-identical trees.

use std::path::{Path, PathBuf};

use crate::media::{save_frames, save_wav, AudioBuffer, AvClip, Frame, FrameSequence};
use crate::pool::{load_manifest, PoolError, PoolManifest};
use crate::rng::RngStream;
use crate::visual_corrupt::raster::{gaussian_blur_plane, normal_field, normalize_unit};

pub const POOL_RATE: u32 = 16_000;

/// (family, asset count) for the built-in pool. The six environmental
/// families follow the published pool sizes; the human-related families
/// ship four synthetic assets each.
pub const BUILTIN_POOL: [(&str, usize); 9] = [
    ("snow", 15),
    ("frost", 5),
    ("spatter", 8),
    ("wind", 8),
    ("rain", 8),
    ("underwater", 31),
    ("concert", 4),
    ("smoke", 4),
    ("crowd", 4),
];

pub const FROST_TEXTURE_COUNT: usize = 6;

/// Writes the built-in pool (audio assets, frost textures, manifest) into
/// `dir` and returns the manifest path. Existing files are overwritten.
pub fn write_builtin_pool(dir: &Path) -> Result<PathBuf, PoolError> {
    std::fs::create_dir_all(dir)?;
    let mut families = serde_json::Map::new();

    for (family, count) in BUILTIN_POOL {
        let mut assets = Vec::with_capacity(count);
        for index in 0..count {
            let name = format!("{family}_{index:02}.wav");
            let audio = synth_overlay_audio(family, index);
            save_wav(&audio, &dir.join(&name)).map_err(|e| PoolError::AssetLoad {
                family: family.to_string(),
                id: name.clone(),
                source: e,
            })?;
            assets.push(serde_json::json!({
                "id": format!("{family}-{index:02}"),
                "kind": "audio",
                "path": name,
            }));
        }
        families.insert(family.to_string(), serde_json::Value::Array(assets));
    }

    let mut textures = Vec::with_capacity(FROST_TEXTURE_COUNT);
    for index in 0..FROST_TEXTURE_COUNT {
        let name = format!("frost_texture_{index:02}.png");
        let frame = frost_texture(384, 384, index as u64);
        let seq = FrameSequence::new(vec![frame]).expect("single frame");
        // save_frames writes %06d.png; textures need their own names.
        let img = image::RgbImage::from_raw(384, 384, seq.frames()[0].to_rgb8())
            .expect("buffer length");
        img.save(dir.join(&name))
            .map_err(|e| PoolError::AssetLoad {
                family: "frost_texture".into(),
                id: name.clone(),
                source: crate::media::MediaError::Image(e),
            })?;
        textures.push(serde_json::json!({
            "id": format!("frost-texture-{index:02}"),
            "kind": "image",
            "path": name,
        }));
    }
    families.insert(
        "frost_texture".to_string(),
        serde_json::Value::Array(textures),
    );

    let manifest = serde_json::json!({ "version": 1, "families": families });
    let path = dir.join("pool_manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap())?;
    Ok(path)
}

/// Writes the built-in pool and loads it back, validated.
pub fn builtin_pool(dir: &Path) -> Result<PoolManifest, PoolError> {
    let manifest = write_builtin_pool(dir)?;
    load_manifest(&manifest)
}

fn pool_rng(family: &str, index: usize, stage: &str) -> RngStream {
    RngStream::from_fields([
        b"builtin-pool".as_slice(),
        family.as_bytes(),
        &(index as u64).to_le_bytes(),
        stage.as_bytes(),
    ])
}

/// One synthetic overlay recording. Each family gets a distinct texture so
/// mixes are audibly (and statistically) different across families.
fn synth_overlay_audio(family: &str, index: usize) -> AudioBuffer {
    let mut rng = pool_rng(family, index, "audio");
    // Durations vary per asset to exercise both the window and tile paths.
    let seconds = 1.2 + 0.16 * (index % 6) as f64;
    let len = (seconds * f64::from(POOL_RATE)) as usize;
    let dt = 1.0 / f64::from(POOL_RATE);

    let samples: Vec<f32> = match family {
        // Soft hiss: low-passed white noise.
        "snow" => lowpass(noise(len, &mut rng), 0.25),
        // Crackle: sparse impulses over faint hiss.
        "frost" => {
            let mut s = lowpass(noise(len, &mut rng), 0.4);
            for v in s.iter_mut() {
                *v *= 0.2;
            }
            let pops = len / 400;
            for _ in 0..pops {
                let at = rng.below(len);
                let amp = (0.4 + 0.5 * rng.unit()) as f32 * if rng.unit() < 0.5 { -1.0 } else { 1.0 };
                for (k, v) in s[at..(at + 40).min(len)].iter_mut().enumerate() {
                    *v += amp * (-(k as f32) / 8.0).exp();
                }
            }
            s
        }
        // Droplet plops: decaying sine bursts at random instants.
        "spatter" | "rain" => {
            let mut s = vec![0.0f32; len];
            let density = if family == "rain" { len / 120 } else { len / 800 };
            for _ in 0..density {
                let at = rng.below(len);
                let freq = 400.0 + 1800.0 * rng.unit();
                let amp = (0.2 + 0.6 * rng.unit()) as f32;
                for (k, v) in s[at..(at + 240).min(len)].iter_mut().enumerate() {
                    let t = k as f64 * dt;
                    *v += amp
                        * ((std::f64::consts::TAU * freq * t).sin() * (-t * 60.0).exp()) as f32;
                }
            }
            if family == "rain" {
                let hiss = lowpass(noise(len, &mut rng), 0.6);
                for (v, h) in s.iter_mut().zip(hiss) {
                    *v = *v * 0.7 + h * 0.3;
                }
            }
            s
        }
        // Low rumble with slow amplitude modulation.
        "wind" | "underwater" => {
            let cutoff = if family == "wind" { 0.08 } else { 0.05 };
            let mod_hz = 0.5 + rng.unit();
            lowpass(noise(len, &mut rng), cutoff)
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    let t = i as f64 * dt;
                    let am = 0.6 + 0.4 * (std::f64::consts::TAU * mod_hz * t).sin();
                    (f64::from(v) * am * 3.0) as f32
                })
                .collect()
        }
        // Chord with a beat envelope.
        "concert" => {
            let root = 110.0 * (1.0 + 0.5 * rng.unit());
            let beat_hz = 1.8 + rng.unit();
            (0..len)
                .map(|i| {
                    let t = i as f64 * dt;
                    let env = 0.4 + 0.6 * ((std::f64::consts::TAU * beat_hz * t).sin().abs());
                    let chord = (std::f64::consts::TAU * root * t).sin()
                        + 0.7 * (std::f64::consts::TAU * root * 1.5 * t).sin()
                        + 0.5 * (std::f64::consts::TAU * root * 2.0 * t).sin();
                    (0.25 * env * chord) as f32
                })
                .collect()
        }
        // Two-tone siren sweep.
        "smoke" => {
            let lo = 600.0 + 200.0 * rng.unit();
            let hi = lo * 1.5;
            let sweep_hz = 0.8 + 0.8 * rng.unit();
            let mut phase = 0.0f64;
            (0..len)
                .map(|i| {
                    let t = i as f64 * dt;
                    let mix = 0.5 + 0.5 * (std::f64::consts::TAU * sweep_hz * t).sin();
                    let freq = lo * (1.0 - mix) + hi * mix;
                    phase += std::f64::consts::TAU * freq * dt;
                    (0.5 * phase.sin()) as f32
                })
                .collect()
        }
        // Babble: band-passed noise with independent slow modulators.
        "crowd" => {
            let voices: Vec<Vec<f32>> = (0..4)
                .map(|_| lowpass(noise(len, &mut rng), 0.3))
                .collect();
            let mods: Vec<f64> = (0..4).map(|_| 1.5 + 2.0 * rng.unit()).collect();
            (0..len)
                .map(|i| {
                    let t = i as f64 * dt;
                    let mut acc = 0.0f64;
                    for (voice, m) in voices.iter().zip(&mods) {
                        let am = 0.5 + 0.5 * (std::f64::consts::TAU * m * t).sin();
                        acc += f64::from(voice[i]) * am;
                    }
                    (acc * 0.5) as f32
                })
                .collect()
        }
        other => panic!("no synthesis recipe for family '{other}'"),
    };
    AudioBuffer::new(peak_normalize(samples, 0.7), POOL_RATE).expect("synthesized audio is valid")
}

fn noise(len: usize, rng: &mut RngStream) -> Vec<f32> {
    (0..len).map(|_| rng.standard_normal() as f32).collect()
}

/// One-pole low-pass; `alpha` in (0, 1], higher = brighter.
fn lowpass(mut samples: Vec<f32>, alpha: f32) -> Vec<f32> {
    let mut state = 0.0f32;
    for v in &mut samples {
        state += alpha * (*v - state);
        *v = state;
    }
    samples
}

fn peak_normalize(mut samples: Vec<f32>, target: f32) -> Vec<f32> {
    let peak = samples.iter().fold(0.0f32, |acc, &v| acc.max(v.abs()));
    if peak > 0.0 {
        let gain = target / peak;
        for v in &mut samples {
            *v *= gain;
        }
    }
    samples
}

/// Procedural crystalline frost texture: thresholded multi-scale noise over
/// a pale blue-gray base.
pub fn frost_texture(width: usize, height: usize, seed: u64) -> Frame {
    let mut rng = RngStream::from_fields([b"frost-texture".as_slice(), &seed.to_le_bytes()]);
    let coarse = {
        let mut f = gaussian_blur_plane(&normal_field(width, height, &mut rng), width, height, 9.0);
        normalize_unit(&mut f);
        f
    };
    let fine = {
        let mut f = gaussian_blur_plane(&normal_field(width, height, &mut rng), width, height, 1.6);
        normalize_unit(&mut f);
        f
    };
    let mut data = Vec::with_capacity(width * height * 3);
    for i in 0..width * height {
        let crystal = (0.55 * coarse[i] + 0.45 * fine[i]).powf(2.2);
        let sparkle = if fine[i] > 0.82 { 0.35 } else { 0.0 };
        let v = (0.25 + 0.75 * crystal + sparkle).min(1.0);
        data.push(v * 0.88); // R: slightly blue cast
        data.push(v * 0.94);
        data.push(v);
    }
    Frame::new(width, height, data).expect("buffer length matches")
}

/// Natural-looking test frame: sky gradient, value-noise texture band, and
/// a few hard-edged shapes. Statistics are busy enough for PSNR and blur
/// measurements to behave like photographs.
pub fn natural_test_frame(width: usize, height: usize, seed: u64) -> Frame {
    let mut rng = RngStream::from_fields([b"natural-frame".as_slice(), &seed.to_le_bytes()]);
    let texture = {
        let mut t =
            gaussian_blur_plane(&normal_field(width, height, &mut rng), width, height, 2.5);
        normalize_unit(&mut t);
        t
    };
    let horizon = 0.45 + 0.2 * rng.unit() as f32;
    let hue_shift = rng.unit() as f32 * 0.2;

    let mut data = Vec::with_capacity(width * height * 3);
    for y in 0..height {
        for x in 0..width {
            let fy = y as f32 / height as f32;
            let fx = x as f32 / width as f32;
            let t = texture[y * width + x];
            let (r, g, b) = if fy < horizon {
                // Sky: vertical gradient with mild texture.
                let base = 0.55 + 0.35 * (1.0 - fy / horizon);
                (
                    base * (0.55 + hue_shift) + 0.05 * t,
                    base * 0.75 + 0.05 * t,
                    base.min(1.0),
                )
            } else {
                // Ground: textured, warmer.
                let base = 0.25 + 0.5 * t;
                (
                    base * (0.9 - hue_shift),
                    base * 0.75,
                    base * (0.45 + 0.2 * fx),
                )
            };
            data.extend_from_slice(&[r.clamp(0.0, 1.0), g.clamp(0.0, 1.0), b.clamp(0.0, 1.0)]);
        }
    }
    let mut frame = Frame::new(width, height, data).expect("buffer length matches");

    // A few rectangles and a disk for hard edges.
    for _ in 0..3 {
        let rw = (width / 8).max(1) + rng.below((width / 6).max(1));
        let rh = (height / 8).max(1) + rng.below((height / 6).max(1));
        let rw = rw.min(width);
        let rh = rh.min(height);
        let x0 = rng.below(width - rw + 1);
        let y0 = rng.below(height - rh + 1);
        let color = [
            rng.unit() as f32,
            rng.unit() as f32,
            rng.unit() as f32,
        ];
        for y in y0..y0 + rh {
            for x in x0..x0 + rw {
                frame.set_pixel(x, y, color);
            }
        }
    }
    let cx = (width / 4 + rng.below((width / 2).max(1))) as isize;
    let cy = (height / 4 + rng.below((height / 2).max(1))) as isize;
    let radius = ((width.min(height) / 8) as isize).max(1);
    for y in (cy - radius).max(0)..(cy + radius).min(height as isize) {
        for x in (cx - radius).max(0)..(cx + radius).min(width as isize) {
            if (x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius {
                frame.set_pixel(x as usize, y as usize, [0.95, 0.9, 0.3]);
            }
        }
    }
    frame
}

/// Fixture frame sequence: per-frame variation comes from a drifting seed so
/// consecutive frames differ but share the scene layout.
pub fn fixture_frames(width: usize, height: usize, count: usize, seed: u64) -> FrameSequence {
    let base = natural_test_frame(width, height, seed);
    let frames = (0..count)
        .map(|i| {
            let mut rng = RngStream::from_fields([
                b"fixture-frame-jitter".as_slice(),
                &seed.to_le_bytes(),
                &(i as u64).to_le_bytes(),
            ]);
            let mut f = base.clone();
            // Slight global brightness drift plus sparse pixel twinkle.
            let drift = 0.02 * (rng.unit() as f32 - 0.5);
            for v in f.data_mut() {
                *v = (*v + drift).clamp(0.0, 1.0);
            }
            for _ in 0..width * height / 50 {
                let x = rng.below(width);
                let y = rng.below(height);
                let px = f.pixel(x, y);
                let tweak = 0.1 * (rng.unit() as f32 - 0.5);
                f.set_pixel(
                    x,
                    y,
                    [
                        (px[0] + tweak).clamp(0.0, 1.0),
                        (px[1] + tweak).clamp(0.0, 1.0),
                        (px[2] + tweak).clamp(0.0, 1.0),
                    ],
                );
            }
            f
        })
        .collect();
    FrameSequence::new(frames).expect("equal dimensions by construction")
}

/// Fixture audio: three detuned partials over mild noise, peak 0.6.
pub fn fixture_audio(len: usize, rate: u32, seed: u64) -> AudioBuffer {
    let mut rng = RngStream::from_fields([b"fixture-audio".as_slice(), &seed.to_le_bytes()]);
    let f0 = 180.0 + 140.0 * rng.unit();
    let dt = 1.0 / f64::from(rate);
    let samples: Vec<f32> = (0..len)
        .map(|i| {
            let t = i as f64 * dt;
            let tone = (std::f64::consts::TAU * f0 * t).sin()
                + 0.5 * (std::f64::consts::TAU * f0 * 2.01 * t).sin()
                + 0.3 * (std::f64::consts::TAU * f0 * 3.02 * t).sin();
            let hiss = rng.standard_normal() * 0.05;
            (0.3 * tone + hiss) as f32
        })
        .collect();
    AudioBuffer::new(peak_normalize(samples, 0.6), rate).expect("synthesized audio is valid")
}

/// A complete fixture clip with paired audio and frames.
pub fn fixture_clip(
    clip_id: &str,
    width: usize,
    height: usize,
    frame_count: usize,
    audio_len: usize,
    rate: u32,
    seed: u64,
) -> AvClip {
    AvClip {
        audio: fixture_audio(audio_len, rate, seed),
        frames: fixture_frames(width, height, frame_count, seed),
        clip_id: clip_id.to_string(),
        labels: vec![(seed % 4) as usize],
    }
}

/// Writes a small fixture dataset (clips on disk plus a dataset manifest)
/// and returns the manifest path.
pub fn write_fixture_dataset(
    dir: &Path,
    clip_count: usize,
    width: usize,
    height: usize,
    frame_count: usize,
    audio_len: usize,
) -> Result<PathBuf, crate::media::MediaError> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(clip_count);
    for i in 0..clip_count {
        let clip_id = format!("clip-{i:03}");
        let clip = fixture_clip(
            &clip_id,
            width,
            height,
            frame_count,
            audio_len,
            POOL_RATE,
            i as u64,
        );
        let frames_dir = format!("{clip_id}/frames");
        let wav_path = format!("{clip_id}/audio.wav");
        save_frames(&clip.frames, &dir.join(&frames_dir))?;
        save_wav(&clip.audio, &dir.join(&wav_path))?;
        entries.push(serde_json::json!({
            "clip_id": clip_id,
            "frames_dir": frames_dir,
            "wav_path": wav_path,
            "labels": clip.labels,
        }));
    }
    let manifest = serde_json::json!({
        "version": 1,
        "class_names": ["class_a", "class_b", "class_c", "class_d"],
        "multilabel": false,
        "entries": entries,
    });
    let path = dir.join("dataset.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap())?;
    Ok(path)
}
