//! Dataset ingestion and co-occurring corruption: one (family, severity,
//! seed) cell drives both the audio and the visual branch of every clip,
//! with per-clip provenance records and byte-reproducible output trees.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audio_corrupt::{
    dct_compress, gen_noise, mix_at_snr, overlay_corrupt, silence_random, AudioCorruptError,
    MixReport, SnrSchedule,
};
use crate::catalog::{AudioBranch, CorruptionFamily};
use crate::hashing::{ContentHash, Hasher128};
use crate::media::{
    load_frames, load_wav, save_frames, save_wav, AvClip, MediaError, Severity,
};
use crate::pool::{PoolError, PoolManifest};
use crate::rng::RngStream;
use crate::visual_corrupt::{apply_visual, VisualError};

pub const DATASET_VERSION: u32 = 1;
pub const PROVENANCE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("dataset schema error: {0}")]
    Schema(String),
    #[error("duplicate clip_id '{0}' in dataset manifest")]
    DuplicateClipId(String),
    #[error("clip '{clip_id}' label {label} out of range (classes: {classes})")]
    LabelOutOfRange {
        clip_id: String,
        label: usize,
        classes: usize,
    },
    #[error(transparent)]
    Media(#[from] MediaError),
    #[error(transparent)]
    Audio(#[from] AudioCorruptError),
    #[error(transparent)]
    Visual(#[from] VisualError),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

/// The reproducibility key of one corruption cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorruptionSpec {
    pub family: CorruptionFamily,
    pub severity: Severity,
    pub master_seed: u64,
}

#[derive(Clone, Debug)]
pub struct DatasetEntry {
    pub clip_id: String,
    pub frames_dir: PathBuf,
    pub wav_path: PathBuf,
    pub labels: Vec<usize>,
}

/// Validated dataset manifest; media paths are resolved against the
/// manifest's directory.
#[derive(Clone, Debug)]
pub struct DatasetManifest {
    pub entries: Vec<DatasetEntry>,
    pub class_names: Vec<String>,
    pub multilabel: bool,
}

#[derive(Deserialize)]
struct DatasetFile {
    version: u32,
    class_names: Vec<String>,
    #[serde(default)]
    multilabel: bool,
    entries: Vec<DatasetEntryFile>,
}

#[derive(Deserialize)]
struct DatasetEntryFile {
    clip_id: String,
    frames_dir: String,
    wav_path: String,
    labels: Vec<usize>,
}

pub fn load_dataset_manifest(path: &Path) -> Result<DatasetManifest, PipelineError> {
    let text = std::fs::read_to_string(path)?;
    let parsed: DatasetFile =
        serde_json::from_str(&text).map_err(|e| PipelineError::Schema(e.to_string()))?;
    if parsed.version != DATASET_VERSION {
        return Err(PipelineError::Schema(format!(
            "unsupported dataset version {} (expected {DATASET_VERSION})",
            parsed.version
        )));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let mut seen = std::collections::BTreeSet::new();
    let mut entries = Vec::with_capacity(parsed.entries.len());
    for e in parsed.entries {
        if e.clip_id.is_empty() {
            return Err(PipelineError::Schema("empty clip_id".into()));
        }
        if !seen.insert(e.clip_id.clone()) {
            return Err(PipelineError::DuplicateClipId(e.clip_id));
        }
        for &label in &e.labels {
            if label >= parsed.class_names.len() {
                return Err(PipelineError::LabelOutOfRange {
                    clip_id: e.clip_id,
                    label,
                    classes: parsed.class_names.len(),
                });
            }
        }
        entries.push(DatasetEntry {
            clip_id: e.clip_id,
            frames_dir: base.join(e.frames_dir),
            wav_path: base.join(e.wav_path),
            labels: e.labels,
        });
    }
    Ok(DatasetManifest {
        entries,
        class_names: parsed.class_names,
        multilabel: parsed.multilabel,
    })
}

impl DatasetEntry {
    pub fn load_clip(&self) -> Result<AvClip, PipelineError> {
        Ok(AvClip {
            audio: load_wav(&self.wav_path)?,
            frames: load_frames(&self.frames_dir)?,
            clip_id: self.clip_id.clone(),
            labels: self.labels.clone(),
        })
    }
}

/// Everything needed to reproduce and audit one corrupted clip.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProvenanceRecord {
    pub version: u32,
    pub clip_id: String,
    pub family: String,
    pub severity: u8,
    pub master_seed: u64,
    /// Audio overlay asset, when the family mixes one in.
    pub audio_asset_id: Option<String>,
    /// Frost texture asset, when the visual branch selected one.
    pub texture_asset_id: Option<String>,
    /// SNR bookkeeping for additive and overlay audio branches.
    pub mix: Option<MixReport>,
    /// Digest of the corrupted audio samples (f32 content).
    pub audio_digest: String,
    /// Digest of the corrupted frames (8-bit content).
    pub frames_digest: String,
}

/// Applies the cell's corruption to both modalities of one clip.
///
/// Both branches run at the same (family, severity) under clip-scoped
/// streams; an error on either side aborts the clip with no partial result.
pub fn corrupt_clip(
    clip: &AvClip,
    spec: &CorruptionSpec,
    pool: &PoolManifest,
) -> Result<(AvClip, ProvenanceRecord), PipelineError> {
    let audio_rng = RngStream::derive(
        spec.master_seed,
        &clip.clip_id,
        spec.family.name(),
        spec.severity,
        "audio",
    );
    let visual_rng = RngStream::derive(
        spec.master_seed,
        &clip.clip_id,
        spec.family.name(),
        spec.severity,
        "visual",
    );

    let mut audio_asset_id = None;
    let mut mix_report = None;
    let audio = match spec.family.audio_branch() {
        AudioBranch::Additive(kind) => {
            let mut rng = audio_rng;
            let noise = gen_noise(kind, &clip.audio, &mut rng)?;
            let snr = SnrSchedule::default().snr_db(spec.severity);
            let (mixed, report) = mix_at_snr(&clip.audio, &noise, snr)?;
            mix_report = Some(report);
            mixed
        }
        AudioBranch::Compression => dct_compress(&clip.audio, spec.severity),
        AudioBranch::Overlay => {
            let outcome =
                overlay_corrupt(&clip.audio, spec.family, spec.severity, pool, &audio_rng)?;
            audio_asset_id = Some(outcome.asset_id);
            mix_report = Some(outcome.mix);
            outcome.audio
        }
        AudioBranch::Silence => {
            let mut rng = audio_rng;
            silence_random(&clip.audio, spec.severity, &mut rng).0
        }
    };

    let visual = apply_visual(&clip.frames, spec.family, spec.severity, pool, &visual_rng)?;

    let record = ProvenanceRecord {
        version: PROVENANCE_VERSION,
        clip_id: clip.clip_id.clone(),
        family: spec.family.name().to_string(),
        severity: spec.severity.level(),
        master_seed: spec.master_seed,
        audio_asset_id,
        texture_asset_id: visual.texture_asset_id,
        mix: mix_report,
        audio_digest: audio.content_hash().to_hex(),
        frames_digest: visual.frames.content_hash().to_hex(),
    };
    let corrupted = AvClip {
        audio,
        frames: visual.frames,
        clip_id: clip.clip_id.clone(),
        labels: clip.labels.clone(),
    };
    Ok((corrupted, record))
}

/// Outcome of one dataset run.
#[derive(Debug)]
pub struct DatasetSummary {
    pub clips_ok: usize,
    pub clips_failed: usize,
    pub failures: Vec<(String, String)>,
    pub provenance_path: PathBuf,
}

/// Corrupts every clip of the manifest under one (family, severity) cell.
///
/// Layout: `out_dir/<family>/<severity>/<clip_id>/{audio.wav, frames/*.png}`
/// plus `provenance.jsonl` beside the clip directories. Per-clip failures
/// are recorded, not fatal; the run is total. With `workers > 1` clips are
/// processed in parallel; outputs and provenance are byte-identical to a
/// single-threaded run because records are written in manifest order.
pub fn corrupt_dataset(
    manifest: &DatasetManifest,
    spec: &CorruptionSpec,
    pool: &PoolManifest,
    out_dir: &Path,
    workers: usize,
) -> Result<DatasetSummary, PipelineError> {
    let cell_dir = out_dir
        .join(spec.family.name())
        .join(spec.severity.level().to_string());
    std::fs::create_dir_all(&cell_dir)?;

    let workers = workers.max(1).min(manifest.entries.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<ProvenanceRecord, String>>>> =
        Mutex::new(vec![None; manifest.entries.len()]);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= manifest.entries.len() {
                    break;
                }
                let entry = &manifest.entries[index];
                let outcome = process_entry(entry, spec, pool, &cell_dir);
                results.lock().expect("no poisoned writers")[index] =
                    Some(outcome.map_err(|e| e.to_string()));
            });
        }
    });

    let results = results.into_inner().expect("all workers joined");
    let mut ok = 0;
    let mut failures = Vec::new();
    let provenance_path = cell_dir.join("provenance.jsonl");
    let mut provenance = String::new();
    for (entry, result) in manifest.entries.iter().zip(results) {
        match result.expect("every index visited") {
            Ok(record) => {
                ok += 1;
                provenance.push_str(&serde_json::to_string(&record).expect("serializable"));
                provenance.push('\n');
            }
            Err(reason) => failures.push((entry.clip_id.clone(), reason)),
        }
    }
    std::fs::write(&provenance_path, provenance)?;
    Ok(DatasetSummary {
        clips_ok: ok,
        clips_failed: failures.len(),
        failures,
        provenance_path,
    })
}

fn process_entry(
    entry: &DatasetEntry,
    spec: &CorruptionSpec,
    pool: &PoolManifest,
    cell_dir: &Path,
) -> Result<ProvenanceRecord, PipelineError> {
    let clip = entry.load_clip()?;
    let (corrupted, record) = corrupt_clip(&clip, spec, pool)?;
    let clip_dir = cell_dir.join(&entry.clip_id);
    std::fs::create_dir_all(&clip_dir)?;
    save_wav(&corrupted.audio, &clip_dir.join("audio.wav"))?;
    save_frames(&corrupted.frames, &clip_dir.join("frames"))?;
    Ok(record)
}

/// Recursive content digest of a directory tree: relative paths plus file
/// bytes, walked in sorted order.
pub fn tree_digest(root: &Path) -> std::io::Result<ContentHash> {
    fn walk(dir: &Path, root: &Path, hasher: &mut Hasher128) -> std::io::Result<()> {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.sort();
        for path in paths {
            if path.is_dir() {
                walk(&path, root, hasher)?;
            } else {
                let rel = path.strip_prefix(root).expect("under root");
                hasher.update_field(rel.to_string_lossy().as_bytes());
                hasher.update_field(&std::fs::read(&path)?);
            }
        }
        Ok(())
    }
    let mut hasher = Hasher128::new();
    walk(root, root, &mut hasher)?;
    Ok(hasher.finish())
}
