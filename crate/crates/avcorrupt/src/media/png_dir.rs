//! Frame-directory I/O: `%06d.png` files, indices contiguous from zero.

use std::path::Path;

use image::RgbImage;

use super::{Frame, FrameSequence, MediaError};

pub fn load_frames(dir: &Path) -> Result<FrameSequence, MediaError> {
    let mut indexed: Vec<(usize, std::path::PathBuf)> = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some(stem) = name.strip_suffix(".png") else {
            continue;
        };
        if stem.len() == 6 && stem.bytes().all(|b| b.is_ascii_digit()) {
            indexed.push((stem.parse().unwrap(), path));
        }
    }
    if indexed.is_empty() {
        return Err(MediaError::NoFrames);
    }
    indexed.sort_by_key(|(i, _)| *i);
    for (expected, (found, _)) in indexed.iter().enumerate() {
        if *found != expected {
            return Err(MediaError::MissingIndex(expected));
        }
    }

    let mut frames = Vec::with_capacity(indexed.len());
    for (_, path) in &indexed {
        let img = image::open(path)?.into_rgb8();
        let (w, h) = (img.width() as usize, img.height() as usize);
        frames.push(Frame::from_rgb8(w, h, img.as_raw())?);
    }
    FrameSequence::new(frames)
}

/// Writes `000000.png`, `000001.png`, ... into `dir`, creating it if needed.
pub fn save_frames(seq: &FrameSequence, dir: &Path) -> Result<(), MediaError> {
    std::fs::create_dir_all(dir)?;
    for (i, frame) in seq.frames().iter().enumerate() {
        let img = RgbImage::from_raw(
            frame.width() as u32,
            frame.height() as u32,
            frame.to_rgb8(),
        )
        .expect("frame buffer length is validated at construction");
        img.save(dir.join(format!("{i:06}.png")))?;
    }
    Ok(())
}
