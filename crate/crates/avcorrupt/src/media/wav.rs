//! WAV reading and writing.
//!
//! Reads PCM 16-bit integer or 32-bit float, mono or stereo; stereo is
//! downmixed to mono by channel mean. Writes 32-bit float mono so a
//! save/load round trip is bitwise exact.

use std::path::Path;

use super::{AudioBuffer, MediaError};

pub fn load_wav(path: &Path) -> Result<AudioBuffer, MediaError> {
    let reader = hound::WavReader::open(path).map_err(map_hound)?;
    let spec = reader.spec();
    if spec.channels == 0 || spec.channels > 2 {
        return Err(MediaError::UnsupportedFormat(format!(
            "{} channels (only mono or stereo)",
            spec.channels
        )));
    }
    let interleaved: Vec<f32> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => {
            let mut out = Vec::with_capacity(reader.len() as usize);
            for s in reader.into_samples::<i16>() {
                out.push(f32::from(s.map_err(map_hound)?) / 32768.0);
            }
            out
        }
        (hound::SampleFormat::Float, 32) => {
            let mut out = Vec::with_capacity(reader.len() as usize);
            for s in reader.into_samples::<f32>() {
                out.push(s.map_err(map_hound)?);
            }
            out
        }
        (fmt, bits) => {
            return Err(MediaError::UnsupportedFormat(format!(
                "{bits}-bit {fmt:?} (only 16-bit int or 32-bit float PCM)"
            )));
        }
    };
    if interleaved.is_empty() {
        return Err(MediaError::EmptyAudio);
    }
    let samples = if spec.channels == 2 {
        interleaved
            .chunks_exact(2)
            .map(|lr| (lr[0] + lr[1]) * 0.5)
            .collect()
    } else {
        interleaved
    };
    AudioBuffer::new(samples, spec.sample_rate)
}

/// Writes mono 32-bit float PCM.
pub fn save_wav(buf: &AudioBuffer, path: &Path) -> Result<(), MediaError> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: buf.sample_rate(),
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(map_hound)?;
    for &s in buf.samples() {
        writer.write_sample(s).map_err(map_hound)?;
    }
    writer.finalize().map_err(map_hound)
}

fn map_hound(err: hound::Error) -> MediaError {
    match err {
        hound::Error::IoError(e) => MediaError::Io(e),
        hound::Error::FormatError(msg) => MediaError::CorruptHeader(msg.to_string()),
        hound::Error::Unsupported => {
            MediaError::UnsupportedFormat("non-PCM or unsupported codec".into())
        }
        other => MediaError::CorruptHeader(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write_pcm16(path: &Path, rate: u32, channels: u16, samples: &[i16]) {
        let spec = hound::WavSpec {
            channels,
            sample_rate: rate,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(path, spec).unwrap();
        for &s in samples {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
    }

    #[test]
    fn pcm16_full_scale_mapping() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.wav");
        write_pcm16(&path, 16000, 1, &[0, 32767, -32768]);
        let buf = load_wav(&path).unwrap();
        assert_eq!(buf.samples()[0], 0.0);
        assert!((buf.samples()[1] - 32767.0 / 32768.0).abs() < 1e-9);
        assert_eq!(buf.samples()[2], -1.0);
    }

    #[test]
    fn stereo_downmix_is_channel_mean() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.wav");
        // L = full scale positive, R = 0.
        write_pcm16(&path, 16000, 2, &[32767, 0, -32768, 0]);
        let buf = load_wav(&path).unwrap();
        assert!((buf.samples()[0] - 0.5 * 32767.0 / 32768.0).abs() < 1e-7);
        assert!((buf.samples()[1] - (-0.5)).abs() < 1e-7);
    }

    #[test]
    fn sample_count_matches_header_oracle() {
        // Oracle: parse the RIFF header by hand and divide the data chunk
        // byte count by bytes-per-sample.
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.wav");
        let samples: Vec<i16> = (0..48_000).map(|i| (i % 255) as i16).collect();
        write_pcm16(&path, 16000, 1, &samples);

        let bytes = std::fs::read(&path).unwrap();
        let mut pos = 12; // RIFF + size + WAVE
        let mut data_len = None;
        while pos + 8 <= bytes.len() {
            let id = &bytes[pos..pos + 4];
            let len =
                u32::from_le_bytes([bytes[pos + 4], bytes[pos + 5], bytes[pos + 6], bytes[pos + 7]])
                    as usize;
            if id == b"data" {
                data_len = Some(len);
                break;
            }
            pos += 8 + len + (len & 1);
        }
        let expected = data_len.expect("data chunk") / 2;
        assert_eq!(expected, 48_000);

        let buf = load_wav(&path).unwrap();
        assert_eq!(buf.len(), expected);
    }

    #[test]
    fn float_round_trip_is_bitwise() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.wav");
        let samples: Vec<f32> = (0..1000).map(|i| ((i as f32) * 0.01).sin() * 1.3).collect();
        let buf = AudioBuffer::new(samples.clone(), 22050).unwrap();
        save_wav(&buf, &path).unwrap();
        let back = load_wav(&path).unwrap();
        assert_eq!(back.sample_rate(), 22050);
        assert_eq!(back.samples(), samples.as_slice());
    }

    #[test]
    fn truncated_header_is_corrupt() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.wav");
        std::fs::write(&path, b"RIFF\x10\x00\x00\x00WAVEjunk").unwrap();
        match load_wav(&path) {
            Err(MediaError::CorruptHeader(_)) | Err(MediaError::Io(_)) => {}
            other => panic!("expected corrupt header, got {other:?}"),
        }
    }

    #[test]
    fn unreadable_target_is_io_failure() {
        let buf = AudioBuffer::new(vec![0.1; 10], 16000).unwrap();
        let err = save_wav(&buf, Path::new("/nonexistent-dir/x.wav")).unwrap_err();
        assert!(matches!(err, MediaError::Io(_)));
    }
}
