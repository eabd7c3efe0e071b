//! RGB frame containers. Pixels are stored as interleaved `f32` in `[0, 1]`
//! and quantized to 8-bit only when written to disk.

use super::MediaError;

/// One RGB frame, channels interleaved row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl Frame {
    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Result<Self, MediaError> {
        if data.len() != width * height * 3 {
            return Err(MediaError::BadFrameLength {
                got: data.len(),
                w: width,
                h: height,
            });
        }
        Ok(Frame {
            width,
            height,
            data,
        })
    }

    /// Frame filled with one RGB color.
    pub fn constant(width: usize, height: usize, rgb: [f32; 3]) -> Frame {
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Frame {
            width,
            height,
            data,
        }
    }

    pub fn from_rgb8(width: usize, height: usize, bytes: &[u8]) -> Result<Self, MediaError> {
        if bytes.len() != width * height * 3 {
            return Err(MediaError::BadFrameLength {
                got: bytes.len(),
                w: width,
                h: height,
            });
        }
        let data = bytes.iter().map(|&b| f32::from(b) / 255.0).collect();
        Ok(Frame {
            width,
            height,
            data,
        })
    }

    /// Quantizes to 8-bit, clamping to `[0, 1]` first.
    pub fn to_rgb8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [f32; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [f32; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i] = rgb[0];
        self.data[i + 1] = rgb[1];
        self.data[i + 2] = rgb[2];
    }

    /// Clamps every channel to `[0, 1]` in place.
    pub fn clamp_unit(&mut self) {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
    }

    /// Single luminance plane (Rec. 601 weights).
    pub fn luma(&self) -> Vec<f32> {
        self.data
            .chunks_exact(3)
            .map(|px| 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2])
            .collect()
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().map(|&v| f64::from(v)).sum::<f64>() / self.data.len() as f64
    }
}

/// Ordered list of equally sized RGB frames.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSequence {
    frames: Vec<Frame>,
}

impl FrameSequence {
    pub fn new(frames: Vec<Frame>) -> Result<Self, MediaError> {
        if frames.is_empty() {
            return Err(MediaError::NoFrames);
        }
        let (w, h) = (frames[0].width, frames[0].height);
        for (index, f) in frames.iter().enumerate() {
            if f.width != w || f.height != h {
                return Err(MediaError::MixedDimensions {
                    index,
                    want_w: w,
                    want_h: h,
                    found_w: f.width,
                    found_h: f.height,
                });
            }
        }
        Ok(FrameSequence { frames })
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frames_mut(&mut self) -> &mut [Frame] {
        &mut self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    /// Applies `op` to every frame, rebuilding the sequence. Dimension
    /// preservation is re-validated by construction.
    pub fn map<F>(&self, mut op: F) -> Result<FrameSequence, MediaError>
    where
        F: FnMut(usize, &Frame) -> Frame,
    {
        let frames = self
            .frames
            .iter()
            .enumerate()
            .map(|(i, f)| op(i, f))
            .collect();
        FrameSequence::new(frames)
    }

    /// Digest of the quantized 8-bit content, i.e. exactly what export writes.
    pub fn content_hash(&self) -> crate::hashing::ContentHash {
        let mut h = crate::hashing::Hasher128::new();
        h.update(&(self.width() as u64).to_le_bytes());
        h.update(&(self.height() as u64).to_le_bytes());
        for f in &self.frames {
            h.update(&f.to_rgb8());
        }
        h.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_dimensions_rejected() {
        let a = Frame::constant(8, 8, [0.0; 3]);
        let b = Frame::constant(4, 4, [0.0; 3]);
        match FrameSequence::new(vec![a, b]) {
            Err(MediaError::MixedDimensions { index: 1, .. }) => {}
            other => panic!("expected MixedDimensions, got {other:?}"),
        }
    }

    #[test]
    fn rgb8_round_trip_is_exact() {
        let bytes: Vec<u8> = (0..4 * 4 * 3).map(|i| (i * 7 % 256) as u8).collect();
        let f = Frame::from_rgb8(4, 4, &bytes).unwrap();
        assert_eq!(f.to_rgb8(), bytes);
    }

    #[test]
    fn clamp_unit_bounds_all_channels() {
        let mut f = Frame::new(1, 1, vec![-0.5, 0.5, 1.5]).unwrap();
        f.clamp_unit();
        assert_eq!(f.data(), &[0.0, 0.5, 1.0]);
    }
}
