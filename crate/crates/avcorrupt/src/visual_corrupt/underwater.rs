//! Underwater color shift: red attenuation, Gaussian softening, contrast
//! reduction, and a pale haze overlay. Deterministic — no randomness.

use crate::media::FrameSequence;

use super::raster::gaussian_blur_frame;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnderwaterParams {
    /// Red channel multiplier is `1 - red_attenuation`.
    pub red_attenuation: f32,
    /// Gaussian blur sigma, pixels; `0` skips the blur.
    pub blur_sigma: f32,
    /// Linear contrast factor about mid-gray.
    pub contrast: f32,
    /// Haze blend weight.
    pub haze: f32,
}

pub const HAZE_COLOR: [f32; 3] = [0.8, 0.9, 0.95];

pub fn underwater_frames(seq: &FrameSequence, params: UnderwaterParams) -> FrameSequence {
    seq.map(|_, frame| {
        let mut out = frame.clone();
        // Light absorption takes red first.
        for px in out.data_mut().chunks_exact_mut(3) {
            px[0] *= 1.0 - params.red_attenuation;
        }
        let mut out = gaussian_blur_frame(&out, params.blur_sigma);
        for px in out.data_mut().chunks_exact_mut(3) {
            for (v, haze) in px.iter_mut().zip(HAZE_COLOR) {
                let contrasted = 0.5 + (*v - 0.5) * params.contrast;
                *v = (1.0 - params.haze) * contrasted + params.haze * haze;
            }
        }
        out.clamp_unit();
        out
    })
    .expect("dimensions preserved")
}
