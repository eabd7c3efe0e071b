//! Smoke haze: a blurred noise map, normalized and scaled, pulls every
//! channel toward a flat gray — the overlay itself carries no color.

use crate::media::FrameSequence;
use crate::rng::RngStream;

use super::raster::{gaussian_blur_plane, normal_field, normalize_unit};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmokeParams {
    /// Smoothing sigma of the noise map, pixels.
    pub blur_sigma: f32,
    /// Peak opacity of the smoke layer.
    pub strength: f32,
}

pub const SMOKE_GRAY: f32 = 0.7;

pub fn smoke_frames(seq: &FrameSequence, params: SmokeParams, rng: &RngStream) -> FrameSequence {
    let (w, h) = (seq.width(), seq.height());
    seq.map(|index, frame| {
        let mut field_rng = rng.child_indexed("frame", index);
        let mut field = gaussian_blur_plane(
            &normal_field(w, h, &mut field_rng),
            w,
            h,
            params.blur_sigma,
        );
        normalize_unit(&mut field);
        let mut out = frame.clone();
        for (i, px) in out.data_mut().chunks_exact_mut(3).enumerate() {
            let n = field[i] * params.strength;
            for v in px {
                *v = (1.0 - n) * *v + n * SMOKE_GRAY;
            }
        }
        out.clamp_unit();
        out
    })
    .expect("dimensions preserved")
}
