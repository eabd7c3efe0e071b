//! Weather and stage-lighting effects: snow streaks, frost texture blends,
//! spatter blobs, wind motion blur, and concert brightness.

use crate::media::{Frame, FrameSequence};
use crate::rng::RngStream;

use super::raster::{
    gaussian_blur_plane, motion_blur_frame, motion_blur_plane, normal_field, rgb_to_hsv,
    hsv_to_rgb, upper_quantile,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnowParams {
    /// Fraction of pixels seeded as flakes before streaking.
    pub coverage: f32,
    /// Motion-blur half-length of the streaks, pixels.
    pub blur_radius: usize,
    /// Peak streak brightness after blur compensation.
    pub intensity: f32,
}

/// Snow: a thresholded noise field streaked by directional blur and
/// composited additively. The streak angle is one per-clip draw; the flake
/// field is fresh per frame.
pub fn snow_frames(seq: &FrameSequence, params: SnowParams, rng: &RngStream) -> FrameSequence {
    // Streaks fall steeply: -90 deg is straight down in screen coordinates.
    let angle = -90.0 + rng.child("angle").symmetric_open(30.0);
    let (w, h) = (seq.width(), seq.height());
    let kernel_len = (2 * params.blur_radius + 1) as f32;
    seq.map(|index, frame| {
        let mut field_rng = rng.child_indexed("frame", index);
        let field = normal_field(w, h, &mut field_rng);
        let threshold = upper_quantile(&field, params.coverage);
        let flakes: Vec<f32> = field
            .iter()
            .map(|&v| if v > threshold { 1.0 } else { 0.0 })
            .collect();
        let streaks = motion_blur_plane(&flakes, w, h, params.blur_radius, angle);
        let mut out = frame.clone();
        for (i, px) in out.data_mut().chunks_exact_mut(3).enumerate() {
            let s = (streaks[i] * kernel_len * params.intensity).min(1.0);
            for v in px {
                *v = (*v + s).min(1.0);
            }
        }
        out
    })
    .expect("dimensions preserved")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrostParams {
    /// Weight of the original frame (c1).
    pub keep: f32,
    /// Weight of the frost texture (c2).
    pub texture: f32,
}

/// Frost: blends a pool texture into every frame, `x*c1 + tex*c2`. The crop
/// offset is a per-clip draw so all frames share one frost pattern.
pub fn frost_frames(
    seq: &FrameSequence,
    texture: &Frame,
    params: FrostParams,
    rng: &RngStream,
) -> FrameSequence {
    let (w, h) = (seq.width(), seq.height());
    let mut crop_rng = rng.child("crop");
    let crop = tiled_crop(texture, w, h, &mut crop_rng);
    seq.map(|_, frame| {
        let mut out = frame.clone();
        for (v, t) in out.data_mut().iter_mut().zip(crop.data()) {
            *v = (*v * params.keep + t * params.texture).clamp(0.0, 1.0);
        }
        out
    })
    .expect("dimensions preserved")
}

/// Random crop of `texture` at the target size, tiling the texture first if
/// it is smaller than the target.
fn tiled_crop(texture: &Frame, w: usize, h: usize, rng: &mut RngStream) -> Frame {
    let (tw, th) = (texture.width(), texture.height());
    let max_x = tw.saturating_sub(w);
    let max_y = th.saturating_sub(h);
    let x0 = if max_x > 0 { rng.below(max_x + 1) } else { 0 };
    let y0 = if max_y > 0 { rng.below(max_y + 1) } else { 0 };
    let mut data = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            let px = texture.pixel((x0 + x) % tw, (y0 + y) % th);
            data.extend_from_slice(&px);
        }
    }
    Frame::new(w, h, data).expect("constructed at target size")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatterParams {
    /// Fraction of pixels covered by liquid blobs.
    pub coverage: f32,
    /// Blob smoothing sigma, pixels.
    pub blob_sigma: f32,
    /// Blend opacity of the liquid layer.
    pub opacity: f32,
}

/// Liquid color of the spatter layer.
pub const SPATTER_COLOR: [f32; 3] = [0.42, 0.5, 0.58];

/// Spatter: smoothed-noise blobs blended as a translucent liquid layer.
/// Blob fields are per frame.
pub fn spatter_frames(
    seq: &FrameSequence,
    params: SpatterParams,
    rng: &RngStream,
) -> FrameSequence {
    let (w, h) = (seq.width(), seq.height());
    seq.map(|index, frame| {
        let mut field_rng = rng.child_indexed("frame", index);
        let field = gaussian_blur_plane(
            &normal_field(w, h, &mut field_rng),
            w,
            h,
            params.blob_sigma,
        );
        let threshold = upper_quantile(&field, params.coverage);
        let mut out = frame.clone();
        for (i, px) in out.data_mut().chunks_exact_mut(3).enumerate() {
            if field[i] > threshold {
                for (v, c) in px.iter_mut().zip(SPATTER_COLOR) {
                    *v += params.opacity * (c - *v);
                }
            }
        }
        out.clamp_unit();
        out
    })
    .expect("dimensions preserved")
}

/// Wind: directional box blur with a per-clip random angle.
pub fn wind_frames(seq: &FrameSequence, radius: usize, rng: &RngStream) -> FrameSequence {
    let angle = rng.child("angle").symmetric_open(45.0);
    wind_frames_at_angle(seq, radius, angle)
}

/// Wind with a forced blur angle (degrees); the basis for the edge-spread
/// measurements.
pub fn wind_frames_at_angle(seq: &FrameSequence, radius: usize, angle_deg: f64) -> FrameSequence {
    seq.map(|_, frame| motion_blur_frame(frame, radius, angle_deg))
        .expect("dimensions preserved")
}

/// Concert brightness: adds `delta` to the HSV value channel.
pub fn brightness_frames(seq: &FrameSequence, delta: f32) -> FrameSequence {
    seq.map(|_, frame| {
        let mut out = frame.clone();
        for px in out.data_mut().chunks_exact_mut(3) {
            let mut hsv = rgb_to_hsv([px[0], px[1], px[2]]);
            hsv[2] = (hsv[2] + delta).clamp(0.0, 1.0);
            let rgb = hsv_to_rgb(hsv);
            px.copy_from_slice(&rgb);
        }
        out
    })
    .expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Severity;

    fn clip_rng(family: &str) -> RngStream {
        RngStream::derive(9, "clip-w", family, Severity::new(3).unwrap(), "visual")
    }

    fn gray_seq(n: usize, w: usize, h: usize) -> FrameSequence {
        FrameSequence::new((0..n).map(|_| Frame::constant(w, h, [0.5; 3])).collect()).unwrap()
    }

    #[test]
    fn snow_brightens_and_covers_more_with_stronger_params() {
        let seq = gray_seq(1, 64, 64);
        let light = snow_frames(
            &seq,
            SnowParams { coverage: 0.01, blur_radius: 4, intensity: 0.6 },
            &clip_rng("snow"),
        );
        let heavy = snow_frames(
            &seq,
            SnowParams { coverage: 0.05, blur_radius: 10, intensity: 0.9 },
            &clip_rng("snow"),
        );
        let mean = |s: &FrameSequence| s.frames()[0].mean();
        assert!(mean(&light) > 0.5);
        assert!(mean(&heavy) > mean(&light));
    }

    #[test]
    fn frost_blend_with_zero_texture_weight_scales_input() {
        let seq = gray_seq(2, 32, 32);
        let texture = crate::synth::frost_texture(64, 64, 0);
        let out = frost_frames(
            &seq,
            &texture,
            FrostParams { keep: 0.8, texture: 0.0 },
            &clip_rng("frost"),
        );
        for v in out.frames()[0].data() {
            assert!((v - 0.4).abs() < 1e-6);
        }
    }

    #[test]
    fn frost_pattern_is_shared_across_frames() {
        let seq = gray_seq(3, 48, 48);
        let texture = crate::synth::frost_texture(128, 128, 1);
        let out = frost_frames(
            &seq,
            &texture,
            FrostParams { keep: 0.7, texture: 0.7 },
            &clip_rng("frost"),
        );
        assert_eq!(out.frames()[0], out.frames()[1]);
        assert_eq!(out.frames()[1], out.frames()[2]);
    }

    #[test]
    fn spatter_covers_roughly_the_requested_fraction() {
        let seq = gray_seq(1, 96, 96);
        let params = SpatterParams { coverage: 0.1, blob_sigma: 3.0, opacity: 1.0 };
        let out = spatter_frames(&seq, params, &clip_rng("spatter"));
        let touched = out.frames()[0]
            .data()
            .chunks_exact(3)
            .filter(|px| (px[0] - 0.5).abs() > 1e-6)
            .count();
        let fraction = touched as f64 / (96.0 * 96.0);
        assert!((fraction - 0.1).abs() < 0.02, "fraction {fraction}");
    }

    #[test]
    fn horizontal_wind_spreads_a_vertical_edge() {
        // Left half black, right half white.
        let w = 64;
        let mut frame = Frame::constant(w, 16, [0.0; 3]);
        for y in 0..16 {
            for x in w / 2..w {
                frame.set_pixel(x, y, [1.0; 3]);
            }
        }
        let seq = FrameSequence::new(vec![frame]).unwrap();
        let radius = 16;
        let out = wind_frames_at_angle(&seq, radius, 0.0);
        let data = out.frames()[0].data();
        let row: Vec<f32> = (0..w).map(|x| data[x * 3]).collect();
        let ramp = row.iter().filter(|&&v| v > 0.02 && v < 0.98).count();
        assert!(ramp >= 2 * radius, "ramp {ramp} < {}", 2 * radius);
    }

    #[test]
    fn brightness_adds_delta_on_midgray() {
        let seq = gray_seq(1, 8, 8);
        let out = brightness_frames(&seq, 0.3);
        for v in out.frames()[0].data() {
            assert!((v - 0.8).abs() < 1e-5);
        }
        // Saturates at one.
        let out = brightness_frames(&seq, 0.7);
        for v in out.frames()[0].data() {
            assert!((v - 1.0).abs() < 1e-5);
        }
    }
}
