//! Rain streaks: a zoomed, thresholded noise field is motion-blurred into
//! near-vertical streaks and blended with a bluish tint.

use crate::media::FrameSequence;
use crate::rng::RngStream;

use super::raster::{clipped_zoom, motion_blur_plane, normal_field, upper_quantile};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RainParams {
    /// Clipped-zoom factor that clusters droplets.
    pub zoom: f32,
    /// Fraction of pixels kept as droplets after thresholding.
    pub coverage: f32,
    /// Streak half-length, pixels.
    pub blur_radius: usize,
    /// Blend weight of the rain layer.
    pub blend: f32,
}

/// Bluish streak tint, applied per RGB channel.
pub const RAIN_TINT: [f32; 3] = [0.7, 0.8, 1.0];

/// Droplet mask for one frame: noise -> clipped zoom -> threshold.
/// Exposed separately so coverage can be measured directly.
pub fn rain_droplet_mask(
    width: usize,
    height: usize,
    params: RainParams,
    rng: &mut RngStream,
) -> Vec<f32> {
    let field = normal_field(width, height, rng);
    let zoomed = clipped_zoom(&field, width, height, params.zoom);
    let threshold = upper_quantile(&zoomed, params.coverage);
    zoomed
        .iter()
        .map(|&v| if v > threshold { 1.0 } else { 0.0 })
        .collect()
}

/// Rain: droplet masks are per frame; the streak angle jitters once per clip
/// within ±15 degrees of vertical.
pub fn rain_frames(seq: &FrameSequence, params: RainParams, rng: &RngStream) -> FrameSequence {
    let angle = -90.0 + rng.child("angle").symmetric_open(15.0);
    let (w, h) = (seq.width(), seq.height());
    let kernel_len = (2 * params.blur_radius + 1) as f32;
    seq.map(|index, frame| {
        let mut mask_rng = rng.child_indexed("frame", index);
        let mask = rain_droplet_mask(w, h, params, &mut mask_rng);
        let streaks = motion_blur_plane(&mask, w, h, params.blur_radius, angle);
        let mut out = frame.clone();
        for (i, px) in out.data_mut().chunks_exact_mut(3).enumerate() {
            let s = (streaks[i] * kernel_len * 0.85).min(1.0) * params.blend;
            for (v, tint) in px.iter_mut().zip(RAIN_TINT) {
                *v += s * (tint - *v);
            }
        }
        out.clamp_unit();
        out
    })
    .expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{Frame, Severity};

    fn clip_rng(seed: u64) -> RngStream {
        RngStream::derive(seed, "clip-r", "rain", Severity::new(4).unwrap(), "visual")
    }

    fn gray_seq(w: usize, h: usize) -> FrameSequence {
        FrameSequence::new(vec![Frame::constant(w, h, [0.5; 3])]).unwrap()
    }

    #[test]
    fn zero_coverage_is_identity() {
        let seq = gray_seq(32, 32);
        let params = RainParams { zoom: 1.6, coverage: 0.0, blur_radius: 7, blend: 0.7 };
        let out = rain_frames(&seq, params, &clip_rng(1));
        assert_eq!(out.frames()[0].data(), seq.frames()[0].data());
    }

    #[test]
    fn blue_channel_rises_more_than_red_on_midgray() {
        let params = RainParams { zoom: 1.6, coverage: 0.03, blur_radius: 9, blend: 0.8 };
        let mut wins = 0;
        for seed in 0..100u64 {
            let seq = gray_seq(64, 64);
            let out = rain_frames(&seq, params, &clip_rng(seed));
            let data = out.frames()[0].data();
            let (mut dr, mut db) = (0.0f64, 0.0f64);
            for px in data.chunks_exact(3) {
                dr += f64::from(px[0]) - 0.5;
                db += f64::from(px[2]) - 0.5;
            }
            if db > dr {
                wins += 1;
            }
        }
        assert!(wins >= 95, "blue exceeded red on only {wins}/100 seeds");
    }

    #[test]
    fn droplet_coverage_tracks_the_parameter() {
        for &coverage in &[0.01f32, 0.02, 0.04] {
            let params = RainParams { zoom: 1.5, coverage, blur_radius: 7, blend: 0.7 };
            let mask = rain_droplet_mask(128, 128, params, &mut clip_rng(3).child("m"));
            let density = mask.iter().filter(|&&v| v > 0.0).count() as f64 / mask.len() as f64;
            assert!(
                (density - f64::from(coverage)).abs() < 0.004,
                "coverage {coverage}: density {density}"
            );
        }
    }

    #[test]
    fn streaks_are_near_vertical() {
        // With a tall blur, streak pixels should mostly align in columns:
        // compare column-wise and row-wise autocorrelation of the layer.
        let params = RainParams { zoom: 1.4, coverage: 0.02, blur_radius: 10, blend: 1.0 };
        let seq = FrameSequence::new(vec![Frame::constant(96, 96, [0.0; 3])]).unwrap();
        let out = rain_frames(&seq, params, &clip_rng(8));
        let f = &out.frames()[0];
        let (mut col_pairs, mut row_pairs) = (0usize, 0usize);
        for y in 0..95 {
            for x in 0..95 {
                let here = f.pixel(x, y)[2] > 0.2;
                if here && f.pixel(x, y + 1)[2] > 0.2 {
                    col_pairs += 1;
                }
                if here && f.pixel(x + 1, y)[2] > 0.2 {
                    row_pairs += 1;
                }
            }
        }
        assert!(
            col_pairs as f64 > row_pairs as f64 * 1.5,
            "columns {col_pairs} vs rows {row_pairs}"
        );
    }
}
