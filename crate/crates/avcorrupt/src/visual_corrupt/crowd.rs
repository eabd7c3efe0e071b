//! Crowd occlusions: dark human silhouettes scaled to a target area
//! fraction and alpha-blended at a random (per-clip) position.

use std::sync::OnceLock;

use crate::media::FrameSequence;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrowdParams {
    /// Occluded fraction of the frame area.
    pub area_fraction: f32,
    /// Alpha of the occluder fill.
    pub opacity: f32,
}

/// Shadow-like fill color of the occluder.
pub const OCCLUDER_FILL: [f32; 3] = [0.07, 0.06, 0.09];

pub const SILHOUETTE_COUNT: usize = 4;

/// Analytic silhouette test over the unit box (v grows downward): heads are
/// circles, torsos are ellipses clipped by the box.
fn inside(shape: usize, u: f32, v: f32) -> bool {
    let circle = |cu: f32, cv: f32, r: f32| {
        let (du, dv) = (u - cu, v - cv);
        du * du + dv * dv <= r * r
    };
    let ellipse = |cu: f32, cv: f32, ru: f32, rv: f32| {
        let (du, dv) = ((u - cu) / ru, (v - cv) / rv);
        du * du + dv * dv <= 1.0
    };
    match shape {
        // Single head and shoulders.
        0 => circle(0.5, 0.20, 0.17) || ellipse(0.5, 0.95, 0.50, 0.55),
        // Two overlapping figures.
        1 => {
            circle(0.28, 0.22, 0.15)
                || circle(0.72, 0.18, 0.15)
                || ellipse(0.5, 1.0, 0.52, 0.62)
        }
        // Half figure with a smaller head.
        2 => circle(0.5, 0.14, 0.13) || ellipse(0.5, 0.72, 0.42, 0.56),
        // Off-center profile.
        3 => circle(0.40, 0.18, 0.16) || ellipse(0.52, 0.90, 0.48, 0.52),
        _ => unreachable!("shape index out of range"),
    }
}

/// Fill factor of each silhouette over the unit box, measured once at a
/// 512x512 reference rasterization.
fn fill_factor(shape: usize) -> f64 {
    static FILLS: OnceLock<[f64; SILHOUETTE_COUNT]> = OnceLock::new();
    FILLS.get_or_init(|| {
        let mut fills = [0.0; SILHOUETTE_COUNT];
        let n = 512;
        for (s, fill) in fills.iter_mut().enumerate() {
            let mut count = 0usize;
            for y in 0..n {
                for x in 0..n {
                    let u = (x as f32 + 0.5) / n as f32;
                    let v = (y as f32 + 0.5) / n as f32;
                    if inside(s, u, v) {
                        count += 1;
                    }
                }
            }
            *fill = count as f64 / (n * n) as f64;
        }
        fills
    })[shape]
}

/// Rasterizes a silhouette whose pixel count approximates `target_area_px`,
/// clamped to fit inside `frame_w` x `frame_h`. Returns (mask, w, h) with
/// the mask in row-major order.
pub fn silhouette_mask(
    shape: usize,
    target_area_px: usize,
    frame_w: usize,
    frame_h: usize,
) -> (Vec<bool>, usize, usize) {
    let fill = fill_factor(shape);
    let side = (target_area_px as f64 / fill).sqrt();
    let w = (side.round() as usize).clamp(1, frame_w);
    let h = (side.round() as usize).clamp(1, frame_h);
    let mut mask = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let u = (x as f32 + 0.5) / w as f32;
            let v = (y as f32 + 0.5) / h as f32;
            mask[y * w + x] = inside(shape, u, v);
        }
    }
    (mask, w, h)
}

/// One silhouette per clip: shape, scale, and position are clip-level draws;
/// every frame receives the identical occluder.
pub fn crowd_frames(seq: &FrameSequence, params: CrowdParams, rng: &RngStream) -> FrameSequence {
    let (fw, fh) = (seq.width(), seq.height());
    let shape = rng.child("shape").below(SILHOUETTE_COUNT);
    let target = (f64::from(params.area_fraction) * (fw * fh) as f64).round() as usize;
    let (mask, w, h) = silhouette_mask(shape, target, fw, fh);
    let mut pos_rng = rng.child("position");
    let x0 = pos_rng.below(fw - w + 1);
    let y0 = pos_rng.below(fh - h + 1);

    seq.map(|_, frame| {
        let mut out = frame.clone();
        for my in 0..h {
            for mx in 0..w {
                if mask[my * w + mx] {
                    let (px, py) = (x0 + mx, y0 + my);
                    let mut rgb = out.pixel(px, py);
                    for (v, fill) in rgb.iter_mut().zip(OCCLUDER_FILL) {
                        // Lerp form keeps opacity 1.0 exact.
                        *v = (1.0 - params.opacity) * *v + params.opacity * fill;
                    }
                    out.set_pixel(px, py, rgb);
                }
            }
        }
        out
    })
    .expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{Frame, Severity};

    fn clip_rng(seed: u64) -> RngStream {
        RngStream::derive(seed, "clip-c", "crowd", Severity::new(5).unwrap(), "visual")
    }

    #[test]
    fn every_silhouette_hits_its_target_area() {
        // At the extreme severity the occluder must cover 0.35 +- 0.02.
        let (fw, fh) = (224, 224);
        let target = (0.35 * (fw * fh) as f64).round() as usize;
        for shape in 0..SILHOUETTE_COUNT {
            let (mask, w, h) = silhouette_mask(shape, target, fw, fh);
            assert!(w <= fw && h <= fh, "shape {shape} does not fit");
            let area = mask.iter().filter(|&&m| m).count();
            let fraction = area as f64 / (fw * fh) as f64;
            assert!(
                (fraction - 0.35).abs() <= 0.02,
                "shape {shape}: fraction {fraction}"
            );
        }
    }

    #[test]
    fn full_opacity_paints_the_fill_color_exactly() {
        let seq = FrameSequence::new(vec![Frame::constant(64, 64, [1.0; 3])]).unwrap();
        let params = CrowdParams { area_fraction: 0.17, opacity: 1.0 };
        let out = crowd_frames(&seq, params, &clip_rng(4));
        let mut occluded = 0;
        for px in out.frames()[0].data().chunks_exact(3) {
            if px[0] < 0.99 {
                assert_eq!(px, OCCLUDER_FILL);
                occluded += 1;
            }
        }
        assert!(occluded > 0);
    }

    #[test]
    fn occluder_is_identical_across_frames() {
        let seq = FrameSequence::new(
            (0..4).map(|_| Frame::constant(48, 48, [0.8; 3])).collect(),
        )
        .unwrap();
        let params = CrowdParams { area_fraction: 0.25, opacity: 0.85 };
        let out = crowd_frames(&seq, params, &clip_rng(5));
        for f in &out.frames()[1..] {
            assert_eq!(*f, out.frames()[0]);
        }
    }

    #[test]
    fn position_varies_across_clips() {
        let seq = FrameSequence::new(vec![Frame::constant(96, 96, [1.0; 3])]).unwrap();
        let params = CrowdParams { area_fraction: 0.05, opacity: 1.0 };
        let darkest_pixel = |seed: u64| {
            let out = crowd_frames(&seq, params, &clip_rng(seed));
            out.frames()[0]
                .data()
                .chunks_exact(3)
                .position(|px| px[0] < 0.5)
        };
        let positions: std::collections::BTreeSet<_> =
            (0..8).map(|s| darkest_pixel(s * 31 + 1)).collect();
        assert!(positions.len() > 1, "all clips placed the occluder equally");
    }
}
