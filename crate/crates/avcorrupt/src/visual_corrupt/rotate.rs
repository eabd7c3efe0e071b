//! Interference rotation: each frame rotates about its center by an angle
//! drawn uniformly from the open interval ±(6*severity + 5) degrees.

use crate::media::{Frame, FrameSequence};
use crate::rng::RngStream;

/// Rotation bound in degrees for a severity level `s`: `6 s + 5`.
pub fn rotation_bound_deg(level: u8) -> f64 {
    6.0 * f64::from(level) + 5.0
}

/// Rotates one frame by `angle_deg` about its center with bilinear
/// sampling; uncovered pixels are black.
pub fn rotate_frame(frame: &Frame, angle_deg: f64) -> Frame {
    let (w, h) = (frame.width(), frame.height());
    let theta = angle_deg.to_radians();
    let (sin, cos) = (theta.sin() as f32, theta.cos() as f32);
    let (cx, cy) = ((w as f32 - 1.0) / 2.0, (h as f32 - 1.0) / 2.0);
    let mut data = vec![0.0f32; w * h * 3];
    for y in 0..h {
        for x in 0..w {
            // Inverse map: source = R(-theta) * (dst - center) + center.
            let dx = x as f32 - cx;
            let dy = y as f32 - cy;
            let sx = cos * dx + sin * dy + cx;
            let sy = -sin * dx + cos * dy + cy;
            if sx < -0.5 || sy < -0.5 || sx > w as f32 - 0.5 || sy > h as f32 - 0.5 {
                continue; // stays black
            }
            let px = bilinear_rgb(frame, sx, sy);
            let i = (y * w + x) * 3;
            data[i..i + 3].copy_from_slice(&px);
        }
    }
    Frame::new(w, h, data).expect("dimensions preserved")
}

fn bilinear_rgb(frame: &Frame, x: f32, y: f32) -> [f32; 3] {
    let (w, h) = (frame.width(), frame.height());
    let x = x.clamp(0.0, w as f32 - 1.0);
    let y = y.clamp(0.0, h as f32 - 1.0);
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let (fx, fy) = (x - x0 as f32, y - y0 as f32);
    let mut out = [0.0f32; 3];
    let (p00, p10) = (frame.pixel(x0, y0), frame.pixel(x1, y0));
    let (p01, p11) = (frame.pixel(x0, y1), frame.pixel(x1, y1));
    for c in 0..3 {
        let top = p00[c] * (1.0 - fx) + p10[c] * fx;
        let bot = p01[c] * (1.0 - fx) + p11[c] * fx;
        out[c] = top * (1.0 - fy) + bot * fy;
    }
    out
}

/// Per-frame random rotation within the severity bound. Returns the frames
/// and the angles actually drawn (for provenance and verification).
pub fn rotate_frames(
    seq: &FrameSequence,
    bound_deg: f64,
    rng: &RngStream,
) -> (FrameSequence, Vec<f64>) {
    let mut angles = Vec::with_capacity(seq.len());
    let out = seq
        .map(|index, frame| {
            let mut frame_rng = rng.child_indexed("frame", index);
            let angle = frame_rng.symmetric_open(bound_deg);
            angles.push(angle);
            rotate_frame(frame, angle)
        })
        .expect("dimensions preserved");
    (out, angles)
}
