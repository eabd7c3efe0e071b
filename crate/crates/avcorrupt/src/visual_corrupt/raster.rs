//! Shared raster primitives for the visual corruptions: separable Gaussian
//! blur, directional (motion) blur, clipped zoom, HSV conversion, and noise
//! fields. All operate on single-channel planes or interleaved RGB frames
//! with replicate edge handling.

use crate::media::Frame;
use crate::rng::RngStream;

/// Standard-normal field, one value per pixel.
pub fn normal_field(width: usize, height: usize, rng: &mut RngStream) -> Vec<f32> {
    (0..width * height)
        .map(|_| rng.standard_normal() as f32)
        .collect()
}

/// Separable Gaussian blur of a single plane. `sigma <= 0` is the identity.
pub fn gaussian_blur_plane(plane: &[f32], width: usize, height: usize, sigma: f32) -> Vec<f32> {
    if sigma <= 0.0 {
        return plane.to_vec();
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f32> = (-radius..=radius)
        .map(|k| (-0.5 * (k as f32 / sigma).powi(2)).exp())
        .collect();
    let norm: f32 = kernel.iter().sum();
    let kernel: Vec<f32> = kernel.iter().map(|v| v / norm).collect();

    let clamp = |v: isize, hi: usize| v.clamp(0, hi as isize - 1) as usize;
    let mut tmp = vec![0.0f32; plane.len()];
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                let sx = clamp(x as isize + i as isize - radius, width);
                acc += plane[y * width + sx] * k;
            }
            tmp[y * width + x] = acc;
        }
    }
    let mut out = vec![0.0f32; plane.len()];
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                let sy = clamp(y as isize + i as isize - radius, height);
                acc += tmp[sy * width + x] * k;
            }
            out[y * width + x] = acc;
        }
    }
    out
}

/// Gaussian blur applied per channel of an RGB frame.
pub fn gaussian_blur_frame(frame: &Frame, sigma: f32) -> Frame {
    if sigma <= 0.0 {
        return frame.clone();
    }
    let (w, h) = (frame.width(), frame.height());
    let mut out = frame.clone();
    for c in 0..3 {
        let plane: Vec<f32> = (0..w * h).map(|i| frame.data()[i * 3 + c]).collect();
        let blurred = gaussian_blur_plane(&plane, w, h, sigma);
        for (i, v) in blurred.into_iter().enumerate() {
            out.data_mut()[i * 3 + c] = v;
        }
    }
    out
}

/// Integer sample offsets along a line of half-length `radius` at
/// `angle_deg` (degrees, screen coordinates: y grows downward).
pub fn line_offsets(radius: usize, angle_deg: f64) -> Vec<(isize, isize)> {
    let theta = angle_deg.to_radians();
    let (dx, dy) = (theta.cos(), theta.sin());
    (-(radius as isize)..=radius as isize)
        .map(|k| {
            (
                (k as f64 * dx).round() as isize,
                (k as f64 * dy).round() as isize,
            )
        })
        .collect()
}

/// Mean along a line segment (normalized directional box blur) of a plane.
pub fn motion_blur_plane(
    plane: &[f32],
    width: usize,
    height: usize,
    radius: usize,
    angle_deg: f64,
) -> Vec<f32> {
    if radius == 0 {
        return plane.to_vec();
    }
    let offsets = line_offsets(radius, angle_deg);
    let inv = 1.0 / offsets.len() as f32;
    let mut out = vec![0.0f32; plane.len()];
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for &(ox, oy) in &offsets {
                let sx = (x as isize + ox).clamp(0, width as isize - 1) as usize;
                let sy = (y as isize + oy).clamp(0, height as isize - 1) as usize;
                acc += plane[sy * width + sx];
            }
            out[y * width + x] = acc * inv;
        }
    }
    out
}

/// Directional box blur applied per channel of an RGB frame.
pub fn motion_blur_frame(frame: &Frame, radius: usize, angle_deg: f64) -> Frame {
    if radius == 0 {
        return frame.clone();
    }
    let (w, h) = (frame.width(), frame.height());
    let offsets = line_offsets(radius, angle_deg);
    let inv = 1.0 / offsets.len() as f32;
    let mut data = vec![0.0f32; w * h * 3];
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0f32; 3];
            for &(ox, oy) in &offsets {
                let sx = (x as isize + ox).clamp(0, w as isize - 1) as usize;
                let sy = (y as isize + oy).clamp(0, h as isize - 1) as usize;
                let px = frame.pixel(sx, sy);
                acc[0] += px[0];
                acc[1] += px[1];
                acc[2] += px[2];
            }
            let i = (y * w + x) * 3;
            data[i] = acc[0] * inv;
            data[i + 1] = acc[1] * inv;
            data[i + 2] = acc[2] * inv;
        }
    }
    Frame::new(w, h, data).expect("dimensions preserved")
}

/// Bilinear sample of a plane with replicate edges.
pub fn bilinear_plane(plane: &[f32], width: usize, height: usize, x: f32, y: f32) -> f32 {
    let x = x.clamp(0.0, width as f32 - 1.0);
    let y = y.clamp(0.0, height as f32 - 1.0);
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    let fx = x - x0 as f32;
    let fy = y - y0 as f32;
    let top = plane[y0 * width + x0] * (1.0 - fx) + plane[y0 * width + x1] * fx;
    let bot = plane[y1 * width + x0] * (1.0 - fx) + plane[y1 * width + x1] * fx;
    top * (1.0 - fy) + bot * fy
}

/// Center zoom: crops the central `1/zoom` region and scales it back to the
/// full plane with bilinear sampling. `zoom <= 1` is the identity.
pub fn clipped_zoom(plane: &[f32], width: usize, height: usize, zoom: f32) -> Vec<f32> {
    if zoom <= 1.0 {
        return plane.to_vec();
    }
    let crop_w = width as f32 / zoom;
    let crop_h = height as f32 / zoom;
    let x_off = (width as f32 - crop_w) / 2.0;
    let y_off = (height as f32 - crop_h) / 2.0;
    let mut out = vec![0.0f32; plane.len()];
    for y in 0..height {
        for x in 0..width {
            let sx = x_off + (x as f32 + 0.5) / width as f32 * crop_w - 0.5;
            let sy = y_off + (y as f32 + 0.5) / height as f32 * crop_h - 0.5;
            out[y * width + x] = bilinear_plane(plane, width, height, sx, sy);
        }
    }
    out
}

/// Min-max normalization to `[0, 1]`. A constant plane maps to all zeros.
pub fn normalize_unit(plane: &mut [f32]) {
    let (mut lo, mut hi) = (f32::INFINITY, f32::NEG_INFINITY);
    for &v in plane.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = hi - lo;
    if span <= 0.0 {
        plane.iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    for v in plane.iter_mut() {
        *v = (*v - lo) / span;
    }
}

/// Value below which exactly `keep` of the plane (as a fraction) lies above.
/// `keep = 0` returns +inf (empty mask), `keep >= 1` returns -inf.
pub fn upper_quantile(plane: &[f32], keep: f32) -> f32 {
    if keep <= 0.0 {
        return f32::INFINITY;
    }
    if keep >= 1.0 {
        return f32::NEG_INFINITY;
    }
    let k = ((plane.len() as f64) * f64::from(keep)).round() as usize;
    let k = k.clamp(1, plane.len());
    let mut copy = plane.to_vec();
    let idx = plane.len() - k;
    let (_, pivot, _) =
        copy.select_nth_unstable_by(idx, |a, b| a.partial_cmp(b).expect("finite plane"));
    *pivot
}

pub fn rgb_to_hsv([r, g, b]: [f32; 3]) -> [f32; 3] {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * (((g - b) / delta).rem_euclid(6.0))
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let s = if max == 0.0 { 0.0 } else { delta / max };
    [h, s, max]
}

pub fn hsv_to_rgb([h, s, v]: [f32; 3]) -> [f32; 3] {
    let c = v * s;
    let hp = (h / 60.0).rem_euclid(6.0);
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    [r + m, g + m, b + m]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Severity;

    #[test]
    fn gaussian_blur_preserves_mean_of_constant() {
        let plane = vec![0.7f32; 32 * 32];
        let out = gaussian_blur_plane(&plane, 32, 32, 2.0);
        for v in out {
            assert!((v - 0.7).abs() < 1e-5);
        }
    }

    #[test]
    fn zero_sigma_blur_is_identity() {
        let plane: Vec<f32> = (0..64).map(|i| i as f32 / 64.0).collect();
        assert_eq!(gaussian_blur_plane(&plane, 8, 8, 0.0), plane);
    }

    #[test]
    fn horizontal_motion_blur_spreads_a_vertical_edge() {
        // Step edge at x=16 on a 32-wide plane.
        let (w, h) = (32, 8);
        let plane: Vec<f32> = (0..w * h)
            .map(|i| if i % w < 16 { 0.0 } else { 1.0 })
            .collect();
        let r = 5;
        let out = motion_blur_plane(&plane, w, h, r, 0.0);
        // Ramp should span exactly the kernel length.
        let row = &out[0..w];
        let transition: Vec<usize> = (0..w)
            .filter(|&x| row[x] > 0.01 && row[x] < 0.99)
            .collect();
        assert!(
            transition.len() >= 2 * r,
            "transition width {} < {}",
            transition.len(),
            2 * r
        );
    }

    #[test]
    fn clipped_zoom_preserves_constant_plane() {
        let plane = vec![0.25f32; 24 * 24];
        let out = clipped_zoom(&plane, 24, 24, 1.8);
        for v in out {
            assert!((v - 0.25).abs() < 1e-5);
        }
    }

    #[test]
    fn upper_quantile_keeps_requested_fraction() {
        let plane: Vec<f32> = (0..10_000).map(|i| i as f32).collect();
        let t = upper_quantile(&plane, 0.1);
        let above = plane.iter().filter(|&&v| v > t).count();
        // Strictly-above count is within one element of the target.
        assert!((above as i64 - 1000).unsigned_abs() <= 1, "above = {above}");
        assert_eq!(upper_quantile(&plane, 0.0), f32::INFINITY);
    }

    #[test]
    fn hsv_round_trips_rgb() {
        let mut rng = crate::rng::RngStream::derive(
            1,
            "hsv",
            "concert",
            Severity::new(1).unwrap(),
            "t",
        );
        for _ in 0..1000 {
            let rgb = [
                rng.unit() as f32,
                rng.unit() as f32,
                rng.unit() as f32,
            ];
            let back = hsv_to_rgb(rgb_to_hsv(rgb));
            for c in 0..3 {
                assert!((rgb[c] - back[c]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn normalize_unit_spans_zero_to_one() {
        let mut plane = vec![2.0f32, 4.0, 3.0];
        normalize_unit(&mut plane);
        assert_eq!(plane, vec![0.0, 1.0, 0.5]);
        let mut flat = vec![5.0f32; 4];
        normalize_unit(&mut flat);
        assert_eq!(flat, vec![0.0; 4]);
    }
}
