//! Per-pixel digital noise on frame sequences: gaussian, impulse
//! (salt-and-pepper), shot (Poisson), and speckle.
//!
//! Noise is drawn independently per frame from per-frame child streams of
//! one clip-level stream, so frames can be processed in any order (or in
//! parallel) without changing the output.

use rand_distr::{Distribution, Poisson};

use crate::catalog::NoiseKind;
use crate::media::{Frame, FrameSequence};
use crate::rng::RngStream;

/// Additive zero-mean Gaussian noise with standard deviation `sigma`.
pub fn gaussian_frames(seq: &FrameSequence, sigma: f32, rng: &RngStream) -> FrameSequence {
    per_frame(seq, rng, |frame, frame_rng| {
        for v in frame.data_mut() {
            *v += sigma * frame_rng.standard_normal() as f32;
        }
    })
}

/// Salt-and-pepper: each channel value flips to 0 or 1 with probability
/// `amount`, half salt and half pepper.
pub fn impulse_frames(seq: &FrameSequence, amount: f32, rng: &RngStream) -> FrameSequence {
    let amount = f64::from(amount);
    per_frame(seq, rng, |frame, frame_rng| {
        for v in frame.data_mut() {
            let u = frame_rng.unit();
            if u < amount / 2.0 {
                *v = 0.0;
            } else if u < amount {
                *v = 1.0;
            }
        }
    })
}

/// Shot noise: each channel value is replaced by `Poisson(x * photons) /
/// photons`. Smaller photon counts mean stronger noise.
pub fn shot_frames(seq: &FrameSequence, photons: f32, rng: &RngStream) -> FrameSequence {
    let photons = f64::from(photons);
    per_frame(seq, rng, |frame, frame_rng| {
        for v in frame.data_mut() {
            let lambda = f64::from(v.clamp(0.0, 1.0)) * photons;
            let draw = if lambda > 0.0 {
                Poisson::new(lambda).expect("lambda > 0").sample(frame_rng)
            } else {
                0.0
            };
            *v = (draw / photons) as f32;
        }
    })
}

/// Speckle: `x + x * N(0, sigma^2)` per channel value.
pub fn speckle_frames(seq: &FrameSequence, sigma: f32, rng: &RngStream) -> FrameSequence {
    per_frame(seq, rng, |frame, frame_rng| {
        for v in frame.data_mut() {
            *v += *v * sigma * frame_rng.standard_normal() as f32;
        }
    })
}

pub fn digital_noise_frames(
    seq: &FrameSequence,
    kind: NoiseKind,
    sigma_or_amount: f32,
    rng: &RngStream,
) -> FrameSequence {
    match kind {
        NoiseKind::Gaussian => gaussian_frames(seq, sigma_or_amount, rng),
        NoiseKind::Impulse => impulse_frames(seq, sigma_or_amount, rng),
        NoiseKind::Shot => shot_frames(seq, sigma_or_amount, rng),
        NoiseKind::Speckle => speckle_frames(seq, sigma_or_amount, rng),
    }
}

fn per_frame<F>(seq: &FrameSequence, rng: &RngStream, mut op: F) -> FrameSequence
where
    F: FnMut(&mut Frame, &mut RngStream),
{
    seq.map(|index, frame| {
        let mut frame_rng = rng.child_indexed("frame", index);
        let mut out = frame.clone();
        op(&mut out, &mut frame_rng);
        out.clamp_unit();
        out
    })
    .expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Severity;

    fn clip_rng() -> RngStream {
        RngStream::derive(5, "clip", "gaussian", Severity::new(5).unwrap(), "visual")
    }

    fn gray_frames(n: usize, w: usize, h: usize) -> FrameSequence {
        FrameSequence::new((0..n).map(|_| Frame::constant(w, h, [0.5; 3])).collect()).unwrap()
    }

    #[test]
    fn gaussian_variance_matches_sigma_on_midgray() {
        let seq = gray_frames(2, 128, 128);
        let sigma = 0.38f32;
        let out = gaussian_frames(&seq, sigma, &clip_rng());
        // Clipping at [0,1] trims the tails: at x=0.5 with sigma=0.38 about
        // 19% of draws clip, so compare against the censored variance rather
        // than sigma^2. Censored second moment for N(0.5, 0.38^2) in [0,1]:
        let var: f64 = out.frames()[0]
            .data()
            .iter()
            .map(|&v| (f64::from(v) - 0.5).powi(2))
            .sum::<f64>()
            / out.frames()[0].data().len() as f64;
        // Tolerance of 5% around the censored moment
        // E[(clip(0.5 + sigma g) - 0.5)^2], computed by quadrature.
        let expected = censored_second_moment(0.5, f64::from(sigma));
        assert!(
            (var - expected).abs() / expected < 0.05,
            "var {var} vs {expected}"
        );
    }

    /// Quadrature oracle for the clipped-noise second moment.
    fn censored_second_moment(mid: f64, sigma: f64) -> f64 {
        let steps = 20_000;
        let lo = -8.0 * sigma;
        let hi = 8.0 * sigma;
        let dx = (hi - lo) / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            let g = lo + (i as f64 + 0.5) * dx;
            let pdf = (-0.5 * (g / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
            let clipped = (mid + g).clamp(0.0, 1.0) - mid;
            acc += clipped * clipped * pdf * dx;
        }
        acc
    }

    #[test]
    fn impulse_census_matches_amount() {
        let seq = gray_frames(1, 256, 256);
        let amount = 0.27f32;
        let out = impulse_frames(&seq, amount, &clip_rng());
        let data = out.frames()[0].data();
        let extreme = data.iter().filter(|&&v| v == 0.0 || v == 1.0).count();
        let fraction = extreme as f64 / data.len() as f64;
        let tolerance = 3.0 * (f64::from(amount) / data.len() as f64).sqrt();
        assert!(
            (fraction - f64::from(amount)).abs() < tolerance,
            "fraction {fraction}"
        );
    }

    #[test]
    fn shot_noise_variance_shrinks_with_photon_count() {
        let seq = gray_frames(1, 128, 128);
        let var_of = |photons: f32| {
            let out = shot_frames(&seq, photons, &clip_rng());
            let data = out.frames()[0].data();
            let mean: f64 = data.iter().map(|&v| f64::from(v)).sum::<f64>() / data.len() as f64;
            data.iter()
                .map(|&v| (f64::from(v) - mean).powi(2))
                .sum::<f64>()
                / data.len() as f64
        };
        assert!(var_of(3.0) > var_of(60.0));
    }

    #[test]
    fn zero_parameters_are_identity() {
        let seq = gray_frames(2, 16, 16);
        let rng = clip_rng();
        assert_eq!(gaussian_frames(&seq, 0.0, &rng), seq);
        assert_eq!(impulse_frames(&seq, 0.0, &rng), seq);
        assert_eq!(speckle_frames(&seq, 0.0, &rng), seq);
    }

    #[test]
    fn frames_receive_independent_noise() {
        let seq = gray_frames(2, 32, 32);
        let out = gaussian_frames(&seq, 0.1, &clip_rng());
        assert_ne!(out.frames()[0], out.frames()[1]);
    }

    #[test]
    fn speckle_on_black_is_identity() {
        let seq =
            FrameSequence::new(vec![Frame::constant(16, 16, [0.0; 3])]).unwrap();
        let out = speckle_frames(&seq, 0.6, &clip_rng());
        assert_eq!(out.frames()[0].data(), seq.frames()[0].data());
    }
}
