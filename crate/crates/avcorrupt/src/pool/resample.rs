//! Sample-rate conversion with a 64-tap Kaiser-windowed sinc interpolator.

const TAPS: usize = 64;
const KAISER_BETA: f64 = 8.0;

/// Resamples `input` from `in_rate` to `out_rate`. Output length is
/// `ceil(len * out_rate / in_rate)`; samples outside the input are zero.
pub fn resample(input: &[f32], in_rate: u32, out_rate: u32) -> Vec<f32> {
    assert!(in_rate > 0 && out_rate > 0);
    if in_rate == out_rate {
        return input.to_vec();
    }
    let ratio = f64::from(in_rate) / f64::from(out_rate);
    let out_len = (input.len() as f64 / ratio).ceil() as usize;
    // Low-pass at the narrower Nyquist when downsampling.
    let cutoff = (f64::from(out_rate) / f64::from(in_rate)).min(1.0);
    let half = (TAPS / 2) as isize;
    let inv_i0_beta = 1.0 / bessel_i0(KAISER_BETA);

    let mut out = Vec::with_capacity(out_len);
    for m in 0..out_len {
        let pos = m as f64 * ratio;
        let n0 = pos.floor() as isize;
        let frac = pos - n0 as f64;
        let mut acc = 0.0;
        for j in (1 - half)..=half {
            let idx = n0 + j;
            if idx < 0 || idx as usize >= input.len() {
                continue;
            }
            let t = j as f64 - frac;
            let window_arg = t / half as f64;
            if window_arg.abs() > 1.0 {
                continue;
            }
            let w = bessel_i0(KAISER_BETA * (1.0 - window_arg * window_arg).sqrt()) * inv_i0_beta;
            acc += f64::from(input[idx as usize]) * cutoff * sinc(cutoff * t) * w;
        }
        out.push(acc as f32);
    }
    out
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Modified Bessel function of the first kind, order zero (power series).
fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let half_x = x / 2.0;
    for k in 1..32 {
        term *= (half_x / k as f64) * (half_x / k as f64);
        sum += term;
        if term < sum * 1e-16 {
            break;
        }
    }
    sum
}
