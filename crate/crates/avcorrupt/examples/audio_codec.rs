//! Bitrate-quantization codec sweep: blockwise orthonormal DCT with
//! 2^c quantization levels, c in [24, 16, 8, 4, 2]. Prints the per-severity
//! reconstruction error and the unquantized round-trip error.
//!
//! Run: cargo run --example audio_codec

use avcorrupt::audio_corrupt::{
    dct_compress, dct_roundtrip, quantization_levels, DCT_BIT_EXPONENTS,
};
use avcorrupt::media::Severity;
use avcorrupt::synth;

fn main() {
    let signal = synth::fixture_audio(48_000, 16_000, 3);

    let roundtrip = dct_roundtrip(&signal);
    let identity_err = signal
        .samples()
        .iter()
        .zip(roundtrip.samples())
        .map(|(&a, &b)| (f64::from(a) - f64::from(b)).abs())
        .fold(0.0f64, f64::max);
    println!("unquantized round trip: max |error| = {identity_err:.3e}");

    println!("{:>8} {:>6} {:>14} {:>14}", "severity", "c", "levels", "MSE");
    for severity in Severity::ALL {
        let out = dct_compress(&signal, severity);
        let mse: f64 = signal
            .samples()
            .iter()
            .zip(out.samples())
            .map(|(&a, &b)| (f64::from(a) - f64::from(b)).powi(2))
            .sum::<f64>()
            / signal.len() as f64;
        println!(
            "{:>8} {:>6} {:>14} {:>14.3e}",
            severity.level(),
            DCT_BIT_EXPONENTS[severity.index()],
            quantization_levels(severity),
            mse
        );
    }
}
