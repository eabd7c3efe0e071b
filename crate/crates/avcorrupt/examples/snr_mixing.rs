//! Shows the SNR scaling math: a noise vector is scaled by
//! beta = sqrt(P_sig / (10^(SNR/10) * P_n)) so the mix lands exactly on the
//! scheduled SNR, severity by severity.
//!
//! Run: cargo run --example snr_mixing

use avcorrupt::audio_corrupt::{gen_noise, mix_at_snr, SnrSchedule};
use avcorrupt::catalog::NoiseKind;
use avcorrupt::media::Severity;
use avcorrupt::rng::RngStream;
use avcorrupt::synth;

fn main() {
    let signal = synth::fixture_audio(32_000, 16_000, 5);
    let schedule = SnrSchedule::default();
    println!("signal power P_sig = {:.6}", signal.power());
    println!(
        "{:>8} {:>10} {:>12} {:>16} {:>14}",
        "severity", "SNR dB", "beta", "P_noise_scaled", "achieved dB"
    );
    for severity in Severity::ALL {
        let mut rng = RngStream::derive(11, "demo", "gaussian", severity, "audio");
        let noise = gen_noise(NoiseKind::Gaussian, &signal, &mut rng).expect("noise");
        let target = schedule.snr_db(severity);
        let (_, report) = mix_at_snr(&signal, &noise, target).expect("mix");
        println!(
            "{:>8} {:>10.1} {:>12.6} {:>16.9} {:>14.9}",
            severity.level(),
            target,
            report.beta,
            report.p_noise_scaled,
            report.achieved_snr_db
        );
    }
}
