//! Energy-detection thresholds: exact chi-square quantile vs the Gaussian
//! approximation, plus a Monte-Carlo calibration check of the exact one.
//!
//!     cargo run --release --example threshold_table

use irsim::rng::{RngStreams, StreamLabel};
use irsim::sensing::{draw_noise_energy, exact_threshold, gaussian_threshold};

fn main() {
    println!("{:>6} {:>6} {:>16} {:>16} {:>10}", "M", "Pfa", "exact γ/σ²", "gauss γ/σ²", "rel gap");
    for &m in &[1usize, 8, 32, 128, 512, 1024] {
        for &pfa in &[0.01, 0.1] {
            let exact = exact_threshold(1.0, m, pfa).unwrap();
            let gauss = gaussian_threshold(1.0, m, pfa).unwrap();
            println!(
                "{m:>6} {pfa:>6} {exact:>16.6} {gauss:>16.6} {:>9.3}%",
                (gauss - exact).abs() / exact * 100.0
            );
        }
    }

    // Empirical false-alarm rate at the paper-scale operating point.
    let (m, pfa, sigma2) = (128usize, 0.1, 7.97e-14);
    let gamma = exact_threshold(sigma2, m, pfa).unwrap();
    let mut rng = RngStreams::new(42).stream(StreamLabel::SensingNoise);
    let trials = 100_000;
    let hits = (0..trials).filter(|_| draw_noise_energy(&mut rng, m, sigma2) > gamma).count();
    println!(
        "\ncalibration: M={m}, target Pfa={pfa}: empirical rate {:.4} over {trials} noise-only draws",
        hits as f64 / trials as f64
    );
}
