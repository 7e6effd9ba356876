//! Fast self-checks behind the `validate` subcommand: quantile oracles,
//! reflected-power Monte Carlo, detector calibration, and allocation
//! equivalence, each at a reduced trial count so the whole suite runs in
//! seconds.

use num_complex::Complex64;
use rand::Rng;

use crate::allocation::{assign_channels, ChannelEnergyLedger};
use crate::config::{derive_constants, SimConfig};
use crate::fading::draw_cn01;
use crate::geometry::Vec3;
use crate::irs::PhaseProfile;
use crate::propagation::{compose_irs, mean_reflected_power_oracle, PathLoss};
use crate::rng::{RngStreams, StreamLabel};
use crate::sensing::{chi_square_cdf, chi_square_quantile, draw_noise_energy, exact_threshold};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckResult { name, passed: true, detail }
    }
    fn fail(name: &'static str, detail: String) -> Self {
        CheckResult { name, passed: false, detail }
    }
}

/// Reference value for the closed-form chi-square quantile check:
/// quantile(0.9, dof=2) = −2 ln(0.1).
pub const CHI2_Q90_DOF2: f64 = 4.605_170_185_988_091;

/// Closed-form quantile check against a caller-supplied reference, so a
/// corrupted constant is observable as a named failure.
pub fn check_quantile_closed_form_against(reference: f64) -> CheckResult {
    const NAME: &str = "quantile-closed-form";
    match chi_square_quantile(0.9, 2) {
        Ok(q) => {
            let rel = (q - reference).abs() / reference.abs();
            if rel <= 1e-9 {
                CheckResult::pass(NAME, format!("chi2q(0.9, 2) = {q:.12} (rel err {rel:.2e})"))
            } else {
                CheckResult::fail(
                    NAME,
                    format!("chi2q(0.9, 2) = {q:.12}, reference {reference:.12}, rel err {rel:.2e}"),
                )
            }
        }
        Err(e) => CheckResult::fail(NAME, format!("quantile evaluation failed: {e}")),
    }
}

pub fn check_quantile_closed_form() -> CheckResult {
    check_quantile_closed_form_against(CHI2_Q90_DOF2)
}

/// CDF∘quantile identity across the dof/probability grid.
pub fn check_quantile_cdf_identity() -> CheckResult {
    const NAME: &str = "quantile-cdf-identity";
    let mut worst = 0.0f64;
    for &dof in &[2u64, 16, 256, 2048] {
        for &p in &[0.01, 0.1, 0.5, 0.9, 0.99] {
            let x = match chi_square_quantile(p, dof) {
                Ok(x) => x,
                Err(e) => return CheckResult::fail(NAME, format!("quantile({p}, {dof}): {e}")),
            };
            let back = match chi_square_cdf(x, dof) {
                Ok(b) => b,
                Err(e) => return CheckResult::fail(NAME, format!("cdf({x}, {dof}): {e}")),
            };
            worst = worst.max((back - p).abs());
        }
    }
    if worst <= 1e-9 {
        CheckResult::pass(NAME, format!("max |cdf(quantile(p)) - p| = {worst:.2e}"))
    } else {
        CheckResult::fail(NAME, format!("max |cdf(quantile(p)) - p| = {worst:.2e} > 1e-9"))
    }
}

/// Empirical false-alarm rate of the exact threshold at M=128, P_fa=0.1.
pub fn check_detector_calibration() -> CheckResult {
    const NAME: &str = "detector-calibration";
    let sigma2 = 1.0;
    let m = 128;
    let pfa = 0.1;
    let trials = 20_000usize;
    let gamma = match exact_threshold(sigma2, m, pfa) {
        Ok(g) => g,
        Err(e) => return CheckResult::fail(NAME, format!("threshold failed: {e}")),
    };
    let mut rng = RngStreams::new(0xC0FFEE).stream(StreamLabel::SensingNoise);
    let hits = (0..trials)
        .filter(|_| draw_noise_energy(&mut rng, m, sigma2) > gamma)
        .count();
    let rate = hits as f64 / trials as f64;
    let sd = (pfa * (1.0 - pfa) / trials as f64).sqrt();
    if (rate - pfa).abs() <= 4.0 * sd {
        CheckResult::pass(NAME, format!("false-alarm rate {rate:.4} for target {pfa} (n={trials})"))
    } else {
        CheckResult::fail(NAME, format!("false-alarm rate {rate:.4} vs target {pfa} ± {:.4}", 4.0 * sd))
    }
}

/// Reduced-trial Monte Carlo of the mean reflected power against the
/// analytic expectation.
pub fn check_reflected_power_mc() -> CheckResult {
    const NAME: &str = "reflected-power-mc";
    let cfg = SimConfig::default();
    let derived = derive_constants(&cfg);
    let pathloss = PathLoss::new(derived.l0, derived.d0, cfg.pathloss_exponent);
    let user = Vec3::new(5.0, -10.0, 1.5);
    let n = derived.element_positions.len();
    let user_dists: Vec<f64> = derived
        .element_positions
        .iter()
        .map(|r| user.distance(*r))
        .collect();
    let oracle = mean_reflected_power_oracle(
        &user_dists,
        &derived.irs_bs_distances,
        &pathloss,
        cfg.reflection_efficiency,
    );
    let phases = PhaseProfile { phases: vec![0.7; n] };
    let mut rng = RngStreams::new(0xBEEF).stream(StreamLabel::NodeFading(0));
    let trials = 2_000usize;
    let mut acc = 0.0;
    for _ in 0..trials {
        let user_coeffs: Vec<Complex64> = (0..n).map(|_| draw_cn01(&mut rng)).collect();
        let bs_coeffs: Vec<Complex64> = (0..n).map(|_| draw_cn01(&mut rng)).collect();
        let h = compose_irs(
            user,
            &derived.element_positions,
            &derived.irs_bs_distances,
            &user_coeffs,
            &bs_coeffs,
            &phases,
            cfg.reflection_efficiency,
            derived.wavelength,
            &pathloss,
        );
        acc += h.norm_sqr();
    }
    let mean = acc / trials as f64;
    let rel = (mean - oracle).abs() / oracle;
    if rel <= 0.10 {
        CheckResult::pass(NAME, format!("MC mean within {:.1}% of analytic value", rel * 100.0))
    } else {
        CheckResult::fail(NAME, format!("MC mean off by {:.1}% (> 10%)", rel * 100.0))
    }
}

/// Sequential assignment vs the independent reference interpreter on random
/// small instances.
pub fn check_allocation_equivalence() -> CheckResult {
    const NAME: &str = "allocation-equivalence";
    let mut rng = RngStreams::new(0xA110C).stream(StreamLabel::SensingNoise);
    for trial in 0..200 {
        let c = rng.gen_range(1..=3usize);
        let k = rng.gen_range(1..=4usize);
        let samples = rng.gen_range(1..=64usize);
        let init: Vec<f64> = (0..c).map(|_| rng.gen_range(0.0..4.0)).collect();
        let threshold = rng.gen_range(0.5..4.0);
        let powers: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..0.3)).collect();

        let mut ledger = ChannelEnergyLedger {
            energies: init.clone(),
            threshold,
            samples,
        };
        let got = assign_channels(&mut ledger, &powers);
        let want = reference_assignment(&init, threshold, samples, &powers);
        if got != want {
            return CheckResult::fail(
                NAME,
                format!("instance {trial}: got {got:?}, reference {want:?}"),
            );
        }
    }
    CheckResult::pass(NAME, "200 random instances match the reference interpreter".into())
}

/// Step-by-step reference interpreter of the assignment rule, independent
/// of the production scan loop.
fn reference_assignment(init: &[f64], threshold: f64, samples: usize, powers: &[f64]) -> Vec<usize> {
    let mut energies = init.to_vec();
    let mut out = Vec::new();
    for &p in powers {
        let below: Vec<usize> = (0..energies.len()).filter(|&c| energies[c] < threshold).collect();
        let chosen = below.first().copied().unwrap_or_else(|| {
            energies
                .iter()
                .enumerate()
                .min_by(|(ia, a), (ib, b)| a.partial_cmp(b).unwrap().then(ia.cmp(ib)))
                .map(|(i, _)| i)
                .unwrap()
        });
        energies[chosen] += samples as f64 * p;
        out.push(chosen);
    }
    out
}

/// Run every check in order.
pub fn run_all_checks() -> Vec<CheckResult> {
    vec![
        check_quantile_closed_form(),
        check_quantile_cdf_identity(),
        check_detector_calibration(),
        check_reflected_power_mc(),
        check_allocation_equivalence(),
    ]
}
