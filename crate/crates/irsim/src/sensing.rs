//! Energy detection: test statistic, exact chi-square threshold, and the
//! large-sample Gaussian approximation.
//!
//! Under noise only, (2/σ²)·T_c with T_c = Σ|y[m]|² follows a chi-square law
//! with 2M degrees of freedom, so the exact threshold for a target
//! false-alarm probability is γ = (σ²/2)·F⁻¹_{χ²_{2M}}(1−P_fa).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::special::{inv_reg_lower_gamma, normal_quantile, reg_lower_gamma, SpecialError};

/// Energy-detector configuration with its calibrated threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSpec {
    /// Number of complex sensing samples M.
    pub samples: usize,
    /// Target false-alarm probability.
    pub target_pfa: f64,
    /// Noise power σ², W.
    pub noise_power_w: f64,
    /// Exact threshold γ, W-scale energy.
    pub threshold: f64,
}

impl DetectorSpec {
    pub fn new(samples: usize, target_pfa: f64, noise_power_w: f64) -> Result<Self, SpecialError> {
        let threshold = exact_threshold(noise_power_w, samples, target_pfa)?;
        Ok(DetectorSpec { samples, target_pfa, noise_power_w, threshold })
    }
}

/// Chi-square quantile: x with P(T ≤ x) = p for T ~ χ²_dof.
pub fn chi_square_quantile(p: f64, dof: u64) -> Result<f64, SpecialError> {
    if dof == 0 {
        return Err(SpecialError::Domain("dof must be >= 1"));
    }
    Ok(2.0 * inv_reg_lower_gamma(dof as f64 / 2.0, p)?)
}

/// Chi-square CDF at x for dof degrees of freedom.
pub fn chi_square_cdf(x: f64, dof: u64) -> Result<f64, SpecialError> {
    if dof == 0 {
        return Err(SpecialError::Domain("dof must be >= 1"));
    }
    reg_lower_gamma(dof as f64 / 2.0, x / 2.0)
}

/// Exact energy-detection threshold γ = (σ²/2)·F⁻¹_{χ²_{2M}}(1−P_fa).
pub fn exact_threshold(noise_power_w: f64, samples: usize, pfa: f64) -> Result<f64, SpecialError> {
    if samples == 0 {
        return Err(SpecialError::Domain("samples must be >= 1"));
    }
    Ok(noise_power_w / 2.0 * chi_square_quantile(1.0 - pfa, 2 * samples as u64)?)
}

/// Gaussian approximation γ ≈ σ²·(M + √M·z_{1−P_fa}).
pub fn gaussian_threshold(
    noise_power_w: f64,
    samples: usize,
    pfa: f64,
) -> Result<f64, SpecialError> {
    if samples == 0 {
        return Err(SpecialError::Domain("samples must be >= 1"));
    }
    let m = samples as f64;
    Ok(noise_power_w * (m + m.sqrt() * normal_quantile(1.0 - pfa)?))
}

/// Energy statistic T_c = Σ_m |y[m]|².
pub fn energy_statistic(samples: &[Complex64]) -> f64 {
    samples.iter().map(|y| y.norm_sqr()).sum()
}

/// Noise-only energy draw, distributionally (σ²/2)·χ²_{2M}: the sum of 2M
/// squared half-variance Gaussians, identical in law to the statistic of M
/// iid CN(0,σ²) samples.
pub fn draw_noise_energy<R: Rng>(rng: &mut R, samples: usize, noise_power_w: f64) -> f64 {
    let mut acc = 0.0;
    for _ in 0..2 * samples {
        let z: f64 = rng.sample(StandardNormal);
        acc += z * z;
    }
    noise_power_w / 2.0 * acc
}
