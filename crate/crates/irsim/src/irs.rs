//! IRS phase control: geometric and CSI-based profiles for the focus user,
//! plus finite-bit quantization.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum PhaseError {
    #[error("phase_bits must be >= 1 (a 0-bit profile collapses every phase)")]
    ZeroBits,
}

/// A per-element phase profile, every entry in [-π, π).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub phases: Vec<f64>,
}

impl PhaseProfile {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Wrap an angle into [-π, π). Values congruent to π map to -π.
pub fn wrap_phase(x: f64) -> f64 {
    let wrapped = x - TAU * ((x + PI) / TAU).floor();
    // Guard the upper edge against floating rounding.
    if wrapped >= PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

/// Geometric alignment: cancel the deterministic path-length phase of the
/// focus user, ψ_n = wrap(2π (d_{k*n} + d_nb) / λ).
pub fn geometric_phases(
    focus_position: Vec3,
    element_positions: &[Vec3],
    irs_bs_distances: &[f64],
    wavelength: f64,
) -> PhaseProfile {
    assert_eq!(
        element_positions.len(),
        irs_bs_distances.len(),
        "element/distance length mismatch"
    );
    let phases = element_positions
        .iter()
        .zip(irs_bs_distances)
        .map(|(r_n, d_nb)| {
            let d_kn = focus_position.distance(*r_n);
            wrap_phase(TAU * (d_kn + d_nb) / wavelength)
        })
        .collect();
    PhaseProfile { phases }
}

/// Perfect-CSI alignment: additionally cancel the small-scale phases,
/// ψ_n = wrap(2π (d_{k*n} + d_nb) / λ − arg g̃_{k*,n} − arg g̃_{n,b}).
pub fn csi_phases(
    focus_position: Vec3,
    element_positions: &[Vec3],
    irs_bs_distances: &[f64],
    wavelength: f64,
    user_irs_coeffs: &[Complex64],
    irs_bs_coeffs: &[Complex64],
) -> PhaseProfile {
    let n = element_positions.len();
    assert_eq!(irs_bs_distances.len(), n, "element/distance length mismatch");
    assert_eq!(user_irs_coeffs.len(), n, "user-IRS coefficient length mismatch");
    assert_eq!(irs_bs_coeffs.len(), n, "IRS-BS coefficient length mismatch");
    let phases = (0..n)
        .map(|i| {
            let d_kn = focus_position.distance(element_positions[i]);
            wrap_phase(
                TAU * (d_kn + irs_bs_distances[i]) / wavelength
                    - user_irs_coeffs[i].arg()
                    - irs_bs_coeffs[i].arg(),
            )
        })
        .collect();
    PhaseProfile { phases }
}

/// Map each phase to the nearest of the 2^b levels L_i = -π + 2πi/2^b,
/// using circular distance (the gap between the top level and L_0 wraps).
/// Exact ties resolve to the lower level index.
pub fn quantize_phases(profile: &PhaseProfile, bits: u32) -> Result<PhaseProfile, PhaseError> {
    if bits == 0 {
        return Err(PhaseError::ZeroBits);
    }
    let levels = 1u64 << bits;
    let step = TAU / levels as f64;
    let phases = profile
        .phases
        .iter()
        .map(|&psi| {
            let t = (wrap_phase(psi) + PI) / step; // in [0, levels)
            let base = t.floor();
            let frac = t - base;
            let k = if frac > 0.5 {
                base as u64 + 1
            } else if frac < 0.5 {
                base as u64
            } else {
                // Tie: candidates are base and base+1 (mod levels);
                // keep whichever has the smaller level index.
                let lo = base as u64 % levels;
                let hi = (base as u64 + 1) % levels;
                if hi < lo {
                    base as u64 + 1
                } else {
                    base as u64
                }
            };
            -PI + (k % levels) as f64 * step
        })
        .collect();
    Ok(PhaseProfile { phases })
}

/// Circular distance between two angles, in [0, π].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}
