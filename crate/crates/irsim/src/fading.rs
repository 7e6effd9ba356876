//! Small-scale fading state: coherence-time-gated redraws plus Doppler
//! phase rotation between redraws.
//!
//! Per node, the direct coefficient and the N user-to-IRS coefficients share
//! one coherence clock and are redrawn together as fresh CN(0,1) variables.
//! The N IRS-to-BS coefficients are drawn once per run and never change.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::Vec3;
use crate::mobility::NodeKinematics;

/// Doppler proxy constant: T_coh ≈ 0.423 / f_{D,max}.
pub const COHERENCE_FACTOR: f64 = 0.423;

/// Per-node small-scale state.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingState {
    /// Direct-link coefficient h̃_{k,d}.
    pub direct: Complex64,
    /// User-to-IRS coefficients g̃_{k,n}, one per element.
    pub user_irs: Vec<Complex64>,
    /// Time of the last redraw, s.
    pub last_redraw_s: f64,
    /// Time of the last update call; Doppler rotation covers the gap
    /// between consecutive calls.
    pub last_update_s: f64,
}

/// Quasi-static IRS-to-BS coefficients g̃_{n,b}, shared by all nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticIrsBsFading {
    pub coeffs: Vec<Complex64>,
}

/// Geometry inputs the fading update needs.
#[derive(Debug, Clone, Copy)]
pub struct FadingGeometry {
    pub bs_position: Vec3,
    pub irs_center: Vec3,
    pub wavelength: f64,
    pub coherence_floor_s: f64,
}

/// One CN(0,1) draw: independent N(0, 1/2) real and imaginary parts.
pub fn draw_cn01<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

impl FadingState {
    /// Fresh state at time `now`: direct coefficient first, then the N
    /// user-to-IRS coefficients in element order.
    pub fn draw<R: Rng>(rng: &mut R, num_elements: usize, now: f64) -> Self {
        let direct = draw_cn01(rng);
        let user_irs = (0..num_elements).map(|_| draw_cn01(rng)).collect();
        FadingState { direct, user_irs, last_redraw_s: now, last_update_s: now }
    }
}

impl StaticIrsBsFading {
    pub fn draw<R: Rng>(rng: &mut R, num_elements: usize) -> Self {
        StaticIrsBsFading {
            coeffs: (0..num_elements).map(|_| draw_cn01(rng)).collect(),
        }
    }
}

/// Coherence-time proxy max(floor, 0.423·λ/speed); infinite for a
/// stationary node (no redraw ever).
pub fn coherence_time(speed: f64, wavelength: f64, floor: f64) -> f64 {
    debug_assert!(speed >= 0.0 && wavelength > 0.0 && floor > 0.0);
    if speed == 0.0 {
        f64::INFINITY
    } else {
        (COHERENCE_FACTOR * wavelength / speed).max(floor)
    }
}

/// Doppler shift v·k̂/λ for a unit propagation direction k̂.
pub fn doppler_shift(velocity: Vec3, unit_dir: Vec3, wavelength: f64) -> f64 {
    assert!(
        (unit_dir.norm() - 1.0).abs() <= 1e-9,
        "doppler_shift requires a unit direction, got norm {}",
        unit_dir.norm()
    );
    velocity.dot(unit_dir) / wavelength
}

/// Rotate a coefficient by exp(j 2π f_D Δt); magnitude preserved.
pub fn doppler_advance(coeff: Complex64, doppler_hz: f64, dt: f64) -> Complex64 {
    coeff * Complex64::from_polar(1.0, std::f64::consts::TAU * doppler_hz * dt)
}

/// Advance one node's fading to time `now`.
///
/// If the coherence proxy has elapsed since the last redraw, every
/// coefficient is redrawn fresh; otherwise the direct coefficient rotates
/// with the Doppler along the node→BS direction and all user-to-IRS
/// coefficients rotate with one shared Doppler along node→IRS-centre.
pub fn update_fading<R: Rng>(
    state: &mut FadingState,
    node: &NodeKinematics,
    now: f64,
    geometry: &FadingGeometry,
    rng: &mut R,
) {
    let speed = node.speed();
    let t_coh = coherence_time(speed, geometry.wavelength, geometry.coherence_floor_s);
    if now - state.last_redraw_s > t_coh {
        *state = FadingState::draw(rng, state.user_irs.len(), now);
        return;
    }
    let dt = now - state.last_update_s;
    if let Some(dir) = node.position.unit_towards(geometry.bs_position) {
        let f_d = doppler_shift(node.velocity, dir, geometry.wavelength);
        state.direct = doppler_advance(state.direct, f_d, dt);
    }
    if let Some(dir) = node.position.unit_towards(geometry.irs_center) {
        let f_d = doppler_shift(node.velocity, dir, geometry.wavelength);
        let rot = Complex64::from_polar(1.0, std::f64::consts::TAU * f_d * dt);
        for g in &mut state.user_irs {
            *g *= rot;
        }
    }
    state.last_update_s = now;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngStreams, StreamLabel};
    use approx::assert_relative_eq;

    const LAMBDA: f64 = 0.085_654_988;

    fn geometry() -> FadingGeometry {
        FadingGeometry {
            bs_position: Vec3::new(0.0, 0.0, 10.0),
            irs_center: Vec3::new(30.0, 0.0, 8.0),
            wavelength: LAMBDA,
            coherence_floor_s: 1e-3,
        }
    }

    #[test]
    fn coherence_time_reference_value() {
        // speed 3 m/s: f_D,max = 35.0242 Hz, T_coh = 0.423/35.0242.
        let t = coherence_time(3.0, LAMBDA, 1e-3);
        assert_relative_eq!(t, 0.012_077_353_308, max_relative = 1e-9);
    }

    #[test]
    fn coherence_time_stationary_is_infinite() {
        assert_eq!(coherence_time(0.0, LAMBDA, 1e-3), f64::INFINITY);
    }

    #[test]
    fn coherence_time_floor_clamp() {
        assert_eq!(coherence_time(1e6, LAMBDA, 1e-3), 1e-3);
    }

    #[test]
    fn doppler_shift_aligned_and_oblique() {
        let v = Vec3::new(3.0, 0.0, 0.0);
        let aligned = doppler_shift(v, Vec3::new(1.0, 0.0, 0.0), LAMBDA);
        assert_relative_eq!(aligned, 35.024_229_995_805_97, max_relative = 1e-9);
        // Perpendicular direction gives zero shift.
        assert_eq!(doppler_shift(v, Vec3::new(0.0, 1.0, 0.0), LAMBDA), 0.0);
        // cos 60° halves the aligned value.
        let oblique = doppler_shift(v, Vec3::new(0.5, 3f64.sqrt() / 2.0, 0.0), LAMBDA);
        assert_relative_eq!(oblique, aligned / 2.0, max_relative = 1e-9);
    }

    #[test]
    #[should_panic(expected = "unit direction")]
    fn doppler_shift_rejects_non_unit_direction() {
        doppler_shift(Vec3::new(1.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 0.0), LAMBDA);
    }

    #[test]
    fn doppler_advance_identities() {
        let c = Complex64::new(0.6, -0.8);
        assert_eq!(doppler_advance(c, 0.0, 0.005), c);
        // f_D · Δt = 1/2 rotates by π.
        let negated = doppler_advance(c, 100.0, 0.005);
        assert_relative_eq!(negated.re, -c.re, max_relative = 1e-12);
        assert_relative_eq!(negated.im, -c.im, max_relative = 1e-12);
    }

    #[test]
    fn doppler_advance_preserves_magnitude() {
        let mut rng = RngStreams::new(5).stream(StreamLabel::NodeFading(0));
        for _ in 0..10_000 {
            let c = draw_cn01(&mut rng);
            let f: f64 = rng.gen_range(-500.0..500.0);
            let dt: f64 = rng.gen_range(0.0..0.1);
            let out = doppler_advance(c, f, dt);
            assert!((out.norm() - c.norm()).abs() <= 1e-12 * (1.0 + c.norm()));
        }
    }

    #[test]
    fn redraw_replaces_all_coefficients() {
        let mut rng = RngStreams::new(11).stream(StreamLabel::NodeFading(0));
        let mut state = FadingState::draw(&mut rng, 8, 0.0);
        let before = state.clone();
        let node = NodeKinematics {
            position: Vec3::new(5.0, 5.0, 1.0),
            velocity: Vec3::new(3.0, 0.0, 0.0),
        };
        // Elapsed time just above T_coh for 3 m/s forces a redraw.
        let now = coherence_time(3.0, LAMBDA, 1e-3) + 1e-6;
        update_fading(&mut state, &node, now, &geometry(), &mut rng);
        assert_eq!(state.last_redraw_s, now);
        assert_ne!(state.direct, before.direct);
        assert!(state.user_irs.iter().zip(&before.user_irs).any(|(a, b)| a != b));
    }

    #[test]
    fn stationary_node_never_changes() {
        let mut rng = RngStreams::new(12).stream(StreamLabel::NodeFading(1));
        let mut state = FadingState::draw(&mut rng, 8, 0.0);
        let before = state.clone();
        let node = NodeKinematics {
            position: Vec3::new(5.0, 5.0, 1.0),
            velocity: Vec3::ZERO,
        };
        for slot in 1..=500 {
            update_fading(&mut state, &node, slot as f64 * 0.005, &geometry(), &mut rng);
        }
        assert_eq!(state.direct, before.direct);
        assert_eq!(state.user_irs, before.user_irs);
    }

    #[test]
    fn rotation_matches_manual_doppler_multiply() {
        let mut rng = RngStreams::new(13).stream(StreamLabel::NodeFading(2));
        let mut state = FadingState::draw(&mut rng, 4, 0.0);
        let before = state.clone();
        let node = NodeKinematics {
            position: Vec3::new(5.0, -5.0, 1.0),
            velocity: Vec3::new(0.3, 0.4, 0.0), // slow: T_coh >> one slot
        };
        let dt = 0.005;
        update_fading(&mut state, &node, dt, &geometry(), &mut rng);

        let geom = geometry();
        let dir_bs = node.position.unit_towards(geom.bs_position).unwrap();
        let f_bs = doppler_shift(node.velocity, dir_bs, LAMBDA);
        let expected_direct = before.direct * Complex64::from_polar(1.0, std::f64::consts::TAU * f_bs * dt);
        assert_relative_eq!(state.direct.re, expected_direct.re, max_relative = 1e-12);
        assert_relative_eq!(state.direct.im, expected_direct.im, max_relative = 1e-12);

        let dir_irs = node.position.unit_towards(geom.irs_center).unwrap();
        let f_irs = doppler_shift(node.velocity, dir_irs, LAMBDA);
        for (g, g0) in state.user_irs.iter().zip(&before.user_irs) {
            let expected = g0 * Complex64::from_polar(1.0, std::f64::consts::TAU * f_irs * dt);
            assert_relative_eq!(g.re, expected.re, max_relative = 1e-12);
            assert!((g.norm() - g0.norm()).abs() < 1e-13);
        }
    }

    #[test]
    fn cn01_statistics() {
        // Sample mean magnitude < 0.02 and E|c|² within 5% of 1 over 1e5 draws.
        let mut rng = RngStreams::new(1).stream(StreamLabel::NodeFading(3));
        let n = 100_000;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let c = draw_cn01(&mut rng);
            sum += c;
            sum_sq += c.norm_sqr();
        }
        let mean = sum / n as f64;
        assert!(mean.norm() < 0.02, "sample mean magnitude {}", mean.norm());
        let var = sum_sq / n as f64;
        assert!((var - 1.0).abs() < 0.05, "sample E|c|² = {var}");
    }
}
