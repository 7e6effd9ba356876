//! Fading evolution for one moving node: Doppler phase rotation between
//! redraws and fresh CN(0,1) redraws when the coherence proxy elapses.
//!
//!     cargo run --example fading_coherence

use irsim::config::{derive_constants, SimConfig};
use irsim::fading::{coherence_time, update_fading, FadingGeometry, FadingState};
use irsim::geometry::Vec3;
use irsim::mobility::NodeKinematics;
use irsim::rng::{RngStreams, StreamLabel};

fn main() {
    let cfg = SimConfig::default();
    let derived = derive_constants(&cfg);
    let geometry = FadingGeometry {
        bs_position: cfg.bs_position,
        irs_center: cfg.irs_center,
        wavelength: derived.wavelength,
        coherence_floor_s: cfg.coherence_floor_s,
    };
    let node = NodeKinematics {
        position: Vec3::new(12.0, -4.0, 1.5),
        velocity: Vec3::new(2.1, 1.4, 0.0),
    };
    let t_coh = coherence_time(node.speed(), derived.wavelength, cfg.coherence_floor_s);
    println!(
        "speed {:.2} m/s -> max Doppler {:.2} Hz -> coherence proxy {:.2} ms ({:.1} slots)",
        node.speed(),
        node.speed() / derived.wavelength,
        t_coh * 1e3,
        t_coh / cfg.slot_duration_s
    );

    let mut rng = RngStreams::new(cfg.seed).stream(StreamLabel::NodeFading(0));
    let mut state = FadingState::draw(&mut rng, cfg.num_elements(), 0.0);
    println!("\n{:>5} {:>9} {:>9} {:>9} {:>8}", "slot", "|h~|", "arg h~", "redraw@s", "event");
    let mut last = state.last_redraw_s;
    for t in 1..=16usize {
        let now = t as f64 * cfg.slot_duration_s;
        update_fading(&mut state, &node, now, &geometry, &mut rng);
        let event = if state.last_redraw_s != last { "redraw" } else { "rotate" };
        last = state.last_redraw_s;
        println!(
            "{t:>5} {:>9.4} {:>9.4} {:>9.3} {:>8}",
            state.direct.norm(),
            state.direct.arg(),
            state.last_redraw_s,
            event
        );
    }
    println!("\nmagnitude is constant between redraws; only the phase rotates.");
}
