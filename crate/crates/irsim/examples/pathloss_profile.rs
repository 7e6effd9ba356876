//! Large-scale gain profile: direct link vs the two-hop IRS cascade, in dB,
//! as the user walks away from the base station.
//!
//!     cargo run --example pathloss_profile

use irsim::config::{derive_constants, SimConfig};
use irsim::propagation::PathLoss;

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn main() {
    let cfg = SimConfig::default();
    let derived = derive_constants(&cfg);
    let pl = PathLoss::new(derived.l0, derived.d0, cfg.pathloss_exponent);

    println!(
        "lambda = {:.4} mm, d0 = {:.2} mm, L0 = {:.4e}, alpha = {}",
        derived.wavelength * 1e3,
        derived.d0 * 1e3,
        derived.l0,
        cfg.pathloss_exponent
    );
    println!(
        "\n{:>8} {:>14} {:>22}",
        "d (m)", "direct (dB)", "cascade d->30m (dB)"
    );
    for &d in &[0.005, 0.01, 0.1, 1.0, 5.0, 10.0, 20.0, 30.0, 50.0, 70.0] {
        let direct = pl.direct_gain(d);
        let cascade = pl.cascaded_gain(d, 30.0);
        println!("{d:>8.3} {:>14.2} {:>22.2}", db(direct), db(cascade));
    }
    println!("\nnear-field clamp: gains cap at 0 dB once d (or d1·d2) falls below the clamp point.");
    println!(
        "per-element cascade at 30 m sits ~{:.0} dB below the direct link, which is why a\n64-element surface shifts weak users by only a few dB.",
        db(pl.direct_gain(30.0)) - db(pl.cascaded_gain(30.0, 30.0))
    );
}
