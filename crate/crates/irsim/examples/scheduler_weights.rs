//! Inverse-rate priority weighting: feed a synthetic rate history and show
//! how sliding-window averages turn into sampling probabilities.
//!
//!     cargo run --example scheduler_weights

use irsim::scheduler::{priority_weights, sampling_probs, select_focus, RateHistory};
use irsim::rng::{RngStreams, StreamLabel};

fn main() {
    // Three users: starved, middling, strong.
    let per_slot_rates = [[0.2e6, 2.0e6, 20.0e6], [0.0, 1.5e6, 25.0e6], [0.3e6, 2.5e6, 18.0e6]];
    let mut history = RateHistory::new(3, 20);
    for rates in per_slot_rates.iter().cycle().take(12) {
        history.push(rates);
    }

    let avg = history.sliding_avg_rates();
    let weights = priority_weights(&avg, 1e3, 2.0);
    let probs = sampling_probs(&weights);

    println!("{:>5} {:>14} {:>14} {:>8}", "user", "avg rate", "weight", "prob");
    for k in 0..3 {
        println!(
            "{:>5} {:>12.2} Mb {:>14.3e} {:>8.4}",
            k + 1,
            avg[k] / 1e6,
            weights[k],
            probs[k]
        );
    }

    // Sample the focus user a few thousand times past the warm-up window.
    let mut rng = RngStreams::new(7).stream(StreamLabel::Scheduler);
    let mut counts = [0usize; 3];
    let draws = 10_000;
    for _ in 0..draws {
        counts[select_focus(21, 20, 3, Some(&probs), &mut rng).user] += 1;
    }
    println!("\nempirical focus shares over {draws} draws (warm-up over):");
    for k in 0..3 {
        println!("  user {}: {:.3}", k + 1, counts[k] as f64 / draws as f64);
    }
    println!("\nthe starved user dominates: weights go as (rate + epsilon)^-2.");
}
