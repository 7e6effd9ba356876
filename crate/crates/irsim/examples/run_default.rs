//! Run the default configuration (10 nodes, 8x8 IRS, 200 slots, seed 42)
//! and print the per-node and network summary tables.
//!
//!     cargo run --release --example run_default

use irsim::report::render_stdout_report;
use irsim::{run_simulation, SimConfig};

fn main() {
    let cfg = SimConfig::default();
    let result = run_simulation(&cfg).expect("default config runs");
    print!("{}", render_stdout_report(&result));

    // A couple of slot-level diagnostics from the trace.
    let first_adaptive = &result.records[cfg.window];
    println!(
        "\nslot {} (first adaptive slot): focus user {}, threshold {:.3e} W",
        first_adaptive.slot,
        first_adaptive.focus_user + 1,
        first_adaptive.threshold
    );
    let busiest = result
        .node_summaries
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.focus_fraction.partial_cmp(&b.1.focus_fraction).unwrap())
        .unwrap();
    println!(
        "most focused node: {} ({:.1}% of slots)",
        busiest.0 + 1,
        busiest.1.focus_fraction * 100.0
    );
}
