//! Multi-seed batch: run the default scenario over a seed range and report
//! mean ± stddev of the network metrics.
//!
//!     cargo run --release --example batch_seeds

use irsim::{run_batch, SimConfig};

fn main() {
    let cfg = SimConfig::default();
    let seeds: Vec<u64> = (42..52).collect();
    let batch = run_batch(&cfg, &seeds).expect("batch runs");

    println!("seed   sum rate (Mbps)   Jain   min/max   below-threshold nodes");
    for (seed, run) in seeds.iter().zip(&batch.runs) {
        let below: Vec<String> =
            run.network.below_threshold_nodes.iter().map(|k| (k + 1).to_string()).collect();
        println!(
            "{seed:>4}   {:>15.2}   {:.3}   {:>7.4}   {}",
            run.network.avg_sum_rate_bps / 1e6,
            run.network.jain_index,
            run.network.min_max_ratio,
            if below.is_empty() { "-".into() } else { below.join(",") }
        );
    }
    let a = &batch.aggregate;
    println!("\naggregate over {} seeds:", seeds.len());
    println!(
        "  sum rate  {:.2} ± {:.2} Mbps",
        a.avg_sum_rate_bps.mean / 1e6,
        a.avg_sum_rate_bps.stddev / 1e6
    );
    println!("  Jain      {:.3} ± {:.3}", a.jain_index.mean, a.jain_index.stddev);
    println!("  min/max   {:.4} ± {:.4}", a.min_max_ratio.mean, a.min_max_ratio.stddev);
    println!(
        "  below-threshold count {:.1} ± {:.1}",
        a.below_threshold_count.mean, a.below_threshold_count.stddev
    );
}
