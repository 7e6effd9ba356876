//! File outputs for a run: machine-readable summary, per-slot trace,
//! per-node table, and plot-ready data files.
//!
//! Every file is a pure function of the run result (no timestamps, floats
//! at 17 significant digits), so re-running with the same config and seed
//! reproduces each file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::config::fmt_f64;
use crate::engine::{BatchResult, RunResult};

/// File names inside an output directory.
pub const SUMMARY_FILE: &str = "summary.txt";
pub const TRACE_FILE: &str = "trace.csv";
pub const NODES_FILE: &str = "nodes.csv";
pub const PLOT_SUM_RATE_FILE: &str = "plot_sum_rate.csv";
pub const PLOT_NODE_RATES_FILE: &str = "plot_node_rates.csv";
pub const PLOT_SINR_FOCUS_FILE: &str = "plot_sinr_focus.csv";
pub const AGGREGATE_FILE: &str = "aggregate.txt";

/// All output files of one run.
pub const RUN_FILES: [&str; 6] = [
    SUMMARY_FILE,
    TRACE_FILE,
    NODES_FILE,
    PLOT_SUM_RATE_FILE,
    PLOT_NODE_RATES_FILE,
    PLOT_SINR_FOCUS_FILE,
];

fn db10(x: f64) -> f64 {
    if x > 0.0 {
        10.0 * x.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Summary file: stable keys, one `key = value` per line.
pub fn render_summary(result: &RunResult) -> String {
    let mut s = String::new();
    writeln!(s, "seed = {}", result.config.seed).unwrap();
    writeln!(s, "config_hash = {:016x}", result.config_hash).unwrap();
    writeln!(s, "num_slots = {}", result.config.num_slots).unwrap();
    writeln!(s, "num_nodes = {}", result.config.num_nodes).unwrap();
    writeln!(s, "num_channels = {}", result.config.num_channels).unwrap();
    writeln!(s, "phase_mode = {}", result.config.phase_mode.as_str()).unwrap();
    writeln!(s, "avg_sum_rate_bps = {}", fmt_f64(result.network.avg_sum_rate_bps)).unwrap();
    writeln!(s, "jain_index = {}", fmt_f64(result.network.jain_index)).unwrap();
    writeln!(s, "min_max_ratio = {}", fmt_f64(result.network.min_max_ratio)).unwrap();
    let below: Vec<String> = result
        .network
        .below_threshold_nodes
        .iter()
        .map(|k| (k + 1).to_string())
        .collect();
    writeln!(s, "below_threshold_nodes = {}", below.join(",")).unwrap();
    s
}

/// Trace CSV: `slot,focus_user`, then per-user channel, SINR (dB), and
/// rate (bit/s) columns. Node and channel numbering is 1-based.
pub fn render_trace(result: &RunResult) -> String {
    let k = result.config.num_nodes;
    let mut s = String::new();
    s.push_str("slot,focus_user");
    for i in 1..=k {
        write!(s, ",channel_{i}").unwrap();
    }
    for i in 1..=k {
        write!(s, ",sinr_db_{i}").unwrap();
    }
    for i in 1..=k {
        write!(s, ",rate_bps_{i}").unwrap();
    }
    s.push('\n');
    for r in &result.records {
        write!(s, "{},{}", r.slot, r.focus_user + 1).unwrap();
        for &c in &r.assignment {
            write!(s, ",{}", c + 1).unwrap();
        }
        for &x in &r.sinr {
            write!(s, ",{}", fmt_f64(db10(x))).unwrap();
        }
        for &x in &r.rate_bps {
            write!(s, ",{}", fmt_f64(x)).unwrap();
        }
        s.push('\n');
    }
    s
}

/// Per-node table: node, average SINR (dB), average rate (Mbps), focus (%).
pub fn render_nodes(result: &RunResult) -> String {
    let mut s = String::from("node,avg_sinr_db,avg_rate_mbps,focus_percent\n");
    for (k, n) in result.node_summaries.iter().enumerate() {
        writeln!(
            s,
            "{},{},{},{}",
            k + 1,
            fmt_f64(n.avg_sinr_db),
            fmt_f64(n.avg_rate_bps / 1e6),
            fmt_f64(n.focus_fraction * 100.0)
        )
        .unwrap();
    }
    s
}

/// Plot data: network sum rate per slot.
pub fn render_plot_sum_rate(result: &RunResult) -> String {
    let mut s = String::from("slot,sum_rate_bps\n");
    for r in &result.records {
        let total: f64 = r.rate_bps.iter().sum();
        writeln!(s, "{},{}", r.slot, fmt_f64(total)).unwrap();
    }
    s
}

/// Plot data: per-node rate per slot.
pub fn render_plot_node_rates(result: &RunResult) -> String {
    let k = result.config.num_nodes;
    let mut s = String::from("slot");
    for i in 1..=k {
        write!(s, ",rate_bps_{i}").unwrap();
    }
    s.push('\n');
    for r in &result.records {
        write!(s, "{}", r.slot).unwrap();
        for &x in &r.rate_bps {
            write!(s, ",{}", fmt_f64(x)).unwrap();
        }
        s.push('\n');
    }
    s
}

/// Plot data: per-node average SINR with the focus-time bars.
pub fn render_plot_sinr_focus(result: &RunResult) -> String {
    let mut s = String::from("node,avg_sinr_db,focus_percent\n");
    for (k, n) in result.node_summaries.iter().enumerate() {
        writeln!(
            s,
            "{},{},{}",
            k + 1,
            fmt_f64(n.avg_sinr_db),
            fmt_f64(n.focus_fraction * 100.0)
        )
        .unwrap();
    }
    s
}

/// Write the full output bundle into `dir` (created if missing).
/// Returns the paths written.
pub fn write_bundle(result: &RunResult, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let contents = [
        (SUMMARY_FILE, render_summary(result)),
        (TRACE_FILE, render_trace(result)),
        (NODES_FILE, render_nodes(result)),
        (PLOT_SUM_RATE_FILE, render_plot_sum_rate(result)),
        (PLOT_NODE_RATES_FILE, render_plot_node_rates(result)),
        (PLOT_SINR_FOCUS_FILE, render_plot_sinr_focus(result)),
    ];
    let mut paths = Vec::with_capacity(contents.len());
    for (name, body) in contents {
        let path = dir.join(name);
        fs::write(&path, body)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Aggregate file for a batch: mean and population stddev per metric.
pub fn render_aggregate(batch: &BatchResult, seeds: &[u64]) -> String {
    let a = &batch.aggregate;
    let mut s = String::new();
    let seed_list: Vec<String> = seeds.iter().map(|v| v.to_string()).collect();
    writeln!(s, "seeds = {}", seed_list.join(",")).unwrap();
    writeln!(s, "num_runs = {}", batch.runs.len()).unwrap();
    writeln!(s, "avg_sum_rate_bps_mean = {}", fmt_f64(a.avg_sum_rate_bps.mean)).unwrap();
    writeln!(s, "avg_sum_rate_bps_stddev = {}", fmt_f64(a.avg_sum_rate_bps.stddev)).unwrap();
    writeln!(s, "jain_index_mean = {}", fmt_f64(a.jain_index.mean)).unwrap();
    writeln!(s, "jain_index_stddev = {}", fmt_f64(a.jain_index.stddev)).unwrap();
    writeln!(s, "min_max_ratio_mean = {}", fmt_f64(a.min_max_ratio.mean)).unwrap();
    writeln!(s, "min_max_ratio_stddev = {}", fmt_f64(a.min_max_ratio.stddev)).unwrap();
    writeln!(s, "below_threshold_count_mean = {}", fmt_f64(a.below_threshold_count.mean)).unwrap();
    writeln!(s, "below_threshold_count_stddev = {}", fmt_f64(a.below_threshold_count.stddev)).unwrap();
    s
}

/// Human-readable stdout report mirroring the per-node and network tables.
pub fn render_stdout_report(result: &RunResult) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "run: seed={} slots={} nodes={} channels={} mode={}",
        result.config.seed,
        result.config.num_slots,
        result.config.num_nodes,
        result.config.num_channels,
        result.config.phase_mode.as_str()
    )
    .unwrap();
    writeln!(s).unwrap();
    writeln!(s, "node   avg SINR (dB)   avg rate (Mbps)   IRS focus (%)").unwrap();
    for (k, n) in result.node_summaries.iter().enumerate() {
        let sinr = if n.avg_sinr_db == f64::NEG_INFINITY {
            "   -inf".to_string()
        } else {
            format!("{:7.2}", n.avg_sinr_db)
        };
        writeln!(
            s,
            "{:>4}   {:>13}   {:>15.2}   {:>13.1}",
            k + 1,
            sinr,
            n.avg_rate_bps / 1e6,
            n.focus_fraction * 100.0
        )
        .unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "average sum rate      : {:.2} Mbps", result.network.avg_sum_rate_bps / 1e6).unwrap();
    writeln!(s, "Jain's fairness index : {:.3}", result.network.jain_index).unwrap();
    writeln!(s, "min/max rate ratio    : {:.3}", result.network.min_max_ratio).unwrap();
    let below: Vec<String> = result
        .network
        .below_threshold_nodes
        .iter()
        .map(|k| (k + 1).to_string())
        .collect();
    writeln!(
        s,
        "below decode threshold: {} ({})",
        below.len(),
        if below.is_empty() { "none".to_string() } else { below.join(", ") }
    )
    .unwrap();
    s
}

/// Parse a trace CSV back into (slot, focus, channels, sinr_db, rate_bps)
/// rows. Used by round-trip tests and available to downstream tooling.
pub fn parse_trace(
    text: &str,
) -> Result<Vec<(usize, usize, Vec<usize>, Vec<f64>, Vec<f64>)>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty trace")?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 2 || (cols.len() - 2) % 3 != 0 {
        return Err(format!("malformed trace header: {header}"));
    }
    let k = (cols.len() - 2) / 3;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(format!("row {} has {} fields, expected {}", i + 2, fields.len(), cols.len()));
        }
        let slot: usize = fields[0].parse().map_err(|e| format!("row {}: {e}", i + 2))?;
        let focus: usize = fields[1].parse().map_err(|e| format!("row {}: {e}", i + 2))?;
        let parse_f = |s: &str| -> Result<f64, String> {
            s.parse::<f64>().map_err(|e| format!("row {}: {e}", i + 2))
        };
        let channels: Vec<usize> = fields[2..2 + k]
            .iter()
            .map(|s| s.parse::<usize>().map_err(|e| format!("row {}: {e}", i + 2)))
            .collect::<Result<_, _>>()?;
        let sinr_db: Vec<f64> = fields[2 + k..2 + 2 * k]
            .iter()
            .map(|s| parse_f(s))
            .collect::<Result<_, _>>()?;
        let rates: Vec<f64> = fields[2 + 2 * k..]
            .iter()
            .map(|s| parse_f(s))
            .collect::<Result<_, _>>()?;
        rows.push((slot, focus, channels, sinr_db, rates));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SimConfig;
    use crate::engine::run_simulation;

    fn tiny_run() -> RunResult {
        let mut cfg = SimConfig::default();
        cfg.num_slots = 12;
        cfg.window = 4;
        cfg.num_nodes = 3;
        run_simulation(&cfg).unwrap()
    }

    #[test]
    fn summary_contains_stable_keys() {
        let result = tiny_run();
        let text = render_summary(&result);
        for key in [
            "avg_sum_rate_bps = ",
            "jain_index = ",
            "min_max_ratio = ",
            "below_threshold_nodes = ",
            "seed = ",
            "config_hash = ",
        ] {
            assert!(text.contains(key), "missing `{key}` in summary:\n{text}");
        }
    }

    #[test]
    fn trace_round_trips_through_parser() {
        let result = tiny_run();
        let text = render_trace(&result);
        let rows = parse_trace(&text).unwrap();
        assert_eq!(rows.len(), result.records.len());
        for (row, rec) in rows.iter().zip(&result.records) {
            assert_eq!(row.0, rec.slot);
            assert_eq!(row.1, rec.focus_user + 1);
            let channels: Vec<usize> = rec.assignment.iter().map(|c| c + 1).collect();
            assert_eq!(row.2, channels);
            for (parsed, &s) in row.3.iter().zip(&rec.sinr) {
                let expected = if s > 0.0 { 10.0 * s.log10() } else { f64::NEG_INFINITY };
                assert_eq!(*parsed, expected, "sinr dB must round-trip exactly");
            }
            for (parsed, &r) in row.4.iter().zip(&rec.rate_bps) {
                assert_eq!(*parsed, r, "rates must round-trip exactly");
            }
        }
    }

    #[test]
    fn bundle_files_written_and_deterministic() {
        let result = tiny_run();
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        write_bundle(&result, dir1.path()).unwrap();
        write_bundle(&result, dir2.path()).unwrap();
        for name in RUN_FILES {
            let a = std::fs::read(dir1.path().join(name)).unwrap();
            let b = std::fs::read(dir2.path().join(name)).unwrap();
            assert!(!a.is_empty());
            assert_eq!(a, b, "{name} must be byte-identical");
        }
    }

    #[test]
    fn neg_infinity_serializes_as_minus_inf() {
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!("-inf".parse::<f64>().unwrap(), f64::NEG_INFINITY);
    }
}
