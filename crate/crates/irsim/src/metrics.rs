//! Per-slot SINR/rate computation and end-of-run summaries.
//!
//! Average SINR is formed in the linear domain and converted to dB
//! afterwards; an all-zero trace reports -inf dB.

/// Per-node end-of-run statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSummary {
    /// 10·log10 of the time-mean linear SINR; -inf for an all-zero trace.
    pub avg_sinr_db: f64,
    /// Time-mean instantaneous rate, bit/s.
    pub avg_rate_bps: f64,
    /// Fraction of slots this node was the IRS focus.
    pub focus_fraction: f64,
}

/// Network-level end-of-run statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSummary {
    /// Time-mean of the per-slot sum rate, bit/s.
    pub avg_sum_rate_bps: f64,
    /// Jain's fairness index of the per-node average rates.
    pub jain_index: f64,
    /// min/max ratio of per-node average rates (0 when every rate is 0).
    pub min_max_ratio: f64,
    /// 0-based indices of nodes whose time-mean linear SINR falls below the
    /// decode threshold.
    pub below_threshold_nodes: Vec<usize>,
}

/// Instantaneous SINR of user `k`: own power over co-channel interference
/// plus noise.
pub fn compute_sinr(rx_powers_w: &[f64], assignment: &[usize], k: usize, noise_power_w: f64) -> f64 {
    assert_eq!(rx_powers_w.len(), assignment.len(), "power/assignment length mismatch");
    let interference: f64 = rx_powers_w
        .iter()
        .zip(assignment)
        .enumerate()
        .filter(|(j, (_, &cj))| *j != k && cj == assignment[k])
        .map(|(_, (&p, _))| p)
        .sum();
    rx_powers_w[k] / (interference + noise_power_w)
}

/// Instantaneous rate B·log2(1+SINR), zeroed below the decode threshold.
pub fn compute_rate(sinr: f64, bandwidth_hz: f64, decode_threshold_linear: f64) -> f64 {
    if sinr >= decode_threshold_linear {
        bandwidth_hz * (1.0 + sinr).log2()
    } else {
        0.0
    }
}

/// Linear-domain average SINR in dB: 10·log10(mean of linear values).
pub fn avg_sinr_db(sinr_trace: &[f64]) -> f64 {
    if sinr_trace.is_empty() {
        return f64::NEG_INFINITY;
    }
    let mean = sinr_trace.iter().sum::<f64>() / sinr_trace.len() as f64;
    if mean <= 0.0 {
        f64::NEG_INFINITY
    } else {
        10.0 * mean.log10()
    }
}

/// Jain's fairness index (Σr)²/(K·Σr²); 0 when every rate is zero.
pub fn jain_index(rates: &[f64]) -> f64 {
    let sum: f64 = rates.iter().sum();
    let sum_sq: f64 = rates.iter().map(|r| r * r).sum();
    if sum_sq == 0.0 {
        0.0
    } else {
        sum * sum / (rates.len() as f64 * sum_sq)
    }
}

/// Fold a run trace into per-node and network summaries.
///
/// `sinr[t][k]` and `rates[t][k]` are slot-major; `focus[t]` is the 0-based
/// focus user of slot t.
pub fn summarize(
    sinr: &[Vec<f64>],
    rates: &[Vec<f64>],
    focus: &[usize],
    decode_threshold_linear: f64,
) -> (Vec<NodeSummary>, NetworkSummary) {
    let t_total = sinr.len();
    assert!(t_total > 0, "empty trace");
    assert_eq!(rates.len(), t_total);
    assert_eq!(focus.len(), t_total);
    let k_total = sinr[0].len();

    let mut focus_counts = vec![0usize; k_total];
    for &f in focus {
        focus_counts[f] += 1;
    }

    let mut node_summaries = Vec::with_capacity(k_total);
    let mut avg_rates = Vec::with_capacity(k_total);
    let mut below = Vec::new();
    for k in 0..k_total {
        let sinr_trace: Vec<f64> = sinr.iter().map(|row| row[k]).collect();
        let mean_linear = sinr_trace.iter().sum::<f64>() / t_total as f64;
        let avg_rate = rates.iter().map(|row| row[k]).sum::<f64>() / t_total as f64;
        if mean_linear < decode_threshold_linear {
            below.push(k);
        }
        avg_rates.push(avg_rate);
        node_summaries.push(NodeSummary {
            avg_sinr_db: avg_sinr_db(&sinr_trace),
            avg_rate_bps: avg_rate,
            focus_fraction: focus_counts[k] as f64 / t_total as f64,
        });
    }

    let avg_sum_rate_bps = rates
        .iter()
        .map(|row| row.iter().sum::<f64>())
        .sum::<f64>()
        / t_total as f64;
    let max_rate = avg_rates.iter().cloned().fold(0.0, f64::max);
    let min_rate = avg_rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let min_max_ratio = if max_rate > 0.0 { min_rate / max_rate } else { 0.0 };

    let network = NetworkSummary {
        avg_sum_rate_bps,
        jain_index: jain_index(&avg_rates),
        min_max_ratio,
        below_threshold_nodes: below,
    };
    (node_summaries, network)
}
