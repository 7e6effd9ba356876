//! Focus-user selection: round-robin warm-up, then inverse-rate weighted
//! random sampling from probabilities formed over a sliding rate window.

use rand::Rng;

/// Per-user ring buffers of the last `window` instantaneous rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateHistory {
    window: usize,
    slots_seen: usize,
    buffers: Vec<std::collections::VecDeque<f64>>,
}

impl RateHistory {
    pub fn new(num_users: usize, window: usize) -> Self {
        assert!(window >= 1, "window must be >= 1");
        RateHistory {
            window,
            slots_seen: 0,
            buffers: vec![std::collections::VecDeque::with_capacity(window); num_users],
        }
    }

    /// Record one slot of per-user rates (bit/s).
    pub fn push(&mut self, rates: &[f64]) {
        assert_eq!(rates.len(), self.buffers.len(), "rate vector length mismatch");
        for (buf, &r) in self.buffers.iter_mut().zip(rates) {
            debug_assert!(r >= 0.0);
            if buf.len() == self.window {
                buf.pop_front();
            }
            buf.push_back(r);
        }
        self.slots_seen += 1;
    }

    pub fn slots_seen(&self) -> usize {
        self.slots_seen
    }

    /// Mean rate per user over the stored window (min(t, W) entries).
    pub fn sliding_avg_rates(&self) -> Vec<f64> {
        self.buffers
            .iter()
            .map(|buf| {
                if buf.is_empty() {
                    0.0
                } else {
                    buf.iter().sum::<f64>() / buf.len() as f64
                }
            })
            .collect()
    }
}

/// Inverse-rate priority weights w_k = (R̄_k + ε)^(−β).
pub fn priority_weights(avg_rates: &[f64], epsilon: f64, beta: f64) -> Vec<f64> {
    debug_assert!(epsilon > 0.0 && beta >= 1.0);
    avg_rates.iter().map(|&r| (r + epsilon).powf(-beta)).collect()
}

/// Normalized sampling probabilities p_k = w_k / Σ w_j.
pub fn sampling_probs(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    debug_assert!(total > 0.0, "weights must be positive");
    weights.iter().map(|&w| w / total).collect()
}

/// The per-slot focus choice.
#[derive(Debug, Clone, PartialEq)]
pub struct FocusDecision {
    /// Focus user index, 0-based.
    pub user: usize,
    /// Sampling probabilities used for the draw; absent during warm-up.
    pub probs: Option<Vec<f64>>,
}

/// Select the slot-`t` focus user (t is 1-based).
///
/// Warm-up (t ≤ W) cycles users round-robin starting from user 0. After
/// warm-up the user is drawn by inverse-CDF sampling over the probabilities
/// computed from the history up to slot t−1, consuming a single uniform.
pub fn select_focus<R: Rng>(
    t: usize,
    window: usize,
    num_users: usize,
    probs_from_previous_slot: Option<&[f64]>,
    rng: &mut R,
) -> FocusDecision {
    debug_assert!(t >= 1 && num_users >= 1);
    if t <= window {
        return FocusDecision { user: (t - 1) % num_users, probs: None };
    }
    let probs = probs_from_previous_slot
        .expect("adaptive phase requires probabilities from the previous slot");
    assert_eq!(probs.len(), num_users, "probability vector length mismatch");
    let u: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut chosen = num_users - 1;
    for (k, &p) in probs.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            chosen = k;
            break;
        }
    }
    FocusDecision { user: chosen, probs: Some(probs.to_vec()) }
}
