//! Sensing-guided sequential channel assignment.
//!
//! Each slot starts from per-channel running energies (a fresh noise draw
//! plus the current received powers of last slot's occupants), then users
//! are processed in ascending index order: take the first channel whose
//! running energy is below the threshold, otherwise the minimum-energy
//! channel, and add the user's own energy contribution before moving on.

use rand::Rng;

use crate::sensing::draw_noise_energy;

/// Running per-channel energies for one slot's assignment pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEnergyLedger {
    /// Running energy per channel, W-scale.
    pub energies: Vec<f64>,
    /// Detection threshold γ.
    pub threshold: f64,
    /// Sensing sample count M (scales the power contributions).
    pub samples: usize,
}

/// Round-robin channel assignment used before the first slot:
/// user k (0-based) starts on channel k mod C.
pub fn initial_assignment(num_nodes: usize, num_channels: usize) -> Vec<usize> {
    (0..num_nodes).map(|k| k % num_channels).collect()
}

/// Initialize the ledger for a slot: per channel, in ascending channel
/// order (the noise draws consume the RNG in that order),
/// E_c = noise draw + M · Σ_{j: prev[j]=c} P_j.
pub fn init_channel_energies<R: Rng>(
    rng: &mut R,
    num_channels: usize,
    samples: usize,
    noise_power_w: f64,
    prev_assignment: &[usize],
    rx_powers_w: &[f64],
    threshold: f64,
) -> ChannelEnergyLedger {
    assert_eq!(prev_assignment.len(), rx_powers_w.len(), "assignment/power length mismatch");
    let energies = (0..num_channels)
        .map(|c| {
            let noise = draw_noise_energy(rng, samples, noise_power_w);
            let occupants: f64 = prev_assignment
                .iter()
                .zip(rx_powers_w)
                .filter(|(&cj, _)| cj == c)
                .map(|(_, &p)| p)
                .sum();
            noise + samples as f64 * occupants
        })
        .collect();
    ChannelEnergyLedger { energies, threshold, samples }
}

/// Assign every user a channel, mutating the running energies.
///
/// Users are processed in ascending index order. Ties in the argmin
/// fallback break to the lowest channel index.
pub fn assign_channels(ledger: &mut ChannelEnergyLedger, rx_powers_w: &[f64]) -> Vec<usize> {
    let c_total = ledger.energies.len();
    let mut assignment = Vec::with_capacity(rx_powers_w.len());
    for &power in rx_powers_w {
        let chosen = (0..c_total)
            .find(|&c| ledger.energies[c] < ledger.threshold)
            .unwrap_or_else(|| {
                let mut best = 0;
                for c in 1..c_total {
                    if ledger.energies[c] < ledger.energies[best] {
                        best = c;
                    }
                }
                best
            });
        ledger.energies[chosen] += ledger.samples as f64 * power;
        assignment.push(chosen);
    }
    assignment
}
