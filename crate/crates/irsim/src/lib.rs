//! # irsim
//!
//! A deterministic, seeded, slot-level simulator of a mobility-aware,
//! IRS-assisted multi-node uplink. One run advances node kinematics inside a
//! bounded region, evolves small-scale fading with coherence-time redraws
//! and Doppler rotation, focuses a reconfigurable reflecting surface on one
//! user per slot (round-robin warm-up, then inverse-rate weighted sampling),
//! allocates channels with a sensing-guided sequential rule calibrated by an
//! exact chi-square energy-detection threshold, and records per-slot
//! SINR/rate traces plus per-node and network summaries.
//!
//! Everything is reproducible: a run is a pure function of (config, seed),
//! with every randomness source on its own named substream.
//!
//! The `examples/` directory has one runnable program per major capability;
//! the `irsim` binary wraps the same entry points as `run`, `batch`,
//! `validate`, and `threshold-table` subcommands.

pub mod allocation;
pub mod cli;
pub mod config;
pub mod engine;
pub mod fading;
pub mod geometry;
pub mod irs;
pub mod metrics;
pub mod mobility;
pub mod propagation;
pub mod report;
pub mod rng;
pub mod scheduler;
pub mod sensing;
pub mod special;
pub mod validate;

pub use config::{derive_constants, DerivedConstants, PhaseMode, SimConfig};
pub use engine::{run_batch, run_simulation, BatchResult, RunResult, SlotRecord};
pub use geometry::{RegionBox, Vec3};
