//! Simulation parameters: flat key-value config parsing, validation, and the
//! physical constants derived from them.
//!
//! The config file format is plain `key = value` text with `#` comments.
//! Unknown or duplicated keys are rejected so typos cannot silently fall
//! back to defaults. All fields are SI; dB/dBm fields are converted to
//! linear exactly once, in [`derive_constants`].

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{RegionBox, Vec3};

/// Speed of light in m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant in J/K (exact, 2019 SI).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reference noise temperature in K.
pub const NOISE_TEMPERATURE: f64 = 290.0;

/// Environment variable that overrides the configured seed.
pub const SEED_ENV_VAR: &str = "IRSIM_SEED";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid value for `{key}`: {constraint}")]
    Invalid { key: &'static str, constraint: String },
}

/// IRS phase-control mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Align the deterministic path-length phase of the focus user.
    Geometric,
    /// Idealized perfect-CSI alignment (also cancels small-scale phases).
    Csi,
}

impl PhaseMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseMode::Geometric => "geometric",
            PhaseMode::Csi => "csi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "geometric" => Some(PhaseMode::Geometric),
            "csi" => Some(PhaseMode::Csi),
            _ => None,
        }
    }
}

/// All user-facing simulation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub carrier_frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub num_channels: usize,
    pub num_nodes: usize,
    pub irs_rows: usize,
    pub irs_cols: usize,
    pub element_spacing_wavelengths: f64,
    pub phase_bits: u32,
    pub reflection_efficiency: f64,
    pub pathloss_exponent: f64,
    pub tx_power_dbm: f64,
    pub noise_figure_db: f64,
    pub decode_threshold_db: f64,
    pub sensing_samples: usize,
    pub target_pfa: f64,
    pub v_max_mps: f64,
    pub slot_duration_s: f64,
    pub num_slots: usize,
    pub window: usize,
    pub priority_exponent: f64,
    pub rate_epsilon: f64,
    pub bs_position: Vec3,
    pub irs_center: Vec3,
    pub region: RegionBox,
    /// Unit vector along the IRS column direction (elements within a row).
    pub irs_axis_col: Vec3,
    /// Unit vector along the IRS row direction (stacking of rows).
    pub irs_axis_row: Vec3,
    pub coherence_floor_s: f64,
    pub phase_mode: PhaseMode,
    pub seed: u64,
}

impl Default for SimConfig {
    /// The demonstrative-run parameter set.
    fn default() -> Self {
        SimConfig {
            carrier_frequency_hz: 3.5e9,
            bandwidth_hz: 5e6,
            num_channels: 4,
            num_nodes: 10,
            irs_rows: 8,
            irs_cols: 8,
            element_spacing_wavelengths: 0.5,
            phase_bits: 3,
            reflection_efficiency: 0.98,
            pathloss_exponent: 2.2,
            tx_power_dbm: 20.0,
            noise_figure_db: 6.0,
            decode_threshold_db: -10.0,
            sensing_samples: 128,
            target_pfa: 0.1,
            v_max_mps: 3.0,
            slot_duration_s: 5e-3,
            num_slots: 200,
            window: 20,
            priority_exponent: 2.0,
            rate_epsilon: 1e3,
            bs_position: Vec3::new(0.0, 0.0, 10.0),
            irs_center: Vec3::new(30.0, 0.0, 8.0),
            region: RegionBox::new(Vec3::new(-50.0, -50.0, 0.0), Vec3::new(50.0, 50.0, 3.0)),
            // Wall-mounted vertical panel: columns along global y, rows along
            // global z, normal facing the node region along x.
            irs_axis_col: Vec3::new(0.0, 1.0, 0.0),
            irs_axis_row: Vec3::new(0.0, 0.0, 1.0),
            coherence_floor_s: 1e-3,
            phase_mode: PhaseMode::Geometric,
            seed: 42,
        }
    }
}

impl SimConfig {
    /// Total number of IRS elements.
    pub fn num_elements(&self) -> usize {
        self.irs_rows * self.irs_cols
    }

    pub fn with_seed(&self, seed: u64) -> SimConfig {
        SimConfig { seed, ..self.clone() }
    }

    /// Parse a config from key-value text. Keys not present keep their
    /// defaults; the result is fully validated.
    pub fn from_kv_text(source: &str) -> Result<SimConfig, ConfigError> {
        let mut cfg = SimConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw_line) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(ConfigError::Parse {
                    line: line_no,
                    msg: format!("empty value for key `{key}`"),
                });
            }
            if seen.iter().any(|k| k == key) {
                return Err(ConfigError::Parse {
                    line: line_no,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            cfg.apply_kv(key, value, line_no)?;
            seen.push(key.to_string());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Like [`SimConfig::from_kv_text`] but honouring the `IRSIM_SEED`
    /// environment override (seed only).
    pub fn load(source: &str) -> Result<SimConfig, ConfigError> {
        let mut cfg = SimConfig::from_kv_text(source)?;
        if let Ok(v) = std::env::var(SEED_ENV_VAR) {
            let seed = v.parse::<u64>().map_err(|_| ConfigError::Invalid {
                key: "seed",
                constraint: format!("{SEED_ENV_VAR} must be an unsigned 64-bit integer, got `{v}`"),
            })?;
            cfg.seed = seed;
        }
        Ok(cfg)
    }

    fn apply_kv(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let parse_err = |msg: String| ConfigError::Parse { line, msg };
        let f = |v: &str| -> Result<f64, ConfigError> {
            v.parse::<f64>()
                .map_err(|_| parse_err(format!("`{key}`: expected a number, got `{v}`")))
        };
        let u = |v: &str| -> Result<usize, ConfigError> {
            v.parse::<usize>()
                .map_err(|_| parse_err(format!("`{key}`: expected a non-negative integer, got `{v}`")))
        };
        match key {
            "carrier_frequency_hz" => self.carrier_frequency_hz = f(value)?,
            "bandwidth_hz" => self.bandwidth_hz = f(value)?,
            "num_channels" => self.num_channels = u(value)?,
            "num_nodes" => self.num_nodes = u(value)?,
            "irs_rows" => self.irs_rows = u(value)?,
            "irs_cols" => self.irs_cols = u(value)?,
            "element_spacing_wavelengths" => self.element_spacing_wavelengths = f(value)?,
            "phase_bits" => {
                self.phase_bits = value
                    .parse::<u32>()
                    .map_err(|_| parse_err(format!("`{key}`: expected an integer, got `{value}`")))?
            }
            "reflection_efficiency" => self.reflection_efficiency = f(value)?,
            "pathloss_exponent" => self.pathloss_exponent = f(value)?,
            "tx_power_dbm" => self.tx_power_dbm = f(value)?,
            "noise_figure_db" => self.noise_figure_db = f(value)?,
            "decode_threshold_db" => self.decode_threshold_db = f(value)?,
            "sensing_samples" => self.sensing_samples = u(value)?,
            "target_pfa" => self.target_pfa = f(value)?,
            "v_max_mps" => self.v_max_mps = f(value)?,
            "slot_duration_s" => self.slot_duration_s = f(value)?,
            "num_slots" => self.num_slots = u(value)?,
            "window" => self.window = u(value)?,
            "priority_exponent" => self.priority_exponent = f(value)?,
            "rate_epsilon" => self.rate_epsilon = f(value)?,
            "bs_position" => self.bs_position = parse_vec3(key, value, line)?,
            "irs_center" => self.irs_center = parse_vec3(key, value, line)?,
            "region_min" => self.region.min = parse_vec3(key, value, line)?,
            "region_max" => self.region.max = parse_vec3(key, value, line)?,
            "irs_axis_col" => self.irs_axis_col = parse_vec3(key, value, line)?,
            "irs_axis_row" => self.irs_axis_row = parse_vec3(key, value, line)?,
            "coherence_floor_s" => self.coherence_floor_s = f(value)?,
            "phase_mode" => {
                self.phase_mode = PhaseMode::parse(value).ok_or_else(|| {
                    parse_err(format!("`{key}`: expected `geometric` or `csi`, got `{value}`"))
                })?
            }
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| parse_err(format!("`{key}`: expected u64, got `{value}`")))?
            }
            _ => return Err(parse_err(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Check every range/consistency constraint, naming the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(key: &'static str, v: f64) -> Result<(), ConfigError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::Invalid { key, constraint: format!("must be positive, got {v}") })
            }
        }
        fn at_least_one(key: &'static str, v: usize) -> Result<(), ConfigError> {
            if v >= 1 {
                Ok(())
            } else {
                Err(ConfigError::Invalid { key, constraint: "must be >= 1".into() })
            }
        }
        positive("carrier_frequency_hz", self.carrier_frequency_hz)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        at_least_one("num_channels", self.num_channels)?;
        at_least_one("num_nodes", self.num_nodes)?;
        at_least_one("irs_rows", self.irs_rows)?;
        at_least_one("irs_cols", self.irs_cols)?;
        positive("element_spacing_wavelengths", self.element_spacing_wavelengths)?;
        if self.phase_bits < 1 || self.phase_bits > 24 {
            return Err(ConfigError::Invalid {
                key: "phase_bits",
                constraint: format!("must be in 1..=24, got {}", self.phase_bits),
            });
        }
        if !(0.0..=1.0).contains(&self.reflection_efficiency) {
            return Err(ConfigError::Invalid {
                key: "reflection_efficiency",
                constraint: format!("must lie in [0, 1], got {}", self.reflection_efficiency),
            });
        }
        positive("pathloss_exponent", self.pathloss_exponent)?;
        if !self.tx_power_dbm.is_finite() {
            return Err(ConfigError::Invalid { key: "tx_power_dbm", constraint: "must be finite".into() });
        }
        if !self.noise_figure_db.is_finite() {
            return Err(ConfigError::Invalid { key: "noise_figure_db", constraint: "must be finite".into() });
        }
        if !self.decode_threshold_db.is_finite() {
            return Err(ConfigError::Invalid { key: "decode_threshold_db", constraint: "must be finite".into() });
        }
        at_least_one("sensing_samples", self.sensing_samples)?;
        if !(self.target_pfa > 0.0 && self.target_pfa < 1.0) {
            return Err(ConfigError::Invalid {
                key: "target_pfa",
                constraint: format!("must lie in (0, 1), got {}", self.target_pfa),
            });
        }
        if !(self.v_max_mps >= 0.0 && self.v_max_mps.is_finite()) {
            return Err(ConfigError::Invalid {
                key: "v_max_mps",
                constraint: format!("must be >= 0, got {}", self.v_max_mps),
            });
        }
        positive("slot_duration_s", self.slot_duration_s)?;
        at_least_one("num_slots", self.num_slots)?;
        at_least_one("window", self.window)?;
        if self.window > self.num_slots {
            return Err(ConfigError::Invalid {
                key: "window",
                constraint: format!(
                    "must not exceed num_slots ({} > {})",
                    self.window, self.num_slots
                ),
            });
        }
        if !(self.priority_exponent >= 1.0 && self.priority_exponent.is_finite()) {
            return Err(ConfigError::Invalid {
                key: "priority_exponent",
                constraint: format!("must be >= 1, got {}", self.priority_exponent),
            });
        }
        positive("rate_epsilon", self.rate_epsilon)?;
        positive("coherence_floor_s", self.coherence_floor_s)?;
        let ext = self.region.extent();
        if !(ext.x > 0.0) {
            return Err(ConfigError::Invalid {
                key: "region_max",
                constraint: format!("x extent must be positive, got {}", ext.x),
            });
        }
        if !(ext.y > 0.0) {
            return Err(ConfigError::Invalid {
                key: "region_max",
                constraint: format!("y extent must be positive, got {}", ext.y),
            });
        }
        if !(ext.z >= 0.0) {
            return Err(ConfigError::Invalid {
                key: "region_max",
                constraint: format!("z extent must be >= 0, got {}", ext.z),
            });
        }
        for (key, axis) in [("irs_axis_col", self.irs_axis_col), ("irs_axis_row", self.irs_axis_row)] {
            if (axis.norm() - 1.0).abs() > 1e-9 {
                return Err(ConfigError::Invalid {
                    key,
                    constraint: format!("must be a unit vector, norm is {}", axis.norm()),
                });
            }
        }
        if self.irs_axis_col.dot(self.irs_axis_row).abs() > 1e-9 {
            return Err(ConfigError::Invalid {
                key: "irs_axis_row",
                constraint: "must be orthogonal to irs_axis_col".into(),
            });
        }
        Ok(())
    }

    /// Serialize to the same key-value text accepted by `from_kv_text`.
    /// Floats carry 17 significant digits so the round trip is exact.
    pub fn to_kv_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "carrier_frequency_hz = {}", fmt_f64(self.carrier_frequency_hz)).unwrap();
        writeln!(s, "bandwidth_hz = {}", fmt_f64(self.bandwidth_hz)).unwrap();
        writeln!(s, "num_channels = {}", self.num_channels).unwrap();
        writeln!(s, "num_nodes = {}", self.num_nodes).unwrap();
        writeln!(s, "irs_rows = {}", self.irs_rows).unwrap();
        writeln!(s, "irs_cols = {}", self.irs_cols).unwrap();
        writeln!(s, "element_spacing_wavelengths = {}", fmt_f64(self.element_spacing_wavelengths)).unwrap();
        writeln!(s, "phase_bits = {}", self.phase_bits).unwrap();
        writeln!(s, "reflection_efficiency = {}", fmt_f64(self.reflection_efficiency)).unwrap();
        writeln!(s, "pathloss_exponent = {}", fmt_f64(self.pathloss_exponent)).unwrap();
        writeln!(s, "tx_power_dbm = {}", fmt_f64(self.tx_power_dbm)).unwrap();
        writeln!(s, "noise_figure_db = {}", fmt_f64(self.noise_figure_db)).unwrap();
        writeln!(s, "decode_threshold_db = {}", fmt_f64(self.decode_threshold_db)).unwrap();
        writeln!(s, "sensing_samples = {}", self.sensing_samples).unwrap();
        writeln!(s, "target_pfa = {}", fmt_f64(self.target_pfa)).unwrap();
        writeln!(s, "v_max_mps = {}", fmt_f64(self.v_max_mps)).unwrap();
        writeln!(s, "slot_duration_s = {}", fmt_f64(self.slot_duration_s)).unwrap();
        writeln!(s, "num_slots = {}", self.num_slots).unwrap();
        writeln!(s, "window = {}", self.window).unwrap();
        writeln!(s, "priority_exponent = {}", fmt_f64(self.priority_exponent)).unwrap();
        writeln!(s, "rate_epsilon = {}", fmt_f64(self.rate_epsilon)).unwrap();
        writeln!(s, "bs_position = {}", fmt_vec3(self.bs_position)).unwrap();
        writeln!(s, "irs_center = {}", fmt_vec3(self.irs_center)).unwrap();
        writeln!(s, "region_min = {}", fmt_vec3(self.region.min)).unwrap();
        writeln!(s, "region_max = {}", fmt_vec3(self.region.max)).unwrap();
        writeln!(s, "irs_axis_col = {}", fmt_vec3(self.irs_axis_col)).unwrap();
        writeln!(s, "irs_axis_row = {}", fmt_vec3(self.irs_axis_row)).unwrap();
        writeln!(s, "coherence_floor_s = {}", fmt_f64(self.coherence_floor_s)).unwrap();
        writeln!(s, "phase_mode = {}", self.phase_mode.as_str()).unwrap();
        writeln!(s, "seed = {}", self.seed).unwrap();
        s
    }

    /// Stable FNV-1a hash of the canonical serialization, echoed into run
    /// results and reports so outputs can be traced back to their inputs.
    pub fn stable_hash(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        for b in self.to_kv_text().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
        h
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_vec3(v: Vec3) -> String {
    format!("{}, {}, {}", fmt_f64(v.x), fmt_f64(v.y), fmt_f64(v.z))
}

fn parse_vec3(key: &str, value: &str, line: usize) -> Result<Vec3, ConfigError> {
    let parts: Vec<&str> = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    if parts.len() != 3 {
        return Err(ConfigError::Parse {
            line,
            msg: format!("`{key}`: expected three numbers, got `{value}`"),
        });
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse::<f64>().map_err(|_| ConfigError::Parse {
            line,
            msg: format!("`{key}`: `{p}` is not a number"),
        })?;
    }
    Ok(Vec3::new(out[0], out[1], out[2]))
}

/// Constants computed once from a validated config.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedConstants {
    /// Carrier wavelength, m.
    pub wavelength: f64,
    /// Free-space reference loss (4π/λ)².
    pub l0: f64,
    /// Near-field clamp distance λ/(2π), m.
    pub d0: f64,
    /// Receiver noise power, W.
    pub noise_power_w: f64,
    /// Transmit power, W.
    pub tx_power_w: f64,
    /// Linear decode threshold.
    pub decode_threshold_linear: f64,
    /// IRS element centres, row-major (row index varies slowest), m.
    pub element_positions: Vec<Vec3>,
    /// Distance from each element to the BS, m.
    pub irs_bs_distances: Vec<f64>,
}

/// Compute every derived physical constant. Pure: identical inputs give
/// bit-identical outputs.
pub fn derive_constants(cfg: &SimConfig) -> DerivedConstants {
    let wavelength = SPEED_OF_LIGHT / cfg.carrier_frequency_hz;
    let l0 = (4.0 * PI / wavelength) * (4.0 * PI / wavelength);
    let d0 = wavelength / (2.0 * PI);
    let noise_power_w = BOLTZMANN
        * NOISE_TEMPERATURE
        * cfg.bandwidth_hz
        * 10f64.powf(cfg.noise_figure_db / 10.0);
    let tx_power_w = 1e-3 * 10f64.powf(cfg.tx_power_dbm / 10.0);
    let decode_threshold_linear = 10f64.powf(cfg.decode_threshold_db / 10.0);

    let spacing = cfg.element_spacing_wavelengths * wavelength;
    let rows = cfg.irs_rows;
    let cols = cfg.irs_cols;
    let mut element_positions = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let off_row = (r as f64 - (rows as f64 - 1.0) / 2.0) * spacing;
            let off_col = (c as f64 - (cols as f64 - 1.0) / 2.0) * spacing;
            element_positions
                .push(cfg.irs_center + cfg.irs_axis_row * off_row + cfg.irs_axis_col * off_col);
        }
    }
    let irs_bs_distances = element_positions
        .iter()
        .map(|p| p.distance(cfg.bs_position))
        .collect();

    DerivedConstants {
        wavelength,
        l0,
        d0,
        noise_power_w,
        tx_power_w,
        decode_threshold_linear,
        element_positions,
        irs_bs_distances,
    }
}
