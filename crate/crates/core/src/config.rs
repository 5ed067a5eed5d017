//! Scenario, radio and algorithm parameters.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{db_to_linear, dbm_to_mw};

/// How a greedy colorer picks among the available colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorChoice {
    /// Uniformly at random from the available set.
    #[default]
    Random,
    /// Lowest available color index (deterministic, for regression tests).
    Lowest,
}

/// Which hypergraph coloring rule the hypergraph allocator enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HyperColoring {
    /// No non-singleton hyperedge may be fully monochromatic.
    #[default]
    Weak,
    /// All vertices of a hyperedge must receive distinct colors.
    Strict,
}

/// All parameters of a simulation. Missing JSON keys take the defaults
/// of [`SimConfig::default`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_cellular: usize,
    pub n_d2d_pairs: usize,
    pub n_channels: usize,
    /// meters
    pub cell_radius: f64,
    /// meters
    pub max_d2d_distance: f64,
    pub p_cellular_dbm: f64,
    pub p_d2d_dbm: f64,
    /// Pairwise threshold at the eNB receiver.
    pub delta_c_db: f64,
    /// Pairwise threshold at a D2D receiver.
    pub delta_d_db: f64,
    /// Cumulative threshold at the eNB receiver.
    pub eta_c_db: f64,
    /// Cumulative threshold at a D2D receiver.
    pub eta_d_db: f64,
    /// Number of interferers grouped into one cumulative hyperedge.
    pub q_cumulative: usize,
    pub carrier_ghz: f64,
    pub total_bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub n_trials: usize,
    pub master_seed: u64,
    pub color_choice: ColorChoice,
    pub hyper_coloring: HyperColoring,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_cellular: 30,
            n_d2d_pairs: 30,
            n_channels: 30,
            cell_radius: 500.0,
            max_d2d_distance: 20.0,
            p_cellular_dbm: 23.0,
            p_d2d_dbm: 13.0,
            delta_c_db: 20.0,
            delta_d_db: 20.0,
            eta_c_db: 20.0,
            eta_d_db: 20.0,
            q_cumulative: 2,
            carrier_ghz: 2.3,
            total_bandwidth_hz: 20e6,
            noise_figure_db: 5.0,
            n_trials: 200,
            master_seed: 0x0d2d_5eed,
            color_choice: ColorChoice::Random,
            hyper_coloring: HyperColoring::Weak,
        }
    }
}

impl SimConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let config: SimConfig = serde_json::from_str(s)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_cellular + self.n_d2d_pairs
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_owned()));
        if self.n_channels < 1 {
            return bad("n_channels must be at least 1");
        }
        if self.q_cumulative < 1 {
            return bad("q_cumulative must be at least 1");
        }
        if !(self.cell_radius > 0.0 && self.cell_radius.is_finite()) {
            return bad("cell_radius must be positive");
        }
        if !(self.max_d2d_distance > 0.0 && self.max_d2d_distance <= self.cell_radius) {
            return bad("max_d2d_distance must be in (0, cell_radius]");
        }
        if !(self.carrier_ghz > 0.0 && self.carrier_ghz.is_finite()) {
            return bad("carrier_ghz must be positive");
        }
        if !(self.total_bandwidth_hz > 0.0 && self.total_bandwidth_hz.is_finite()) {
            return bad("total_bandwidth_hz must be positive");
        }
        let finite = [
            self.p_cellular_dbm,
            self.p_d2d_dbm,
            self.delta_c_db,
            self.delta_d_db,
            self.eta_c_db,
            self.eta_d_db,
            self.noise_figure_db,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("powers, thresholds and noise figure must be finite");
        }
        Ok(())
    }

    /// Linear-scale view of the power and threshold parameters.
    pub fn linear(&self) -> LinearParams {
        LinearParams {
            p_cellular_mw: dbm_to_mw(self.p_cellular_dbm),
            p_d2d_mw: dbm_to_mw(self.p_d2d_dbm),
            delta_c: db_to_linear(self.delta_c_db),
            delta_d: db_to_linear(self.delta_d_db),
            eta_c: db_to_linear(self.eta_c_db),
            eta_d: db_to_linear(self.eta_d_db),
            noise_mw: crate::scenario::noise_power_mw(self),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearParams {
    pub p_cellular_mw: f64,
    pub p_d2d_mw: f64,
    pub delta_c: f64,
    pub delta_d: f64,
    pub eta_c: f64,
    pub eta_d: f64,
    pub noise_mw: f64,
}
