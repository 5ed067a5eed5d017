//! Random network drops inside a single isolated cell.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::rng::{self, Purpose};
use crate::units::dbm_to_mw;

/// Thermal noise density, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.distance(&Point::ORIGIN)
    }
}

/// One realization of UE positions. The eNB sits at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drop {
    pub enb_position: Point,
    pub cellular_positions: Vec<Point>,
    pub d2d_tx_positions: Vec<Point>,
    pub d2d_rx_positions: Vec<Point>,
}

impl Drop {
    pub fn n_cellular(&self) -> usize {
        self.cellular_positions.len()
    }

    pub fn n_d2d_pairs(&self) -> usize {
        self.d2d_tx_positions.len()
    }
}

fn uniform_in_disc<R: Rng + ?Sized>(rng: &mut R, center: Point, radius: f64) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    Point::new(center.x + r * theta.cos(), center.y + r * theta.sin())
}

/// Draws UE positions for trial `trial_index`.
///
/// Cellular UEs and D2D transmitters are uniform over the cell disc. Each
/// D2D receiver is uniform over the disc of radius `max_d2d_distance`
/// around its transmitter, redrawn until it falls inside the cell.
pub fn generate_drop(config: &SimConfig, trial_index: u64) -> Drop {
    let mut stream = rng::stream(config.master_seed, trial_index, Purpose::Drop);
    let radius = config.cell_radius;
    let cellular_positions = (0..config.n_cellular)
        .map(|_| uniform_in_disc(&mut stream, Point::ORIGIN, radius))
        .collect();
    let mut d2d_tx_positions = Vec::with_capacity(config.n_d2d_pairs);
    let mut d2d_rx_positions = Vec::with_capacity(config.n_d2d_pairs);
    for _ in 0..config.n_d2d_pairs {
        let tx = uniform_in_disc(&mut stream, Point::ORIGIN, radius);
        let rx = loop {
            let candidate = uniform_in_disc(&mut stream, tx, config.max_d2d_distance);
            if candidate.norm() <= radius {
                break candidate;
            }
        };
        d2d_tx_positions.push(tx);
        d2d_rx_positions.push(rx);
    }
    Drop {
        enb_position: Point::ORIGIN,
        cellular_positions,
        d2d_tx_positions,
        d2d_rx_positions,
    }
}

/// Per-channel noise power in dBm; each of the K channels gets an equal
/// share of the total bandwidth.
pub fn noise_power_dbm(config: &SimConfig) -> f64 {
    let channel_bw = config.total_bandwidth_hz / config.n_channels as f64;
    THERMAL_NOISE_DBM_PER_HZ + 10.0 * channel_bw.log10() + config.noise_figure_db
}

/// Per-channel noise power σ² in mW.
pub fn noise_power_mw(config: &SimConfig) -> f64 {
    dbm_to_mw(noise_power_dbm(config))
}
