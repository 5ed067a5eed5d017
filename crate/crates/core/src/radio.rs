//! Path loss, Rayleigh fading, link gains and SINR.
//!
//! Path loss follows the ITU UMi model (hexagonal layout formulas, distance
//! in meters, carrier in GHz). Intra-pair D2D links use the LOS branch;
//! every other link uses NLOS.

use ndarray::Array2;
use rand::Rng;
use rand_distr::Exp1;

use crate::config::{LinearParams, SimConfig};
use crate::error::{Error, Result};
use crate::evaluator::Allocation;
use crate::scenario::Drop;
use crate::units::db_to_linear;

/// Distances below this are clamped before path loss evaluation.
pub const MIN_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    Los,
    Nlos,
}

pub fn path_loss_db(distance_m: f64, carrier_ghz: f64, propagation: Propagation) -> f64 {
    let d = distance_m.max(MIN_DISTANCE_M);
    match propagation {
        Propagation::Los => 22.0 * d.log10() + 28.0 + 20.0 * carrier_ghz.log10(),
        Propagation::Nlos => 36.7 * d.log10() + 22.7 + 26.0 * carrier_ghz.log10(),
    }
}

/// Linear attenuation `10^(-PL/10)`, in (0, 1] for realistic distances.
pub fn path_loss_linear(distance_m: f64, carrier_ghz: f64, propagation: Propagation) -> f64 {
    db_to_linear(-path_loss_db(distance_m, carrier_ghz, propagation))
}

/// `|h|^2` for unit-variance Rayleigh fading, i.e. an Exp(1) draw.
pub fn sample_fading_power<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// The five gain families of one drop, linear scale, path loss times
/// fading. One fading realization per directed link, shared by all
/// channels.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGains {
    /// `U_n -> eNB`, length N.
    pub cellular_to_enb: Vec<f64>,
    /// `D_m^t -> D_m^r`, length M.
    pub d2d_pair: Vec<f64>,
    /// `D_m^t -> eNB`, length M.
    pub d2dtx_to_enb: Vec<f64>,
    /// `U_n -> D_m^r`, N x M.
    pub cellular_to_d2drx: Array2<f64>,
    /// `D_i^t -> D_m^r`, M x M indexed `[i, m]`. The diagonal is unused
    /// (zero when produced by [`compute_gains`]).
    pub d2dtx_to_d2drx: Array2<f64>,
}

impl LinkGains {
    /// Builds gains from explicit values, checking dimensions and
    /// positivity. Diagonal entries of `d2dtx_to_d2drx` are not checked.
    pub fn new(
        cellular_to_enb: Vec<f64>,
        d2d_pair: Vec<f64>,
        d2dtx_to_enb: Vec<f64>,
        cellular_to_d2drx: Array2<f64>,
        d2dtx_to_d2drx: Array2<f64>,
    ) -> Result<Self> {
        let n = cellular_to_enb.len();
        let m = d2d_pair.len();
        if d2dtx_to_enb.len() != m
            || cellular_to_d2drx.dim() != (n, m)
            || d2dtx_to_d2drx.dim() != (m, m)
        {
            return Err(Error::Dimension(format!(
                "gain families inconsistent with N={n}, M={m}"
            )));
        }
        let positive = |v: &f64| v.is_finite() && *v > 0.0;
        let off_diagonal_ok = d2dtx_to_d2drx
            .indexed_iter()
            .all(|((i, j), v)| i == j || positive(v));
        if !(cellular_to_enb.iter().all(positive)
            && d2d_pair.iter().all(positive)
            && d2dtx_to_enb.iter().all(positive)
            && cellular_to_d2drx.iter().all(positive)
            && off_diagonal_ok)
        {
            return Err(Error::Dimension("gains must be positive and finite".into()));
        }
        Ok(LinkGains {
            cellular_to_enb,
            d2d_pair,
            d2dtx_to_enb,
            cellular_to_d2drx,
            d2dtx_to_d2drx,
        })
    }

    pub fn n_cellular(&self) -> usize {
        self.cellular_to_enb.len()
    }

    pub fn n_d2d_pairs(&self) -> usize {
        self.d2d_pair.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_cellular() + self.n_d2d_pairs()
    }
}

/// Computes all link gains for a drop, drawing fading from `stream`.
pub fn compute_gains<R: Rng + ?Sized>(drop: &Drop, config: &SimConfig, stream: &mut R) -> LinkGains {
    let fc = config.carrier_ghz;
    let mut link = |a: &crate::scenario::Point, b: &crate::scenario::Point, p: Propagation| {
        path_loss_linear(a.distance(b), fc, p) * sample_fading_power(stream)
    };
    let enb = drop.enb_position;
    let n = drop.n_cellular();
    let m = drop.n_d2d_pairs();

    let cellular_to_enb = drop
        .cellular_positions
        .iter()
        .map(|u| link(u, &enb, Propagation::Nlos))
        .collect();
    let d2d_pair = drop
        .d2d_tx_positions
        .iter()
        .zip(&drop.d2d_rx_positions)
        .map(|(t, r)| link(t, r, Propagation::Los))
        .collect();
    let d2dtx_to_enb = drop
        .d2d_tx_positions
        .iter()
        .map(|t| link(t, &enb, Propagation::Nlos))
        .collect();
    let mut cellular_to_d2drx = Array2::zeros((n, m));
    for (ui, u) in drop.cellular_positions.iter().enumerate() {
        for (ri, r) in drop.d2d_rx_positions.iter().enumerate() {
            cellular_to_d2drx[[ui, ri]] = link(u, r, Propagation::Nlos);
        }
    }
    let mut d2dtx_to_d2drx = Array2::zeros((m, m));
    for (ti, t) in drop.d2d_tx_positions.iter().enumerate() {
        for (ri, r) in drop.d2d_rx_positions.iter().enumerate() {
            if ti != ri {
                d2dtx_to_d2drx[[ti, ri]] = link(t, r, Propagation::Nlos);
            }
        }
    }
    LinkGains {
        cellular_to_enb,
        d2d_pair,
        d2dtx_to_enb,
        cellular_to_d2drx,
        d2dtx_to_d2drx,
    }
}

/// SINR of cellular UE `n` at the eNB given the members of its channel.
/// `co_channel` lists vertex ids (cellular `0..N`, D2D `N..N+M`); `n`
/// itself and any other cellular entries are skipped.
pub(crate) fn cellular_sinr_with(
    n: usize,
    co_channel: &[usize],
    gains: &LinkGains,
    lin: &LinearParams,
) -> f64 {
    let n_cell = gains.n_cellular();
    let interference: f64 = co_channel
        .iter()
        .filter(|&&v| v >= n_cell)
        .map(|&v| lin.p_d2d_mw * gains.d2dtx_to_enb[v - n_cell])
        .sum();
    lin.p_cellular_mw * gains.cellular_to_enb[n] / (lin.noise_mw + interference)
}

/// SINR of D2D pair `m` (pair index, not vertex id) at its receiver.
pub(crate) fn d2d_sinr_with(m: usize, co_channel: &[usize], gains: &LinkGains, lin: &LinearParams) -> f64 {
    let n_cell = gains.n_cellular();
    let interference: f64 = co_channel
        .iter()
        .map(|&v| {
            if v < n_cell {
                lin.p_cellular_mw * gains.cellular_to_d2drx[[v, m]]
            } else if v - n_cell != m {
                lin.p_d2d_mw * gains.d2dtx_to_d2drx[[v - n_cell, m]]
            } else {
                0.0
            }
        })
        .sum();
    lin.p_d2d_mw * gains.d2d_pair[m] / (lin.noise_mw + interference)
}

/// Linear SINR of cellular UE `n` on channel `k` under `alloc`.
pub fn sinr_cellular(n: usize, k: usize, alloc: &Allocation, gains: &LinkGains, config: &SimConfig) -> Result<f64> {
    if n >= alloc.n_cellular() || alloc.channel(n) != Some(k) {
        return Err(Error::NotOnChannel { vertex: n, channel: k });
    }
    let members = alloc.members_of(k);
    Ok(cellular_sinr_with(n, &members, gains, &config.linear()))
}

/// Linear SINR of D2D pair `m` on channel `k` under `alloc`.
pub fn sinr_d2d(m: usize, k: usize, alloc: &Allocation, gains: &LinkGains, config: &SimConfig) -> Result<f64> {
    let vertex = alloc.n_cellular() + m;
    if vertex >= alloc.n_vertices() || alloc.channel(vertex) != Some(k) {
        return Err(Error::NotOnChannel { vertex, channel: k });
    }
    let members = alloc.members_of(k);
    Ok(d2d_sinr_with(m, &members, gains, &config.linear()))
}
