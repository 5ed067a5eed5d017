//! Allocation representation, constraint checking, capacity scoring and
//! the exhaustive optimal oracle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{LinearParams, SimConfig};
use crate::error::{Error, Result};
use crate::radio::{cellular_sinr_with, d2d_sinr_with, LinkGains};

/// Largest `(K+1)^(N+M)` the oracle will enumerate.
pub const ORACLE_LIMIT: u64 = 10_000_000;

/// Channel assignment per vertex; `None` is unallocated. Vertices `0..N`
/// are cellular UEs, `N..N+M` are D2D pairs. A vertex holds at most one
/// channel by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    n_cellular: usize,
    assignment: Vec<Option<usize>>,
}

impl Allocation {
    pub fn new(n_cellular: usize, assignment: Vec<Option<usize>>) -> Self {
        assert!(n_cellular <= assignment.len(), "more cellular UEs than vertices");
        Allocation { n_cellular, assignment }
    }

    pub fn unallocated(n_cellular: usize, n_d2d_pairs: usize) -> Self {
        Self::new(n_cellular, vec![None; n_cellular + n_d2d_pairs])
    }

    pub fn n_cellular(&self) -> usize {
        self.n_cellular
    }

    pub fn n_d2d_pairs(&self) -> usize {
        self.assignment.len() - self.n_cellular
    }

    pub fn n_vertices(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_cellular(&self, vertex: usize) -> bool {
        vertex < self.n_cellular
    }

    pub fn channel(&self, vertex: usize) -> Option<usize> {
        self.assignment.get(vertex).copied().flatten()
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    pub fn set(&mut self, vertex: usize, channel: Option<usize>) {
        self.assignment[vertex] = channel;
    }

    /// Co-channel set of channel `k`, ascending vertex ids.
    pub fn members_of(&self, k: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Some(k))
            .map(|(v, _)| v)
            .collect()
    }

    /// All co-channel sets for channels `0..n_channels`. Out-of-range
    /// channels are ignored.
    pub fn co_channel_sets(&self, n_channels: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); n_channels];
        for (v, c) in self.assignment.iter().enumerate() {
            if let Some(k) = *c {
                if k < n_channels {
                    sets[k].push(v);
                }
            }
        }
        sets
    }

    pub fn colors_used(&self) -> usize {
        let mut used: Vec<usize> = self.assignment.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        used.len()
    }

    pub fn n_allocated(&self) -> usize {
        self.assignment.iter().filter(|c| c.is_some()).count()
    }

    /// Applies a relabeling of channels; `perm[k]` is the new label of `k`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        Allocation {
            n_cellular: self.n_cellular,
            assignment: self.assignment.iter().map(|c| c.map(|k| perm[k])).collect(),
        }
    }
}

/// First constraint breach found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Violation {
    #[error("allocation has {found} vertices ({found_cellular} cellular), expected {expected} ({expected_cellular} cellular)")]
    DimensionMismatch {
        expected: usize,
        expected_cellular: usize,
        found: usize,
        found_cellular: usize,
    },
    #[error("vertex {vertex} is on channel {channel}, but only {n_channels} channels exist")]
    ChannelOutOfRange {
        vertex: usize,
        channel: usize,
        n_channels: usize,
    },
    #[error("channel {channel} carries {multiplicity} cellular UEs (first two: {first}, {second})")]
    CellularShared {
        channel: usize,
        multiplicity: usize,
        first: usize,
        second: usize,
    },
}

/// Checks that channels are in range and that each channel carries at most
/// one cellular UE. D2D pairs may share freely.
pub fn validate(alloc: &Allocation, config: &SimConfig) -> Result<(), Violation> {
    if alloc.n_vertices() != config.n_vertices() || alloc.n_cellular() != config.n_cellular {
        return Err(Violation::DimensionMismatch {
            expected: config.n_vertices(),
            expected_cellular: config.n_cellular,
            found: alloc.n_vertices(),
            found_cellular: alloc.n_cellular(),
        });
    }
    let k = config.n_channels;
    let mut cellular_on: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (v, c) in alloc.assignment().iter().enumerate() {
        let Some(channel) = *c else { continue };
        if channel >= k {
            return Err(Violation::ChannelOutOfRange {
                vertex: v,
                channel,
                n_channels: k,
            });
        }
        if alloc.is_cellular(v) {
            cellular_on[channel].push(v);
        }
    }
    for (channel, users) in cellular_on.iter().enumerate() {
        if users.len() > 1 {
            return Err(Violation::CellularShared {
                channel,
                multiplicity: users.len(),
                first: users[0],
                second: users[1],
            });
        }
    }
    Ok(())
}

/// Per-UE spectral efficiency `log2(1 + SINR)`, zero for unallocated.
fn throughputs(alloc: &Allocation, gains: &LinkGains, n_channels: usize, lin: &LinearParams) -> Vec<f64> {
    let n_cell = alloc.n_cellular();
    let mut out = vec![0.0; alloc.n_vertices()];
    for members in alloc.co_channel_sets(n_channels) {
        for &v in &members {
            let sinr = if v < n_cell {
                cellular_sinr_with(v, &members, gains, lin)
            } else {
                d2d_sinr_with(v - n_cell, &members, gains, lin)
            };
            out[v] = (1.0 + sinr).log2();
        }
    }
    out
}

fn check_dims(alloc: &Allocation, gains: &LinkGains) -> Result<()> {
    if alloc.n_cellular() != gains.n_cellular() || alloc.n_d2d_pairs() != gains.n_d2d_pairs() {
        return Err(Error::Dimension(format!(
            "allocation is {}+{}, gains are {}+{}",
            alloc.n_cellular(),
            alloc.n_d2d_pairs(),
            gains.n_cellular(),
            gains.n_d2d_pairs()
        )));
    }
    Ok(())
}

/// Sum of `log2(1 + SINR)` over allocated UEs, in bit/s/Hz.
pub fn cell_capacity(alloc: &Allocation, gains: &LinkGains, config: &SimConfig) -> Result<f64> {
    check_dims(alloc, gains)?;
    validate(alloc, config)?;
    Ok(throughputs(alloc, gains, config.n_channels, &config.linear()).iter().sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    /// bit/s/Hz
    pub cell_capacity: f64,
    /// bit/s/Hz per vertex, cellular first.
    pub per_ue_throughput: Vec<f64>,
    pub n_cellular_outage: usize,
    pub n_d2d_outage: usize,
    pub colors_used: usize,
}

impl TrialMetrics {
    fn from_throughputs(per_ue_throughput: Vec<f64>, n_cellular: usize, colors_used: usize) -> Self {
        let n_cellular_outage = per_ue_throughput[..n_cellular].iter().filter(|t| **t == 0.0).count();
        let n_d2d_outage = per_ue_throughput[n_cellular..].iter().filter(|t| **t == 0.0).count();
        TrialMetrics {
            cell_capacity: per_ue_throughput.iter().sum(),
            per_ue_throughput,
            n_cellular_outage,
            n_d2d_outage,
            colors_used,
        }
    }

    /// Throughputs of cellular UEs, given the vertex layout.
    pub fn cellular(&self, n_cellular: usize) -> &[f64] {
        &self.per_ue_throughput[..n_cellular]
    }

    pub fn d2d(&self, n_cellular: usize) -> &[f64] {
        &self.per_ue_throughput[n_cellular..]
    }
}

pub fn per_ue_metrics(alloc: &Allocation, gains: &LinkGains, config: &SimConfig) -> Result<TrialMetrics> {
    check_dims(alloc, gains)?;
    validate(alloc, config)?;
    let t = throughputs(alloc, gains, config.n_channels, &config.linear());
    Ok(TrialMetrics::from_throughputs(t, alloc.n_cellular(), alloc.colors_used()))
}

/// Baseline with no D2D mode: every UE, including each D2D transmitter,
/// sends its traffic to the eNB at the cellular power on its own channel.
/// With more UEs than channels the K strongest uplinks are served.
pub fn cellular_only_metrics(gains: &LinkGains, config: &SimConfig) -> TrialMetrics {
    let lin = config.linear();
    let snr: Vec<f64> = gains
        .cellular_to_enb
        .iter()
        .chain(&gains.d2dtx_to_enb)
        .map(|g| lin.p_cellular_mw * g / lin.noise_mw)
        .collect();
    let mut order: Vec<usize> = (0..snr.len()).collect();
    order.sort_by(|&a, &b| snr[b].total_cmp(&snr[a]).then(a.cmp(&b)));
    let mut throughput = vec![0.0; snr.len()];
    for &v in order.iter().take(config.n_channels) {
        throughput[v] = (1.0 + snr[v]).log2();
    }
    let served = snr.len().min(config.n_channels);
    TrialMetrics::from_throughputs(throughput, gains.n_cellular(), served)
}

/// Errors unless `(K+1)^(N+M)` is within [`ORACLE_LIMIT`].
pub fn check_oracle_size(n_vertices: usize, n_channels: usize) -> Result<()> {
    let space = (n_channels as u64 + 1).checked_pow(n_vertices as u32);
    if space.is_none_or(|s| s > ORACLE_LIMIT) {
        return Err(Error::InstanceTooLarge {
            k_plus_one: n_channels + 1,
            vertices: n_vertices,
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

/// Exhaustive search for the capacity-maximizing allocation.
///
/// Enumerates `({unallocated} ∪ 0..K)^(N+M)` in lexicographic order
/// (unallocated first), skipping branches that put two cellular UEs on one
/// channel. Among equal capacities the first assignment found wins.
pub fn brute_force_optimal(gains: &LinkGains, config: &SimConfig) -> Result<(Allocation, f64)> {
    let n = gains.n_cellular();
    let v = gains.n_vertices();
    let k = config.n_channels;
    if n != config.n_cellular || v != config.n_vertices() {
        return Err(Error::Dimension("gains do not match config".into()));
    }
    check_oracle_size(v, k)?;

    struct Search<'a> {
        gains: &'a LinkGains,
        lin: LinearParams,
        n_cellular: usize,
        n_channels: usize,
        current: Allocation,
        cellular_taken: Vec<bool>,
        best: Option<(Allocation, f64)>,
    }

    impl Search<'_> {
        fn visit(&mut self, vertex: usize) {
            if vertex == self.current.n_vertices() {
                let cap: f64 = throughputs(&self.current, self.gains, self.n_channels, &self.lin).iter().sum();
                if self.best.as_ref().is_none_or(|(_, b)| cap > *b) {
                    self.best = Some((self.current.clone(), cap));
                }
                return;
            }
            self.current.set(vertex, None);
            self.visit(vertex + 1);
            for ch in 0..self.n_channels {
                let cellular = vertex < self.n_cellular;
                if cellular && self.cellular_taken[ch] {
                    continue;
                }
                if cellular {
                    self.cellular_taken[ch] = true;
                }
                self.current.set(vertex, Some(ch));
                self.visit(vertex + 1);
                if cellular {
                    self.cellular_taken[ch] = false;
                }
            }
            self.current.set(vertex, None);
        }
    }

    let mut search = Search {
        gains,
        lin: config.linear(),
        n_cellular: n,
        n_channels: k,
        current: Allocation::unallocated(n, v - n),
        cellular_taken: vec![false; k],
        best: None,
    };
    search.visit(0);
    Ok(search.best.expect("the all-unallocated assignment is always feasible"))
}
