//! Pairwise interference graph and the max-degree greedy colorer used as
//! the baseline allocator.

use rand::Rng;

use crate::config::{ColorChoice, SimConfig};
use crate::error::{Error, Result};
use crate::evaluator::Allocation;
use crate::ops::OpCounter;
use crate::radio::LinkGains;

/// Undirected simple graph on `N + M` vertices, cellular UEs first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    n_cellular: usize,
    n_vertices: usize,
    adjacency: Vec<bool>,
}

impl ConflictGraph {
    pub fn empty(n_cellular: usize, n_vertices: usize) -> Self {
        assert!(n_cellular <= n_vertices);
        ConflictGraph {
            n_cellular,
            n_vertices,
            adjacency: vec![false; n_vertices * n_vertices],
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_cellular(&self) -> usize {
        self.n_cellular
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "no loops");
        self.adjacency[a * self.n_vertices + b] = true;
        self.adjacency[b * self.n_vertices + a] = true;
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.n_vertices + b]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adjacency[v * self.n_vertices..(v + 1) * self.n_vertices];
        row.iter().enumerate().filter(|(_, e)| **e).map(|(u, _)| u)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n_vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_vertices).flat_map(move |i| (i + 1..self.n_vertices).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn n_edges(&self) -> usize {
        self.edges().count()
    }

    /// One `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        self.edges().map(|(i, j)| format!("{i} {j}\n")).collect()
    }

    pub fn from_edge_list(n_cellular: usize, n_vertices: usize, text: &str) -> Result<Self> {
        let mut g = Self::empty(n_cellular, n_vertices);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
                .collect::<Result<_>>()?;
            let [a, b] = nums[..] else {
                return Err(Error::Parse(format!("edge line must be `i j`, got `{line}`")));
            };
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::VertexOutOfRange { vertex: a.max(b) });
            }
            if a == b {
                return Err(Error::Parse(format!("loop at {a}")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }
}

/// Builds the pairwise interference graph.
///
/// Cellular UEs always conflict with each other. `U_n`–`D_m` conflict when
/// the wanted-to-interference ratio falls below δc at the eNB or below δd
/// at `D_m`'s receiver. `D_i`–`D_m` conflict when the ratio falls below δd
/// at either receiver. Noise is not part of these ratios.
pub fn build_graph(gains: &LinkGains, config: &SimConfig) -> ConflictGraph {
    build_graph_counted(gains, config, &mut OpCounter::default())
}

pub fn build_graph_counted(gains: &LinkGains, config: &SimConfig, ops: &mut OpCounter) -> ConflictGraph {
    let n = gains.n_cellular();
    let m = gains.n_d2d_pairs();
    let lin = config.linear();
    let (pc, pd) = (lin.p_cellular_mw, lin.p_d2d_mw);
    let mut g = ConflictGraph::empty(n, n + m);

    for a in 0..n {
        for b in a + 1..n {
            ops.construction += 1;
            g.add_edge(a, b);
        }
    }
    for u in 0..n {
        for d in 0..m {
            ops.construction += 2;
            let at_enb = pc * gains.cellular_to_enb[u] / (pd * gains.d2dtx_to_enb[d]) < lin.delta_c;
            let at_rx = pd * gains.d2d_pair[d] / (pc * gains.cellular_to_d2drx[[u, d]]) < lin.delta_d;
            if at_enb || at_rx {
                g.add_edge(u, n + d);
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            ops.construction += 2;
            let at_j = gains.d2d_pair[j] / gains.d2dtx_to_d2drx[[i, j]] < lin.delta_d;
            let at_i = gains.d2d_pair[i] / gains.d2dtx_to_d2drx[[j, i]] < lin.delta_d;
            if at_j || at_i {
                g.add_edge(n + i, n + j);
            }
        }
    }
    g
}

/// Largest-first ordering: repeatedly take the vertex of maximum degree in
/// the remaining graph (lowest index on ties) and break its edges.
pub fn order_by_max_degree(graph: &ConflictGraph) -> Vec<usize> {
    order_by_max_degree_counted(graph, &mut OpCounter::default())
}

pub fn order_by_max_degree_counted(graph: &ConflictGraph, ops: &mut OpCounter) -> Vec<usize> {
    let n = graph.n_vertices();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let x = (0..n)
            .filter(|&v| !removed[v])
            .max_by(|&a, &b| degree[a].cmp(&degree[b]).then(b.cmp(&a)))
            .expect("a vertex remains");
        removed[x] = true;
        for u in graph.neighbors(x) {
            if !removed[u] {
                degree[u] -= 1;
                ops.coloring += 1;
            }
        }
        order.push(x);
    }
    order
}

pub(crate) fn pick_color<R: Rng + ?Sized>(available: &[usize], choice: ColorChoice, rng: &mut R) -> Option<usize> {
    if available.is_empty() {
        return None;
    }
    Some(match choice {
        ColorChoice::Lowest => available[0],
        ColorChoice::Random => available[rng.random_range(0..available.len())],
    })
}

/// Greedy coloring in largest-first order with `k` colors. A vertex may
/// take any color not already held by one of its neighbors; with none
/// left it stays uncolored.
pub fn color_graph<R: Rng + ?Sized>(graph: &ConflictGraph, k: usize, choice: ColorChoice, rng: &mut R) -> Allocation {
    color_graph_counted(graph, k, choice, rng, &mut OpCounter::default())
}

pub fn color_graph_counted<R: Rng + ?Sized>(
    graph: &ConflictGraph,
    k: usize,
    choice: ColorChoice,
    rng: &mut R,
    ops: &mut OpCounter,
) -> Allocation {
    let order = order_by_max_degree_counted(graph, ops);
    let mut colors: Vec<Option<usize>> = vec![None; graph.n_vertices()];
    let mut blocked = vec![false; k];
    for x in order {
        blocked.iter_mut().for_each(|b| *b = false);
        for u in graph.neighbors(x) {
            ops.coloring += 1;
            if let Some(c) = colors[u] {
                blocked[c] = true;
            }
        }
        let available: Vec<usize> = (0..k).filter(|&c| !blocked[c]).collect();
        colors[x] = pick_color(&available, choice, rng);
    }
    Allocation::new(graph.n_cellular(), colors)
}

/// Graph construction followed by coloring with `config.n_channels` colors.
pub fn allocate<R: Rng + ?Sized>(gains: &LinkGains, config: &SimConfig, rng: &mut R) -> Allocation {
    allocate_counted(gains, config, rng, &mut OpCounter::default())
}

pub fn allocate_counted<R: Rng + ?Sized>(
    gains: &LinkGains,
    config: &SimConfig,
    rng: &mut R,
    ops: &mut OpCounter,
) -> Allocation {
    let graph = build_graph_counted(gains, config, ops);
    color_graph_counted(&graph, config.n_channels, config.color_choice, rng, ops)
}
