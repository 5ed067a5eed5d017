//! Interference hypergraph and the smallest-last monodegree colorer.
//!
//! Construction has three layers:
//!
//! 1. independent pairs: the edges of the pairwise conflict graph;
//! 2. cumulative hyperedges: a victim together with `Q` interferers, none
//!    of them an independent interferer of the victim, whose summed
//!    interference pushes the victim's wanted-to-interference ratio below
//!    η (ηc at the eNB, ηd at a D2D receiver);
//! 3. a singleton hyperedge for every vertex left uncovered.
//!
//! Coloring visits vertices in reverse elimination order, where each
//! eliminated vertex has minimum monodegree in what is left. A color is
//! unavailable to a vertex when taking it would make some non-singleton
//! hyperedge fully monochromatic (weak coloring).

use std::collections::HashSet;

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ColorChoice, HyperColoring, SimConfig};
use crate::conflict_graph::{build_graph_counted, pick_color, ConflictGraph};
use crate::evaluator::Allocation;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::ops::OpCounter;
use crate::packing;
use crate::radio::LinkGains;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    IndependentPair,
    Cumulative,
    Singleton,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::IndependentPair => "independent-pair",
            EdgeKind::Cumulative => "cumulative",
            EdgeKind::Singleton => "singleton",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterferenceHypergraph {
    base: Hypergraph,
    kinds: Vec<EdgeKind>,
    n_cellular: usize,
    q: usize,
}

impl InterferenceHypergraph {
    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    pub fn kinds(&self) -> &[EdgeKind] {
        &self.kinds
    }

    pub fn n_cellular(&self) -> usize {
        self.n_cellular
    }

    pub fn n_vertices(&self) -> usize {
        self.base.universe()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.kinds.iter().filter(|k| **k == kind).count()
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &[Vertex]> {
        self.base
            .edges()
            .iter()
            .zip(&self.kinds)
            .filter(move |(_, k)| **k == kind)
            .map(|(e, _)| e.as_slice())
    }

    /// Fixture text with a `# kind` suffix on each hyperedge line.
    pub fn to_fixture(&self) -> String {
        self.base.to_fixture_annotated(|j| Some(self.kinds[j].as_str().to_owned()))
    }

    pub fn order(&self) -> EliminationOrder {
        order_min_monodegree(&self.base)
    }

    /// Orders and colors with `k` colors.
    pub fn color<R: Rng + ?Sized>(&self, k: usize, mode: HyperColoring, choice: ColorChoice, rng: &mut R) -> Allocation {
        let order = self.order();
        let colors = color_hypergraph(&self.base, &order.coloring_order, k, mode, choice, rng);
        Allocation::new(self.n_cellular, colors)
    }
}

/// Builds the interference hypergraph for one drop.
pub fn build_hypergraph(gains: &LinkGains, config: &SimConfig) -> InterferenceHypergraph {
    build_hypergraph_counted(gains, config, &mut OpCounter::default())
}

pub fn build_hypergraph_counted(gains: &LinkGains, config: &SimConfig, ops: &mut OpCounter) -> InterferenceHypergraph {
    let graph = build_graph_counted(gains, config, ops);
    from_conflict_graph(&graph, gains, config, ops)
}

fn from_conflict_graph(
    graph: &ConflictGraph,
    gains: &LinkGains,
    config: &SimConfig,
    ops: &mut OpCounter,
) -> InterferenceHypergraph {
    let n = gains.n_cellular();
    let m = gains.n_d2d_pairs();
    let n_vertices = n + m;
    let q = config.q_cumulative;
    let lin = config.linear();

    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut kinds = Vec::new();
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    for (a, b) in graph.edges() {
        seen.insert(vec![a, b]);
        edges.push(vec![a, b]);
        kinds.push(EdgeKind::IndependentPair);
    }

    // (vertex, interference power at the victim's receiver)
    let mut candidates: Vec<(Vertex, f64)> = Vec::with_capacity(n_vertices);
    for victim in 0..n_vertices {
        candidates.clear();
        let (signal, threshold) = if victim < n {
            for d in 0..m {
                if !graph.has_edge(victim, n + d) {
                    candidates.push((n + d, lin.p_d2d_mw * gains.d2dtx_to_enb[d]));
                }
            }
            (lin.p_cellular_mw * gains.cellular_to_enb[victim], lin.eta_c)
        } else {
            let pair = victim - n;
            for u in 0..n {
                if !graph.has_edge(victim, u) {
                    candidates.push((u, lin.p_cellular_mw * gains.cellular_to_d2drx[[u, pair]]));
                }
            }
            for i in (0..m).filter(|&i| i != pair) {
                if !graph.has_edge(victim, n + i) {
                    candidates.push((n + i, lin.p_d2d_mw * gains.d2dtx_to_d2drx[[i, pair]]));
                }
            }
            (lin.p_d2d_mw * gains.d2d_pair[pair], lin.eta_d)
        };
        for group in candidates.iter().combinations(q) {
            ops.construction += 1;
            let interference: f64 = group.iter().map(|(_, p)| p).sum();
            if signal / interference < threshold {
                let mut e: Vec<Vertex> = group.iter().map(|(v, _)| *v).collect();
                e.push(victim);
                e.sort_unstable();
                if seen.insert(e.clone()) {
                    edges.push(e);
                    kinds.push(EdgeKind::Cumulative);
                }
            }
        }
    }

    let mut covered = vec![false; n_vertices];
    for v in edges.iter().flatten() {
        covered[*v] = true;
    }
    for v in (0..n_vertices).filter(|&v| !covered[v]) {
        edges.push(vec![v]);
        kinds.push(EdgeKind::Singleton);
    }

    InterferenceHypergraph {
        base: Hypergraph::from_unique_edges(n_vertices, edges),
        kinds,
        n_cellular: n,
        q,
    }
}

/// Result of smallest-last elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    /// `x_1, ..., x_n`: the order in which vertices are colored. `x_n` was
    /// eliminated first.
    pub coloring_order: Vec<Vertex>,
    /// Monodegree of each eliminated vertex at its elimination, in
    /// elimination order (`x_n` first).
    pub min_monodegrees: Vec<usize>,
}

impl EliminationOrder {
    /// Largest minimum monodegree seen during elimination.
    pub fn max_min_monodegree(&self) -> usize {
        self.min_monodegrees.iter().copied().max().unwrap_or(0)
    }
}

/// Smallest-last elimination: repeatedly take a present vertex of minimum
/// monodegree (lowest label on ties) and strongly delete it.
pub fn order_min_monodegree(h: &Hypergraph) -> EliminationOrder {
    order_min_monodegree_counted(h, &mut OpCounter::default())
}

pub fn order_min_monodegree_counted(h: &Hypergraph, ops: &mut OpCounter) -> EliminationOrder {
    Eliminator::new(h).run(ops)
}

/// Incremental elimination state. Monodegrees only shrink under strong
/// deletion, so a vertex touched by a deletion is marked stale and carries
/// a cheap lower bound until it becomes a candidate for the minimum.
struct Eliminator<'a> {
    edges: &'a [Vec<Vertex>],
    alive: Vec<bool>,
    incident: Vec<Vec<usize>>,
    present: Vec<bool>,
    value: Vec<usize>,
    exact: Vec<bool>,
}

impl<'a> Eliminator<'a> {
    fn new(h: &'a Hypergraph) -> Self {
        let universe = h.universe();
        let edges = h.edges();
        let mut incident = vec![Vec::new(); universe];
        for (j, e) in edges.iter().enumerate() {
            for &v in e {
                incident[v].push(j);
            }
        }
        let present: Vec<bool> = (0..universe).map(|v| h.contains_vertex(v)).collect();
        let mut state = Eliminator {
            edges,
            alive: vec![true; edges.len()],
            incident,
            present,
            value: vec![0; universe],
            exact: vec![false; universe],
        };
        for v in 0..universe {
            if state.present[v] {
                state.value[v] = state.lower_bound(v);
            }
        }
        state
    }

    fn remainders(&self, x: Vertex) -> Vec<Vec<Vertex>> {
        self.incident[x]
            .iter()
            .filter(|&&j| self.alive[j] && self.edges[j].len() > 1)
            .map(|&j| self.edges[j].iter().copied().filter(|&v| v != x).collect())
            .collect()
    }

    /// Greedy disjoint packing, smallest remainders first.
    fn lower_bound(&self, x: Vertex) -> usize {
        let mut rems = self.remainders(x);
        rems.sort_by_key(Vec::len);
        let mut used: HashSet<Vertex> = HashSet::new();
        let mut count = 0;
        for r in rems {
            if r.iter().all(|v| !used.contains(v)) {
                used.extend(r);
                count += 1;
            }
        }
        count
    }

    fn run(mut self, ops: &mut OpCounter) -> EliminationOrder {
        let n_present = self.present.iter().filter(|p| **p).count();
        let mut eliminated = Vec::with_capacity(n_present);
        let mut min_monodegrees = Vec::with_capacity(n_present);
        for _ in 0..n_present {
            let x = loop {
                let mut keys = (0..self.present.len()).filter(|&v| self.present[v]).map(|v| (self.value[v], v));
                let mut first = keys.next().expect("a vertex remains");
                let mut second: Option<(usize, Vertex)> = None;
                for key in keys {
                    if key < first {
                        second = Some(first);
                        first = key;
                    } else if second.is_none_or(|s| key < s) {
                        second = Some(key);
                    }
                }
                let v = first.1;
                if self.exact[v] {
                    break v;
                }
                // v only needs an exact value if it stays ahead of the
                // runner-up; otherwise a lower bound that puts it behind is
                // enough.
                let cap = second.map_or(usize::MAX, |(value, w)| if v < w { value + 1 } else { value });
                let m = packing::max_disjoint_capped(&self.remainders(v), cap);
                self.value[v] = m;
                self.exact[v] = m < cap;
            };
            eliminated.push(x);
            min_monodegrees.push(self.value[x]);
            self.present[x] = false;
            let mut touched = Vec::new();
            for idx in 0..self.incident[x].len() {
                let j = self.incident[x][idx];
                if !self.alive[j] {
                    continue;
                }
                self.alive[j] = false;
                ops.coloring += 1;
                touched.extend(self.edges[j].iter().copied().filter(|&u| u != x && self.present[u]));
            }
            // The old value is an upper bound on the new monodegree; the
            // greedy packing is a lower bound.
            touched.sort_unstable();
            touched.dedup();
            for u in touched {
                self.exact[u] = false;
                self.value[u] = self.value[u].min(self.lower_bound(u));
            }
        }
        eliminated.reverse();
        EliminationOrder {
            coloring_order: eliminated,
            min_monodegrees,
        }
    }
}

/// Colors `order` greedily with `k` colors. Returns a color per label of
/// `h`'s universe (`None` for uncolored or absent vertices).
pub fn color_hypergraph<R: Rng + ?Sized>(
    h: &Hypergraph,
    order: &[Vertex],
    k: usize,
    mode: HyperColoring,
    choice: ColorChoice,
    rng: &mut R,
) -> Vec<Option<usize>> {
    color_hypergraph_counted(h, order, k, mode, choice, rng, &mut OpCounter::default())
}

pub fn color_hypergraph_counted<R: Rng + ?Sized>(
    h: &Hypergraph,
    order: &[Vertex],
    k: usize,
    mode: HyperColoring,
    choice: ColorChoice,
    rng: &mut R,
    ops: &mut OpCounter,
) -> Vec<Option<usize>> {
    let mut incident = vec![Vec::new(); h.universe()];
    for e in h.edges().iter().filter(|e| e.len() > 1) {
        for &v in e {
            incident[v].push(e.as_slice());
        }
    }
    let mut colors: Vec<Option<usize>> = vec![None; h.universe()];
    let mut blocked = vec![false; k];
    for &x in order {
        blocked.iter_mut().for_each(|b| *b = false);
        for e in &incident[x] {
            ops.coloring += 1;
            let mut others = e.iter().filter(|&&v| v != x).map(|&v| colors[v]);
            match mode {
                HyperColoring::Weak => {
                    let first = others.next().flatten();
                    if let Some(c) = first {
                        if others.all(|o| o == Some(c)) {
                            blocked[c] = true;
                        }
                    }
                }
                HyperColoring::Strict => {
                    for c in others.flatten() {
                        blocked[c] = true;
                    }
                }
            }
        }
        let available: Vec<usize> = (0..k).filter(|&c| !blocked[c]).collect();
        colors[x] = pick_color(&available, choice, rng);
    }
    colors
}

/// Hypergraph construction, elimination ordering and coloring with
/// `config.n_channels` colors. Colored vertices get their color as channel.
pub fn allocate<R: Rng + ?Sized>(gains: &LinkGains, config: &SimConfig, rng: &mut R) -> Allocation {
    allocate_counted(gains, config, rng, &mut OpCounter::default())
}

pub fn allocate_counted<R: Rng + ?Sized>(
    gains: &LinkGains,
    config: &SimConfig,
    rng: &mut R,
    ops: &mut OpCounter,
) -> Allocation {
    let h = build_hypergraph_counted(gains, config, ops);
    let order = order_min_monodegree_counted(h.base(), ops);
    let colors = color_hypergraph_counted(
        h.base(),
        &order.coloring_order,
        config.n_channels,
        config.hyper_coloring,
        config.color_choice,
        rng,
        ops,
    );
    Allocation::new(h.n_cellular(), colors)
}

/// Whether any non-singleton hyperedge is fully monochromatic.
pub fn has_monochromatic_edge(h: &Hypergraph, colors: &[Option<usize>]) -> bool {
    h.edges().iter().filter(|e| e.len() > 1).any(|e| {
        let c = colors[e[0]];
        c.is_some() && e.iter().all(|&v| colors[v] == c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{self, Purpose};
    use ndarray::{array, Array2};
    use proptest::prelude::*;

    fn unit_config(n: usize, m: usize, k: usize) -> SimConfig {
        SimConfig {
            n_cellular: n,
            n_d2d_pairs: m,
            n_channels: k,
            p_cellular_dbm: 0.0,
            p_d2d_dbm: 0.0,
            ..SimConfig::default()
        }
    }

    fn stream() -> crate::rng::Stream {
        rng::stream(0, 0, Purpose::HypergraphColoring)
    }

    #[test]
    fn two_weak_interferers_form_a_cumulative_edge() {
        // each D2D transmitter alone: 21 dB at the eNB; together ~18 dB
        let s = 10f64.powf(2.1);
        let gains = LinkGains::new(
            vec![s],
            vec![1e6, 1e6],
            vec![1.0, 1.0],
            array![[1.0, 1.0]],
            array![[0.0, 1.0], [1.0, 0.0]],
        )
        .unwrap();
        let h = build_hypergraph(&gains, &unit_config(1, 2, 2));
        assert_eq!(h.count(EdgeKind::IndependentPair), 0);
        assert_eq!(h.edges_of_kind(EdgeKind::Cumulative).collect::<Vec<_>>(), vec![&[0, 1, 2][..]]);
        assert_eq!(h.count(EdgeKind::Singleton), 0);
        assert!((10.0 * (s / 2.0).log10() - 18.0).abs() < 0.05);
    }

    #[test]
    fn cellular_pair_only() {
        let gains = LinkGains::new(vec![1.0, 2.0], vec![], vec![], Array2::zeros((2, 0)), Array2::zeros((0, 0))).unwrap();
        let h = build_hypergraph(&gains, &unit_config(2, 0, 2));
        assert_eq!(h.base().edges(), &[vec![0, 1]]);
        assert_eq!(h.kinds(), &[EdgeKind::IndependentPair]);
    }

    #[test]
    fn isolated_vertex_gets_singleton() {
        let gains = LinkGains::new(vec![1e6], vec![1e6], vec![1.0], array![[1.0]], Array2::zeros((1, 1))).unwrap();
        let h = build_hypergraph(&gains, &unit_config(1, 1, 1));
        assert_eq!(h.base().edges(), &[vec![0], vec![1]]);
        assert_eq!(h.count(EdgeKind::Singleton), 2);
        assert_eq!(h.to_fixture(), "2 2\n0 # singleton\n1 # singleton\n");
    }

    #[test]
    fn elimination_examples() {
        let h = Hypergraph::new(2, [vec![0, 1]]).unwrap();
        let o = order_min_monodegree(&h);
        assert_eq!(o.coloring_order, vec![1, 0]);
        assert_eq!(o.min_monodegrees, vec![1, 0]);
        let h = Hypergraph::new(4, (0..4).map(|v| vec![v])).unwrap();
        let o = order_min_monodegree(&h);
        assert_eq!(o.coloring_order, vec![3, 2, 1, 0]);
        assert_eq!(o.max_min_monodegree(), 0);
    }

    #[test]
    fn coloring_examples() {
        let h = Hypergraph::new(3, [vec![0, 1, 2]]).unwrap();
        let order = order_min_monodegree(&h).coloring_order;
        let c = color_hypergraph(&h, &order, 1, HyperColoring::Weak, ColorChoice::Random, &mut stream());
        assert_eq!(c.iter().filter(|c| c.is_some()).count(), 2);
        assert!(!has_monochromatic_edge(&h, &c));
        // strict mode treats the 3-edge like a triangle
        let c = color_hypergraph(&h, &order, 1, HyperColoring::Strict, ColorChoice::Random, &mut stream());
        assert_eq!(c.iter().filter(|c| c.is_some()).count(), 1);

        let h = Hypergraph::new(2, [vec![0, 1]]).unwrap();
        let c = color_hypergraph(&h, &[1, 0], 2, HyperColoring::Weak, ColorChoice::Random, &mut stream());
        assert!(c[0].is_some() && c[1].is_some() && c[0] != c[1]);
    }

    #[test]
    fn allocate_trivial() {
        let gains = LinkGains::new(vec![], vec![], vec![], Array2::zeros((0, 0)), Array2::zeros((0, 0))).unwrap();
        assert_eq!(allocate(&gains, &unit_config(0, 0, 1), &mut stream()).n_vertices(), 0);
        let gains = LinkGains::new(vec![1.0], vec![], vec![], Array2::zeros((1, 0)), Array2::zeros((0, 0))).unwrap();
        assert_eq!(allocate(&gains, &unit_config(1, 0, 1), &mut stream()).assignment(), &[Some(0)]);
    }

    /// Elimination by repeated whole-hypergraph recomputation.
    fn naive_order(h: &Hypergraph) -> EliminationOrder {
        let mut h = h.clone();
        let mut eliminated = Vec::new();
        let mut mins = Vec::new();
        while h.n_vertices() > 0 {
            let x = h.min_monodegree_vertex().unwrap();
            mins.push(h.monodegree(x).unwrap());
            eliminated.push(x);
            h = h.strong_delete(x).unwrap();
        }
        eliminated.reverse();
        EliminationOrder {
            coloring_order: eliminated,
            min_monodegrees: mins,
        }
    }

    fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (1usize..12).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(0..n, 1..4), 0..25)
                .prop_map(move |edges| Hypergraph::new(n, edges).unwrap().with_singleton_completion())
        })
    }

    proptest! {
        #[test]
        fn incremental_elimination_matches_naive(h in arb_hypergraph()) {
            prop_assert_eq!(order_min_monodegree(&h), naive_order(&h));
        }

        #[test]
        fn weak_coloring_never_monochromatic(h in arb_hypergraph(), k in 1usize..4, seed in any::<u64>()) {
            let order = order_min_monodegree(&h);
            let mut s = rng::stream(seed, 0, Purpose::HypergraphColoring);
            let c = color_hypergraph(&h, &order.coloring_order, k, HyperColoring::Weak, ColorChoice::Random, &mut s);
            prop_assert!(!has_monochromatic_edge(&h, &c));
            if k > order.max_min_monodegree() {
                prop_assert!(c.iter().all(Option::is_some));
            }
        }
    }
}
