//! Hypergraphs over a fixed universe of vertex labels.
//!
//! Vertices keep their original labels through strong deletion, so an
//! induced sub-hypergraph can be compared against its parent directly.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::packing;

pub type Vertex = usize;

/// A family of non-empty, distinct hyperedges over a set of vertices.
///
/// Hyperedges are stored as sorted vertex lists in construction order.
/// Covering (every vertex in some hyperedge) is not enforced here; see
/// [`Hypergraph::with_singleton_completion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    present: Vec<bool>,
    edges: Vec<Vec<Vertex>>,
}

impl Hypergraph {
    /// Vertices `0..n_vertices`, with the given hyperedges. Each hyperedge is
    /// sorted; repeated hyperedges are dropped keeping the first.
    pub fn new<I, E>(n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = Vertex>,
    {
        let mut seen = HashSet::new();
        let mut unique = Vec::new();
        for (index, e) in edges.into_iter().enumerate() {
            let mut e: Vec<Vertex> = e.into_iter().collect();
            if e.is_empty() {
                return Err(Error::EmptyHyperedge { index });
            }
            e.sort_unstable();
            e.dedup();
            if let Some(&v) = e.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::VertexOutOfRange { vertex: v });
            }
            if seen.insert(e.clone()) {
                unique.push(e);
            }
        }
        Ok(Hypergraph {
            present: vec![true; n_vertices],
            edges: unique,
        })
    }

    /// Trusted constructor: edges already sorted, non-empty, in range and
    /// distinct.
    pub(crate) fn from_unique_edges(n_vertices: usize, edges: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(edges.iter().all(|e| !e.is_empty() && e.windows(2).all(|w| w[0] < w[1])));
        Hypergraph {
            present: vec![true; n_vertices],
            edges,
        }
    }

    /// Adds a singleton hyperedge `{x}` for every present vertex that is in
    /// no hyperedge, so that the hyperedges cover the vertex set.
    pub fn with_singleton_completion(mut self) -> Self {
        let mut covered = vec![false; self.present.len()];
        for v in self.edges.iter().flatten() {
            covered[*v] = true;
        }
        for (v, covered) in covered.into_iter().enumerate() {
            if self.present[v] && !covered {
                self.edges.push(vec![v]);
            }
        }
        self
    }

    /// Size of the label space (vertices ever present).
    pub fn universe(&self) -> usize {
        self.present.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.present.iter().filter(|p| **p).count()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, x: Vertex) -> bool {
        self.present.get(x).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.present.iter().enumerate().filter(|(_, p)| **p).map(|(v, _)| v)
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn is_covering(&self) -> bool {
        let mut covered = vec![false; self.present.len()];
        for v in self.edges.iter().flatten() {
            covered[*v] = true;
        }
        self.vertices().all(|v| covered[v])
    }

    fn check(&self, x: Vertex) -> Result<()> {
        if self.contains_vertex(x) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x })
        }
    }

    /// `E(x)`: the hyperedges containing `x`, in family order.
    pub fn edges_at(&self, x: Vertex) -> Result<Vec<&[Vertex]>> {
        self.check(x)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.binary_search(&x).is_ok())
            .map(Vec::as_slice)
            .collect())
    }

    pub fn degree(&self, x: Vertex) -> Result<usize> {
        Ok(self.edges_at(x)?.len())
    }

    /// Removes `x` and every hyperedge containing it.
    pub fn strong_delete(&self, x: Vertex) -> Result<Self> {
        self.check(x)?;
        let mut present = self.present.clone();
        present[x] = false;
        Ok(Hypergraph {
            present,
            edges: self
                .edges
                .iter()
                .filter(|e| e.binary_search(&x).is_err())
                .cloned()
                .collect(),
        })
    }

    /// Induced sub-hypergraph on `keep`: those vertices, and the hyperedges
    /// lying entirely inside them.
    pub fn induced(&self, keep: &[Vertex]) -> Result<Self> {
        let mut present = vec![false; self.present.len()];
        for &v in keep {
            self.check(v)?;
            present[v] = true;
        }
        Ok(Hypergraph {
            edges: self
                .edges
                .iter()
                .filter(|e| e.iter().all(|v| present[*v]))
                .cloned()
                .collect(),
            present,
        })
    }

    /// `m(x, H)`: the largest number of hyperedges at `x` pairwise
    /// intersecting in exactly `{x}`. Singleton hyperedges count zero.
    pub fn monodegree(&self, x: Vertex) -> Result<usize> {
        let remainders = self.remainders_at(x)?;
        Ok(packing::max_disjoint(&remainders))
    }

    /// `e \ {x}` for each non-singleton hyperedge `e` at `x`.
    pub fn remainders_at(&self, x: Vertex) -> Result<Vec<Vec<Vertex>>> {
        Ok(self
            .edges_at(x)?
            .into_iter()
            .filter(|e| e.len() > 1)
            .map(|e| e.iter().copied().filter(|&v| v != x).collect())
            .collect())
    }

    /// The present vertex of smallest monodegree, lowest label on ties.
    pub fn min_monodegree_vertex(&self) -> Result<Vertex> {
        let mut best: Option<(usize, Vertex)> = None;
        for v in self.vertices() {
            let m = self.monodegree(v)?;
            if best.is_none_or(|(bm, _)| m < bm) {
                best = Some((m, v));
            }
        }
        best.map(|(_, v)| v).ok_or(Error::EmptyHypergraph)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let rows: Vec<Vertex> = self.vertices().collect();
        let n_cols = self.edges.len();
        let mut entries = vec![false; rows.len() * n_cols];
        for (j, e) in self.edges.iter().enumerate() {
            for v in e {
                let i = rows.binary_search(v).expect("hyperedge vertex present");
                entries[i * n_cols + j] = true;
            }
        }
        IncidenceMatrix {
            universe: self.universe(),
            rows,
            n_cols,
            entries,
        }
    }

    /// Text form: a `V E` header then one line of vertex labels per
    /// hyperedge. `V` is the universe size.
    pub fn to_fixture(&self) -> String {
        self.to_fixture_annotated(|_| None)
    }

    /// As [`Hypergraph::to_fixture`], with an optional `# note` suffix per
    /// hyperedge line.
    pub fn to_fixture_annotated(&self, mut note: impl FnMut(usize) -> Option<String>) -> String {
        let mut out = format!("{} {}\n", self.universe(), self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            let line: Vec<String> = e.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            if let Some(n) = note(j) {
                let _ = write!(out, " # {n}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the fixture format. Text after `#` on a line is ignored, as
    /// are blank lines.
    pub fn from_fixture(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let nums = parse_numbers(header)?;
        let [n_vertices, n_edges] = nums[..] else {
            return Err(Error::Parse(format!("header must be `V E`, got `{header}`")));
        };
        let edges: Vec<Vec<usize>> = lines.map(parse_numbers).collect::<Result<_>>()?;
        if edges.len() != n_edges {
            return Err(Error::Parse(format!("header says {n_edges} edges, found {}", edges.len())));
        }
        Self::new(n_vertices, edges)
    }
}

fn parse_numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
        .collect()
}

/// Vertex-by-hyperedge boolean matrix. Row `i` is the `i`-th present
/// vertex in ascending label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    universe: usize,
    rows: Vec<Vertex>,
    n_cols: usize,
    entries: Vec<bool>,
}

impl IncidenceMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Vertex label of each row.
    pub fn row_vertices(&self) -> &[Vertex] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries[row * self.n_cols + col]
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.n_cols)
            .map(|j| (0..self.n_rows()).filter(|&i| self.get(i, j)).count())
            .collect()
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        let mut present = vec![false; self.universe];
        for &v in &self.rows {
            present[v] = true;
        }
        let mut h = Hypergraph {
            present,
            edges: Vec::with_capacity(self.n_cols),
        };
        for j in 0..self.n_cols {
            let e: Vec<Vertex> = (0..self.n_rows()).filter(|&i| self.get(i, j)).map(|i| self.rows[i]).collect();
            if e.is_empty() {
                return Err(Error::EmptyHyperedge { index: j });
            }
            h.edges.push(e);
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0], vec![]]),
            Err(Error::EmptyHyperedge { index: 1 })
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0, 3]]),
            Err(Error::VertexOutOfRange { vertex: 3 })
        ));
        let g = h(3, &[&[1, 0], &[0, 1], &[2]]);
        assert_eq!(g.edges(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn singleton_completion_covers() {
        let g = h(4, &[&[0, 1]]);
        assert!(!g.is_covering());
        let g = g.with_singleton_completion();
        assert!(g.is_covering());
        assert_eq!(g.edges(), &[vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn incidence_single_vertex() {
        let m = h(1, &[&[0]]).incidence_matrix();
        assert_eq!((m.n_rows(), m.n_cols()), (1, 1));
        assert!(m.get(0, 0));
    }

    #[test]
    fn edges_at_examples() {
        let g = h(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert_eq!(g.edges_at(0).unwrap(), vec![&[0, 1][..], &[0, 2][..]]);
        let g = h(3, &[&[0, 1]]);
        assert!(g.edges_at(2).unwrap().is_empty());
        assert!(g.edges_at(3).is_err());
    }

    #[test]
    fn strong_delete_examples() {
        // a=0 b=1 c=2 d=3
        let g = h(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        let d = g.strong_delete(1).unwrap();
        assert_eq!(d.edges(), &[vec![2, 3]]);
        assert_eq!(d.vertices().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!(d.strong_delete(1).is_err());

        let g = h(3, &[&[0, 1], &[0, 2], &[0]]);
        assert!(g.strong_delete(0).unwrap().edges().is_empty());
        assert_eq!(g.induced(&[1, 2]).unwrap(), g.strong_delete(0).unwrap());
    }

    #[test]
    fn monodegree_examples() {
        // x=0 star with three leaves
        let star = h(4, &[&[0, 1], &[0, 2], &[0, 3]]);
        assert_eq!(star.monodegree(0).unwrap(), 3);
        // {x,a,b}, {x,b,c}
        assert_eq!(h(4, &[&[0, 1, 2], &[0, 2, 3]]).monodegree(0).unwrap(), 1);
        // {x,a,b}, {x,c,d}, {x,a,c}
        assert_eq!(h(5, &[&[0, 1, 2], &[0, 3, 4], &[0, 1, 3]]).monodegree(0).unwrap(), 2);
        // singleton-only vertex
        assert_eq!(h(2, &[&[0], &[1]]).monodegree(0).unwrap(), 0);
    }

    #[test]
    fn min_monodegree_examples() {
        assert_eq!(h(3, &[&[0], &[1], &[2]]).min_monodegree_vertex().unwrap(), 0);
        let g = h(5, &[&[0, 1], &[0, 2], &[0, 3], &[4]]);
        assert_eq!(g.min_monodegree_vertex().unwrap(), 4);
        assert!(matches!(
            Hypergraph::new(0, Vec::<Vec<usize>>::new()).unwrap().min_monodegree_vertex(),
            Err(Error::EmptyHypergraph)
        ));
    }

    #[test]
    fn fixture_round_trip() {
        let g = h(5, &[&[0, 4], &[1, 2, 3], &[2]]);
        let text = g.to_fixture_annotated(|j| (j == 1).then(|| "cumulative".into()));
        assert_eq!(text, "5 3\n0 4\n1 2 3 # cumulative\n2\n");
        assert_eq!(Hypergraph::from_fixture(&text).unwrap(), g);
        assert!(Hypergraph::from_fixture("3 2\n0 1\n").is_err());
        assert!(Hypergraph::from_fixture("3\n").is_err());
        assert!(Hypergraph::from_fixture("2 1\n0 x\n").is_err());
    }
}
