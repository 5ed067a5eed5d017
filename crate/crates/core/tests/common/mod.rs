//! Exhaustive oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library's packing or elimination code; the
//! oracles enumerate subfamilies and subsets directly.

#![allow(dead_code)]

use hyperalloc::Hypergraph;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monodegree by enumerating every subfamily of the non-singleton
/// hyperedges at `x` whose members pairwise meet only in `x`, keeping the
/// largest. Incompatible extensions are skipped but nothing is bounded.
pub fn brute_monodegree(h: &Hypergraph, x: usize) -> usize {
    fn extend(at: &[&Vec<usize>], x: usize, from: usize, chosen: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        for i in from..at.len() {
            let fits = chosen
                .iter()
                .all(|&j| at[i].iter().all(|v| *v == x || !at[j].contains(v)));
            if fits {
                chosen.push(i);
                extend(at, x, i + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let at: Vec<&Vec<usize>> = h.edges().iter().filter(|e| e.len() > 1 && e.contains(&x)).collect();
    let mut best = 0;
    extend(&at, x, 0, &mut Vec::new(), &mut best);
    best
}

/// Hyperedges of `h` lying inside the vertex set `mask`.
fn induced_edges(h: &Hypergraph, mask: u32) -> Vec<Vec<usize>> {
    h.edges()
        .iter()
        .filter(|e| e.iter().all(|&v| mask >> v & 1 == 1))
        .cloned()
        .collect()
}

/// `M(H)`: over every non-empty vertex subset `Y`, the minimum brute-force
/// monodegree in the induced sub-hypergraph on `Y`; the maximum of those.
pub fn exhaustive_m(h: &Hypergraph) -> usize {
    let n = h.universe();
    assert!(n <= 16, "oracle limited to 16 vertices");
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let sub = Hypergraph::new(n, induced_edges(h, mask)).unwrap();
        let min = (0..n)
            .filter(|v| mask >> v & 1 == 1)
            .map(|v| brute_monodegree(&sub, v))
            .min()
            .unwrap();
        best = best.max(min);
    }
    best
}

/// Random hypergraph on `n` vertices with `n_edges` hyperedges of sizes in
/// `sizes`, completed with singletons so it covers every vertex.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, n_edges: usize, sizes: std::ops::RangeInclusive<usize>) -> Hypergraph {
    let labels: Vec<usize> = (0..n).collect();
    let edges: Vec<Vec<usize>> = (0..n_edges)
        .map(|_| {
            let k = rng.random_range(sizes.clone()).min(n);
            labels.choose_multiple(rng, k).copied().collect()
        })
        .collect();
    Hypergraph::new(n, edges).unwrap().with_singleton_completion()
}

/// As [`random_hypergraph`], but no vertex lies in more than `max_degree`
/// hyperedges; edges that would break the cap are skipped.
pub fn random_hypergraph_capped<R: Rng>(
    rng: &mut R,
    n: usize,
    attempts: usize,
    sizes: std::ops::RangeInclusive<usize>,
    max_degree: usize,
) -> Hypergraph {
    let labels: Vec<usize> = (0..n).collect();
    let mut degree = vec![0; n];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for _ in 0..attempts {
        let k = rng.random_range(sizes.clone()).min(n);
        let mut e: Vec<usize> = labels.choose_multiple(rng, k).copied().collect();
        e.sort_unstable();
        if edges.contains(&e) || e.iter().any(|&v| degree[v] >= max_degree) {
            continue;
        }
        for &v in &e {
            degree[v] += 1;
        }
        edges.push(e);
    }
    Hypergraph::new(n, edges).unwrap().with_singleton_completion()
}

/// Star: centre 0 joined to leaves `1..=m` by 2-edges.
pub fn star(m: usize) -> Hypergraph {
    Hypergraph::new(m + 1, (1..=m).map(|leaf| vec![0, leaf])).unwrap()
}

/// All 2-edges on `m + 1` vertices: every vertex is the centre of an
/// `m`-star.
pub fn clique(m: usize) -> Hypergraph {
    let n = m + 1;
    Hypergraph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b]))).unwrap()
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Standard normal quantile.
pub fn z(p: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().inverse_cdf(p)
}

/// One-sided 95% lower confidence bound on the mean of `xs`.
pub fn lower_bound_95(xs: &[f64]) -> f64 {
    let (m, se) = mean_se(xs);
    m - z(0.95) * se
}

/// One-sided sign test: p-value for "`wins` out of `wins + losses`
/// non-tied pairs" under a fair coin.
pub fn sign_test_p(wins: u64, losses: u64) -> f64 {
    let n = wins + losses;
    if n == 0 || wins == 0 {
        return 1.0;
    }
    Binomial::new(0.5, n).unwrap().sf(wins - 1)
}
