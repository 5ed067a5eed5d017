//! Maximum packing of pairwise-disjoint sets.
//!
//! The monodegree of `x` is the largest subfamily of hyperedges at `x`
//! that pairwise meet only in `x`, i.e. a maximum packing of the
//! remainders `e \ {x}`. Exact routes: a matching-based one when every
//! set has at most two elements, a branch-and-bound search, and for dense
//! families over few elements a recursion on the free elements.

use fixedbitset::FixedBitSet;
use microlp::{ComparisonOp, OptimizationDirection, Problem};
use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;

/// Maximum number of pairwise-disjoint sets in `sets`. Empty sets are
/// ignored. Dispatches to the matching route when possible.
pub fn max_disjoint(sets: &[Vec<usize>]) -> usize {
    max_disjoint_capped(sets, usize::MAX)
}

/// `min(max_disjoint(sets), cap)`. The search stops as soon as it finds
/// `cap` disjoint sets, which is much cheaper than proving optimality.
pub fn max_disjoint_capped(sets: &[Vec<usize>], cap: usize) -> usize {
    let sets = normalize(sets);
    if sets.iter().all(|s| s.len() <= 2) {
        max_disjoint_small(&sets).min(cap)
    } else {
        search_capped(&sets, cap, true)
    }
}

/// Sorted, element-deduplicated, non-empty, family-deduplicated copy.
fn normalize(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut family: Vec<Vec<usize>> = sets
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    family.sort();
    family.dedup();
    family
}

/// Matching route for sets of size at most two.
///
/// Any packing that uses a pair `{a, b}` where `{a}` is also a set can trade
/// the pair for `{a}` without losing size, so the optimum is the number of
/// distinct singletons plus a maximum matching on the pairs that avoid
/// every singleton element.
pub fn max_disjoint_small(sets: &[Vec<usize>]) -> usize {
    let sets = normalize(sets);
    assert!(sets.iter().all(|s| s.len() <= 2), "matching route needs |set| <= 2");
    let mut singletons: Vec<usize> = sets.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
    singletons.sort_unstable();
    singletons.dedup();
    let is_single = |v: &usize| singletons.binary_search(v).is_ok();

    let mut labels: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for s in sets.iter().filter(|s| s.len() == 2) {
        if is_single(&s[0]) || is_single(&s[1]) {
            continue;
        }
        pairs.push((s[0], s[1]));
        labels.extend([s[0], s[1]]);
    }
    if pairs.is_empty() {
        return singletons.len();
    }
    labels.sort_unstable();
    labels.dedup();
    let idx = |v: usize| labels.binary_search(&v).unwrap() as u32;
    let graph: UnGraph<(), ()> = UnGraph::from_edges(pairs.iter().map(|&(a, b)| (idx(a), idx(b))));
    singletons.len() + maximum_matching(&graph).len()
}

/// Branch-and-bound route, exact for any set sizes.
///
/// Works on the conflict graph of the family (sets adjacent when they
/// share an element), where a packing is an independent set. Connected
/// components are solved separately. Inside a component the search is a
/// bitset max-clique search on the complement: live sets are greedily
/// partitioned into cliques of pairwise-intersecting sets, at most one set
/// per clique can be taken, and sets are branched on in reverse partition
/// order.
pub fn max_disjoint_search(sets: &[Vec<usize>]) -> usize {
    search_capped(sets, usize::MAX, false)
}

/// General route: branch and bound, or the free-element recursion for
/// dense families over few elements.
pub fn max_disjoint_general(sets: &[Vec<usize>]) -> usize {
    search_capped(sets, usize::MAX, true)
}

fn search_capped(sets: &[Vec<usize>], cap: usize, element_route: bool) -> usize {
    let family = normalize(sets);
    // A set containing another set of the family can always be swapped
    // for the smaller one.
    let mut family: Vec<Vec<usize>> = family
        .iter()
        .filter(|s| {
            !family
                .iter()
                .any(|other| other.len() < s.len() && other.iter().all(|v| s.binary_search(v).is_ok()))
        })
        .cloned()
        .collect();
    if family.is_empty() {
        return 0;
    }

    let mut labels: Vec<usize> = family.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    if element_route && labels.len() <= ELEMENT_DP_MAX && family.len() >= LP_MIN_SETS {
        return by_elements(&family, &labels).min(cap);
    }
    let mut containing = vec![Vec::new(); labels.len()];
    for (i, s) in family.iter().enumerate() {
        for v in s {
            containing[labels.binary_search(v).unwrap()].push(i);
        }
    }
    // Fewest conflicts first: such sets are the likeliest members of a
    // large packing.
    let degree: Vec<usize> = family
        .iter()
        .map(|s| s.iter().map(|v| containing[labels.binary_search(v).unwrap()].len()).sum())
        .collect();
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| degree[i]);
    family = order.iter().map(|&i| family[i].clone()).collect();

    let n_sets = family.len();
    let mut containing = vec![FixedBitSet::with_capacity(n_sets); labels.len()];
    for (i, s) in family.iter().enumerate() {
        for v in s {
            containing[labels.binary_search(v).unwrap()].insert(i);
        }
    }
    let conflicts: Vec<FixedBitSet> = family
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut c = FixedBitSet::with_capacity(n_sets);
            for v in s {
                c.union_with(&containing[labels.binary_search(v).unwrap()]);
            }
            c.set(i, false);
            c
        })
        .collect();

    let search = Search {
        conflicts: &conflicts,
        containing: &containing,
    };
    let mut all = FixedBitSet::with_capacity(n_sets);
    all.insert_range(..);
    let mut total = 0;
    for comp in search.components(&all) {
        if total >= cap {
            break;
        }
        let mut best = 0;
        search.expand(comp, 0, cap - total, &mut best);
        total += best;
    }
    total.min(cap)
}

/// Below this many live sets the clique bound alone is used.
const LP_MIN_SETS: usize = 24;

/// Dense families over at most this many elements are solved by
/// recursion on the set of still-free elements instead.
const ELEMENT_DP_MAX: usize = 24;

/// Memoized recursion over free-element masks: the lowest free element
/// is either left uncovered or covered by one of the sets whose lowest
/// element it is. The memo is indexed by mask and stores value + 1.
fn by_elements(family: &[Vec<usize>], labels: &[usize]) -> usize {
    fn go(free: u32, by_low: &[Vec<u32>], memo: &mut [u8]) -> u8 {
        if free == 0 {
            return 0;
        }
        if memo[free as usize] != 0 {
            return memo[free as usize] - 1;
        }
        let e = free.trailing_zeros();
        let mut best = go(free & !(1 << e), by_low, memo);
        for &s in &by_low[e as usize] {
            if s & !free == 0 {
                best = best.max(1 + go(free & !s, by_low, memo));
            }
        }
        memo[free as usize] = best + 1;
        best
    }
    let mut by_low = vec![Vec::new(); labels.len()];
    for s in family {
        let mask = s
            .iter()
            .fold(0u32, |m, v| m | 1 << labels.binary_search(v).unwrap());
        by_low[mask.trailing_zeros() as usize].push(mask);
    }
    let mut memo = vec![0u8; 1 << labels.len()];
    go((1u32 << labels.len()) - 1, &by_low, &mut memo) as usize
}

struct Search<'a> {
    /// Sets sharing an element with set `i`, excluding `i`.
    conflicts: &'a [FixedBitSet],
    /// Sets containing element `e`.
    containing: &'a [FixedBitSet],
}

impl Search<'_> {
    fn components(&self, live: &FixedBitSet) -> Vec<FixedBitSet> {
        let mut left = live.clone();
        let mut out = Vec::new();
        while let Some(start) = left.ones().next() {
            let mut comp = FixedBitSet::with_capacity(live.len());
            let mut stack = vec![start];
            left.set(start, false);
            while let Some(i) = stack.pop() {
                comp.insert(i);
                let mut next = self.conflicts[i].clone();
                next.intersect_with(&left);
                for j in next.ones() {
                    left.set(j, false);
                    stack.push(j);
                }
            }
            out.push(comp);
        }
        out
    }

    /// Greedy clique partition of `live`: returns the sets in partition
    /// order and, for each, the number of cliques opened so far.
    fn partition(&self, live: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
        let mut left = live.clone();
        let mut sets = Vec::with_capacity(live.count_ones(..));
        let mut bounds = Vec::with_capacity(sets.capacity());
        let mut k = 0;
        while !left.is_clear() {
            k += 1;
            let mut candidates = left.clone();
            while let Some(i) = candidates.ones().next() {
                sets.push(i);
                bounds.push(k);
                left.set(i, false);
                candidates.set(i, false);
                candidates.intersect_with(&self.conflicts[i]);
            }
        }
        (sets, bounds)
    }

    /// Floor of the fractional packing optimum over `live`.
    fn lp_bound(&self, live: &FixedBitSet) -> Option<usize> {
        let mut problem = Problem::new(OptimizationDirection::Maximize);
        let mut var = vec![None; live.len()];
        for i in live.ones() {
            var[i] = Some(problem.add_var(1.0, (0.0, 1.0)));
        }
        for through in self.containing {
            let row: Vec<_> = through.ones().filter_map(|i| var[i]).map(|v| (v, 1.0)).collect();
            if row.len() > 1 {
                problem.add_constraint(&row, ComparisonOp::Le, 1.0);
            }
        }
        let value = problem.solve().ok()?.objective();
        Some((value + 1e-6).floor() as usize)
    }

    fn expand(&self, mut live: FixedBitSet, chosen: usize, cap: usize, best: &mut usize) {
        if live.is_clear() {
            *best = (*best).max(chosen);
            return;
        }
        let (sets, bounds) = self.partition(&live);
        let cliques = bounds.last().copied().unwrap_or(0);
        if chosen + cliques > *best && sets.len() >= LP_MIN_SETS {
            if let Some(lp) = self.lp_bound(&live) {
                if chosen + lp <= *best {
                    return;
                }
            }
        }
        for (&i, &k) in sets.iter().zip(&bounds).rev() {
            if *best >= cap || chosen + k <= *best {
                return;
            }
            let mut rest = live.clone();
            rest.set(i, false);
            rest.difference_with(&self.conflicts[i]);
            self.expand(rest, chosen + 1, cap, best);
            live.set(i, false);
        }
    }
}
