//! Graph family generators.
//!
//! Deterministic given their parameters; the randomized ones take an explicit
//! seed and never touch global RNG state.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Graph, NodeId};

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("graph size must be at least 1"));
    }
    if n > u32::MAX as usize {
        return Err(Error::usage(format!("graph size {n} too large")));
    }
    Ok(())
}

/// Star with center 0 and leaves `1..n`.
pub fn star(n: usize) -> Result<Graph> {
    check_size(n)?;
    let edges: Vec<(NodeId, NodeId)> = (1..n as NodeId).map(|v| (0, v)).collect();
    Graph::new(n, &edges)
}

/// Complete graph on `n` nodes.
pub fn complete(n: usize) -> Result<Graph> {
    check_size(n)?;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges)
}

/// Complete bipartite graph with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    check_size(a)?;
    check_size(b)?;
    check_size(a + b)?;
    let mut edges = Vec::with_capacity(a * b);
    for u in 0..a as NodeId {
        for v in a as NodeId..(a + b) as NodeId {
            edges.push((u, v));
        }
    }
    Graph::new(a + b, &edges)
}

/// Cycle `0 - 1 - … - (n-1) - 0`. Needs `n ≥ 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    check_size(n)?;
    if n < 3 {
        return Err(Error::usage(format!("cycle needs at least 3 nodes, got {n}")));
    }
    let mut edges: Vec<(NodeId, NodeId)> =
        (0..n as NodeId - 1).map(|u| (u, u + 1)).collect();
    edges.push((0, n as NodeId - 1));
    Graph::new(n, &edges)
}

/// Path `0 - 1 - … - (n-1)`.
pub fn path(n: usize) -> Result<Graph> {
    check_size(n)?;
    let edges: Vec<(NodeId, NodeId)> = (0..n as NodeId - 1).map(|u| (u, u + 1)).collect();
    Graph::new(n, &edges)
}

/// Simple d-regular graph via stub pairing with rejection.
///
/// Needs `d < n` and `n·d` even. Deterministic given the seed.
pub fn random_d_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    check_size(n)?;
    if d >= n {
        return Err(Error::usage(format!("degree {d} needs more than {n} nodes")));
    }
    if n * d % 2 != 0 {
        return Err(Error::usage(format!("no {d}-regular graph on {n} nodes: n*d is odd")));
    }
    if d == 0 {
        return Graph::new(n, &[]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        if let Some(edges) = pair_stubs(n, d, &mut rng) {
            return Graph::new(n, &edges);
        }
    }
    Err(Error::usage(format!("gave up pairing a simple {d}-regular graph on {n} nodes")))
}

/// One pairing attempt: shuffle all stubs, keep pairs that form new simple
/// edges, re-queue the rest; give up when a full pass makes no progress.
fn pair_stubs(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(NodeId, NodeId)>> {
    let mut edges: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(n * d / 2);
    let mut stubs: Vec<NodeId> =
        (0..n as NodeId).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !edges.insert((a, b)) {
                leftover.extend_from_slice(pair);
            }
        }
        if leftover.len() == stubs.len() {
            return None;
        }
        stubs = leftover;
    }
    let mut out: Vec<(NodeId, NodeId)> = edges.into_iter().collect();
    out.sort_unstable();
    Some(out)
}

/// Disjoint union of complete graphs with the given sizes, labeled
/// consecutively block by block.
pub fn disjoint_cliques(sizes: &[usize]) -> Result<Graph> {
    if sizes.is_empty() {
        return Err(Error::usage("need at least one clique size"));
    }
    let n: usize = sizes.iter().sum();
    check_size(n)?;
    let mut edges = Vec::new();
    let mut base = 0 as NodeId;
    for &s in sizes {
        check_size(s)?;
        for u in 0..s as NodeId {
            for v in u + 1..s as NodeId {
                edges.push((base + u, base + v));
            }
        }
        base += s as NodeId;
    }
    Graph::new(n, &edges)
}

/// Circulant graph: node `i` joined to `i ± s (mod n)` for each offset `s`.
/// Offsets must be distinct and in `1..=n/2`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    check_size(n)?;
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for &s in offsets {
        if s == 0 || s > n / 2 {
            return Err(Error::usage(format!("offset {s} out of range 1..={}", n / 2)));
        }
        if !seen.insert(s) {
            return Err(Error::usage(format!("duplicate offset {s}")));
        }
        let wrap = if 2 * s == n { n / 2 } else { n };
        for i in 0..wrap {
            let j = (i + s) % n;
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            edges.push((a as NodeId, b as NodeId));
        }
    }
    edges.sort_unstable();
    Graph::new(n, &edges)
}

/// Independent edges with probability `p`. Deterministic given the seed.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_size(n)?;
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

/// Independent arcs with probability `p` over all ordered pairs.
/// Deterministic given the seed.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<DiGraph> {
    check_size(n)?;
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n as NodeId {
        for v in 0..n as NodeId {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    DiGraph::new(n, &arcs)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::usage(format!("probability {p} not in [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_families_have_expected_edge_counts() {
        assert_eq!(complete(6).unwrap().edge_count(), 15);
        assert_eq!(star(5).unwrap().edge_count(), 4);
        assert_eq!(complete_bipartite(2, 3).unwrap().edge_count(), 6);
        assert_eq!(cycle(7).unwrap().edge_count(), 7);
        assert_eq!(path(1).unwrap().edge_count(), 0);
        assert_eq!(path(6).unwrap().edge_count(), 5);
    }

    #[test]
    fn complete_bipartite_has_no_within_part_edges() {
        let g = complete_bipartite(3, 4).unwrap();
        for (u, v) in g.edges() {
            assert!((u < 3) != (v < 3), "edge ({u}, {v}) stays inside a part");
        }
    }

    #[test]
    fn regular_generator_hits_every_degree() {
        for seed in 0..5 {
            let g = random_d_regular(10, 4, seed).unwrap();
            assert_eq!(g.edge_count(), 20);
            for u in g.nodes() {
                assert_eq!(g.degree(u), 4, "node {u} off-degree (seed {seed})");
            }
        }
        let g = random_d_regular(9, 8, 1).unwrap();
        assert_eq!(g.to_text(), complete(9).unwrap().to_text());
    }

    #[test]
    fn regular_generator_rejects_bad_params() {
        assert!(random_d_regular(5, 3, 0).is_err());
        assert!(random_d_regular(4, 4, 0).is_err());
    }

    #[test]
    fn seeded_generators_are_reproducible() {
        let a = random_d_regular(20, 3, 42).unwrap();
        let b = random_d_regular(20, 3, 42).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        let c = erdos_renyi(12, 0.4, 7).unwrap();
        let d = erdos_renyi(12, 0.4, 7).unwrap();
        assert_eq!(c.to_text(), d.to_text());
        let e = random_digraph(9, 0.3, 7).unwrap();
        let f = random_digraph(9, 0.3, 7).unwrap();
        assert_eq!(e.to_text(), f.to_text());
    }

    #[test]
    fn edge_probability_extremes() {
        assert_eq!(erdos_renyi(8, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(8, 1.0, 1).unwrap().edge_count(), 28);
        assert_eq!(random_digraph(5, 1.0, 1).unwrap().arc_count(), 20);
        assert!(erdos_renyi(5, 1.5, 1).is_err());
    }

    #[test]
    fn clique_blocks_are_separate_components() {
        let g = disjoint_cliques(&[3, 3]).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), 3);
        assert_eq!(comps[1].len(), 3);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn circulant_degrees_match_offsets() {
        let g = circulant(8, &[1, 4]).unwrap();
        for u in g.nodes() {
            assert_eq!(g.degree(u), 3);
        }
        let h = circulant(8, &[1, 2]).unwrap();
        for u in h.nodes() {
            assert_eq!(h.degree(u), 4);
        }
        assert!(circulant(8, &[0]).is_err());
        assert!(circulant(8, &[5]).is_err());
        assert!(circulant(8, &[1, 1]).is_err());
    }
}
