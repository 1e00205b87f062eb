//! Exhaustive enumeration of small graphs.
//!
//! Labeled graphs on `n` nodes are encoded as bit masks over the
//! lexicographic pair order `(0,1), (0,2), …, (n-2,n-1)`; digraphs use the
//! ordered-pair order. Isomorphism reduction works by orbit sweeps over all
//! label permutations, so it is only meant for the sizes where exhaustive
//! checking is feasible at all (`n ≤ 7`).

use crate::graph::{DiGraph, Graph, NodeId};

/// Number of unordered pairs, i.e. mask width for labeled graphs.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    // pairs (0,1)..(0,n-1) first, then (1,2).. and so on
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Edges selected by `mask` under the lexicographic pair order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    assert!(pair_count(n) <= 63, "mask too narrow for n = {n}");
    let mut edges = Vec::with_capacity(mask.count_ones() as usize);
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> i & 1 == 1 {
                edges.push((u as NodeId, v as NodeId));
            }
            i += 1;
        }
    }
    Graph::new(n, &edges).expect("mask edges are simple by construction")
}

/// Inverse of [`graph_from_mask`] for graphs with all nodes present.
pub fn mask_of(g: &Graph) -> u64 {
    let n = g.universe();
    assert!(pair_count(n) <= 63, "mask too narrow for n = {n}");
    assert_eq!(g.node_count(), n, "mask encoding needs all nodes present");
    let mut mask = 0;
    for (u, v) in g.edges() {
        mask |= 1 << pair_index(n, u as usize, v as usize);
    }
    mask
}

/// All `2^(n(n-1)/2)` labeled graphs on `n` nodes.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pc = pair_count(n);
    assert!(pc <= 30, "labeled sweep infeasible for n = {n}");
    (0..1u64 << pc).map(move |mask| graph_from_mask(n, mask))
}

/// All `2^(n(n-1))` labeled digraphs on `n` nodes.
pub fn labeled_digraphs(n: usize) -> impl Iterator<Item = DiGraph> {
    let ac = n * (n - 1);
    assert!(ac <= 30, "labeled sweep infeasible for n = {n}");
    (0..1u64 << ac).map(move |mask| digraph_from_arc_mask(n, mask))
}

/// Arcs selected by `mask` under the ordered-pair order
/// `(0,1), (0,2), …, (1,0), (1,2), …`.
pub fn digraph_from_arc_mask(n: usize, mask: u64) -> DiGraph {
    assert!(n * (n - 1) <= 63, "mask too narrow for n = {n}");
    let mut arcs = Vec::with_capacity(mask.count_ones() as usize);
    let mut i = 0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                if mask >> i & 1 == 1 {
                    arcs.push((u as NodeId, v as NodeId));
                }
                i += 1;
            }
        }
    }
    DiGraph::new(n, &arcs).expect("mask arcs are simple by construction")
}

/// One representative per isomorphism class: the lexicographically smallest
/// mask of each orbit. Sorted ascending by mask.
pub fn nonisomorphic_graphs(n: usize, connected_only: bool) -> Vec<Graph> {
    assert!((1..=7).contains(&n), "isomorphism sweep supports 1..=7 nodes");
    let pc = pair_count(n);
    let tables = perm_pair_tables(n);
    let total = 1u64 << pc;
    let mut seen = vec![false; total as usize];
    let mut reps = Vec::new();
    for mask in 0..total {
        if seen[mask as usize] {
            continue;
        }
        for t in &tables {
            seen[remap_mask(mask, t) as usize] = true;
        }
        let g = graph_from_mask(n, mask);
        if !connected_only || g.is_connected() {
            reps.push(g);
        }
    }
    reps
}

/// Smallest mask reachable from `mask` by relabeling nodes.
pub fn canonical_mask(n: usize, mask: u64) -> u64 {
    assert!((1..=8).contains(&n), "canonical form supports 1..=8 nodes");
    perm_pair_tables(n).iter().map(|t| remap_mask(mask, t)).min().unwrap()
}

fn remap_mask(mask: u64, table: &[usize]) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << table[i];
    }
    out
}

/// For every permutation of labels, where each pair index lands.
fn perm_pair_tables(n: usize) -> Vec<Vec<usize>> {
    let mut tables = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut table = vec![0; pair_count(n)];
        let mut i = 0;
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                table[i] = pair_index(n, a, b);
                i += 1;
            }
        }
        tables.push(table);
        if !next_permutation(&mut perm) {
            return tables;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_round_trip() {
        for mask in 0..1u64 << pair_count(4) {
            assert_eq!(mask_of(&graph_from_mask(4, mask)), mask);
        }
    }

    #[test]
    fn class_counts_match_known_values() {
        assert_eq!(nonisomorphic_graphs(1, false).len(), 1);
        assert_eq!(nonisomorphic_graphs(2, false).len(), 2);
        assert_eq!(nonisomorphic_graphs(3, false).len(), 4);
        assert_eq!(nonisomorphic_graphs(4, false).len(), 11);
        assert_eq!(nonisomorphic_graphs(5, false).len(), 34);
        assert_eq!(nonisomorphic_graphs(6, false).len(), 156);
        assert_eq!(nonisomorphic_graphs(4, true).len(), 6);
        assert_eq!(nonisomorphic_graphs(5, true).len(), 21);
        assert_eq!(nonisomorphic_graphs(6, true).len(), 112);
    }

    #[test]
    fn canonical_mask_is_relabel_invariant() {
        let a = mask_of(&Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap());
        let b = mask_of(&Graph::new(4, &[(2, 0), (0, 1), (1, 3)]).unwrap());
        assert_eq!(canonical_mask(4, a), canonical_mask(4, b));
        let c = mask_of(&Graph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap());
        assert_ne!(canonical_mask(4, a), canonical_mask(4, c));
    }

    #[test]
    fn labeled_counts() {
        assert_eq!(labeled_graphs(4).count(), 64);
        assert_eq!(labeled_digraphs(3).count(), 64);
        let d = digraph_from_arc_mask(3, 0b000011);
        assert!(d.has_arc(0, 1) && d.has_arc(0, 2));
        assert_eq!(d.arc_count(), 2);
    }
}
