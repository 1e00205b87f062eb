//! Vertex separators: exact solvers for small graphs and a heuristic for
//! everything else.
//!
//! Three separator notions share one shape: remove a node set so that what
//! remains is "small". Plain separators bound every component size by `k`;
//! the g-remainder variant lets components larger than `k` survive as long
//! as they total fewer than `g` nodes; the reachability variant bounds
//! every directed reach set by `k`. The min-sum objective `|S| + k`,
//! minimized over `k`, brackets the critical corruption budget within a
//! factor of two, which is why these solvers sit underneath both the
//! adversary constructions and the oracle cross-checks.
//!
//! Exact solving is NP-hard, so the exact entry points enumerate with
//! branch and bound over `u64` masks and are capped ([`EXACT_CAP`] by
//! default, hard limit 64 nodes per connected piece). The heuristic peels
//! minimum vertex cuts between distant node pairs and is valid at any size,
//! with no optimality promise.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Graph, NodeId, NodeSet};

/// Default cap on the largest connected piece the exact solvers accept.
pub const EXACT_CAP: usize = 24;

/// A separator with the constraint it was solved for.
#[derive(Clone, Debug)]
pub struct SeparatorResult {
    pub separator: NodeSet,
    /// Component-size (or reach) bound the separator satisfies.
    pub k: usize,
    /// Remainder allowance; 1 for plain separators.
    pub g: usize,
    /// `|separator| + k`.
    pub objective: usize,
    /// Residual component sizes (reach indices for directed results),
    /// largest first.
    pub profile: Vec<usize>,
}

impl SeparatorResult {
    fn undirected(graph: &Graph, separator: NodeSet, k: usize, g: usize) -> SeparatorResult {
        let mut profile: Vec<usize> = graph
            .induced_remove(&separator)
            .connected_components()
            .iter()
            .map(|c| c.len())
            .collect();
        profile.sort_unstable_by(|a, b| b.cmp(a));
        let objective = separator.len() + k;
        SeparatorResult { separator, k, g, objective, profile }
    }

    fn directed(graph: &DiGraph, separator: NodeSet, k: usize) -> SeparatorResult {
        let h = graph.induced_remove(&separator);
        let mut profile: Vec<usize> =
            h.nodes().map(|v| h.reach_set(v).expect("present node").len()).collect();
        profile.sort_unstable_by(|a, b| b.cmp(a));
        let objective = separator.len() + k;
        SeparatorResult { separator, k, g: 1, objective, profile }
    }

    /// Largest residual component size (or reach index); 0 when nothing
    /// remains.
    pub fn max_residual(&self) -> usize {
        self.profile.first().copied().unwrap_or(0)
    }
}

/// Checks that removing `separator` leaves components of size at most `k`.
pub fn verify_separator(graph: &Graph, separator: &NodeSet, k: usize) -> bool {
    graph
        .induced_remove(separator)
        .connected_components()
        .iter()
        .all(|c| c.len() <= k)
}

/// Checks that components larger than `k` total fewer than `g` nodes after
/// removing `separator`.
pub fn verify_g_remainder(graph: &Graph, separator: &NodeSet, k: usize, g: usize) -> bool {
    let big: usize = graph
        .induced_remove(separator)
        .connected_components()
        .iter()
        .map(|c| c.len())
        .filter(|&s| s > k)
        .sum();
    big < g
}

/// Checks that every reach set has at most `k` members after removing
/// `separator`.
pub fn verify_reach_separator(graph: &DiGraph, separator: &NodeSet, k: usize) -> bool {
    let h = graph.induced_remove(separator);
    let ok = h.nodes().all(|v| h.reach_set(v).expect("present node").len() <= k);
    ok
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::usage(format!("bound k = {k} out of range 1..={n}")));
    }
    Ok(())
}

fn check_piece_cap(size: usize, cap: usize) -> Result<()> {
    let cap = cap.min(64);
    if size > cap {
        return Err(Error::capacity(format!(
            "exact search over a {size}-node piece exceeds the cap of {cap}"
        )));
    }
    Ok(())
}

/// Minimum set whose removal leaves every component with at most `k` nodes.
/// Exact; connected pieces larger than `cap` are rejected.
pub fn exact_separator(graph: &Graph, k: usize, cap: usize) -> Result<SeparatorResult> {
    let n = graph.node_count();
    check_k(k, n.max(1))?;
    let mut separator = NodeSet::empty(graph.universe());
    for comp in graph.connected_components() {
        if comp.len() <= k {
            continue;
        }
        check_piece_cap(comp.len(), cap)?;
        let ids = comp.to_vec();
        let adj = local_adjacency(graph, &ids);
        let sol = solve_bounded_components(&adj, k);
        for i in iter_mask(sol) {
            separator.insert(ids[i]);
        }
    }
    Ok(SeparatorResult::undirected(graph, separator, k, 1))
}

/// Minimizes `|S_G(k)| + k` over all `k`, ties to the smallest `k`.
pub fn min_sum(graph: &Graph, cap: usize) -> Result<SeparatorResult> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::usage("empty graph has no separator objective"));
    }
    let results: Vec<Result<SeparatorResult>> =
        (1..=n).into_par_iter().map(|k| exact_separator(graph, k, cap)).collect();
    let mut best: Option<SeparatorResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| (r.objective, r.k) < (b.objective, b.k)) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one k was swept"))
}

/// Minimum set whose removal leaves components larger than `k` totaling
/// fewer than `g` nodes. Exact; capped on the whole present node count
/// because the allowance couples components.
pub fn exact_g_remainder(graph: &Graph, k: usize, g: usize, cap: usize) -> Result<SeparatorResult> {
    let n = graph.node_count();
    check_k(k, n.max(1))?;
    if g == 0 {
        return Err(Error::usage("remainder allowance g must be at least 1"));
    }
    if g == 1 {
        let mut r = exact_separator(graph, k, cap)?;
        r.g = 1;
        return Ok(r);
    }
    check_piece_cap(n, cap)?;
    let ids: Vec<NodeId> = graph.present().to_vec();
    let adj = local_adjacency(graph, &ids);
    let sol = solve_bounded_remainder(&adj, k, g);
    let mut separator = NodeSet::empty(graph.universe());
    for i in iter_mask(sol) {
        separator.insert(ids[i]);
    }
    Ok(SeparatorResult::undirected(graph, separator, k, g))
}

/// Minimizes `|S_G(k,g)| + k` over all `k`, ties to the smallest `k`.
pub fn min_sum_g(graph: &Graph, g: usize, cap: usize) -> Result<SeparatorResult> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::usage("empty graph has no separator objective"));
    }
    let results: Vec<Result<SeparatorResult>> =
        (1..=n).into_par_iter().map(|k| exact_g_remainder(graph, k, g, cap)).collect();
    let mut best: Option<SeparatorResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| (r.objective, r.k) < (b.objective, b.k)) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one k was swept"))
}

/// Minimum set whose removal leaves every reach set with at most `k`
/// members. Exact; weakly connected pieces larger than `cap` are rejected.
pub fn exact_reach_separator(graph: &DiGraph, k: usize, cap: usize) -> Result<SeparatorResult> {
    let n = graph.node_count();
    check_k(k, n.max(1))?;
    let mut separator = NodeSet::empty(graph.universe());
    for comp in graph.weak_components() {
        if comp.len() <= k {
            continue;
        }
        check_piece_cap(comp.len(), cap)?;
        let ids = comp.to_vec();
        let radj = local_in_adjacency(graph, &ids);
        let sol = solve_bounded_reach(&radj, k);
        for i in iter_mask(sol) {
            separator.insert(ids[i]);
        }
    }
    Ok(SeparatorResult::directed(graph, separator, k))
}

/// Minimizes `|S_D(k)| + k` over all `k`, ties to the smallest `k`.
pub fn reach_min_sum(graph: &DiGraph, cap: usize) -> Result<SeparatorResult> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::usage("empty graph has no separator objective"));
    }
    let results: Vec<Result<SeparatorResult>> =
        (1..=n).into_par_iter().map(|k| exact_reach_separator(graph, k, cap)).collect();
    let mut best: Option<SeparatorResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| (r.objective, r.k) < (b.objective, b.k)) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one k was swept"))
}

/// Valid separator at any size: repeatedly split each oversized component
/// with a minimum vertex cut between two distant nodes, falling back to
/// removing its highest-degree node when no non-adjacent pair is found.
/// `effort` extra seeded node pairs are tried per split, keeping the
/// cheapest cut. No optimality promise; deterministic given the seed.
pub fn heuristic_separator(graph: &Graph, k: usize, effort: usize, seed: u64) -> SeparatorResult {
    assert!(k >= 1, "bound k must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut separator = NodeSet::empty(graph.universe());
    let mut work = graph.clone();
    loop {
        let Some(comp) = work.connected_components().into_iter().find(|c| c.len() > k) else {
            break;
        };
        let cut = split_component(&work, &comp, effort, &mut rng);
        debug_assert!(!cut.is_empty());
        separator.union_with(&cut);
        work = work.induced_remove(&cut);
    }
    SeparatorResult::undirected(graph, separator, k, 1)
}

/// Best heuristic `|S| + max residual component` over a geometric `k`
/// sweep; the result's bound is the realized largest component, so its
/// objective is honest even when the heuristic overshoots.
pub fn approx_min_sum(graph: &Graph, effort: usize, seed: u64) -> SeparatorResult {
    let n = graph.node_count().max(1);
    let mut ks = Vec::new();
    let mut k = 1;
    while k < n {
        ks.push(k);
        k *= 2;
    }
    ks.push(n);
    let mut best: Option<SeparatorResult> = None;
    for (i, &k) in ks.iter().enumerate() {
        let r = heuristic_separator(graph, k, effort, seed.wrapping_add(i as u64));
        let realized = r.max_residual().max(1);
        let tightened = SeparatorResult {
            objective: r.separator.len() + realized,
            k: realized,
            ..r
        };
        if best
            .as_ref()
            .is_none_or(|b| (tightened.objective, tightened.k) < (b.objective, b.k))
        {
            best = Some(tightened);
        }
    }
    best.expect("sweep is nonempty")
}

// ---- mask solvers ----------------------------------------------------

fn local_adjacency(graph: &Graph, ids: &[NodeId]) -> Vec<u64> {
    let pos = |v: NodeId| ids.binary_search(&v).ok();
    ids.iter()
        .map(|&u| {
            let mut m = 0u64;
            for &v in graph.adj(u) {
                if let Some(j) = pos(v) {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect()
}

fn local_in_adjacency(graph: &DiGraph, ids: &[NodeId]) -> Vec<u64> {
    let pos = |v: NodeId| ids.binary_search(&v).ok();
    ids.iter()
        .map(|&u| {
            let mut m = 0u64;
            for &v in graph.in_adj(u) {
                if let Some(j) = pos(v) {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect()
}

fn iter_mask(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn components_of(adj: &[u64], alive: u64) -> Vec<u64> {
    let mut rest = alive;
    let mut comps = Vec::new();
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        loop {
            let mut grown = comp;
            for i in iter_mask(comp) {
                grown |= adj[i] & alive;
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        comps.push(comp);
        rest &= !comp;
    }
    comps
}

/// First `count` members of `comp` in BFS order from its lowest id,
/// exploring neighbors in ascending id order. Any prefix is connected.
fn bfs_prefix(adj: &[u64], comp: u64, count: usize) -> Vec<usize> {
    let start = comp.trailing_zeros() as usize;
    let mut order = vec![start];
    let mut seen = 1u64 << start;
    let mut head = 0;
    while order.len() < count {
        debug_assert!(head < order.len(), "component smaller than requested prefix");
        let u = order[head];
        head += 1;
        for v in iter_mask(adj[u] & comp & !seen) {
            seen |= 1 << v;
            order.push(v);
            if order.len() == count {
                break;
            }
        }
    }
    order
}

/// Minimum mask whose removal leaves components of at most `k` nodes.
/// Iterative deepening; branches over a connected (k+1)-prefix of some
/// oversized component, which every solution must intersect.
fn solve_bounded_components(adj: &[u64], k: usize) -> u64 {
    let n = adj.len();
    let alive = full_mask(n);
    for t in 0..=n.saturating_sub(k) {
        if let Some(sol) = dfs_components(adj, k, alive, 0, t) {
            return sol;
        }
    }
    unreachable!("removing all but k nodes is always enough")
}

fn dfs_components(adj: &[u64], k: usize, alive: u64, forbidden: u64, t: usize) -> Option<u64> {
    let Some(big) = components_of(adj, alive)
        .into_iter()
        .find(|c| c.count_ones() as usize > k)
    else {
        return Some(0);
    };
    if t == 0 {
        return None;
    }
    let prefix = bfs_prefix(adj, big, k + 1);
    let mut barred = forbidden;
    for &v in &prefix {
        let bit = 1u64 << v;
        if barred & bit == 0 {
            if let Some(sol) = dfs_components(adj, k, alive & !bit, barred, t - 1) {
                return Some(sol | bit);
            }
            barred |= bit;
        }
    }
    None
}

/// Minimum mask whose removal leaves components larger than `k` totaling
/// fewer than `g` nodes. Branches over every vertex of the oversized
/// components, since any solution must shrink at least one of them.
fn solve_bounded_remainder(adj: &[u64], k: usize, g: usize) -> u64 {
    let n = adj.len();
    let alive = full_mask(n);
    for t in 0..=n.saturating_sub(k) {
        if let Some(sol) = dfs_remainder(adj, k, g, alive, 0, t) {
            return sol;
        }
    }
    unreachable!("removing all but k nodes is always enough")
}

fn dfs_remainder(
    adj: &[u64],
    k: usize,
    g: usize,
    alive: u64,
    forbidden: u64,
    t: usize,
) -> Option<u64> {
    let mut big_union = 0u64;
    let mut big_total = 0usize;
    for c in components_of(adj, alive) {
        let s = c.count_ones() as usize;
        if s > k {
            big_union |= c;
            big_total += s;
        }
    }
    if big_total < g {
        return Some(0);
    }
    if t == 0 {
        return None;
    }
    let mut barred = forbidden;
    for v in iter_mask(big_union) {
        let bit = 1u64 << v;
        if barred & bit == 0 {
            if let Some(sol) = dfs_remainder(adj, k, g, alive & !bit, barred, t - 1) {
                return Some(sol | bit);
            }
            barred |= bit;
        }
    }
    None
}

/// Reverse-BFS prefix from `v`: every member keeps a path to `v` inside
/// the prefix, so a separator missing the whole prefix leaves `v` with
/// reach above `k`.
fn reach_prefix(radj: &[u64], alive: u64, v: usize, count: usize) -> Vec<usize> {
    let mut order = vec![v];
    let mut seen = 1u64 << v;
    let mut head = 0;
    while order.len() < count {
        debug_assert!(head < order.len(), "reach set smaller than requested prefix");
        let u = order[head];
        head += 1;
        for w in iter_mask(radj[u] & alive & !seen) {
            seen |= 1 << w;
            order.push(w);
            if order.len() == count {
                break;
            }
        }
    }
    order
}

fn reach_size(radj: &[u64], alive: u64, v: usize) -> usize {
    let mut reach = 1u64 << v;
    loop {
        let mut grown = reach;
        for i in iter_mask(reach) {
            grown |= radj[i] & alive;
        }
        if grown == reach {
            return reach.count_ones() as usize;
        }
        reach = grown;
    }
}

/// Minimum mask whose removal leaves every reach set with at most `k`
/// members.
fn solve_bounded_reach(radj: &[u64], k: usize) -> u64 {
    let n = radj.len();
    let alive = full_mask(n);
    for t in 0..=n.saturating_sub(k) {
        if let Some(sol) = dfs_reach(radj, k, alive, 0, t) {
            return sol;
        }
    }
    unreachable!("removing all but k nodes is always enough")
}

fn dfs_reach(radj: &[u64], k: usize, alive: u64, forbidden: u64, t: usize) -> Option<u64> {
    let Some(v) = iter_mask(alive).find(|&v| reach_size(radj, alive, v) > k) else {
        return Some(0);
    };
    if t == 0 {
        return None;
    }
    let prefix = reach_prefix(radj, alive, v, k + 1);
    let mut barred = forbidden;
    for &w in &prefix {
        let bit = 1u64 << w;
        if barred & bit == 0 {
            if let Some(sol) = dfs_reach(radj, k, alive & !bit, barred, t - 1) {
                return Some(sol | bit);
            }
            barred |= bit;
        }
    }
    None
}

// ---- heuristic internals ----------------------------------------------

/// Picks a cut that splits `comp`: the cheapest minimum vertex cut among a
/// double-BFS distant pair and `effort` seeded extra pairs, or the highest
/// degree node when every candidate pair is adjacent.
fn split_component(graph: &Graph, comp: &NodeSet, effort: usize, rng: &mut ChaCha8Rng) -> NodeSet {
    let ids = comp.to_vec();
    let mut pairs = Vec::new();
    if let Some(p) = distant_pair(graph, &ids) {
        pairs.push(p);
    }
    for _ in 0..effort {
        let a = *ids.choose(rng).expect("component is nonempty");
        let b = *ids.choose(rng).expect("component is nonempty");
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs.dedup();

    let mut best: Option<NodeSet> = None;
    for (s, t) in pairs {
        if graph.has_edge(s, t) {
            continue;
        }
        let cut = min_vertex_cut(graph, &ids, s, t);
        if best.as_ref().is_none_or(|b| cut.len() < b.len()) {
            best = Some(cut);
        }
    }
    best.unwrap_or_else(|| {
        let v = ids
            .iter()
            .copied()
            .max_by_key(|&v| (graph.degree(v), std::cmp::Reverse(v)))
            .expect("component is nonempty");
        NodeSet::from_ids(graph.universe(), &[v]).expect("member id in range")
    })
}

/// Double BFS: the farthest node from the smallest id, then the farthest
/// node from that. Ties to the smallest id.
fn distant_pair(graph: &Graph, ids: &[NodeId]) -> Option<(NodeId, NodeId)> {
    if ids.len() < 2 {
        return None;
    }
    let a = bfs_farthest(graph, ids[0]);
    let b = bfs_farthest(graph, a);
    if a == b {
        None
    } else {
        Some((a.min(b), a.max(b)))
    }
}

fn bfs_farthest(graph: &Graph, start: NodeId) -> NodeId {
    let mut seen = NodeSet::empty(graph.universe());
    seen.insert(start);
    let mut frontier = vec![start];
    let mut last = start;
    while !frontier.is_empty() {
        last = frontier[0];
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in graph.adj(u) {
                if !seen.contains(v) {
                    seen.insert(v);
                    next.push(v);
                }
            }
        }
        frontier = next;
        frontier.sort_unstable();
    }
    last
}

/// Minimum set of nodes (excluding `s`, `t`) separating non-adjacent `s`
/// from `t`, via node-split max flow with unit capacities.
fn min_vertex_cut(graph: &Graph, ids: &[NodeId], s: NodeId, t: NodeId) -> NodeSet {
    let pos = |v: NodeId| ids.binary_search(&v).expect("cut endpoints live in the component");
    let n = ids.len();
    // node 2i = in-side, 2i+1 = out-side
    let mut flow = FlowNet::new(2 * n);
    const INF: i32 = i32::MAX / 2;
    for (i, &v) in ids.iter().enumerate() {
        let cap = if v == s || v == t { INF } else { 1 };
        flow.add(2 * i, 2 * i + 1, cap);
        for &w in graph.adj(v) {
            if let Ok(j) = ids.binary_search(&w) {
                flow.add(2 * i + 1, 2 * j, INF);
            }
        }
    }
    let (src, dst) = (2 * pos(s) + 1, 2 * pos(t));
    flow.max_flow(src, dst);
    let reachable = flow.residual_reachable(src);
    let mut cut = NodeSet::empty(graph.universe());
    for (i, &v) in ids.iter().enumerate() {
        if reachable[2 * i] && !reachable[2 * i + 1] {
            cut.insert(v);
        }
    }
    cut
}

struct FlowNet {
    // edge pairs: edge e and e^1 are reverses of each other
    to: Vec<usize>,
    cap: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new(n: usize) -> FlowNet {
        FlowNet { to: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, a: usize, b: usize, c: i32) {
        self.adj[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.adj[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i32 {
        let mut total = 0;
        loop {
            // BFS for a shortest augmenting path
            let mut prev_edge = vec![usize::MAX; self.adj.len()];
            let mut queue = std::collections::VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &e in &self.adj[u] {
                    let v = self.to[e];
                    if !seen[v] && self.cap[e] > 0 {
                        seen[v] = true;
                        prev_edge[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = i32::MAX;
            let mut v = t;
            while v != s {
                let e = prev_edge[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = prev_edge[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.to[e ^ 1];
            }
            total += push;
        }
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    /// Smallest separator by exhaustive subset sweep; referee for the
    /// branch-and-bound.
    fn brute_separator(graph: &Graph, k: usize) -> usize {
        let ids = graph.present().to_vec();
        let n = ids.len();
        (0..1u64 << n)
            .filter(|m| {
                let cand = mask_to_set(graph, &ids, *m);
                verify_separator(graph, &cand, k)
            })
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn brute_g_remainder(graph: &Graph, k: usize, g: usize) -> usize {
        let ids = graph.present().to_vec();
        let n = ids.len();
        (0..1u64 << n)
            .filter(|m| {
                let cand = mask_to_set(graph, &ids, *m);
                verify_g_remainder(graph, &cand, k, g)
            })
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn brute_reach(graph: &DiGraph, k: usize) -> usize {
        let ids = graph.present().to_vec();
        let n = ids.len();
        (0..1u64 << n)
            .filter(|m| {
                let mut cand = NodeSet::empty(graph.universe());
                for i in iter_mask(*m) {
                    cand.insert(ids[i]);
                }
                verify_reach_separator(graph, &cand, k)
            })
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn mask_to_set(graph: &Graph, ids: &[NodeId], m: u64) -> NodeSet {
        let mut s = NodeSet::empty(graph.universe());
        for i in iter_mask(m) {
            s.insert(ids[i]);
        }
        s
    }

    #[test]
    fn star_separator_is_the_center() {
        let g = generate::star(5).unwrap();
        let r = exact_separator(&g, 1, EXACT_CAP).unwrap();
        assert_eq!(r.separator.to_vec(), vec![0]);
        assert_eq!(r.profile, vec![1, 1, 1, 1]);
        let ms = min_sum(&g, EXACT_CAP).unwrap();
        assert_eq!(ms.objective, 2);
        assert_eq!(ms.k, 1);
    }

    #[test]
    fn complete_graphs_force_full_objective() {
        let g = generate::complete(6).unwrap();
        let r = exact_separator(&g, 3, EXACT_CAP).unwrap();
        assert_eq!(r.separator.len(), 3);
        let ms = min_sum(&g, EXACT_CAP).unwrap();
        assert_eq!(ms.objective, 6);
        assert_eq!(ms.k, 1);
        assert_eq!(ms.separator.len(), 5);
    }

    #[test]
    fn bipartite_min_sum_is_small_side_plus_one() {
        let g = generate::complete_bipartite(2, 3).unwrap();
        let ms = min_sum(&g, EXACT_CAP).unwrap();
        assert_eq!(ms.objective, 3);
        assert_eq!(ms.k, 1);
        assert_eq!(ms.separator.to_vec(), vec![0, 1]);
    }

    #[test]
    fn path_min_sum() {
        let g = generate::path(4).unwrap();
        let ms = min_sum(&g, EXACT_CAP).unwrap();
        assert_eq!(ms.objective, 3);
    }

    #[test]
    fn separator_size_shrinks_as_k_grows() {
        let g = generate::cycle(6).unwrap();
        let mut prev = usize::MAX;
        for k in 1..=6 {
            let r = exact_separator(&g, k, EXACT_CAP).unwrap();
            assert!(verify_separator(&g, &r.separator, k));
            assert!(r.separator.len() <= prev);
            prev = r.separator.len();
        }
        assert_eq!(exact_separator(&g, 6, EXACT_CAP).unwrap().separator.len(), 0);
    }

    #[test]
    fn exact_matches_brute_force_on_random_graphs() {
        for seed in 0..12 {
            let g = generate::erdos_renyi(7, 0.45, seed).unwrap();
            for k in 1..=3 {
                let r = exact_separator(&g, k, EXACT_CAP).unwrap();
                assert!(verify_separator(&g, &r.separator, k), "invalid (seed {seed}, k {k})");
                assert_eq!(
                    r.separator.len(),
                    brute_separator(&g, k),
                    "suboptimal (seed {seed}, k {k})"
                );
            }
        }
    }

    #[test]
    fn g_remainder_matches_brute_force() {
        for seed in 0..8 {
            let g = generate::erdos_renyi(6, 0.4, 50 + seed).unwrap();
            for k in 1..=2 {
                for gl in 1..=4 {
                    let r = exact_g_remainder(&g, k, gl, EXACT_CAP).unwrap();
                    assert!(verify_g_remainder(&g, &r.separator, k, gl));
                    assert_eq!(
                        r.separator.len(),
                        brute_g_remainder(&g, k, gl),
                        "suboptimal (seed {seed}, k {k}, g {gl})"
                    );
                }
            }
        }
    }

    #[test]
    fn remainder_allowance_only_helps() {
        let g = generate::disjoint_cliques(&[3, 3, 2]).unwrap();
        let mut prev = usize::MAX;
        for gl in 1..=8 {
            let r = exact_g_remainder(&g, 2, gl, EXACT_CAP).unwrap();
            assert!(r.separator.len() <= prev);
            prev = r.separator.len();
        }
        // allowing both triangles to survive costs nothing
        assert_eq!(exact_g_remainder(&g, 2, 7, EXACT_CAP).unwrap().separator.len(), 0);
        // g beyond n is vacuous
        assert_eq!(exact_g_remainder(&g, 1, 9, EXACT_CAP).unwrap().separator.len(), 0);
    }

    #[test]
    fn reach_separator_on_directed_path() {
        let d = DiGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let r = exact_reach_separator(&d, 1, EXACT_CAP).unwrap();
        assert_eq!(r.separator.to_vec(), vec![1]);
        assert_eq!(r.profile, vec![1, 1]);
        let arcless = DiGraph::new(4, &[]).unwrap();
        assert!(exact_reach_separator(&arcless, 1, EXACT_CAP).unwrap().separator.is_empty());
    }

    #[test]
    fn reach_matches_brute_force_on_random_digraphs() {
        for seed in 0..10 {
            let d = generate::random_digraph(6, 0.3, seed).unwrap();
            for k in 1..=3 {
                let r = exact_reach_separator(&d, k, EXACT_CAP).unwrap();
                assert!(verify_reach_separator(&d, &r.separator, k));
                assert_eq!(
                    r.separator.len(),
                    brute_reach(&d, k),
                    "suboptimal (seed {seed}, k {k})"
                );
            }
        }
    }

    #[test]
    fn symmetrized_reach_equals_undirected_separator() {
        for seed in 0..6 {
            let g = generate::erdos_renyi(6, 0.4, 200 + seed).unwrap();
            let d = g.symmetrize();
            for k in 1..=6 {
                let a = exact_separator(&g, k, EXACT_CAP).unwrap();
                let b = exact_reach_separator(&d, k, EXACT_CAP).unwrap();
                assert_eq!(a.separator.len(), b.separator.len(), "seed {seed}, k {k}");
            }
        }
    }

    #[test]
    fn caps_reject_oversized_pieces() {
        let g = generate::cycle(30).unwrap();
        assert!(matches!(exact_separator(&g, 2, 24), Err(Error::Capacity(_))));
        assert!(exact_separator(&g, 2, 32).is_ok());
        // disconnected pieces are judged separately, so many small
        // components are fine under a small cap
        let many = generate::disjoint_cliques(&[5; 10]).unwrap();
        assert!(exact_separator(&many, 3, 8).is_ok());
    }

    #[test]
    fn heuristic_is_always_valid() {
        for (n, d, seed) in [(20, 4, 1), (30, 4, 2), (24, 3, 3)] {
            let g = generate::random_d_regular(n, d, seed).unwrap();
            for k in [1, 4, 10] {
                let r = heuristic_separator(&g, k, 2, 7);
                assert!(verify_separator(&g, &r.separator, k), "n {n} d {d} k {k}");
            }
        }
    }

    #[test]
    fn heuristic_finds_star_center_and_forced_clique_cuts() {
        let star = generate::star(30).unwrap();
        let r = heuristic_separator(&star, 1, 2, 0);
        assert_eq!(r.separator.to_vec(), vec![0]);
        let k6 = generate::complete(6).unwrap();
        let r = heuristic_separator(&k6, 3, 2, 0);
        assert_eq!(r.separator.len(), 3);
    }

    #[test]
    fn heuristic_quality_on_small_graphs() {
        for seed in 0..8 {
            let g = generate::erdos_renyi(14, 0.25, 300 + seed).unwrap();
            for k in [2, 4] {
                let exact = exact_separator(&g, k, EXACT_CAP).unwrap();
                let heur = heuristic_separator(&g, k, 3, seed);
                assert!(
                    heur.separator.len() <= 3 * exact.separator.len().max(1),
                    "seed {seed} k {k}: {} vs exact {}",
                    heur.separator.len(),
                    exact.separator.len()
                );
            }
        }
    }

    #[test]
    fn approx_min_sum_on_known_families() {
        let star = generate::star(40).unwrap();
        assert_eq!(approx_min_sum(&star, 2, 0).objective, 2);
        let k6 = generate::complete(6).unwrap();
        assert_eq!(approx_min_sum(&k6, 2, 0).objective, 6);
    }

    #[test]
    fn min_sum_never_beats_its_own_parts() {
        for seed in 0..6 {
            let g = generate::erdos_renyi(7, 0.5, 400 + seed).unwrap();
            let ms = min_sum(&g, EXACT_CAP).unwrap();
            for k in 1..=7 {
                let r = exact_separator(&g, k, EXACT_CAP).unwrap();
                assert!(ms.objective <= r.objective);
            }
            let am = approx_min_sum(&g, 3, seed);
            assert!(am.objective >= ms.objective);
        }
    }
}
