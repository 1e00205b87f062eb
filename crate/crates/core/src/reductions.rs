//! Gadget constructions tying corruption budgets to graph expansion.
//!
//! The hardness arguments all build a bigger graph whose optimal separators
//! mirror some structure of the source: a bipartite auxiliary graph whose
//! edge-vertices track cut edges, a disjoint clique that absorbs the
//! remainder allowance, and a clique-studded amplifier whose best separator
//! size is forced. These are executable here so their budget accounting can
//! be checked instance by instance instead of asymptotically.

use num_rational::Ratio;

use crate::adversary::{AttackPlan, Construction};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::scenario::{Claim, Verdict};

fn pair(a: usize, b: usize) -> (NodeId, NodeId) {
    (a as NodeId, b as NodeId)
}

/// Fraction of edges leaving `s`, normalized by its degree volume:
/// cut(s, rest) / (d |s|) on a d-regular graph.
pub fn expansion(graph: &Graph, s: &NodeSet) -> Result<Ratio<u64>> {
    let d = regular_degree(graph)?;
    if s.is_empty() || !s.is_subset(graph.present()) || s.len() == graph.node_count() {
        return Err(Error::usage("expansion needs a nonempty proper subset of the nodes"));
    }
    let mut cut = 0u64;
    for u in s.iter() {
        cut += graph.adj(u).iter().filter(|&&v| !s.contains(v)).count() as u64;
    }
    Ok(Ratio::new(cut, d as u64 * s.len() as u64))
}

fn regular_degree(graph: &Graph) -> Result<usize> {
    let mut nodes = graph.nodes();
    let first = nodes.next().ok_or_else(|| Error::usage("empty graph"))?;
    let d = graph.degree(first);
    if nodes.any(|v| graph.degree(v) != d) {
        return Err(Error::usage("graph is not regular"));
    }
    Ok(d)
}

/// What a node of the auxiliary graph stands for in the source.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxRole {
    /// Copy `i` of source vertex `v`.
    VertexCopy(NodeId, usize),
    /// The vertex standing for source edge (u, v).
    EdgeVertex(NodeId, NodeId),
}

/// Bipartite d-regular companion of a d-regular source: d/2 copies per
/// vertex on one side, one vertex per edge on the other, joined by
/// incidence.
pub struct AuxGraph {
    pub graph: Graph,
    pub source: Graph,
    pub roles: Vec<AuxRole>,
    /// Copies per source vertex (half the source degree).
    pub r: usize,
}

/// Builds the auxiliary graph. Vertex copies take ids `v*r..v*r+r`,
/// edge-vertices follow in source edge order, so |V'| = r|V| + |E| = 2|E|.
pub fn sse_auxiliary(source: &Graph) -> Result<AuxGraph> {
    let d = regular_degree(source)?;
    if d == 0 || d % 2 != 0 {
        return Err(Error::usage(format!("need a positive even degree, got {d}")));
    }
    if source.node_count() != source.universe() {
        return Err(Error::usage("auxiliary construction needs all nodes present"));
    }
    let r = d / 2;
    let n = source.universe();
    let mut roles = Vec::with_capacity(2 * source.edge_count());
    for v in 0..n {
        for i in 0..r {
            roles.push(AuxRole::VertexCopy(v as NodeId, i));
        }
    }
    let mut edges = Vec::with_capacity(2 * r * source.edge_count());
    for (k, (u, v)) in source.edges().enumerate() {
        let ev = r * n + k;
        roles.push(AuxRole::EdgeVertex(u, v));
        for i in 0..r {
            edges.push(pair(u as usize * r + i, ev));
            edges.push(pair(v as usize * r + i, ev));
        }
    }
    let graph = Graph::new(roles.len(), &edges)?;
    Ok(AuxGraph { graph, source: source.clone(), roles, r })
}

/// An equi-sized partition of a regular graph's nodes with the expansion
/// of each part, the shape of a Yes instance.
pub struct PartitionCertificate {
    pub parts: Vec<NodeSet>,
    pub expansions: Vec<Ratio<u64>>,
}

impl PartitionCertificate {
    pub fn new(graph: &Graph, parts: Vec<NodeSet>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::usage("need at least two parts"));
        }
        let size = parts[0].len();
        let mut seen = NodeSet::empty(graph.universe());
        for p in &parts {
            if p.len() != size || size == 0 {
                return Err(Error::usage("parts must be nonempty and equi-sized"));
            }
            if !seen.is_disjoint(p) {
                return Err(Error::usage("parts overlap"));
            }
            seen.union_with(p);
        }
        if &seen != graph.present() {
            return Err(Error::usage("parts do not cover the graph"));
        }
        let expansions = parts.iter().map(|p| expansion(graph, p)).collect::<Result<_>>()?;
        Ok(PartitionCertificate { parts, expansions })
    }
}

/// Corrupt strategy a good partition buys on the auxiliary graph: every
/// cross-part edge-vertex, plus the copies of one part and its own
/// edge-vertices. Its budget is exactly
/// |E*| + |S_1*| + |N(S_1*) \ E*|.
pub fn yes_case_attack(aux: &AuxGraph, cert: &PartitionCertificate) -> Result<AttackPlan> {
    let n = aux.source.universe();
    let mut part_of = vec![usize::MAX; n];
    let mut covered = 0;
    for (i, p) in cert.parts.iter().enumerate() {
        for v in p.iter() {
            let v = v as usize;
            if v >= n || part_of[v] != usize::MAX {
                return Err(Error::usage("partition does not match the source graph"));
            }
            part_of[v] = i;
            covered += 1;
        }
    }
    if covered != n {
        return Err(Error::usage("partition does not cover the source graph"));
    }

    let universe = aux.graph.universe();
    let mut cross = NodeSet::empty(universe);
    let mut bad = NodeSet::empty(universe);
    // per-part cost of the analogous strategy: r|S_i| + own edge-vertices
    let mut region = vec![0usize; cert.parts.len()];
    for (id, role) in aux.roles.iter().enumerate() {
        let id = id as NodeId;
        match *role {
            AuxRole::VertexCopy(v, _) => {
                region[part_of[v as usize]] += 1;
                if part_of[v as usize] == 0 {
                    bad.insert(id);
                }
            }
            AuxRole::EdgeVertex(u, v) => {
                let (pu, pv) = (part_of[u as usize], part_of[v as usize]);
                if pu != pv {
                    cross.insert(id);
                    bad.insert(id);
                } else {
                    region[pu] += 1;
                    if pu == 0 {
                        bad.insert(id);
                    }
                }
            }
        }
    }

    let mut claims = Vec::new();
    for u in bad.iter() {
        for &v in aux.graph.adj(u) {
            let verdict = if bad.contains(v) && !cross.contains(v) {
                Verdict::Good
            } else {
                Verdict::Bad
            };
            claims.push(Claim::new(u, v, verdict));
        }
    }

    let budget_used = bad.len();
    let budget = cross.len() + region.iter().copied().max().unwrap_or(0);
    let degenerate = budget_used >= aux.graph.node_count().div_ceil(2);
    Ok(AttackPlan {
        construction: Construction::SeparatorAttack,
        bad,
        claims,
        budget_used,
        budget,
        target_g: 1,
        separator: cross,
        degenerate,
    })
}

/// Disjoint union with an `h`-clique, h = delta/(1-delta) * |V|, labeled
/// after the original nodes. Returns the graph and h.
pub fn clique_append(graph: &Graph, delta: Ratio<u64>) -> Result<(Graph, usize)> {
    if delta < Ratio::new(1, 2) || delta >= Ratio::from_integer(1) {
        return Err(Error::usage(format!("delta {delta} outside [1/2, 1)")));
    }
    let n = graph.universe();
    let h = delta / (Ratio::from_integer(1) - delta) * Ratio::from_integer(n as u64);
    if !h.is_integer() || h == Ratio::from_integer(0) {
        return Err(Error::usage(format!(
            "appended clique size {h} is not a positive integer"
        )));
    }
    let h = h.to_integer() as usize;
    let mut edges: Vec<(NodeId, NodeId)> = graph.edges().collect();
    for i in 0..h {
        for j in i + 1..h {
            edges.push(pair(n + i, n + j));
        }
    }
    Ok((Graph::new(n + h, &edges)?, h))
}

/// Amplifier used in the NP-hardness argument: the source plus n^2 disjoint
/// m-cliques, then `copies` pendant (n-1)-cliques fully joined to every
/// vertex so far.
pub fn np_gadget(graph: &Graph, m: usize, n: usize, copies: usize) -> Result<Graph> {
    let base = graph.universe();
    if graph.node_count() != base {
        return Err(Error::usage("gadget construction needs all nodes present"));
    }
    if n <= base {
        return Err(Error::usage(format!("need n > {base}, got {n}")));
    }
    if m >= base || m == 0 {
        return Err(Error::usage(format!("need 0 < m < {base}, got {m}")));
    }
    if copies == 0 {
        return Err(Error::usage("need at least one pendant clique per vertex"));
    }
    let mut edges: Vec<(NodeId, NodeId)> = graph.edges().collect();
    let mut next = base;
    for _ in 0..n * n {
        for i in 0..m {
            for j in i + 1..m {
                edges.push(pair(next + i, next + j));
            }
        }
        next += m;
    }
    let centers = next;
    for center in 0..centers {
        for _ in 0..copies {
            for i in 0..n - 1 {
                edges.push(pair(center, next + i));
                for j in i + 1..n - 1 {
                    edges.push(pair(next + i, next + j));
                }
            }
            next += n - 1;
        }
    }
    Graph::new(next, &edges)
}

/// Regular Yes-style source at desk scale: `pairs` pairs of s-cliques, the
/// two cliques of a pair joined by a perfect matching. s-regular for even
/// s; the cliques are the natural parts.
pub fn matched_clique_pairs(pairs: usize, s: usize) -> Result<(Graph, Vec<NodeSet>)> {
    if pairs == 0 || s < 2 {
        return Err(Error::usage("need at least one pair of cliques of size 2"));
    }
    let n = 2 * pairs * s;
    let mut edges = Vec::new();
    let mut parts = Vec::with_capacity(2 * pairs);
    for c in 0..2 * pairs {
        let base = c * s;
        for i in 0..s {
            for j in i + 1..s {
                edges.push(pair(base + i, base + j));
            }
        }
        let mut part = NodeSet::empty(n);
        for i in 0..s {
            part.insert((base + i) as NodeId);
        }
        parts.push(part);
    }
    for p in 0..pairs {
        let (a, b) = (2 * p * s, (2 * p + 1) * s);
        for i in 0..s {
            edges.push(pair(a + i, b + i));
        }
    }
    Ok((Graph::new(n, &edges)?, parts))
}
