//! Audit networks and node sets.
//!
//! [`Graph`] is a simple undirected graph, [`DiGraph`] a simple digraph. An
//! arc `(u, v)` means `u` audits `v`; in the undirected case both endpoints
//! audit each other. Nodes are dense indices `0..n`, and both kinds keep
//! their original labels when nodes are removed: [`Graph::induced_remove`]
//! returns a graph over the same universe whose present-node set has shrunk,
//! so downstream results can always be reported in the caller's ids.
//!
//! The text format is line oriented. The first significant line is a header
//! `u <n> <m>` or `d <n> <m>`, followed by exactly `m` edge (or arc) lines
//! `<a> <b>`. Blank lines and lines starting with `#` are skipped.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Dense node index. Valid ids of a graph are `0..universe`.
pub type NodeId = u32;

const WORD_BITS: usize = 64;

/// Set of node ids over a fixed universe `0..capacity`, stored as a bitset.
///
/// Binary operations require both operands to share the same capacity and
/// panic otherwise, since mixing universes is a programming error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    cap: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(cap: usize) -> Self {
        NodeSet { cap, words: vec![0; cap.div_ceil(WORD_BITS)] }
    }

    pub fn full(cap: usize) -> Self {
        let mut s = NodeSet { cap, words: vec![u64::MAX; cap.div_ceil(WORD_BITS)] };
        s.trim();
        s
    }

    pub fn from_ids(cap: usize, ids: &[NodeId]) -> Result<Self> {
        let mut s = NodeSet::empty(cap);
        for &u in ids {
            if (u as usize) >= cap {
                return Err(Error::usage(format!("node {u} out of range (n = {cap})")));
            }
            s.insert(u);
        }
        Ok(s)
    }

    /// Universe size, not the number of members.
    pub fn capacity(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, u: NodeId) -> bool {
        let u = u as usize;
        u < self.cap && self.words[u / WORD_BITS] >> (u % WORD_BITS) & 1 == 1
    }

    pub fn insert(&mut self, u: NodeId) {
        let u = u as usize;
        assert!(u < self.cap, "node {u} out of range (n = {})", self.cap);
        self.words[u / WORD_BITS] |= 1 << (u % WORD_BITS);
    }

    pub fn remove(&mut self, u: NodeId) {
        let u = u as usize;
        if u < self.cap {
            self.words[u / WORD_BITS] &= !(1 << (u % WORD_BITS));
        }
    }

    fn check_cap(&self, other: &NodeSet) {
        assert_eq!(self.cap, other.cap, "node sets over different universes");
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        self.check_cap(other);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        NodeSet { cap: self.cap, words }
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        self.check_cap(other);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        NodeSet { cap: self.cap, words }
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        self.check_cap(other);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        NodeSet { cap: self.cap, words }
    }

    pub fn complement(&self) -> NodeSet {
        let mut out = NodeSet { cap: self.cap, words: self.words.iter().map(|w| !w).collect() };
        out.trim();
        out
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        self.check_cap(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        self.check_cap(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.check_cap(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.check_cap(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * WORD_BITS) as NodeId + b as NodeId)
            })
        })
    }

    pub fn first(&self) -> Option<NodeId> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }

    fn trim(&mut self) {
        let extra = self.words.len() * WORD_BITS - self.cap;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, u) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Common access surface of [`Graph`] and [`DiGraph`] for report handling:
/// who audits whom.
pub trait AuditGraph {
    /// Universe size; valid ids are `0..universe()`.
    fn universe(&self) -> usize;

    /// Nodes present in this (sub)graph.
    fn present(&self) -> &NodeSet;

    /// Nodes audited by `u`, ascending. Empty for absent or out-of-range `u`.
    fn audits(&self, u: NodeId) -> &[NodeId];

    /// Total number of (auditor, subject) pairs.
    fn audit_pair_count(&self) -> usize {
        self.present().iter().map(|u| self.audits(u).len()).sum()
    }
}

/// Simple undirected graph over `0..universe` with an explicit present-node
/// set so removals keep original labels.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    present: NodeSet,
    adj: Vec<Vec<NodeId>>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `0..n` from an edge list. Rejects out-of-range
    /// endpoints, self-loops and duplicate edges.
    pub fn new(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            check_endpoints(n, a, b)?;
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::usage(format!("duplicate edge at node {u}")));
            }
        }
        Ok(Graph { n, present: NodeSet::full(n), adj, m: edges.len() })
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    /// Number of present nodes.
    pub fn node_count(&self) -> usize {
        self.present.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn present(&self) -> &NodeSet {
        &self.present
    }

    pub fn contains_node(&self, u: NodeId) -> bool {
        self.present.contains(u)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.present.iter()
    }

    /// Sorted adjacency slice; empty for absent nodes.
    pub fn adj(&self, u: NodeId) -> &[NodeId] {
        self.adj.get(u as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj(u).binary_search(&v).is_ok()
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj(u).len()
    }

    /// Neighbor set of a present node.
    pub fn neighbors(&self, u: NodeId) -> Result<NodeSet> {
        if !self.present.contains(u) {
            return Err(Error::usage(format!("node {u} not in graph")));
        }
        NodeSet::from_ids(self.n, self.adj(u))
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.present.iter().flat_map(move |u| {
            self.adj(u).iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Connected components of the present nodes, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<NodeSet> {
        components_over(self.n, &self.present, |u, out| out.extend_from_slice(self.adj(u)))
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Subgraph induced on the present nodes minus `removed`, same universe.
    pub fn induced_remove(&self, removed: &NodeSet) -> Graph {
        assert_eq!(removed.capacity(), self.n, "removal set over a different universe");
        let present = self.present.difference(removed);
        let mut m = 0;
        let adj: Vec<Vec<NodeId>> = (0..self.n)
            .map(|u| {
                let u = u as NodeId;
                if !present.contains(u) {
                    return Vec::new();
                }
                let row: Vec<NodeId> =
                    self.adj(u).iter().copied().filter(|&v| present.contains(v)).collect();
                m += row.len();
                row
            })
            .collect();
        Graph { n: self.n, present, adj, m: m / 2 }
    }

    /// Digraph with both arcs for every edge.
    pub fn symmetrize(&self) -> DiGraph {
        let arcs: Vec<(NodeId, NodeId)> = self
            .present
            .iter()
            .flat_map(|u| self.adj(u).iter().map(move |&v| (u, v)))
            .collect();
        let mut d = DiGraph::new(self.n, &arcs).expect("symmetrized arcs are valid");
        d.present = self.present.clone();
        d
    }

    /// Parses the `u`-headed text format.
    pub fn parse(text: &str) -> Result<Self> {
        match Network::parse(text)? {
            Network::Undirected(g) => Ok(g),
            Network::Directed(_) => {
                Err(Error::parse(1, "expected an undirected graph (header `u`)"))
            }
        }
    }

    /// Canonical text form: header then edges ascending.
    pub fn to_text(&self) -> String {
        let mut out = format!("u {} {}\n", self.n, self.m);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, present={})", self.n, self.m, self.present)
    }
}

impl AuditGraph for Graph {
    fn universe(&self) -> usize {
        self.n
    }

    fn present(&self) -> &NodeSet {
        &self.present
    }

    fn audits(&self, u: NodeId) -> &[NodeId] {
        self.adj(u)
    }
}

/// Simple digraph over `0..universe`. Arc `(u, v)` means `u` audits `v`.
#[derive(Clone, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    present: NodeSet,
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    m: usize,
}

impl DiGraph {
    /// Builds a digraph on `0..n` from an arc list. Rejects out-of-range
    /// endpoints, self-loops and duplicate arcs; antiparallel pairs are fine.
    pub fn new(n: usize, arcs: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut out_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut in_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(a, b) in arcs {
            check_endpoints(n, a, b)?;
            out_adj[a as usize].push(b);
            in_adj[b as usize].push(a);
        }
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::usage(format!("duplicate arc at node {u}")));
            }
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(DiGraph { n, present: NodeSet::full(n), out_adj, in_adj, m: arcs.len() })
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.present.len()
    }

    pub fn arc_count(&self) -> usize {
        self.m
    }

    pub fn present(&self) -> &NodeSet {
        &self.present
    }

    pub fn contains_node(&self, u: NodeId) -> bool {
        self.present.contains(u)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.present.iter()
    }

    pub fn out_adj(&self, u: NodeId) -> &[NodeId] {
        self.out_adj.get(u as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn in_adj(&self, u: NodeId) -> &[NodeId] {
        self.in_adj.get(u as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn has_arc(&self, u: NodeId, v: NodeId) -> bool {
        self.out_adj(u).binary_search(&v).is_ok()
    }

    /// Arcs as `(u, v)`, ascending.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.present.iter().flat_map(move |u| self.out_adj(u).iter().map(move |&v| (u, v)))
    }

    /// Nodes with a directed path to `v`, including `v` itself.
    pub fn reach_set(&self, v: NodeId) -> Result<NodeSet> {
        if !self.present.contains(v) {
            return Err(Error::usage(format!("node {v} not in graph")));
        }
        let mut seen = NodeSet::empty(self.n);
        seen.insert(v);
        let mut queue = vec![v];
        while let Some(x) = queue.pop() {
            for &w in self.in_adj(x) {
                if !seen.contains(w) {
                    seen.insert(w);
                    queue.push(w);
                }
            }
        }
        Ok(seen)
    }

    /// Present node maximizing `|reach_set|`, smallest id on ties, with its
    /// reach set. `None` when no node is present.
    pub fn max_reach_node(&self) -> Option<(NodeId, NodeSet)> {
        let mut best: Option<(NodeId, NodeSet)> = None;
        for v in self.present.iter() {
            let r = self.reach_set(v).expect("present node");
            match &best {
                Some((_, cur)) if cur.len() >= r.len() => {}
                _ => best = Some((v, r)),
            }
        }
        best
    }

    /// Weakly connected components, ordered by smallest member.
    pub fn weak_components(&self) -> Vec<NodeSet> {
        components_over(self.n, &self.present, |u, out| {
            out.extend_from_slice(self.out_adj(u));
            out.extend_from_slice(self.in_adj(u));
        })
    }

    /// Subgraph induced on the present nodes minus `removed`, same universe.
    pub fn induced_remove(&self, removed: &NodeSet) -> DiGraph {
        assert_eq!(removed.capacity(), self.n, "removal set over a different universe");
        let present = self.present.difference(removed);
        let filter = |row: &[NodeId]| -> Vec<NodeId> {
            row.iter().copied().filter(|&v| present.contains(v)).collect()
        };
        let mut m = 0;
        let out_adj: Vec<Vec<NodeId>> = (0..self.n)
            .map(|u| {
                let u = u as NodeId;
                if !present.contains(u) {
                    return Vec::new();
                }
                let row = filter(self.out_adj(u));
                m += row.len();
                row
            })
            .collect();
        let in_adj: Vec<Vec<NodeId>> = (0..self.n)
            .map(|u| {
                let u = u as NodeId;
                if !present.contains(u) {
                    Vec::new()
                } else {
                    filter(self.in_adj(u))
                }
            })
            .collect();
        DiGraph { n: self.n, present, out_adj, in_adj, m }
    }

    /// Undirected graph joining every pair connected by an arc in either
    /// direction.
    pub fn underlying(&self) -> Graph {
        let mut edges: Vec<(NodeId, NodeId)> =
            self.arcs().map(|(u, v)| if u < v { (u, v) } else { (v, u) }).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut g = Graph::new(self.n, &edges).expect("underlying edges are valid");
        g.present = self.present.clone();
        g
    }

    /// Parses the `d`-headed text format.
    pub fn parse(text: &str) -> Result<Self> {
        match Network::parse(text)? {
            Network::Directed(d) => Ok(d),
            Network::Undirected(_) => {
                Err(Error::parse(1, "expected a directed graph (header `d`)"))
            }
        }
    }

    /// Canonical text form: header then arcs ascending.
    pub fn to_text(&self) -> String {
        let mut out = format!("d {} {}\n", self.n, self.m);
        for (u, v) in self.arcs() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiGraph(n={}, m={}, present={})", self.n, self.m, self.present)
    }
}

impl AuditGraph for DiGraph {
    fn universe(&self) -> usize {
        self.n
    }

    fn present(&self) -> &NodeSet {
        &self.present
    }

    fn audits(&self, u: NodeId) -> &[NodeId] {
        self.out_adj(u)
    }
}

/// A parsed graph of either kind.
#[derive(Clone, Debug)]
pub enum Network {
    Undirected(Graph),
    Directed(DiGraph),
}

impl Network {
    pub fn parse(text: &str) -> Result<Network> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) =
            lines.next().ok_or_else(|| Error::parse(1, "empty graph text"))?;
        let mut parts = header.split_whitespace();
        let kind = parts.next().unwrap_or("");
        if kind != "u" && kind != "d" {
            return Err(Error::parse(
                header_line,
                format!("bad header kind `{kind}`, want `u` or `d`"),
            ));
        }
        let n: usize = parse_field(header_line, parts.next(), "node count")?;
        let m: usize = parse_field(header_line, parts.next(), "edge count")?;
        if parts.next().is_some() {
            return Err(Error::parse(header_line, "trailing tokens after header"));
        }

        let mut pairs = Vec::with_capacity(m);
        let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
        let mut last_line = header_line;
        for (line_no, line) in lines {
            last_line = line_no;
            let mut f = line.split_whitespace();
            let a: NodeId = parse_field(line_no, f.next(), "endpoint")?;
            let b: NodeId = parse_field(line_no, f.next(), "endpoint")?;
            if f.next().is_some() {
                return Err(Error::parse(line_no, "trailing tokens after edge"));
            }
            check_endpoints(n, a, b).map_err(|e| Error::parse(line_no, e.to_string()))?;
            let key = if kind == "u" && a > b { (b, a) } else { (a, b) };
            if !seen.insert(key) {
                return Err(Error::parse(line_no, format!("duplicate edge ({a}, {b})")));
            }
            pairs.push((a, b));
        }
        if pairs.len() != m {
            return Err(Error::parse(
                last_line,
                format!("header promises {m} edge lines, found {}", pairs.len()),
            ));
        }
        match kind {
            "u" => Ok(Network::Undirected(Graph::new(n, &pairs)?)),
            _ => Ok(Network::Directed(DiGraph::new(n, &pairs)?)),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Network::Undirected(g) => g.to_text(),
            Network::Directed(d) => d.to_text(),
        }
    }

    pub fn universe(&self) -> usize {
        match self {
            Network::Undirected(g) => g.universe(),
            Network::Directed(d) => d.universe(),
        }
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

fn check_endpoints(n: usize, a: NodeId, b: NodeId) -> Result<()> {
    if (a as usize) >= n || (b as usize) >= n {
        return Err(Error::usage(format!("edge ({a}, {b}) out of range (n = {n})")));
    }
    if a == b {
        return Err(Error::usage(format!("self-loop at node {a}")));
    }
    Ok(())
}

fn components_over<F>(n: usize, present: &NodeSet, push_adj: F) -> Vec<NodeSet>
where
    F: Fn(NodeId, &mut Vec<NodeId>),
{
    let mut seen = NodeSet::empty(n);
    let mut comps = Vec::new();
    let mut nbrs = Vec::new();
    for start in present.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = NodeSet::empty(n);
        comp.insert(start);
        seen.insert(start);
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            nbrs.clear();
            push_adj(u, &mut nbrs);
            for &v in &nbrs {
                if present.contains(v) && !seen.contains(v) {
                    seen.insert(v);
                    comp.insert(v);
                    queue.push(v);
                }
            }
        }
        comps.push(comp);
    }
    comps
}
