//! Exact critical budgets by compatible-family search.
//!
//! The adversary blinds the agency iff it can produce reports under which
//! every node is corrupt in some within-budget explanation. Two candidate
//! bad sets can be blamed by one report matrix iff every auditor outside
//! both sets would say the same thing under either hypothesis — the
//! [`compatible`] predicate. A pairwise-compatible family therefore yields
//! one matrix all its members explain ([`reports_from_family`]), and
//! conversely the consistent configurations of any blinding matrix form
//! such a family. That makes the minimal budget a pure set-search problem:
//! the smallest `b` admitting a pairwise-compatible family of sets of size
//! at most `b` that covers all nodes (all but `g − 1` of them for the
//! g-node variant).
//!
//! The search stays authoritative by construction on one side only; the
//! realized reports are always re-checked against the definition-level
//! [`crate::scenario::guaranteed_good`] in debug builds and tests.

use crate::error::{Error, Result};
use crate::graph::{AuditGraph, DiGraph, Graph, NodeId, NodeSet};
use crate::scenario::{truthful_fill, Claim, ReportMatrix, Verdict};

/// Default node cap for the undirected oracle.
pub const ORACLE_CAP: usize = 10;
/// Default node cap for the directed oracle, whose search space is larger.
pub const ORACLE_CAP_DIRECTED: usize = 8;

/// A witness that one report matrix can blame every member set: the
/// candidate bad sets, which one the realized scenario treats as the truth,
/// and the budget they fit in.
#[derive(Clone, Debug)]
pub struct CompatibleFamily {
    pub members: Vec<NodeSet>,
    pub anchor: usize,
    pub budget: usize,
}

impl CompatibleFamily {
    pub fn anchor_set(&self) -> &NodeSet {
        &self.members[self.anchor]
    }

    /// Nodes blamed by some member.
    pub fn coverage(&self, universe: usize) -> NodeSet {
        let mut c = NodeSet::empty(universe);
        for m in &self.members {
            c.union_with(m);
        }
        c
    }
}

/// Can one report matrix blame both `a` and `b`? True iff every auditor
/// outside both sets gives the same verdicts under either hypothesis:
/// for every audit pair (u, v) with u outside both, v is in `a` iff in `b`.
pub fn compatible<G: AuditGraph>(graph: &G, a: &NodeSet, b: &NodeSet) -> bool {
    for u in graph.present().iter() {
        if a.contains(u) || b.contains(u) {
            continue;
        }
        for &v in graph.audits(u) {
            if a.contains(v) != b.contains(v) {
                return false;
            }
        }
    }
    true
}

/// Builds the one report matrix a compatible family shares: auditors
/// outside the anchor report the truth with respect to it; an anchored
/// auditor borrows the verdicts of the first member set not containing it,
/// accusing everyone when no such member exists.
pub fn reports_from_family<G: AuditGraph>(
    graph: &G,
    family: &CompatibleFamily,
) -> Result<ReportMatrix> {
    for (i, a) in family.members.iter().enumerate() {
        if a.len() > family.budget {
            return Err(Error::usage(format!(
                "family member {i} exceeds the budget of {}",
                family.budget
            )));
        }
        for b in &family.members[i + 1..] {
            if !compatible(graph, a, b) {
                return Err(Error::usage("family members are not pairwise compatible"));
            }
        }
    }
    let anchor = family
        .members
        .get(family.anchor)
        .ok_or_else(|| Error::usage("anchor index out of range"))?;

    let mut claims = Vec::new();
    for u in graph.present().iter() {
        if !anchor.contains(u) {
            continue;
        }
        let alibi = family.members.iter().find(|m| !m.contains(u));
        for &v in graph.audits(u) {
            let verdict = match alibi {
                Some(m) if !m.contains(v) => Verdict::Good,
                _ => Verdict::Bad,
            };
            claims.push(Claim::new(u, v, verdict));
        }
    }
    truthful_fill(graph, anchor, &claims)
}

/// Smallest budget that blinds the agency completely on an undirected
/// graph: below it some node is provably truthful, at it none is.
pub fn exact_m(graph: &Graph, cap: usize) -> Result<(usize, CompatibleFamily)> {
    critical_budget(graph, 1, cap)
}

/// Smallest budget after which fewer than `g` nodes are provably truthful.
pub fn exact_m_g(graph: &Graph, g: usize, cap: usize) -> Result<(usize, CompatibleFamily)> {
    critical_budget(graph, g, cap)
}

/// Directed analog of [`exact_m`], with audits along outgoing arcs only.
pub fn exact_m_directed(graph: &DiGraph, cap: usize) -> Result<(usize, CompatibleFamily)> {
    critical_budget(graph, 1, cap)
}

/// Shared search: ascending budgets, candidate sets as masks, and a
/// branch-and-bound cover of the present nodes (minus up to `g − 1`
/// excusable ones) by a pairwise-compatible family.
pub fn critical_budget<G: AuditGraph>(
    graph: &G,
    g: usize,
    cap: usize,
) -> Result<(usize, CompatibleFamily)> {
    let ids: Vec<NodeId> = graph.present().to_vec();
    let pc = ids.len();
    if pc == 0 {
        return Err(Error::usage("empty graph has no critical budget"));
    }
    if g == 0 || g > pc {
        return Err(Error::usage(format!("goal {g} out of range 1..={pc}")));
    }
    let cap = cap.min(16);
    if pc > cap {
        return Err(Error::capacity(format!(
            "oracle search over {pc} nodes exceeds the cap of {cap}"
        )));
    }

    let idx_of = |v: NodeId| ids.binary_search(&v).ok();
    let audit_masks: Vec<u64> = ids
        .iter()
        .map(|&u| {
            let mut m = 0u64;
            for &v in graph.audits(u) {
                if let Some(j) = idx_of(v) {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect();

    let full: u64 = if pc == 64 { u64::MAX } else { (1u64 << pc) - 1 };
    for b in 1..=pc.div_ceil(2) {
        let cands: Vec<u64> =
            (1..=full).filter(|m| m.count_ones() as usize <= b).collect();
        let compat = compat_rows(&audit_masks, full, &cands);
        let mut chosen = Vec::new();
        let avail: Vec<usize> = (0..cands.len()).collect();
        if cover(&cands, &compat, &avail, 0, full, g - 1, &mut chosen) {
            let members: Vec<NodeSet> = chosen
                .iter()
                .map(|&ci| {
                    let mut s = NodeSet::empty(graph.universe());
                    let mut m = cands[ci];
                    while m != 0 {
                        let i = m.trailing_zeros() as usize;
                        m &= m - 1;
                        s.insert(ids[i]);
                    }
                    s
                })
                .collect();
            let family = CompatibleFamily { members, anchor: 0, budget: b };
            #[cfg(debug_assertions)]
            {
                let reports =
                    reports_from_family(graph, &family).expect("search emits compatible families");
                let gg = crate::scenario::guaranteed_good(graph, &reports, b, cap)
                    .expect("within cap");
                assert!(
                    gg.len() < g,
                    "family search disagrees with the definition-level check"
                );
            }
            return Ok((b, family));
        }
    }
    unreachable!("a set and its complement always blind at half the nodes")
}

/// Pairwise compatibility over candidate masks: `a` and `b` clash iff some
/// auditor outside both audits a node of their symmetric difference.
fn compat_rows(audit_masks: &[u64], full: u64, cands: &[u64]) -> Vec<Vec<u64>> {
    let words = cands.len().div_ceil(64);
    let mut rows = vec![vec![0u64; words]; cands.len()];
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let diff = cands[i] ^ cands[j];
            let outside = full & !(cands[i] | cands[j]);
            let mut ok = true;
            let mut rest = outside;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if audit_masks[u] & diff != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                rows[i][j / 64] |= 1 << (j % 64);
                rows[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    rows
}

fn cover(
    cands: &[u64],
    compat: &[Vec<u64>],
    avail: &[usize],
    handled: u64,
    full: u64,
    excusable: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if handled == full {
        return true;
    }
    let v = (!handled & full).trailing_zeros() as usize;
    let bit = 1u64 << v;
    for &ci in avail {
        if cands[ci] & bit == 0 {
            continue;
        }
        chosen.push(ci);
        let row = &compat[ci];
        let next: Vec<usize> =
            avail.iter().copied().filter(|&cj| row[cj / 64] >> (cj % 64) & 1 == 1).collect();
        if cover(cands, compat, &next, handled | cands[ci], full, excusable, chosen) {
            return true;
        }
        chosen.pop();
    }
    if excusable > 0 {
        return cover(cands, compat, avail, handled | bit, full, excusable - 1, chosen);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate;
    use crate::generate;
    use crate::scenario::{
        adversary_slots, claims_from_bits, guaranteed_good, is_consistent, ENUM_CAP,
    };

    fn set(n: usize, ids: &[NodeId]) -> NodeSet {
        NodeSet::from_ids(n, ids).unwrap()
    }

    /// Definition-level reference: smallest budget for which some corrupt
    /// set and claim assignment leaves nothing guaranteed good. Exhaustive
    /// over everything, so tiny graphs only.
    fn brute_m<G: AuditGraph>(graph: &G, g: usize) -> usize {
        let ids: Vec<NodeId> = graph.present().to_vec();
        let n = ids.len();
        for b in 1..=n.div_ceil(2) {
            let full = (1u64 << n) - 1;
            for bad_mask in 0..=full {
                if bad_mask.count_ones() as usize > b {
                    continue;
                }
                let mut bad = NodeSet::empty(graph.universe());
                for (i, &v) in ids.iter().enumerate() {
                    if bad_mask >> i & 1 == 1 {
                        bad.insert(v);
                    }
                }
                let slots = adversary_slots(graph, &bad);
                assert!(slots.len() <= 20, "brute force needs few adversary slots");
                for bits in 0..1u64 << slots.len() {
                    let claims = claims_from_bits(&slots, bits);
                    let r = truthful_fill(graph, &bad, &claims).unwrap();
                    if guaranteed_good(graph, &r, b, ENUM_CAP).unwrap().len() < g {
                        return b;
                    }
                }
            }
        }
        unreachable!("majority corruption always blinds")
    }

    #[test]
    fn compatibility_predicate() {
        let k2 = generate::complete(2).unwrap();
        assert!(compatible(&k2, &set(2, &[0]), &set(2, &[1])));
        let p3 = generate::path(3).unwrap();
        assert!(!compatible(&p3, &set(3, &[0]), &set(3, &[2])));
        assert!(compatible(&p3, &set(3, &[0]), &set(3, &[0])));
        assert!(compatible(&p3, &set(3, &[1]), &set(3, &[1, 2])));
    }

    #[test]
    fn family_reports_satisfy_every_member() {
        let g = generate::star(5).unwrap();
        let members: Vec<NodeSet> =
            (1..5).map(|leaf| set(5, &[0, leaf])).collect();
        for (a, ma) in members.iter().enumerate() {
            for mb in &members[a + 1..] {
                assert!(compatible(&g, ma, mb));
            }
        }
        let family = CompatibleFamily { members, anchor: 0, budget: 2 };
        let r = reports_from_family(&g, &family).unwrap();
        for m in &family.members {
            assert!(is_consistent(&g, &r, m, 2));
        }
        assert!(guaranteed_good(&g, &r, 2, ENUM_CAP).unwrap().is_empty());
    }

    #[test]
    fn incompatible_family_is_rejected() {
        let p3 = generate::path(3).unwrap();
        let family = CompatibleFamily {
            members: vec![set(3, &[0]), set(3, &[2])],
            anchor: 0,
            budget: 1,
        };
        assert!(matches!(reports_from_family(&p3, &family), Err(Error::Usage(_))));
    }

    #[test]
    fn known_critical_budgets() {
        let (m, fam) = exact_m(&generate::star(5).unwrap(), ORACLE_CAP).unwrap();
        assert_eq!(m, 2);
        assert_eq!(fam.coverage(5).len(), 5);
        let (m, _) = exact_m(&generate::complete(4).unwrap(), ORACLE_CAP).unwrap();
        assert_eq!(m, 2);
        let (m, _) = exact_m(&generate::complete(6).unwrap(), ORACLE_CAP).unwrap();
        assert_eq!(m, 3);
        let (m, _) = exact_m(&generate::complete_bipartite(2, 3).unwrap(), ORACLE_CAP).unwrap();
        assert_eq!(m, 3);
        let (m, _) = exact_m(&generate::complete(2).unwrap(), ORACLE_CAP).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn oracle_matches_brute_force_on_all_tiny_graphs() {
        for g in enumerate::labeled_graphs(4) {
            let (m, _) = exact_m(&g, ORACLE_CAP).unwrap();
            assert_eq!(m, brute_m(&g, 1), "graph {}", g.to_text());
        }
    }

    #[test]
    fn directed_oracle_matches_brute_force_on_all_tiny_digraphs() {
        for d in enumerate::labeled_digraphs(3) {
            let (m, _) = exact_m_directed(&d, ORACLE_CAP_DIRECTED).unwrap();
            assert_eq!(m, brute_m(&d, 1), "digraph {}", d.to_text());
        }
    }

    #[test]
    fn directed_budgets() {
        let star = generate::star(5).unwrap().symmetrize();
        assert_eq!(exact_m_directed(&star, ORACLE_CAP_DIRECTED).unwrap().0, 2);
        let arcless = DiGraph::new(3, &[]).unwrap();
        assert_eq!(exact_m_directed(&arcless, ORACLE_CAP_DIRECTED).unwrap().0, 1);
        let cycle = DiGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(exact_m_directed(&cycle, ORACLE_CAP_DIRECTED).unwrap().0, 2);
    }

    #[test]
    fn g_variant_generalizes_the_plain_oracle() {
        for seed in 0..10 {
            let g = generate::erdos_renyi(6, 0.5, 600 + seed).unwrap();
            let (m1, _) = exact_m(&g, ORACLE_CAP).unwrap();
            let (mg1, _) = exact_m_g(&g, 1, ORACLE_CAP).unwrap();
            assert_eq!(m1, mg1);
            // leaving all but one node unexplained takes a single corrupt node
            let (mn, _) = exact_m_g(&g, 6, ORACLE_CAP).unwrap();
            assert_eq!(mn, 1);
        }
    }

    #[test]
    fn g_variant_matches_brute_force() {
        for seed in 0..6 {
            let g = generate::erdos_renyi(5, 0.5, 700 + seed).unwrap();
            for goal in 1..=3 {
                let (mg, _) = exact_m_g(&g, goal, ORACLE_CAP).unwrap();
                assert_eq!(mg, brute_m(&g, goal), "seed {seed} goal {goal}");
            }
        }
    }

    #[test]
    fn half_the_nodes_always_suffice() {
        for seed in 0..10 {
            let g = generate::erdos_renyi(7, 0.6, 800 + seed).unwrap();
            let (m, _) = exact_m(&g, ORACLE_CAP).unwrap();
            assert!(m <= 4);
        }
    }

    #[test]
    fn oracle_cap_is_enforced() {
        let g = generate::path(11).unwrap();
        assert!(matches!(exact_m(&g, ORACLE_CAP), Err(Error::Capacity(_))));
        assert!(exact_m(&g, 12).is_ok());
    }

    #[test]
    fn disconnected_graphs_blind_via_the_small_side() {
        // one corrupt node makes the isolated vertex and itself mutually
        // unexplainable only when coverage spans both components
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        let (m, _) = exact_m(&g, ORACLE_CAP).unwrap();
        assert_eq!(m, brute_m(&g, 1));
    }
}
