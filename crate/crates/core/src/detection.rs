//! Fast detection of truthful nodes from audit reports.
//!
//! All three detectors share the same first step: while some report on a
//! live audit pair is accusatory, remove both endpoints. In what remains,
//! no accusation survives, so every connected component (or directed reach
//! set) is homogeneous: entirely truthful or entirely corrupt. A corrupt
//! component can only be as large as the corrupt nodes still standing,
//! which is where [`certify`] gets its leverage: any declared component
//! strictly larger than the residual budget must be truthful.
//!
//! Removal needs one pass over the accusing claims in a fixed
//! (auditor-major) order: whether a claim accuses never changes, and
//! removals only kill pairs, so scanning in a fixed priority order is the
//! same as repeatedly taking the first live accusatory pair under that
//! order. That keeps the whole detector linear in the number of audit
//! pairs, and the claim scan itself is a single sequential sweep.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Graph, NodeId, NodeSet};
use crate::scenario::{ReportMatrix, Verdict};

/// What a detector declared and how it got there.
#[derive(Clone, Debug)]
pub struct DetectionOutcome {
    /// Nodes declared truthful.
    pub declared_good: NodeSet,
    /// Number of removal rounds, i.e. removed node pairs.
    pub rounds_removed: usize,
    /// The removed pairs in removal order.
    pub removed_pairs: Vec<(NodeId, NodeId)>,
    /// How many nodes the caller asked for.
    pub goal: usize,
    /// Smallest declared component size, or the declared reach index.
    pub support: usize,
    /// Set by [`certify`] when the caller knows the budget; detection
    /// itself never needs it.
    pub certified: bool,
}

/// Declares truthful nodes when a component's size outweighs whatever
/// corruption could remain: true iff at least `goal` nodes were declared
/// and `support > budget − rounds_removed`.
pub fn certify(outcome: &DetectionOutcome, budget: usize) -> bool {
    !outcome.declared_good.is_empty()
        && outcome.declared_good.len() >= outcome.goal
        && outcome.support as i64 > budget as i64 - outcome.rounds_removed as i64
}

/// Declares one truthful node via pair removal and the largest surviving
/// component (ties to the component with the smallest member).
pub fn detect_one_undirected(graph: &Graph, reports: &ReportMatrix) -> DetectionOutcome {
    detect_components(graph, reports, 1, None).expect("goal 1 is always valid")
}

/// [`detect_one_undirected`] with a seeded random pair-removal priority,
/// for checking that the guarantee does not depend on the removal order.
pub fn detect_one_undirected_seeded(
    graph: &Graph,
    reports: &ReportMatrix,
    seed: u64,
) -> DetectionOutcome {
    detect_components(graph, reports, 1, Some(seed)).expect("goal 1 is always valid")
}

/// Declares at least `goal` truthful nodes by accumulating surviving
/// components from largest to smallest (ties to the smallest member).
/// When fewer than `goal` nodes survive, declares all survivors and leaves
/// the outcome uncertifiable.
pub fn detect_many(graph: &Graph, reports: &ReportMatrix, goal: usize) -> Result<DetectionOutcome> {
    detect_components(graph, reports, goal, None)
}

/// [`detect_many`] with a seeded random pair-removal priority.
pub fn detect_many_seeded(
    graph: &Graph,
    reports: &ReportMatrix,
    goal: usize,
    seed: u64,
) -> Result<DetectionOutcome> {
    detect_components(graph, reports, goal, Some(seed))
}

fn detect_components(
    graph: &Graph,
    reports: &ReportMatrix,
    goal: usize,
    order_seed: Option<u64>,
) -> Result<DetectionOutcome> {
    if goal == 0 || goal > graph.universe() {
        return Err(Error::usage(format!(
            "goal {goal} out of range 1..={}",
            graph.universe()
        )));
    }
    let mut accusatory = accusing_pairs(reports);
    if let Some(seed) = order_seed {
        accusatory.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let (dead, removed_pairs) = removal_pass(graph.universe(), &accusatory);
    let survivors;
    let h = if removed_pairs.is_empty() {
        graph
    } else {
        survivors = graph.induced_remove(&dead);
        &survivors
    };

    let (declared_good, support) = accumulate_components(h, goal);
    Ok(DetectionOutcome {
        declared_good,
        rounds_removed: removed_pairs.len(),
        removed_pairs,
        goal,
        support,
        certified: false,
    })
}

/// Unions components from largest to smallest (ties to the smallest
/// member) until `goal` nodes are covered; returns the union and the size
/// of the last component taken. Union-find over the edge list, so the
/// sweep stays sequential even when the graph outgrows the cache.
fn accumulate_components(graph: &Graph, goal: usize) -> (NodeSet, usize) {
    let n = graph.universe();

    fn find(parent: &mut [NodeId], mut v: NodeId) -> NodeId {
        while parent[v as usize] != v {
            let grand = parent[parent[v as usize] as usize];
            parent[v as usize] = grand;
            v = grand;
        }
        v
    }

    let mut parent: Vec<NodeId> = (0..n as NodeId).collect();
    let mut size: Vec<u32> = vec![1; n];
    for (u, v) in graph.edges() {
        let (mut ru, mut rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            continue;
        }
        if size[ru as usize] < size[rv as usize] {
            std::mem::swap(&mut ru, &mut rv);
        }
        parent[rv as usize] = ru;
        size[ru as usize] += size[rv as usize];
    }

    // roots in first-seen order, i.e. ascending smallest member; the
    // stable sort then leaves ties in that order
    let mut roots: Vec<NodeId> = Vec::new();
    let mut seen = NodeSet::empty(n);
    for v in graph.nodes() {
        let r = find(&mut parent, v);
        if !seen.contains(r) {
            seen.insert(r);
            roots.push(r);
        }
    }
    roots.sort_by_key(|&r| std::cmp::Reverse(size[r as usize]));

    let mut chosen = NodeSet::empty(n);
    let mut covered = 0;
    let mut support = 0;
    for &r in &roots {
        if covered >= goal {
            break;
        }
        chosen.insert(r);
        covered += size[r as usize] as usize;
        support = size[r as usize] as usize;
    }

    let mut declared_good = NodeSet::empty(n);
    for v in graph.nodes() {
        if chosen.contains(find(&mut parent, v)) {
            declared_good.insert(v);
        }
    }
    (declared_good, support)
}

/// Declares the surviving node with the largest reach set, smallest id on
/// ties. Accusations are the Bad verdicts on arcs.
pub fn detect_one_directed(graph: &DiGraph, reports: &ReportMatrix) -> DetectionOutcome {
    detect_directed(graph, reports, None)
}

/// [`detect_one_directed`] with a seeded random pair-removal priority.
pub fn detect_one_directed_seeded(
    graph: &DiGraph,
    reports: &ReportMatrix,
    seed: u64,
) -> DetectionOutcome {
    detect_directed(graph, reports, Some(seed))
}

fn detect_directed(
    graph: &DiGraph,
    reports: &ReportMatrix,
    order_seed: Option<u64>,
) -> DetectionOutcome {
    let mut accusatory = accusing_pairs(reports);
    if let Some(seed) = order_seed {
        accusatory.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let (dead, removed_pairs) = removal_pass(graph.universe(), &accusatory);
    let survivors;
    let h = if removed_pairs.is_empty() {
        graph
    } else {
        survivors = graph.induced_remove(&dead);
        &survivors
    };

    let mut declared_good = NodeSet::empty(graph.universe());
    let mut support = 0;
    if let Some((v, reach)) = h.max_reach_node() {
        declared_good.insert(v);
        support = reach.len();
    }
    DetectionOutcome {
        declared_good,
        rounds_removed: removed_pairs.len(),
        removed_pairs,
        goal: 1,
        support,
        certified: false,
    }
}

/// Every Bad claim as an (auditor, subject) pair, in row order. An edge
/// accused from both ends shows up twice; the removal pass skips the echo
/// once the endpoints are dead.
fn accusing_pairs(reports: &ReportMatrix) -> Vec<(NodeId, NodeId)> {
    reports.claims().filter(|c| c.verdict == Verdict::Bad).map(|c| (c.auditor, c.subject)).collect()
}

/// One pass in priority order: take each pair whose endpoints both still
/// stand, remove both. Equivalent to repeatedly removing the first live
/// accusatory pair.
fn removal_pass(n: usize, pairs: &[(NodeId, NodeId)]) -> (NodeSet, Vec<(NodeId, NodeId)>) {
    let mut dead = NodeSet::empty(n);
    let mut removed = Vec::new();
    for &(u, v) in pairs {
        if dead.contains(u) || dead.contains(v) {
            continue;
        }
        dead.insert(u);
        dead.insert(v);
        removed.push((u, v));
    }
    (dead, removed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::scenario::{truthful_fill, Claim};

    fn set(n: usize, ids: &[NodeId]) -> NodeSet {
        NodeSet::from_ids(n, ids).unwrap()
    }

    #[test]
    fn all_truthful_declares_largest_component() {
        let g = generate::cycle(5).unwrap();
        let r = truthful_fill(&g, &NodeSet::empty(5), &[]).unwrap();
        let o = detect_one_undirected(&g, &r);
        assert_eq!(o.rounds_removed, 0);
        assert_eq!(o.declared_good.len(), 5);
        assert_eq!(o.support, 5);
        assert!(certify(&o, 0));
    }

    #[test]
    fn middle_accusation_removes_one_pair() {
        let g = generate::path(4).unwrap();
        let r = truthful_fill(&g, &set(4, &[1]), &[]).unwrap();
        let o = detect_one_undirected(&g, &r);
        assert_eq!(o.removed_pairs, vec![(0, 1)]);
        assert_eq!(o.declared_good.to_vec(), vec![2, 3]);
        assert_eq!(o.support, 2);
        assert!(certify(&o, 1));
    }

    #[test]
    fn star_swap_attack_leaves_an_uncertifiable_leaf() {
        let g = generate::star(5).unwrap();
        let claims: Vec<Claim> = (1..5)
            .map(|v| Claim::new(0, v, Verdict::Good))
            .chain([Claim::new(1, 0, Verdict::Bad)])
            .collect();
        let r = truthful_fill(&g, &set(5, &[0, 1]), &claims).unwrap();
        let o = detect_one_undirected(&g, &r);
        assert_eq!(o.rounds_removed, 1);
        assert_eq!(o.declared_good.len(), 1);
        assert_eq!(o.support, 1);
        assert!(!certify(&o, 2));
        // the declared leaf is still truthful, the theorem just cannot
        // vouch for it at this budget
        assert!(!o.declared_good.contains(0) && !o.declared_good.contains(1));
    }

    #[test]
    fn component_tie_breaks_to_smallest_member() {
        let g = generate::disjoint_cliques(&[3, 3]).unwrap();
        let r = truthful_fill(&g, &NodeSet::empty(6), &[]).unwrap();
        let o = detect_one_undirected(&g, &r);
        assert_eq!(o.declared_good.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn directed_truthful_declares_deepest_node() {
        let d = DiGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let r = truthful_fill(&d, &NodeSet::empty(3), &[]).unwrap();
        let o = detect_one_directed(&d, &r);
        assert_eq!(o.declared_good.to_vec(), vec![2]);
        assert_eq!(o.support, 3);
        assert!(certify(&o, 1));
    }

    #[test]
    fn arcless_digraph_declares_smallest_id() {
        let d = DiGraph::new(4, &[]).unwrap();
        let r = truthful_fill(&d, &NodeSet::empty(4), &[]).unwrap();
        let o = detect_one_directed(&d, &r);
        assert_eq!(o.declared_good.to_vec(), vec![0]);
        assert_eq!(o.support, 1);
        assert!(certify(&o, 0));
        assert!(!certify(&o, 1));
    }

    #[test]
    fn directed_accusation_removes_both_endpoints() {
        let d = DiGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = truthful_fill(&d, &set(4, &[1]), &[]).unwrap();
        let o = detect_one_directed(&d, &r);
        // 0 accuses 1, removing both; 2 and 3 survive with reach 1 and 2
        assert_eq!(o.removed_pairs, vec![(0, 1)]);
        assert_eq!(o.declared_good.to_vec(), vec![3]);
        assert_eq!(o.support, 2);
    }

    #[test]
    fn many_accumulates_components_in_size_order() {
        let g = generate::disjoint_cliques(&[3, 3]).unwrap();
        let r = truthful_fill(&g, &NodeSet::empty(6), &[]).unwrap();
        let o = detect_many(&g, &r, 4).unwrap();
        assert_eq!(o.declared_good.len(), 6);
        assert_eq!(o.support, 3);
        assert!(certify(&o, 0));
        let o1 = detect_many(&g, &r, 1).unwrap();
        assert_eq!(o1.declared_good.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn many_matches_one_at_goal_one() {
        let g = generate::path(4).unwrap();
        let r = truthful_fill(&g, &set(4, &[1]), &[]).unwrap();
        let many = detect_many(&g, &r, 2).unwrap();
        assert_eq!(many.declared_good.to_vec(), vec![2, 3]);
        assert!(certify(&many, 1));
        let one = detect_one_undirected(&g, &r);
        assert_eq!(one.declared_good, many.declared_good);
    }

    #[test]
    fn many_with_too_few_survivors_is_uncertifiable() {
        let g = generate::path(4).unwrap();
        let r = truthful_fill(&g, &set(4, &[1]), &[]).unwrap();
        let o = detect_many(&g, &r, 3).unwrap();
        assert_eq!(o.declared_good.to_vec(), vec![2, 3]);
        assert!(!certify(&o, 1));
        assert!(detect_many(&g, &r, 0).is_err());
        assert!(detect_many(&g, &r, 5).is_err());
    }

    #[test]
    fn removal_order_does_not_break_the_guarantee() {
        // both instances satisfy the theorem precondition (one corrupt
        // node, critical budget at least 2), so every removal order must
        // declare truthful nodes even though the declared set may differ
        let path = generate::path(4).unwrap();
        let path_bad = set(4, &[1]);
        let lying =
            [Claim::new(1, 0, Verdict::Good), Claim::new(1, 2, Verdict::Bad)];
        let path_reports = truthful_fill(&path, &path_bad, &lying).unwrap();

        let star = generate::star(5).unwrap();
        let star_bad = set(5, &[0]);
        let star_reports = truthful_fill(&star, &star_bad, &[]).unwrap();

        let mut distinct = std::collections::HashSet::new();
        for seed in 0..20 {
            let o = detect_one_undirected_seeded(&path, &path_reports, seed);
            assert!(!o.declared_good.is_empty());
            assert!(o.declared_good.is_disjoint(&path_bad), "seed {seed} declared node 1");
            distinct.insert(o.declared_good.to_vec());

            let o = detect_one_undirected_seeded(&star, &star_reports, seed);
            assert!(!o.declared_good.is_empty());
            assert!(o.declared_good.is_disjoint(&star_bad), "seed {seed} declared the center");
            // every removed pair carries at least one actually-corrupt node
            let hits = o
                .removed_pairs
                .iter()
                .flat_map(|&(u, v)| [u, v])
                .filter(|&x| star_bad.contains(x))
                .count();
            assert!(hits >= o.rounds_removed);
        }
        // the path instance really is order-sensitive in its declared set
        assert!(distinct.len() > 1);
    }
}
