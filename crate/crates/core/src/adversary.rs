//! Constructive corrupt-party strategies.
//!
//! Every upper bound on the blinding budget comes with a strategy: corrupt a
//! separator plus one residual component and have the corrupt nodes accuse
//! across the cut. Under those reports, each component is interchangeable
//! with the truly corrupt one, so nothing can be singled out as truthful.
//! An [`AttackPlan`] packages the corrupt set and its claims together with
//! two budgets: `budget_used`, the nodes actually corrupted, and `budget`,
//! the knowledge bound at which the blinding argument goes through. They
//! differ whenever the corrupted component is not the largest one: the
//! agency must consider a rival explanation of size separator + largest
//! component, so impossibility is certified at that size even though fewer
//! nodes were bought.

use crate::error::{Error, Result};
use crate::graph::{AuditGraph, DiGraph, Graph, NodeSet};
use crate::reductions;
use crate::scenario::{Claim, ReportMatrix, Scenario, Verdict};
use crate::separators::{self, SeparatorResult};
use num_rational::Ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    SeparatorAttack,
    DirectedSeparatorAttack,
    GRemainderAttack,
    ApproxAttack,
    CliqueAppendAttack,
}

/// A corrupt set with its claims and the budget at which it blinds.
#[derive(Clone, Debug)]
pub struct AttackPlan {
    pub construction: Construction,
    pub bad: NodeSet,
    pub claims: Vec<Claim>,
    /// |bad|.
    pub budget_used: usize,
    /// Knowledge bound at which identification fails; at least budget_used.
    pub budget: usize,
    /// The plan leaves fewer than this many nodes identifiable.
    pub target_g: usize,
    /// The corrupted separator (empty for the split-brain fallback).
    pub separator: NodeSet,
    /// Set when budget_used reaches half the nodes, where blinding is free.
    pub degenerate: bool,
}

impl AttackPlan {
    /// Plays the plan out on a graph, producing the full scenario at the
    /// certified budget.
    pub fn realize<G: AuditGraph + Clone>(&self, graph: &G) -> Result<Scenario<G>> {
        Scenario::new(graph.clone(), self.bad.clone(), &self.claims, self.budget)
    }

    pub fn reports<G: AuditGraph>(&self, graph: &G) -> Result<ReportMatrix> {
        crate::scenario::truthful_fill(graph, &self.bad, &self.claims)
    }
}

/// Claims for a corrupted separator-plus-component region: separator
/// members accuse everyone, component members vouch for their own
/// component and accuse the separator.
fn region_claims<G: AuditGraph>(graph: &G, separator: &NodeSet, core: &NodeSet) -> Vec<Claim> {
    let mut claims = Vec::new();
    for u in separator.iter() {
        for &v in graph.audits(u) {
            claims.push(Claim::new(u, v, Verdict::Bad));
        }
    }
    for u in core.iter() {
        for &v in graph.audits(u) {
            let verdict = if core.contains(v) { Verdict::Good } else { Verdict::Bad };
            claims.push(Claim::new(u, v, verdict));
        }
    }
    claims
}

fn assemble(
    construction: Construction,
    graph_nodes: usize,
    separator: NodeSet,
    core: NodeSet,
    claims: Vec<Claim>,
    budget: usize,
    target_g: usize,
) -> AttackPlan {
    let bad = separator.union(&core);
    let budget_used = bad.len();
    debug_assert!(budget_used <= budget);
    AttackPlan {
        construction,
        bad,
        claims,
        budget_used,
        budget,
        target_g,
        separator,
        degenerate: budget_used >= graph_nodes.div_ceil(2),
    }
}

/// Corrupts a separator and its smallest residual component (ties by
/// smallest id). Certified at budget separator + largest component.
pub fn separator_attack(graph: &Graph, sep: &SeparatorResult) -> Result<AttackPlan> {
    build_separator_attack(graph, sep, 1, Construction::SeparatorAttack)
}

/// As [`separator_attack`], but the separator may leave up to g - 1 nodes
/// in oversized components; those stay identifiable, everything else is
/// blinded.
pub fn g_remainder_attack(graph: &Graph, sep: &SeparatorResult, g: usize) -> Result<AttackPlan> {
    build_separator_attack(graph, sep, g, Construction::GRemainderAttack)
}

fn build_separator_attack(
    graph: &Graph,
    sep: &SeparatorResult,
    g: usize,
    construction: Construction,
) -> Result<AttackPlan> {
    if sep.g != g {
        return Err(Error::usage(format!(
            "separator was solved for a remainder allowance of {}, not {g}",
            sep.g
        )));
    }
    if !separators::verify_g_remainder(graph, &sep.separator, sep.k, g) {
        return Err(Error::usage("separator does not satisfy its bound"));
    }
    let comps = graph.induced_remove(&sep.separator).connected_components();
    let small = comps.iter().filter(|c| c.len() <= sep.k);
    let core = small
        .min_by_key(|c| (c.len(), c.first()))
        .cloned()
        .unwrap_or_else(|| NodeSet::empty(graph.universe()));
    let budget =
        sep.separator.len() + comps.iter().map(|c| c.len()).filter(|&s| s <= sep.k).max().unwrap_or(0);
    let claims = region_claims(graph, &sep.separator, &core);
    Ok(assemble(construction, graph.node_count(), sep.separator.clone(), core, claims, budget, g))
}

/// Directed variant: corrupts a reachability separator plus the full
/// ancestor set of a maximum-reach vertex. Corrupt nodes accuse the
/// separator and vouch for everyone else.
pub fn directed_attack(digraph: &DiGraph, sep: &SeparatorResult) -> Result<AttackPlan> {
    if !separators::verify_reach_separator(digraph, &sep.separator, sep.k) {
        return Err(Error::usage("separator does not bound reachability"));
    }
    let h = digraph.induced_remove(&sep.separator);
    let core = match h.max_reach_node() {
        Some((_, reach)) => reach,
        None => NodeSet::empty(digraph.universe()),
    };
    let bad = sep.separator.union(&core);
    let mut claims = Vec::new();
    for u in bad.iter() {
        for &v in digraph.audits(u) {
            let verdict =
                if sep.separator.contains(v) { Verdict::Bad } else { Verdict::Good };
            claims.push(Claim::new(u, v, verdict));
        }
    }
    let budget = sep.separator.len() + core.len();
    Ok(assemble(
        Construction::DirectedSeparatorAttack,
        digraph.node_count(),
        sep.separator.clone(),
        core,
        claims,
        budget,
        1,
    ))
}

/// Blinds within a logarithmic factor of optimal without any exact solve:
/// the heuristic separator route when it is cheap, otherwise the
/// split-brain fallback where half the nodes accuse the other half.
pub fn approx_attack(graph: &Graph, effort: usize, seed: u64) -> Result<AttackPlan> {
    let sep = separators::approx_min_sum(graph, effort, seed);
    let mut plan = separator_attack(graph, &sep)?;
    plan.construction = Construction::ApproxAttack;
    let fallback = split_brain(graph);
    if fallback.budget < plan.budget {
        return Ok(fallback);
    }
    Ok(plan)
}

/// Corrupts the lower half of the node ids and has each side accuse the
/// other wholesale. Always blinds at half the nodes.
fn split_brain(graph: &Graph) -> AttackPlan {
    let half = graph.node_count().div_ceil(2);
    let mut bad = NodeSet::empty(graph.universe());
    for v in graph.nodes().take(half) {
        bad.insert(v);
    }
    let mut claims = Vec::new();
    for u in bad.iter() {
        for &v in graph.audits(u) {
            let verdict = if bad.contains(v) { Verdict::Good } else { Verdict::Bad };
            claims.push(Claim::new(u, v, verdict));
        }
    }
    AttackPlan {
        construction: Construction::ApproxAttack,
        bad: bad.clone(),
        claims,
        budget_used: half,
        budget: half,
        target_g: 1,
        separator: NodeSet::empty(graph.universe()),
        degenerate: true,
    }
}

/// Appends the h-clique for `delta`, then blinds the original part with an
/// optimal separator attack. The clique stays identifiable but is one node
/// short of the target, so finding h + 1 truthful nodes is impossible at
/// the original graph's budget. Returns the appended graph with the plan.
pub fn clique_append_attack(graph: &Graph, delta: Ratio<u64>) -> Result<(Graph, AttackPlan)> {
    let (appended, h) = reductions::clique_append(graph, delta)?;
    let sep = separators::min_sum(graph, separators::EXACT_CAP)?;
    let inner = separator_attack(graph, &sep)?;
    let widen = |s: &NodeSet| {
        let mut w = NodeSet::empty(appended.universe());
        for v in s.iter() {
            w.insert(v);
        }
        w
    };
    let separator = widen(&inner.separator);
    let core = widen(&inner.bad.difference(&inner.separator));
    let claims = region_claims(&appended, &separator, &core);
    Ok((
        appended.clone(),
        assemble(
            Construction::CliqueAppendAttack,
            appended.node_count(),
            separator,
            core,
            claims,
            inner.budget,
            h + 1,
        ),
    ))
}

/// Checks the blinding argument itself, with no configuration enumeration:
/// the corrupt set must be a separator plus whole residual components with
/// the canonical claims, and every component that fits under the budget
/// alongside the separator is an alternative suspect. Nodes in oversized
/// components are the only identifiable ones; the plan is certified when
/// they number less than the target.
pub fn structurally_certified(graph: &Graph, plan: &AttackPlan) -> bool {
    if plan.budget_used != plan.bad.len() || plan.budget < plan.budget_used {
        return false;
    }
    separator_shape(graph, plan) || split_brain_shape(graph, plan)
}

fn separator_shape(graph: &Graph, plan: &AttackPlan) -> bool {
    if !plan.separator.is_subset(&plan.bad) || !plan.bad.is_subset(graph.present()) {
        return false;
    }
    let core = plan.bad.difference(&plan.separator);
    let comps = graph.induced_remove(&plan.separator).connected_components();
    let mut uncovered = 0;
    for c in &comps {
        if !c.is_disjoint(&core) && !c.is_subset(&core) {
            return false;
        }
        if plan.separator.len() + c.len() > plan.budget && c.is_disjoint(&core) {
            uncovered += c.len();
        }
    }
    uncovered < plan.target_g && claims_match(&region_claims(graph, &plan.separator, &core), plan)
}

fn split_brain_shape(graph: &Graph, plan: &AttackPlan) -> bool {
    if !plan.separator.is_empty() || plan.target_g != 1 {
        return false;
    }
    let rest = graph.present().difference(&plan.bad);
    if plan.bad.len() > plan.budget || rest.len() > plan.budget {
        return false;
    }
    let mut claims = Vec::new();
    for u in plan.bad.iter() {
        for &v in graph.audits(u) {
            let verdict = if plan.bad.contains(v) { Verdict::Good } else { Verdict::Bad };
            claims.push(Claim::new(u, v, verdict));
        }
    }
    claims_match(&claims, plan)
}

/// Directed analog: every surviving vertex must drag at most
/// budget - |separator| ancestors, and the corrupt core must be exactly the
/// ancestor set of a maximum-reach vertex.
pub fn structurally_certified_directed(digraph: &DiGraph, plan: &AttackPlan) -> bool {
    if plan.budget_used != plan.bad.len()
        || plan.budget < plan.budget_used
        || !plan.separator.is_subset(&plan.bad)
        || !plan.bad.is_subset(digraph.present())
    {
        return false;
    }
    let core = plan.bad.difference(&plan.separator);
    let h = digraph.induced_remove(&plan.separator);
    let mut max_reach = 0;
    for v in h.nodes() {
        let reach = h.reach_set(v).expect("present node").len();
        max_reach = max_reach.max(reach);
        if plan.separator.len() + reach > plan.budget {
            return false;
        }
    }
    match h.max_reach_node() {
        Some((_, reach)) => {
            if core != reach || reach.len() != max_reach {
                return false;
            }
        }
        None => {
            if !core.is_empty() {
                return false;
            }
        }
    }
    let mut claims = Vec::new();
    for u in plan.bad.iter() {
        for &v in digraph.audits(u) {
            let verdict =
                if plan.separator.contains(v) { Verdict::Bad } else { Verdict::Good };
            claims.push(Claim::new(u, v, verdict));
        }
    }
    claims_match(&claims, plan)
}

/// Compares claim lists as sets, but lets separator members say anything:
/// they are part of every suspect set, so their reports never constrain
/// consistency.
fn claims_match(expected: &[Claim], plan: &AttackPlan) -> bool {
    let key = |c: &Claim| (c.auditor, c.subject, c.verdict == Verdict::Bad);
    let constrained = |c: &&Claim| !plan.separator.contains(c.auditor);
    let mut want: Vec<_> = expected.iter().filter(constrained).map(key).collect();
    let mut got: Vec<_> = plan.claims.iter().filter(constrained).map(key).collect();
    want.sort_unstable();
    got.sort_unstable();
    if want != got {
        return false;
    }
    plan.claims.iter().all(|c| plan.bad.contains(c.auditor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{certify, detect_one_undirected};
    use crate::generate;
    use crate::oracle::{exact_m, ORACLE_CAP};
    use crate::scenario::impossible_to_find;
    use crate::separators::{min_sum, min_sum_g, reach_min_sum, EXACT_CAP};

    fn blinds<G: AuditGraph + Clone>(graph: &G, plan: &AttackPlan) -> bool {
        let sc = plan.realize(graph).unwrap();
        impossible_to_find(graph, sc.reports(), plan.budget, plan.target_g, 16).unwrap()
    }

    #[test]
    fn star_attack_buys_the_center_and_a_leaf() {
        let g = generate::star(5).unwrap();
        let sep = min_sum(&g, EXACT_CAP).unwrap();
        let plan = separator_attack(&g, &sep).unwrap();
        assert_eq!(plan.bad.to_vec(), vec![0, 1]);
        assert_eq!(plan.budget_used, 2);
        assert_eq!(plan.budget, 2);
        assert!(!plan.degenerate);
        assert!(blinds(&g, &plan));
        assert!(structurally_certified(&g, &plan));
    }

    #[test]
    fn bipartite_attack_takes_the_small_side_plus_one() {
        let g = generate::complete_bipartite(2, 3).unwrap();
        let sep = min_sum(&g, EXACT_CAP).unwrap();
        let plan = separator_attack(&g, &sep).unwrap();
        assert_eq!(plan.budget_used, 3);
        assert!(blinds(&g, &plan));
    }

    #[test]
    fn complete_graph_attack_is_degenerate() {
        let g = generate::complete(6).unwrap();
        let sep = min_sum(&g, EXACT_CAP).unwrap();
        let plan = separator_attack(&g, &sep).unwrap();
        assert_eq!(plan.budget_used, 6);
        assert!(plan.degenerate);
        assert!(blinds(&g, &plan));
    }

    #[test]
    fn attack_budget_never_beats_the_separator_objective() {
        for seed in 0..20 {
            let g = generate::erdos_renyi(7, 0.4, 900 + seed).unwrap();
            let sep = min_sum(&g, EXACT_CAP).unwrap();
            let plan = separator_attack(&g, &sep).unwrap();
            assert!(plan.budget <= sep.objective);
            assert!(plan.budget_used <= plan.budget);
            assert!(blinds(&g, &plan));
            assert!(structurally_certified(&g, &plan));
        }
    }

    #[test]
    fn unbalanced_components_certify_above_the_spend() {
        // splitting a path at one end leaves a lone leaf and a longer tail:
        // the cheap component is bought, the big one sets the budget
        let g = generate::path(4).unwrap();
        let sep = SeparatorResult {
            separator: NodeSet::from_ids(4, &[1]).unwrap(),
            k: 2,
            g: 1,
            objective: 3,
            profile: vec![2, 1],
        };
        let plan = separator_attack(&g, &sep).unwrap();
        assert!(plan.budget_used < plan.budget);
        assert!(blinds(&g, &plan));
        let sc = plan.realize(&g).unwrap();
        assert!(!impossible_to_find(&g, sc.reports(), plan.budget_used, 1, 16).unwrap());
    }

    #[test]
    fn rejects_foreign_separators() {
        let g = generate::star(5).unwrap();
        let mut sep = min_sum(&g, EXACT_CAP).unwrap();
        sep.separator = NodeSet::from_ids(5, &[4]).unwrap();
        assert!(matches!(separator_attack(&g, &sep), Err(Error::Usage(_))));
    }

    #[test]
    fn g_remainder_attack_leaves_the_giant_identifiable() {
        let g = generate::disjoint_cliques(&[3, 3, 4]).unwrap();
        let sep = min_sum_g(&g, 5, EXACT_CAP).unwrap();
        let plan = g_remainder_attack(&g, &sep, 5).unwrap();
        assert_eq!(plan.budget, 3);
        assert!(blinds(&g, &plan));
        assert!(structurally_certified(&g, &plan));

        let one = min_sum(&g, EXACT_CAP).unwrap();
        let base = separator_attack(&g, &one).unwrap();
        let same = g_remainder_attack(&g, &one, 1).unwrap();
        assert_eq!(base.bad, same.bad);
        assert_eq!(base.budget, same.budget);
    }

    #[test]
    fn directed_attack_matches_the_proof_shape() {
        let d = DiGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sep = reach_min_sum(&d, EXACT_CAP).unwrap();
        let plan = directed_attack(&d, &sep).unwrap();
        assert!(blinds(&d, &plan));
        assert!(structurally_certified_directed(&d, &plan));

        let arcless = DiGraph::new(3, &[]).unwrap();
        let sep = reach_min_sum(&arcless, EXACT_CAP).unwrap();
        let plan = directed_attack(&arcless, &sep).unwrap();
        assert_eq!(plan.budget_used, 1);
        assert!(blinds(&arcless, &plan));
    }

    #[test]
    fn symmetrized_attacks_agree_on_the_certified_budget() {
        for seed in 0..10 {
            let g = generate::erdos_renyi(6, 0.5, 1000 + seed).unwrap();
            let und = separator_attack(&g, &min_sum(&g, EXACT_CAP).unwrap()).unwrap();
            let d = g.symmetrize();
            let dir = directed_attack(&d, &reach_min_sum(&d, EXACT_CAP).unwrap()).unwrap();
            assert_eq!(und.budget, dir.budget, "seed {seed}");
            assert!(blinds(&d, &dir));
        }
    }

    #[test]
    fn approx_attack_handles_the_two_node_graph() {
        let g = generate::complete(2).unwrap();
        let plan = approx_attack(&g, 2, 7).unwrap();
        assert_eq!(plan.budget, 1);
        assert!(plan.degenerate);
        assert!(blinds(&g, &plan));
        assert!(structurally_certified(&g, &plan));
    }

    #[test]
    fn approx_attack_stays_cheap_on_stars() {
        let g = generate::star(9).unwrap();
        let plan = approx_attack(&g, 2, 7).unwrap();
        assert_eq!(plan.budget, 2);
        assert!(blinds(&g, &plan));
    }

    #[test]
    fn approx_attack_within_log_factor_of_optimal() {
        for seed in 0..15 {
            let g = generate::erdos_renyi(7, 0.5, 1100 + seed).unwrap();
            let plan = approx_attack(&g, 2, seed).unwrap();
            let (m, _) = exact_m(&g, ORACLE_CAP).unwrap();
            let log = usize::BITS - (7usize - 1).leading_zeros();
            assert!(plan.budget <= log as usize * m, "seed {seed}");
            assert!(blinds(&g, &plan));
            assert!(structurally_certified(&g, &plan));
        }
    }

    #[test]
    fn clique_append_attack_is_blind_past_the_clique() {
        let g = generate::path(4).unwrap();
        let (gp, plan) = clique_append_attack(&g, Ratio::new(1, 2)).unwrap();
        assert_eq!(plan.target_g, 5);
        assert_eq!(gp.node_count(), 8);
        let inner = separator_attack(&g, &min_sum(&g, EXACT_CAP).unwrap()).unwrap();
        assert_eq!(plan.budget_used, inner.budget_used);
        assert!(blinds(&gp, &plan));
        assert!(structurally_certified(&gp, &plan));
        // the clique itself stays identifiable
        let sc = plan.realize(&gp).unwrap();
        assert!(!impossible_to_find(&gp, sc.reports(), plan.budget, 4, 16).unwrap());
    }

    #[test]
    fn detection_cannot_certify_against_a_certified_plan() {
        for seed in 0..15 {
            let g = generate::erdos_renyi(7, 0.45, 1200 + seed).unwrap();
            let plan = separator_attack(&g, &min_sum(&g, EXACT_CAP).unwrap()).unwrap();
            let sc = plan.realize(&g).unwrap();
            let outcome = detect_one_undirected(&g, sc.reports());
            assert!(!certify(&outcome, plan.budget), "seed {seed}");
        }
    }

    #[test]
    fn tampered_plans_fail_the_structural_check() {
        let g = generate::star(5).unwrap();
        let plan = separator_attack(&g, &min_sum(&g, EXACT_CAP).unwrap()).unwrap();
        let mut lying = plan.clone();
        for c in &mut lying.claims {
            if c.auditor != 0 {
                c.verdict = Verdict::Good;
            }
        }
        assert!(!structurally_certified(&g, &lying));
        let mut short = plan.clone();
        short.budget = 1;
        assert!(!structurally_certified(&g, &short));
        let mut greedy = plan;
        greedy.budget_used = 1;
        assert!(!structurally_certified(&g, &greedy));
    }
}
