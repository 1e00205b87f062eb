//! Report semantics and the definition-level identification check.
//!
//! A scenario fixes a graph, a set of corrupt nodes, a complete report
//! matrix, and the budget the central agency knows. Truthful nodes report
//! each audited neighbor's true identity; corrupt nodes report whatever the
//! adversary chose. The ground-truth question is then: which nodes are good
//! in *every* corrupt-set hypothesis consistent with the reports? That check
//! ([`guaranteed_good`]) enumerates all configurations up to the budget, so
//! it is capped and meant as the referee for the fast detectors, not as a
//! production path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AuditGraph, DiGraph, Graph, Network, NodeId, NodeSet};

/// A reported identity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Verdict {
    Good,
    Bad,
}

impl Verdict {
    pub fn as_letter(self) -> &'static str {
        match self {
            Verdict::Good => "G",
            Verdict::Bad => "B",
        }
    }

    pub fn from_letter(s: &str) -> Result<Verdict> {
        match s {
            "G" => Ok(Verdict::Good),
            "B" => Ok(Verdict::Bad),
            other => Err(Error::usage(format!("bad verdict `{other}`, want `G` or `B`"))),
        }
    }
}

/// One auditor's verdict on one audited node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Claim {
    pub auditor: NodeId,
    pub subject: NodeId,
    pub verdict: Verdict,
}

impl Claim {
    pub fn new(auditor: NodeId, subject: NodeId, verdict: Verdict) -> Claim {
        Claim { auditor, subject, verdict }
    }
}

/// Complete verdicts: exactly one per audit pair of the owning graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReportMatrix {
    // rows[u] is sorted by subject and mirrors the graph's audit list of u
    rows: Vec<Vec<(NodeId, Verdict)>>,
}

impl ReportMatrix {
    /// Verdict of `auditor` on `subject`; `None` when that pair is not
    /// audited.
    pub fn verdict(&self, auditor: NodeId, subject: NodeId) -> Option<Verdict> {
        let row = self.rows.get(auditor as usize)?;
        row.binary_search_by_key(&subject, |&(s, _)| s).ok().map(|i| row[i].1)
    }

    /// All claims, ascending by (auditor, subject).
    pub fn claims(&self) -> impl Iterator<Item = Claim> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, row)| {
            row.iter().map(move |&(v, verdict)| Claim::new(u as NodeId, v, verdict))
        })
    }

    pub fn claim_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }
}

/// Fills a complete report matrix: auditors outside `bad` report the truth
/// with respect to `bad`; auditors in `bad` use `adversary_claims`, with
/// unspecified claims defaulting to Bad.
pub fn truthful_fill<G: AuditGraph>(
    graph: &G,
    bad: &NodeSet,
    adversary_claims: &[Claim],
) -> Result<ReportMatrix> {
    let n = graph.universe();
    let mut chosen: Vec<Vec<(NodeId, Verdict)>> = vec![Vec::new(); n];
    for c in adversary_claims {
        if !bad.contains(c.auditor) {
            return Err(Error::usage(format!(
                "adversary claim from node {}, which is not corrupt",
                c.auditor
            )));
        }
        if !graph.audits(c.auditor).contains(&c.subject) {
            return Err(Error::usage(format!(
                "node {} does not audit node {}",
                c.auditor, c.subject
            )));
        }
        let row = &mut chosen[c.auditor as usize];
        if row.iter().any(|&(s, _)| s == c.subject) {
            return Err(Error::usage(format!(
                "duplicate claim for pair ({}, {})",
                c.auditor, c.subject
            )));
        }
        row.push((c.subject, c.verdict));
    }

    let mut rows: Vec<Vec<(NodeId, Verdict)>> = vec![Vec::new(); n];
    for u in graph.present().iter() {
        let row = &mut rows[u as usize];
        for &v in graph.audits(u) {
            let verdict = if bad.contains(u) {
                chosen[u as usize]
                    .iter()
                    .find(|&&(s, _)| s == v)
                    .map(|&(_, w)| w)
                    .unwrap_or(Verdict::Bad)
            } else if bad.contains(v) {
                Verdict::Bad
            } else {
                Verdict::Good
            };
            row.push((v, verdict));
        }
    }
    Ok(ReportMatrix { rows })
}

/// Is the hypothesis "exactly the nodes in `cfg_bad` are corrupt" an
/// explanation of the reports within the budget? True iff `|cfg_bad| ≤
/// budget` and every claim from an auditor outside `cfg_bad` is truthful
/// with respect to `cfg_bad`.
pub fn is_consistent<G: AuditGraph>(
    graph: &G,
    reports: &ReportMatrix,
    cfg_bad: &NodeSet,
    budget: usize,
) -> bool {
    if cfg_bad.len() > budget {
        return false;
    }
    for u in graph.present().iter() {
        if cfg_bad.contains(u) {
            continue;
        }
        for &(v, verdict) in &reports.rows[u as usize] {
            if (verdict == Verdict::Bad) != cfg_bad.contains(v) {
                return false;
            }
        }
    }
    true
}

/// Largest node count [`guaranteed_good`] will enumerate configurations for.
pub const ENUM_CAP: usize = 16;

/// Nodes that are good in every consistent configuration. Empty iff even
/// one truthful node cannot be identified from the reports.
///
/// Enumerates every corrupt-set hypothesis up to the budget, so the present
/// node count is capped (`cap`, see [`ENUM_CAP`]).
pub fn guaranteed_good<G: AuditGraph>(
    graph: &G,
    reports: &ReportMatrix,
    budget: usize,
    cap: usize,
) -> Result<NodeSet> {
    let ids: Vec<NodeId> = graph.present().to_vec();
    let pc = ids.len();
    if pc > cap.min(64) {
        return Err(Error::capacity(format!(
            "configuration enumeration over {pc} nodes exceeds the cap of {}",
            cap.min(64)
        )));
    }

    // flatten claims to compact indices for the mask sweep
    let idx_of = |v: NodeId| ids.binary_search(&v).ok();
    let mut claims: Vec<(u32, u32, bool)> = Vec::new();
    for c in reports.claims() {
        let (Some(a), Some(s)) = (idx_of(c.auditor), idx_of(c.subject)) else {
            continue;
        };
        claims.push((a as u32, s as u32, c.verdict == Verdict::Bad));
    }

    let full: u64 = if pc == 64 { u64::MAX } else { (1u64 << pc) - 1 };
    let mut blamed: u64 = 0;
    let b = budget.min(pc) as u32;
    'cfg: for cfg in 0..=full {
        if cfg.count_ones() > b {
            continue;
        }
        // a configuration inside the blamed union cannot change the answer
        if cfg & !blamed == 0 {
            continue;
        }
        for &(a, s, claims_bad) in &claims {
            if cfg >> a & 1 == 0 && (cfg >> s & 1 == 1) != claims_bad {
                continue 'cfg;
            }
        }
        blamed |= cfg;
        if blamed == full {
            break;
        }
    }

    let mut out = NodeSet::empty(graph.universe());
    for (i, &v) in ids.iter().enumerate() {
        if blamed >> i & 1 == 0 {
            out.insert(v);
        }
    }
    Ok(out)
}

/// True iff fewer than `g` nodes are guaranteed good — the reports leave the
/// agency unable to point at `g` certainly-truthful nodes.
pub fn impossible_to_find<G: AuditGraph>(
    graph: &G,
    reports: &ReportMatrix,
    budget: usize,
    g: usize,
    cap: usize,
) -> Result<bool> {
    Ok(guaranteed_good(graph, reports, budget, cap)?.len() < g)
}

/// All audit pairs whose auditor is corrupt, ascending. These are the slots
/// an adversary is free to fill.
pub fn adversary_slots<G: AuditGraph>(graph: &G, bad: &NodeSet) -> Vec<(NodeId, NodeId)> {
    bad.iter()
        .filter(|&u| graph.present().contains(u))
        .flat_map(|u| graph.audits(u).iter().map(move |&v| (u, v)))
        .collect()
}

/// Decodes one adversary strategy from a bit string over `slots`: bit set
/// means claim Good, clear means claim Bad.
pub fn claims_from_bits(slots: &[(NodeId, NodeId)], bits: u64) -> Vec<Claim> {
    assert!(slots.len() <= 64, "too many adversary slots for a u64 strategy");
    slots
        .iter()
        .enumerate()
        .map(|(i, &(a, s))| {
            Claim::new(a, s, if bits >> i & 1 == 1 { Verdict::Good } else { Verdict::Bad })
        })
        .collect()
}

/// A full game instance: the graph, who is actually corrupt, the reports
/// those nodes produced, and the budget the agency knows.
#[derive(Clone, Debug)]
pub struct Scenario<G: AuditGraph> {
    graph: G,
    bad: NodeSet,
    reports: ReportMatrix,
    budget: usize,
}

impl<G: AuditGraph> Scenario<G> {
    /// Builds the instance from the adversary's choices, filling all other
    /// reports truthfully.
    pub fn new(graph: G, bad: NodeSet, adversary_claims: &[Claim], budget: usize) -> Result<Self> {
        if bad.len() > budget {
            return Err(Error::usage(format!(
                "{} corrupt nodes exceed the budget of {budget}",
                bad.len()
            )));
        }
        let reports = truthful_fill(&graph, &bad, adversary_claims)?;
        Ok(Scenario { graph, bad, reports, budget })
    }

    pub fn graph(&self) -> &G {
        &self.graph
    }

    pub fn bad(&self) -> &NodeSet {
        &self.bad
    }

    pub fn reports(&self) -> &ReportMatrix {
        &self.reports
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// The truth is always one of the explanations.
    pub fn truth_is_consistent(&self) -> bool {
        is_consistent(&self.graph, &self.reports, &self.bad, self.budget)
    }

    pub fn guaranteed_good(&self, cap: usize) -> Result<NodeSet> {
        guaranteed_good(&self.graph, &self.reports, self.budget, cap)
    }
}

#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    graph: String,
    bad: Vec<NodeId>,
    claims: Vec<(NodeId, NodeId, String)>,
    budget: usize,
}

/// A scenario parsed from JSON, over whichever graph kind the file carried.
#[derive(Clone, Debug)]
pub enum LoadedScenario {
    Undirected(Scenario<Graph>),
    Directed(Scenario<DiGraph>),
}

/// Parses a scenario file: JSON with the graph inline in the graph text
/// format, the corrupt ids, the corrupt nodes' claims, and the budget.
/// Claims may only come from corrupt auditors; everything else is implied.
pub fn load_json(text: &str) -> Result<LoadedScenario> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    let claims = file
        .claims
        .iter()
        .map(|&(a, s, ref w)| Ok(Claim::new(a, s, Verdict::from_letter(w)?)))
        .collect::<Result<Vec<_>>>()?;
    match Network::parse(&file.graph)? {
        Network::Undirected(g) => {
            let bad = NodeSet::from_ids(g.universe(), &file.bad)?;
            Ok(LoadedScenario::Undirected(Scenario::new(g, bad, &claims, file.budget)?))
        }
        Network::Directed(d) => {
            let bad = NodeSet::from_ids(d.universe(), &file.bad)?;
            Ok(LoadedScenario::Directed(Scenario::new(d, bad, &claims, file.budget)?))
        }
    }
}

fn save_json_parts(
    graph_text: String,
    bad: &NodeSet,
    reports: &ReportMatrix,
    budget: usize,
) -> String {
    let claims = reports
        .claims()
        .filter(|c| bad.contains(c.auditor))
        .map(|c| (c.auditor, c.subject, c.verdict.as_letter().to_string()))
        .collect();
    let file = ScenarioFile { graph: graph_text, bad: bad.to_vec(), claims, budget };
    let mut out = serde_json::to_string_pretty(&file).expect("scenario serializes");
    out.push('\n');
    out
}

impl Scenario<Graph> {
    /// Canonical JSON form; only the corrupt auditors' claims are written.
    pub fn save_json(&self) -> String {
        save_json_parts(self.graph.to_text(), &self.bad, &self.reports, self.budget)
    }
}

impl Scenario<DiGraph> {
    /// Canonical JSON form; only the corrupt auditors' claims are written.
    pub fn save_json(&self) -> String {
        save_json_parts(self.graph.to_text(), &self.bad, &self.reports, self.budget)
    }
}
