//! Command line front end over the library.
//!
//! One subcommand per workflow: `detect` runs the report detectors,
//! `attack` builds blinding plans, `oracle` computes critical budgets,
//! `separator` solves the vertex separation problems, `reduce` emits
//! gadget graphs and `bench` measures detection throughput. Every run
//! produces a [`RunReport`]; `--json` prints it verbatim, the default
//! renders the same fields as `key: value` lines.
//!
//! Reports are deterministic for a fixed input file and `--seed`, except
//! for the timing fields. Process exit codes: 0 on success, 2 for usage
//! errors, 3 for unreadable or malformed inputs, 4 when an input exceeds
//! an exact solver's cap.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::adversary::{self, AttackPlan, Construction};
use crate::detection;
use crate::error::{Error, Result};
use crate::graph::{DiGraph, Graph, Network, NodeId, NodeSet};
use crate::oracle::{self, CompatibleFamily, ORACLE_CAP, ORACLE_CAP_DIRECTED};
use crate::reductions::{self, AuxRole};
use crate::scenario::{self, truthful_fill, LoadedScenario, ReportMatrix, ENUM_CAP};
use crate::separators::{self, SeparatorResult, EXACT_CAP};

/// Seed used when `--seed` is not given; echoed in every report.
pub const DEFAULT_SEED: u64 = 17;

/// Schema tag stamped on every report.
pub const REPORT_SCHEMA: &str = "auditnet.report/1";

/// Longest id list echoed verbatim before truncation kicks in.
const LIST_CAP: usize = 10_000;

#[derive(Parser, Debug)]
#[command(name = "auditnet", version, about = "Corruption detection games on audit networks")]
pub struct Cli {
    /// Print the run report as JSON instead of key: value lines.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Override the node cap of exact solvers and checkers.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Declare truthful nodes from a graph (all-truthful reports) or a
    /// scenario file.
    Detect {
        /// Graph text or scenario JSON file.
        input: PathBuf,
        /// Detector; inferred from the input when omitted.
        #[arg(long, value_enum)]
        mode: Option<DetectMode>,
        /// Number of truthful nodes to recover (mode `many`).
        #[arg(long)]
        goal: Option<usize>,
        /// Corruption budget for certification; defaults to the scenario's.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Build a blinding attack plan and optionally write it as a scenario.
    Attack {
        /// Graph text file.
        input: PathBuf,
        #[arg(long, value_enum)]
        strategy: Strategy,
        /// Blind the search for this many nodes (strategy g-remainder).
        #[arg(long, default_value_t = 1)]
        goal: usize,
        /// Appended-clique density in [1/2, 1), as a fraction like 2/3
        /// (strategy clique-append).
        #[arg(long, default_value = "1/2")]
        delta: String,
        /// Local search effort of the heuristic route (strategy approx).
        #[arg(long, default_value_t = 32)]
        effort: usize,
        /// Write the realized scenario JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the critical corruption budget and a witnessing family.
    Oracle {
        /// Graph text file.
        input: PathBuf,
        /// Budget for blinding the search for this many nodes instead of one.
        #[arg(long, default_value_t = 1)]
        goal: usize,
    },
    /// Solve the vertex separation problems behind the budget bounds.
    Separator {
        /// Graph text file.
        input: PathBuf,
        /// Residual component bound; sweeps all k for the best sum when
        /// omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Leave up to goal-1 nodes outside the component bound.
        #[arg(long, default_value_t = 1)]
        goal: usize,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Local search effort (method heuristic).
        #[arg(long, default_value_t = 32)]
        effort: usize,
    },
    /// Emit a gadget graph built from the input graph.
    Reduce {
        /// Graph text file.
        input: PathBuf,
        #[arg(long, value_enum)]
        gadget: Gadget,
        /// Appended-clique density in [1/2, 1), as a fraction
        /// (gadget clique-append).
        #[arg(long, default_value = "1/2")]
        delta: String,
        /// Clique size in the disjoint layer (gadget np-gadget).
        #[arg(long)]
        m: Option<usize>,
        /// Decision bound; must exceed the input's node count
        /// (gadget np-gadget).
        #[arg(long)]
        n: Option<usize>,
        /// Pendant cliques glued to each input node (gadget np-gadget).
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Write the gadget graph text here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the one-node detector across growing random graphs.
    Bench {
        /// Edge-count targets.
        #[arg(long, value_delimiter = ',', default_values_t = vec![10_000usize, 31_623, 100_000, 316_228, 1_000_000])]
        sizes: Vec<usize>,
        /// Timing repetitions per size; the best run counts.
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectMode {
    /// One truthful node on an undirected graph.
    One,
    /// One truthful node on a directed graph.
    Directed,
    /// At least `--goal` truthful nodes on an undirected graph.
    Many,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Exact minimal separator-plus-component corruption.
    Separator,
    /// Exact reach-separator corruption on a directed graph.
    Directed,
    /// Separator corruption that also survives a search for `--goal` nodes.
    GRemainder,
    /// Heuristic separator with a split-brain fallback.
    Approx,
    /// Appended-clique construction with the exact inner separator.
    CliqueAppend,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Heuristic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    /// Bipartite vertex-copy/edge-vertex auxiliary graph.
    SseAux,
    /// Disjoint clique sized by the density parameter.
    CliqueAppend,
    /// Clique layer plus pendant cliques for the decision instance.
    NpGadget,
}

/// Everything a run prints, in one serializable record.
#[derive(Serialize, Debug)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub output: Value,
    pub elapsed_ms: f64,
}

#[derive(Serialize, Debug)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Parses `argv`, runs the command and prints the report. Returns the
/// process exit code.
pub fn main_entry(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let json = cli.json;
    match run(cli, argv.to_vec()) {
        Ok(report) => {
            print_report(&report, json);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command. `command` is echoed into the report.
pub fn run(cli: Cli, command: Vec<String>) -> Result<RunReport> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::usage("--threads wants at least 1"));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let started = Instant::now();
    let mut inputs = Vec::new();
    let output = dispatch(&cli, &mut inputs)?;
    Ok(RunReport {
        schema: REPORT_SCHEMA,
        command,
        seed: cli.seed,
        inputs,
        output,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn print_report(report: &RunReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports always serialize"));
        return;
    }
    println!("schema: {}", report.schema);
    println!("command: {}", report.command.join(" "));
    println!("seed: {}", report.seed);
    for d in &report.inputs {
        println!("input: {} sha256={}", d.path, d.sha256);
    }
    render("", &report.output);
    println!("elapsed_ms: {:.3}", report.elapsed_ms);
}

fn render(prefix: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render(&key, v);
            }
        }
        other => println!("{prefix}: {other}"),
    }
}

fn dispatch(cli: &Cli, inputs: &mut Vec<InputDigest>) -> Result<Value> {
    match &cli.command {
        Command::Detect { input, mode, goal, budget } => {
            let loaded = load_input(input, inputs)?;
            cmd_detect(loaded, *mode, *goal, *budget, cli.cap)
        }
        Command::Attack { input, strategy, goal, delta, effort, out } => {
            let net = want_network(load_input(input, inputs)?, "attack")?;
            cmd_attack(net, *strategy, *goal, delta, *effort, out.as_deref(), cli.cap, cli.seed)
        }
        Command::Oracle { input, goal } => {
            let net = want_network(load_input(input, inputs)?, "oracle")?;
            cmd_oracle(net, *goal, cli.cap)
        }
        Command::Separator { input, k, goal, method, effort } => {
            let net = want_network(load_input(input, inputs)?, "separator")?;
            cmd_separator(net, *k, *goal, *method, *effort, cli.cap, cli.seed)
        }
        Command::Reduce { input, gadget, delta, m, n, copies, out } => {
            let net = want_network(load_input(input, inputs)?, "reduce")?;
            cmd_reduce(net, *gadget, delta, *m, *n, *copies, out.as_deref())
        }
        Command::Bench { sizes, repeats } => cmd_bench(sizes, *repeats, cli.seed),
    }
}

enum LoadedInput {
    Net(Network),
    Scen(LoadedScenario),
}

fn load_input(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<LoadedInput> {
    let text = fs::read_to_string(path)?;
    inputs.push(InputDigest { path: path.display().to_string(), sha256: sha256_hex(&text) });
    if text.trim_start().starts_with('{') {
        Ok(LoadedInput::Scen(scenario::load_json(&text)?))
    } else {
        Ok(LoadedInput::Net(Network::parse(&text)?))
    }
}

fn want_network(input: LoadedInput, what: &str) -> Result<Network> {
    match input {
        LoadedInput::Net(net) => Ok(net),
        LoadedInput::Scen(_) => {
            Err(Error::usage(format!("{what} wants a graph file, not a scenario")))
        }
    }
}

fn want_undirected(net: Network, what: &str) -> Result<Graph> {
    match net {
        Network::Undirected(g) => Ok(g),
        Network::Directed(_) => {
            Err(Error::usage(format!("{what} wants an undirected graph")))
        }
    }
}

fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    text.parse::<Ratio<u64>>()
        .map_err(|e| Error::usage(format!("bad fraction `{text}`: {e}")))
}

fn capped_ids(ids: &[NodeId]) -> Value {
    json!(ids[..ids.len().min(LIST_CAP)])
}

// ---------------------------------------------------------------- detect

fn cmd_detect(
    input: LoadedInput,
    mode: Option<DetectMode>,
    goal: Option<usize>,
    budget: Option<usize>,
    cap: Option<usize>,
) -> Result<Value> {
    enum Prepared {
        U(Graph, ReportMatrix, Option<NodeSet>, Option<usize>),
        D(DiGraph, ReportMatrix, Option<NodeSet>, Option<usize>),
    }

    let prepared = match input {
        LoadedInput::Net(Network::Undirected(g)) => {
            let reports = truthful_fill(&g, &NodeSet::empty(g.universe()), &[])?;
            Prepared::U(g, reports, None, budget)
        }
        LoadedInput::Net(Network::Directed(d)) => {
            let reports = truthful_fill(&d, &NodeSet::empty(d.universe()), &[])?;
            Prepared::D(d, reports, None, budget)
        }
        LoadedInput::Scen(LoadedScenario::Undirected(s)) => {
            let b = budget.or(Some(s.budget()));
            Prepared::U(s.graph().clone(), s.reports().clone(), Some(s.bad().clone()), b)
        }
        LoadedInput::Scen(LoadedScenario::Directed(s)) => {
            let b = budget.or(Some(s.budget()));
            Prepared::D(s.graph().clone(), s.reports().clone(), Some(s.bad().clone()), b)
        }
    };

    let directed_input = matches!(prepared, Prepared::D(..));
    let mode = match mode {
        Some(m) => m,
        None => match (directed_input, goal) {
            (false, None) => DetectMode::One,
            (false, Some(_)) => DetectMode::Many,
            (true, None) => DetectMode::Directed,
            (true, Some(_)) => {
                return Err(Error::usage(
                    "the directed detector recovers one node; drop --goal",
                ))
            }
        },
    };
    match (mode, goal) {
        (DetectMode::One, Some(_)) => {
            return Err(Error::usage("mode one ignores --goal; use --mode many"))
        }
        (DetectMode::Directed, Some(_)) => {
            return Err(Error::usage(
                "the directed detector recovers one node; drop --goal",
            ))
        }
        (DetectMode::Many, None) => return Err(Error::usage("mode many wants --goal")),
        _ => {}
    }

    let check_cap = cap.unwrap_or(ENUM_CAP);
    let (outcome, bad, budget, blinded) = match (mode, prepared) {
        (DetectMode::One, Prepared::U(g, reports, bad, budget)) => {
            let blinded = blinded_check(&g, &reports, budget, 1, check_cap);
            (detection::detect_one_undirected(&g, &reports), bad, budget, blinded)
        }
        (DetectMode::Many, Prepared::U(g, reports, bad, budget)) => {
            let goal = goal.expect("validated above");
            let blinded = blinded_check(&g, &reports, budget, goal, check_cap);
            (detection::detect_many(&g, &reports, goal)?, bad, budget, blinded)
        }
        (DetectMode::Directed, Prepared::D(d, reports, bad, budget)) => {
            let blinded = blinded_check(&d, &reports, budget, 1, check_cap);
            (detection::detect_one_directed(&d, &reports), bad, budget, blinded)
        }
        (DetectMode::Directed, Prepared::U(..)) => {
            return Err(Error::usage("mode directed wants a directed graph"))
        }
        (_, Prepared::D(..)) => {
            return Err(Error::usage("this mode wants an undirected graph"))
        }
    };

    let certified = budget.map(|b| detection::certify(&outcome, b));
    let declared = outcome.declared_good.to_vec();
    Ok(json!({
        "mode": mode_name(mode),
        "declared_good": capped_ids(&declared),
        "declared_count": declared.len(),
        "declared_truncated": declared.len() > LIST_CAP,
        "rounds_removed": outcome.rounds_removed,
        "goal": outcome.goal,
        "support": outcome.support,
        "budget": budget,
        "certified": certified,
        "blinded": blinded,
        "known_bad": bad.as_ref().map(|b| b.to_vec()),
        "declared_all_truthful": bad.as_ref().map(|b| outcome.declared_good.is_disjoint(b)),
    }))
}

/// Whether the reports leave no node identifiable, when the graph is small
/// enough to enumerate configurations and a budget is known.
fn blinded_check<G: crate::graph::AuditGraph>(
    graph: &G,
    reports: &ReportMatrix,
    budget: Option<usize>,
    goal: usize,
    cap: usize,
) -> Option<bool> {
    let budget = budget?;
    scenario::impossible_to_find(graph, reports, budget, goal, cap).ok()
}

fn mode_name(mode: DetectMode) -> &'static str {
    match mode {
        DetectMode::One => "one",
        DetectMode::Directed => "directed",
        DetectMode::Many => "many",
    }
}

// ---------------------------------------------------------------- attack

fn cmd_attack(
    net: Network,
    strategy: Strategy,
    goal: usize,
    delta: &str,
    effort: usize,
    out: Option<&Path>,
    cap: Option<usize>,
    seed: u64,
) -> Result<Value> {
    let solve_cap = cap.unwrap_or(EXACT_CAP);
    let check_cap = cap.unwrap_or(ENUM_CAP);

    if strategy == Strategy::Directed {
        let d = match net {
            Network::Directed(d) => d,
            Network::Undirected(_) => {
                return Err(Error::usage("strategy directed wants a directed graph"))
            }
        };
        let sep = separators::reach_min_sum(&d, solve_cap)?;
        let plan = adversary::directed_attack(&d, &sep)?;
        let scenario = plan.realize(&d)?;
        if let Some(path) = out {
            fs::write(path, scenario.save_json())?;
        }
        let certificate = if d.node_count() <= check_cap {
            json!({
                "kind": "exhaustive",
                "blinding": scenario::impossible_to_find(
                    &d, scenario.reports(), plan.budget, plan.target_g, check_cap,
                )?,
            })
        } else {
            json!({
                "kind": "structural",
                "blinding": adversary::structurally_certified_directed(&d, &plan),
            })
        };
        return Ok(plan_value(&plan, certificate, out, Value::Null));
    }

    let g = want_undirected(net, "this strategy")?;
    let (graph, plan, extra) = match strategy {
        Strategy::Separator => {
            let sep = separators::min_sum(&g, solve_cap)?;
            let plan = adversary::separator_attack(&g, &sep)?;
            (g, plan, Value::Null)
        }
        Strategy::GRemainder => {
            let sep = separators::min_sum_g(&g, goal, solve_cap)?;
            let plan = adversary::g_remainder_attack(&g, &sep, goal)?;
            (g, plan, Value::Null)
        }
        Strategy::Approx => {
            let plan = adversary::approx_attack(&g, effort, seed)?;
            (g, plan, Value::Null)
        }
        Strategy::CliqueAppend => {
            let delta = parse_ratio(delta)?;
            let (appended, plan) = adversary::clique_append_attack(&g, delta)?;
            let extra = json!({
                "appended": appended.node_count() - g.node_count(),
                "gadget_nodes": appended.node_count(),
            });
            (appended, plan, extra)
        }
        Strategy::Directed => unreachable!("handled above"),
    };

    let scenario = plan.realize(&graph)?;
    if let Some(path) = out {
        fs::write(path, scenario.save_json())?;
    }
    let certificate = if graph.node_count() <= check_cap {
        json!({
            "kind": "exhaustive",
            "blinding": scenario::impossible_to_find(
                &graph, scenario.reports(), plan.budget, plan.target_g, check_cap,
            )?,
        })
    } else {
        json!({
            "kind": "structural",
            "blinding": adversary::structurally_certified(&graph, &plan),
        })
    };
    Ok(plan_value(&plan, certificate, out, extra))
}

fn plan_value(plan: &AttackPlan, certificate: Value, out: Option<&Path>, extra: Value) -> Value {
    let mut value = json!({
        "construction": construction_name(&plan.construction),
        "bad": plan.bad.to_vec(),
        "budget_used": plan.budget_used,
        "budget": plan.budget,
        "target_goal": plan.target_g,
        "separator": plan.separator.to_vec(),
        "degenerate": plan.degenerate,
        "claim_count": plan.claims.len(),
        "certificate": certificate,
        "scenario_out": out.map(|p| p.display().to_string()),
    });
    if let (Value::Object(base), Value::Object(more)) = (&mut value, extra) {
        base.extend(more);
    }
    value
}

fn construction_name(construction: &Construction) -> &'static str {
    match construction {
        Construction::SeparatorAttack => "separator",
        Construction::DirectedSeparatorAttack => "directed-separator",
        Construction::GRemainderAttack => "g-remainder",
        Construction::ApproxAttack => "approx",
        Construction::CliqueAppendAttack => "clique-append",
    }
}

// ---------------------------------------------------------------- oracle

fn cmd_oracle(net: Network, goal: usize, cap: Option<usize>) -> Result<Value> {
    let (m, goal, family) = match net {
        Network::Undirected(g) => {
            let cap = cap.unwrap_or(ORACLE_CAP);
            let (m, family) = if goal == 1 {
                oracle::exact_m(&g, cap)?
            } else {
                oracle::exact_m_g(&g, goal, cap)?
            };
            (m, goal, family)
        }
        Network::Directed(d) => {
            if goal != 1 {
                return Err(Error::usage("the directed oracle supports --goal 1 only"));
            }
            let cap = cap.unwrap_or(ORACLE_CAP_DIRECTED);
            let (m, family) = oracle::exact_m_directed(&d, cap)?;
            (m, 1, family)
        }
    };
    Ok(json!({
        "m": m,
        "goal": goal,
        "family": family_value(&family),
    }))
}

fn family_value(family: &CompatibleFamily) -> Value {
    json!({
        "budget": family.budget,
        "anchor": family.anchor,
        "members": family.members.iter().map(|m| m.to_vec()).collect::<Vec<_>>(),
    })
}

// ------------------------------------------------------------- separator

fn cmd_separator(
    net: Network,
    k: Option<usize>,
    goal: usize,
    method: Method,
    effort: usize,
    cap: Option<usize>,
    seed: u64,
) -> Result<Value> {
    let solve_cap = cap.unwrap_or(EXACT_CAP);
    let result = match (&net, method) {
        (Network::Undirected(g), Method::Exact) => match (k, goal) {
            (Some(k), 1) => separators::exact_separator(g, k, solve_cap)?,
            (Some(k), goal) => separators::exact_g_remainder(g, k, goal, solve_cap)?,
            (None, 1) => separators::min_sum(g, solve_cap)?,
            (None, goal) => separators::min_sum_g(g, goal, solve_cap)?,
        },
        (Network::Undirected(g), Method::Heuristic) => {
            if goal != 1 {
                return Err(Error::usage("the heuristic supports --goal 1 only"));
            }
            match k {
                Some(k) => separators::heuristic_separator(g, k, effort, seed),
                None => separators::approx_min_sum(g, effort, seed),
            }
        }
        (Network::Directed(d), Method::Exact) => {
            if goal != 1 {
                return Err(Error::usage("reach separators support --goal 1 only"));
            }
            match k {
                Some(k) => separators::exact_reach_separator(d, k, solve_cap)?,
                None => separators::reach_min_sum(d, solve_cap)?,
            }
        }
        (Network::Directed(_), Method::Heuristic) => {
            return Err(Error::usage("no heuristic for directed graphs; use --method exact"))
        }
    };
    Ok(separator_value(&result, method))
}

fn separator_value(result: &SeparatorResult, method: Method) -> Value {
    json!({
        "method": match method { Method::Exact => "exact", Method::Heuristic => "heuristic" },
        "separator": result.separator.to_vec(),
        "separator_size": result.separator.len(),
        "k": result.k,
        "goal": result.g,
        "objective": result.objective,
        "profile": result.profile,
    })
}

// ---------------------------------------------------------------- reduce

fn cmd_reduce(
    net: Network,
    gadget: Gadget,
    delta: &str,
    m: Option<usize>,
    n: Option<usize>,
    copies: usize,
    out: Option<&Path>,
) -> Result<Value> {
    let g = want_undirected(net, "reduce")?;
    let (built, extra) = match gadget {
        Gadget::SseAux => {
            let aux = reductions::sse_auxiliary(&g)?;
            let roles: Vec<String> = aux.roles.iter().map(role_label).collect();
            (aux.graph, json!({ "gadget": "sse-aux", "r": aux.r, "roles": roles }))
        }
        Gadget::CliqueAppend => {
            let delta = parse_ratio(delta)?;
            let (built, appended) = reductions::clique_append(&g, delta)?;
            (built, json!({
                "gadget": "clique-append",
                "appended": appended,
                "target_goal": appended + 1,
            }))
        }
        Gadget::NpGadget => {
            let m = m.ok_or_else(|| Error::usage("gadget np-gadget wants --m"))?;
            let n = n.ok_or_else(|| Error::usage("gadget np-gadget wants --n"))?;
            let built = reductions::np_gadget(&g, m, n, copies)?;
            (built, json!({ "gadget": "np-gadget", "m": m, "n": n, "copies": copies }))
        }
    };
    let text = built.to_text();
    if let Some(path) = out {
        fs::write(path, &text)?;
    }
    let mut value = json!({
        "nodes": built.node_count(),
        "edges": built.edge_count(),
        "out": out.map(|p| p.display().to_string()),
        "graph_text": if out.is_none() { Some(text) } else { None },
    });
    if let (Value::Object(base), Value::Object(more)) = (&mut value, extra) {
        base.extend(more);
    }
    Ok(value)
}

fn role_label(role: &AuxRole) -> String {
    match role {
        AuxRole::VertexCopy(v, i) => format!("v{v}#{i}"),
        AuxRole::EdgeVertex(a, b) => format!("e{a}-{b}"),
    }
}

// ----------------------------------------------------------------- bench

/// One timed size in a detection benchmark.
#[derive(Serialize, Clone, Debug)]
pub struct BenchPoint {
    pub target_edges: usize,
    pub nodes: usize,
    pub edges: usize,
    pub millis: f64,
    pub declared: usize,
}

/// Times the one-node detector on random graphs of roughly the requested
/// edge counts (average degree 10, all reports truthful). Graph building
/// and report filling are excluded from the timing; the best of `repeats`
/// runs counts.
pub fn bench_detection(sizes: &[usize], repeats: usize, seed: u64) -> Result<Vec<BenchPoint>> {
    let repeats = repeats.max(1);
    sizes
        .iter()
        .enumerate()
        .map(|(i, &target)| {
            let graph = bench_graph(target, seed.wrapping_add(i as u64));
            let reports = truthful_fill(&graph, &NodeSet::empty(graph.universe()), &[])?;
            let mut best = f64::INFINITY;
            let mut declared = 0;
            for _ in 0..repeats {
                let t0 = Instant::now();
                let outcome = detection::detect_one_undirected(&graph, &reports);
                best = best.min(t0.elapsed().as_secs_f64() * 1e3);
                declared = outcome.declared_good.len();
            }
            Ok(BenchPoint {
                target_edges: target,
                nodes: graph.node_count(),
                edges: graph.edge_count(),
                millis: best,
                declared,
            })
        })
        .collect()
}

/// Least-squares slope of log time against log edge count, i.e. the
/// empirical scaling exponent of the points. `None` below two usable
/// points.
pub fn scaling_exponent(points: &[BenchPoint]) -> Option<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.edges > 0 && p.millis > 0.0)
        .map(|p| ((p.edges as f64).ln(), p.millis.ln()))
        .collect();
    if data.len() < 2 {
        return None;
    }
    let n = data.len() as f64;
    let sx: f64 = data.iter().map(|d| d.0).sum();
    let sy: f64 = data.iter().map(|d| d.1).sum();
    let sxx: f64 = data.iter().map(|d| d.0 * d.0).sum();
    let sxy: f64 = data.iter().map(|d| d.0 * d.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

fn bench_graph(edges: usize, seed: u64) -> Graph {
    let n = (edges / 5).max(16);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(edges * 2);
    let mut pairs = Vec::with_capacity(edges);
    while pairs.len() < edges {
        let a = rng.gen_range(0..n as NodeId);
        let b = rng.gen_range(0..n as NodeId);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            pairs.push(key);
        }
    }
    Graph::new(n, &pairs).expect("sampled pairs are in range and deduplicated")
}

fn cmd_bench(sizes: &[usize], repeats: usize, seed: u64) -> Result<Value> {
    let points = bench_detection(sizes, repeats, seed)?;
    Ok(json!({
        "repeats": repeats.max(1),
        "points": points,
        "exponent": scaling_exponent(&points),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn run_argv(args: &[&str]) -> Result<RunReport> {
        let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let cli = Cli::try_parse_from(&argv).expect("argv parses");
        run(cli, argv)
    }

    fn graph_file(dir: &tempfile::TempDir, name: &str, graph: &Graph) -> String {
        let path = dir.path().join(name);
        fs::write(&path, graph.to_text()).unwrap();
        path.display().to_string()
    }

    #[test]
    fn detect_on_a_plain_graph_declares_everyone_reachable() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "star.g", &generate::star(6).unwrap());
        let report = run_argv(&["auditnet", "detect", &path]).unwrap();
        assert_eq!(report.seed, DEFAULT_SEED);
        assert_eq!(report.inputs.len(), 1);
        assert_eq!(report.inputs[0].sha256.len(), 64);
        assert_eq!(report.output["mode"], "one");
        assert_eq!(report.output["declared_count"], 6);
        assert_eq!(report.output["rounds_removed"], 0);
        assert_eq!(report.output["certified"], Value::Null);
    }

    #[test]
    fn detect_infers_the_directed_mode_from_the_input() {
        let dir = tempfile::tempdir().unwrap();
        let d = generate::random_digraph(5, 0.4, 11).unwrap();
        let path = dir.path().join("d.g");
        fs::write(&path, d.to_text()).unwrap();
        let report = run_argv(&["auditnet", "detect", path.to_str().unwrap()]).unwrap();
        assert_eq!(report.output["mode"], "directed");
    }

    #[test]
    fn detect_mode_many_requires_a_goal() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "c.g", &generate::cycle(5).unwrap());
        let err = run_argv(&["auditnet", "detect", &path, "--mode", "many"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn attack_then_detect_round_trips_through_a_scenario_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "star.g", &generate::star(6).unwrap());
        let scen = dir.path().join("scen.json");
        let report = run_argv(&[
            "auditnet", "attack", &path,
            "--strategy", "separator",
            "--out", scen.to_str().unwrap(),
        ])
        .unwrap();
        assert_eq!(report.output["certificate"]["kind"], "exhaustive");
        assert_eq!(report.output["certificate"]["blinding"], true);

        let detect = run_argv(&["auditnet", "detect", scen.to_str().unwrap()]).unwrap();
        assert_eq!(detect.output["certified"], false);
        assert_eq!(detect.output["blinded"], true);
        assert_eq!(detect.output["budget"], report.output["budget"]);
    }

    #[test]
    fn approx_attacks_are_reproducible_for_a_fixed_seed() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "er.g", &generate::erdos_renyi(9, 0.4, 3).unwrap());
        let args = ["auditnet", "attack", &path, "--strategy", "approx", "--seed", "5"];
        let a = run_argv(&args).unwrap();
        let b = run_argv(&args).unwrap();
        assert_eq!(a.output, b.output);
        assert_eq!(a.seed, 5);
    }

    #[test]
    fn oracle_reports_the_critical_budget_with_its_family() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "star.g", &generate::star(6).unwrap());
        let report = run_argv(&["auditnet", "oracle", &path]).unwrap();
        assert_eq!(report.output["m"], 2);
        assert!(report.output["family"]["members"].as_array().unwrap().len() >= 2);
    }

    #[test]
    fn separator_sweep_matches_the_complete_graph_formula() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "k4.g", &generate::complete(4).unwrap());
        let report = run_argv(&["auditnet", "separator", &path]).unwrap();
        assert_eq!(report.output["objective"], 4);
    }

    #[test]
    fn reduce_writes_a_parseable_gadget_graph() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "p3.g", &generate::path(3).unwrap());
        let out = dir.path().join("gadget.g");
        let report = run_argv(&[
            "auditnet", "reduce", &path,
            "--gadget", "np-gadget",
            "--m", "2", "--n", "4",
            "--out", out.to_str().unwrap(),
        ])
        .unwrap();
        let text = fs::read_to_string(&out).unwrap();
        let reparsed = match Network::parse(&text).unwrap() {
            Network::Undirected(g) => g,
            Network::Directed(_) => panic!("gadget graphs are undirected"),
        };
        assert_eq!(report.output["nodes"], reparsed.node_count() as u64);
        assert_eq!(report.output["graph_text"], Value::Null);
    }

    #[test]
    fn reduce_inlines_the_graph_text_without_an_output_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "c4.g", &generate::cycle(4).unwrap());
        let report =
            run_argv(&["auditnet", "reduce", &path, "--gadget", "clique-append"]).unwrap();
        assert_eq!(report.output["appended"], 4);
        let inline = report.output["graph_text"].as_str().unwrap();
        assert!(Network::parse(inline).is_ok());
    }

    #[test]
    fn exit_codes_separate_usage_parse_and_capacity_errors() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.g");
        fs::write(&bad, "w 2 1\n0 1\n").unwrap();
        let argv = |args: &[&str]| args.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(main_entry(&argv(&["auditnet", "detect", bad.to_str().unwrap()])), 3);

        let missing = dir.path().join("nowhere.g");
        assert_eq!(main_entry(&argv(&["auditnet", "detect", missing.to_str().unwrap()])), 3);

        let path = graph_file(&dir, "p12.g", &generate::path(12).unwrap());
        assert_eq!(main_entry(&argv(&["auditnet", "oracle", &path, "--cap", "4"])), 4);

        let scen = dir.path().join("scen.json");
        let star = graph_file(&dir, "star.g", &generate::star(4).unwrap());
        run_argv(&["auditnet", "attack", &star, "--strategy", "separator", "--out",
            scen.to_str().unwrap()])
        .unwrap();
        assert_eq!(main_entry(&argv(&["auditnet", "oracle", scen.to_str().unwrap()])), 2);
    }

    #[test]
    fn help_exits_cleanly() {
        let argv = vec!["auditnet".to_string(), "--help".to_string()];
        assert_eq!(main_entry(&argv), 0);
    }

    #[test]
    fn bench_fits_an_exponent_and_handles_the_empty_graph() {
        let report = run_argv(&[
            "auditnet", "bench", "--sizes", "200,400,800", "--repeats", "1",
        ])
        .unwrap();
        let points = report.output["points"].as_array().unwrap();
        assert_eq!(points.len(), 3);
        assert!(report.output["exponent"].as_f64().is_some());

        let empty = bench_detection(&[0], 1, 7).unwrap();
        assert_eq!(empty[0].edges, 0);
        assert!(empty[0].millis < 50.0);
    }

    #[test]
    fn reports_render_in_both_output_styles() {
        let dir = tempfile::tempdir().unwrap();
        let path = graph_file(&dir, "k3.g", &generate::complete(3).unwrap());
        let report = run_argv(&["auditnet", "separator", &path, "--k", "1"]).unwrap();
        print_report(&report, true);
        print_report(&report, false);
        let value = serde_json::to_value(&report).unwrap();
        assert_eq!(value["schema"], REPORT_SCHEMA);
        assert_eq!(value["output"]["k"], 1);
    }
}
