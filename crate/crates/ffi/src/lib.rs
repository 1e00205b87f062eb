//! C bindings for the audit network toolkit.
//!
//! The generated `include/auditnet.h` declares everything here. Handles
//! are opaque pointers owned by this library; every allocation has a
//! matching `*_free`, and strings returned as `char*` are released with
//! [`anet_string_free`]. Fallible functions return a status code and
//! leave a message for [`anet_last_error`] on the calling thread:
//! 0 success, 2 usage error, 3 parse error, 4 capacity error, 1 internal
//! fault.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use auditnet::adversary::{self, AttackPlan};
use auditnet::detection;
use auditnet::oracle;
use auditnet::scenario::{self, LoadedScenario};
use auditnet::separators;
use auditnet::{DiGraph, Error, Graph, Network, Result};
use num_rational::Ratio;

pub const ANET_OK: c_int = 0;
pub const ANET_INTERNAL: c_int = 1;
pub const ANET_USAGE: c_int = 2;
pub const ANET_PARSE: c_int = 3;
pub const ANET_CAPACITY: c_int = 4;

pub const ANET_ATTACK_SEPARATOR: c_int = 0;
pub const ANET_ATTACK_DIRECTED: c_int = 1;
pub const ANET_ATTACK_G_REMAINDER: c_int = 2;
pub const ANET_ATTACK_APPROX: c_int = 3;
pub const ANET_ATTACK_CLIQUE_APPEND: c_int = 4;

/// Parsed audit network, undirected or directed.
pub struct AnetGraph(Network);

/// Corruption scenario: graph, corrupt set, claims and budget.
pub struct AnetScenario(LoadedScenario);

/// Attack plan together with the graph it targets. For the clique-append
/// strategy the target is the extended graph, not the input.
pub struct AnetAttack {
    network: Network,
    plan: AttackPlan,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let text = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error text contained a NUL byte").expect("static text"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn guard<F: FnOnce() -> Result<()>>(f: F) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            ANET_OK
        }
        Ok(Err(e)) => {
            let code = e.exit_code() as c_int;
            set_error(e.to_string());
            code
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(msg);
            ANET_INTERNAL
        }
    }
}

unsafe fn text_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str> {
    if ptr.is_null() {
        return Err(Error::usage(format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Error::usage(format!("{what} is not valid UTF-8")))
}

unsafe fn handle_arg<'a, T>(ptr: *const T, what: &str) -> Result<&'a T> {
    ptr.as_ref().ok_or_else(|| Error::usage(format!("{what} handle is null")))
}

unsafe fn out_arg<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T> {
    ptr.as_mut().ok_or_else(|| Error::usage(format!("{what} pointer is null")))
}

fn give<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn alloc_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

fn undirected(net: &Network) -> Result<&Graph> {
    match net {
        Network::Undirected(g) => Ok(g),
        Network::Directed(_) => Err(Error::usage("this operation wants an undirected graph")),
    }
}

fn directed(net: &Network) -> Result<&DiGraph> {
    match net {
        Network::Directed(d) => Ok(d),
        Network::Undirected(_) => Err(Error::usage("this operation wants a directed graph")),
    }
}

fn network_nodes(net: &Network) -> usize {
    match net {
        Network::Undirected(g) => g.node_count(),
        Network::Directed(d) => d.node_count(),
    }
}

/// Message for the most recent failure on the calling thread, or null
/// after a success. The pointer stays valid until the next call into this
/// library from the same thread.
#[no_mangle]
pub extern "C" fn anet_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from a function documented to return a caller-freed
/// string, and must not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn anet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- graphs

/// Parses graph text (`u`/`d` header plus edge lines) into a new handle.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must point to writable pointer
/// storage. On success `*out` owns the handle until [`anet_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn anet_graph_parse(
    text: *const c_char,
    out: *mut *mut AnetGraph,
) -> c_int {
    guard(|| {
        let out = out_arg(out, "out")?;
        let text = text_arg(text, "text")?;
        *out = give(AnetGraph(Network::parse(text)?));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from [`anet_graph_parse`] or [`anet_attack_graph`]
/// and must not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn anet_graph_free(graph: *mut AnetGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_graph_node_count(graph: *const AnetGraph) -> usize {
    graph.as_ref().map_or(0, |g| network_nodes(&g.0))
}

/// Number of edges or arcs, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_graph_edge_count(graph: *const AnetGraph) -> usize {
    graph.as_ref().map_or(0, |g| match &g.0 {
        Network::Undirected(u) => u.edge_count(),
        Network::Directed(d) => d.arc_count(),
    })
}

/// # Safety
/// `graph` must be a live handle or null (which reads as undirected).
#[no_mangle]
pub unsafe extern "C" fn anet_graph_is_directed(graph: *const AnetGraph) -> bool {
    graph.as_ref().is_some_and(|g| matches!(g.0, Network::Directed(_)))
}

/// Graph text for the handle. The caller frees the returned string with
/// [`anet_string_free`]; null for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_graph_to_text(graph: *const AnetGraph) -> *mut c_char {
    match graph.as_ref() {
        Some(g) => alloc_string(g.0.to_text()),
        None => std::ptr::null_mut(),
    }
}

// ------------------------------------------------------ budgets and cuts

/// Smallest corruption budget that blinds any search for `goal` truthful
/// nodes, written to `out_m`. `cap` 0 uses the default limit for the
/// graph kind; directed graphs support `goal` 1 only.
///
/// # Safety
/// `graph` must be a live handle; `out_m` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn anet_critical_budget(
    graph: *const AnetGraph,
    goal: usize,
    cap: usize,
    out_m: *mut usize,
) -> c_int {
    guard(|| {
        let g = handle_arg(graph, "graph")?;
        let out_m = out_arg(out_m, "out_m")?;
        if goal == 0 {
            return Err(Error::usage("goal wants at least 1"));
        }
        let (m, _family) = match &g.0 {
            Network::Undirected(u) => {
                let cap = if cap == 0 { oracle::ORACLE_CAP } else { cap };
                if goal == 1 {
                    oracle::exact_m(u, cap)?
                } else {
                    oracle::exact_m_g(u, goal, cap)?
                }
            }
            Network::Directed(d) => {
                if goal != 1 {
                    return Err(Error::usage("directed critical budgets support goal 1 only"));
                }
                let cap = if cap == 0 { oracle::ORACLE_CAP_DIRECTED } else { cap };
                oracle::exact_m_directed(d, cap)?
            }
        };
        *out_m = m;
        Ok(())
    })
}

/// Best separator-plus-component objective over all component bounds.
/// With `goal > 1`, up to `goal - 1` nodes may sit outside the bound
/// (undirected only). Each out pointer may be null to skip that field.
/// `cap` 0 uses the default solver limit.
///
/// # Safety
/// `graph` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn anet_min_sum(
    graph: *const AnetGraph,
    goal: usize,
    cap: usize,
    out_objective: *mut usize,
    out_k: *mut usize,
    out_separator: *mut usize,
) -> c_int {
    guard(|| {
        let g = handle_arg(graph, "graph")?;
        if goal == 0 {
            return Err(Error::usage("goal wants at least 1"));
        }
        let cap = if cap == 0 { separators::EXACT_CAP } else { cap };
        let result = match &g.0 {
            Network::Undirected(u) => {
                if goal == 1 {
                    separators::min_sum(u, cap)?
                } else {
                    separators::min_sum_g(u, goal, cap)?
                }
            }
            Network::Directed(d) => {
                if goal != 1 {
                    return Err(Error::usage("reach separators support goal 1 only"));
                }
                separators::reach_min_sum(d, cap)?
            }
        };
        if let Some(o) = out_objective.as_mut() {
            *o = result.objective;
        }
        if let Some(o) = out_k.as_mut() {
            *o = result.k;
        }
        if let Some(o) = out_separator.as_mut() {
            *o = result.separator.len();
        }
        Ok(())
    })
}

// ------------------------------------------------------------- scenarios

/// Parses scenario JSON (graph text, corrupt ids, claims, budget) into a
/// new handle.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must point to writable pointer
/// storage. On success `*out` owns the handle until
/// [`anet_scenario_free`].
#[no_mangle]
pub unsafe extern "C" fn anet_scenario_parse(
    json: *const c_char,
    out: *mut *mut AnetScenario,
) -> c_int {
    guard(|| {
        let out = out_arg(out, "out")?;
        let json = text_arg(json, "json")?;
        *out = give(AnetScenario(scenario::load_json(json)?));
        Ok(())
    })
}

/// # Safety
/// `scenario` must come from [`anet_scenario_parse`] or
/// [`anet_attack_scenario`] and must not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn anet_scenario_free(scenario: *mut AnetScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Scenario JSON for the handle. The caller frees the returned string
/// with [`anet_string_free`]; null for a null handle.
///
/// # Safety
/// `scenario` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_scenario_to_json(scenario: *const AnetScenario) -> *mut c_char {
    match scenario.as_ref() {
        Some(s) => alloc_string(match &s.0 {
            LoadedScenario::Undirected(sc) => sc.save_json(),
            LoadedScenario::Directed(sc) => sc.save_json(),
        }),
        None => std::ptr::null_mut(),
    }
}

/// Corruption budget the scenario certifies against, or 0 for null.
///
/// # Safety
/// `scenario` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_scenario_budget(scenario: *const AnetScenario) -> usize {
    scenario.as_ref().map_or(0, |s| match &s.0 {
        LoadedScenario::Undirected(sc) => sc.budget(),
        LoadedScenario::Directed(sc) => sc.budget(),
    })
}

/// Number of corrupt nodes in the scenario, or 0 for null.
///
/// # Safety
/// `scenario` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_scenario_corrupt_count(scenario: *const AnetScenario) -> usize {
    scenario.as_ref().map_or(0, |s| match &s.0 {
        LoadedScenario::Undirected(sc) => sc.bad().len(),
        LoadedScenario::Directed(sc) => sc.bad().len(),
    })
}

/// Runs the detector matching the scenario's graph kind and writes the
/// declared truthful nodes. `goal` 0 or 1 recovers one node; larger goals
/// use the many-node detector (undirected only). At most `ids_cap` ids go
/// to `out_ids` (null to only count); `out_len` gets the full count,
/// `out_rounds` the removal rounds, `out_certified` whether the
/// declaration is certified against the scenario budget. Out pointers may
/// be null to skip fields.
///
/// # Safety
/// `scenario` must be a live handle; `out_ids`, when non-null, must point
/// to at least `ids_cap` writable u32 slots; other non-null out pointers
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn anet_detect(
    scenario: *const AnetScenario,
    goal: usize,
    out_ids: *mut u32,
    ids_cap: usize,
    out_len: *mut usize,
    out_rounds: *mut usize,
    out_certified: *mut bool,
) -> c_int {
    guard(|| {
        let s = handle_arg(scenario, "scenario")?;
        let goal = goal.max(1);
        let (outcome, budget) = match &s.0 {
            LoadedScenario::Undirected(sc) => {
                let outcome = if goal == 1 {
                    detection::detect_one_undirected(sc.graph(), sc.reports())
                } else {
                    detection::detect_many(sc.graph(), sc.reports(), goal)?
                };
                (outcome, sc.budget())
            }
            LoadedScenario::Directed(sc) => {
                if goal != 1 {
                    return Err(Error::usage("directed detection recovers one node"));
                }
                (detection::detect_one_directed(sc.graph(), sc.reports()), sc.budget())
            }
        };
        let ids = outcome.declared_good.to_vec();
        if let Some(len) = out_len.as_mut() {
            *len = ids.len();
        }
        if !out_ids.is_null() {
            let n = ids.len().min(ids_cap);
            std::ptr::copy_nonoverlapping(ids.as_ptr(), out_ids, n);
        }
        if let Some(rounds) = out_rounds.as_mut() {
            *rounds = outcome.rounds_removed;
        }
        if let Some(certified) = out_certified.as_mut() {
            *certified = detection::certify(&outcome, budget);
        }
        Ok(())
    })
}

// --------------------------------------------------------------- attacks

/// Builds a corruption plan against the graph. `kind` is one of the
/// `ANET_ATTACK_*` constants; `goal` matters for `ANET_ATTACK_G_REMAINDER`
/// (0 reads as 1), `delta_num`/`delta_den` give the clique-append density
/// in `[1/2, 1)` (0/0 reads as 1/2), `effort` and `seed` steer the approx
/// strategy.
///
/// # Safety
/// `graph` must be a live handle; `out` must point to writable pointer
/// storage. On success `*out` owns the handle until [`anet_attack_free`].
#[no_mangle]
pub unsafe extern "C" fn anet_attack(
    graph: *const AnetGraph,
    kind: c_int,
    goal: usize,
    delta_num: u64,
    delta_den: u64,
    effort: usize,
    seed: u64,
    out: *mut *mut AnetAttack,
) -> c_int {
    guard(|| {
        let g = handle_arg(graph, "graph")?;
        let out = out_arg(out, "out")?;
        let delta = if delta_num == 0 && delta_den == 0 {
            Ratio::new(1, 2)
        } else if delta_den == 0 {
            return Err(Error::usage("delta denominator is 0"));
        } else {
            Ratio::new(delta_num, delta_den)
        };
        let (network, plan) = build_attack(&g.0, kind, goal, delta, effort, seed)?;
        *out = give(AnetAttack { network, plan });
        Ok(())
    })
}

fn build_attack(
    net: &Network,
    kind: c_int,
    goal: usize,
    delta: Ratio<u64>,
    effort: usize,
    seed: u64,
) -> Result<(Network, AttackPlan)> {
    match kind {
        ANET_ATTACK_SEPARATOR => {
            let g = undirected(net)?;
            let sep = separators::min_sum(g, separators::EXACT_CAP)?;
            Ok((net.clone(), adversary::separator_attack(g, &sep)?))
        }
        ANET_ATTACK_DIRECTED => {
            let d = directed(net)?;
            let sep = separators::reach_min_sum(d, separators::EXACT_CAP)?;
            Ok((net.clone(), adversary::directed_attack(d, &sep)?))
        }
        ANET_ATTACK_G_REMAINDER => {
            let g = undirected(net)?;
            let goal = goal.max(1);
            let sep = separators::min_sum_g(g, goal, separators::EXACT_CAP)?;
            Ok((net.clone(), adversary::g_remainder_attack(g, &sep, goal)?))
        }
        ANET_ATTACK_APPROX => {
            let g = undirected(net)?;
            Ok((net.clone(), adversary::approx_attack(g, effort, seed)?))
        }
        ANET_ATTACK_CLIQUE_APPEND => {
            let g = undirected(net)?;
            let (appended, plan) = adversary::clique_append_attack(g, delta)?;
            Ok((Network::Undirected(appended), plan))
        }
        other => Err(Error::usage(format!("unknown attack kind {other}"))),
    }
}

/// # Safety
/// `attack` must come from [`anet_attack`] and must not be freed twice.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn anet_attack_free(attack: *mut AnetAttack) {
    if !attack.is_null() {
        drop(Box::from_raw(attack));
    }
}

/// Budget the plan is certified against, or 0 for null.
///
/// # Safety
/// `attack` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_attack_budget(attack: *const AnetAttack) -> usize {
    attack.as_ref().map_or(0, |a| a.plan.budget)
}

/// Number of nodes the plan actually corrupts, or 0 for null.
///
/// # Safety
/// `attack` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_attack_budget_used(attack: *const AnetAttack) -> usize {
    attack.as_ref().map_or(0, |a| a.plan.budget_used)
}

/// Size of the search the plan blinds, or 0 for null.
///
/// # Safety
/// `attack` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn anet_attack_target_goal(attack: *const AnetAttack) -> usize {
    attack.as_ref().map_or(0, |a| a.plan.target_g)
}

/// Whether the plan corrupts at least half the nodes.
///
/// # Safety
/// `attack` must be a live handle or null (which reads as false).
#[no_mangle]
pub unsafe extern "C" fn anet_attack_degenerate(attack: *const AnetAttack) -> bool {
    attack.as_ref().is_some_and(|a| a.plan.degenerate)
}

/// Writes the corrupt node ids: at most `ids_cap` to `out_ids` (null to
/// only count), the full count to `out_len`.
///
/// # Safety
/// `attack` must be a live handle; `out_ids`, when non-null, must point
/// to at least `ids_cap` writable u32 slots; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn anet_attack_corrupt(
    attack: *const AnetAttack,
    out_ids: *mut u32,
    ids_cap: usize,
    out_len: *mut usize,
) -> c_int {
    guard(|| {
        let a = handle_arg(attack, "attack")?;
        let ids = a.plan.bad.to_vec();
        if let Some(len) = out_len.as_mut() {
            *len = ids.len();
        }
        if !out_ids.is_null() {
            let n = ids.len().min(ids_cap);
            std::ptr::copy_nonoverlapping(ids.as_ptr(), out_ids, n);
        }
        Ok(())
    })
}

/// Clones the graph the plan targets into a new handle. For clique-append
/// plans this is the extended graph.
///
/// # Safety
/// `attack` must be a live handle; `out` must point to writable pointer
/// storage. On success `*out` owns the handle until [`anet_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn anet_attack_graph(
    attack: *const AnetAttack,
    out: *mut *mut AnetGraph,
) -> c_int {
    guard(|| {
        let a = handle_arg(attack, "attack")?;
        let out = out_arg(out, "out")?;
        *out = give(AnetGraph(a.network.clone()));
        Ok(())
    })
}

/// Realizes the plan into a scenario handle: corrupt set, claims and the
/// certification budget.
///
/// # Safety
/// `attack` must be a live handle; `out` must point to writable pointer
/// storage. On success `*out` owns the handle until
/// [`anet_scenario_free`].
#[no_mangle]
pub unsafe extern "C" fn anet_attack_scenario(
    attack: *const AnetAttack,
    out: *mut *mut AnetScenario,
) -> c_int {
    guard(|| {
        let a = handle_arg(attack, "attack")?;
        let out = out_arg(out, "out")?;
        let loaded = match &a.network {
            Network::Undirected(g) => LoadedScenario::Undirected(a.plan.realize(g)?),
            Network::Directed(d) => LoadedScenario::Directed(a.plan.realize(d)?),
        };
        *out = give(AnetScenario(loaded));
        Ok(())
    })
}

/// Checks that the plan blinds every detector at its budget, writing the
/// verdict to `out_blinding`. Small graphs get the exhaustive
/// configuration check (`cap` 0 uses the default limit); larger ones the
/// structural one.
///
/// # Safety
/// `attack` must be a live handle; `out_blinding` must point to writable
/// storage.
#[no_mangle]
pub unsafe extern "C" fn anet_attack_certified(
    attack: *const AnetAttack,
    cap: usize,
    out_blinding: *mut bool,
) -> c_int {
    guard(|| {
        let a = handle_arg(attack, "attack")?;
        let out = out_arg(out_blinding, "out_blinding")?;
        let cap = if cap == 0 { scenario::ENUM_CAP } else { cap };
        *out = match &a.network {
            Network::Undirected(g) => {
                if g.node_count() <= cap {
                    let reports = a.plan.reports(g)?;
                    scenario::impossible_to_find(g, &reports, a.plan.budget, a.plan.target_g, cap)?
                } else {
                    adversary::structurally_certified(g, &a.plan)
                }
            }
            Network::Directed(d) => {
                if d.node_count() <= cap {
                    let reports = a.plan.reports(d)?;
                    scenario::impossible_to_find(d, &reports, a.plan.budget, a.plan.target_g, cap)?
                } else {
                    adversary::structurally_certified_directed(d, &a.plan)
                }
            }
        };
        Ok(())
    })
}
