//! Corruption detection games on audit networks.
//!
//! A network's nodes audit one another and report each audited node as good
//! or bad. Corrupt nodes may report anything; truthful nodes report the
//! truth. Given the reports and a bound on how many nodes are corrupt, this
//! crate answers the questions that make such games interesting:
//!
//! - which nodes are provably good no matter which corrupt set produced the
//!   reports ([`scenario`]),
//! - fast detection rules that always declare at least one truthful node
//!   when the corrupt set is small enough ([`detection`]),
//! - the exact corruption budget at which identification becomes impossible
//!   ([`oracle`]),
//! - budget-optimal corruption strategies built from small vertex separators
//!   ([`adversary`], [`separators`]),
//! - structured instances connecting those budgets to graph expansion and
//!   to hard separator instances ([`reductions`]).
//!
//! Graphs are small dense-indexed structures ([`graph`]); generators for the
//! usual families live in [`generate`]. The `auditnet` binary exposes all of
//! it on the command line ([`cli`]).

pub mod adversary;
pub mod cli;
pub mod detection;
pub mod enumerate;
pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod reductions;
pub mod scenario;
pub mod separators;

pub use error::{Error, Result};
pub use graph::{AuditGraph, DiGraph, Graph, Network, NodeId, NodeSet};
