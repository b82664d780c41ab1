//! Graph pattern-based association rules over directed labeled
//! multigraphs.
//!
//! A graph here is a set of `(subject, predicate, object)` term triples;
//! a rule pairs an antecedent graph pattern with a consequent graph
//! pattern, joined through variable sequences. The crate provides:
//!
//! - pattern evaluation under homomorphism and no-repeated-anything
//!   (injective) semantics ([`matcher`]),
//! - exact rational quality metrics (support, confidence, lift,
//!   leverage, conviction) in single-graph, micro-averaged, and
//!   macro-averaged regimes ([`metrics`]), built on event counts over a
//!   never-materialized tuple sample space ([`stats`]),
//! - rule rewriting into the simplified two-pattern form and triviality
//!   analysis with witnesses ([`rule`]),
//! - generative application: extension, closure, pattern prediction, and
//!   link prediction ([`apply`]),
//! - classical itemset-rule metrics ([`isar`]) together with a reframing
//!   oracle that replays a rule as the itemset rule `{A} => {B}` over a
//!   generated transaction database ([`reframe`]),
//! - SPARQL CONSTRUCT and SWRL export with inequality filters encoding
//!   the injective semantics ([`export`]).
//!
//! ```
//! use gpar_core::fixtures;
//! use gpar_core::matcher::{evaluate, Semantics};
//! use gpar_core::metrics::metrics_single;
//!
//! let g = fixtures::coauthor_graph();
//! let rule = fixtures::coauthor_rule();
//! let matches = evaluate(&rule.antecedent, &g, Semantics::Nra).unwrap();
//! assert_eq!(matches.len(), 1);
//! let report = metrics_single(&g, &rule).unwrap();
//! assert_eq!(report.conviction.to_string(), "5/6");
//! ```

pub mod apply;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod graph;
pub mod isar;
pub mod matcher;
pub mod metrics;
pub mod pattern;
pub mod reframe;
pub mod rule;
pub mod stats;
pub mod term;
pub mod value;

pub use error::{Error, Result};
pub use graph::{parse_graph, parse_graph_bag, serialize_graph, Graph, GraphBag, Triple};
pub use matcher::{apply_mapping, evaluate, project, sequence_matches, Mapping, Semantics};
pub use metrics::{
    classify_situation, metrics_macro, metrics_micro, metrics_single, MetricReport, Regime,
    Situation,
};
pub use pattern::{parse_pattern, serialize_pattern, Pattern, TriplePattern};
pub use rule::{
    from_simplified, is_trivial, parse_rules, to_simplified, Rule, SimplifiedRule,
    TrivialityWitness,
};
pub use term::{Term, TermOrVar, Variable};
pub use value::MetricValue;
