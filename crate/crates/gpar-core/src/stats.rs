//! Event statistics for rule evaluation.
//!
//! The tuple sample space (all non-repetitive term sequences over the
//! graph's terms minus both patterns' terms) is never materialized: its
//! cardinality comes from a falling-factorial product, and the event
//! cardinalities come from match projections filtered against the
//! opposite pattern's term set.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{Graph, GraphBag};
use crate::matcher::{evaluate, project, Semantics};
use crate::pattern::Pattern;
use crate::rule::Rule;
use crate::term::Term;

/// Exact event counts for one graph or a pooled bag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventStats {
    /// Tuple length `n`.
    pub n: usize,
    /// Size of the tuple sample space.
    pub tuple_space: BigUint,
    /// Tuples corresponding to a match of the antecedent.
    pub antecedent: BigUint,
    /// Tuples corresponding to a match of the consequent.
    pub consequent: BigUint,
    /// Tuples corresponding to matches of both.
    pub joint: BigUint,
    /// Set for single-graph statistics taken from a bag.
    pub graph_id: Option<String>,
}

impl EventStats {
    pub fn zero(n: usize) -> EventStats {
        EventStats {
            n,
            tuple_space: BigUint::zero(),
            antecedent: BigUint::zero(),
            consequent: BigUint::zero(),
            joint: BigUint::zero(),
            graph_id: None,
        }
    }
}

/// Number of non-repetitive term sequences of length `n` over the
/// graph's terms minus both patterns' terms: the falling factorial
/// `m (m-1) ... (m-n+1)`, zero when `n > m`.
pub fn tuple_space_size(g: &Graph, p1: &Pattern, p2: &Pattern, n: usize) -> BigUint {
    let m = eligible_terms(g, p1, p2).len();
    if n > m {
        return BigUint::zero();
    }
    let mut product = BigUint::one();
    for i in 0..n {
        product *= BigUint::from(m - i);
    }
    product
}

/// Terms of the graph that may appear in a correspondence tuple.
pub fn eligible_terms(g: &Graph, p1: &Pattern, p2: &Pattern) -> HashSet<Term> {
    g.term_set()
        .iter()
        .filter(|t| !p1.term_set().contains(t) && !p2.term_set().contains(t))
        .copied()
        .collect()
}

/// Event statistics for one rule on one graph. The projection of an
/// injective antecedent match already avoids the antecedent's own terms,
/// so only the consequent's term set needs filtering out (and
/// symmetrically for the consequent's projections).
pub fn event_stats(g: &Graph, rule: &Rule) -> Result<EventStats> {
    let n = rule.join_len();
    let eligible = eligible_terms(g, &rule.antecedent, &rule.consequent);
    let tuples = |pattern: &Pattern, vars: &[crate::term::Variable]| -> Result<HashSet<Vec<Term>>> {
        let matches = evaluate(pattern, g, Semantics::Nra)?;
        let projected = project(&matches, vars)?;
        Ok(projected
            .into_iter()
            .filter(|row| row.iter().all(|t| eligible.contains(t)))
            .collect())
    };
    let antecedent_tuples = tuples(&rule.antecedent, &rule.join_antecedent)?;
    let consequent_tuples = tuples(&rule.consequent, &rule.join_consequent)?;
    let joint = antecedent_tuples
        .intersection(&consequent_tuples)
        .count();
    Ok(EventStats {
        n,
        tuple_space: tuple_space_size(g, &rule.antecedent, &rule.consequent, n),
        antecedent: BigUint::from(antecedent_tuples.len()),
        consequent: BigUint::from(consequent_tuples.len()),
        joint: BigUint::from(joint),
        graph_id: None,
    })
}

/// Per-graph statistics for every graph of a bag, in bag order.
pub fn event_stats_per_graph(bag: &GraphBag, rule: &Rule) -> Result<Vec<EventStats>> {
    let entries: Vec<&(String, Graph)> = bag.iter().collect();
    entries
        .par_iter()
        .map(|(id, g)| {
            let mut stats = event_stats(g, rule)?;
            stats.graph_id = Some(id.clone());
            Ok(stats)
        })
        .collect()
}

/// Pooled statistics over a bag: component-wise sums of the per-graph
/// statistics. Tuples from different graphs are distinct by
/// construction, so the pooled sample space is the disjoint union.
pub fn event_stats_bag(bag: &GraphBag, rule: &Rule) -> Result<EventStats> {
    let per_graph = event_stats_per_graph(bag, rule)?;
    Ok(sum_stats(rule.join_len(), &per_graph))
}

pub fn sum_stats(n: usize, per_graph: &[EventStats]) -> EventStats {
    let mut total = EventStats::zero(n);
    for s in per_graph {
        total.tuple_space += &s.tuple_space;
        total.antecedent += &s.antecedent;
        total.consequent += &s.consequent;
        total.joint += &s.joint;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::pattern::parse_pattern;
    use crate::rule::Rule;
    use crate::term::Variable;

    fn coauthor_rule() -> Rule {
        Rule::new(
            "coauthor",
            parse_pattern("?v1 coauthorOf ?v2\n?v2 coauthorOf ?v1\n?v1 worksAt ?v3").unwrap(),
            parse_pattern("?v2 worksAt ?v3").unwrap(),
            vec![Variable::new("v2"), Variable::new("v3")],
            vec![Variable::new("v2"), Variable::new("v3")],
        )
    }

    fn coauthor_graph() -> Graph {
        parse_graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org").unwrap()
    }

    #[test]
    fn tuple_space_is_a_falling_factorial() {
        let rule = coauthor_rule();
        let g = coauthor_graph();
        // Three eligible terms, tuples of length two.
        assert_eq!(
            tuple_space_size(&g, &rule.antecedent, &rule.consequent, 2),
            BigUint::from(6u32)
        );
        assert_eq!(
            tuple_space_size(&g, &rule.antecedent, &rule.consequent, 1),
            BigUint::from(3u32)
        );
        // Not enough eligible terms.
        assert_eq!(
            tuple_space_size(&g, &rule.antecedent, &rule.consequent, 4),
            BigUint::zero()
        );
    }

    #[test]
    fn coauthor_stats() {
        let stats = event_stats(&coauthor_graph(), &coauthor_rule()).unwrap();
        assert_eq!(stats.tuple_space, BigUint::from(6u32));
        assert_eq!(stats.antecedent, BigUint::from(1u32));
        assert_eq!(stats.consequent, BigUint::from(1u32));
        assert_eq!(stats.joint, BigUint::zero());
    }

    #[test]
    fn extended_coauthor_stats() {
        let g = coauthor_graph().union([crate::graph::parse_graph("Bob worksAt Org")
            .unwrap()
            .sorted_triples()[0]]);
        let stats = event_stats(&g, &coauthor_rule()).unwrap();
        assert_eq!(stats.tuple_space, BigUint::from(6u32));
        assert_eq!(stats.antecedent, BigUint::from(2u32));
        assert_eq!(stats.consequent, BigUint::from(2u32));
        assert_eq!(stats.joint, BigUint::from(2u32));
    }

    #[test]
    fn unmatched_antecedent_yields_zero_support() {
        let g = parse_graph("a b c").unwrap();
        let stats = event_stats(&g, &coauthor_rule()).unwrap();
        assert_eq!(stats.antecedent, BigUint::zero());
    }

    #[test]
    fn bag_stats_sum_per_graph_stats() {
        let g1 = coauthor_graph();
        let g2 = g1.union([parse_graph("Bob worksAt Org").unwrap().sorted_triples()[0]]);
        let bag = GraphBag::new(vec![("g1".into(), g1.clone()), ("g2".into(), g2)]).unwrap();
        let stats = event_stats_bag(&bag, &coauthor_rule()).unwrap();
        assert_eq!(stats.tuple_space, BigUint::from(12u32));
        assert_eq!(stats.antecedent, BigUint::from(3u32));
        assert_eq!(stats.consequent, BigUint::from(3u32));
        assert_eq!(stats.joint, BigUint::from(2u32));
        // A singleton bag equals the single-graph statistics.
        let singleton = GraphBag::singleton("only", g1.clone());
        let single = event_stats(&g1, &coauthor_rule()).unwrap();
        let pooled = event_stats_bag(&singleton, &coauthor_rule()).unwrap();
        assert_eq!(pooled.tuple_space, single.tuple_space);
        assert_eq!(pooled.antecedent, single.antecedent);
        // Two identical graphs double every count.
        let doubled =
            GraphBag::new(vec![("a".into(), g1.clone()), ("b".into(), g1.clone())]).unwrap();
        let d = event_stats_bag(&doubled, &coauthor_rule()).unwrap();
        assert_eq!(d.tuple_space, &single.tuple_space * 2u32);
        assert_eq!(d.antecedent, &single.antecedent * 2u32);
    }
}
