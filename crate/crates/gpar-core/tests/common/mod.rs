//! Brute-force reference implementations and instance generators for the
//! property and acceptance suites.
//!
//! The reference evaluator enumerates all total functions from pattern
//! variables to graph terms and filters them by the two semantics'
//! definitions; the reference event counter enumerates the tuple sample
//! space explicitly and tests the correspondence predicate per tuple.
//! Both stay independent of the production search and projection paths.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::Rng;

use gpar_core::graph::{Graph, GraphBag, Triple};
use gpar_core::matcher::Semantics;
use gpar_core::pattern::{Pattern, TriplePattern};
use gpar_core::rule::Rule;
use gpar_core::stats::EventStats;
use gpar_core::term::{Term, TermOrVar, Variable};

pub type Assignment = BTreeMap<Variable, Term>;

fn assignment_image(assignment: &Assignment, p: &Pattern) -> Vec<Triple> {
    p.triple_patterns()
        .iter()
        .map(|tp| {
            let resolve = |pos: TermOrVar| match pos {
                TermOrVar::Term(t) => t,
                TermOrVar::Var(v) => assignment[&v],
            };
            Triple::new(resolve(tp.s), resolve(tp.p), resolve(tp.o))
        })
        .collect()
}

fn admissible(
    assignment: &Assignment,
    p: &Pattern,
    g: &Graph,
    semantics: Semantics,
) -> bool {
    if semantics == Semantics::Nra {
        let mut seen = HashSet::new();
        for (_, t) in assignment.iter() {
            if !seen.insert(*t) {
                return false;
            }
            if p.term_set().contains(t) {
                return false;
            }
        }
    }
    assignment_image(assignment, p)
        .iter()
        .all(|t| g.contains(t))
}

/// All matches of a pattern, by exhaustive enumeration of the total
/// functions from the pattern's variables to the graph's terms.
pub fn brute_force_evaluate(p: &Pattern, g: &Graph, semantics: Semantics) -> Vec<Assignment> {
    let vars = p.sorted_variables();
    let mut terms: Vec<Term> = g.term_set().iter().copied().collect();
    terms.sort();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    if vars.is_empty() {
        let empty = Assignment::new();
        if admissible(&empty, p, g, semantics) {
            out.push(empty);
        }
        return out;
    }
    if terms.is_empty() {
        return out;
    }
    // Odometer over variable-to-term choices.
    stack.push(0);
    while let Some(&top) = stack.last() {
        if top == terms.len() {
            stack.pop();
            if let Some(last) = stack.last_mut() {
                *last += 1;
            }
            continue;
        }
        if stack.len() == vars.len() {
            let assignment: Assignment = vars
                .iter()
                .zip(&stack)
                .map(|(&v, &i)| (v, terms[i]))
                .collect();
            if admissible(&assignment, p, g, semantics) {
                out.push(assignment);
            }
            *stack.last_mut().unwrap() += 1;
        } else {
            stack.push(0);
        }
    }
    out
}

/// The correspondence predicate by exhaustive enumeration.
pub fn brute_force_sequence_matches(
    g: &Graph,
    tuple: &[Term],
    p: &Pattern,
    vars: &[Variable],
    semantics: Semantics,
) -> bool {
    brute_force_evaluate(p, g, semantics)
        .iter()
        .any(|a| vars.iter().zip(tuple).all(|(v, t)| a[v] == *t))
}

/// All non-repetitive tuples of the given length over the eligible
/// terms, materialized.
pub fn enumerate_tuples(eligible: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(terms: &[Term], n: usize, current: &mut Vec<Term>, out: &mut Vec<Vec<Term>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for &t in terms {
            if current.contains(&t) {
                continue;
            }
            current.push(t);
            rec(terms, n, current, out);
            current.pop();
        }
    }
    rec(eligible, n, &mut current, &mut out);
    out
}

/// Event statistics by materializing the tuple space and testing the
/// correspondence predicate tuple by tuple with the brute-force
/// evaluator.
pub fn brute_force_event_stats(g: &Graph, rule: &Rule) -> EventStats {
    let mut eligible: Vec<Term> = g
        .term_set()
        .iter()
        .filter(|t| {
            !rule.antecedent.term_set().contains(t) && !rule.consequent.term_set().contains(t)
        })
        .copied()
        .collect();
    eligible.sort();
    let tuples = enumerate_tuples(&eligible, rule.join_len());
    let mut antecedent = 0u64;
    let mut consequent = 0u64;
    let mut joint = 0u64;
    for tuple in &tuples {
        let a = brute_force_sequence_matches(
            g,
            tuple,
            &rule.antecedent,
            &rule.join_antecedent,
            Semantics::Nra,
        );
        let b = brute_force_sequence_matches(
            g,
            tuple,
            &rule.consequent,
            &rule.join_consequent,
            Semantics::Nra,
        );
        antecedent += a as u64;
        consequent += b as u64;
        joint += (a && b) as u64;
    }
    EventStats {
        n: rule.join_len(),
        tuple_space: BigUint::from(tuples.len()),
        antecedent: BigUint::from(antecedent),
        consequent: BigUint::from(consequent),
        joint: BigUint::from(joint),
        graph_id: None,
    }
}

// ---------------------------------------------------------------------
// Random instance generation over a small shared vocabulary.
// ---------------------------------------------------------------------

pub const NODE_TERMS: [&str; 6] = ["n0", "n1", "n2", "n3", "n4", "n5"];
pub const EDGE_TERMS: [&str; 2] = ["r0", "r1"];
pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

pub fn random_graph(rng: &mut StdRng, max_triples: usize) -> Graph {
    // Five node labels keep the graphs dense enough for overlapping
    // events.
    let nodes = &NODE_TERMS[..5];
    let count = rng.gen_range(1..=max_triples);
    let triples = (0..count).map(|_| {
        Triple::new(
            Term::new(nodes[rng.gen_range(0..nodes.len())]),
            Term::new(EDGE_TERMS[rng.gen_range(0..EDGE_TERMS.len())]),
            Term::new(nodes[rng.gen_range(0..nodes.len())]),
        )
    });
    Graph::new(triples)
}

/// A random pattern with at least `min_vars` distinct variables, each
/// used at least once in a node position.
pub fn random_pattern(rng: &mut StdRng, min_vars: usize) -> Pattern {
    let var_count = rng.gen_range(min_vars..=VAR_NAMES.len());
    let vars: Vec<Variable> = VAR_NAMES[..var_count].iter().map(|n| Variable::new(n)).collect();
    let tp_count = rng.gen_range(1..=2).max(var_count.div_ceil(2));
    let mut node_positions: Vec<TermOrVar> = Vec::new();
    for &v in &vars {
        node_positions.push(TermOrVar::Var(v));
    }
    while node_positions.len() < tp_count * 2 {
        let pos = if rng.gen_bool(0.75) {
            TermOrVar::Var(vars[rng.gen_range(0..vars.len())])
        } else {
            TermOrVar::Term(Term::new(NODE_TERMS[rng.gen_range(0..5)]))
        };
        node_positions.push(pos);
    }
    // Shuffle node positions.
    for i in (1..node_positions.len()).rev() {
        node_positions.swap(i, rng.gen_range(0..=i));
    }
    let tps = (0..tp_count).map(|i| {
        let predicate = if rng.gen_bool(0.85) {
            TermOrVar::Term(Term::new(EDGE_TERMS[rng.gen_range(0..EDGE_TERMS.len())]))
        } else {
            TermOrVar::Var(vars[rng.gen_range(0..vars.len())])
        };
        TriplePattern {
            s: node_positions[2 * i],
            p: predicate,
            o: node_positions[2 * i + 1],
        }
    });
    Pattern::new(tps).expect("vocabularies are disjoint")
}

fn join_sequence(rng: &mut StdRng, p: &Pattern, n: usize) -> Vec<Variable> {
    let mut vars = p.sorted_variables();
    for i in (1..vars.len()).rev() {
        vars.swap(i, rng.gen_range(0..=i));
    }
    vars.truncate(n);
    vars
}

/// A random valid rule; with probability 1/4 the consequent reuses the
/// antecedent pattern, making identical events likely.
pub fn random_rule(rng: &mut StdRng, name: &str) -> Rule {
    random_rule_with_max_join(rng, name, 2)
}

pub fn random_rule_with_max_join(rng: &mut StdRng, name: &str, max_n: usize) -> Rule {
    // Short joins dominate; they make overlapping events far more
    // likely on small graphs.
    let n = if max_n == 1 || rng.gen_bool(0.7) {
        1
    } else {
        rng.gen_range(2..=max_n)
    };
    let antecedent = random_pattern(rng, n);
    let consequent = if rng.gen_bool(0.25) {
        antecedent.clone()
    } else {
        random_pattern(rng, n)
    };
    let join_antecedent = join_sequence(rng, &antecedent, n);
    let join_consequent = if consequent == antecedent && rng.gen_bool(0.8) {
        join_antecedent.clone()
    } else {
        join_sequence(rng, &consequent, n)
    };
    Rule::new(name, antecedent, consequent, join_antecedent, join_consequent)
        .validated()
        .expect("generated rules are valid")
}

pub fn random_bag(rng: &mut StdRng, max_graphs: usize, max_triples: usize) -> GraphBag {
    let count = rng.gen_range(1..=max_graphs);
    GraphBag::new(
        (0..count)
            .map(|i| (format!("g{i}"), random_graph(rng, max_triples)))
            .collect(),
    )
    .expect("ids are distinct")
}
