//! Worked examples shared by the test suites and shipped as CLI
//! fixtures: a co-authorship rule, a symmetric-relation rule with a
//! variable in predicate position, a molecule-shape rule with an open
//! consequent, a transitive chain, a rewrite example with swapped joins,
//! two link-prediction examples, a family of five residence/birth-country
//! graphs whose match matrix separates the two evaluation semantics, a
//! class-membership rule for the exporters, and an annotated-sentence
//! graph.

use crate::graph::{parse_graph, Graph, GraphBag};
use crate::pattern::{parse_pattern, Pattern};
use crate::rule::{Rule, SimplifiedRule};
use crate::term::Variable;

fn pattern(text: &str) -> Pattern {
    parse_pattern(text).expect("fixture pattern parses")
}

fn graph(text: &str) -> Graph {
    parse_graph(text).expect("fixture graph parses")
}

fn vars(names: &[&str]) -> Vec<Variable> {
    names.iter().map(|n| Variable::new(n)).collect()
}

/// Two mutual co-authors where one of them has a known workplace.
pub fn coauthor_graph() -> Graph {
    graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org")
}

/// The co-author graph after applying the co-author rule once.
pub fn coauthor_extended_graph() -> Graph {
    graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org\nBob worksAt Org")
}

/// Mutual co-authors share their workplace.
pub fn coauthor_rule() -> Rule {
    Rule::new(
        "coauthor-workplace",
        pattern("?v1 coauthorOf ?v2\n?v2 coauthorOf ?v1\n?v1 worksAt ?v3"),
        pattern("?v2 worksAt ?v3"),
        vars(&["v2", "v3"]),
        vars(&["v2", "v3"]),
    )
}

/// The base graph and the extended graph as a two-graph bag.
pub fn coauthor_pair_bag() -> GraphBag {
    GraphBag::new(vec![
        ("g1".into(), coauthor_graph()),
        ("g2".into(), coauthor_extended_graph()),
    ])
    .expect("distinct ids")
}

/// Two entities connected in both directions by the same relation.
pub fn symmetric_relation_graph() -> Graph {
    graph("Alice knows Bob\nBob knows Alice")
}

/// A mutually used relation is probably symmetric; the joined variable
/// sits in predicate position in the antecedent.
pub fn symmetric_relation_rule() -> Rule {
    Rule::new(
        "probably-symmetric",
        pattern("?v1 ?v2 ?v3\n?v3 ?v2 ?v1"),
        pattern("?v2 type ProbablySymmetric"),
        vars(&["v2"]),
        vars(&["v2"]),
    )
}

/// A molecule known to be a carboxylic acid.
pub fn carboxylic_acid_graph() -> Graph {
    graph("m1 type Molecule\nm1 type CarboxylicAcid")
}

/// Anything typed as carboxylic acid should exhibit the O=C-O-H group;
/// the consequent keeps free variables for the atoms.
pub fn carboxylic_acid_rule() -> Rule {
    Rule::new(
        "carboxylic-acid-shape",
        pattern("?v1 type CarboxylicAcid"),
        pattern(
            "?v1 hasAtom ?v2\n?v1 hasAtom ?v3\n?v1 hasAtom ?v4\n?v1 hasAtom ?v5\n\
             ?v2 doubleBond ?v3\n?v3 doubleBond ?v2\n?v3 singleBond ?v4\n?v4 singleBond ?v3\n\
             ?v4 singleBond ?v5\n?v5 singleBond ?v4\n?v2 element Oxygen\n?v3 element Carbon\n\
             ?v4 element Oxygen\n?v5 element Hydrogen",
        ),
        vars(&["v1"]),
        vars(&["v1"]),
    )
}

/// A three-edge chain under one edge label.
pub fn transitive_chain_graph() -> Graph {
    graph("t1 t2 t3\nt3 t2 t5\nt5 t2 t6")
}

/// Two consecutive edges imply the shortcut edge.
pub fn transitive_rule() -> SimplifiedRule {
    SimplifiedRule::new(
        "transitive",
        pattern("?v1 t2 ?v2\n?v2 t2 ?v3"),
        pattern("?v1 t2 ?v3"),
    )
    .expect("shared variables")
}

/// A rule whose join swaps two variables; rewriting to the simplified
/// form must rename the accidental reuse of `v1` and swap `v2` and `v3`
/// simultaneously.
pub fn rewrite_example_rule() -> Rule {
    Rule::new(
        "rewrite-example",
        pattern("?v1 t1 ?v2\n?v1 t2 ?v3"),
        pattern("?v1 t3 ?v2\n?v2 t4 ?v3\n?v3 t5 ?v4"),
        vars(&["v2", "v3"]),
        vars(&["v3", "v2"]),
    )
}

/// The expected consequent of the simplified rewrite example.
pub fn rewrite_example_expected_consequent() -> Pattern {
    pattern("?v5 t3 ?v3\n?v3 t4 ?v2\n?v2 t5 ?v4")
}

/// Graph for tail term prediction, where the predicted term does not
/// occur in the rule.
pub fn tail_prediction_graph() -> Graph {
    graph("t1 t2 t3\nt1 t4 t5\nt5 t6 t7")
}

pub fn tail_prediction_rule() -> SimplifiedRule {
    SimplifiedRule::new(
        "tail-prediction",
        pattern("?v1 t2 ?v2\n?v1 t4 ?v3"),
        pattern("?v2 t8 ?v3"),
    )
    .expect("shared variables")
}

/// Graph for relation term prediction, where the predicted term comes
/// from the rule's consequent.
pub fn relation_prediction_graph() -> Graph {
    graph("t3 t2 t1\nt3 t4 t5\nt5 t6 t7")
}

pub fn relation_prediction_rule() -> SimplifiedRule {
    SimplifiedRule::new(
        "relation-prediction",
        pattern("?v2 ?v1 t1\n?v2 t4 ?v3\n?v3 ?v4 ?v5"),
        pattern("?v2 t8 ?v5"),
    )
    .expect("shared variables")
}

/// Five situations of a person, their country of residence, and their
/// parents' countries of birth: all three distinct; residence equal to
/// the father's birth country; equal to the mother's; parents born in
/// the same country; all three equal.
pub fn family_graphs() -> Vec<(String, Graph)> {
    let make = |father_cob: &str, mother_cob: &str, cor: &str| {
        graph(&format!(
            "t1 hF t2\nt1 hM t3\nt2 cob {father_cob}\nt3 cob {mother_cob}\nt1 cor {cor}"
        ))
    };
    vec![
        ("g1".to_owned(), make("t4", "t6", "t5")),
        ("g2".to_owned(), make("t4", "t6", "t4")),
        ("g3".to_owned(), make("t4", "t6", "t6")),
        ("g4".to_owned(), make("t4", "t4", "t5")),
        ("g5".to_owned(), make("t4", "t4", "t4")),
    ]
}

/// The family graphs abstracted into patterns by replacing node terms
/// with variables.
pub fn family_patterns() -> Vec<(String, Pattern)> {
    let make = |father_cob: &str, mother_cob: &str, cor: &str| {
        pattern(&format!(
            "?v1 hF ?v2\n?v1 hM ?v3\n?v2 cob ?{father_cob}\n?v3 cob ?{mother_cob}\n?v1 cor ?{cor}"
        ))
    };
    vec![
        ("p1".to_owned(), make("v4", "v6", "v5")),
        ("p2".to_owned(), make("v4", "v6", "v4")),
        ("p3".to_owned(), make("v4", "v6", "v6")),
        ("p4".to_owned(), make("v4", "v4", "v5")),
        ("p5".to_owned(), make("v4", "v4", "v4")),
    ]
}

/// Residence in the father's birth country, distinct from the mother's,
/// marks the person as a member of some class.
pub fn classx_rule() -> SimplifiedRule {
    SimplifiedRule::new(
        "classx",
        pattern("?v1 hF ?v2\n?v1 hM ?v3\n?v1 cor ?v4\n?v2 cob ?v4\n?v3 cob ?v5"),
        pattern("?v1 type ClassX"),
    )
    .expect("shared variables")
}

/// A richly annotated sentence: tokens with labels and successor edges,
/// entity mentions, detected relation instances, and background facts.
pub fn nlp_sentence_graph() -> Graph {
    graph(
        r#"t1 label "\"Alice\""
t2 label "\"Smith\""
t3 label "\"likes\""
t4 label "\"Bob\""
t5 label "\"and\""
t6 label "\"Charlie\""
t7 label "\"likes\""
t8 label "\"Bob\""
t1 next t2
t2 next t3
t3 next t4
t4 next t5
t5 next t6
t6 next t7
t7 next t8
t1 pom em1
t2 pom em1
t4 pom em2
t6 pom em3
t8 pom em4
em1 moe Alice
em2 moe Bob
em3 moe Charlie
em4 moe Bob
Alice hori ri1
Bob tori ri1
Charlie hori ri2
Bob tori ri2
ri1 ior likes
ri2 ior likes
Alice likes Bob
Alice isA Person
Bob isA Person
Charlie isA Person"#,
    )
}
