//! Export of simplified rules as SPARQL CONSTRUCT queries and SWRL
//! rules, with explicit inequality constraints encoding the
//! no-repeated-anything evaluation of the antecedent.

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::rule::SimplifiedRule;
use crate::term::{Term, TermOrVar, Variable};

fn iri(namespace: &str, term: Term) -> String {
    format!("<{}{}>", namespace, term.label())
}

fn sparql_position(pos: TermOrVar, namespace: &str) -> String {
    match pos {
        TermOrVar::Term(t) => iri(namespace, t),
        TermOrVar::Var(v) => format!("?{}", v.name()),
    }
}

/// The inequality clauses shared by both encodings: all unordered pairs
/// of antecedent variables (lexicographic), then each antecedent
/// variable against each term of the antecedent pattern (variables
/// lexicographic, then terms lexicographic).
fn inequalities(p1: &Pattern) -> (Vec<(Variable, Variable)>, Vec<(Variable, Term)>) {
    let vars = p1.sorted_variables();
    let mut terms: Vec<Term> = p1.term_set().iter().copied().collect();
    terms.sort();
    let mut pairs = Vec::new();
    for i in 0..vars.len() {
        for j in (i + 1)..vars.len() {
            pairs.push((vars[i], vars[j]));
        }
    }
    let mut var_terms = Vec::new();
    for &v in &vars {
        for &t in &terms {
            var_terms.push((v, t));
        }
    }
    (pairs, var_terms)
}

/// Renders a simplified rule as a SPARQL CONSTRUCT query whose FILTER
/// restricts the antecedent to injective matches avoiding the pattern's
/// own terms.
pub fn to_sparql_construct(rule: &SimplifiedRule, namespace: &str) -> String {
    let mut out = String::new();
    out.push_str("CONSTRUCT {\n");
    for tp in rule.consequent.triple_patterns() {
        out.push_str("  ");
        out.push_str(&sparql_position(tp.s, namespace));
        out.push(' ');
        out.push_str(&sparql_position(tp.p, namespace));
        out.push(' ');
        out.push_str(&sparql_position(tp.o, namespace));
        out.push_str(" .\n");
    }
    out.push_str("} WHERE {\n");
    for tp in rule.antecedent.triple_patterns() {
        out.push_str("  ");
        out.push_str(&sparql_position(tp.s, namespace));
        out.push(' ');
        out.push_str(&sparql_position(tp.p, namespace));
        out.push(' ');
        out.push_str(&sparql_position(tp.o, namespace));
        out.push_str(" .\n");
    }
    let (pairs, var_terms) = inequalities(&rule.antecedent);
    let mut clauses: Vec<String> = pairs
        .iter()
        .map(|(a, b)| format!("?{} != ?{}", a.name(), b.name()))
        .collect();
    clauses.extend(
        var_terms
            .iter()
            .map(|(v, t)| format!("?{} != {}", v.name(), iri(namespace, *t))),
    );
    if !clauses.is_empty() {
        out.push_str("  FILTER (\n");
        for (i, clause) in clauses.iter().enumerate() {
            out.push_str("    ");
            out.push_str(clause);
            if i + 1 < clauses.len() {
                out.push_str(" &&");
            }
            out.push('\n');
        }
        out.push_str("  )\n");
    }
    out.push_str("}\n");
    out
}

fn swrl_argument(pos: TermOrVar, namespace: &str) -> String {
    match pos {
        TermOrVar::Term(t) => iri(namespace, t),
        TermOrVar::Var(v) => format!("?{}", v.name()),
    }
}

fn swrl_atom(
    tp: &crate::pattern::TriplePattern,
    namespace: &str,
) -> Result<String> {
    let predicate = match tp.p {
        TermOrVar::Term(t) => iri(namespace, t),
        TermOrVar::Var(v) => {
            return Err(Error::PredicatePositionVariable {
                var: v.name().to_owned(),
            })
        }
    };
    Ok(format!(
        "{}({}, {})",
        predicate,
        swrl_argument(tp.s, namespace),
        swrl_argument(tp.o, namespace)
    ))
}

/// Renders a simplified rule as an SWRL rule: body atoms from the
/// antecedent, `swrlb:notEqual` atoms mirroring the SPARQL filter, head
/// atoms from the consequent. Variables in predicate position cannot be
/// expressed in SWRL and are rejected.
pub fn to_swrl(rule: &SimplifiedRule, namespace: &str) -> Result<String> {
    let mut atoms: Vec<String> = Vec::new();
    for tp in rule.antecedent.triple_patterns() {
        atoms.push(swrl_atom(tp, namespace)?);
    }
    let (pairs, var_terms) = inequalities(&rule.antecedent);
    for (a, b) in pairs {
        atoms.push(format!("swrlb:notEqual(?{}, ?{})", a.name(), b.name()));
    }
    for (v, t) in var_terms {
        atoms.push(format!(
            "swrlb:notEqual(?{}, {})",
            v.name(),
            iri(namespace, t)
        ));
    }
    let mut heads: Vec<String> = Vec::new();
    for tp in rule.consequent.triple_patterns() {
        heads.push(swrl_atom(tp, namespace)?);
    }
    let mut out = String::new();
    for atom in &atoms {
        out.push_str(atom);
        out.push_str(" ^\n");
    }
    out.push_str("-> ");
    out.push_str(&heads.join(" ^ "));
    out.push('\n');
    Ok(out)
}
