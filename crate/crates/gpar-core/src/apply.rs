//! Generative rule application: graph extension, closure, and link
//! prediction.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Triple};
use crate::matcher::{evaluate, Semantics};
use crate::metrics::metrics_single;
use crate::pattern::Pattern;
use crate::rule::{from_simplified, SimplifiedRule};
use crate::term::{Term, TermOrVar};
use crate::value::MetricValue;

fn ground_consequent(rule: &SimplifiedRule) -> Result<()> {
    if rule
        .consequent
        .variables()
        .is_subset(rule.antecedent.variables())
    {
        Ok(())
    } else {
        Err(Error::UngroundConsequent)
    }
}

/// Triples added by applying the rule simultaneously over every
/// antecedent match of the given graph.
fn extension_delta(g: &Graph, rule: &SimplifiedRule) -> Result<Vec<Triple>> {
    ground_consequent(rule)?;
    let matches = evaluate(&rule.antecedent, g, Semantics::Nra)?;
    let mut delta = Vec::new();
    for m in &matches {
        let instantiated = m.apply(&rule.consequent);
        let ground = instantiated
            .as_graph()
            .expect("consequent variables are all bound by the match");
        delta.extend(ground.triples().copied());
    }
    Ok(delta)
}

/// One extension step: the union of the graph with every instantiated
/// consequent. Matches are enumerated against the original graph, so the
/// step is a simultaneous application.
pub fn extend_once(g: &Graph, rule: &SimplifiedRule) -> Result<Graph> {
    Ok(g.union(extension_delta(g, rule)?))
}

/// One simultaneous extension step under a set of rules.
pub fn extend_once_all(g: &Graph, rules: &[SimplifiedRule]) -> Result<Graph> {
    let mut delta = Vec::new();
    for rule in rules {
        delta.extend(extension_delta(g, rule)?);
    }
    Ok(g.union(delta))
}

/// Result of iterating extension steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub graph: Graph,
    /// Number of steps that added at least one triple.
    pub steps: usize,
    /// Whether a fixpoint was certified (a further step adds nothing).
    pub fixpoint: bool,
}

/// Iterates extension until a fixpoint is certified or the step cap is
/// reached. For ground consequents the fixpoint always exists on finite
/// graphs; the cap guards resource use.
pub fn closure(g: &Graph, rules: &[SimplifiedRule], max_steps: usize) -> Result<Closure> {
    let mut current = g.clone();
    let mut steps = 0;
    loop {
        let next = extend_once_all(&current, rules)?;
        if next == current {
            return Ok(Closure {
                graph: current,
                steps,
                fixpoint: true,
            });
        }
        current = next;
        steps += 1;
        if steps >= max_steps {
            return Ok(Closure {
                graph: current,
                steps,
                fixpoint: false,
            });
        }
    }
}

/// The instantiated consequents of every antecedent match; patterns when
/// free variables remain, graphs otherwise. Sorted and deduplicated.
pub fn predict_patterns(g: &Graph, rule: &SimplifiedRule) -> Result<Vec<Pattern>> {
    let matches = evaluate(&rule.antecedent, g, Semantics::Nra)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in &matches {
        let instantiated = m.apply(&rule.consequent);
        if seen.insert(instantiated.clone()) {
            out.push(instantiated);
        }
    }
    out.sort_by(|a, b| a.triple_patterns().cmp(b.triple_patterns()));
    Ok(out)
}

/// An incomplete triple with exactly one unknown position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleQuery {
    /// `(?, r, t)` — head term prediction.
    Head { relation: Term, tail: Term },
    /// `(s, ?, t)` — relation term prediction.
    Relation { head: Term, tail: Term },
    /// `(s, r, ?)` — tail term prediction.
    Tail { head: Term, relation: Term },
}

impl TripleQuery {
    /// Splits a candidate triple into (fixed positions hold, hole term).
    fn extract(&self, t: &Triple) -> Option<Term> {
        match *self {
            TripleQuery::Head { relation, tail } => {
                (t.p == relation && t.o == tail).then_some(t.s)
            }
            TripleQuery::Relation { head, tail } => (t.s == head && t.o == tail).then_some(t.p),
            TripleQuery::Tail { head, relation } => {
                (t.s == head && t.p == relation).then_some(t.o)
            }
        }
    }
}

/// One link-prediction candidate.
#[derive(Clone, Debug)]
pub struct Prediction {
    pub term: Term,
    pub rule: String,
    pub confidence: MetricValue,
}

/// Link prediction: every rule whose instantiated consequent fills the
/// two fixed positions of the query proposes the remaining term,
/// ranked by the rule's single-graph confidence (descending, undefined
/// last), with ties broken by term label and rule name.
pub fn link_predict(
    g: &Graph,
    rules: &[SimplifiedRule],
    query: &TripleQuery,
) -> Result<Vec<Prediction>> {
    let mut out: Vec<Prediction> = Vec::new();
    for rule in rules {
        if rule.consequent.len() != 1 {
            return Err(Error::Contract(format!(
                "rule `{}` has a consequent of {} triple patterns; link prediction needs exactly one",
                rule.name,
                rule.consequent.len()
            )));
        }
        let confidence = metrics_single(g, &from_simplified(rule)?)?.confidence;
        let matches = evaluate(&rule.antecedent, g, Semantics::Nra)?;
        let mut candidates: HashSet<Term> = HashSet::new();
        for m in &matches {
            let instantiated = m.apply(&rule.consequent);
            let tp = instantiated.triple_patterns()[0];
            // Unbound consequent variables cannot propose a concrete
            // candidate and cannot satisfy a fixed position.
            let (TermOrVar::Term(s), TermOrVar::Term(p), TermOrVar::Term(o)) = (tp.s, tp.p, tp.o)
            else {
                continue;
            };
            if let Some(term) = query.extract(&Triple::new(s, p, o)) {
                candidates.insert(term);
            }
        }
        for term in candidates {
            out.push(Prediction {
                term,
                rule: rule.name.clone(),
                confidence: confidence.clone(),
            });
        }
    }
    out.sort_by(|a, b| {
        confidence_rank(&a.confidence, &b.confidence)
            .then_with(|| a.term.cmp(&b.term))
            .then_with(|| a.rule.cmp(&b.rule))
    });
    Ok(out)
}

fn confidence_rank(a: &MetricValue, b: &MetricValue) -> std::cmp::Ordering {
    let class = |v: &MetricValue| match v {
        MetricValue::Infinity => 0u8,
        MetricValue::Rational(_) => 1,
        MetricValue::Undefined(_) => 2,
    };
    match (a, b) {
        (MetricValue::Rational(x), MetricValue::Rational(y)) => y.cmp(x),
        _ => class(a).cmp(&class(b)),
    }
}
