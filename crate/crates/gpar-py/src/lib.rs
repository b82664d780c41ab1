//! Python bindings: graphs, patterns, rules, matching, metrics, rule
//! application, and exports, mirroring the CLI surface in-process.
//!
//! Exact rational metric values cross the boundary as strings (`p/q`,
//! `inf`, or `undef:<reason>`) so no precision is lost.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gpar_core::apply;
use gpar_core::export;
use gpar_core::graph;
use gpar_core::matcher;
use gpar_core::metrics;
use gpar_core::reframe;
use gpar_core::rule;
use gpar_core::term::Term;
use gpar_core::value::MetricValue;

fn value_error(e: gpar_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_semantics(s: &str) -> PyResult<matcher::Semantics> {
    matcher::Semantics::parse(s)
        .ok_or_else(|| PyValueError::new_err(format!("unknown semantics `{s}` (nra|hom)")))
}

/// A directed labeled multigraph: a set of (subject, predicate, object)
/// term triples.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Graph {
    inner: graph::Graph,
}

#[pymethods]
impl Graph {
    /// Parse the graph file format (one triple per line).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Graph> {
        Ok(Graph {
            inner: graph::parse_graph(text).map_err(value_error)?,
        })
    }

    /// One triple per line, sorted; parses back to an equal graph.
    fn serialize(&self) -> String {
        graph::serialize_graph(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Graph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph({} triples)", self.inner.len())
    }

    /// All term labels occurring in the graph, sorted.
    fn terms(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .inner
            .term_set()
            .iter()
            .map(|t| t.label().to_owned())
            .collect();
        labels.sort();
        labels
    }

    /// Subset test: does this graph contain every triple of `other`?
    fn contains(&self, other: &Graph) -> bool {
        self.inner.contains_subgraph(&other.inner)
    }

    fn union(&self, other: &Graph) -> Graph {
        Graph {
            inner: self.inner.union(other.inner.triples().copied()),
        }
    }
}

/// A graph pattern: triples over terms and `?variables`.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Pattern {
    inner: gpar_core::Pattern,
}

#[pymethods]
impl Pattern {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Pattern> {
        Ok(Pattern {
            inner: gpar_core::parse_pattern(text).map_err(value_error)?,
        })
    }

    fn serialize(&self) -> String {
        gpar_core::serialize_pattern(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Pattern({} triple patterns)", self.inner.len())
    }

    fn variables(&self) -> Vec<String> {
        self.inner
            .sorted_variables()
            .iter()
            .map(|v| v.name().to_owned())
            .collect()
    }

    fn terms(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .inner
            .term_set()
            .iter()
            .map(|t| t.label().to_owned())
            .collect();
        labels.sort();
        labels
    }
}

/// A rule: antecedent and consequent patterns plus join sequences.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Rule {
    inner: rule::Rule,
}

#[pymethods]
impl Rule {
    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn antecedent(&self) -> Pattern {
        Pattern {
            inner: self.inner.antecedent.clone(),
        }
    }

    #[getter]
    fn consequent(&self) -> Pattern {
        Pattern {
            inner: self.inner.consequent.clone(),
        }
    }

    /// Structural violations; empty when the rule is well-formed.
    fn validate(&self) -> Vec<String> {
        self.inner.validate()
    }

    /// The simplified two-pattern form, serialized in the rule file
    /// format.
    fn rewrite(&self) -> PyResult<String> {
        let simplified = rule::to_simplified(&self.inner).map_err(value_error)?;
        Ok(rule::serialize_simplified(&[simplified]))
    }

    /// `(trivial, witness)` where the witness maps consequent variables
    /// and terms into the antecedent.
    fn is_trivial(&self) -> (bool, Option<String>) {
        match rule::is_trivial(&self.inner) {
            (true, Some(w)) => (true, Some(w.to_string())),
            _ => (false, None),
        }
    }

    #[pyo3(signature = (namespace = "http://example.org#"))]
    fn to_sparql(&self, namespace: &str) -> PyResult<String> {
        let simplified = rule::to_simplified(&self.inner).map_err(value_error)?;
        Ok(export::to_sparql_construct(&simplified, namespace))
    }

    #[pyo3(signature = (namespace = "http://example.org#"))]
    fn to_swrl(&self, namespace: &str) -> PyResult<String> {
        let simplified = rule::to_simplified(&self.inner).map_err(value_error)?;
        export::to_swrl(&simplified, namespace).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Rule({})", self.inner.name)
    }
}

/// Parse a rule file (`@rule` blocks) into a list of rules.
#[pyfunction]
fn parse_rules(text: &str) -> PyResult<Vec<Rule>> {
    Ok(rule::parse_rules(text)
        .map_err(value_error)?
        .into_iter()
        .map(|inner| Rule { inner })
        .collect())
}

/// An ordered bag of identified graphs.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct GraphBag {
    inner: graph::GraphBag,
}

#[pymethods]
impl GraphBag {
    /// Parse the graph-bag format (`@graph <id>` sections).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<GraphBag> {
        Ok(GraphBag {
            inner: graph::parse_graph_bag(text).map_err(value_error)?,
        })
    }

    /// Build a bag from `(id, Graph)` pairs; ids must be distinct.
    #[staticmethod]
    fn of(entries: Vec<(String, Graph)>) -> PyResult<GraphBag> {
        Ok(GraphBag {
            inner: graph::GraphBag::new(
                entries.into_iter().map(|(id, g)| (id, g.inner)).collect(),
            )
            .map_err(value_error)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn ids(&self) -> Vec<String> {
        self.inner.iter().map(|(id, _)| id.clone()).collect()
    }
}

/// Evaluate a pattern against a graph; one dict per mapping, in
/// deterministic order.
#[pyfunction]
#[pyo3(signature = (pattern, graph, semantics = "nra"))]
fn evaluate(
    py: Python<'_>,
    pattern: &Pattern,
    graph: &Graph,
    semantics: &str,
) -> PyResult<Vec<Py<PyDict>>> {
    let sem = parse_semantics(semantics)?;
    let matches = matcher::evaluate(&pattern.inner, &graph.inner, sem).map_err(value_error)?;
    matches
        .iter()
        .map(|m| {
            let dict = PyDict::new(py);
            for (v, t) in m.bindings() {
                dict.set_item(v.name(), t.label())?;
            }
            Ok(dict.unbind())
        })
        .collect()
}

fn report_to_dict(py: Python<'_>, report: &metrics::MetricReport) -> PyResult<Py<PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("regime", report.regime.to_string())?;
    dict.set_item("tau", report.stats.tuple_space.to_string())?;
    dict.set_item("e1", report.stats.antecedent.to_string())?;
    dict.set_item("e2", report.stats.consequent.to_string())?;
    dict.set_item("joint", report.stats.joint.to_string())?;
    dict.set_item("support1", report.support_antecedent.to_string())?;
    dict.set_item("support2", report.support_consequent.to_string())?;
    dict.set_item("confidence", report.confidence.to_string())?;
    dict.set_item("lift", report.lift.to_string())?;
    dict.set_item("leverage", report.leverage.to_string())?;
    dict.set_item("conviction", report.conviction.to_string())?;
    dict.set_item(
        "conviction_antecedent_scaled",
        report.conviction_antecedent_scaled.to_string(),
    )?;
    if let Some(a) = &report.applicability {
        dict.set_item("applicability", MetricValue::Rational(a.clone()).to_string())?;
    }
    Ok(dict.unbind())
}

/// Metrics for one rule on a single graph; exact values as strings.
#[pyfunction]
fn metrics_single(py: Python<'_>, graph: &Graph, rule: &Rule) -> PyResult<Py<PyDict>> {
    let report = metrics::metrics_single(&graph.inner, &rule.inner).map_err(value_error)?;
    report_to_dict(py, &report)
}

/// Micro-averaged metrics over a bag (pooled counts).
#[pyfunction]
fn metrics_micro(py: Python<'_>, bag: &GraphBag, rule: &Rule) -> PyResult<Py<PyDict>> {
    let report = metrics::metrics_micro(&bag.inner, &rule.inner).map_err(value_error)?;
    report_to_dict(py, &report)
}

/// Macro-averaged metrics over a bag (mean of per-graph values).
#[pyfunction]
fn metrics_macro(py: Python<'_>, bag: &GraphBag, rule: &Rule) -> PyResult<Py<PyDict>> {
    let report = metrics::metrics_macro(&bag.inner, &rule.inner).map_err(value_error)?;
    report_to_dict(py, &report)
}

/// Apply every rule once, simultaneously over all matches.
#[pyfunction]
fn extend_once(graph: &Graph, rules: Vec<Rule>) -> PyResult<Graph> {
    let simplified = simplify(&rules)?;
    Ok(Graph {
        inner: apply::extend_once_all(&graph.inner, &simplified).map_err(value_error)?,
    })
}

/// Iterate extension to a fixpoint; returns `(graph, steps, fixpoint)`.
#[pyfunction]
#[pyo3(signature = (graph, rules, max_steps = 1000))]
fn closure(graph: &Graph, rules: Vec<Rule>, max_steps: usize) -> PyResult<(Graph, usize, bool)> {
    let simplified = simplify(&rules)?;
    let result = apply::closure(&graph.inner, &simplified, max_steps).map_err(value_error)?;
    Ok((
        Graph {
            inner: result.graph,
        },
        result.steps,
        result.fixpoint,
    ))
}

/// Instantiated consequents of every antecedent match, serialized.
#[pyfunction]
fn predict_patterns(graph: &Graph, rule: &Rule) -> PyResult<Vec<String>> {
    let simplified = rule::to_simplified(&rule.inner).map_err(value_error)?;
    Ok(apply::predict_patterns(&graph.inner, &simplified)
        .map_err(value_error)?
        .iter()
        .map(gpar_core::serialize_pattern)
        .collect())
}

/// Rank completions for an incomplete triple `"s p o"` with one `?`
/// hole; returns `(term, rule, confidence)` tuples.
#[pyfunction]
fn link_predict(
    graph: &Graph,
    rules: Vec<Rule>,
    query: &str,
) -> PyResult<Vec<(String, String, String)>> {
    let tokens: Vec<&str> = query.split_whitespace().collect();
    if tokens.len() != 3 || tokens.iter().filter(|t| **t == "?").count() != 1 {
        return Err(PyValueError::new_err(
            "query must be three tokens with exactly one `?` hole",
        ));
    }
    let q = match (tokens[0], tokens[1], tokens[2]) {
        ("?", p, o) => apply::TripleQuery::Head {
            relation: Term::new(p),
            tail: Term::new(o),
        },
        (s, "?", o) => apply::TripleQuery::Relation {
            head: Term::new(s),
            tail: Term::new(o),
        },
        (s, p, _) => apply::TripleQuery::Tail {
            head: Term::new(s),
            relation: Term::new(p),
        },
    };
    let simplified = simplify(&rules)?;
    Ok(apply::link_predict(&graph.inner, &simplified, &q)
        .map_err(value_error)?
        .into_iter()
        .map(|p| (p.term.label().to_owned(), p.rule, p.confidence.to_string()))
        .collect())
}

/// Replay a rule as the itemset rule `{A} => {B}` over a generated
/// transaction database and compare every metric exactly.
#[pyfunction]
#[pyo3(signature = (bag, rule, cap = reframe::DEFAULT_CAP))]
fn check_correspondence(
    py: Python<'_>,
    bag: &GraphBag,
    rule: &Rule,
    cap: u64,
) -> PyResult<Py<PyDict>> {
    let report = reframe::check_correspondence(&bag.inner, &rule.inner, cap).map_err(value_error)?;
    let dict = PyDict::new(py);
    dict.set_item("db_size", report.db_size)?;
    dict.set_item("all_equal", report.all_equal)?;
    for pair in &report.pairs {
        dict.set_item(
            pair.name,
            (
                pair.graph_value.to_string(),
                pair.itemset_value.to_string(),
                pair.equal(),
            ),
        )?;
    }
    Ok(dict.unbind())
}

/// Two-stage ranking by applicability, then macro-lift on the reduced
/// bag; returns `(name, applicability, lift)` tuples.
#[pyfunction]
fn rank_rules(bag: &GraphBag, rules: Vec<Rule>) -> PyResult<Vec<(String, String, String)>> {
    let inner: Vec<rule::Rule> = rules.into_iter().map(|r| r.inner).collect();
    Ok(metrics::rank_rules(&bag.inner, &inner)
        .map_err(value_error)?
        .into_iter()
        .map(|r| {
            (
                r.name,
                MetricValue::Rational(r.applicability).to_string(),
                r.lift.to_string(),
            )
        })
        .collect())
}

fn simplify(rules: &[Rule]) -> PyResult<Vec<rule::SimplifiedRule>> {
    rules
        .iter()
        .map(|r| rule::to_simplified(&r.inner).map_err(value_error))
        .collect()
}

#[pymodule]
fn gpar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Pattern>()?;
    m.add_class::<Rule>()?;
    m.add_class::<GraphBag>()?;
    m.add_function(wrap_pyfunction!(parse_rules, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(metrics_single, m)?)?;
    m.add_function(wrap_pyfunction!(metrics_micro, m)?)?;
    m.add_function(wrap_pyfunction!(metrics_macro, m)?)?;
    m.add_function(wrap_pyfunction!(extend_once, m)?)?;
    m.add_function(wrap_pyfunction!(closure, m)?)?;
    m.add_function(wrap_pyfunction!(predict_patterns, m)?)?;
    m.add_function(wrap_pyfunction!(link_predict, m)?)?;
    m.add_function(wrap_pyfunction!(check_correspondence, m)?)?;
    m.add_function(wrap_pyfunction!(rank_rules, m)?)?;
    Ok(())
}
