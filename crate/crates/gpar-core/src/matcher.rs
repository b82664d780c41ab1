//! Pattern evaluation under homomorphism and no-repeated-anything
//! semantics.
//!
//! The matcher runs a backtracking search over triple patterns. At each
//! step it picks the unmatched triple pattern with the fewest candidate
//! triples under the current bindings, using per-graph indexes on
//! subject, predicate, and object. Under nra semantics a binding is
//! rejected as soon as its term is already bound to another variable or
//! occurs in the pattern's term set.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Triple};
use crate::pattern::{Pattern, TriplePattern};
use crate::term::{Term, TermOrVar, Variable};

/// Graph pattern evaluation semantics.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Semantics {
    /// Any assignment whose embedding is contained in the graph.
    Hom,
    /// Injective assignments that avoid the pattern's own terms.
    Nra,
}

impl Semantics {
    pub fn parse(s: &str) -> Option<Semantics> {
        match s {
            "hom" => Some(Semantics::Hom),
            "nra" => Some(Semantics::Nra),
            _ => None,
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Hom => write!(f, "hom"),
            Semantics::Nra => write!(f, "nra"),
        }
    }
}

/// A variable-to-term assignment, total on the variables of the pattern
/// it was produced for. Only variable bindings are stored; terms map to
/// themselves.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mapping {
    // Sorted by variable name; the canonical order of the domain.
    bindings: Vec<(Variable, Term)>,
}

impl Mapping {
    pub fn new(mut bindings: Vec<(Variable, Term)>) -> Mapping {
        bindings.sort_by_key(|(v, _)| *v);
        Mapping { bindings }
    }

    pub fn get(&self, v: Variable) -> Option<Term> {
        self.bindings
            .binary_search_by_key(&v, |(bv, _)| *bv)
            .ok()
            .map(|i| self.bindings[i].1)
    }

    pub fn bindings(&self) -> &[(Variable, Term)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// The bound terms in canonical variable order; the sort key for
    /// deterministic match output.
    fn term_row(&self) -> Vec<Term> {
        self.bindings.iter().map(|&(_, t)| t).collect()
    }

    /// Substitutes bound variables in a pattern; unbound variables pass
    /// through.
    pub fn apply(&self, p: &Pattern) -> Pattern {
        let tps = p.triple_patterns().iter().map(|tp| {
            let map = |pos: TermOrVar| match pos {
                TermOrVar::Var(v) => match self.get(v) {
                    Some(t) => TermOrVar::Term(t),
                    None => pos,
                },
                TermOrVar::Term(_) => pos,
            };
            TriplePattern {
                s: map(tp.s),
                p: map(tp.p),
                o: map(tp.o),
            }
        });
        // Substitution cannot introduce a variable/term name clash: it
        // only removes variables.
        Pattern::new(tps).expect("substitution preserves pattern validity")
    }
}

/// Substitutes a mapping into a pattern (`apply_mapping`).
pub fn apply_mapping(mapping: &Mapping, p: &Pattern) -> Pattern {
    mapping.apply(p)
}

struct Search<'a> {
    graph: &'a Graph,
    pattern_terms: &'a HashSet<Term>,
    semantics: Semantics,
    tps: Vec<TriplePattern>,
    matched: Vec<bool>,
    binding: HashMap<Variable, Term>,
    used: HashSet<Term>,
    results: Vec<Mapping>,
    stop_after_first: bool,
    done: bool,
}

impl<'a> Search<'a> {
    fn candidates(&self, tp: &TriplePattern) -> Vec<Triple> {
        // Resolve each position to a term if it is ground under the
        // current binding.
        let resolve = |pos: TermOrVar| -> Option<Term> {
            match pos {
                TermOrVar::Term(t) => Some(t),
                TermOrVar::Var(v) => self.binding.get(&v).copied(),
            }
        };
        let s = resolve(tp.s);
        let p = resolve(tp.p);
        let o = resolve(tp.o);
        // Scan the smallest index among the ground positions.
        let pool: &[Triple] = match (s, p, o) {
            (Some(s), _, _) => {
                let by_s = self.graph.triples_with_subject(s);
                let by_p = p.map(|p| self.graph.triples_with_predicate(p));
                let by_o = o.map(|o| self.graph.triples_with_object(o));
                [Some(by_s), by_p, by_o]
                    .into_iter()
                    .flatten()
                    .min_by_key(|ts| ts.len())
                    .unwrap()
            }
            (None, Some(p), _) => {
                let by_p = self.graph.triples_with_predicate(p);
                match o.map(|o| self.graph.triples_with_object(o)) {
                    Some(by_o) if by_o.len() < by_p.len() => by_o,
                    _ => by_p,
                }
            }
            (None, None, Some(o)) => self.graph.triples_with_object(o),
            (None, None, None) => {
                return self
                    .graph
                    .triples()
                    .copied()
                    .filter(|t| self.unifies(tp, t))
                    .collect()
            }
        };
        pool.iter()
            .copied()
            .filter(|t| self.unifies(tp, t))
            .collect()
    }

    /// Whether the triple is consistent with the triple pattern under the
    /// current bindings, including the nra injectivity checks for any
    /// fresh binding.
    fn unifies(&self, tp: &TriplePattern, triple: &Triple) -> bool {
        let pairs = [(tp.s, triple.s), (tp.p, triple.p), (tp.o, triple.o)];
        // Fresh bindings introduced by this triple, to catch repeats
        // within the triple itself (e.g. ?a ?a x against distinct terms).
        let mut fresh: Vec<(Variable, Term)> = Vec::new();
        for (pos, term) in pairs {
            match pos {
                TermOrVar::Term(t) => {
                    if t != term {
                        return false;
                    }
                }
                TermOrVar::Var(v) => {
                    let bound = self
                        .binding
                        .get(&v)
                        .copied()
                        .or_else(|| fresh.iter().find(|(fv, _)| *fv == v).map(|&(_, t)| t));
                    match bound {
                        Some(b) => {
                            if b != term {
                                return false;
                            }
                        }
                        None => {
                            if self.semantics == Semantics::Nra {
                                let repeated = self.used.contains(&term)
                                    || fresh.iter().any(|&(_, t)| t == term);
                                if repeated || self.pattern_terms.contains(&term) {
                                    return false;
                                }
                            }
                            fresh.push((v, term));
                        }
                    }
                }
            }
        }
        true
    }

    fn step(&mut self) {
        if self.done {
            return;
        }
        // Pick the unmatched triple pattern with the fewest candidates.
        let mut best: Option<(usize, Vec<Triple>)> = None;
        for i in 0..self.tps.len() {
            if self.matched[i] {
                continue;
            }
            let cands = self.candidates(&self.tps[i]);
            let better = match &best {
                Some((_, b)) => cands.len() < b.len(),
                None => true,
            };
            if better {
                let empty = cands.is_empty();
                best = Some((i, cands));
                if empty {
                    break;
                }
            }
        }
        let Some((idx, candidates)) = best else {
            // All triple patterns matched: emit the complete mapping.
            self.results.push(Mapping::new(
                self.binding.iter().map(|(&v, &t)| (v, t)).collect(),
            ));
            if self.stop_after_first {
                self.done = true;
            }
            return;
        };
        self.matched[idx] = true;
        let tp = self.tps[idx];
        for triple in candidates {
            let mut fresh = Vec::new();
            for (pos, term) in [(tp.s, triple.s), (tp.p, triple.p), (tp.o, triple.o)] {
                if let TermOrVar::Var(v) = pos {
                    if !self.binding.contains_key(&v) {
                        self.binding.insert(v, term);
                        self.used.insert(term);
                        fresh.push((v, term));
                    }
                }
            }
            self.step();
            for (v, t) in fresh {
                self.binding.remove(&v);
                self.used.remove(&t);
            }
            if self.done {
                break;
            }
        }
        self.matched[idx] = false;
    }
}

fn run_search(
    p: &Pattern,
    g: &Graph,
    semantics: Semantics,
    pre_bound: &[(Variable, Term)],
    stop_after_first: bool,
) -> Result<Vec<Mapping>> {
    if p.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let mut binding = HashMap::new();
    let mut used = HashSet::new();
    for &(v, t) in pre_bound {
        if semantics == Semantics::Nra && (used.contains(&t) || p.term_set().contains(&t)) {
            // The constrained sequence can never correspond to an
            // injective match.
            return Ok(Vec::new());
        }
        binding.insert(v, t);
        used.insert(t);
    }
    let mut search = Search {
        graph: g,
        pattern_terms: p.term_set(),
        semantics,
        tps: p.triple_patterns().to_vec(),
        matched: vec![false; p.len()],
        binding,
        used,
        results: Vec::new(),
        stop_after_first,
        done: false,
    };
    search.step();
    let mut results = search.results;
    results.sort_by(|a, b| a.term_row().cmp(&b.term_row()));
    Ok(results)
}

/// Evaluates a pattern against a graph, producing the full match set in
/// deterministic order (sorted by bound terms under the canonical
/// variable order).
pub fn evaluate(p: &Pattern, g: &Graph, semantics: Semantics) -> Result<Vec<Mapping>> {
    run_search(p, g, semantics, &[], false)
}

/// Projects a match set onto a variable sequence, deduplicating the
/// resulting term tuples.
pub fn project(matches: &[Mapping], vars: &[Variable]) -> Result<HashSet<Vec<Term>>> {
    let mut out = HashSet::new();
    for m in matches {
        let mut row = Vec::with_capacity(vars.len());
        for &v in vars {
            match m.get(v) {
                Some(t) => row.push(t),
                None => {
                    return Err(Error::Contract(format!(
                        "variable ?{} is not bound by the mapping",
                        v.name()
                    )))
                }
            }
        }
        out.insert(row);
    }
    Ok(out)
}

/// The correspondence predicate: whether some match of `p` on `g` binds
/// the variable sequence to exactly the given term sequence. Implemented
/// as constrained evaluation with the sequence pre-bound.
pub fn sequence_matches(
    g: &Graph,
    tuple: &[Term],
    p: &Pattern,
    vars: &[Variable],
    semantics: Semantics,
) -> Result<bool> {
    if tuple.len() != vars.len() {
        return Err(Error::Contract(format!(
            "term sequence length {} does not match variable sequence length {}",
            tuple.len(),
            vars.len()
        )));
    }
    let mut seen = HashSet::new();
    if !vars.iter().all(|v| seen.insert(*v)) {
        return Err(Error::Contract(
            "variable sequence must be non-repetitive".into(),
        ));
    }
    for v in vars {
        if !p.variables().contains(v) {
            return Err(Error::Contract(format!(
                "variable ?{} does not occur in the pattern",
                v.name()
            )));
        }
    }
    let pre: Vec<(Variable, Term)> = vars.iter().copied().zip(tuple.iter().copied()).collect();
    let found = run_search(p, g, semantics, &pre, true)?;
    Ok(!found.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::pattern::parse_pattern;

    fn names(m: &Mapping) -> Vec<(String, String)> {
        m.bindings()
            .iter()
            .map(|(v, t)| (v.name().to_owned(), t.label().to_owned()))
            .collect()
    }

    #[test]
    fn self_loop_matches_under_hom_not_nra() {
        let g = parse_graph("t1 t2 t1").unwrap();
        let p = parse_pattern("?v1 ?v2 ?v3").unwrap();
        let hom = evaluate(&p, &g, Semantics::Hom).unwrap();
        assert_eq!(hom.len(), 1);
        assert_eq!(
            names(&hom[0]),
            vec![
                ("v1".into(), "t1".into()),
                ("v2".into(), "t2".into()),
                ("v3".into(), "t1".into())
            ]
        );
        assert!(evaluate(&p, &g, Semantics::Nra).unwrap().is_empty());
    }

    #[test]
    fn embedding_may_shrink_under_hom_only() {
        let g = parse_graph("t1 t2 t3").unwrap();
        let p = parse_pattern("?v1 t2 ?v2\n?v3 t2 ?v2").unwrap();
        let hom = evaluate(&p, &g, Semantics::Hom).unwrap();
        assert_eq!(hom.len(), 1);
        let m = &hom[0];
        assert_eq!(m.get(Variable::new("v1")), m.get(Variable::new("v3")));
        assert!(evaluate(&p, &g, Semantics::Nra).unwrap().is_empty());
    }

    #[test]
    fn coauthor_pattern_matches_exactly_once() {
        let g = parse_graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org").unwrap();
        let p = parse_pattern("?v1 coauthorOf ?v2\n?v2 coauthorOf ?v1\n?v1 worksAt ?v3").unwrap();
        let nra = evaluate(&p, &g, Semantics::Nra).unwrap();
        assert_eq!(nra.len(), 1);
        assert_eq!(
            names(&nra[0]),
            vec![
                ("v1".into(), "Alice".into()),
                ("v2".into(), "Bob".into()),
                ("v3".into(), "Org".into())
            ]
        );
    }

    #[test]
    fn empty_pattern_is_an_error() {
        let g = parse_graph("a b c").unwrap();
        let p = Pattern::new([]).unwrap();
        assert_eq!(evaluate(&p, &g, Semantics::Nra), Err(Error::EmptyPattern));
    }

    #[test]
    fn variables_in_predicate_position_match() {
        let g = parse_graph("Alice knows Bob\nBob knows Alice").unwrap();
        let p = parse_pattern("?v1 ?v2 ?v3\n?v3 ?v2 ?v1").unwrap();
        let nra = evaluate(&p, &g, Semantics::Nra).unwrap();
        assert_eq!(nra.len(), 2);
        for m in &nra {
            assert_eq!(m.get(Variable::new("v2")).unwrap().label(), "knows");
        }
    }

    #[test]
    fn projection_deduplicates() {
        let g = parse_graph("a p x\nb p x").unwrap();
        let p = parse_pattern("?s p ?o").unwrap();
        let ms = evaluate(&p, &g, Semantics::Nra).unwrap();
        assert_eq!(ms.len(), 2);
        let proj = project(&ms, &[Variable::new("o")]).unwrap();
        assert_eq!(proj.len(), 1);
        assert!(project(&ms, &[Variable::new("missing")]).is_err());
        assert!(project(&[], &[Variable::new("o")]).unwrap().is_empty());
    }

    #[test]
    fn sequence_predicate_agrees_with_projection() {
        let g = parse_graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org").unwrap();
        let p = parse_pattern("?v1 coauthorOf ?v2\n?v2 coauthorOf ?v1\n?v1 worksAt ?v3").unwrap();
        let v2 = Variable::new("v2");
        let v3 = Variable::new("v3");
        let bob = Term::new("Bob");
        let alice = Term::new("Alice");
        let org = Term::new("Org");
        assert!(sequence_matches(&g, &[bob, org], &p, &[v2, v3], Semantics::Nra).unwrap());
        assert!(!sequence_matches(&g, &[alice, org], &p, &[v2, v3], Semantics::Nra).unwrap());
        // A repeated term can never correspond to an injective match.
        assert!(!sequence_matches(&g, &[bob, bob], &p, &[v2, v3], Semantics::Nra).unwrap());
        assert!(sequence_matches(&g, &[bob], &p, &[v2, v3], Semantics::Nra).is_err());
    }

    #[test]
    fn apply_mapping_substitutes_bound_variables() {
        let g = parse_graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org").unwrap();
        let p1 = parse_pattern("?v1 coauthorOf ?v2\n?v2 coauthorOf ?v1\n?v1 worksAt ?v3").unwrap();
        let p2 = parse_pattern("?v2 worksAt ?v3").unwrap();
        let m = &evaluate(&p1, &g, Semantics::Nra).unwrap()[0];
        let applied = apply_mapping(m, &p2);
        let as_graph = applied.as_graph().unwrap();
        assert_eq!(as_graph, parse_graph("Bob worksAt Org").unwrap());
        // Identity on a ground pattern.
        let ground = parse_pattern("a b c").unwrap();
        assert_eq!(apply_mapping(m, &ground), ground);
    }
}
