//! Graph patterns: triples over terms and variables.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{tokenize_line, write_token, Graph, Triple};
use crate::term::{Term, TermOrVar, Variable};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub s: TermOrVar,
    pub p: TermOrVar,
    pub o: TermOrVar,
}

impl TriplePattern {
    pub fn new(s: impl Into<TermOrVar>, p: impl Into<TermOrVar>, o: impl Into<TermOrVar>) -> Self {
        TriplePattern {
            s: s.into(),
            p: p.into(),
            o: o.into(),
        }
    }

    pub fn positions(&self) -> [TermOrVar; 3] {
        [self.s, self.p, self.o]
    }

    pub fn as_triple(&self) -> Option<Triple> {
        match (self.s, self.p, self.o) {
            (TermOrVar::Term(s), TermOrVar::Term(p), TermOrVar::Term(o)) => {
                Some(Triple::new(s, p, o))
            }
            _ => None,
        }
    }
}

impl fmt::Debug for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} {:?} {:?})", self.s, self.p, self.o)
    }
}

/// A set of triple patterns, stored in canonical (sorted, deduplicated)
/// order, together with its derived variable and term sets.
///
/// Within one pattern a label is either a variable or a term, never both.
#[derive(Clone, Eq)]
pub struct Pattern {
    tps: Vec<TriplePattern>,
    vars: HashSet<Variable>,
    terms: HashSet<Term>,
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.tps == other.tps
    }
}

/// Hash over the canonical triple-pattern list only; the derived sets
/// are functions of it.
impl std::hash::Hash for Pattern {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.tps.hash(state);
    }
}

impl Pattern {
    pub fn new<I: IntoIterator<Item = TriplePattern>>(tps: I) -> Result<Pattern> {
        let mut tps: Vec<TriplePattern> = tps.into_iter().collect();
        tps.sort();
        tps.dedup();
        let mut vars = HashSet::new();
        let mut terms = HashSet::new();
        for tp in &tps {
            for pos in tp.positions() {
                match pos {
                    TermOrVar::Term(t) => {
                        terms.insert(t);
                    }
                    TermOrVar::Var(v) => {
                        vars.insert(v);
                    }
                }
            }
        }
        for v in &vars {
            if terms.contains(&Term::new(v.name())) {
                return Err(Error::NameClash {
                    label: v.name().to_owned(),
                });
            }
        }
        Ok(Pattern { tps, vars, terms })
    }

    pub fn len(&self) -> usize {
        self.tps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tps.is_empty()
    }

    pub fn triple_patterns(&self) -> &[TriplePattern] {
        &self.tps
    }

    /// The derived variable set.
    pub fn variables(&self) -> &HashSet<Variable> {
        &self.vars
    }

    /// The derived term set.
    pub fn term_set(&self) -> &HashSet<Term> {
        &self.terms
    }

    /// Variables in canonical (lexicographic) order.
    pub fn sorted_variables(&self) -> Vec<Variable> {
        let mut vs: Vec<Variable> = self.vars.iter().copied().collect();
        vs.sort();
        vs
    }

    /// Some variable occurs in predicate position.
    pub fn has_predicate_variable(&self) -> Option<Variable> {
        self.tps.iter().find_map(|tp| tp.p.as_var())
    }

    /// Converts to a graph when no variables remain.
    pub fn as_graph(&self) -> Option<Graph> {
        if !self.vars.is_empty() {
            return None;
        }
        Some(Graph::new(self.tps.iter().filter_map(|tp| tp.as_triple())))
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.tps).finish()
    }
}

fn parse_position(tok: &crate::graph::Token, lineno: usize) -> Result<TermOrVar> {
    if tok.quoted {
        return Ok(TermOrVar::Term(Term::new(&tok.text)));
    }
    if let Some(name) = tok.text.strip_prefix('?') {
        if name.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                msg: "empty variable name".into(),
            });
        }
        Ok(TermOrVar::Var(Variable::new(name)))
    } else {
        Ok(TermOrVar::Term(Term::new(&tok.text)))
    }
}

pub(crate) fn parse_triple_pattern_line(line: &str, lineno: usize) -> Result<TriplePattern> {
    let tokens = tokenize_line(line, lineno)?;
    if tokens.len() != 3 {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("expected 3 tokens, found {}", tokens.len()),
        });
    }
    Ok(TriplePattern {
        s: parse_position(&tokens[0], lineno)?,
        p: parse_position(&tokens[1], lineno)?,
        o: parse_position(&tokens[2], lineno)?,
    })
}

/// Parses a pattern block: the triple syntax of graph files with `?var`
/// tokens marking variables.
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let mut tps = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        tps.push(parse_triple_pattern_line(line, lineno)?);
    }
    Pattern::new(tps)
}

fn write_position(pos: TermOrVar) -> String {
    match pos {
        TermOrVar::Term(t) => write_token(t.label()),
        TermOrVar::Var(v) => format!("?{}", v.name()),
    }
}

/// One triple pattern per line in canonical order.
pub fn serialize_pattern(p: &Pattern) -> String {
    let mut out = String::new();
    for tp in p.triple_patterns() {
        out.push_str(&write_position(tp.s));
        out.push(' ');
        out.push_str(&write_position(tp.p));
        out.push(' ');
        out.push_str(&write_position(tp.o));
        out.push('\n');
    }
    out
}
