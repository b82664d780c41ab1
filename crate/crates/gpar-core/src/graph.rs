//! Triples, graphs, graph bags, and their textual formats.
//!
//! A graph is a set of `(subject, predicate, object)` term triples. Nodes
//! are identified by their labels, edges by whole triples, so containment
//! of one graph in another is the plain subset test.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::term::Term;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub s: Term,
    pub p: Term,
    pub o: Term,
}

impl Triple {
    pub fn new(s: Term, p: Term, o: Term) -> Triple {
        Triple { s, p, o }
    }

    pub fn terms(&self) -> [Term; 3] {
        [self.s, self.p, self.o]
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.s, self.p, self.o)
    }
}

#[derive(Default)]
struct TripleIndex {
    by_s: HashMap<Term, Vec<Triple>>,
    by_p: HashMap<Term, Vec<Triple>>,
    by_o: HashMap<Term, Vec<Triple>>,
}

/// An immutable directed labeled multigraph.
pub struct Graph {
    triples: HashSet<Triple>,
    terms: HashSet<Term>,
    index: OnceLock<TripleIndex>,
}

impl Graph {
    pub fn new<I: IntoIterator<Item = Triple>>(triples: I) -> Graph {
        let triples: HashSet<Triple> = triples.into_iter().collect();
        let terms = triples.iter().flat_map(|t| t.terms()).collect();
        Graph {
            triples,
            terms,
            index: OnceLock::new(),
        }
    }

    pub fn empty() -> Graph {
        Graph::new([])
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    /// The subset test: every triple of `sub` is a triple of `self`.
    pub fn contains_subgraph(&self, sub: &Graph) -> bool {
        sub.triples.iter().all(|t| self.triples.contains(t))
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// The set of terms occurring in the graph.
    pub fn term_set(&self) -> &HashSet<Term> {
        &self.terms
    }

    pub fn union(&self, extra: impl IntoIterator<Item = Triple>) -> Graph {
        Graph::new(self.triples.iter().copied().chain(extra))
    }

    fn index(&self) -> &TripleIndex {
        self.index.get_or_init(|| {
            let mut idx = TripleIndex::default();
            for &t in &self.triples {
                idx.by_s.entry(t.s).or_default().push(t);
                idx.by_p.entry(t.p).or_default().push(t);
                idx.by_o.entry(t.o).or_default().push(t);
            }
            idx
        })
    }

    pub(crate) fn triples_with_subject(&self, s: Term) -> &[Triple] {
        self.index().by_s.get(&s).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn triples_with_predicate(&self, p: Term) -> &[Triple] {
        self.index().by_p.get(&p).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn triples_with_object(&self, o: Term) -> &[Triple] {
        self.index().by_o.get(&o).map_or(&[], Vec::as_slice)
    }

    /// Triples sorted by `(s, p, o)` labels.
    pub fn sorted_triples(&self) -> Vec<Triple> {
        let mut ts: Vec<Triple> = self.triples.iter().copied().collect();
        ts.sort();
        ts
    }
}

impl Clone for Graph {
    fn clone(&self) -> Graph {
        Graph {
            triples: self.triples.clone(),
            terms: self.terms.clone(),
            index: OnceLock::new(),
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sorted_triples()).finish()
    }
}

/// An ordered bag of identified graphs. Duplicate graphs are allowed,
/// identifiers are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphBag {
    entries: Vec<(String, Graph)>,
}

impl GraphBag {
    pub fn new(entries: Vec<(String, Graph)>) -> Result<GraphBag> {
        let mut seen = HashSet::new();
        for (id, _) in &entries {
            if !seen.insert(id.clone()) {
                return Err(Error::Contract(format!("duplicate graph id `{id}`")));
            }
        }
        Ok(GraphBag { entries })
    }

    pub fn singleton(id: &str, g: Graph) -> GraphBag {
        GraphBag {
            entries: vec![(id.to_owned(), g)],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, Graph)> {
        self.entries.iter()
    }
}

/// A parsed token; quoted tokens always denote terms, so `?` keeps no
/// special meaning inside quotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub text: String,
    pub quoted: bool,
}

/// Splits one line into whitespace-separated tokens. A token may be
/// quoted (`"..."`) to admit whitespace; inside quotes `\"` and `\\`
/// escape the quote and the backslash.
pub(crate) fn tokenize_line(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
            chars.next();
        }
        let Some(&first) = chars.peek() else { break };
        if first == '"' {
            chars.next();
            let mut tok = String::new();
            let mut closed = false;
            while let Some(c) = chars.next() {
                match c {
                    '\\' => match chars.next() {
                        Some('"') => tok.push('"'),
                        Some('\\') => tok.push('\\'),
                        _ => {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: "invalid escape in quoted token".into(),
                            })
                        }
                    },
                    '"' => {
                        closed = true;
                        break;
                    }
                    c => tok.push(c),
                }
            }
            if !closed {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "unterminated quoted token".into(),
                });
            }
            if matches!(chars.peek(), Some(c) if !c.is_whitespace()) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "quoted token must be followed by whitespace".into(),
                });
            }
            tokens.push(Token {
                text: tok,
                quoted: true,
            });
        } else {
            let mut tok = String::new();
            while matches!(chars.peek(), Some(c) if !c.is_whitespace()) {
                tok.push(chars.next().unwrap());
            }
            tokens.push(Token {
                text: tok,
                quoted: false,
            });
        }
    }
    Ok(tokens)
}

/// Renders a label as a file token, quoting whenever the bare form would
/// not read back as the same label.
pub(crate) fn write_token(label: &str) -> String {
    let needs_quoting = label.is_empty()
        || label.starts_with('?')
        || label.starts_with('#')
        || label.starts_with('"')
        || label.chars().any(|c| c.is_whitespace() || c == '"' || c == '\\');
    if !needs_quoting {
        return label.to_owned();
    }
    let mut out = String::with_capacity(label.len() + 2);
    out.push('"');
    for c in label.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn is_comment_or_blank(line: &str) -> bool {
    let trimmed = line.trim_start();
    trimmed.is_empty() || trimmed.starts_with('#')
}

/// Parses the graph file format: one triple per line, three tokens,
/// `#`-prefixed lines are comments, blank lines are ignored. Duplicate
/// lines collapse to one triple.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut triples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if is_comment_or_blank(line) {
            continue;
        }
        triples.push(parse_triple_line(line, lineno)?);
    }
    Ok(Graph::new(triples))
}

fn parse_triple_line(line: &str, lineno: usize) -> Result<Triple> {
    let tokens = tokenize_line(line, lineno)?;
    if tokens.len() != 3 {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("expected 3 tokens, found {}", tokens.len()),
        });
    }
    let mut terms = [Term::new(""); 3];
    for (slot, tok) in terms.iter_mut().zip(&tokens) {
        if !tok.quoted && tok.text.starts_with('?') {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("variable token `{}` is not allowed in a graph", tok.text),
            });
        }
        *slot = Term::new(&tok.text);
    }
    Ok(Triple::new(terms[0], terms[1], terms[2]))
}

/// One triple per line, sorted lexicographically by `(s, p, o)` labels.
/// Round-trips through [`parse_graph`] for every graph.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    for t in g.sorted_triples() {
        out.push_str(&write_token(t.s.label()));
        out.push(' ');
        out.push_str(&write_token(t.p.label()));
        out.push(' ');
        out.push_str(&write_token(t.o.label()));
        out.push('\n');
    }
    out
}

/// Parses the graph-bag format: `@graph <id>` starts a new graph, triples
/// follow until the next header or end of file.
pub fn parse_graph_bag(text: &str) -> Result<GraphBag> {
    let mut entries: Vec<(String, Vec<Triple>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if is_comment_or_blank(line) {
            continue;
        }
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("@graph") {
            let id = rest.trim();
            if id.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "@graph header without an id".into(),
                });
            }
            entries.push((id.to_owned(), Vec::new()));
        } else {
            let triple = parse_triple_line(line, lineno)?;
            match entries.last_mut() {
                Some((_, ts)) => ts.push(triple),
                None => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "triple before the first @graph header".into(),
                    })
                }
            }
        }
    }
    GraphBag::new(
        entries
            .into_iter()
            .map(|(id, ts)| (id, Graph::new(ts)))
            .collect(),
    )
}

pub fn serialize_graph_bag(bag: &GraphBag) -> String {
    let mut out = String::new();
    for (id, g) in bag.iter() {
        out.push_str("@graph ");
        out.push_str(id);
        out.push('\n');
        out.push_str(&serialize_graph(g));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(l: &str) -> Term {
        Term::new(l)
    }

    #[test]
    fn parse_basic_graph() {
        let g = parse_graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.term_set().len(), 5);
    }

    #[test]
    fn empty_text_is_empty_graph() {
        assert!(parse_graph("").unwrap().is_empty());
    }

    #[test]
    fn duplicate_lines_collapse() {
        let g = parse_graph("a b c\na b c").unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let g = parse_graph("# heading\n\na b c\n  # indented comment\n").unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_graph("a b c\na b").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                msg: "expected 3 tokens, found 2".into()
            }
        );
    }

    #[test]
    fn variable_token_is_rejected() {
        let err = parse_graph("?x b c").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn quoted_tokens_admit_whitespace_and_escapes() {
        let g = parse_graph(r#"t1 label "Alice Smith""#).unwrap();
        assert!(g.term_set().contains(&t("Alice Smith")));
        let g = parse_graph(r#"t1 label "\"Alice\"""#).unwrap();
        assert!(g.term_set().contains(&t("\"Alice\"")));
    }

    #[test]
    fn serialization_is_sorted_and_round_trips() {
        let text = "Bob coauthorOf Alice\nAlice worksAt Org\nAlice coauthorOf Bob";
        let g = parse_graph(text).unwrap();
        let s = serialize_graph(&g);
        assert!(s.starts_with("Alice coauthorOf Bob\n"));
        assert_eq!(parse_graph(&s).unwrap(), g);
    }

    #[test]
    fn subgraph_containment() {
        let host = parse_graph("a b c\nd e f").unwrap();
        let sub = parse_graph("a b c").unwrap();
        assert!(host.contains_subgraph(&sub));
        assert!(host.contains_subgraph(&Graph::empty()));
        assert!(!sub.contains_subgraph(&host));
        let other = parse_graph("a b d").unwrap();
        assert!(!host.contains_subgraph(&other));
    }

    #[test]
    fn term_set_matches_recomputation() {
        let g = parse_graph("a b c\nc d a").unwrap();
        let recomputed: std::collections::HashSet<Term> =
            g.triples().flat_map(|t| t.terms()).collect();
        assert_eq!(*g.term_set(), recomputed);
    }

    #[test]
    fn bag_requires_headers_and_distinct_ids() {
        let bag = parse_graph_bag("@graph g1\na b c\n@graph g2\na b c").unwrap();
        assert_eq!(bag.len(), 2);
        assert!(parse_graph_bag("a b c").is_err());
        assert!(parse_graph_bag("@graph g1\n@graph g1").is_err());
    }
}
