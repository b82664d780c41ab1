//! Rules over graph patterns: validation, the simplified two-pattern
//! form, and triviality analysis.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::pattern::{parse_triple_pattern_line, serialize_pattern, Pattern, TriplePattern};
use crate::term::{TermOrVar, Variable};

/// A rule `(p1, p2, V1, V2)`: antecedent and consequent patterns joined
/// by two equal-length, non-repetitive sequences of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub antecedent: Pattern,
    pub consequent: Pattern,
    pub join_antecedent: Vec<Variable>,
    pub join_consequent: Vec<Variable>,
}

impl Rule {
    pub fn new(
        name: impl Into<String>,
        antecedent: Pattern,
        consequent: Pattern,
        join_antecedent: Vec<Variable>,
        join_consequent: Vec<Variable>,
    ) -> Rule {
        Rule {
            name: name.into(),
            antecedent,
            consequent,
            join_antecedent,
            join_consequent,
        }
    }

    /// Tuple length `n = |V1|`.
    pub fn join_len(&self) -> usize {
        self.join_antecedent.len()
    }

    /// Checks every structural invariant; an empty list means the rule is
    /// well-formed.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if self.antecedent.variables().is_empty() {
            violations.push("antecedent pattern has no variables".to_owned());
        }
        if self.consequent.variables().is_empty() {
            violations.push("consequent pattern has no variables".to_owned());
        }
        if self.join_antecedent.is_empty() {
            violations.push("empty antecedent join sequence".to_owned());
        }
        if self.join_consequent.is_empty() {
            violations.push("empty consequent join sequence".to_owned());
        }
        if self.join_antecedent.len() != self.join_consequent.len() {
            violations.push("join sequence length mismatch".to_owned());
        }
        for (seq, side, pattern) in [
            (&self.join_antecedent, "antecedent", &self.antecedent),
            (&self.join_consequent, "consequent", &self.consequent),
        ] {
            let mut seen = HashSet::new();
            if !seq.iter().all(|v| seen.insert(*v)) {
                violations.push(format!("repetitive {side} join sequence"));
            }
            for v in seq {
                if !pattern.variables().contains(v) {
                    violations.push(format!(
                        "join variable ?{} does not occur in the {side} pattern",
                        v.name()
                    ));
                }
            }
        }
        violations
    }

    pub fn validated(self) -> Result<Rule> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidRule {
                name: self.name,
                violations,
            })
        }
    }
}

/// The simplified rule form `(p1, p2)`, where equally named variables in
/// the two patterns carry the join.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedRule {
    pub name: String,
    pub antecedent: Pattern,
    pub consequent: Pattern,
}

impl SimplifiedRule {
    pub fn new(name: impl Into<String>, antecedent: Pattern, consequent: Pattern) -> Result<Self> {
        let rule = SimplifiedRule {
            name: name.into(),
            antecedent,
            consequent,
        };
        if rule.shared_variables().is_empty() {
            return Err(Error::EmptyJoin);
        }
        Ok(rule)
    }

    /// Shared variables in canonical (lexicographic) order.
    pub fn shared_variables(&self) -> Vec<Variable> {
        let mut shared: Vec<Variable> = self
            .antecedent
            .variables()
            .intersection(self.consequent.variables())
            .copied()
            .collect();
        shared.sort();
        shared
    }
}

/// Rewrites a rule into its simplified two-pattern form.
///
/// Step 1 renames every variable shared between the patterns but not
/// joined (the consequent's accidental name reuses) to a fresh name; the
/// fresh names are `v<k>` for the smallest unused `k`, assigned in
/// lexicographic order of the renamed variables. Step 2 substitutes the
/// consequent's join variables by their antecedent partners,
/// simultaneously, so that swapped joins rewrite correctly.
pub fn to_simplified(rule: &Rule) -> Result<SimplifiedRule> {
    let v2_set: HashSet<Variable> = rule.join_consequent.iter().copied().collect();
    let mut overlap: Vec<Variable> = rule
        .antecedent
        .variables()
        .iter()
        .filter(|v| rule.consequent.variables().contains(v) && !v2_set.contains(v))
        .copied()
        .collect();
    overlap.sort();

    let mut taken: HashSet<&'static str> = rule
        .antecedent
        .variables()
        .iter()
        .chain(rule.consequent.variables())
        .map(|v| v.name())
        .collect();
    taken.extend(
        rule.antecedent
            .term_set()
            .iter()
            .chain(rule.consequent.term_set())
            .map(|t| t.label()),
    );

    let mut substitution: HashMap<Variable, Variable> = HashMap::new();
    let mut next_index = 1usize;
    for v in overlap {
        let fresh = loop {
            let candidate = format!("v{next_index}");
            next_index += 1;
            if !taken.contains(candidate.as_str()) {
                break Variable::new(&candidate);
            }
        };
        taken.insert(fresh.name());
        substitution.insert(v, fresh);
    }
    for (v1, v2) in rule.join_antecedent.iter().zip(&rule.join_consequent) {
        substitution.insert(*v2, *v1);
    }

    let rewritten = rule.consequent.triple_patterns().iter().map(|tp| {
        let map = |pos: TermOrVar| match pos {
            TermOrVar::Var(v) => TermOrVar::Var(substitution.get(&v).copied().unwrap_or(v)),
            TermOrVar::Term(_) => pos,
        };
        TriplePattern {
            s: map(tp.s),
            p: map(tp.p),
            o: map(tp.o),
        }
    });
    SimplifiedRule::new(
        rule.name.clone(),
        rule.antecedent.clone(),
        Pattern::new(rewritten)?,
    )
}

/// Expands the simplified form back into the four-component form; the
/// join sequences are the shared variables in lexicographic order.
pub fn from_simplified(rule: &SimplifiedRule) -> Result<Rule> {
    let shared = rule.shared_variables();
    if shared.is_empty() {
        return Err(Error::EmptyJoin);
    }
    Rule::new(
        rule.name.clone(),
        rule.antecedent.clone(),
        rule.consequent.clone(),
        shared.clone(),
        shared,
    )
    .validated()
}

/// A witness that a rule is trivial: an injective map from the
/// consequent's variables and terms into the antecedent's, where every
/// term maps to itself or to a variable, under which the consequent's
/// image is a subset of the antecedent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityWitness {
    entries: Vec<(TermOrVar, TermOrVar)>,
}

impl TrivialityWitness {
    pub fn new(mut entries: Vec<(TermOrVar, TermOrVar)>) -> TrivialityWitness {
        entries.sort();
        TrivialityWitness { entries }
    }

    pub fn entries(&self) -> &[(TermOrVar, TermOrVar)] {
        &self.entries
    }

    pub fn get(&self, from: TermOrVar) -> Option<TermOrVar> {
        self.entries
            .iter()
            .find(|(f, _)| *f == from)
            .map(|&(_, t)| t)
    }

    /// Re-checks the witness: injectivity plus containment of the mapped
    /// consequent in the antecedent.
    pub fn confirms(&self, rule: &Rule) -> bool {
        let mut seen = HashSet::new();
        if !self.entries.iter().all(|&(_, t)| seen.insert(t)) {
            return false;
        }
        for &(from, to) in &self.entries {
            match (from, to) {
                (TermOrVar::Term(a), TermOrVar::Term(b)) if a != b => return false,
                (TermOrVar::Var(_), TermOrVar::Term(_)) => return false,
                _ => {}
            }
        }
        let mapped = rule.consequent.triple_patterns().iter().map(|tp| {
            let map = |pos: TermOrVar| self.get(pos).unwrap_or(pos);
            TriplePattern {
                s: map(tp.s),
                p: map(tp.p),
                o: map(tp.o),
            }
        });
        match Pattern::new(mapped) {
            Ok(image) => image
                .triple_patterns()
                .iter()
                .all(|tp| rule.antecedent.triple_patterns().contains(tp)),
            Err(_) => false,
        }
    }
}

impl fmt::Display for TrivialityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (from, to) in &self.entries {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{from:?}->{to:?}")?;
        }
        Ok(())
    }
}

struct TrivialitySearch<'a> {
    antecedent_tps: &'a [TriplePattern],
    consequent_tps: &'a [TriplePattern],
    forward: HashMap<TermOrVar, TermOrVar>,
    taken: HashSet<TermOrVar>,
}

impl<'a> TrivialitySearch<'a> {
    fn admissible(&self, from: TermOrVar, to: TermOrVar) -> bool {
        match (from, to) {
            // A variable may be renamed to an antecedent variable.
            (TermOrVar::Var(_), TermOrVar::Var(_)) => true,
            // A term may stay itself or be generalized to a variable.
            (TermOrVar::Term(a), TermOrVar::Term(b)) => a == b,
            (TermOrVar::Term(_), TermOrVar::Var(_)) => true,
            (TermOrVar::Var(_), TermOrVar::Term(_)) => false,
        }
    }

    fn try_bind(
        &mut self,
        tp: &TriplePattern,
        target: &TriplePattern,
    ) -> Option<Vec<TermOrVar>> {
        let mut added = Vec::new();
        for (from, to) in [(tp.s, target.s), (tp.p, target.p), (tp.o, target.o)] {
            match self.forward.get(&from) {
                Some(&existing) => {
                    if existing != to {
                        self.undo(&added);
                        return None;
                    }
                }
                None => {
                    if !self.admissible(from, to) || self.taken.contains(&to) {
                        self.undo(&added);
                        return None;
                    }
                    self.forward.insert(from, to);
                    self.taken.insert(to);
                    added.push(from);
                }
            }
        }
        Some(added)
    }

    fn undo(&mut self, added: &[TermOrVar]) {
        for from in added {
            if let Some(to) = self.forward.remove(from) {
                self.taken.remove(&to);
            }
        }
    }

    fn search(&mut self, idx: usize) -> bool {
        if idx == self.consequent_tps.len() {
            return true;
        }
        let tp = self.consequent_tps[idx];
        for target in self.antecedent_tps {
            if let Some(added) = self.try_bind(&tp, target) {
                if self.search(idx + 1) {
                    return true;
                }
                self.undo(&added);
            }
        }
        false
    }
}

/// Decides whether a rule is trivial — the consequent is an instantiation
/// of a pattern subgraph-isomorphic to the antecedent — returning a
/// witness map when it is. The join sequences play no role here.
pub fn is_trivial(rule: &Rule) -> (bool, Option<TrivialityWitness>) {
    if rule.consequent.len() > rule.antecedent.len() {
        return (false, None);
    }
    let mut search = TrivialitySearch {
        antecedent_tps: rule.antecedent.triple_patterns(),
        consequent_tps: rule.consequent.triple_patterns(),
        forward: HashMap::new(),
        taken: HashSet::new(),
    };
    if search.search(0) {
        let mut entries: Vec<(TermOrVar, TermOrVar)> =
            search.forward.into_iter().collect();
        entries.sort();
        (true, Some(TrivialityWitness { entries }))
    } else {
        (false, None)
    }
}

/// Parses a rule file. Each rule is a block of the form
///
/// ```text
/// @rule <name>
/// @antecedent
/// <triple patterns, one per line>
/// @consequent
/// <triple patterns, one per line>
/// @join ?a=?x ?b=?y
/// ```
///
/// The `@join` line is optional; without it the block is read as a
/// simplified rule whose join is the set of shared variable names.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>> {
    enum Section {
        None,
        Antecedent,
        Consequent,
    }
    struct Block {
        name: String,
        line: usize,
        antecedent: Vec<TriplePattern>,
        consequent: Vec<TriplePattern>,
        join: Option<(Vec<Variable>, Vec<Variable>)>,
    }

    let mut rules = Vec::new();
    let mut block: Option<Block> = None;
    let mut section = Section::None;

    let finish = |block: Option<Block>, rules: &mut Vec<Rule>| -> Result<()> {
        let Some(b) = block else { return Ok(()) };
        let antecedent = Pattern::new(b.antecedent)?;
        let consequent = Pattern::new(b.consequent)?;
        let rule = match b.join {
            Some((v1, v2)) => {
                Rule::new(b.name, antecedent, consequent, v1, v2).validated()?
            }
            None => from_simplified(&SimplifiedRule::new(b.name, antecedent, consequent)?)?,
        };
        rules.push(rule);
        Ok(())
    };

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("@rule") {
            finish(block.take(), &mut rules)?;
            let name = rest.trim();
            if name.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "@rule header without a name".into(),
                });
            }
            block = Some(Block {
                name: name.to_owned(),
                line: lineno,
                antecedent: Vec::new(),
                consequent: Vec::new(),
                join: None,
            });
            section = Section::None;
            continue;
        }
        let Some(b) = block.as_mut() else {
            return Err(Error::Parse {
                line: lineno,
                msg: "content before the first @rule header".into(),
            });
        };
        if trimmed == "@antecedent" {
            section = Section::Antecedent;
        } else if trimmed == "@consequent" {
            section = Section::Consequent;
        } else if let Some(rest) = trimmed.strip_prefix("@join") {
            let mut v1 = Vec::new();
            let mut v2 = Vec::new();
            for pair in rest.split_whitespace() {
                let Some((a, b2)) = pair.split_once('=') else {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("join pair `{pair}` is not of the form ?a=?b"),
                    });
                };
                let strip = |s: &str| -> Result<Variable> {
                    s.strip_prefix('?')
                        .filter(|n| !n.is_empty())
                        .map(Variable::new)
                        .ok_or(Error::Parse {
                            line: lineno,
                            msg: format!("join element `{s}` is not a ?variable"),
                        })
                };
                v1.push(strip(a)?);
                v2.push(strip(b2)?);
            }
            b.join = Some((v1, v2));
        } else {
            let tp = parse_triple_pattern_line(line, lineno)?;
            match section {
                Section::Antecedent => b.antecedent.push(tp),
                Section::Consequent => b.consequent.push(tp),
                Section::None => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!(
                            "triple pattern outside @antecedent/@consequent in rule starting at line {}",
                            b.line
                        ),
                    })
                }
            }
        }
    }
    finish(block.take(), &mut rules)?;
    Ok(rules)
}

/// Serializes rules in the simplified form (no `@join` line).
pub fn serialize_simplified(rules: &[SimplifiedRule]) -> String {
    let mut out = String::new();
    for rule in rules {
        out.push_str("@rule ");
        out.push_str(&rule.name);
        out.push_str("\n@antecedent\n");
        out.push_str(&serialize_pattern(&rule.antecedent));
        out.push_str("@consequent\n");
        out.push_str(&serialize_pattern(&rule.consequent));
        out.push('\n');
    }
    out
}
