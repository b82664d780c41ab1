//! Classical itemset-based association rules over transaction databases:
//! support, confidence, lift, leverage, and conviction, all in exact
//! rational arithmetic.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{tokenize_line, Graph};
use crate::term::Term;
use crate::value::{big_ratio, MetricValue, UndefinedReason};

/// An item, identified by its label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Item(Term);

impl Item {
    pub fn new(label: &str) -> Item {
        Item(Term::new(label))
    }

    pub fn label(&self) -> &'static str {
        self.0.label()
    }
}

pub type Itemset = HashSet<Item>;

/// A bag of itemsets; duplicates are preserved and counted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransactionDb {
    transactions: Vec<Itemset>,
}

impl TransactionDb {
    pub fn new(transactions: Vec<Itemset>) -> TransactionDb {
        TransactionDb { transactions }
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn transactions(&self) -> &[Itemset] {
        &self.transactions
    }

    pub fn push(&mut self, t: Itemset) {
        self.transactions.push(t);
    }
}

/// Parses the transaction-db format: one transaction per line, items
/// whitespace-separated, `#` comments.
pub fn parse_transaction_db(text: &str) -> Result<TransactionDb> {
    let mut transactions = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens = tokenize_line(line, i + 1)?;
        transactions.push(tokens.iter().map(|t| Item::new(&t.text)).collect());
    }
    Ok(TransactionDb::new(transactions))
}

/// An itemset rule with non-empty antecedent and consequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsaRule {
    antecedent: Itemset,
    consequent: Itemset,
}

impl IsaRule {
    pub fn new(antecedent: Itemset, consequent: Itemset) -> Result<IsaRule> {
        if antecedent.is_empty() || consequent.is_empty() {
            return Err(Error::Contract(
                "rule antecedent and consequent must be non-empty itemsets".into(),
            ));
        }
        Ok(IsaRule {
            antecedent,
            consequent,
        })
    }

    pub fn antecedent(&self) -> &Itemset {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Itemset {
        &self.consequent
    }

    /// Trivial: the consequent is a subset of the antecedent.
    pub fn is_trivial(&self) -> bool {
        self.consequent.is_subset(&self.antecedent)
    }

    /// The sides overlap without the rule being trivial; such rules are
    /// accepted but flagged in reports.
    pub fn is_partially_redundant(&self) -> bool {
        !self.is_trivial() && !self.antecedent.is_disjoint(&self.consequent)
    }
}

/// Number of transactions containing the itemset, counted with
/// multiplicity.
pub fn absolute_support(db: &TransactionDb, set: &Itemset) -> u64 {
    db.transactions()
        .iter()
        .filter(|t| set.is_subset(t))
        .count() as u64
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Fraction of transactions containing the itemset.
pub fn relative_support(db: &TransactionDb, set: &Itemset) -> MetricValue {
    if db.is_empty() {
        return MetricValue::undefined(UndefinedReason::EmptyTransactionDatabase);
    }
    MetricValue::ratio(&big(absolute_support(db, set)), &big(db.len() as u64))
}

struct Counts {
    total: u64,
    antecedent: u64,
    consequent: u64,
    joint: u64,
}

fn counts(db: &TransactionDb, rule: &IsaRule) -> Counts {
    let mut antecedent = 0;
    let mut consequent = 0;
    let mut joint = 0;
    for t in db.transactions() {
        let a = rule.antecedent().is_subset(t);
        let b = rule.consequent().is_subset(t);
        antecedent += a as u64;
        consequent += b as u64;
        joint += (a && b) as u64;
    }
    Counts {
        total: db.len() as u64,
        antecedent,
        consequent,
        joint,
    }
}

/// Fraction of true predictions among all predictions made by the rule.
pub fn confidence(db: &TransactionDb, rule: &IsaRule) -> MetricValue {
    let c = counts(db, rule);
    if c.antecedent == 0 {
        return MetricValue::undefined(UndefinedReason::AntecedentSupportZero);
    }
    MetricValue::ratio(&big(c.joint), &big(c.antecedent))
}

/// Confidence divided by the relative support of the consequent.
pub fn lift(db: &TransactionDb, rule: &IsaRule) -> MetricValue {
    let c = counts(db, rule);
    if c.antecedent == 0 {
        return MetricValue::undefined(UndefinedReason::AntecedentSupportZero);
    }
    if c.consequent == 0 {
        return MetricValue::undefined(UndefinedReason::ConsequentSupportZero);
    }
    MetricValue::ratio(
        &(big(c.joint) * big(c.total)),
        &(big(c.antecedent) * big(c.consequent)),
    )
}

/// Joint probability minus the product of the marginals.
pub fn leverage(db: &TransactionDb, rule: &IsaRule) -> MetricValue {
    let c = counts(db, rule);
    if c.total == 0 {
        return MetricValue::undefined(UndefinedReason::EmptyTransactionDatabase);
    }
    let total = big(c.total);
    let joint = big_ratio(&big(c.joint), &total);
    let product = big_ratio(&big(c.antecedent), &total) * big_ratio(&big(c.consequent), &total);
    MetricValue::Rational(joint - product)
}

/// Expected failure rate under independence over the observed failure
/// rate; infinity when the rule never fails.
pub fn conviction(db: &TransactionDb, rule: &IsaRule) -> MetricValue {
    let c = counts(db, rule);
    if c.antecedent == 0 {
        return MetricValue::undefined(UndefinedReason::AntecedentSupportZero);
    }
    if c.consequent == c.total {
        return MetricValue::undefined(UndefinedReason::ConsequentSupportOne);
    }
    if c.joint == c.antecedent {
        return MetricValue::Infinity;
    }
    MetricValue::ratio(
        &(big(c.antecedent) * (big(c.total) - big(c.consequent))),
        &(big(c.total) * (big(c.antecedent) - big(c.joint))),
    )
}

/// The graph association rule check: whether the antecedent and the
/// consequent graph are each contained in the given graph.
pub fn gar_check(host: &Graph, antecedent: &Graph, consequent: &Graph) -> (bool, bool) {
    (
        host.contains_subgraph(antecedent),
        host.contains_subgraph(consequent),
    )
}
