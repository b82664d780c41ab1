//! Reframing rule evaluation over graphs as itemset-rule evaluation over
//! a generated transaction database.
//!
//! For every graph in the bag and every tuple of its sample space one
//! transaction is generated, containing the symbol `A` when the tuple
//! corresponds to an antecedent match and `B` when it corresponds to a
//! consequent match. Micro-averaged metrics on the bag must then equal
//! the classical metrics of `{A} => {B}` on the generated database.
//!
//! Generation materializes the tuple space, so it is guarded by a hard
//! transaction cap and serves as a desk-scale correctness oracle, not as
//! a production metric path.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBag};
use crate::isar::{self, IsaRule, Item, Itemset, TransactionDb};
use crate::matcher::{sequence_matches, Semantics};
use crate::metrics::{metrics_micro, MetricReport};
use crate::rule::Rule;
use crate::stats::{eligible_terms, tuple_space_size};
use crate::term::Term;
use crate::value::MetricValue;

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Enumerates the non-repetitive term tuples of length `n` over the
/// eligible terms, in lexicographic term order, applying `visit` to each.
fn for_each_tuple<F: FnMut(&[Term]) -> Result<()>>(
    terms: &[Term],
    n: usize,
    visit: &mut F,
) -> Result<()> {
    fn rec<F: FnMut(&[Term]) -> Result<()>>(
        terms: &[Term],
        n: usize,
        current: &mut Vec<Term>,
        used: &mut Vec<bool>,
        visit: &mut F,
    ) -> Result<()> {
        if current.len() == n {
            return visit(current);
        }
        for (i, &t) in terms.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            current.push(t);
            rec(terms, n, current, used, visit)?;
            current.pop();
            used[i] = false;
        }
        Ok(())
    }
    let mut used = vec![false; terms.len()];
    rec(terms, n, &mut Vec::with_capacity(n), &mut used, visit)
}

fn required_size(bag: &GraphBag, rule: &Rule) -> BigUint {
    bag.iter()
        .map(|(_, g)| tuple_space_size(g, &rule.antecedent, &rule.consequent, rule.join_len()))
        .sum()
}

fn transactions_for_graph(g: &Graph, rule: &Rule, db: &mut TransactionDb) -> Result<()> {
    let mut eligible: Vec<Term> = eligible_terms(g, &rule.antecedent, &rule.consequent)
        .into_iter()
        .collect();
    eligible.sort();
    let a = Item::new("A");
    let b = Item::new("B");
    for_each_tuple(&eligible, rule.join_len(), &mut |tuple| {
        let mut transaction = Itemset::new();
        if sequence_matches(g, tuple, &rule.antecedent, &rule.join_antecedent, Semantics::Nra)? {
            transaction.insert(a);
        }
        if sequence_matches(g, tuple, &rule.consequent, &rule.join_consequent, Semantics::Nra)? {
            transaction.insert(b);
        }
        db.push(transaction);
        Ok(())
    })
}

/// Materializes the transaction database for a rule over a bag, refusing
/// when more than `cap` transactions would be generated.
pub fn generate_transaction_db(bag: &GraphBag, rule: &Rule, cap: u64) -> Result<TransactionDb> {
    let required = required_size(bag, rule);
    if required > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            required: required.to_string(),
            cap,
        });
    }
    let mut db = TransactionDb::default();
    for (_, g) in bag.iter() {
        transactions_for_graph(g, rule, &mut db)?;
    }
    Ok(db)
}

/// One metric compared across the two routes.
#[derive(Clone, Debug)]
pub struct MetricPair {
    pub name: &'static str,
    pub graph_value: MetricValue,
    pub itemset_value: MetricValue,
}

impl MetricPair {
    pub fn equal(&self) -> bool {
        self.graph_value.agrees_with(&self.itemset_value)
    }
}

/// Result of the correspondence check between micro-averaged graph
/// metrics and itemset metrics on the generated database.
#[derive(Clone, Debug)]
pub struct ReframeReport {
    pub db_size: u64,
    pub pairs: Vec<MetricPair>,
    pub all_equal: bool,
}

/// Generates the transaction database and compares every metric of the
/// micro regime against its classical counterpart, exactly.
pub fn check_correspondence(bag: &GraphBag, rule: &Rule, cap: u64) -> Result<ReframeReport> {
    let db = generate_transaction_db(bag, rule, cap)?;
    let micro: MetricReport = metrics_micro(bag, rule)?;
    let a: Itemset = [Item::new("A")].into_iter().collect();
    let b: Itemset = [Item::new("B")].into_iter().collect();
    let isa_rule = IsaRule::new(a.clone(), b.clone())?;
    let pairs = vec![
        MetricPair {
            name: "support_antecedent",
            graph_value: micro.support_antecedent.clone(),
            itemset_value: isar::relative_support(&db, &a),
        },
        MetricPair {
            name: "support_consequent",
            graph_value: micro.support_consequent.clone(),
            itemset_value: isar::relative_support(&db, &b),
        },
        MetricPair {
            name: "confidence",
            graph_value: micro.confidence.clone(),
            itemset_value: isar::confidence(&db, &isa_rule),
        },
        MetricPair {
            name: "lift",
            graph_value: micro.lift.clone(),
            itemset_value: isar::lift(&db, &isa_rule),
        },
        MetricPair {
            name: "leverage",
            graph_value: micro.leverage.clone(),
            itemset_value: isar::leverage(&db, &isa_rule),
        },
        MetricPair {
            name: "conviction",
            graph_value: micro.conviction.clone(),
            itemset_value: isar::conviction(&db, &isa_rule),
        },
    ];
    let all_equal = pairs.iter().all(MetricPair::equal);
    Ok(ReframeReport {
        db_size: db.len() as u64,
        pairs,
        all_equal,
    })
}

/// The expected number of transactions, exposed for cap decisions.
pub fn transaction_count(bag: &GraphBag, rule: &Rule) -> BigUint {
    required_size(bag, rule)
}

/// Convenience: the count as `u64` when it fits.
pub fn transaction_count_u64(bag: &GraphBag, rule: &Rule) -> Option<u64> {
    required_size(bag, rule).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::pattern::parse_pattern;
    use crate::term::Variable;

    fn coauthor_rule() -> Rule {
        Rule::new(
            "coauthor",
            parse_pattern("?v1 coauthorOf ?v2\n?v2 coauthorOf ?v1\n?v1 worksAt ?v3").unwrap(),
            parse_pattern("?v2 worksAt ?v3").unwrap(),
            vec![Variable::new("v2"), Variable::new("v3")],
            vec![Variable::new("v2"), Variable::new("v3")],
        )
    }

    fn base_graph() -> Graph {
        parse_graph("Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org").unwrap()
    }

    fn extended_graph() -> Graph {
        parse_graph(
            "Alice coauthorOf Bob\nBob coauthorOf Alice\nAlice worksAt Org\nBob worksAt Org",
        )
        .unwrap()
    }

    #[test]
    fn generated_database_has_one_transaction_per_tuple() {
        let bag = GraphBag::singleton("g", base_graph());
        let db = generate_transaction_db(&bag, &coauthor_rule(), DEFAULT_CAP).unwrap();
        assert_eq!(db.len(), 6);
        let a = Item::new("A");
        let b = Item::new("B");
        let only_a = db
            .transactions()
            .iter()
            .filter(|t| t.contains(&a) && !t.contains(&b))
            .count();
        let only_b = db
            .transactions()
            .iter()
            .filter(|t| t.contains(&b) && !t.contains(&a))
            .count();
        let empty = db.transactions().iter().filter(|t| t.is_empty()).count();
        assert_eq!((only_a, only_b, empty), (1, 1, 4));
    }

    #[test]
    fn extended_graph_database() {
        let bag = GraphBag::singleton("g", extended_graph());
        let db = generate_transaction_db(&bag, &coauthor_rule(), DEFAULT_CAP).unwrap();
        assert_eq!(db.len(), 6);
        let a = Item::new("A");
        let b = Item::new("B");
        let both = db
            .transactions()
            .iter()
            .filter(|t| t.contains(&a) && t.contains(&b))
            .count();
        let empty = db.transactions().iter().filter(|t| t.is_empty()).count();
        assert_eq!((both, empty), (2, 4));
    }

    #[test]
    fn two_graph_bag_database_size_sums() {
        let bag = GraphBag::new(vec![
            ("g1".into(), base_graph()),
            ("g2".into(), extended_graph()),
        ])
        .unwrap();
        let db = generate_transaction_db(&bag, &coauthor_rule(), DEFAULT_CAP).unwrap();
        assert_eq!(db.len(), 12);
    }

    #[test]
    fn cap_refusal_reports_required_size() {
        let bag = GraphBag::singleton("g", base_graph());
        let err = generate_transaction_db(&bag, &coauthor_rule(), 5).unwrap_err();
        assert_eq!(
            err,
            Error::CapExceeded {
                required: "6".into(),
                cap: 5
            }
        );
    }

    #[test]
    fn correspondence_on_the_two_graph_bag() {
        let bag = GraphBag::new(vec![
            ("g1".into(), base_graph()),
            ("g2".into(), extended_graph()),
        ])
        .unwrap();
        let report = check_correspondence(&bag, &coauthor_rule(), DEFAULT_CAP).unwrap();
        assert!(report.all_equal, "{:?}", report.pairs);
        assert_eq!(report.db_size, 12);
        let confidence = report
            .pairs
            .iter()
            .find(|p| p.name == "confidence")
            .unwrap();
        assert_eq!(
            confidence.graph_value,
            MetricValue::Rational(crate::value::rational(2, 3))
        );
    }

    #[test]
    fn correspondence_with_unmatched_antecedent_is_equal_by_undefinedness() {
        let bag = GraphBag::singleton("g", parse_graph("a b c").unwrap());
        let report = check_correspondence(&bag, &coauthor_rule(), DEFAULT_CAP).unwrap();
        assert!(report.all_equal);
        let confidence = report
            .pairs
            .iter()
            .find(|p| p.name == "confidence")
            .unwrap();
        assert!(!confidence.graph_value.is_defined());
        assert!(!confidence.itemset_value.is_defined());
    }
}
