//! Rule quality metrics in the single-graph, micro-averaged, and
//! macro-averaged regimes, plus situation classification, degree of
//! applicability, and rule ranking.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBag};
use crate::rule::Rule;
use crate::stats::{event_stats, event_stats_per_graph, sum_stats, EventStats};
use crate::value::{big_ratio, one, MetricValue, UndefinedReason};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Single,
    Micro,
    Macro,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Single => write!(f, "single"),
            Regime::Micro => write!(f, "micro"),
            Regime::Macro => write!(f, "macro"),
        }
    }
}

/// Event counts plus the derived metric values for one regime.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub regime: Regime,
    /// Pooled counts (for macro: component-wise sums, kept for display).
    pub stats: EventStats,
    /// Per-graph counts; empty in the single regime.
    pub per_graph: Vec<EventStats>,
    pub support_antecedent: MetricValue,
    pub support_consequent: MetricValue,
    pub confidence: MetricValue,
    pub lift: MetricValue,
    pub leverage: MetricValue,
    pub conviction: MetricValue,
    /// Conviction with the numerator additionally scaled by the
    /// antecedent's support; kept as an alternative reading of the
    /// metric, for comparison with the plain form.
    pub conviction_antecedent_scaled: MetricValue,
    /// Fraction of the bag on which lift is defined (macro regime only).
    pub applicability: Option<BigRational>,
}

/// The five situations of interest for a pair of events, plus `Mixed`
/// for per-graph classifications that disagree across a bag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Situation {
    /// The events are identical.
    Ide,
    /// The events are disjoint.
    Dis,
    /// The events are independent.
    Ind,
    /// Positively correlated.
    Pos,
    /// Negatively correlated.
    Neg,
    /// Per-graph classifications disagree.
    Mixed,
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Situation::Ide => "IDE",
            Situation::Dis => "DIS",
            Situation::Ind => "IND",
            Situation::Pos => "POS",
            Situation::Neg => "NEG",
            Situation::Mixed => "MIXED",
        };
        write!(f, "{s}")
    }
}

/// Classifies the event situation from exact counts. Identity takes
/// precedence over disjointness and independence (all three can hold at
/// once when both events are empty).
pub fn classify_situation(stats: &EventStats) -> Result<Situation> {
    if stats.tuple_space.is_zero() {
        return Err(Error::Contract(
            "situation of an empty sample space is undefined".into(),
        ));
    }
    if stats.antecedent == stats.joint && stats.consequent == stats.joint {
        return Ok(Situation::Ide);
    }
    if stats.joint.is_zero() {
        return Ok(Situation::Dis);
    }
    let lhs = &stats.joint * &stats.tuple_space;
    let rhs = &stats.antecedent * &stats.consequent;
    Ok(match lhs.cmp(&rhs) {
        std::cmp::Ordering::Equal => Situation::Ind,
        std::cmp::Ordering::Greater => Situation::Pos,
        std::cmp::Ordering::Less => Situation::Neg,
    })
}

/// The common per-graph classification of a bag, or `Mixed` when the
/// graphs disagree.
pub fn classify_situation_per_graph(per_graph: &[EventStats]) -> Result<Situation> {
    let mut common: Option<Situation> = None;
    for stats in per_graph {
        let s = classify_situation(stats)?;
        match common {
            None => common = Some(s),
            Some(c) if c == s => {}
            Some(_) => return Ok(Situation::Mixed),
        }
    }
    common.ok_or(Error::EmptyBag)
}

fn support(count: &BigUint, space: &BigUint) -> MetricValue {
    if space.is_zero() {
        MetricValue::undefined(UndefinedReason::EmptySampleSpace)
    } else {
        MetricValue::ratio(count, space)
    }
}

/// Derives every metric from pooled event counts; shared by the single
/// and micro regimes, whose formulas coincide on the pooled sample
/// space.
fn report_from_stats(regime: Regime, stats: EventStats, per_graph: Vec<EventStats>) -> MetricReport {
    let tau = &stats.tuple_space;
    let e1 = &stats.antecedent;
    let e2 = &stats.consequent;
    let joint = &stats.joint;

    let confidence = if e1.is_zero() {
        MetricValue::undefined(UndefinedReason::AntecedentSupportZero)
    } else {
        MetricValue::ratio(joint, e1)
    };

    let lift = if e1.is_zero() {
        MetricValue::undefined(UndefinedReason::AntecedentSupportZero)
    } else if e2.is_zero() {
        MetricValue::undefined(UndefinedReason::ConsequentSupportZero)
    } else {
        MetricValue::ratio(&(joint * tau), &(e1 * e2))
    };

    let leverage = if tau.is_zero() {
        MetricValue::undefined(UndefinedReason::EmptySampleSpace)
    } else {
        MetricValue::Rational(big_ratio(joint, tau) - big_ratio(e1, tau) * big_ratio(e2, tau))
    };

    let conviction = if e1.is_zero() {
        MetricValue::undefined(UndefinedReason::AntecedentSupportZero)
    } else if e2 == tau {
        MetricValue::undefined(UndefinedReason::ConsequentSupportOne)
    } else if joint == e1 {
        MetricValue::Infinity
    } else {
        MetricValue::ratio(&(e1 * &(tau - e2)), &(tau * &(e1 - joint)))
    };

    let conviction_antecedent_scaled = match &conviction {
        MetricValue::Rational(r) => MetricValue::Rational(r * big_ratio(e1, tau)),
        other => other.clone(),
    };

    MetricReport {
        regime,
        support_antecedent: support(e1, tau),
        support_consequent: support(e2, tau),
        confidence,
        lift,
        leverage,
        conviction,
        conviction_antecedent_scaled,
        applicability: None,
        stats,
        per_graph,
    }
}

/// Metrics for a rule on a single graph.
pub fn metrics_single(g: &Graph, rule: &Rule) -> Result<MetricReport> {
    let stats = event_stats(g, rule)?;
    Ok(report_from_stats(Regime::Single, stats, Vec::new()))
}

/// Micro-averaged metrics: the formulas of the single-graph regime
/// applied to counts pooled over the bag.
pub fn metrics_micro(bag: &GraphBag, rule: &Rule) -> Result<MetricReport> {
    let per_graph = event_stats_per_graph(bag, rule)?;
    let pooled = sum_stats(rule.join_len(), &per_graph);
    Ok(report_from_stats(Regime::Micro, pooled, per_graph))
}

/// The definedness condition of each metric, evaluated on one graph's
/// counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    SupportAntecedent,
    SupportConsequent,
    Confidence,
    Lift,
    Leverage,
    Conviction,
}

pub fn metric_defined(kind: MetricKind, stats: &EventStats) -> bool {
    match kind {
        MetricKind::SupportAntecedent | MetricKind::SupportConsequent | MetricKind::Leverage => {
            !stats.tuple_space.is_zero()
        }
        MetricKind::Confidence => !stats.antecedent.is_zero(),
        MetricKind::Lift => !stats.antecedent.is_zero() && !stats.consequent.is_zero(),
        MetricKind::Conviction => {
            !stats.antecedent.is_zero() && stats.consequent != stats.tuple_space
        }
    }
}

fn undefined_reason(kind: MetricKind, stats: &EventStats) -> UndefinedReason {
    match kind {
        MetricKind::SupportAntecedent | MetricKind::SupportConsequent | MetricKind::Leverage => {
            UndefinedReason::EmptySampleSpace
        }
        MetricKind::Confidence => UndefinedReason::AntecedentSupportZero,
        MetricKind::Lift => {
            if stats.antecedent.is_zero() {
                UndefinedReason::AntecedentSupportZero
            } else {
                UndefinedReason::ConsequentSupportZero
            }
        }
        MetricKind::Conviction => {
            if stats.antecedent.is_zero() {
                UndefinedReason::AntecedentSupportZero
            } else {
                UndefinedReason::ConsequentSupportOne
            }
        }
    }
}

/// Averages per-graph metric values, all of which must be defined.
/// Infinity absorbs: one infinite summand makes the average infinite.
fn macro_average(values: Vec<MetricValue>) -> MetricValue {
    let count = values.len();
    if count == 0 {
        return MetricValue::undefined(UndefinedReason::EmptyBag);
    }
    let mut sum = BigRational::zero();
    for v in values {
        match v {
            MetricValue::Rational(r) => sum += r,
            MetricValue::Infinity => return MetricValue::Infinity,
            MetricValue::Undefined(u) => return MetricValue::Undefined(u),
        }
    }
    MetricValue::Rational(sum / BigRational::from_integer(count.into()))
}

/// Extracts one metric value from a single-graph report.
fn pick(report: &MetricReport, kind: MetricKind) -> MetricValue {
    match kind {
        MetricKind::SupportAntecedent => report.support_antecedent.clone(),
        MetricKind::SupportConsequent => report.support_consequent.clone(),
        MetricKind::Confidence => report.confidence.clone(),
        MetricKind::Lift => report.lift.clone(),
        MetricKind::Leverage => report.leverage.clone(),
        MetricKind::Conviction => report.conviction.clone(),
    }
}

/// Macro-averaged metrics: the mean of the per-graph metric values. A
/// metric is undefined as soon as one graph violates its definedness
/// condition; the violating graph identifiers are carried in the value
/// rather than silently reducing the bag.
pub fn metrics_macro(bag: &GraphBag, rule: &Rule) -> Result<MetricReport> {
    let per_graph = event_stats_per_graph(bag, rule)?;
    let reports: Vec<MetricReport> = per_graph
        .iter()
        .map(|s| report_from_stats(Regime::Single, s.clone(), Vec::new()))
        .collect();

    let averaged = |kind: MetricKind| -> MetricValue {
        if per_graph.is_empty() {
            return MetricValue::undefined(UndefinedReason::EmptyBag);
        }
        let violators: Vec<String> = per_graph
            .iter()
            .filter(|s| !metric_defined(kind, s))
            .map(|s| s.graph_id.clone().unwrap_or_default())
            .collect();
        if !violators.is_empty() {
            let reason = undefined_reason(
                kind,
                per_graph
                    .iter()
                    .find(|s| !metric_defined(kind, s))
                    .expect("some violator"),
            );
            return MetricValue::undefined_for(reason, violators);
        }
        macro_average(reports.iter().map(|r| pick(r, kind)).collect())
    };

    let lift_defined = per_graph
        .iter()
        .filter(|s| metric_defined(MetricKind::Lift, s))
        .count();
    let applicability = if bag.is_empty() {
        None
    } else {
        Some(big_ratio(
            &BigUint::from(lift_defined),
            &BigUint::from(bag.len()),
        ))
    };

    let scaled = |r: &MetricReport| r.conviction_antecedent_scaled.clone();
    let conviction_antecedent_scaled = if per_graph.is_empty()
        || per_graph.iter().any(|s| !metric_defined(MetricKind::Conviction, s))
    {
        averaged(MetricKind::Conviction)
    } else {
        macro_average(reports.iter().map(scaled).collect())
    };

    Ok(MetricReport {
        regime: Regime::Macro,
        stats: sum_stats(rule.join_len(), &per_graph),
        support_antecedent: averaged(MetricKind::SupportAntecedent),
        support_consequent: averaged(MetricKind::SupportConsequent),
        confidence: averaged(MetricKind::Confidence),
        lift: averaged(MetricKind::Lift),
        leverage: averaged(MetricKind::Leverage),
        conviction: averaged(MetricKind::Conviction),
        conviction_antecedent_scaled,
        applicability,
        per_graph,
    })
}

/// Fraction of the bag satisfying a per-graph condition, together with
/// the reduced bag of satisfying graphs.
pub fn degree_of_applicability<F>(bag: &GraphBag, condition: F) -> Result<(BigRational, GraphBag)>
where
    F: Fn(&str, &Graph) -> bool,
{
    if bag.is_empty() {
        return Err(Error::EmptyBag);
    }
    let satisfying: Vec<(String, Graph)> = bag
        .iter()
        .filter(|(id, g)| condition(id, g))
        .cloned()
        .collect();
    let fraction = big_ratio(
        &BigUint::from(satisfying.len()),
        &BigUint::from(bag.len()),
    );
    Ok((fraction, GraphBag::new(satisfying)?))
}

/// Degree of applicability for one metric's definedness condition.
pub fn metric_applicability(
    bag: &GraphBag,
    rule: &Rule,
    kind: MetricKind,
) -> Result<(BigRational, GraphBag)> {
    let per_graph = event_stats_per_graph(bag, rule)?;
    let defined: std::collections::HashSet<&str> = per_graph
        .iter()
        .filter(|s| metric_defined(kind, s))
        .filter_map(|s| s.graph_id.as_deref())
        .collect();
    degree_of_applicability(bag, |id, _| defined.contains(id))
}

/// One entry of a rule ranking.
#[derive(Clone, Debug)]
pub struct RankedRule {
    pub name: String,
    /// Fraction of the bag on which lift is defined.
    pub applicability: BigRational,
    /// Macro-averaged lift over the reduced bag.
    pub lift: MetricValue,
}

/// Two-stage (lexicographic) ranking: descending degree of applicability
/// for the lift condition, then descending macro-lift on the reduced
/// bag, then rule name.
pub fn rank_rules(bag: &GraphBag, rules: &[Rule]) -> Result<Vec<RankedRule>> {
    let mut ranked = Vec::with_capacity(rules.len());
    for rule in rules {
        let (applicability, reduced) = metric_applicability(bag, rule, MetricKind::Lift)?;
        let lift = if reduced.is_empty() {
            MetricValue::undefined(UndefinedReason::EmptyBag)
        } else {
            metrics_macro(&reduced, rule)?.lift
        };
        ranked.push(RankedRule {
            name: rule.name.clone(),
            applicability,
            lift,
        });
    }
    ranked.sort_by(|a, b| {
        b.applicability
            .cmp(&a.applicability)
            .then_with(|| compare_values_desc(&a.lift, &b.lift))
            .then_with(|| a.name.cmp(&b.name))
    });
    Ok(ranked)
}

/// Descending order over metric values: infinity first, then rationals
/// by value, undefined last.
fn compare_values_desc(a: &MetricValue, b: &MetricValue) -> std::cmp::Ordering {
    let rank = |v: &MetricValue| match v {
        MetricValue::Infinity => 0u8,
        MetricValue::Rational(_) => 1,
        MetricValue::Undefined(_) => 2,
    };
    match (a, b) {
        (MetricValue::Rational(x), MetricValue::Rational(y)) => y.cmp(x),
        _ => rank(a).cmp(&rank(b)),
    }
}

/// `true` when conviction equals infinity exactly if confidence is one,
/// given the consequent's support is below one. Used by property suites.
pub fn conviction_trichotomy_holds(report: &MetricReport) -> bool {
    let conf_is_one = matches!(&report.confidence, MetricValue::Rational(r) if *r == one());
    match &report.conviction {
        MetricValue::Infinity => conf_is_one,
        MetricValue::Rational(_) => !conf_is_one,
        MetricValue::Undefined(_) => true,
    }
}
