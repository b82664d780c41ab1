//! Exact metric values: rationals, infinity, or undefined-with-reason.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Why a metric value is undefined. For macro-averaged metrics the
/// violating graph identifiers are carried along.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undefined {
    pub reason: UndefinedReason,
    pub graph_ids: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UndefinedReason {
    /// The antecedent event has zero support.
    AntecedentSupportZero,
    /// The consequent event has zero support.
    ConsequentSupportZero,
    /// The consequent event has probability one.
    ConsequentSupportOne,
    /// The tuple sample space is empty.
    EmptySampleSpace,
    /// The transaction database is empty.
    EmptyTransactionDatabase,
    /// The graph bag is empty.
    EmptyBag,
}

impl UndefinedReason {
    pub fn code(&self) -> &'static str {
        match self {
            UndefinedReason::AntecedentSupportZero => "antecedent-support-zero",
            UndefinedReason::ConsequentSupportZero => "consequent-support-zero",
            UndefinedReason::ConsequentSupportOne => "consequent-support-one",
            UndefinedReason::EmptySampleSpace => "empty-sample-space",
            UndefinedReason::EmptyTransactionDatabase => "empty-transaction-database",
            UndefinedReason::EmptyBag => "empty-bag",
        }
    }
}

/// An exact metric value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricValue {
    Rational(BigRational),
    Infinity,
    Undefined(Undefined),
}

impl MetricValue {
    pub fn undefined(reason: UndefinedReason) -> MetricValue {
        MetricValue::Undefined(Undefined {
            reason,
            graph_ids: Vec::new(),
        })
    }

    pub fn undefined_for(reason: UndefinedReason, graph_ids: Vec<String>) -> MetricValue {
        MetricValue::Undefined(Undefined { reason, graph_ids })
    }

    pub fn ratio(num: &BigUint, den: &BigUint) -> MetricValue {
        MetricValue::Rational(BigRational::new(
            BigInt::from(num.clone()),
            BigInt::from(den.clone()),
        ))
    }

    pub fn from_integer(n: u64) -> MetricValue {
        MetricValue::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_defined(&self) -> bool {
        !matches!(self, MetricValue::Undefined(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            MetricValue::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Exact equality where any two undefined values agree, regardless of
    /// reason.
    pub fn agrees_with(&self, other: &MetricValue) -> bool {
        match (self, other) {
            (MetricValue::Rational(a), MetricValue::Rational(b)) => a == b,
            (MetricValue::Infinity, MetricValue::Infinity) => true,
            (MetricValue::Undefined(_), MetricValue::Undefined(_)) => true,
            _ => false,
        }
    }

    /// Approximate decimal rendering with the given number of fractional
    /// digits; used only for display, never in metric paths.
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            MetricValue::Rational(r) => {
                let f = r.to_f64().unwrap_or(f64::NAN);
                format!("{f:.digits$}")
            }
            MetricValue::Infinity => "inf".into(),
            MetricValue::Undefined(u) => format!("undef:{}", u.reason.code()),
        }
    }
}

impl fmt::Display for MetricValue {
    /// Rationals print `p/q` in lowest terms (integers as `k`), infinity
    /// prints `inf`, undefined prints `undef:<reason>` with any violating
    /// graph ids appended.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Rational(r) => write!(f, "{}", format_rational(r)),
            MetricValue::Infinity => write!(f, "inf"),
            MetricValue::Undefined(u) => {
                write!(f, "undef:{}", u.reason.code())?;
                if !u.graph_ids.is_empty() {
                    write!(f, ":{}", u.graph_ids.join(","))?;
                }
                Ok(())
            }
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.denom().is_negative() {
        // BigRational keeps denominators positive; kept for safety.
        format!("{}/{}", -r.numer(), -r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big_ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn one() -> BigRational {
    BigRational::one()
}

pub fn zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        assert_eq!(MetricValue::Rational(rational(2, 3)).to_string(), "2/3");
        assert_eq!(MetricValue::Rational(rational(4, 2)).to_string(), "2");
        assert_eq!(MetricValue::Rational(rational(-1, 36)).to_string(), "-1/36");
        assert_eq!(MetricValue::Infinity.to_string(), "inf");
        assert_eq!(
            MetricValue::undefined(UndefinedReason::AntecedentSupportZero).to_string(),
            "undef:antecedent-support-zero"
        );
        assert_eq!(
            MetricValue::undefined_for(
                UndefinedReason::AntecedentSupportZero,
                vec!["g2".into(), "g5".into()]
            )
            .to_string(),
            "undef:antecedent-support-zero:g2,g5"
        );
    }

    #[test]
    fn agreement_ignores_undefined_reason() {
        let a = MetricValue::undefined(UndefinedReason::AntecedentSupportZero);
        let b = MetricValue::undefined(UndefinedReason::EmptySampleSpace);
        assert!(a.agrees_with(&b));
        assert!(!a.agrees_with(&MetricValue::Infinity));
        assert!(MetricValue::Rational(rational(1, 2)).agrees_with(&MetricValue::Rational(rational(2, 4))));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(MetricValue::Rational(rational(2, 3)).to_decimal(4), "0.6667");
    }
}
