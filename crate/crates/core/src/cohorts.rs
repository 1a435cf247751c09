//! Per-cohort mining and cross-cohort rule comparison.

use std::collections::BTreeSet;
use std::fmt;

use crate::cohort::{filter_cohort, CohortSpec};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::item::{encode_transactions, Item, Transaction};
use crate::itemset::Itemset;
use crate::mining::{frequent_itemsets, FrequentItemsets};
use crate::record::{SessionRecord, Status};
use crate::rules::{derive_rules, rank_rules, MiningConfig, Rule, RuleKey};
use crate::stats::{indicator_rates, IndicatorRates};

/// Everything mined from one cohort under one configuration.
#[derive(Clone, Debug)]
pub struct CohortResult {
    pub spec: CohortSpec,
    pub config: MiningConfig,
    pub record_count: usize,
    pub rates: IndicatorRates,
    pub itemsets: FrequentItemsets<Item>,
    /// Ranked rules, already truncated to `config.top_k`.
    pub rules: Vec<Rule<Item>>,
    transactions: Vec<Transaction>,
}

impl CohortResult {
    /// The cohort's encoded transactions, in record order.
    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    /// Metrics of an arbitrary rule against this cohort's transactions,
    /// regardless of whether it was reported. Returns
    /// `(joint, antecedent, consequent, total)` counts.
    pub fn raw_counts(&self, key: &RuleKey<Item>) -> (u64, u64, u64, u64) {
        count_rule(&self.transactions, key)
    }
}

/// Counts `(joint, antecedent, consequent, total)` for a rule over
/// transactions by direct scan.
pub(crate) fn count_rule(transactions: &[Transaction], key: &RuleKey<Item>) -> (u64, u64, u64, u64) {
    let union = key.antecedent.union(&key.consequent);
    let (mut joint, mut ante, mut cons) = (0u64, 0u64, 0u64);
    for t in transactions {
        let set = t.items();
        if set.contains_all(&union) {
            joint += 1;
        }
        if set.contains_all(&key.antecedent) {
            ante += 1;
        }
        if set.contains_all(&key.consequent) {
            cons += 1;
        }
    }
    (joint, ante, cons, transactions.len() as u64)
}

/// Filters records to the cohort, encodes them, and runs the full pipeline:
/// frequent itemsets, rule derivation, ranking. Errors if the cohort is
/// empty.
pub fn mine_cohort(
    records: &[SessionRecord],
    spec: &CohortSpec,
    config: &MiningConfig,
) -> Result<CohortResult> {
    config.validate()?;
    let subset = filter_cohort(records, spec);
    if subset.is_empty() {
        return Err(Error::EmptyCohort(spec.name().to_string()));
    }
    let rates = indicator_rates(&subset)?;
    let transactions = encode_transactions(&subset);
    let itemsets = frequent_itemsets(&transactions, config.min_support)?;
    let rules = rank_rules(
        derive_rules(&itemsets, config.min_confidence, config.min_lift),
        config.top_k,
    );
    Ok(CohortResult {
        spec: spec.clone(),
        config: config.clone(),
        record_count: subset.len(),
        rates,
        itemsets,
        rules,
        transactions,
    })
}

/// Why a rule fails a cohort's thresholds. Reasons are checked in threshold
/// order: support first, then confidence, then lift, so when several
/// thresholds fail the earliest one is reported.
#[derive(Clone, Debug, PartialEq)]
pub enum AbsenceReason {
    BelowSupport { observed: f64, min: Fraction },
    BelowConfidence { observed: f64, min: Fraction },
    BelowLift { observed: f64, min: Fraction },
}

impl fmt::Display for AbsenceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsenceReason::BelowSupport { observed, min } => {
                write!(f, "support {observed:.6} < {min}")
            }
            AbsenceReason::BelowConfidence { observed, min } => {
                write!(f, "confidence {observed:.6} < {min}")
            }
            AbsenceReason::BelowLift { observed, min } => {
                write!(f, "lift {observed:.6} <= {min}")
            }
        }
    }
}

/// A rule's standing within one cohort.
#[derive(Clone, Debug, PartialEq)]
pub enum Presence {
    Present {
        support: f64,
        confidence: f64,
        lift: f64,
    },
    Absent(AbsenceReason),
}

impl Presence {
    pub fn lift(&self) -> Option<f64> {
        match self {
            Presence::Present { lift, .. } => Some(*lift),
            Presence::Absent(_) => None,
        }
    }
}

/// One rule's standing in both cohorts.
#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub key: RuleKey<Item>,
    pub a: Presence,
    pub b: Presence,
    /// `lift(b) - lift(a)`, only when the rule is present in both.
    pub lift_delta: Option<f64>,
}

/// Side-by-side view of the reported rules of two cohorts.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub cohort_a: String,
    pub cohort_b: String,
    /// Sorted by the larger of the two lifts, descending; ties by rule key.
    pub rows: Vec<ComparisonRow>,
}

/// Evaluates thresholds for one rule against raw counts, reporting either
/// the metrics or the first failing threshold.
pub(crate) fn evaluate_rule(
    counts: (u64, u64, u64, u64),
    min_support: Fraction,
    min_confidence: Fraction,
    min_lift: Fraction,
) -> Presence {
    let (joint, ante, cons, n) = counts;
    if !min_support.le_ratio(joint, n) {
        return Presence::Absent(AbsenceReason::BelowSupport {
            observed: joint as f64 / n as f64,
            min: min_support,
        });
    }
    // A zero antecedent or consequent count forces joint = 0, which a
    // positive min_support already rejected, so the divisions below are
    // well-defined.
    if !min_confidence.le_ratio(joint, ante) {
        return Presence::Absent(AbsenceReason::BelowConfidence {
            observed: joint as f64 / ante as f64,
            min: min_confidence,
        });
    }
    let lift_num = joint as u128 * n as u128;
    let lift_den = ante as u128 * cons as u128;
    if !min_lift.lt_ratio_wide(lift_num, lift_den) {
        return Presence::Absent(AbsenceReason::BelowLift {
            observed: (joint as f64 * n as f64) / (ante as f64 * cons as f64),
            min: min_lift,
        });
    }
    Presence::Present {
        support: joint as f64 / n as f64,
        confidence: joint as f64 / ante as f64,
        lift: (joint as f64 * n as f64) / (ante as f64 * cons as f64),
    }
}

fn presence_in(result: &CohortResult, key: &RuleKey<Item>) -> Presence {
    let config = &result.config;
    evaluate_rule(
        result.raw_counts(key),
        config.min_support,
        config.min_confidence,
        config.min_lift,
    )
}

/// Compares two cohorts mined under the same configuration. The row set is
/// the union of both reported rule lists; each cell is evaluated from that
/// cohort's raw counts, so a rule present in one top list still gets its
/// exact metrics on the other side whenever it passes the thresholds there
/// (it may merely have been out-ranked), and otherwise an absence reason.
pub fn compare_cohorts(a: &CohortResult, b: &CohortResult) -> Result<ComparisonReport> {
    if a.config != b.config {
        return Err(Error::ConfigMismatch);
    }
    let keys: BTreeSet<RuleKey<Item>> = a
        .rules
        .iter()
        .chain(b.rules.iter())
        .map(|r| r.key())
        .collect();

    let mut rows: Vec<ComparisonRow> = keys
        .into_iter()
        .map(|key| {
            let in_a = presence_in(a, &key);
            let in_b = presence_in(b, &key);
            let lift_delta = match (in_a.lift(), in_b.lift()) {
                (Some(la), Some(lb)) => Some(lb - la),
                _ => None,
            };
            ComparisonRow {
                key,
                a: in_a,
                b: in_b,
                lift_delta,
            }
        })
        .collect();

    rows.sort_by(|x, y| {
        let max_lift = |row: &ComparisonRow| {
            row.a
                .lift()
                .into_iter()
                .chain(row.b.lift())
                .fold(f64::NEG_INFINITY, f64::max)
        };
        max_lift(y)
            .partial_cmp(&max_lift(x))
            .expect("lifts are finite")
            .then_with(|| x.key.cmp(&y.key))
    });

    Ok(ComparisonReport {
        cohort_a: a.spec.name().to_string(),
        cohort_b: b.spec.name().to_string(),
        rows,
    })
}

/// Reported rules split by outcome consequent, rank order preserved.
/// Rules whose consequent is not exactly one status item fall in neither
/// list.
#[derive(Clone, Debug, Default)]
pub struct OutcomeSplit {
    pub solved: Vec<Rule<Item>>,
    pub unsolved: Vec<Rule<Item>>,
}

pub fn outcome_rules(result: &CohortResult) -> OutcomeSplit {
    let solved_set = Itemset::singleton(Item::status(Status::Solved));
    let unsolved_set = Itemset::singleton(Item::status(Status::Unsolved));
    let mut split = OutcomeSplit::default();
    for rule in &result.rules {
        if rule.consequent() == &solved_set {
            split.solved.push(rule.clone());
        } else if rule.consequent() == &unsolved_set {
            split.unsolved.push(rule.clone());
        }
    }
    split
}
