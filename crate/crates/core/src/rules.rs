//! Association-rule derivation, filtering, and ranking.
//!
//! Rules come from partitioning each frequent itemset of size two or more
//! into a non-empty antecedent and consequent. A rule keeps its raw counts,
//! so metrics stay exact ratios: threshold checks cross-multiply integers
//! instead of comparing floats, and the float accessors exist only for
//! display.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraction::{cmp_ratios, Fraction};
use crate::item::Item;
use crate::itemset::Itemset;
use crate::mining::FrequentItemsets;

/// An association rule `antecedent => consequent` with its exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule<T> {
    antecedent: Itemset<T>,
    consequent: Itemset<T>,
    joint_count: u64,
    antecedent_count: u64,
    consequent_count: u64,
    transaction_count: u64,
}

impl<T: Ord + Clone> Rule<T> {
    /// Assembles a rule from raw counts. Sides must be non-empty and
    /// disjoint; counts must be consistent (`joint <= antecedent`, etc.).
    pub(crate) fn from_counts(
        antecedent: Itemset<T>,
        consequent: Itemset<T>,
        joint_count: u64,
        antecedent_count: u64,
        consequent_count: u64,
        transaction_count: u64,
    ) -> Self {
        debug_assert!(!antecedent.is_empty() && !consequent.is_empty());
        debug_assert!(!antecedent.intersects(&consequent));
        debug_assert!(joint_count <= antecedent_count && joint_count <= consequent_count);
        debug_assert!(antecedent_count <= transaction_count);
        Rule {
            antecedent,
            consequent,
            joint_count,
            antecedent_count,
            consequent_count,
            transaction_count,
        }
    }

    pub fn antecedent(&self) -> &Itemset<T> {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Itemset<T> {
        &self.consequent
    }

    /// Count of transactions containing antecedent and consequent together.
    pub fn joint_count(&self) -> u64 {
        self.joint_count
    }

    pub fn antecedent_count(&self) -> u64 {
        self.antecedent_count
    }

    pub fn consequent_count(&self) -> u64 {
        self.consequent_count
    }

    pub fn transaction_count(&self) -> u64 {
        self.transaction_count
    }

    /// `P(A and C)`.
    pub fn support(&self) -> f64 {
        self.joint_count as f64 / self.transaction_count as f64
    }

    /// `P(C | A)`.
    pub fn confidence(&self) -> f64 {
        self.joint_count as f64 / self.antecedent_count as f64
    }

    /// Confidence over the consequent's base rate; 1.0 means independence.
    pub fn lift(&self) -> f64 {
        (self.joint_count as f64 * self.transaction_count as f64)
            / (self.antecedent_count as f64 * self.consequent_count as f64)
    }

    /// Lift as an exact ratio of products of counts.
    fn lift_ratio(&self) -> (u128, u128) {
        (
            self.joint_count as u128 * self.transaction_count as u128,
            self.antecedent_count as u128 * self.consequent_count as u128,
        )
    }

    pub fn key(&self) -> RuleKey<T> {
        RuleKey {
            antecedent: self.antecedent.clone(),
            consequent: self.consequent.clone(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Rule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.antecedent, self.consequent)
    }
}

/// Identity of a rule: its two sides, without counts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RuleKey<T> {
    pub antecedent: Itemset<T>,
    pub consequent: Itemset<T>,
}

impl<T: Ord + Clone> RuleKey<T> {
    /// Builds a key, rejecting empty or overlapping sides.
    pub fn new(antecedent: Itemset<T>, consequent: Itemset<T>) -> Result<Self> {
        if antecedent.is_empty() || consequent.is_empty() {
            return Err(Error::InvalidRule {
                input: format!("{:?} sides", (antecedent.len(), consequent.len())),
                reason: "antecedent and consequent must be non-empty".into(),
            });
        }
        if antecedent.intersects(&consequent) {
            return Err(Error::InvalidRule {
                input: "overlapping sides".into(),
                reason: "antecedent and consequent must be disjoint".into(),
            });
        }
        Ok(RuleKey {
            antecedent,
            consequent,
        })
    }
}

impl<T: fmt::Display> fmt::Display for RuleKey<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.antecedent, self.consequent)
    }
}

impl FromStr for RuleKey<Item> {
    type Err = Error;

    /// Parses `Skipped=YES => Status=UNSOLVED` (also `->`), with `;` between
    /// items on a side.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidRule {
            input: s.trim().to_string(),
            reason: reason.into(),
        };
        let (left, right) = s
            .split_once("=>")
            .or_else(|| s.split_once("->"))
            .ok_or_else(|| bad("expected `antecedent => consequent`"))?;
        let parse_side = |side: &str| -> Result<Itemset<Item>> {
            let items = side
                .split(';')
                .map(|tok| tok.parse::<Item>())
                .collect::<Result<Vec<Item>>>()?;
            Ok(Itemset::new(items))
        };
        let key = RuleKey::new(parse_side(left)?, parse_side(right)?);
        key.map_err(|e| match e {
            Error::InvalidRule { reason, .. } => bad(&reason),
            other => other,
        })
    }
}

/// Thresholds and output cap for one mining run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiningConfig {
    /// Inclusive lower bound on rule support, in (0, 1].
    pub min_support: Fraction,
    /// Inclusive lower bound on confidence, in (0, 1].
    pub min_confidence: Fraction,
    /// Exclusive lower bound on lift.
    pub min_lift: Fraction,
    /// Maximum number of ranked rules reported.
    pub top_k: usize,
}

impl MiningConfig {
    pub fn new(
        min_support: Fraction,
        min_confidence: Fraction,
        min_lift: Fraction,
        top_k: usize,
    ) -> Result<Self> {
        let config = MiningConfig {
            min_support,
            min_confidence,
            min_lift,
            top_k,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min_support.in_unit_interval() {
            return Err(Error::InvalidConfig(format!(
                "min_support must be in (0, 1], got {}",
                self.min_support
            )));
        }
        if !self.min_confidence.in_unit_interval() {
            return Err(Error::InvalidConfig(format!(
                "min_confidence must be in (0, 1], got {}",
                self.min_confidence
            )));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidConfig("top_k must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for MiningConfig {
    /// Support 0.20, confidence 0.60, lift strictly above 1, top 30.
    fn default() -> Self {
        MiningConfig {
            min_support: Fraction::new(1, 5).expect("static"),
            min_confidence: Fraction::new(3, 5).expect("static"),
            min_lift: Fraction::ONE,
            top_k: 30,
        }
    }
}

/// Derives every rule whose itemset is in `table` and whose confidence and
/// lift pass the thresholds (confidence inclusive, lift strict). Support
/// filtering already happened when `table` was mined. Unranked.
pub fn derive_rules<T: Ord + Clone>(
    table: &FrequentItemsets<T>,
    min_confidence: Fraction,
    min_lift: Fraction,
) -> Vec<Rule<T>> {
    let n = table.transaction_count();
    let mut rules = Vec::new();
    for (itemset, joint_count) in table.iter() {
        let items = itemset.items();
        let k = items.len();
        if k < 2 {
            continue;
        }
        debug_assert!(k < 32, "itemset too large to partition");
        // Each bitmask picks the antecedent; the complement is the
        // consequent. Both sides stay sorted because items are taken in
        // canonical order.
        for mask in 1..((1u32 << k) - 1) {
            let mut ante = Vec::with_capacity(k);
            let mut cons = Vec::with_capacity(k);
            for (idx, item) in items.iter().enumerate() {
                if mask >> idx & 1 == 1 {
                    ante.push(item.clone());
                } else {
                    cons.push(item.clone());
                }
            }
            let antecedent = Itemset::from_sorted_unchecked(ante);
            let consequent = Itemset::from_sorted_unchecked(cons);
            // Subsets of a frequent itemset are themselves frequent, so both
            // lookups succeed for any table produced by the miner.
            let (Some(a_count), Some(c_count)) =
                (table.count_of(&antecedent), table.count_of(&consequent))
            else {
                continue;
            };
            if !min_confidence.le_ratio(joint_count, a_count) {
                continue;
            }
            let lift_num = joint_count as u128 * n as u128;
            let lift_den = a_count as u128 * c_count as u128;
            if !min_lift.lt_ratio_wide(lift_num, lift_den) {
                continue;
            }
            rules.push(Rule::from_counts(
                antecedent,
                consequent,
                joint_count,
                a_count,
                c_count,
                n,
            ));
        }
    }
    rules
}

/// Ranks rules by lift, then confidence, then support, all descending and
/// compared exactly; remaining ties break lexicographically on the canonical
/// antecedent string, then the consequent string. Returns at most `top_k`.
pub fn rank_rules<T>(mut rules: Vec<Rule<T>>, top_k: usize) -> Vec<Rule<T>>
where
    T: Ord + Clone + fmt::Display,
{
    rules.sort_by(|a, b| {
        let (al_num, al_den) = a.lift_ratio();
        let (bl_num, bl_den) = b.lift_ratio();
        cmp_ratios(bl_num, bl_den, al_num, al_den)
            .then_with(|| {
                cmp_ratios(
                    b.joint_count as u128,
                    b.antecedent_count as u128,
                    a.joint_count as u128,
                    a.antecedent_count as u128,
                )
            })
            .then_with(|| {
                cmp_ratios(
                    b.joint_count as u128,
                    b.transaction_count as u128,
                    a.joint_count as u128,
                    a.transaction_count as u128,
                )
            })
            .then_with(|| a.antecedent.to_string().cmp(&b.antecedent.to_string()))
            .then_with(|| a.consequent.to_string().cmp(&b.consequent.to_string()))
    });
    rules.truncate(top_k);
    rules
}
