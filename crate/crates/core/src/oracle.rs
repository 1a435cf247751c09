//! Exhaustive reference implementations for cross-checking the miner.
//!
//! These enumerate every candidate directly: all 2^v - 1 item subsets for
//! itemsets, all antecedent/consequent partitions for rules. No join step,
//! no pruning, no level-wise state. Costs are exponential in vocabulary
//! size, hence the hard cap; the point is an independent route to the same
//! answer, not speed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::itemset::Itemset;
use crate::mining::FrequentItemsets;
use crate::rules::Rule;

/// Largest vocabulary the exhaustive enumerations accept.
pub const ORACLE_ITEM_CAP: usize = 20;

/// Sorted vocabulary and one bitmask per transaction over it.
fn vocab_and_masks<T, S>(transactions: &[S]) -> Result<(Vec<T>, Vec<u32>)>
where
    T: Ord + Clone,
    S: AsRef<Itemset<T>>,
{
    let vocab: Vec<T> = {
        let set: std::collections::BTreeSet<&T> = transactions
            .iter()
            .flat_map(|t| t.as_ref().items().iter())
            .collect();
        set.into_iter().cloned().collect()
    };
    if vocab.len() > ORACLE_ITEM_CAP {
        return Err(Error::VocabularyTooLarge {
            observed: vocab.len(),
            cap: ORACLE_ITEM_CAP,
        });
    }
    let masks = transactions
        .iter()
        .map(|t| {
            let mut mask = 0u32;
            for item in t.as_ref().items() {
                let id = vocab.binary_search(item).expect("item drawn from vocab");
                mask |= 1 << id;
            }
            mask
        })
        .collect();
    Ok((vocab, masks))
}

fn items_of_mask<T: Ord + Clone>(mask: u32, vocab: &[T]) -> Itemset<T> {
    let items = (0..vocab.len())
        .filter(|id| mask & (1 << id) != 0)
        .map(|id| vocab[id].clone())
        .collect();
    // Bit order follows vocab order, which is sorted.
    Itemset::from_sorted_unchecked(items)
}

/// Every frequent itemset by direct enumeration: each non-empty subset of
/// the vocabulary is counted with a full transaction scan. Agrees with
/// [`frequent_itemsets`](crate::mining::frequent_itemsets) on every input
/// both accept.
pub fn enumerate_frequent<T, S>(
    transactions: &[S],
    min_support: Fraction,
) -> Result<FrequentItemsets<T>>
where
    T: Ord + Clone,
    S: AsRef<Itemset<T>>,
{
    if transactions.is_empty() {
        return Err(Error::NoTransactions);
    }
    if !min_support.in_unit_interval() {
        return Err(Error::InvalidConfig(format!(
            "min_support must be in (0, 1], got {min_support}"
        )));
    }
    let (vocab, masks) = vocab_and_masks(transactions)?;
    let n = transactions.len() as u64;

    let mut entries = BTreeMap::new();
    for subset in 1u32..(1u32 << vocab.len()) {
        let count = masks.iter().filter(|&&m| m & subset == subset).count() as u64;
        if min_support.le_ratio(count, n) {
            entries.insert(items_of_mask(subset, &vocab), count);
        }
    }
    Ok(FrequentItemsets::from_parts(entries, n, min_support))
}

/// Every qualifying rule by direct enumeration: for each item subset whose
/// support passes, every antecedent/consequent partition is checked against
/// the confidence and lift thresholds. Counting is a memoized transaction
/// scan per mask. Output is sorted by (antecedent, consequent).
pub fn enumerate_rules<T, S>(
    transactions: &[S],
    min_support: Fraction,
    min_confidence: Fraction,
    min_lift: Fraction,
) -> Result<Vec<Rule<T>>>
where
    T: Ord + Clone,
    S: AsRef<Itemset<T>>,
{
    if transactions.is_empty() {
        return Err(Error::NoTransactions);
    }
    if !min_support.in_unit_interval() || !min_confidence.in_unit_interval() {
        return Err(Error::InvalidConfig(
            "min_support and min_confidence must be in (0, 1]".into(),
        ));
    }
    let (vocab, masks) = vocab_and_masks(transactions)?;
    let n = transactions.len() as u64;

    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut count_of = |mask: u32| -> u64 {
        *counts
            .entry(mask)
            .or_insert_with(|| masks.iter().filter(|&&m| m & mask == mask).count() as u64)
    };

    let mut rules = Vec::new();
    for union in 1u32..(1u32 << vocab.len()) {
        if union.count_ones() < 2 {
            continue;
        }
        let joint = count_of(union);
        if !min_support.le_ratio(joint, n) {
            continue;
        }
        // All proper non-empty submasks of `union` as antecedents.
        let mut antecedent = (union - 1) & union;
        while antecedent != 0 {
            let consequent = union ^ antecedent;
            let ante_count = count_of(antecedent);
            let cons_count = count_of(consequent);
            if min_confidence.le_ratio(joint, ante_count)
                && min_lift.lt_ratio_wide(joint as u128 * n as u128, ante_count as u128 * cons_count as u128)
            {
                rules.push(Rule::from_counts(
                    items_of_mask(antecedent, &vocab),
                    items_of_mask(consequent, &vocab),
                    joint,
                    ante_count,
                    cons_count,
                    n,
                ));
            }
            antecedent = (antecedent - 1) & union;
        }
    }
    rules.sort_by(|a, b| {
        a.antecedent()
            .cmp(b.antecedent())
            .then_with(|| a.consequent().cmp(b.consequent()))
    });
    Ok(rules)
}
