//! Level-wise frequent-itemset mining.
//!
//! The miner is the classic join-and-prune scheme: level k+1 candidates are
//! built by joining frequent k-itemsets that share their first k-1 items,
//! then pruned unless every k-subset is itself frequent. Supports are exact
//! integer counts against per-item bitmaps, and the inclusion threshold is
//! `count/n >= min_support` compared exactly in integers.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::itemset::Itemset;

/// All itemsets at or above a support threshold, with their exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequentItemsets<T> {
    entries: BTreeMap<Itemset<T>, u64>,
    transaction_count: u64,
    min_support: Fraction,
}

impl<T: Ord + Clone> FrequentItemsets<T> {
    pub(crate) fn from_parts(
        entries: BTreeMap<Itemset<T>, u64>,
        transaction_count: u64,
        min_support: Fraction,
    ) -> Self {
        FrequentItemsets {
            entries,
            transaction_count,
            min_support,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transaction_count(&self) -> u64 {
        self.transaction_count
    }

    pub fn min_support(&self) -> Fraction {
        self.min_support
    }

    /// Exact transaction count of an itemset, if it is frequent.
    pub fn count_of(&self, itemset: &Itemset<T>) -> Option<u64> {
        self.entries.get(itemset).copied()
    }

    /// Support of an itemset as a float, if it is frequent.
    pub fn support_of(&self, itemset: &Itemset<T>) -> Option<f64> {
        self.count_of(itemset)
            .map(|c| c as f64 / self.transaction_count as f64)
    }

    /// Iterates entries in canonical itemset order.
    pub fn iter(&self) -> impl Iterator<Item = (&Itemset<T>, u64)> {
        self.entries.iter().map(|(set, count)| (set, *count))
    }

    /// The frequent itemsets of size `k`, in canonical order.
    pub fn of_len(&self, k: usize) -> Vec<&Itemset<T>> {
        self.entries.keys().filter(|s| s.len() == k).collect()
    }
}

/// Joins same-size frequent itemsets into next-level candidates and prunes
/// any candidate with an infrequent subset. Input order does not matter; the
/// output is sorted and duplicate-free. Errors if the input mixes sizes.
pub fn generate_candidates<T: Ord + Clone>(frequent: &[Itemset<T>]) -> Result<Vec<Itemset<T>>> {
    let Some(first) = frequent.first() else {
        return Ok(Vec::new());
    };
    let k = first.len();
    if k == 0 {
        return Err(Error::MixedItemsetSizes { first: 0, second: 0 });
    }
    for set in frequent {
        if set.len() != k {
            return Err(Error::MixedItemsetSizes {
                first: k,
                second: set.len(),
            });
        }
    }

    let sorted: BTreeSet<&Itemset<T>> = frequent.iter().collect();
    let level: Vec<&Itemset<T>> = sorted.iter().copied().collect();

    let mut candidates = Vec::new();
    for (i, a) in level.iter().enumerate() {
        for b in &level[i + 1..] {
            // Join condition: equal first k-1 items. The level is sorted, so
            // once prefixes diverge no later b can match.
            if a.items()[..k - 1] != b.items()[..k - 1] {
                break;
            }
            let candidate = a.union(b);
            debug_assert_eq!(candidate.len(), k + 1);
            // Prune: every k-subset must be frequent.
            let mut keep = true;
            for drop in 0..candidate.len() {
                let subset = Itemset::from_sorted_unchecked(
                    candidate
                        .items()
                        .iter()
                        .enumerate()
                        .filter(|(idx, _)| *idx != drop)
                        .map(|(_, item)| item.clone())
                        .collect(),
                );
                if !sorted.contains(&subset) {
                    keep = false;
                    break;
                }
            }
            if keep {
                candidates.push(candidate);
            }
        }
    }
    // The join over a sorted, deduplicated level emits each candidate once,
    // in ascending order.
    debug_assert!(candidates.windows(2).all(|w| w[0] < w[1]));
    Ok(candidates)
}

/// Counts, for each candidate, the number of transactions containing it.
/// A duplicate-free result map in canonical order.
pub fn count_support<T, S>(candidates: &[Itemset<T>], transactions: &[S]) -> BTreeMap<Itemset<T>, u64>
where
    T: Ord + Clone,
    S: AsRef<Itemset<T>>,
{
    let mut counts = BTreeMap::new();
    for candidate in candidates {
        let count = transactions
            .iter()
            .filter(|t| t.as_ref().contains_all(candidate))
            .count() as u64;
        counts.insert(candidate.clone(), count);
    }
    counts
}

/// Mines all frequent itemsets of every size.
///
/// `min_support` must lie in (0, 1]; the count comparison is exact, so a
/// support of exactly the threshold is kept. Transactions must be non-empty
/// as a slice, but individual transactions may be empty sets.
pub fn frequent_itemsets<T, S>(transactions: &[S], min_support: Fraction) -> Result<FrequentItemsets<T>>
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
    let n = transactions.len();

    // Map items to dense ids in canonical order; all level-wise work runs on
    // ids and only the final table maps back to T.
    let vocab: Vec<T> = {
        let set: BTreeSet<&T> = transactions
            .iter()
            .flat_map(|t| t.as_ref().items().iter())
            .collect();
        set.into_iter().cloned().collect()
    };

    let mut bitmaps: Vec<Bitmap> = vec![Bitmap::zeros(n); vocab.len()];
    for (t_idx, t) in transactions.iter().enumerate() {
        for item in t.as_ref().items() {
            let id = vocab.binary_search(item).expect("item drawn from vocab");
            bitmaps[id].set(t_idx);
        }
    }

    let meets = |count: u64| min_support.le_ratio(count, n as u64);

    let mut kept: Vec<(Itemset<u32>, u64)> = Vec::new();
    let mut level: Vec<Itemset<u32>> = Vec::new();
    for id in 0..vocab.len() as u32 {
        let count = bitmaps[id as usize].count_ones();
        if meets(count) {
            let set = Itemset::singleton(id);
            kept.push((set.clone(), count));
            level.push(set);
        }
    }

    while !level.is_empty() {
        let candidates = generate_candidates(&level)?;
        if candidates.is_empty() {
            break;
        }
        // Candidate counts are independent; the parallel map preserves
        // candidate order, so results do not depend on the thread count.
        let counted: Vec<(Itemset<u32>, u64)> = candidates
            .into_par_iter()
            .map(|candidate| {
                let ids = candidate.items();
                let mut acc = bitmaps[ids[0] as usize].clone();
                for &id in &ids[1..] {
                    acc.and_with(&bitmaps[id as usize]);
                }
                let count = acc.count_ones();
                (candidate, count)
            })
            .collect();

        level = Vec::new();
        for (candidate, count) in counted {
            if meets(count) {
                level.push(candidate.clone());
                kept.push((candidate, count));
            }
        }
    }

    let entries: BTreeMap<Itemset<T>, u64> = kept
        .into_iter()
        .map(|(ids, count)| {
            let items = ids.items().iter().map(|&id| vocab[id as usize].clone());
            (Itemset::new(items), count)
        })
        .collect();

    Ok(FrequentItemsets::from_parts(entries, n as u64, min_support))
}
