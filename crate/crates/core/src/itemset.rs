//! Sorted-set representation of itemsets.

use std::fmt;

use serde::{Deserialize, Serialize};

/// An immutable set of items kept sorted and deduplicated.
///
/// The sorted order doubles as the canonical order for display, CSV output,
/// and map keys, so equal sets always compare and print identically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Itemset<T> {
    items: Vec<T>,
}

impl<T: Ord> Itemset<T> {
    /// Builds an itemset from any iterator, sorting and deduplicating.
    pub fn new(items: impl IntoIterator<Item = T>) -> Self {
        let mut items: Vec<T> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        Itemset { items }
    }

    pub fn singleton(item: T) -> Self {
        Itemset { items: vec![item] }
    }

    /// Wraps a vector that is already sorted and free of duplicates.
    pub(crate) fn from_sorted_unchecked(items: Vec<T>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Itemset { items }
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: &T) -> bool {
        self.items.binary_search(item).is_ok()
    }

    /// True when every element of `other` is in `self`.
    pub fn contains_all(&self, other: &Itemset<T>) -> bool {
        // Merge walk over two sorted slices.
        let mut mine = self.items.iter();
        'outer: for want in &other.items {
            for have in mine.by_ref() {
                match have.cmp(want) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_subset_of(&self, other: &Itemset<T>) -> bool {
        other.contains_all(self)
    }

    /// True when the two sets share at least one element.
    pub fn intersects(&self, other: &Itemset<T>) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

impl<T: Ord + Clone> Itemset<T> {
    pub fn union(&self, other: &Itemset<T>) -> Itemset<T> {
        let mut merged = Vec::with_capacity(self.items.len() + other.items.len());
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                std::cmp::Ordering::Less => {
                    merged.push(self.items[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(other.items[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    merged.push(self.items[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&self.items[i..]);
        merged.extend(other.items[j..].iter().cloned());
        Itemset { items: merged }
    }

    /// The set difference `self \ other`.
    pub fn difference(&self, other: &Itemset<T>) -> Itemset<T> {
        let kept = self
            .items
            .iter()
            .filter(|it| !other.contains(it))
            .cloned()
            .collect();
        Itemset { items: kept }
    }
}

impl<T> AsRef<Itemset<T>> for Itemset<T> {
    fn as_ref(&self) -> &Itemset<T> {
        self
    }
}

impl<'a, T: Ord> IntoIterator for &'a Itemset<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl<T: fmt::Display> fmt::Display for Itemset<T> {
    /// Joins items with `;` in canonical order, e.g. `Skipped=YES;Status=UNSOLVED`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}
