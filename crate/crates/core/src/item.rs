//! The boolean-indicator item vocabulary and record-to-transaction encoding.
//!
//! Each session maps to exactly four items, one per attribute, with both
//! polarities represented (`Hint=NO` is an item just like `Hint=YES`).
//! Keeping explicit negative items lets rules such as
//! `Skipped=NO => Status=SOLVED` surface directly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::itemset::Itemset;
use crate::record::{SessionRecord, Status};

/// The four session attributes that become items.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attribute {
    Mistake,
    Hint,
    Skipped,
    Status,
}

impl Attribute {
    pub const ALL: [Attribute; 4] = [
        Attribute::Mistake,
        Attribute::Hint,
        Attribute::Skipped,
        Attribute::Status,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Attribute::Mistake => "Mistake",
            Attribute::Hint => "Hint",
            Attribute::Skipped => "Skipped",
            Attribute::Status => "Status",
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One attribute=value indicator. The derived `Ord` is the canonical item
/// order used everywhere items are sorted or printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Item {
    MistakeYes,
    MistakeNo,
    HintYes,
    HintNo,
    SkippedYes,
    SkippedNo,
    StatusSolved,
    StatusUnsolved,
}

impl Item {
    /// Every item, in canonical order.
    pub const VOCABULARY: [Item; 8] = [
        Item::MistakeYes,
        Item::MistakeNo,
        Item::HintYes,
        Item::HintNo,
        Item::SkippedYes,
        Item::SkippedNo,
        Item::StatusSolved,
        Item::StatusUnsolved,
    ];

    pub fn mistake(occurred: bool) -> Item {
        if occurred {
            Item::MistakeYes
        } else {
            Item::MistakeNo
        }
    }

    pub fn hint(used: bool) -> Item {
        if used {
            Item::HintYes
        } else {
            Item::HintNo
        }
    }

    pub fn skipped(skipped: bool) -> Item {
        if skipped {
            Item::SkippedYes
        } else {
            Item::SkippedNo
        }
    }

    pub fn status(status: Status) -> Item {
        match status {
            Status::Solved => Item::StatusSolved,
            Status::Unsolved => Item::StatusUnsolved,
        }
    }

    pub fn attribute(&self) -> Attribute {
        match self {
            Item::MistakeYes | Item::MistakeNo => Attribute::Mistake,
            Item::HintYes | Item::HintNo => Attribute::Hint,
            Item::SkippedYes | Item::SkippedNo => Attribute::Skipped,
            Item::StatusSolved | Item::StatusUnsolved => Attribute::Status,
        }
    }

    pub fn value_str(&self) -> &'static str {
        match self {
            Item::MistakeYes | Item::HintYes | Item::SkippedYes => "YES",
            Item::MistakeNo | Item::HintNo | Item::SkippedNo => "NO",
            Item::StatusSolved => "SOLVED",
            Item::StatusUnsolved => "UNSOLVED",
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.attribute().name(), self.value_str())
    }
}

impl FromStr for Item {
    type Err = Error;

    /// Parses `attribute=value` case-insensitively; the full log column
    /// names (`MistakeOccurred`, `HintUsed`) are accepted as aliases.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::UnknownItem(s.trim().to_string());
        let (attr, value) = s.trim().split_once('=').ok_or_else(bad)?;
        let attr = attr.trim().to_ascii_lowercase();
        let value = value.trim().to_ascii_lowercase();
        let yes = match value.as_str() {
            "yes" => Some(true),
            "no" => Some(false),
            _ => None,
        };
        match attr.as_str() {
            "mistake" | "mistakeoccurred" => Ok(Item::mistake(yes.ok_or_else(bad)?)),
            "hint" | "hintused" => Ok(Item::hint(yes.ok_or_else(bad)?)),
            "skipped" | "skip" => Ok(Item::skipped(yes.ok_or_else(bad)?)),
            "status" => match value.as_str() {
                "solved" => Ok(Item::StatusSolved),
                "unsolved" => Ok(Item::StatusUnsolved),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

/// The four indicator values of a session, decoded from a transaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Indicators {
    pub mistake_occurred: bool,
    pub hint_used: bool,
    pub skipped: bool,
    pub status: Status,
}

/// A session encoded as its four-item set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transaction {
    items: Itemset<Item>,
}

impl Transaction {
    pub fn from_record(record: &SessionRecord) -> Transaction {
        Transaction {
            items: Itemset::new([
                Item::mistake(record.mistake_occurred),
                Item::hint(record.hint_used),
                Item::skipped(record.skipped),
                Item::status(record.status),
            ]),
        }
    }

    pub fn items(&self) -> &Itemset<Item> {
        &self.items
    }

    /// Recovers the indicator values. Every transaction built by
    /// [`Transaction::from_record`] carries exactly one item per attribute,
    /// so decoding cannot fail.
    pub fn decode(&self) -> Indicators {
        Indicators {
            mistake_occurred: self.items.contains(&Item::MistakeYes),
            hint_used: self.items.contains(&Item::HintYes),
            skipped: self.items.contains(&Item::SkippedYes),
            status: if self.items.contains(&Item::StatusSolved) {
                Status::Solved
            } else {
                Status::Unsolved
            },
        }
    }
}

impl AsRef<Itemset<Item>> for Transaction {
    fn as_ref(&self) -> &Itemset<Item> {
        &self.items
    }
}

impl fmt::Display for Transaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.items)
    }
}

/// Encodes records in order; the output has the same length as the input.
pub fn encode_transactions(records: &[SessionRecord]) -> Vec<Transaction> {
    records.iter().map(Transaction::from_record).collect()
}
