//! Association-rule mining for tutoring-system session logs.
//!
//! The pipeline: parse per-session records from CSV ([`record`]), encode
//! each session as a transaction over eight indicator items ([`item`]),
//! mine frequent itemsets level-wise ([`mining`]), derive and rank rules by
//! support, confidence, and lift ([`rules`]), then slice by learning-history
//! label or intervention flag and compare cohorts ([`cohort`], [`cohorts`]).
//! Threshold sensitivity sweeps live in [`sensitivity`], a seeded synthetic
//! log generator in [`synthgen`], and exhaustive reference implementations
//! for cross-checking the miner in [`oracle`].
//!
//! Thresholds are exact: minimum support and confidence are inclusive
//! rational comparisons, the lift floor is strict, and all three are
//! evaluated on integer counts ([`Fraction`]), so boundary cases like a
//! support of exactly 1/5 against a threshold of 0.20 never depend on
//! float rounding.
//!
//! ```
//! use lhmine::{mine_cohort, CohortSpec, MiningConfig};
//!
//! let csv = include_str!("../../../data/sample_sessions.csv");
//! let log = lhmine::parse_records(csv.as_bytes()).unwrap();
//! let result = mine_cohort(&log.records, &CohortSpec::overall(), &MiningConfig::default()).unwrap();
//! let top = &result.rules[0];
//! assert!(top.lift() > 1.0);
//! ```

pub mod cohort;
pub mod cohorts;
pub mod error;
pub mod export;
pub mod fraction;
pub mod item;
pub mod itemset;
pub mod mining;
pub mod oracle;
pub mod record;
pub mod rules;
pub mod sensitivity;
pub mod stats;
pub mod synthgen;

mod bitmap;

pub use cohort::{filter_cohort, standard_cohorts, CohortSpec};
pub use cohorts::{
    compare_cohorts, mine_cohort, outcome_rules, AbsenceReason, CohortResult, ComparisonReport,
    ComparisonRow, OutcomeSplit, Presence,
};
pub use error::{Error, Result};
pub use export::{
    comparison_csv, format_significant, itemsets_csv, rules_csv, stability_csv, stats_csv,
};
pub use fraction::Fraction;
pub use item::{encode_transactions, Attribute, Indicators, Item, Transaction};
pub use itemset::Itemset;
pub use mining::{count_support, frequent_itemsets, generate_candidates, FrequentItemsets};
pub use oracle::{enumerate_frequent, enumerate_rules, ORACLE_ITEM_CAP};
pub use record::{
    parse_records, render_csv, LhLabel, ParsedLog, RowDiagnostic, SessionRecord, Status,
    EXPECTED_HEADER,
};
pub use rules::{derive_rules, rank_rules, MiningConfig, Rule, RuleKey};
pub use sensitivity::{
    cell_rules, default_tracked_rules, sweep_grid, CellAbsence, GridCell, StabilityRow,
    StabilityTable, ThresholdGrid,
};
pub use stats::{
    descriptive_stats, descriptive_stats_for, indicator_rates, IndicatorRates, StatsReport,
    StatsRow,
};
pub use synthgen::{
    default_profiles, generate_sessions, manifest_json, BehaviorProfile, CellProfiles, CountRange,
    GeneratorSpec, CELL_ORDER,
};

/// Compiles every fenced Rust block in the guide under `book/` as a
/// doc-test, so the guide's examples cannot drift from the library.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/data-model.md")]
    pub mod data_model {}
    #[doc = include_str!("../../../book/src/mining.md")]
    pub mod mining {}
    #[doc = include_str!("../../../book/src/rules.md")]
    pub mod rules {}
    #[doc = include_str!("../../../book/src/cohorts.md")]
    pub mod cohorts {}
    #[doc = include_str!("../../../book/src/sensitivity.md")]
    pub mod sensitivity {}
    #[doc = include_str!("../../../book/src/synthetic-data.md")]
    pub mod synthetic_data {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
