//! Cohort definitions and record filtering.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::record::{LhLabel, SessionRecord};

/// A conjunction of optional record predicates: questionnaire band and
/// intervention flag. `None` on a field means "any".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohortSpec {
    pub lh: Option<LhLabel>,
    pub intervention: Option<bool>,
    name: String,
}

impl CohortSpec {
    pub fn new(name: impl Into<String>, lh: Option<LhLabel>, intervention: Option<bool>) -> Self {
        CohortSpec {
            lh,
            intervention,
            name: name.into(),
        }
    }

    /// All records.
    pub fn overall() -> Self {
        CohortSpec::new("Overall", None, None)
    }

    pub fn low_lh() -> Self {
        CohortSpec::new("Low LH", Some(LhLabel::Low), None)
    }

    pub fn high_lh() -> Self {
        CohortSpec::new("High LH", Some(LhLabel::High), None)
    }

    pub fn with_intervention() -> Self {
        CohortSpec::new("With Intervention", None, Some(true))
    }

    pub fn without_intervention() -> Self {
        CohortSpec::new("Without Intervention", None, Some(false))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Lowercase underscore form of the name, used as a file prefix.
    pub fn slug(&self) -> String {
        self.name
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() {
                    c.to_ascii_lowercase()
                } else {
                    '_'
                }
            })
            .collect()
    }

    pub fn matches(&self, record: &SessionRecord) -> bool {
        self.lh.is_none_or(|lh| record.lh_label == lh)
            && self
                .intervention
                .is_none_or(|flag| record.with_intervention == flag)
    }
}

impl fmt::Display for CohortSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// The overall population plus the four analysis subgroups.
pub fn standard_cohorts() -> Vec<CohortSpec> {
    vec![
        CohortSpec::overall(),
        CohortSpec::low_lh(),
        CohortSpec::high_lh(),
        CohortSpec::with_intervention(),
        CohortSpec::without_intervention(),
    ]
}

/// The matching subset of `records`, in input order.
pub fn filter_cohort(records: &[SessionRecord], spec: &CohortSpec) -> Vec<SessionRecord> {
    records
        .iter()
        .filter(|r| spec.matches(r))
        .cloned()
        .collect()
}
