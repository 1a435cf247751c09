//! Descriptive indicator rates per cohort.

use serde::Serialize;

use crate::cohort::{standard_cohorts, CohortSpec};
use crate::error::{Error, Result};
use crate::record::{SessionRecord, Status};

/// Share of sessions with each indicator set, over some record slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IndicatorRates {
    pub mistake: f64,
    pub hint: f64,
    pub skipped: f64,
    pub solved: f64,
}

/// Computes indicator rates; errors on an empty slice because rates over
/// zero sessions are undefined.
pub fn indicator_rates(records: &[SessionRecord]) -> Result<IndicatorRates> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let n = records.len() as f64;
    let count = |pred: fn(&SessionRecord) -> bool| records.iter().filter(|r| pred(r)).count() as f64;
    Ok(IndicatorRates {
        mistake: count(|r| r.mistake_occurred) / n,
        hint: count(|r| r.hint_used) / n,
        skipped: count(|r| r.skipped) / n,
        solved: count(|r| r.status == Status::Solved) / n,
    })
}

/// One line of the descriptive report. `rates` is `None` when the cohort is
/// empty.
#[derive(Clone, Debug, Serialize)]
pub struct StatsRow {
    pub cohort: String,
    pub sessions: usize,
    pub rates: Option<IndicatorRates>,
}

/// Indicator rates for the overall population and the standard cohorts.
#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub rows: Vec<StatsRow>,
}

/// Builds the descriptive report over the standard cohorts. Empty cohorts
/// produce a zero-session row rather than an error; an entirely empty input
/// is rejected.
pub fn descriptive_stats(records: &[SessionRecord]) -> Result<StatsReport> {
    descriptive_stats_for(records, &standard_cohorts())
}

/// Same as [`descriptive_stats`] but over caller-chosen cohorts.
pub fn descriptive_stats_for(
    records: &[SessionRecord],
    cohorts: &[CohortSpec],
) -> Result<StatsReport> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let rows = cohorts
        .iter()
        .map(|spec| {
            let (mut n, mut mistake, mut hint, mut skipped, mut solved) = (0usize, 0, 0, 0, 0);
            for r in records.iter().filter(|r| spec.matches(r)) {
                n += 1;
                mistake += r.mistake_occurred as usize;
                hint += r.hint_used as usize;
                skipped += r.skipped as usize;
                solved += (r.status == Status::Solved) as usize;
            }
            let rates = (n > 0).then(|| IndicatorRates {
                mistake: mistake as f64 / n as f64,
                hint: hint as f64 / n as f64,
                skipped: skipped as f64 / n as f64,
                solved: solved as f64 / n as f64,
            });
            StatsRow {
                cohort: spec.name().to_string(),
                sessions: n,
                rates,
            }
        })
        .collect();
    Ok(StatsReport { rows })
}
