//! CSV and number rendering for analysis results.
//!
//! CSV output is byte-deterministic: fixed headers, `\n` line endings, a
//! trailing newline, and floats in Rust's shortest round-trip form so that
//! parsing a cell back recovers the exact value. Fields are quoted only when
//! they contain a comma, quote, or newline.

use std::fmt::Display;

use crate::cohorts::{ComparisonReport, Presence};
use crate::mining::FrequentItemsets;
use crate::rules::Rule;
use crate::sensitivity::{absence_summary, StabilityTable};
use crate::stats::StatsReport;

/// Formats a value with six significant digits in fixed-point notation, the
/// form used by the plain-text reports. CSV cells use full precision
/// instead.
pub fn format_significant(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return format!("{:.5}", 0.0);
    }
    // The exponent of the scientific rendering locates the leading digit.
    let sci = format!("{value:e}");
    let exp: i32 = sci[sci.find('e').expect("scientific notation") + 1..]
        .parse()
        .expect("exponent is an integer");
    let decimals = (5 - exp).max(0) as usize;
    format!("{value:.decimals$}")
}

/// Full-precision float cell: shortest string that parses back to the same
/// value.
fn float_cell(value: f64) -> String {
    if value.is_finite() {
        value.to_string()
    } else {
        String::new()
    }
}

fn quote_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn push_row(out: &mut String, fields: &[String]) {
    for (i, field) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&quote_field(field));
    }
    out.push('\n');
}

/// Frequent itemsets as `itemset,support`, highest support first, ties in
/// canonical itemset order.
pub fn itemsets_csv<T: Display + Ord + Clone>(table: &FrequentItemsets<T>) -> String {
    let mut entries: Vec<(&crate::itemset::Itemset<T>, u64)> = table.iter().collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n = table.transaction_count();
    let mut out = String::from("itemset,support\n");
    for (itemset, count) in entries {
        push_row(
            &mut out,
            &[itemset.to_string(), float_cell(count as f64 / n as f64)],
        );
    }
    out
}

/// Ranked rules as `antecedent,consequent,support,confidence,lift`, in the
/// order given (callers pass the ranked list).
pub fn rules_csv<T: Display + Ord + Clone>(rules: &[Rule<T>]) -> String {
    let mut out = String::from("antecedent,consequent,support,confidence,lift\n");
    for rule in rules {
        push_row(
            &mut out,
            &[
                rule.antecedent().to_string(),
                rule.consequent().to_string(),
                float_cell(rule.support()),
                float_cell(rule.confidence()),
                float_cell(rule.lift()),
            ],
        );
    }
    out
}

/// Descriptive statistics as
/// `cohort,sessions,mistake_rate,hint_rate,skip_rate,solve_rate`. Cohorts
/// with no sessions leave the rate cells empty.
pub fn stats_csv(report: &StatsReport) -> String {
    let mut out = String::from("cohort,sessions,mistake_rate,hint_rate,skip_rate,solve_rate\n");
    for row in &report.rows {
        let rates = match &row.rates {
            Some(r) => [
                float_cell(r.mistake),
                float_cell(r.hint),
                float_cell(r.skipped),
                float_cell(r.solved),
            ],
            None => Default::default(),
        };
        push_row(
            &mut out,
            &[
                row.cohort.clone(),
                row.sessions.to_string(),
                rates[0].clone(),
                rates[1].clone(),
                rates[2].clone(),
                rates[3].clone(),
            ],
        );
    }
    out
}

fn presence_cells(presence: &Presence) -> (String, String, String) {
    match presence {
        Presence::Present {
            support,
            confidence,
            lift,
        } => (float_cell(*lift), float_cell(*confidence), float_cell(*support)),
        Presence::Absent(_) => (String::new(), String::new(), String::new()),
    }
}

/// Cohort comparison as
/// `rule,cohort_a_lift,cohort_b_lift,delta,cohort_a_conf,cohort_b_conf,cohort_a_support,cohort_b_support,absent_reason`.
/// Metric cells are empty on the side where the rule is absent; the reason
/// column names the cohort(s) with the failed threshold.
pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut out = String::from(
        "rule,cohort_a_lift,cohort_b_lift,delta,cohort_a_conf,cohort_b_conf,cohort_a_support,cohort_b_support,absent_reason\n",
    );
    for row in &report.rows {
        let (a_lift, a_conf, a_support) = presence_cells(&row.a);
        let (b_lift, b_conf, b_support) = presence_cells(&row.b);
        let mut reasons = Vec::new();
        if let Presence::Absent(reason) = &row.a {
            reasons.push(format!("{}: {reason}", report.cohort_a));
        }
        if let Presence::Absent(reason) = &row.b {
            reasons.push(format!("{}: {reason}", report.cohort_b));
        }
        push_row(
            &mut out,
            &[
                row.key.to_string(),
                a_lift,
                b_lift,
                row.lift_delta.map(float_cell).unwrap_or_default(),
                a_conf,
                b_conf,
                a_support,
                b_support,
                reasons.join("; "),
            ],
        );
    }
    out
}

/// Threshold sweep as
/// `cohort,rule,lift,cells_present,cells_absent,absence_detail`. Lift comes
/// from the cohort's raw counts, so it is filled even for a rule no cell
/// reports; it is empty only when undefined (a zero denominator).
pub fn stability_csv(table: &StabilityTable) -> String {
    let mut out = String::from("cohort,rule,lift,cells_present,cells_absent,absence_detail\n");
    for row in &table.rows {
        push_row(
            &mut out,
            &[
                row.cohort.clone(),
                row.key().to_string(),
                float_cell(row.rule().lift()),
                row.present.len().to_string(),
                row.absent.len().to_string(),
                absence_summary(&row.absent),
            ],
        );
    }
    out
}
