//! Threshold sensitivity sweeps for tracked rules.
//!
//! A rule's support, confidence, and lift depend only on the data, never on
//! the thresholds; thresholds decide reporting, not values. The sweep
//! therefore counts each tracked rule once per cohort and evaluates every
//! grid cell as a filter over those counts, which is exactly equivalent to
//! re-mining per cell.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cohort::{filter_cohort, CohortSpec};
use crate::cohorts::{count_rule, evaluate_rule, AbsenceReason, Presence};
use crate::error::{Error, Result};
use crate::export::format_significant;
use crate::fraction::Fraction;
use crate::item::{encode_transactions, Item};
use crate::itemset::Itemset;
use crate::mining::frequent_itemsets;
use crate::record::SessionRecord;
use crate::rules::{derive_rules, rank_rules, Rule, RuleKey};

/// Cartesian grid of support and confidence thresholds sharing one lift
/// threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdGrid {
    support_levels: Vec<Fraction>,
    confidence_levels: Vec<Fraction>,
    min_lift: Fraction,
}

/// One (support, confidence) grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridCell {
    pub min_support: Fraction,
    pub min_confidence: Fraction,
}

impl fmt::Display for GridCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={} c={}", self.min_support, self.min_confidence)
    }
}

impl ThresholdGrid {
    /// Validates that both level lists are non-empty, strictly increasing,
    /// and within (0, 1].
    pub fn new(
        support_levels: Vec<Fraction>,
        confidence_levels: Vec<Fraction>,
        min_lift: Fraction,
    ) -> Result<Self> {
        let check = |name: &str, levels: &[Fraction]| -> Result<()> {
            if levels.is_empty() {
                return Err(Error::InvalidConfig(format!("{name} levels must be non-empty")));
            }
            for level in levels {
                if !level.in_unit_interval() {
                    return Err(Error::InvalidConfig(format!(
                        "{name} level {level} outside (0, 1]"
                    )));
                }
            }
            if !levels.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidConfig(format!(
                    "{name} levels must be strictly increasing"
                )));
            }
            Ok(())
        };
        check("support", &support_levels)?;
        check("confidence", &confidence_levels)?;
        Ok(ThresholdGrid {
            support_levels,
            confidence_levels,
            min_lift,
        })
    }

    pub fn support_levels(&self) -> &[Fraction] {
        &self.support_levels
    }

    pub fn confidence_levels(&self) -> &[Fraction] {
        &self.confidence_levels
    }

    pub fn min_lift(&self) -> Fraction {
        self.min_lift
    }

    /// The loosest thresholds: one mining pass here covers every cell.
    pub fn loosest(&self) -> GridCell {
        GridCell {
            min_support: self.support_levels[0],
            min_confidence: self.confidence_levels[0],
        }
    }

    /// All cells, support-major, in ascending threshold order.
    pub fn cells(&self) -> Vec<GridCell> {
        let mut cells = Vec::with_capacity(self.support_levels.len() * self.confidence_levels.len());
        for &min_support in &self.support_levels {
            for &min_confidence in &self.confidence_levels {
                cells.push(GridCell {
                    min_support,
                    min_confidence,
                });
            }
        }
        cells
    }
}

impl Default for ThresholdGrid {
    /// Supports {0.15, 0.20, 0.25} by confidences {0.50, 0.60, 0.70}, lift
    /// strictly above 1: nine cells.
    fn default() -> Self {
        let frac = |n, d| Fraction::new(n, d).expect("static");
        ThresholdGrid {
            support_levels: vec![frac(3, 20), frac(1, 5), frac(1, 4)],
            confidence_levels: vec![frac(1, 2), frac(3, 5), frac(7, 10)],
            min_lift: Fraction::ONE,
        }
    }
}

/// The four rules followed across cohorts and cells by default.
pub fn default_tracked_rules() -> Vec<RuleKey<Item>> {
    let key = |ante: &[Item], cons: Item| {
        RuleKey::new(
            Itemset::new(ante.iter().copied()),
            Itemset::singleton(cons),
        )
        .expect("static keys are disjoint and non-empty")
    };
    vec![
        key(&[Item::SkippedYes], Item::StatusUnsolved),
        key(&[Item::SkippedYes, Item::HintNo], Item::StatusUnsolved),
        key(&[Item::MistakeYes, Item::SkippedYes], Item::StatusUnsolved),
        key(&[Item::SkippedNo], Item::StatusSolved),
    ]
}

/// An absent cell and the threshold that excluded the rule there.
#[derive(Clone, Debug, PartialEq)]
pub struct CellAbsence {
    pub cell: GridCell,
    pub reason: AbsenceReason,
}

/// One tracked rule in one cohort: its data-determined metrics plus the
/// cells where it is and is not reported.
#[derive(Clone, Debug)]
pub struct StabilityRow {
    pub cohort: String,
    rule: Rule<Item>,
    pub present: Vec<GridCell>,
    pub absent: Vec<CellAbsence>,
}

impl StabilityRow {
    pub fn key(&self) -> RuleKey<Item> {
        self.rule.key()
    }

    /// The rule with its raw cohort counts, whether or not any cell reports
    /// it.
    pub fn rule(&self) -> &Rule<Item> {
        &self.rule
    }

    /// The single lift value reported wherever the rule is present; `None`
    /// when no cell reports it.
    pub fn lift(&self) -> Option<f64> {
        (!self.present.is_empty()).then(|| self.rule.lift())
    }
}

/// Sweep output: rows in (cohort, tracked-rule) order.
#[derive(Clone, Debug)]
pub struct StabilityTable {
    pub grid: ThresholdGrid,
    pub rows: Vec<StabilityRow>,
}

/// Counts each tracked rule once per cohort and evaluates every grid cell.
/// Cohorts are processed in input order; empty cohorts are an error naming
/// the cohort.
pub fn sweep_grid(
    records: &[SessionRecord],
    cohorts: &[CohortSpec],
    grid: &ThresholdGrid,
    tracked: &[RuleKey<Item>],
) -> Result<StabilityTable> {
    if cohorts.is_empty() {
        return Err(Error::InvalidConfig("no cohorts to sweep".into()));
    }
    let cells = grid.cells();
    let mut rows = Vec::with_capacity(cohorts.len() * tracked.len());
    for spec in cohorts {
        let subset = filter_cohort(records, spec);
        if subset.is_empty() {
            return Err(Error::EmptyCohort(spec.name().to_string()));
        }
        let transactions = encode_transactions(&subset);
        for key in tracked {
            let counts = count_rule(&transactions, key);
            let (joint, ante, cons, n) = counts;
            let rule = Rule::from_counts(
                key.antecedent.clone(),
                key.consequent.clone(),
                joint,
                ante,
                cons,
                n,
            );
            let mut present = Vec::new();
            let mut absent = Vec::new();
            for &cell in &cells {
                match evaluate_rule(counts, cell.min_support, cell.min_confidence, grid.min_lift()) {
                    Presence::Present { .. } => present.push(cell),
                    Presence::Absent(reason) => absent.push(CellAbsence { cell, reason }),
                }
            }
            rows.push(StabilityRow {
                cohort: spec.name().to_string(),
                rule,
                present,
                absent,
            });
        }
    }
    Ok(StabilityTable {
        grid: grid.clone(),
        rows,
    })
}

/// The ranked rules one grid cell reports for one cohort: equivalent to a
/// standalone mining run at that cell's thresholds. Implemented as one
/// mining pass at the grid's loosest thresholds plus exact per-cell
/// filtering.
pub fn cell_rules(
    records: &[SessionRecord],
    spec: &CohortSpec,
    grid: &ThresholdGrid,
    cell: GridCell,
    top_k: usize,
) -> Result<Vec<Rule<Item>>> {
    if !grid.support_levels.contains(&cell.min_support)
        || !grid.confidence_levels.contains(&cell.min_confidence)
    {
        return Err(Error::InvalidConfig(format!("cell {cell} is not on the grid")));
    }
    let subset = filter_cohort(records, spec);
    if subset.is_empty() {
        return Err(Error::EmptyCohort(spec.name().to_string()));
    }
    let transactions = encode_transactions(&subset);
    let loosest = grid.loosest();
    let table = frequent_itemsets(&transactions, loosest.min_support)?;
    let all = derive_rules(&table, loosest.min_confidence, grid.min_lift());
    let filtered: Vec<Rule<Item>> = all
        .into_iter()
        .filter(|r| {
            cell.min_support
                .le_ratio(r.joint_count(), r.transaction_count())
                && cell.min_confidence.le_ratio(r.joint_count(), r.antecedent_count())
        })
        .collect();
    Ok(rank_rules(filtered, top_k))
}

impl StabilityTable {
    /// Plain-text table: cohorts as rows, tracked rules as columns, one lift
    /// value per cell (identical wherever present), with footnotes giving
    /// absence details.
    pub fn render_text(&self) -> String {
        let keys: Vec<RuleKey<Item>> = {
            let mut seen = Vec::new();
            for row in &self.rows {
                let key = row.key();
                if !seen.contains(&key) {
                    seen.push(key);
                }
            }
            seen
        };
        let cohorts: Vec<String> = {
            let mut seen = Vec::new();
            for row in &self.rows {
                if !seen.contains(&row.cohort) {
                    seen.push(row.cohort.clone());
                }
            }
            seen
        };

        let mut notes: Vec<String> = Vec::new();
        let mut cells: Vec<Vec<String>> = Vec::new();
        for cohort in &cohorts {
            let mut line = Vec::new();
            for key in &keys {
                let row = self
                    .rows
                    .iter()
                    .find(|r| &r.cohort == cohort && r.key() == *key)
                    .expect("sweep emits every (cohort, rule) pair");
                let mut cell = match row.lift() {
                    Some(lift) => format_significant(lift),
                    None => "-".to_string(),
                };
                if !row.absent.is_empty() {
                    let marker = footnote_marker(notes.len());
                    notes.push(format!(
                        "[{marker}] {cohort}, {key}: {}",
                        absence_summary(&row.absent)
                    ));
                    cell.push_str(&format!(" [{marker}]"));
                }
                line.push(cell);
            }
            cells.push(line);
        }

        let mut header = vec!["Cohort".to_string()];
        header.extend(keys.iter().map(|k| k.to_string()));
        let mut table_rows = vec![header];
        for (cohort, line) in cohorts.iter().zip(cells) {
            let mut row = vec![cohort.clone()];
            row.extend(line);
            table_rows.push(row);
        }

        let columns = table_rows[0].len();
        let widths: Vec<usize> = (0..columns)
            .map(|c| table_rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();

        let supports = join_fractions(&self.grid.support_levels);
        let confidences = join_fractions(&self.grid.confidence_levels);
        let mut out = format!(
            "Tracked-rule lift across {} threshold cells\n(support in {{{supports}}}; confidence in {{{confidences}}}; lift > {})\n\n",
            self.grid.support_levels.len() * self.grid.confidence_levels.len(),
            self.grid.min_lift
        );
        for (idx, row) in table_rows.iter().enumerate() {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    line.push_str("  ");
                }
                line.push_str(&format!("{:<width$}", cell, width = widths[c]));
            }
            out.push_str(line.trim_end());
            out.push('\n');
            if idx == 0 {
                let total = widths.iter().sum::<usize>() + 2 * (columns - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        if !notes.is_empty() {
            out.push_str("\nNotes:\n");
            for note in notes {
                out.push_str("  ");
                out.push_str(&note);
                out.push('\n');
            }
        }
        out
    }
}

/// Groups absences by reason and lists the cells for each, e.g.
/// `support 0.200000 < 0.25 at s=0.25 c=0.5, s=0.25 c=0.6`.
pub(crate) fn absence_summary(absences: &[CellAbsence]) -> String {
    let mut grouped: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for absence in absences {
        grouped
            .entry(absence.reason.to_string())
            .or_default()
            .push(absence.cell.to_string());
    }
    grouped
        .into_iter()
        .map(|(reason, cells)| format!("{reason} at {}", cells.join(", ")))
        .collect::<Vec<_>>()
        .join("; ")
}

fn footnote_marker(index: usize) -> String {
    let mut index = index;
    let mut out = String::new();
    loop {
        out.insert(0, (b'a' + (index % 26) as u8) as char);
        index /= 26;
        if index == 0 {
            break;
        }
        index -= 1;
    }
    out
}

fn join_fractions(levels: &[Fraction]) -> String {
    levels
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::parse_records;

    const MICRO: &str = include_str!("../../../data/sample_sessions.csv");

    fn micro_records() -> Vec<SessionRecord> {
        parse_records(MICRO.as_bytes()).unwrap().records
    }

    fn frac(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    #[test]
    fn default_grid_shape() {
        let grid = ThresholdGrid::default();
        assert_eq!(grid.cells().len(), 9);
        assert_eq!(grid.loosest().to_string(), "s=0.15 c=0.5");
        let labels: Vec<String> = grid.cells().iter().map(|c| c.to_string()).collect();
        assert_eq!(labels[0], "s=0.15 c=0.5");
        assert_eq!(labels[8], "s=0.25 c=0.7");
    }

    #[test]
    fn grid_validation() {
        assert!(ThresholdGrid::new(vec![], vec![frac("0.5")], Fraction::ONE).is_err());
        assert!(
            ThresholdGrid::new(vec![frac("0.2"), frac("0.2")], vec![frac("0.5")], Fraction::ONE)
                .is_err()
        );
        assert!(
            ThresholdGrid::new(vec![frac("0.3"), frac("0.2")], vec![frac("0.5")], Fraction::ONE)
                .is_err()
        );
        assert!(ThresholdGrid::new(vec![frac("0.2")], vec![frac("1.5")], Fraction::ONE).is_err());
        assert!(ThresholdGrid::new(vec![frac("0.2")], vec![frac("0.5")], Fraction::ZERO).is_ok());
    }

    #[test]
    fn tracked_rule_present_everywhere_has_constant_lift() {
        let table = sweep_grid(
            &micro_records(),
            &[CohortSpec::overall()],
            &ThresholdGrid::default(),
            &default_tracked_rules(),
        )
        .unwrap();
        // {Skipped=YES} => {Status=UNSOLVED}: support 6/17 ≈ 0.353 ≥ 0.25,
        // confidence 1.0 ≥ 0.70: present in all nine cells at lift 17/13.
        let row = &table.rows[0];
        assert_eq!(row.key().to_string(), "Skipped=YES => Status=UNSOLVED");
        assert_eq!(row.present.len(), 9);
        assert!(row.absent.is_empty());
        assert!((row.lift().unwrap() - 17.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn absence_reports_first_failing_threshold() {
        let table = sweep_grid(
            &micro_records(),
            &[CohortSpec::overall()],
            &ThresholdGrid::default(),
            &default_tracked_rules(),
        )
        .unwrap();
        // {Skipped=NO} => {Status=SOLVED}: support 4/17 ≈ 0.235, confidence
        // 4/11 ≈ 0.364. Confidence fails everywhere; at s=0.25 the support
        // shortfall is reported first.
        let row = &table.rows[3];
        assert_eq!(row.key().to_string(), "Skipped=NO => Status=SOLVED");
        assert!(row.present.is_empty());
        assert!(row.lift().is_none());
        assert_eq!(row.absent.len(), 9);
        for absence in &row.absent {
            if absence.cell.min_support == frac("0.25") {
                match &absence.reason {
                    AbsenceReason::BelowSupport { observed, .. } => {
                        assert!((observed - 4.0 / 17.0).abs() < 1e-12);
                    }
                    other => panic!("expected support shortfall, got {other:?}"),
                }
            } else {
                match &absence.reason {
                    AbsenceReason::BelowConfidence { observed, .. } => {
                        assert!((observed - 4.0 / 11.0).abs() < 1e-12);
                    }
                    other => panic!("expected confidence shortfall, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn low_cohort_boundary_cells() {
        // Low LH: {Skipped=YES} => {Status=UNSOLVED} has support exactly
        // 0.20: present at s ∈ {0.15, 0.20}, absent at s=0.25.
        let table = sweep_grid(
            &micro_records(),
            &[CohortSpec::low_lh()],
            &ThresholdGrid::default(),
            &default_tracked_rules(),
        )
        .unwrap();
        let row = &table.rows[0];
        assert_eq!(row.present.len(), 6);
        assert_eq!(row.absent.len(), 3);
        assert!((row.lift().unwrap() - 1.25).abs() < 1e-12);
        for absence in &row.absent {
            assert_eq!(absence.cell.min_support, frac("0.25"));
            assert!(matches!(absence.reason, AbsenceReason::BelowSupport { .. }));
        }
    }

    #[test]
    fn presence_is_monotone_in_thresholds() {
        let grid = ThresholdGrid::default();
        let table = sweep_grid(
            &micro_records(),
            &[CohortSpec::overall(), CohortSpec::low_lh(), CohortSpec::high_lh()],
            &grid,
            &default_tracked_rules(),
        )
        .unwrap();
        for row in &table.rows {
            for cell in &row.present {
                for looser in grid.cells() {
                    if looser.min_support <= cell.min_support
                        && looser.min_confidence <= cell.min_confidence
                    {
                        assert!(
                            row.present.contains(&looser),
                            "present at {cell} but not at looser {looser}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn empty_cohort_propagates_name() {
        let err = sweep_grid(
            &micro_records(),
            &[CohortSpec::without_intervention()],
            &ThresholdGrid::default(),
            &default_tracked_rules(),
        )
        .unwrap_err();
        match err {
            Error::EmptyCohort(name) => assert_eq!(name, "Without Intervention"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_grid_matches_single_run() {
        let grid = ThresholdGrid::new(vec![frac("0.2")], vec![frac("0.6")], Fraction::ONE).unwrap();
        let table = sweep_grid(
            &micro_records(),
            &[CohortSpec::overall()],
            &grid,
            &default_tracked_rules(),
        )
        .unwrap();
        assert_eq!(table.rows.len(), 4);
        for row in &table.rows {
            assert_eq!(row.present.len() + row.absent.len(), 1);
        }
        // {Skipped=YES} => {Status=UNSOLVED} is reported by a default mine.
        assert_eq!(table.rows[0].present.len(), 1);
    }

    #[test]
    fn text_rendering_lists_footnotes() {
        let table = sweep_grid(
            &micro_records(),
            &[CohortSpec::overall(), CohortSpec::low_lh()],
            &ThresholdGrid::default(),
            &default_tracked_rules(),
        )
        .unwrap();
        let text = table.render_text();
        assert!(text.contains("Tracked-rule lift across 9 threshold cells"));
        assert!(text.contains("Cohort"));
        assert!(text.contains("Overall"));
        assert!(text.contains("Low LH"));
        // Overall skip rule: present everywhere, no marker on its value.
        assert!(text.contains("1.30769"));
        // Low's boundary rule is absent at s=0.25: marker plus footnote.
        assert!(text.contains("1.25000 ["));
        assert!(text.contains("support 0.200000 < 0.25 at s=0.25 c=0.5, s=0.25 c=0.6, s=0.25 c=0.7"));
        // The never-present rule renders as a dash.
        assert!(text.contains("- ["));
    }

    #[test]
    fn footnote_markers_extend_past_z() {
        assert_eq!(footnote_marker(0), "a");
        assert_eq!(footnote_marker(25), "z");
        assert_eq!(footnote_marker(26), "aa");
        assert_eq!(footnote_marker(27), "ab");
    }
}
