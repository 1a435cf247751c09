//! Release gate for the toolkit. Each criterion prints exactly one
//! `[acceptance] criterion N (...): PASS` or `... FAIL: reason` line and
//! then asserts, so `cargo test --test acceptance -- --nocapture` shows the
//! full scorecard and any failure carries its reason.

// The check! macro negates arbitrary boolean conditions, floats included.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use lhmine::{
    cell_rules, compare_cohorts, default_tracked_rules, derive_rules, descriptive_stats,
    enumerate_frequent, enumerate_rules, frequent_itemsets, generate_sessions, mine_cohort,
    parse_records, standard_cohorts, sweep_grid, CohortSpec, Fraction, GeneratorSpec, Item,
    Itemset, MiningConfig, Rule, RuleKey, SessionRecord, ThresholdGrid,
};
use rand_core::{RngCore, SeedableRng};

type Rng = rand_chacha::ChaCha12Rng;
type RatePick = fn(&lhmine::IndicatorRates) -> f64;

const MICRO: &str = include_str!("../../../data/sample_sessions.csv");

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn report(number: u8, name: &str, outcome: Result<(), String>) {
    match &outcome {
        Ok(()) => println!("[acceptance] criterion {number} ({name}): PASS"),
        Err(why) => println!("[acceptance] criterion {number} ({name}): FAIL: {why}"),
    }
    if let Err(why) = outcome {
        panic!("criterion {number} ({name}): {why}");
    }
}

fn unit(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn pick(rng: &mut Rng, lo: u64, hi: u64) -> u64 {
    lo + rng.next_u64() % (hi - lo + 1)
}

fn random_dataset(rng: &mut Rng, max_vocab: u64, max_rows: u64) -> Vec<Itemset<u8>> {
    let vocab = pick(rng, 2, max_vocab) as u8;
    let n = pick(rng, 1, max_rows);
    let density = 0.15 + 0.65 * unit(rng);
    (0..n)
        .map(|_| Itemset::new((0..vocab).filter(|_| unit(rng) < density)))
        .collect()
}

fn random_fraction(rng: &mut Rng) -> Fraction {
    let den = pick(rng, 2, 29);
    let num = pick(rng, 1, den);
    Fraction::new(num, den).unwrap()
}

fn random_lift_floor(rng: &mut Rng) -> Fraction {
    let choices = ["0", "0.5", "0.9", "1", "1.1", "1.5"];
    choices[pick(rng, 0, choices.len() as u64 - 1) as usize]
        .parse()
        .unwrap()
}

fn micro_records() -> Vec<SessionRecord> {
    parse_records(MICRO.as_bytes()).unwrap().records
}

fn skip_key() -> RuleKey<Item> {
    "Skipped=YES => Status=UNSOLVED".parse().unwrap()
}

// Criterion 1: the level-wise miner and the exhaustive enumerator agree on
// randomized datasets, itemset for itemset and rule for rule.

fn same_rules(mined: &[Rule<u8>], oracle: &[Rule<u8>], context: &str) -> Result<(), String> {
    check!(
        mined.len() == oracle.len(),
        "{context}: {} mined rules vs {} enumerated",
        mined.len(),
        oracle.len()
    );
    for (m, o) in mined.iter().zip(oracle) {
        check!(
            m.antecedent() == o.antecedent() && m.consequent() == o.consequent(),
            "{context}: rule sets diverge at {m} vs {o}"
        );
        check!(
            m.joint_count() == o.joint_count()
                && m.antecedent_count() == o.antecedent_count()
                && m.consequent_count() == o.consequent_count(),
            "{context}: counts diverge on {m}"
        );
        check!(
            (m.support() - o.support()).abs() <= 1e-12
                && (m.confidence() - o.confidence()).abs() <= 1e-12
                && (m.lift() - o.lift()).abs() <= 1e-12,
            "{context}: metrics diverge on {m}"
        );
    }
    Ok(())
}

fn dual_route_equivalence() -> Result<(), String> {
    let started = Instant::now();
    for case in 0..200u64 {
        let mut rng = Rng::seed_from_u64(0xAC10 + case);
        let transactions = random_dataset(&mut rng, 12, 500);
        let min_support = random_fraction(&mut rng);
        let min_confidence = random_fraction(&mut rng);
        let min_lift = random_lift_floor(&mut rng);
        let context = format!(
            "case {case} (n={}, support={min_support}, confidence={min_confidence}, lift={min_lift})",
            transactions.len()
        );

        let mined = frequent_itemsets(&transactions, min_support)
            .map_err(|e| format!("{context}: miner failed: {e}"))?;
        let oracle = enumerate_frequent(&transactions, min_support)
            .map_err(|e| format!("{context}: enumerator failed: {e}"))?;
        let a: Vec<_> = mined.iter().collect();
        let b: Vec<_> = oracle.iter().collect();
        check!(a == b, "{context}: frequent itemsets diverge");

        let mut derived = derive_rules(&mined, min_confidence, min_lift);
        derived.sort_by(|x, y| {
            x.antecedent()
                .cmp(y.antecedent())
                .then_with(|| x.consequent().cmp(y.consequent()))
        });
        let enumerated = enumerate_rules(&transactions, min_support, min_confidence, min_lift)
            .map_err(|e| format!("{context}: enumerator failed: {e}"))?;
        same_rules(&derived, &enumerated, &context)?;
    }
    let elapsed = started.elapsed();
    check!(
        elapsed < Duration::from_secs(60),
        "200 cases took {elapsed:?}, budget is 60s"
    );
    Ok(())
}

#[test]
fn criterion_1() {
    report(1, "dual-route equivalence", dual_route_equivalence());
}

// Criterion 2: frozen metrics on the bundled 17-session log.

fn reference_corpus_metrics() -> Result<(), String> {
    let records = micro_records();
    let config = MiningConfig::default();
    let skip = skip_key();

    let overall = mine_cohort(&records, &CohortSpec::overall(), &config).unwrap();
    let rule = overall
        .rules
        .iter()
        .find(|r| r.key() == skip)
        .ok_or("skip rule missing from the overall ranking")?;
    check!(
        (rule.support() - 6.0 / 17.0).abs() <= 1e-9,
        "overall support {} != 6/17",
        rule.support()
    );
    check!(
        (rule.confidence() - 1.0).abs() <= 1e-9,
        "overall confidence {} != 1",
        rule.confidence()
    );
    check!(
        (rule.lift() - 17.0 / 13.0).abs() <= 1e-9,
        "overall lift {} != 17/13",
        rule.lift()
    );

    let reverse: RuleKey<Item> = "Status=UNSOLVED => Skipped=YES".parse().unwrap();
    check!(
        overall.rules.iter().all(|r| r.key() != reverse),
        "reversed rule should fail the confidence floor"
    );
    let (joint, ante, _, _) = overall.raw_counts(&reverse);
    check!(
        (joint, ante) == (6, 13),
        "reversed rule counts drifted: joint={joint}, antecedent={ante}"
    );

    let high = mine_cohort(&records, &CohortSpec::high_lh(), &config).unwrap();
    let rule = high
        .rules
        .iter()
        .find(|r| r.key() == skip)
        .ok_or("skip rule missing from the high-LH ranking")?;
    check!(
        (rule.lift() - 4.0 / 3.0).abs() <= 1e-9,
        "high-LH lift {} != 4/3",
        rule.lift()
    );

    let low = mine_cohort(&records, &CohortSpec::low_lh(), &config).unwrap();
    let report = compare_cohorts(&low, &high).unwrap();
    let row = report
        .rows
        .iter()
        .find(|r| r.key == skip)
        .ok_or("skip rule missing from the comparison")?;
    let low_lift = row.a.lift().ok_or("low-LH lift unavailable")?;
    check!(
        (low_lift - 5.0 / 4.0).abs() <= 1e-9,
        "low-LH lift {low_lift} != 5/4"
    );
    let delta = row.lift_delta.ok_or("lift delta unavailable")?;
    check!(
        (delta - (4.0 / 3.0 - 5.0 / 4.0)).abs() <= 1e-9,
        "lift delta {delta} != 1/12"
    );
    Ok(())
}

#[test]
fn criterion_2() {
    report(2, "reference corpus metrics", reference_corpus_metrics());
}

// Criterion 3: threshold sweeps never move a rule's lift, and presence only
// grows as thresholds loosen.

fn sweep_datasets() -> Vec<(String, Vec<SessionRecord>, Vec<CohortSpec>)> {
    let micro_cohorts = vec![
        CohortSpec::overall(),
        CohortSpec::low_lh(),
        CohortSpec::high_lh(),
        CohortSpec::with_intervention(),
    ];
    let mut datasets = vec![("micro".to_string(), micro_records(), micro_cohorts)];
    for (seed, students, sessions) in [(3u64, 10, 5), (4242, 25, 8)] {
        let spec = GeneratorSpec::with_default_profiles(seed, students, sessions);
        let records = generate_sessions(&spec).unwrap();
        datasets.push((format!("synthetic seed {seed}"), records, standard_cohorts()));
    }
    datasets
}

fn threshold_sweep_stability() -> Result<(), String> {
    let grid = ThresholdGrid::default();
    let tracked = default_tracked_rules();
    for (name, records, cohorts) in sweep_datasets() {
        let table = sweep_grid(&records, &cohorts, &grid, &tracked)
            .map_err(|e| format!("{name}: sweep failed: {e}"))?;
        for row in &table.rows {
            let spec = cohorts
                .iter()
                .find(|s| s.name() == row.cohort)
                .expect("sweep rows only name requested cohorts");

            // Presence is monotone: loosening both thresholds keeps a rule.
            for cell in &row.present {
                for looser in grid.cells() {
                    let loosened = looser.min_support <= cell.min_support
                        && looser.min_confidence <= cell.min_confidence;
                    check!(
                        !loosened || row.present.contains(&looser),
                        "{name}, {}, {}: present at {cell} but absent at {looser}",
                        row.cohort,
                        row.key()
                    );
                }
            }

            // The lift in every present cell is the same f64, bit for bit,
            // and literal re-mining of the cell agrees on presence.
            for cell in grid.cells() {
                let full = cell_rules(&records, spec, &grid, cell, usize::MAX)
                    .map_err(|e| format!("{name}: re-mining {cell} failed: {e}"))?;
                let remined = full.iter().find(|r| r.key() == row.key());
                check!(
                    remined.is_some() == row.present.contains(&cell),
                    "{name}, {}, {}, {cell}: sweep and re-mining disagree on presence",
                    row.cohort,
                    row.key()
                );
                if let Some(rule) = remined {
                    check!(
                        rule.lift().to_bits() == row.rule().lift().to_bits(),
                        "{name}, {}, {}, {cell}: lift moved with the thresholds",
                        row.cohort,
                        row.key()
                    );
                }
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_3() {
    report(3, "threshold sweep stability", threshold_sweep_stability());
}

// Criterion 4: support is anti-monotone, and raising the support floor only
// filters the itemset table.

fn support_anti_monotonicity() -> Result<(), String> {
    for case in 0..80u64 {
        let mut rng = Rng::seed_from_u64(0xA40 + case);
        let transactions = random_dataset(&mut rng, 10, 250);
        let lo = random_fraction(&mut rng);
        let hi = random_fraction(&mut rng);
        let (lo, hi) = if lo.le_ratio(hi.numerator(), hi.denominator()) {
            (lo, hi)
        } else {
            (hi, lo)
        };
        let context = format!("case {case} (n={}, lo={lo}, hi={hi})", transactions.len());

        let loose = frequent_itemsets(&transactions, lo).unwrap();
        for (itemset, count) in loose.iter() {
            // Every non-empty proper subset is at least as frequent.
            let items = itemset.items();
            for mask in 1..(1u32 << items.len()) - 1 {
                let subset = Itemset::new(
                    items
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, item)| *item),
                );
                let sub_count = loose
                    .count_of(&subset)
                    .ok_or_else(|| format!("{context}: {subset} missing though {itemset} kept"))?;
                check!(
                    sub_count >= count,
                    "{context}: count({subset})={sub_count} < count({itemset})={count}"
                );
            }
        }

        // A higher floor filters the table and rewrites nothing.
        let tight = frequent_itemsets(&transactions, hi).unwrap();
        let n = transactions.len() as u64;
        for (itemset, count) in tight.iter() {
            check!(
                loose.count_of(itemset) == Some(count),
                "{context}: {itemset} changed count under a higher floor"
            );
        }
        let survivors = loose
            .iter()
            .filter(|(_, count)| hi.le_ratio(*count, n))
            .count();
        check!(
            survivors == tight.len(),
            "{context}: {survivors} survivors expected, {} mined",
            tight.len()
        );
    }
    Ok(())
}

#[test]
fn criterion_4() {
    report(4, "support anti-monotonicity", support_anti_monotonicity());
}

// Criterion 5: the generator reproduces its published marginals within 0.02
// on 10,000+ sessions per cell, and skipping predicts non-completion in
// every cohort.

fn generator_calibration() -> Result<(), String> {
    let started = Instant::now();
    let spec = GeneratorSpec::with_default_profiles(42, 667, 15);
    let records = generate_sessions(&spec).unwrap();
    check!(
        records.len() == 40_020,
        "expected 40,020 sessions, got {}",
        records.len()
    );

    let stats = descriptive_stats(&records).unwrap();
    let rate_of = |cohort: &str, pick: RatePick| -> Result<f64, String> {
        let row = stats
            .rows
            .iter()
            .find(|r| r.cohort == cohort)
            .ok_or_else(|| format!("cohort {cohort} missing from the stats report"))?;
        let rates = row
            .rates
            .as_ref()
            .ok_or_else(|| format!("cohort {cohort} is empty"))?;
        Ok(pick(rates))
    };
    let targets: [(&str, RatePick, f64); 8] = [
        ("With Intervention", |r| r.skipped, 0.537),
        ("Without Intervention", |r| r.skipped, 0.351),
        ("With Intervention", |r| r.solved, 0.188),
        ("Without Intervention", |r| r.solved, 0.201),
        ("With Intervention", |r| r.hint, 0.141),
        ("Without Intervention", |r| r.hint, 0.342),
        ("Low LH", |r| r.mistake, 0.418),
        ("High LH", |r| r.mistake, 0.444),
    ];
    for (cohort, pick, target) in targets {
        let observed = rate_of(cohort, pick)?;
        check!(
            (observed - target).abs() <= 0.02,
            "{cohort}: observed {observed:.6}, target {target} (tolerance 0.02)"
        );
    }

    // Skipping must raise the odds of not solving in every cohort, under
    // exact arithmetic.
    let config = MiningConfig::default();
    let skip = skip_key();
    for cohort in standard_cohorts() {
        let result = mine_cohort(&records, &cohort, &config).unwrap();
        let (joint, ante, cons, n) = result.raw_counts(&skip);
        check!(
            ante > 0 && cons > 0,
            "{}: degenerate counts for the skip rule",
            cohort.name()
        );
        check!(
            Fraction::ONE.lt_ratio_wide(
                joint as u128 * n as u128,
                ante as u128 * cons as u128
            ),
            "{}: lift of {skip} is not above 1 (joint={joint}, ante={ante}, cons={cons}, n={n})",
            cohort.name()
        );
    }

    let elapsed = started.elapsed();
    check!(
        elapsed < Duration::from_secs(30),
        "calibration run took {elapsed:?}, budget is 30s"
    );
    Ok(())
}

#[test]
fn criterion_5() {
    report(5, "generator calibration", generator_calibration());
}

// Criterion 6: the binary's artifacts are byte-identical across repeated
// runs and across thread counts, manifests included.

fn run_binary(args: &[&str]) -> Result<(), String> {
    let output = Command::new(env!("CARGO_BIN_EXE_lhmine"))
        .args(args)
        .output()
        .map_err(|e| format!("failed to spawn the binary: {e}"))?;
    if output.status.success() {
        Ok(())
    } else {
        Err(format!(
            "`lhmine {}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&output.stderr)
        ))
    }
}

fn dir_listing(dir: &Path) -> Result<Vec<String>, String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map_err(|e| format!("cannot list {}: {e}", dir.display()))?
        .map(|entry| entry.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    Ok(names)
}

fn same_artifacts(a: &Path, b: &Path, context: &str) -> Result<(), String> {
    let names = dir_listing(a)?;
    check!(
        names == dir_listing(b)?,
        "{context}: the two runs emitted different file sets"
    );
    for name in names {
        let left = fs::read(a.join(&name)).unwrap();
        let right = fs::read(b.join(&name)).unwrap();
        check!(
            left == right,
            "{context}: {name} differs between the two runs"
        );
    }
    Ok(())
}

fn reproducible_artifacts() -> Result<(), String> {
    let root = tempfile::tempdir().unwrap();
    let dir = |name: &str| root.path().join(name);
    let arg = |path: &Path| path.to_str().unwrap().to_string();

    // Identically seeded generator runs.
    for name in ["synth_a", "synth_b"] {
        run_binary(&[
            "synth",
            "--out-dir",
            &arg(&dir(name)),
            "--seed",
            "42",
            "--students-per-cell",
            "120",
            "--sessions-per-student",
            "8",
        ])?;
    }
    same_artifacts(&dir("synth_a"), &dir("synth_b"), "seeded generation")?;

    // The full cohort pipeline under one thread and under several.
    let sessions = arg(&dir("synth_a").join("sessions.csv"));
    for (name, threads) in [("cohorts_t1", "1"), ("cohorts_t4", "4")] {
        run_binary(&[
            "--threads",
            threads,
            "cohorts",
            "--input",
            &sessions,
            "--out-dir",
            &arg(&dir(name)),
        ])?;
    }
    same_artifacts(&dir("cohorts_t1"), &dir("cohorts_t4"), "thread counts")?;

    // Repeated sweeps over the same input.
    for name in ["sweep_a", "sweep_b"] {
        run_binary(&["sweep", "--input", &sessions, "--out-dir", &arg(&dir(name))])?;
    }
    same_artifacts(&dir("sweep_a"), &dir("sweep_b"), "repeated sweeps")?;
    Ok(())
}

#[test]
fn criterion_6() {
    report(6, "reproducible artifacts", reproducible_artifacts());
}

// Criterion 7: ingestion drops every malformed row with a line-numbered
// diagnostic and survives arbitrary input without panicking.

fn valid_row(rng: &mut Rng, index: u64) -> String {
    let yn = |rng: &mut Rng| if unit(rng) < 0.5 { "YES" } else { "NO" };
    format!(
        "F{index:03},{},{},{},{},{},{},{},{},{},{}",
        yn(rng),
        yn(rng),
        yn(rng),
        if unit(rng) < 0.5 { "SOLVED" } else { "UNSOLVED" },
        pick(rng, 0, 20),
        pick(rng, 0, 5),
        pick(rng, 0, 30),
        pick(rng, 0, 999),
        yn(rng),
        if unit(rng) < 0.5 { "Low" } else { "High" },
    )
}

fn corrupt_row(rng: &mut Rng, index: u64) -> String {
    let base = valid_row(rng, index);
    let fields: Vec<&str> = base.split(',').collect();
    let rebuild = |fields: &[&str]| fields.join(",");
    match pick(rng, 0, 7) {
        0 => {
            let mut f = fields.clone();
            f[1] = "MAYBE";
            rebuild(&f)
        }
        1 => {
            let mut f = fields.clone();
            f[4] = "PENDING";
            rebuild(&f)
        }
        2 => {
            let mut f = fields.clone();
            f[10] = "MID";
            rebuild(&f)
        }
        3 => {
            let mut f = fields.clone();
            f[5] = "abc";
            rebuild(&f)
        }
        4 => {
            let mut f = fields.clone();
            f[8] = "-5";
            rebuild(&f)
        }
        5 => rebuild(&fields[..10]),
        6 => format!("{base},EXTRA"),
        _ => {
            let mut f = fields.clone();
            f[7] = "99999999999999999999";
            rebuild(&f)
        }
    }
}

fn ingestion_rejects_malformed_rows() -> Result<(), String> {
    let mut rng = Rng::seed_from_u64(0xF422);
    let header = "Account,MistakeOccurred,HintUsed,Skipped,Status,TotalSteps,TotalHints,\
                  TotalAnswerAttempts,TimeSpent,With Intervention,Label";
    let mut text = format!("{header}\n");
    let mut expected_bad = BTreeSet::new();
    let mut expected_good = 0u64;
    for row in 0..400u64 {
        let line = row + 2;
        if unit(&mut rng) < 0.5 {
            text.push_str(&valid_row(&mut rng, row));
            expected_good += 1;
        } else {
            text.push_str(&corrupt_row(&mut rng, row));
            expected_bad.insert(line);
        }
        text.push('\n');
    }

    let log = parse_records(text.as_bytes())
        .map_err(|e| format!("the mixed file should parse past its header: {e}"))?;
    check!(
        log.records.len() as u64 == expected_good,
        "{} rows parsed, {expected_good} were valid",
        log.records.len()
    );
    let reported: BTreeSet<u64> = log.rejected.iter().map(|d| d.line).collect();
    check!(
        reported == expected_bad,
        "rejected lines {reported:?} != corrupted lines {expected_bad:?}"
    );
    check!(
        log.rejected.len() == expected_bad.len(),
        "duplicate diagnostics for a single row"
    );
    for diagnostic in &log.rejected {
        check!(
            !diagnostic.reason.is_empty(),
            "line {} was rejected without a reason",
            diagnostic.line
        );
    }

    // Arbitrary bytes must never panic, whatever the outcome.
    for case in 0..150u64 {
        let mut rng = Rng::seed_from_u64(0xB17E + case);
        let len = pick(&mut rng, 0, 2000) as usize;
        let bytes: Vec<u8> = (0..len)
            .map(|_| {
                if unit(&mut rng) < 0.1 {
                    b'\n'
                } else {
                    (rng.next_u64() % 256) as u8
                }
            })
            .collect();
        let _ = parse_records(bytes.as_slice());
    }
    Ok(())
}

#[test]
fn criterion_7() {
    report(7, "ingestion rejects malformed rows", ingestion_rejects_malformed_rows());
}
