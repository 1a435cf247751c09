//! Command-line interface over the mining library: descriptive statistics,
//! single-cohort mining, cohort comparison, threshold sweeps, and synthetic
//! corpus generation.

mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lhmine::{
    compare_cohorts, comparison_csv, default_tracked_rules, descriptive_stats, filter_cohort,
    format_significant, generate_sessions, itemsets_csv, manifest_json, mine_cohort,
    parse_records, render_csv, rules_csv, stability_csv, standard_cohorts, stats_csv, sweep_grid,
    CohortSpec, Fraction, GeneratorSpec, MiningConfig, SessionRecord, StatsReport, ThresholdGrid,
};

use output::{digest, write_run, FileDigest};

#[derive(Parser)]
#[command(
    name = "lhmine",
    version,
    about = "Association-rule mining over tutoring-system session logs"
)]
struct Cli {
    /// Worker threads for support counting (default: all cores).
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-cohort session counts and indicator rates.
    Stats(StatsArgs),
    /// Frequent itemsets and ranked rules for one cohort.
    Mine(MineArgs),
    /// Every standard cohort, plus LH and intervention comparisons.
    Cohorts(CohortsArgs),
    /// Tracked-rule stability across a grid of thresholds.
    Sweep(SweepArgs),
    /// Seeded synthetic session log.
    Synth(SynthArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Session log to read.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,

    /// Directory for output files (created if missing).
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Minimum support in (0, 1], met inclusively.
    #[arg(long, value_parser = parse_unit_fraction, default_value = "0.2")]
    min_support: Fraction,

    /// Minimum confidence in (0, 1], met inclusively.
    #[arg(long, value_parser = parse_unit_fraction, default_value = "0.6")]
    min_confidence: Fraction,

    /// Lift floor; reported rules exceed it strictly.
    #[arg(long, value_parser = parse_fraction, default_value = "1")]
    min_lift: Fraction,

    /// Keep at most this many rules after ranking.
    #[arg(long, default_value_t = 30, value_parser = parse_top_k)]
    top_k: usize,
}

impl ThresholdArgs {
    fn config(&self) -> Result<MiningConfig> {
        Ok(MiningConfig::new(
            self.min_support,
            self.min_confidence,
            self.min_lift,
            self.top_k,
        )?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CohortArg {
    /// No filter: every session.
    All,
    /// Sessions labeled with a low learning history.
    Low,
    /// Sessions labeled with a high learning history.
    High,
    /// Sessions with the intervention enabled.
    With,
    /// Sessions without the intervention.
    Without,
}

impl CohortArg {
    fn spec(self) -> CohortSpec {
        match self {
            CohortArg::All => CohortSpec::overall(),
            CohortArg::Low => CohortSpec::low_lh(),
            CohortArg::High => CohortSpec::high_lh(),
            CohortArg::With => CohortSpec::with_intervention(),
            CohortArg::Without => CohortSpec::without_intervention(),
        }
    }
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    io: IoArgs,

    #[command(flatten)]
    thresholds: ThresholdArgs,

    /// Cohort to mine.
    #[arg(long, value_enum, default_value_t = CohortArg::All)]
    cohort: CohortArg,
}

#[derive(Args)]
struct CohortsArgs {
    #[command(flatten)]
    io: IoArgs,

    #[command(flatten)]
    thresholds: ThresholdArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Support levels of the grid, comma separated, strictly increasing.
    #[arg(long, value_delimiter = ',', value_parser = parse_unit_fraction, default_value = "0.15,0.2,0.25")]
    support_levels: Vec<Fraction>,

    /// Confidence levels of the grid, comma separated, strictly increasing.
    #[arg(long, value_delimiter = ',', value_parser = parse_unit_fraction, default_value = "0.5,0.6,0.7")]
    confidence_levels: Vec<Fraction>,

    /// Lift floor shared by every cell.
    #[arg(long, value_parser = parse_fraction, default_value = "1")]
    min_lift: Fraction,

    /// Sweep one cohort, or `all` for every standard cohort with sessions.
    #[arg(long, value_enum, default_value_t = CohortArg::All)]
    cohort: CohortArg,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory for the generated corpus.
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,

    /// Generator seed; equal seeds give byte-identical corpora.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Students in each of the four (label x intervention) cells.
    #[arg(long, default_value_t = 667, value_parser = clap::value_parser!(u32).range(1..))]
    students_per_cell: u32,

    /// Sessions generated for every student.
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..))]
    sessions_per_student: u32,
}

fn parse_fraction(s: &str) -> std::result::Result<Fraction, String> {
    s.parse::<Fraction>().map_err(|e| e.to_string())
}

fn parse_unit_fraction(s: &str) -> std::result::Result<Fraction, String> {
    let fraction = parse_fraction(s)?;
    if !fraction.in_unit_interval() {
        return Err(format!("{fraction} is outside (0, 1]"));
    }
    Ok(fraction)
}

fn parse_top_k(s: &str) -> std::result::Result<usize, String> {
    let value: usize = s.parse().map_err(|_| "expected a positive integer".to_string())?;
    if value == 0 {
        return Err("must be at least 1".into());
    }
    Ok(value)
}

fn main() {
    let cli = Cli::parse();
    if let Err(error) = run(cli) {
        eprintln!("error: {error:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Mine(args) => cmd_mine(args),
        Command::Cohorts(args) => cmd_cohorts(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Synth(args) => cmd_synth(args),
    }
}

/// Reads and parses the input log. Malformed rows are warnings on stderr,
/// not errors; a log with no usable rows at all is an error.
fn load_records(path: &Path) -> Result<(Vec<SessionRecord>, FileDigest)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let log =
        parse_records(bytes.as_slice()).with_context(|| format!("parsing {}", path.display()))?;
    for diagnostic in &log.rejected {
        eprintln!(
            "warning: {}:{}: {} (row rejected)",
            path.display(),
            diagnostic.line,
            diagnostic.reason
        );
    }
    if log.records.is_empty() {
        bail!("{}: no usable records", path.display());
    }
    let input_digest = digest(path.to_string_lossy(), &bytes);
    Ok((log.records, input_digest))
}

fn render_stats_text(report: &StatsReport) -> String {
    let header = ["Cohort", "Sessions", "Mistake", "Hint", "Skip", "Solve"];
    let mut rows: Vec<[String; 6]> = vec![header.map(String::from)];
    for row in &report.rows {
        let rate = |v: Option<f64>| v.map(format_significant).unwrap_or_else(|| "-".into());
        let rates = row.rates.as_ref();
        rows.push([
            row.cohort.clone(),
            row.sessions.to_string(),
            rate(rates.map(|r| r.mistake)),
            rate(rates.map(|r| r.hint)),
            rate(rates.map(|r| r.skipped)),
            rate(rates.map(|r| r.solved)),
        ]);
    }
    let widths: Vec<usize> =
        (0..header.len()).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap()).collect();
    let mut out = String::new();
    for (index, row) in rows.iter().enumerate() {
        let mut line = String::new();
        for (column, cell) in row.iter().enumerate() {
            if column > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:<width$}", cell, width = widths[column]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if index == 0 {
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (header.len() - 1)));
            out.push('\n');
        }
    }
    out
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let (records, input) = load_records(&args.io.input)?;
    let report = descriptive_stats(&records)?;
    let files = vec![("stats.csv".to_string(), stats_csv(&report))];
    write_run(&args.io.out_dir, "stats", serde_json::json!({}), Some(input), &files)?;
    print!("{}", render_stats_text(&report));
    println!("\nwrote stats.csv, manifest.json in {}", args.io.out_dir.display());
    Ok(())
}

fn cmd_mine(args: MineArgs) -> Result<()> {
    let (records, input) = load_records(&args.io.input)?;
    let config = args.thresholds.config()?;
    let spec = args.cohort.spec();
    let result = mine_cohort(&records, &spec, &config)?;
    let files = vec![
        ("itemsets.csv".to_string(), itemsets_csv(&result.itemsets)),
        ("rules.csv".to_string(), rules_csv(&result.rules)),
    ];
    let parameters = serde_json::json!({
        "cohort": spec.name(),
        "config": config,
    });
    write_run(&args.io.out_dir, "mine", parameters, Some(input), &files)?;
    let top_lift = result
        .rules
        .first()
        .map(|r| format_significant(r.lift()))
        .unwrap_or_else(|| "-".into());
    println!(
        "{}: {} sessions, {} frequent itemsets, {} rules (top lift {top_lift})",
        spec.name(),
        result.record_count,
        result.itemsets.len(),
        result.rules.len(),
    );
    println!("wrote itemsets.csv, rules.csv, manifest.json in {}", args.io.out_dir.display());
    Ok(())
}

fn cmd_cohorts(args: CohortsArgs) -> Result<()> {
    let (records, input) = load_records(&args.io.input)?;
    let config = args.thresholds.config()?;

    let mut files = Vec::new();
    let mut mined = Vec::new();
    for spec in standard_cohorts() {
        if filter_cohort(&records, &spec).is_empty() {
            eprintln!("warning: cohort `{}` has no sessions, skipping", spec.name());
            continue;
        }
        let result = mine_cohort(&records, &spec, &config)?;
        println!(
            "{}: {} sessions, {} itemsets, {} rules",
            spec.name(),
            result.record_count,
            result.itemsets.len(),
            result.rules.len()
        );
        files.push((format!("itemsets_{}.csv", spec.slug()), itemsets_csv(&result.itemsets)));
        files.push((format!("rules_{}.csv", spec.slug()), rules_csv(&result.rules)));
        mined.push((spec, result));
    }

    let find = |name: &str| mined.iter().find(|(s, _)| s.name() == name).map(|(_, r)| r);
    let pairings = [
        ("comparison_lh.csv", "Low LH", "High LH"),
        ("comparison_intervention.csv", "With Intervention", "Without Intervention"),
    ];
    for (file, a, b) in pairings {
        match (find(a), find(b)) {
            (Some(result_a), Some(result_b)) => {
                let report = compare_cohorts(result_a, result_b)?;
                files.push((file.to_string(), comparison_csv(&report)));
            }
            _ => eprintln!("warning: skipping {file}: need sessions in both `{a}` and `{b}`"),
        }
    }

    let names: Vec<&str> = mined.iter().map(|(s, _)| s.name()).collect();
    let parameters = serde_json::json!({
        "cohorts": names,
        "config": config,
    });
    write_run(&args.io.out_dir, "cohorts", parameters, Some(input), &files)?;
    println!("wrote {} files and manifest.json in {}", files.len(), args.io.out_dir.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let (records, input) = load_records(&args.io.input)?;
    let grid = ThresholdGrid::new(args.support_levels, args.confidence_levels, args.min_lift)?;
    let cohorts: Vec<CohortSpec> = match args.cohort {
        CohortArg::All => standard_cohorts()
            .into_iter()
            .filter(|spec| {
                let keep = !filter_cohort(&records, spec).is_empty();
                if !keep {
                    eprintln!("warning: cohort `{}` has no sessions, skipping", spec.name());
                }
                keep
            })
            .collect(),
        chosen => vec![chosen.spec()],
    };
    if cohorts.is_empty() {
        bail!("every cohort is empty");
    }
    let tracked = default_tracked_rules();
    let table = sweep_grid(&records, &cohorts, &grid, &tracked)?;
    let text = table.render_text();
    let files = vec![
        ("stability.csv".to_string(), stability_csv(&table)),
        ("stability.txt".to_string(), text.clone()),
    ];
    let cohort_names: Vec<&str> = cohorts.iter().map(|s| s.name()).collect();
    let tracked_names: Vec<String> = tracked.iter().map(|k| k.to_string()).collect();
    let parameters = serde_json::json!({
        "grid": table.grid,
        "cohorts": cohort_names,
        "tracked_rules": tracked_names,
    });
    write_run(&args.io.out_dir, "sweep", parameters, Some(input), &files)?;
    print!("{text}");
    println!("wrote stability.csv, stability.txt, manifest.json in {}", args.io.out_dir.display());
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let spec = GeneratorSpec::with_default_profiles(
        args.seed,
        args.students_per_cell,
        args.sessions_per_student,
    );
    let records = generate_sessions(&spec)?;
    let files = vec![
        ("sessions.csv".to_string(), render_csv(&records)),
        ("generator.json".to_string(), manifest_json(&spec, records.len())),
    ];
    let parameters = serde_json::json!({
        "seed": spec.seed,
        "students_per_cell": spec.students_per_cell,
        "sessions_per_student": spec.sessions_per_student,
    });
    write_run(&args.out_dir, "synth", parameters, None, &files)?;
    println!(
        "wrote {} sessions to {}",
        records.len(),
        args.out_dir.join("sessions.csv").display()
    );
    Ok(())
}
