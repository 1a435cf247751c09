//! Session-log schema and CSV ingestion.
//!
//! Ingestion is strict about the header and per-row well-formedness, but a
//! malformed row never aborts the run: it is dropped and reported as a
//! diagnostic carrying its line number, so one bad export row cannot hide an
//! entire log.

use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Final state of a session: the student either solved the task or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    Solved,
    Unsolved,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Solved => "SOLVED",
            Status::Unsolved => "UNSOLVED",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Learned-helplessness questionnaire band the student falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LhLabel {
    Low,
    High,
}

impl LhLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            LhLabel::Low => "Low",
            LhLabel::High => "High",
        }
    }
}

impl fmt::Display for LhLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One tutoring session as exported by the logging pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub account: String,
    pub mistake_occurred: bool,
    pub hint_used: bool,
    pub skipped: bool,
    pub status: Status,
    pub total_steps: u32,
    pub total_hints: u32,
    pub total_answer_attempts: u32,
    /// Seconds spent in the session.
    pub time_spent: u32,
    pub with_intervention: bool,
    pub lh_label: LhLabel,
}

/// Expected header columns, in order. The match is exact: renamed, missing,
/// reordered, or extra columns all reject the file.
pub const EXPECTED_HEADER: [&str; 11] = [
    "Account",
    "MistakeOccurred",
    "HintUsed",
    "Skipped",
    "Status",
    "TotalSteps",
    "TotalHints",
    "TotalAnswerAttempts",
    "TimeSpent",
    "With Intervention",
    "Label",
];

/// A rejected row and the first problem found in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowDiagnostic {
    /// 1-based line number in the input, counting the header line.
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row at line {}: {}", self.line, self.reason)
    }
}

/// Result of ingesting one CSV stream.
#[derive(Debug, Default)]
pub struct ParsedLog {
    /// Well-formed records in input order.
    pub records: Vec<SessionRecord>,
    /// Rows dropped, in input order, each with its first defect.
    pub rejected: Vec<RowDiagnostic>,
}

/// Reads a session log. Fails fast on an unreadable stream, a missing
/// header, or a header that is not exactly [`EXPECTED_HEADER`]; individual
/// malformed rows are collected into [`ParsedLog::rejected`] instead.
pub fn parse_records<R: Read>(input: R) -> Result<ParsedLog> {
    let mut bytes = Vec::new();
    let mut input = input;
    input.read_to_end(&mut bytes)?;
    // A UTF-8 byte-order mark before the header is tolerated.
    let body: &[u8] = bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(&bytes);

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(body);

    let mut row = csv::ByteRecord::new();
    if !reader.read_byte_record(&mut row)? {
        return Err(Error::EmptyInput);
    }
    let found: Vec<String> = row
        .iter()
        .map(|f| String::from_utf8_lossy(f).into_owned())
        .collect();
    if found != EXPECTED_HEADER {
        return Err(Error::HeaderMismatch {
            expected: EXPECTED_HEADER.join(","),
            found: found.join(","),
        });
    }

    let mut log = ParsedLog::default();
    while reader.read_byte_record(&mut row)? {
        let line = row.position().map_or(0, |p| p.line());
        match parse_row(&row) {
            Ok(record) => log.records.push(record),
            Err(reason) => log.rejected.push(RowDiagnostic { line, reason }),
        }
    }
    Ok(log)
}

/// Parses one data row; the error string is the first defect encountered in
/// column order.
fn parse_row(row: &csv::ByteRecord) -> std::result::Result<SessionRecord, String> {
    if row.len() != EXPECTED_HEADER.len() {
        return Err(format!(
            "expected {} fields, found {}",
            EXPECTED_HEADER.len(),
            row.len()
        ));
    }
    let field = |idx: usize| -> std::result::Result<&str, String> {
        let name = EXPECTED_HEADER[idx];
        let raw = std::str::from_utf8(&row[idx]).map_err(|_| format!("invalid UTF-8 in {name}"))?;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return Err(format!("missing {name}"));
        }
        Ok(trimmed)
    };
    let yes_no = |idx: usize| -> std::result::Result<bool, String> {
        let v = field(idx)?;
        if v.eq_ignore_ascii_case("YES") {
            Ok(true)
        } else if v.eq_ignore_ascii_case("NO") {
            Ok(false)
        } else {
            Err(format!("invalid {} `{v}`: expected YES or NO", EXPECTED_HEADER[idx]))
        }
    };
    let count = |idx: usize| -> std::result::Result<u32, String> {
        let v = field(idx)?;
        v.parse::<u32>().map_err(|_| {
            format!(
                "invalid {} `{v}`: expected a non-negative integer",
                EXPECTED_HEADER[idx]
            )
        })
    };

    let account = field(0)?.to_string();
    let mistake_occurred = yes_no(1)?;
    let hint_used = yes_no(2)?;
    let skipped = yes_no(3)?;
    let status_str = field(4)?;
    let status = if status_str.eq_ignore_ascii_case("SOLVED") {
        Status::Solved
    } else if status_str.eq_ignore_ascii_case("UNSOLVED") {
        Status::Unsolved
    } else {
        return Err(format!(
            "invalid Status `{status_str}`: expected SOLVED or UNSOLVED"
        ));
    };
    let total_steps = count(5)?;
    let total_hints = count(6)?;
    let total_answer_attempts = count(7)?;
    let time_spent = count(8)?;
    let with_intervention = yes_no(9)?;
    let label_str = field(10)?;
    let lh_label = if label_str.eq_ignore_ascii_case("LOW") {
        LhLabel::Low
    } else if label_str.eq_ignore_ascii_case("HIGH") {
        LhLabel::High
    } else {
        return Err(format!("invalid Label `{label_str}`: expected Low or High"));
    };

    Ok(SessionRecord {
        account,
        mistake_occurred,
        hint_used,
        skipped,
        status,
        total_steps,
        total_hints,
        total_answer_attempts,
        time_spent,
        with_intervention,
        lh_label,
    })
}

fn yes_no_str(v: bool) -> &'static str {
    if v {
        "YES"
    } else {
        "NO"
    }
}

/// Every column except the account is emitted from a fixed vocabulary, so
/// only the account ever needs quoting.
fn quoted_account(account: &str) -> String {
    if account.contains(',') || account.contains('"') || account.contains('\n') {
        format!("\"{}\"", account.replace('"', "\"\""))
    } else {
        account.to_string()
    }
}

/// Renders records back to CSV with the canonical header, `\n` line
/// endings, and a trailing newline. Output of the generator round-trips
/// through [`parse_records`] unchanged.
pub fn render_csv(records: &[SessionRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(&EXPECTED_HEADER.join(","));
    out.push('\n');
    for r in records {
        out.push_str(&quoted_account(&r.account));
        out.push(',');
        out.push_str(yes_no_str(r.mistake_occurred));
        out.push(',');
        out.push_str(yes_no_str(r.hint_used));
        out.push(',');
        out.push_str(yes_no_str(r.skipped));
        out.push(',');
        out.push_str(r.status.as_str());
        out.push(',');
        out.push_str(&r.total_steps.to_string());
        out.push(',');
        out.push_str(&r.total_hints.to_string());
        out.push(',');
        out.push_str(&r.total_answer_attempts.to_string());
        out.push(',');
        out.push_str(&r.time_spent.to_string());
        out.push(',');
        out.push_str(yes_no_str(r.with_intervention));
        out.push(',');
        out.push_str(r.lh_label.as_str());
        out.push('\n');
    }
    out
}
