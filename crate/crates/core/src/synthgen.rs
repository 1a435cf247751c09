//! Seeded synthetic session-log generator.
//!
//! Generation is a pure function of the `GeneratorSpec`: one sequential
//! ChaCha stream,
//! a fixed cell order, and a fixed draw order per session. The uniform
//! doubles and range draws are built directly on `next_u64`, so output bytes
//! cannot drift with library distribution changes.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{LhLabel, SessionRecord, Status};

/// Inclusive integer range for a count column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub lo: u32,
    pub hi: u32,
}

impl CountRange {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidProfile(format!("count range {lo}..={hi} is empty")));
        }
        Ok(CountRange { lo, hi })
    }
}

/// Behavioral probabilities for one (LH label × intervention) cell.
///
/// Mistake, hint, and skip are independent marginals; solving depends on
/// skipping through the two conditional probabilities. The implied solve
/// marginal is `p_skip * p_solve_given_skip + (1 - p_skip) * p_solve_given_noskip`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BehaviorProfile {
    pub p_mistake: f64,
    pub p_hint: f64,
    pub p_skip: f64,
    pub p_solve_given_skip: f64,
    pub p_solve_given_noskip: f64,
    pub steps: CountRange,
    pub hints: CountRange,
    pub attempts: CountRange,
    pub time: CountRange,
}

impl BehaviorProfile {
    /// The solve marginal implied by the skip-conditional structure.
    pub fn p_solve(&self) -> f64 {
        self.p_skip * self.p_solve_given_skip + (1.0 - self.p_skip) * self.p_solve_given_noskip
    }

    pub fn validate(&self) -> Result<()> {
        let probs = [
            ("p_mistake", self.p_mistake),
            ("p_hint", self.p_hint),
            ("p_skip", self.p_skip),
            ("p_solve_given_skip", self.p_solve_given_skip),
            ("p_solve_given_noskip", self.p_solve_given_noskip),
        ];
        for (name, p) in probs {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProfile(format!("{name} = {p} outside [0, 1]")));
            }
        }
        for (name, range) in [
            ("steps", self.steps),
            ("hints", self.hints),
            ("attempts", self.attempts),
            ("time", self.time),
        ] {
            if range.lo > range.hi {
                return Err(Error::InvalidProfile(format!(
                    "{name} range {}..={} is empty",
                    range.lo, range.hi
                )));
            }
        }
        Ok(())
    }
}

/// One profile per (label × intervention) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellProfiles {
    pub low_with: BehaviorProfile,
    pub low_without: BehaviorProfile,
    pub high_with: BehaviorProfile,
    pub high_without: BehaviorProfile,
}

/// Generation order of the cells: label-major, intervention first.
pub const CELL_ORDER: [(LhLabel, bool); 4] = [
    (LhLabel::Low, true),
    (LhLabel::Low, false),
    (LhLabel::High, true),
    (LhLabel::High, false),
];

impl CellProfiles {
    pub fn get(&self, label: LhLabel, with_intervention: bool) -> &BehaviorProfile {
        match (label, with_intervention) {
            (LhLabel::Low, true) => &self.low_with,
            (LhLabel::Low, false) => &self.low_without,
            (LhLabel::High, true) => &self.high_with,
            (LhLabel::High, false) => &self.high_without,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (label, with) in CELL_ORDER {
            self.get(label, with).validate()?;
        }
        Ok(())
    }
}

// Published indicator rates, used to calibrate the default profiles.
// Intervention-level marginals:
const WITH_HINT: f64 = 0.141; // hint use is 14.1% when intervention is on (85.9% non-use)
const WITH_SKIP: f64 = 0.537;
const WITH_SOLVE: f64 = 0.188;
const WITHOUT_HINT: f64 = 0.342;
const WITHOUT_SKIP: f64 = 0.351;
const WITHOUT_SOLVE: f64 = 0.201;
// LH-level marginals:
const LOW_HINT: f64 = 0.283;
const LOW_MISTAKE: f64 = 0.418;
const LOW_SOLVE: f64 = 0.207;
const HIGH_HINT: f64 = 0.211;
const HIGH_MISTAKE: f64 = 0.444;
const HIGH_SOLVE: f64 = 0.168;
// Solving after a skip is rare; rarer still without the intervention. The
// gap keeps {Skipped=NO} => {Status=SOLVED} lift higher in the WITHOUT
// cohort while both cohorts keep {Skipped=YES} => {Status=UNSOLVED} above
// lift 1.
const SOLVE_GIVEN_SKIP_WITH: f64 = 0.12;
const SOLVE_GIVEN_SKIP_WITHOUT: f64 = 0.02;

/// Default cell profiles calibrated to the published indicator rates.
///
/// Each cell combines one intervention-level marginal family with one
/// LH-level family: skip comes from the intervention family, mistake from
/// the LH family, and hint/solve are scaled products of both so that with
/// equal cell sizes the pooled intervention-level and LH-level marginals
/// are hit exactly in expectation (e.g. mean over LH of
/// `hint_I * hint_L / mean_L(hint_L)` is `hint_I`).
pub fn default_profiles() -> CellProfiles {
    let hint_lh_mean = (LOW_HINT + HIGH_HINT) / 2.0;
    let solve_lh_mean = (LOW_SOLVE + HIGH_SOLVE) / 2.0;

    let cell = |label: LhLabel, with: bool| -> BehaviorProfile {
        let (hint_i, skip_i, solve_i, solve_given_skip) = if with {
            (WITH_HINT, WITH_SKIP, WITH_SOLVE, SOLVE_GIVEN_SKIP_WITH)
        } else {
            (WITHOUT_HINT, WITHOUT_SKIP, WITHOUT_SOLVE, SOLVE_GIVEN_SKIP_WITHOUT)
        };
        let (hint_l, mistake_l, solve_l) = match label {
            LhLabel::Low => (LOW_HINT, LOW_MISTAKE, LOW_SOLVE),
            LhLabel::High => (HIGH_HINT, HIGH_MISTAKE, HIGH_SOLVE),
        };
        let p_skip = skip_i;
        let solve_target = solve_i * solve_l / solve_lh_mean;
        // Solve the profile's marginal identity for the no-skip conditional.
        let p_solve_given_noskip = (solve_target - p_skip * solve_given_skip) / (1.0 - p_skip);
        BehaviorProfile {
            p_mistake: mistake_l,
            p_hint: hint_i * hint_l / hint_lh_mean,
            p_skip,
            p_solve_given_skip: solve_given_skip,
            p_solve_given_noskip,
            steps: CountRange { lo: 0, hi: 6 },
            hints: CountRange { lo: 0, hi: 3 },
            attempts: CountRange { lo: 0, hi: 12 },
            time: CountRange { lo: 0, hi: 600 },
        }
    };

    CellProfiles {
        low_with: cell(LhLabel::Low, true),
        low_without: cell(LhLabel::Low, false),
        high_with: cell(LhLabel::High, true),
        high_without: cell(LhLabel::High, false),
    }
}

/// Complete description of one synthetic corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub students_per_cell: u32,
    /// Every student gets exactly this many sessions.
    pub sessions_per_student: u32,
    pub profiles: CellProfiles,
}

impl GeneratorSpec {
    pub fn with_default_profiles(seed: u64, students_per_cell: u32, sessions_per_student: u32) -> Self {
        GeneratorSpec {
            seed,
            students_per_cell,
            sessions_per_student,
            profiles: default_profiles(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.students_per_cell == 0 {
            return Err(Error::InvalidConfig("students_per_cell must be at least 1".into()));
        }
        if self.sessions_per_student == 0 {
            return Err(Error::InvalidConfig(
                "sessions_per_student must be at least 1".into(),
            ));
        }
        self.profiles.validate()
    }
}

/// Uniform double in [0, 1) from the top 53 bits of one `next_u64` draw.
fn draw_unit(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn draw_bool(rng: &mut ChaCha12Rng, p: f64) -> bool {
    draw_unit(rng) < p
}

/// Uniform draw from an inclusive range. The modulo bias over spans of a few
/// hundred against 2^64 is far below any tolerance used here.
fn draw_count(rng: &mut ChaCha12Rng, range: CountRange) -> u32 {
    let span = (range.hi - range.lo) as u64 + 1;
    range.lo + (rng.next_u64() % span) as u32
}

/// Generates the corpus: cells in [`CELL_ORDER`], students numbered
/// `S0001`… across all cells, sessions in order per student. Per session the
/// draw order is fixed: mistake, hint, skip, solve, steps, hints, attempts,
/// time. Identical specs produce identical output, byte for byte.
pub fn generate_sessions(spec: &GeneratorSpec) -> Result<Vec<SessionRecord>> {
    spec.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let per_cell = spec.students_per_cell as usize * spec.sessions_per_student as usize;
    let mut records = Vec::with_capacity(4 * per_cell);
    let mut student = 0u64;
    for (label, with_intervention) in CELL_ORDER {
        let profile = spec.profiles.get(label, with_intervention);
        for _ in 0..spec.students_per_cell {
            student += 1;
            let account = format!("S{student:04}");
            for _ in 0..spec.sessions_per_student {
                let mistake_occurred = draw_bool(&mut rng, profile.p_mistake);
                let hint_used = draw_bool(&mut rng, profile.p_hint);
                let skipped = draw_bool(&mut rng, profile.p_skip);
                let p_solve = if skipped {
                    profile.p_solve_given_skip
                } else {
                    profile.p_solve_given_noskip
                };
                let status = if draw_bool(&mut rng, p_solve) {
                    Status::Solved
                } else {
                    Status::Unsolved
                };
                records.push(SessionRecord {
                    account: account.clone(),
                    mistake_occurred,
                    hint_used,
                    skipped,
                    status,
                    total_steps: draw_count(&mut rng, profile.steps),
                    total_hints: draw_count(&mut rng, profile.hints),
                    total_answer_attempts: draw_count(&mut rng, profile.attempts),
                    time_spent: draw_count(&mut rng, profile.time),
                    with_intervention,
                    lh_label: label,
                });
            }
        }
    }
    Ok(records)
}

#[derive(Serialize)]
struct GeneratorManifest<'a> {
    seed: u64,
    students_per_cell: u32,
    sessions_per_student: u32,
    sessions_emitted: usize,
    profiles: &'a CellProfiles,
}

/// Sidecar provenance document for a generated corpus, as pretty JSON.
pub fn manifest_json(spec: &GeneratorSpec, sessions_emitted: usize) -> String {
    let manifest = GeneratorManifest {
        seed: spec.seed,
        students_per_cell: spec.students_per_cell,
        sessions_per_student: spec.sessions_per_student,
        sessions_emitted,
        profiles: &spec.profiles,
    };
    let mut out = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    out.push('\n');
    out
}
