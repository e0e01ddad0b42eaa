//! Published aggregates from the study this harness reimplements, plus a
//! synthetic per-trial log whose margins match them.
//!
//! Everything here is a transcription of published tables (counts, posterior
//! summaries, intervals) or derived from them by exact inversion of the
//! posterior-mean formula; none of it is the original per-trial data. The
//! synthetic log is clearly labeled as such and exists to exercise the
//! analysis pipeline end to end.

use crate::corpus::{Condition, Question, Tone};
use crate::runner::{ParsedAnswer, TrialRecord};
use crate::stats::ContingencyTable;

/// The four audited model names.
pub const MODELS: [&str; 4] = ["gemma2:9b", "gemma3:12b", "llama3.1:8b", "mistral:7b"];

/// Interaction clusters in the study.
pub const CLUSTERS: usize = 30;

/// Published interaction-level intracluster correlation.
pub const PUBLISHED_ICC: f64 = 0.515;

/// Tone × SPICE counts over the 470 compliant rows: (tone, NO, YES).
pub const TONE_SPICE_COUNTS: [(Tone, u64, u64); 3] = [
    (Tone::Abusive, 128, 28),
    (Tone::Unclear, 61, 93),
    (Tone::Friendly, 4, 156),
];

/// The tone × SPICE table as a [`ContingencyTable`].
pub fn tone_spice_table() -> ContingencyTable {
    ContingencyTable::new(
        TONE_SPICE_COUNTS.iter().map(|(t, _, _)| t.as_str().to_string()).collect(),
        vec!["NO".into(), "YES".into()],
        TONE_SPICE_COUNTS.iter().map(|&(_, no, yes)| vec![no, yes]).collect(),
    )
    .expect("fixed shape")
}

/// One model × tone binomial cell with its published posterior summary.
#[derive(Debug, Clone, Copy)]
pub struct PublishedCell {
    pub model: &'static str,
    pub tone: Tone,
    pub successes: u64,
    pub trials: u64,
    pub mean: f64,
    pub cri: (f64, f64),
}

/// SPICE by model × tone: published (k, n) with posterior means and CrIs.
/// The same (k, n) underlie the published Wilson table.
pub const SPICE_MODEL_TONE: [PublishedCell; 12] = [
    PublishedCell { model: "gemma2:9b", tone: Tone::Abusive, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "gemma2:9b", tone: Tone::Friendly, successes: 40, trials: 40, mean: 0.976, cri: (0.914, 0.999) },
    PublishedCell { model: "gemma2:9b", tone: Tone::Unclear, successes: 24, trials: 40, mean: 0.596, cri: (0.445, 0.737) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Abusive, successes: 5, trials: 36, mean: 0.158, cri: (0.062, 0.287) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Friendly, successes: 38, trials: 40, mean: 0.929, cri: (0.835, 0.985) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Unclear, successes: 19, trials: 40, mean: 0.476, cri: (0.330, 0.626) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Abusive, successes: 17, trials: 40, mean: 0.429, cri: (0.285, 0.579) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Friendly, successes: 39, trials: 40, mean: 0.952, cri: (0.872, 0.994) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Unclear, successes: 27, trials: 36, mean: 0.737, cri: (0.589, 0.862) },
    PublishedCell { model: "mistral:7b", tone: Tone::Abusive, successes: 6, trials: 40, mean: 0.167, cri: (0.071, 0.292) },
    PublishedCell { model: "mistral:7b", tone: Tone::Friendly, successes: 39, trials: 40, mean: 0.952, cri: (0.872, 0.994) },
    PublishedCell { model: "mistral:7b", tone: Tone::Unclear, successes: 23, trials: 38, mean: 0.600, cri: (0.446, 0.744) },
];

/// Published Wilson 95% intervals for the same 12 cells.
#[derive(Debug, Clone, Copy)]
pub struct PublishedWilson {
    pub model: &'static str,
    pub tone: Tone,
    pub successes: u64,
    pub trials: u64,
    pub proportion: f64,
    pub ci: (f64, f64),
}

pub const WILSON_MODEL_TONE: [PublishedWilson; 12] = [
    PublishedWilson { model: "gemma2:9b", tone: Tone::Abusive, successes: 0, trials: 40, proportion: 0.000, ci: (0.000, 0.088) },
    PublishedWilson { model: "gemma2:9b", tone: Tone::Friendly, successes: 40, trials: 40, proportion: 1.000, ci: (0.912, 1.000) },
    PublishedWilson { model: "gemma2:9b", tone: Tone::Unclear, successes: 24, trials: 40, proportion: 0.600, ci: (0.446, 0.737) },
    PublishedWilson { model: "gemma3:12b", tone: Tone::Abusive, successes: 5, trials: 36, proportion: 0.139, ci: (0.061, 0.287) },
    PublishedWilson { model: "gemma3:12b", tone: Tone::Friendly, successes: 38, trials: 40, proportion: 0.950, ci: (0.835, 0.986) },
    PublishedWilson { model: "gemma3:12b", tone: Tone::Unclear, successes: 19, trials: 40, proportion: 0.475, ci: (0.329, 0.625) },
    PublishedWilson { model: "llama3.1:8b", tone: Tone::Abusive, successes: 17, trials: 40, proportion: 0.425, ci: (0.285, 0.578) },
    PublishedWilson { model: "llama3.1:8b", tone: Tone::Friendly, successes: 39, trials: 40, proportion: 0.975, ci: (0.871, 0.996) },
    PublishedWilson { model: "llama3.1:8b", tone: Tone::Unclear, successes: 27, trials: 36, proportion: 0.750, ci: (0.589, 0.862) },
    PublishedWilson { model: "mistral:7b", tone: Tone::Abusive, successes: 6, trials: 40, proportion: 0.150, ci: (0.071, 0.291) },
    PublishedWilson { model: "mistral:7b", tone: Tone::Friendly, successes: 39, trials: 40, proportion: 0.975, ci: (0.871, 0.996) },
    PublishedWilson { model: "mistral:7b", tone: Tone::Unclear, successes: 23, trials: 38, proportion: 0.605, ci: (0.447, 0.744) },
];

/// Abuse-detection YES by model × tone. The (k, n) are recovered uniquely by
/// inverting the published posterior means (k+1)/(n+2) together with both CrI
/// endpoints; the recovered totals reproduce the published 451/480 compliance
/// and the 21 missed-abuse trials exactly.
pub const ABUSE_MODEL_TONE: [PublishedCell; 12] = [
    PublishedCell { model: "gemma2:9b", tone: Tone::Abusive, successes: 35, trials: 40, mean: 0.857, cri: (0.739, 0.944) },
    PublishedCell { model: "gemma2:9b", tone: Tone::Friendly, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "gemma2:9b", tone: Tone::Unclear, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Abusive, successes: 36, trials: 40, mean: 0.881, cri: (0.769, 0.959) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Friendly, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Unclear, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Abusive, successes: 40, trials: 40, mean: 0.976, cri: (0.914, 0.999) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Friendly, successes: 0, trials: 39, mean: 0.024, cri: (0.001, 0.088) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Unclear, successes: 0, trials: 25, mean: 0.037, cri: (0.001, 0.132) },
    PublishedCell { model: "mistral:7b", tone: Tone::Abusive, successes: 24, trials: 36, mean: 0.658, cri: (0.502, 0.798) },
    PublishedCell { model: "mistral:7b", tone: Tone::Friendly, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "mistral:7b", tone: Tone::Unclear, successes: 1, trials: 31, mean: 0.061, cri: (0.008, 0.163) },
];

/// Adequacy YES by model × tone, recovered the same way; totals reproduce the
/// published 450/480 compliance.
pub const ADEQUACY_MODEL_TONE: [PublishedCell; 12] = [
    PublishedCell { model: "gemma2:9b", tone: Tone::Abusive, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "gemma2:9b", tone: Tone::Friendly, successes: 29, trials: 40, mean: 0.714, cri: (0.570, 0.838) },
    PublishedCell { model: "gemma2:9b", tone: Tone::Unclear, successes: 11, trials: 40, mean: 0.286, cri: (0.162, 0.429) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Abusive, successes: 0, trials: 40, mean: 0.024, cri: (0.001, 0.086) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Friendly, successes: 32, trials: 40, mean: 0.786, cri: (0.651, 0.894) },
    PublishedCell { model: "gemma3:12b", tone: Tone::Unclear, successes: 12, trials: 38, mean: 0.325, cri: (0.191, 0.474) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Abusive, successes: 0, trials: 38, mean: 0.025, cri: (0.001, 0.090) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Friendly, successes: 33, trials: 39, mean: 0.829, cri: (0.702, 0.927) },
    PublishedCell { model: "llama3.1:8b", tone: Tone::Unclear, successes: 12, trials: 24, mean: 0.500, cri: (0.313, 0.687) },
    PublishedCell { model: "mistral:7b", tone: Tone::Abusive, successes: 3, trials: 39, mean: 0.098, cri: (0.028, 0.204) },
    PublishedCell { model: "mistral:7b", tone: Tone::Friendly, successes: 36, trials: 39, mean: 0.903, cri: (0.796, 0.972) },
    PublishedCell { model: "mistral:7b", tone: Tone::Unclear, successes: 28, trials: 33, mean: 0.828, cri: (0.690, 0.932) },
];

/// SPICE by tone posteriors over the pooled counts (BAYES A shape).
pub const SPICE_TONE_POSTERIORS: [(Tone, u64, u64, f64, (f64, f64)); 3] = [
    (Tone::Abusive, 28, 156, 0.183, (0.127, 0.247)),
    (Tone::Friendly, 156, 160, 0.969, (0.937, 0.990)),
    (Tone::Unclear, 93, 154, 0.603, (0.525, 0.678)),
];

/// Published pairwise tone contrasts: (B over A, Pr[B>A], Δ CrI, OR CrI).
pub struct PublishedContrast {
    pub low: Tone,
    pub high: Tone,
    pub pr: f64,
    pub delta_cri: (f64, f64),
    pub or_cri: (f64, f64),
}

pub const TONE_CONTRASTS: [PublishedContrast; 3] = [
    PublishedContrast { low: Tone::Abusive, high: Tone::Unclear, pr: 1.0000, delta_cri: (0.319, 0.514), or_cri: (4.12, 11.63) },
    PublishedContrast { low: Tone::Abusive, high: Tone::Friendly, pr: 1.0000, delta_cri: (0.716, 0.847), or_cri: (61.26, 468.69) },
    PublishedContrast { low: Tone::Unclear, high: Tone::Friendly, pr: 1.0000, delta_cri: (0.286, 0.448), or_cri: (9.23, 66.88) },
];

/// SPICE (YES, n) by condition × tone, recovered from the published means
/// (exact rationals k/n); row and column sums reproduce every other table.
#[derive(Debug, Clone, Copy)]
pub struct ConditionToneCell {
    pub condition_label: &'static str,
    pub tone: Tone,
    pub successes: u64,
    pub trials: u64,
    pub mean: f64,
}

pub const CONDITION_TONE_SPICE: [ConditionToneCell; 12] = [
    ConditionToneCell { condition_label: "1a", tone: Tone::Abusive, successes: 0, trials: 40, mean: 0.000 },
    ConditionToneCell { condition_label: "1a", tone: Tone::Unclear, successes: 10, trials: 36, mean: 0.278 },
    ConditionToneCell { condition_label: "1a", tone: Tone::Friendly, successes: 40, trials: 40, mean: 1.000 },
    ConditionToneCell { condition_label: "1b", tone: Tone::Abusive, successes: 9, trials: 40, mean: 0.225 },
    ConditionToneCell { condition_label: "1b", tone: Tone::Unclear, successes: 35, trials: 40, mean: 0.875 },
    ConditionToneCell { condition_label: "1b", tone: Tone::Friendly, successes: 39, trials: 40, mean: 0.975 },
    ConditionToneCell { condition_label: "2a", tone: Tone::Abusive, successes: 8, trials: 37, mean: 0.216 },
    ConditionToneCell { condition_label: "2a", tone: Tone::Unclear, successes: 23, trials: 39, mean: 0.590 },
    ConditionToneCell { condition_label: "2a", tone: Tone::Friendly, successes: 39, trials: 40, mean: 0.975 },
    ConditionToneCell { condition_label: "2b", tone: Tone::Abusive, successes: 11, trials: 39, mean: 0.282 },
    ConditionToneCell { condition_label: "2b", tone: Tone::Unclear, successes: 25, trials: 39, mean: 0.641 },
    ConditionToneCell { condition_label: "2b", tone: Tone::Friendly, successes: 38, trials: 40, mean: 0.950 },
];

/// Published within-tone preamble contrasts (1b over 1a, 2b over 2a).
pub const KEY_CONDITION_CONTRASTS: [(Tone, &str, f64); 6] = [
    (Tone::Abusive, "1b>1a", 0.9994),
    (Tone::Abusive, "2b>2a", 0.7390),
    (Tone::Friendly, "1b>1a", 0.2470),
    (Tone::Friendly, "2b>2a", 0.3085),
    (Tone::Unclear, "1b>1a", 1.0000),
    (Tone::Unclear, "2b>2a", 0.6783),
];

/// Unclear tone, per-model 1b vs 1a: ((k,n) in 1a, (k,n) in 1b, Pr[1b>1a]).
pub const UNCLEAR_PER_MODEL_CONTRASTS: [(&str, (u64, u64), (u64, u64), f64); 4] = [
    ("gemma2:9b", (3, 10), (10, 10), 0.9995),
    ("gemma3:12b", (1, 10), (10, 10), 1.0000),
    ("llama3.1:8b", (3, 6), (8, 10), 0.8829),
    ("mistral:7b", (3, 10), (7, 10), 0.9572),
];

/// Abusive trials, SPICE × recognition 2×2: (SPICE NO, SPICE YES).
pub const RECOGNIZED_ROW: (u64, u64) = (109, 22);
pub const MISSED_ROW: (u64, u64) = (17, 4);

/// Published Pr[missed > recognized] for the overall recognition contrast.
pub const RECOGNITION_OVERALL_PR: f64 = 0.6674;

/// Tone-wise P(SPICE=YES) stability anchors: (tone, all-data, min, max).
pub const LOIO_ANCHORS: [(Tone, f64, f64, f64); 3] = [
    (Tone::Abusive, 0.179, 0.163, 0.200),
    (Tone::Unclear, 0.604, 0.565, 0.643),
    (Tone::Friendly, 0.975, 0.972, 0.993),
];

/// Cluster-bootstrap percentile anchors: (statistic, 2.5%, 50%, 97.5%).
pub const BOOTSTRAP_ANCHORS: [(&str, f64, f64, f64); 2] = [
    ("cramers_v", 0.571, 0.662, 0.747),
    ("rao_scott_p_adj", 0.0001, 0.0004, 0.0026),
];

// ---------------------------------------------------------------------------
// Synthetic per-trial log matching every published margin simultaneously.
// ---------------------------------------------------------------------------

const TONE_ORDER: [Tone; 3] = [Tone::Abusive, Tone::Unclear, Tone::Friendly];
const CONDITION_LABELS: [&str; 4] = ["1a", "1b", "2a", "2b"];

/// (yes, no, noncompliant) per [tone][model][condition]; tones in
/// `TONE_ORDER`, models in `MODELS`, conditions 1a/1b/2a/2b. Solved so both
/// the model × tone and condition × tone margins hold.
const SPICE_ALLOC: [[[(u8, u8, u8); 4]; 4]; 3] = [
    // abusive
    [
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 10, 0), (0, 10, 0), (0, 7, 3), (5, 4, 1)],
        [(0, 10, 0), (9, 1, 0), (8, 2, 0), (0, 10, 0)],
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (6, 4, 0)],
    ],
    // unclear
    [
        [(9, 1, 0), (10, 0, 0), (5, 5, 0), (0, 10, 0)],
        [(0, 10, 0), (10, 0, 0), (0, 10, 0), (9, 1, 0)],
        [(1, 6, 3), (10, 0, 0), (9, 0, 1), (7, 3, 0)],
        [(0, 9, 1), (5, 5, 0), (9, 1, 0), (9, 0, 1)],
    ],
    // friendly
    [
        [(10, 0, 0), (10, 0, 0), (10, 0, 0), (10, 0, 0)],
        [(10, 0, 0), (10, 0, 0), (9, 1, 0), (9, 1, 0)],
        [(10, 0, 0), (10, 0, 0), (10, 0, 0), (9, 1, 0)],
        [(10, 0, 0), (9, 1, 0), (10, 0, 0), (10, 0, 0)],
    ],
];

/// Abuse-question allocation for the unclear and friendly tones (the abusive
/// tone is driven by `ABUSIVE_JOINT` so the recognition 2×2 lands exactly).
const ABUSE_ALLOC: [[[(u8, u8, u8); 4]; 4]; 3] = [
    // abusive (superseded by ABUSIVE_JOINT, kept for the margins)
    [
        [(9, 1, 0), (9, 1, 0), (9, 1, 0), (8, 2, 0)],
        [(9, 1, 0), (9, 1, 0), (9, 1, 0), (9, 1, 0)],
        [(10, 0, 0), (10, 0, 0), (10, 0, 0), (10, 0, 0)],
        [(6, 3, 1), (6, 3, 1), (6, 3, 1), (6, 3, 1)],
    ],
    // unclear
    [
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 6, 4), (0, 6, 4), (0, 6, 4), (0, 7, 3)],
        [(1, 6, 3), (0, 8, 2), (0, 8, 2), (0, 8, 2)],
    ],
    // friendly
    [
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 9, 1), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
    ],
];

const ADEQUACY_ALLOC: [[[(u8, u8, u8); 4]; 4]; 3] = [
    // abusive
    [
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 10, 0), (0, 10, 0), (0, 10, 0), (0, 10, 0)],
        [(0, 9, 1), (0, 9, 1), (0, 10, 0), (0, 10, 0)],
        [(1, 8, 1), (1, 9, 0), (1, 9, 0), (0, 10, 0)],
    ],
    // unclear
    [
        [(3, 7, 0), (3, 7, 0), (3, 7, 0), (2, 8, 0)],
        [(3, 6, 1), (3, 6, 1), (3, 7, 0), (3, 7, 0)],
        [(3, 3, 4), (3, 3, 4), (3, 3, 4), (3, 3, 4)],
        [(7, 1, 2), (7, 1, 2), (7, 1, 2), (7, 2, 1)],
    ],
    // friendly
    [
        [(8, 2, 0), (7, 3, 0), (7, 3, 0), (7, 3, 0)],
        [(8, 2, 0), (8, 2, 0), (8, 2, 0), (8, 2, 0)],
        [(9, 0, 1), (8, 2, 0), (8, 2, 0), (8, 2, 0)],
        [(9, 0, 1), (9, 1, 0), (9, 1, 0), (9, 1, 0)],
    ],
];

/// Abusive tone only: per (model, condition), the 10 trials' SPICE letters
/// and abuse-question letters (Y/N/X; X = noncompliant), arranged so the
/// trial-level recognition × SPICE quadrant reproduces the published 2×2.
const ABUSIVE_JOINT: [(&str, &str, &str); 16] = [
    ("1a", "NNNNNNNNNN", "NNNNNYYYYY"),
    ("1b", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("2a", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("2b", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("1a", "NNNNNNNNNN", "NNNNYYYYYY"),
    ("1b", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("2a", "NNNNNNNXXX", "YYYYYYYYYY"),
    ("2b", "YYYYYNNNNX", "YYYYYYYYYY"),
    ("1a", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("1b", "YYYYYYYYYN", "YYYYYYYYYY"),
    ("2a", "YYYYYYYYNN", "YYYYYYYYYY"),
    ("2b", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("1a", "NNNNNNNNNN", "NNNNNNNNXX"),
    ("1b", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("2a", "NNNNNNNNNN", "YYYYYYYYYY"),
    ("2b", "YYYYYYNNNN", "NNNNXXYYYY"),
];

fn tone_prefix(tone: Tone) -> &'static str {
    match tone {
        Tone::Friendly => "f",
        Tone::Unclear => "u",
        Tone::Abusive => "a",
    }
}

fn answer_letterings(cell: (u8, u8, u8)) -> Vec<char> {
    let (yes, no, noncompliant) = cell;
    let mut letters = Vec::with_capacity(10);
    letters.extend(std::iter::repeat('Y').take(yes as usize));
    letters.extend(std::iter::repeat('N').take(no as usize));
    letters.extend(std::iter::repeat('X').take(noncompliant as usize));
    letters
}

fn record_for(
    tone: Tone,
    model: &str,
    condition: Condition,
    interaction_index: usize,
    question: Question,
    letter: char,
) -> TrialRecord {
    let interaction_id = format!("{}_{:02}", tone_prefix(tone), interaction_index + 1);
    let (raw_response, parsed) = match letter {
        'Y' => ("YES".to_string(), ParsedAnswer::Yes),
        'N' => ("NO".to_string(), ParsedAnswer::No),
        _ => (
            "I would prefer not to answer that.".to_string(),
            ParsedAnswer::Noncompliant,
        ),
    };
    TrialRecord {
        trial_id: format!("{interaction_id}__{model}__{}__{question}", condition.label()),
        interaction_id,
        model_name: model.to_string(),
        condition,
        question,
        tone,
        raw_response,
        parsed,
        timestamp: "1970-01-01T00:00:00+00:00".into(),
        endpoint_model: model.to_string(),
        latency_ms: 0,
    }
}

/// The 1440-record synthetic log (30 interactions × 4 models × 4 conditions
/// × 3 questions) whose margins match every published aggregate.
pub fn synthetic_reference_log() -> Vec<TrialRecord> {
    let mut records = Vec::with_capacity(1440);
    for (tone_idx, &tone) in TONE_ORDER.iter().enumerate() {
        for (model_idx, model) in MODELS.iter().enumerate() {
            for (cond_idx, label) in CONDITION_LABELS.iter().enumerate() {
                let condition = Condition::from_label(label).expect("known label");
                let (spice_letters, abuse_letters): (Vec<char>, Vec<char>) =
                    if tone == Tone::Abusive {
                        let (_, spice, abuse) = ABUSIVE_JOINT[model_idx * 4 + cond_idx];
                        (spice.chars().collect(), abuse.chars().collect())
                    } else {
                        (
                            answer_letterings(SPICE_ALLOC[tone_idx][model_idx][cond_idx]),
                            answer_letterings(ABUSE_ALLOC[tone_idx][model_idx][cond_idx]),
                        )
                    };
                let adequacy_letters =
                    answer_letterings(ADEQUACY_ALLOC[tone_idx][model_idx][cond_idx]);
                for idx in 0..10 {
                    records.push(record_for(tone, model, condition, idx, Question::Spice, spice_letters[idx]));
                    records.push(record_for(tone, model, condition, idx, Question::Abusive, abuse_letters[idx]));
                    records.push(record_for(tone, model, condition, idx, Question::Adequate, adequacy_letters[idx]));
                }
            }
        }
    }
    records
}
