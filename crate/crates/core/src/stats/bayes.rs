//! Beta-Binomial engine: cell posteriors, pairwise contrasts, ordering
//! probabilities, and the full report over trial records.

use serde::{Deserialize, Serialize};

use crate::corpus::{Condition, PreambleMode, PresentationFormat, Question, Tone};
use crate::error::StatsError;
use crate::numerics::{beta_quantile, sample_beta, RngStream};
use crate::runner::{ParsedAnswer, TrialRecord};

use super::resample::percentile;

/// Binomial cell under a Beta prior (uniform Beta(1,1) by default): the
/// posterior is Beta(k + a₀, n − k + b₀).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosteriorCell {
    pub label: String,
    pub successes: u64,
    pub trials: u64,
    pub alpha: f64,
    pub beta: f64,
    /// Posterior mean (k+1)/(n+2) under the uniform prior.
    pub mean: f64,
    pub cri_low: f64,
    pub cri_high: f64,
    /// True when the cell had no observations, so the posterior is the prior.
    pub prior_only: bool,
}

impl PosteriorCell {
    pub fn new(label: impl Into<String>, successes: u64, trials: u64) -> Result<Self, StatsError> {
        Self::with_prior(label, successes, trials, 1.0, 1.0)
    }

    pub fn with_prior(
        label: impl Into<String>,
        successes: u64,
        trials: u64,
        prior_alpha: f64,
        prior_beta: f64,
    ) -> Result<Self, StatsError> {
        if successes > trials {
            return Err(StatsError::Invalid(format!(
                "cell has k={successes} > n={trials}"
            )));
        }
        let alpha = successes as f64 + prior_alpha;
        let beta = (trials - successes) as f64 + prior_beta;
        Ok(Self {
            label: label.into(),
            successes,
            trials,
            alpha,
            beta,
            mean: alpha / (alpha + beta),
            cri_low: beta_quantile(0.025, alpha, beta)?,
            cri_high: beta_quantile(0.975, alpha, beta)?,
            prior_only: trials == 0,
        })
    }

    pub fn sample(&self, stream: &mut RngStream) -> Result<f64, StatsError> {
        Ok(sample_beta(self.alpha, self.beta, stream)?)
    }
}

/// Posterior comparison of two cells by paired simulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContrastResult {
    pub label: String,
    /// Fraction of paired draws with p_B > p_A.
    pub pr_b_gt_a: f64,
    /// Equal-tailed 95% interval of Δ = p_B − p_A.
    pub delta_cri: (f64, f64),
    /// Equal-tailed 95% interval of (p_B/(1−p_B)) / (p_A/(1−p_A)).
    pub or_cri: (f64, f64),
    pub draws: u32,
    pub seed: u64,
    pub stream: u64,
}

/// Simulate `draws` paired samples from the two independent posteriors.
pub fn contrast(
    cell_a: &PosteriorCell,
    cell_b: &PosteriorCell,
    draws: u32,
    stream: &mut RngStream,
) -> Result<ContrastResult, StatsError> {
    if draws == 0 {
        return Err(StatsError::BadReplicateCount);
    }
    let mut deltas = Vec::with_capacity(draws as usize);
    let mut odds = Vec::with_capacity(draws as usize);
    let mut wins = 0u32;
    for _ in 0..draws {
        let pa = cell_a.sample(stream)?;
        let pb = cell_b.sample(stream)?;
        if pb > pa {
            wins += 1;
        }
        deltas.push(pb - pa);
        odds.push((pb / (1.0 - pb)) / (pa / (1.0 - pa)));
    }
    deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    odds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ContrastResult {
        label: format!("{} > {}", cell_b.label, cell_a.label),
        pr_b_gt_a: wins as f64 / draws as f64,
        delta_cri: (
            percentile(&deltas, 0.025).unwrap(),
            percentile(&deltas, 0.975).unwrap(),
        ),
        or_cri: (
            percentile(&odds, 0.025).unwrap(),
            percentile(&odds, 0.975).unwrap(),
        ),
        draws,
        seed: stream.seed(),
        stream: stream.stream(),
    })
}

/// Fraction of joint draws strictly decreasing in the given cell order.
pub fn ordering_probability(
    cells: &[&PosteriorCell],
    draws: u32,
    stream: &mut RngStream,
) -> Result<f64, StatsError> {
    if cells.len() < 2 {
        return Err(StatsError::Invalid(
            "ordering probability needs at least two cells".into(),
        ));
    }
    if draws == 0 {
        return Err(StatsError::BadReplicateCount);
    }
    let mut ordered = 0u32;
    for _ in 0..draws {
        let mut previous = f64::INFINITY;
        let mut ok = true;
        for cell in cells {
            let p = cell.sample(stream)?;
            if p >= previous {
                ok = false;
            }
            previous = p;
        }
        if ok {
            ordered += 1;
        }
    }
    Ok(ordered as f64 / draws as f64)
}

/// One named block of cells and contrasts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BayesSection {
    pub name: String,
    pub cells: Vec<PosteriorCell>,
    pub contrasts: Vec<ContrastResult>,
}

/// The full posterior battery over a trial log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BayesReport {
    /// SPICE by tone, with pairwise tone contrasts.
    pub spice_by_tone: BayesSection,
    /// Pr[friendly > unclear > abusive] over joint draws.
    pub tone_ordering_probability: f64,
    /// SPICE by tone × condition, with 1b−1a and 2b−2a contrasts per tone.
    pub spice_by_tone_condition: BayesSection,
    /// Unclear tone: per-model 1b vs 1a within the prompt format.
    pub unclear_prompt_per_model: BayesSection,
    /// SPICE by model × tone.
    pub spice_by_model_tone: BayesSection,
    /// Abuse-question YES by model × tone.
    pub abuse_by_model_tone: BayesSection,
    /// Adequacy-question YES by model × tone.
    pub adequacy_by_model_tone: BayesSection,
    /// Abusive tone only: SPICE split by whether abuse was recognized.
    pub abusive_recognition: BayesSection,
    pub draws: u32,
    pub seed: u64,
}

const TONE_ORDER: [Tone; 3] = [Tone::Abusive, Tone::Friendly, Tone::Unclear];

fn count_cell<'a, I>(records: I, question: Question) -> (u64, u64)
where
    I: Iterator<Item = &'a TrialRecord>,
{
    let mut k = 0;
    let mut n = 0;
    for r in records.filter(|r| r.question == question) {
        match r.parsed {
            ParsedAnswer::Yes => {
                k += 1;
                n += 1;
            }
            ParsedAnswer::No => n += 1,
            ParsedAnswer::Noncompliant => {}
        }
    }
    (k, n)
}

fn sorted_models(records: &[TrialRecord]) -> Vec<String> {
    let mut models: Vec<String> = Vec::new();
    for r in records {
        if !models.contains(&r.model_name) {
            models.push(r.model_name.clone());
        }
    }
    models.sort();
    models
}

/// Emit the full report. Contrast i draws from stream id `1000 + i` of the
/// given seed, so the report is independent of evaluation order; empty splits
/// become prior-only cells rather than errors.
pub fn bayes_report(
    records: &[TrialRecord],
    draws: u32,
    seed: u64,
) -> Result<BayesReport, StatsError> {
    let models = sorted_models(records);
    let mut stream_counter = 1000u64;
    let mut next_stream = || {
        stream_counter += 1;
        RngStream::new(seed, stream_counter)
    };

    // A: SPICE by tone.
    let tone_cell = |tone: Tone| -> Result<PosteriorCell, StatsError> {
        let (k, n) = count_cell(
            records.iter().filter(|r| r.tone == tone),
            Question::Spice,
        );
        PosteriorCell::new(tone.as_str(), k, n)
    };
    let abusive = tone_cell(Tone::Abusive)?;
    let friendly = tone_cell(Tone::Friendly)?;
    let unclear = tone_cell(Tone::Unclear)?;
    let tone_contrasts = vec![
        contrast(&abusive, &unclear, draws, &mut next_stream())?,
        contrast(&abusive, &friendly, draws, &mut next_stream())?,
        contrast(&unclear, &friendly, draws, &mut next_stream())?,
    ];
    let tone_ordering_probability = ordering_probability(
        &[&friendly, &unclear, &abusive],
        draws,
        &mut next_stream(),
    )?;
    let spice_by_tone = BayesSection {
        name: "spice_by_tone".into(),
        cells: vec![abusive, friendly, unclear],
        contrasts: tone_contrasts,
    };

    // B: SPICE by tone × condition with within-tone contrasts.
    let mut cond_cells = Vec::new();
    let mut cond_contrasts = Vec::new();
    for tone in TONE_ORDER {
        let mut by_label = Vec::new();
        for condition in Condition::ALL {
            let (k, n) = count_cell(
                records
                    .iter()
                    .filter(|r| r.tone == tone && r.condition == condition),
                Question::Spice,
            );
            let cell =
                PosteriorCell::new(format!("{}:{}", tone.as_str(), condition.label()), k, n)?;
            by_label.push((condition.label(), cell));
        }
        let get = |label: &str| by_label.iter().find(|(l, _)| *l == label).unwrap().1.clone();
        cond_contrasts.push(contrast(&get("1a"), &get("1b"), draws, &mut next_stream())?);
        cond_contrasts.push(contrast(&get("2a"), &get("2b"), draws, &mut next_stream())?);
        cond_cells.extend(by_label.into_iter().map(|(_, c)| c));
    }
    let spice_by_tone_condition = BayesSection {
        name: "spice_by_tone_condition".into(),
        cells: cond_cells,
        contrasts: cond_contrasts,
    };

    // C: unclear tone, per-model 1b vs 1a (prompt format).
    let mut c_cells = Vec::new();
    let mut c_contrasts = Vec::new();
    for model in &models {
        let cell_for = |condition: Condition| -> Result<PosteriorCell, StatsError> {
            let (k, n) = count_cell(
                records.iter().filter(|r| {
                    r.tone == Tone::Unclear
                        && r.model_name == *model
                        && r.condition == condition
                }),
                Question::Spice,
            );
            PosteriorCell::new(format!("{model}:{}", condition.label()), k, n)
        };
        let cell_1a = cell_for(Condition {
            format: PresentationFormat::Prompt,
            preamble: PreambleMode::Included,
        })?;
        let cell_1b = cell_for(Condition {
            format: PresentationFormat::Prompt,
            preamble: PreambleMode::Omitted,
        })?;
        c_contrasts.push(contrast(&cell_1a, &cell_1b, draws, &mut next_stream())?);
        c_cells.push(cell_1a);
        c_cells.push(cell_1b);
    }
    let unclear_prompt_per_model = BayesSection {
        name: "unclear_prompt_per_model".into(),
        cells: c_cells,
        contrasts: c_contrasts,
    };

    // D/E/F: per model × tone for each question.
    let model_tone_section = |name: &str, question: Question| -> Result<BayesSection, StatsError> {
        let mut cells = Vec::new();
        for model in &models {
            for tone in TONE_ORDER {
                let (k, n) = count_cell(
                    records
                        .iter()
                        .filter(|r| r.tone == tone && r.model_name == *model),
                    question,
                );
                cells.push(PosteriorCell::new(
                    format!("{model}:{}", tone.as_str()),
                    k,
                    n,
                )?);
            }
        }
        Ok(BayesSection {
            name: name.into(),
            cells,
            contrasts: Vec::new(),
        })
    };
    let spice_by_model_tone = model_tone_section("spice_by_model_tone", Question::Spice)?;
    let abuse_by_model_tone = model_tone_section("abuse_by_model_tone", Question::Abusive)?;
    let adequacy_by_model_tone = model_tone_section("adequacy_by_model_tone", Question::Adequate)?;

    // G: abusive tone, SPICE split by recognition status; trials pair the
    // SPICE and abuse answers within the same (interaction, model, condition).
    let mut g_cells = Vec::new();
    let mut g_contrasts = Vec::new();
    let mut scopes: Vec<(String, Option<&String>)> = vec![("overall".into(), None)];
    scopes.extend(models.iter().map(|m| (m.clone(), Some(m))));
    for (label, model) in scopes {
        let (recognized, missed) = recognition_split(records, model);
        let recognized_cell = PosteriorCell::new(
            format!("{label}:recognized"),
            recognized.0,
            recognized.1,
        )?;
        let missed_cell =
            PosteriorCell::new(format!("{label}:missed"), missed.0, missed.1)?;
        g_contrasts.push(contrast(
            &recognized_cell,
            &missed_cell,
            draws,
            &mut next_stream(),
        )?);
        g_cells.push(recognized_cell);
        g_cells.push(missed_cell);
    }
    let abusive_recognition = BayesSection {
        name: "abusive_recognition".into(),
        cells: g_cells,
        contrasts: g_contrasts,
    };

    Ok(BayesReport {
        spice_by_tone,
        tone_ordering_probability,
        spice_by_tone_condition,
        unclear_prompt_per_model,
        spice_by_model_tone,
        abuse_by_model_tone,
        adequacy_by_model_tone,
        abusive_recognition,
        draws,
        seed,
    })
}

/// ((k,n) for SPICE among recognized trials, (k,n) among missed) within the
/// abusive tone, keeping only trials compliant on both questions.
pub fn recognition_split(
    records: &[TrialRecord],
    model: Option<&String>,
) -> ((u64, u64), (u64, u64)) {
    use std::collections::HashMap;
    let mut spice: HashMap<(&str, &str, Condition), ParsedAnswer> = HashMap::new();
    let mut abuse: HashMap<(&str, &str, Condition), ParsedAnswer> = HashMap::new();
    for r in records {
        if r.tone != Tone::Abusive {
            continue;
        }
        if let Some(m) = model {
            if &r.model_name != m {
                continue;
            }
        }
        let key = (r.interaction_id.as_str(), r.model_name.as_str(), r.condition);
        match r.question {
            Question::Spice => {
                spice.insert(key, r.parsed);
            }
            Question::Abusive => {
                abuse.insert(key, r.parsed);
            }
            Question::Adequate => {}
        }
    }
    let mut recognized = (0u64, 0u64);
    let mut missed = (0u64, 0u64);
    for (key, spice_answer) in &spice {
        let Some(abuse_answer) = abuse.get(key) else {
            continue;
        };
        let spice_yes = match spice_answer {
            ParsedAnswer::Yes => true,
            ParsedAnswer::No => false,
            ParsedAnswer::Noncompliant => continue,
        };
        let bucket = match abuse_answer {
            ParsedAnswer::Yes => &mut recognized,
            ParsedAnswer::No => &mut missed,
            ParsedAnswer::Noncompliant => continue,
        };
        bucket.1 += 1;
        if spice_yes {
            bucket.0 += 1;
        }
    }
    (recognized, missed)
}
