//! Turn a trial log into the full statistical report.
//!
//! Every number here is produced by the library modules; writers in
//! [`crate::report`] only format what this module computes.

use serde::{Deserialize, Serialize};

use crate::corpus::{Condition, Question, Tone};
use crate::error::StatsError;
use crate::numerics::RngStream;
use crate::runner::TrialRecord;
use crate::stats::bayes::{bayes_report, recognition_split, BayesReport};
use crate::stats::freq::{
    chi_square, cluster_permutation_test, contingency_from_records, cramers_v, estimate_icc,
    holm_adjust, paired_sign_test, rao_scott, wilson_interval, PermutationStatistic,
};
use crate::stats::glm::{cluster_robust_cov, fit_logit, odds_ratios, CovCorrection, DesignMatrix, GlmFit};
use crate::stats::resample::{cluster_bootstrap, leave_one_cluster_out, ResampleStatistic};
use crate::stats::ClusteredBinaryDataset;

/// Knobs for one analysis run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub seed: u64,
    pub permutation_replicates: u32,
    pub bootstrap_replicates: u32,
    pub draws: u32,
    pub confidence: f64,
    /// Re-estimate the design effect on every resample (default) or freeze
    /// the full-data value.
    pub freeze_design_effect: bool,
    /// Resample clusters within tone strata instead of pooling.
    pub stratified_bootstrap: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            permutation_replicates: 1999,
            bootstrap_replicates: 1000,
            draws: 10_000,
            confidence: 0.95,
            freeze_design_effect: false,
            stratified_bootstrap: false,
        }
    }
}

/// A section that either computed or was skipped with a reason.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionResult<T> {
    pub value: Option<T>,
    pub skipped: Option<String>,
}

impl<T> SectionResult<T> {
    fn computed(value: T) -> Self {
        Self { value: Some(value), skipped: None }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Self { value: None, skipped: Some(reason.into()) }
    }

    pub fn get(&self) -> Option<&T> {
        self.value.as_ref()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuestionCompliance {
    pub question: Question,
    pub compliant: usize,
    pub noncompliant: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToneCountRow {
    pub tone: Tone,
    pub no: u64,
    pub yes: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToneSpiceSection {
    pub rows: Vec<ToneCountRow>,
    pub excluded_noncompliant: usize,
    pub n: u64,
    pub chi2: f64,
    pub df: u32,
    pub p: f64,
    pub cramers_v: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusteringSection {
    pub clusters: usize,
    pub icc: f64,
    pub mean_cluster_size: f64,
    pub design_effect: f64,
    pub chi2_adjusted: f64,
    pub p_adjusted: f64,
    /// The ICC estimator is ANOVA-type on within-tone deviations; recorded
    /// here because the published estimator is not fully specified.
    pub estimator: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermutationSection {
    pub statistic: String,
    pub observed: f64,
    pub p: f64,
    pub replicates: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlmCoefficient {
    pub name: String,
    pub beta: f64,
    pub model_se: f64,
    pub robust_se: f64,
    pub p_robust: f64,
    pub odds_ratio: f64,
    pub or_ci: (f64, f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlmSection {
    pub reference_tone: Tone,
    pub coefficients: Vec<GlmCoefficient>,
    pub converged: bool,
    pub iterations: usize,
    pub clusters: usize,
    pub separation_warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WilsonRow {
    pub model: Option<String>,
    pub tone: Tone,
    pub successes: u64,
    pub trials: u64,
    pub proportion: f64,
    pub ci: (f64, f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionToneRow {
    pub condition: String,
    pub tone: Tone,
    pub successes: u64,
    pub trials: u64,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecognitionRow {
    pub label: String,
    pub spice_no: u64,
    pub spice_yes: u64,
    pub row_pct_no: f64,
    pub row_pct_yes: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetGlm {
    pub beta: f64,
    pub robust_se: Option<f64>,
    pub p_robust: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecognitionSection {
    pub rows: Vec<RecognitionRow>,
    pub subset_glm: Option<SubsetGlm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignContrast {
    pub label: String,
    pub n_pos: u64,
    pub n_neg: u64,
    pub n_ties: u64,
    pub p: f64,
    pub p_holm: f64,
    /// Mean of per-interaction paired differences.
    pub paired_mean_delta: f64,
    /// Difference of the two cell means, reported alongside.
    pub cell_mean_delta: f64,
    pub pairs: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoioRow {
    pub tone: Tone,
    pub all_data: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoioSection {
    pub rows: Vec<LoioRow>,
    pub p_adjusted_max: Option<f64>,
    pub fraction_significant: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BootstrapRow {
    pub statistic: String,
    pub p2_5: f64,
    pub median: f64,
    pub p97_5: f64,
    pub missing: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BootstrapSection {
    pub replicates: u32,
    pub rows: Vec<BootstrapRow>,
    pub fraction_significant: f64,
    pub stratified: bool,
    pub design_effect_frozen: bool,
}

/// Everything the analyze command writes, keyed by study structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// All values are computed from the log by the library; nothing is
    /// transcribed.
    pub provenance: String,
    pub options: AnalysisOptions,
    pub compliance: Vec<QuestionCompliance>,
    pub tone_spice: SectionResult<ToneSpiceSection>,
    pub clustering: SectionResult<ClusteringSection>,
    pub permutation: SectionResult<PermutationSection>,
    pub glm: SectionResult<GlmSection>,
    pub tone_wilson: SectionResult<Vec<WilsonRow>>,
    pub model_tone_wilson: SectionResult<Vec<WilsonRow>>,
    pub condition_tone: SectionResult<Vec<ConditionToneRow>>,
    pub recognition: SectionResult<RecognitionSection>,
    pub sign_tests: SectionResult<Vec<SignContrast>>,
    pub loio: SectionResult<LoioSection>,
    pub bootstrap: SectionResult<BootstrapSection>,
    pub bayes: SectionResult<BayesReport>,
}

const COUNT_TONE_ORDER: [Tone; 3] = [Tone::Abusive, Tone::Unclear, Tone::Friendly];
const CELL_TONE_ORDER: [Tone; 3] = [Tone::Abusive, Tone::Friendly, Tone::Unclear];

/// Compliant-subset (successes, trials) for one question under a filter.
fn cell<F>(records: &[TrialRecord], question: Question, keep: F) -> (u64, u64)
where
    F: Fn(&TrialRecord) -> bool,
{
    let mut k = 0;
    let mut n = 0;
    for r in records.iter().filter(|r| r.question == question && keep(r)) {
        match r.parsed {
            crate::runner::ParsedAnswer::Yes => {
                k += 1;
                n += 1;
            }
            crate::runner::ParsedAnswer::No => n += 1,
            crate::runner::ParsedAnswer::Noncompliant => {}
        }
    }
    (k, n)
}

/// Clustered (interaction, tone, outcome) rows from the compliant subset of
/// one question.
pub fn clustered_dataset(
    records: &[TrialRecord],
    question: Question,
) -> Result<ClusteredBinaryDataset, StatsError> {
    let rows = records
        .iter()
        .filter(|r| r.question == question && r.is_compliant())
        .map(|r| {
            (
                r.interaction_id.clone(),
                r.tone.as_str().to_string(),
                r.parsed == crate::runner::ParsedAnswer::Yes,
            )
        });
    ClusteredBinaryDataset::from_rows(rows)
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

fn tones_present(records: &[TrialRecord]) -> Vec<Tone> {
    COUNT_TONE_ORDER
        .into_iter()
        .filter(|t| records.iter().any(|r| r.tone == *t))
        .collect()
}

/// Run the whole battery over a trial log.
pub fn analyze_records(records: &[TrialRecord], options: &AnalysisOptions) -> AnalysisReport {
    let compliance = Question::ALL
        .iter()
        .map(|&question| {
            let of_q: Vec<&TrialRecord> =
                records.iter().filter(|r| r.question == question).collect();
            let compliant = of_q.iter().filter(|r| r.is_compliant()).count();
            QuestionCompliance {
                question,
                compliant,
                noncompliant: of_q.len() - compliant,
                total: of_q.len(),
            }
        })
        .collect();

    let tones = tones_present(records);
    let models = sorted_models(records);
    let multi_tone = tones.len() >= 2;
    let too_few_tones = || format!("fewer than 2 tones present ({})", tones.len());

    // Tone × SPICE counts and the naive association test.
    let tone_spice = if !multi_tone {
        SectionResult::skipped(too_few_tones())
    } else {
        match tone_spice_section(records) {
            Ok(section) => SectionResult::computed(section),
            Err(e) => SectionResult::skipped(e.to_string()),
        }
    };

    // Clustered dataset reused by several sections.
    let spice_data = clustered_dataset(records, Question::Spice);

    let clustering = match (&tone_spice.value, &spice_data) {
        (Some(ts), Ok(data)) if multi_tone => match estimate_icc(data) {
            Ok(summary) => match rao_scott(ts.chi2, ts.df, summary.design_effect.max(1.0)) {
                Ok((chi2_adjusted, p_adjusted)) => SectionResult::computed(ClusteringSection {
                    clusters: data.n_clusters(),
                    icc: summary.icc,
                    mean_cluster_size: summary.mean_cluster_size,
                    design_effect: summary.design_effect,
                    chi2_adjusted,
                    p_adjusted,
                    estimator: "one-way ANOVA on within-tone deviations".into(),
                }),
                Err(e) => SectionResult::skipped(e.to_string()),
            },
            Err(e) => SectionResult::skipped(e.to_string()),
        },
        _ => SectionResult::skipped(too_few_tones()),
    };

    let permutation = match &spice_data {
        Ok(data) if multi_tone => {
            let stream = RngStream::new(options.seed.wrapping_add(1), 0);
            match cluster_permutation_test(
                data,
                PermutationStatistic::ChiSquare,
                options.permutation_replicates,
                &stream,
            ) {
                Ok((observed, p)) => SectionResult::computed(PermutationSection {
                    statistic: "chi2".into(),
                    observed,
                    p,
                    replicates: options.permutation_replicates,
                    seed: options.seed.wrapping_add(1),
                }),
                Err(e) => SectionResult::skipped(e.to_string()),
            }
        }
        _ => SectionResult::skipped(too_few_tones()),
    };

    let glm = match &spice_data {
        Ok(data) if multi_tone => match glm_section(data) {
            Ok(section) => SectionResult::computed(section),
            Err(e) => SectionResult::skipped(e.to_string()),
        },
        _ => SectionResult::skipped(too_few_tones()),
    };

    let tone_wilson = wilson_rows(records, &tones, None, options.confidence);
    let model_tone_wilson = {
        let mut rows = Vec::new();
        let mut error = None;
        for model in &models {
            match wilson_rows(records, &tones, Some(model), options.confidence) {
                SectionResult { value: Some(mut r), .. } => rows.append(&mut r),
                SectionResult { skipped: Some(e), .. } => error = Some(e),
                _ => {}
            }
        }
        match (rows.is_empty(), error) {
            (true, Some(e)) => SectionResult::skipped(e),
            (true, None) => SectionResult::skipped("no compliant trials"),
            (false, _) => SectionResult::computed(rows),
        }
    };

    let condition_tone = {
        let mut rows = Vec::new();
        for condition in Condition::ALL {
            for &tone in &tones {
                let (k, n) = cell(records, Question::Spice, |r| {
                    r.condition == condition && r.tone == tone
                });
                if n > 0 {
                    rows.push(ConditionToneRow {
                        condition: condition.label().to_string(),
                        tone,
                        successes: k,
                        trials: n,
                        mean: k as f64 / n as f64,
                    });
                }
            }
        }
        if rows.is_empty() {
            SectionResult::skipped("no compliant trials")
        } else {
            SectionResult::computed(rows)
        }
    };

    let recognition = recognition_section(records);
    let sign_tests = sign_test_section(records, &models);

    let loio = match &spice_data {
        Ok(data) if data.n_clusters() >= 2 => match loio_section(data, &tones) {
            Ok(section) => SectionResult::computed(section),
            Err(e) => SectionResult::skipped(e.to_string()),
        },
        Ok(data) => SectionResult::skipped(format!(
            "need at least 2 clusters, found {}",
            data.n_clusters()
        )),
        Err(e) => SectionResult::skipped(e.to_string()),
    };

    let bootstrap = match &spice_data {
        Ok(data) if data.n_clusters() >= 2 => {
            match bootstrap_section(data, options) {
                Ok(section) => SectionResult::computed(section),
                Err(e) => SectionResult::skipped(e.to_string()),
            }
        }
        Ok(data) => SectionResult::skipped(format!(
            "need at least 2 clusters, found {}",
            data.n_clusters()
        )),
        Err(e) => SectionResult::skipped(e.to_string()),
    };

    let bayes = if records.iter().any(|r| r.is_compliant()) {
        match bayes_report(records, options.draws, options.seed) {
            Ok(report) => SectionResult::computed(report),
            Err(e) => SectionResult::skipped(e.to_string()),
        }
    } else {
        SectionResult::skipped("no compliant trials")
    };

    AnalysisReport {
        provenance: "computed from trial log".into(),
        options: options.clone(),
        compliance,
        tone_spice,
        clustering,
        permutation,
        glm,
        tone_wilson,
        model_tone_wilson,
        condition_tone,
        recognition,
        sign_tests,
        loio,
        bootstrap,
        bayes,
    }
}

fn tone_spice_section(records: &[TrialRecord]) -> Result<ToneSpiceSection, StatsError> {
    let spice: Vec<&TrialRecord> = records
        .iter()
        .filter(|r| r.question == Question::Spice)
        .collect();
    let (_, excluded) = contingency_from_records(
        &spice,
        |r| r.tone.as_str().to_string(),
        |r| r.parsed.as_str().to_string(),
        |r| r.is_compliant(),
    )?;
    // Rebuild with fixed row/column order for presentation and the test.
    let mut rows = Vec::new();
    for tone in COUNT_TONE_ORDER {
        let (yes, n) = cell(records, Question::Spice, |r| r.tone == tone);
        if n > 0 {
            rows.push(ToneCountRow { tone, no: n - yes, yes });
        }
    }
    let table = crate::stats::ContingencyTable::new(
        rows.iter().map(|r| r.tone.as_str().to_string()).collect(),
        vec!["NO".into(), "YES".into()],
        rows.iter().map(|r| vec![r.no, r.yes]).collect(),
    )?;
    let test = chi_square(&table)?;
    Ok(ToneSpiceSection {
        n: table.total(),
        excluded_noncompliant: excluded,
        rows,
        chi2: test.statistic,
        df: test.df,
        p: test.p,
        cramers_v: cramers_v(&table)?,
    })
}

fn glm_section(data: &ClusteredBinaryDataset) -> Result<GlmSection, StatsError> {
    let labels = data.group_labels();
    let reference = if labels.iter().any(|l| l == "friendly") {
        "friendly".to_string()
    } else {
        labels[0].clone()
    };
    let design = DesignMatrix::with_group_indicators(data, &reference)?;
    let fit = fit_logit(&design)?;
    let robust = cluster_robust_cov(&fit, &design, CovCorrection::Cr1)?;
    let robust_se = GlmFit::standard_errors(&robust);
    let model_se = GlmFit::standard_errors(&fit.model_covariance);
    let ors = odds_ratios(&fit, &robust)?;
    let coefficients = fit
        .coefficients
        .iter()
        .enumerate()
        .map(|(j, &beta)| {
            Ok(GlmCoefficient {
                name: fit.col_names[j].clone(),
                beta,
                model_se: model_se[j],
                robust_se: robust_se[j],
                p_robust: GlmFit::wald_p(beta, robust_se[j])?,
                odds_ratio: ors[j].odds_ratio,
                or_ci: (ors[j].ci_low, ors[j].ci_high),
            })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;
    Ok(GlmSection {
        reference_tone: Tone::parse(&reference).unwrap_or(Tone::Friendly),
        coefficients,
        converged: fit.converged,
        iterations: fit.iterations,
        clusters: data.n_clusters(),
        separation_warnings: fit.separation_warnings,
    })
}

fn wilson_rows(
    records: &[TrialRecord],
    tones: &[Tone],
    model: Option<&String>,
    confidence: f64,
) -> SectionResult<Vec<WilsonRow>> {
    let mut rows = Vec::new();
    for &tone in CELL_TONE_ORDER.iter().filter(|t| tones.contains(t)) {
        let (k, n) = cell(records, Question::Spice, |r| {
            r.tone == tone && model.map_or(true, |m| &r.model_name == m)
        });
        if n == 0 {
            continue;
        }
        match wilson_interval(k, n, confidence) {
            Ok(ci) => rows.push(WilsonRow {
                model: model.cloned(),
                tone,
                successes: k,
                trials: n,
                proportion: k as f64 / n as f64,
                ci,
            }),
            Err(e) => return SectionResult::skipped(e.to_string()),
        }
    }
    if rows.is_empty() {
        SectionResult::skipped("no compliant trials")
    } else {
        SectionResult::computed(rows)
    }
}

fn recognition_section(records: &[TrialRecord]) -> SectionResult<RecognitionSection> {
    let (recognized, missed) = recognition_split(records, None);
    if recognized.1 + missed.1 == 0 {
        return SectionResult::skipped("no abusive trials compliant on both questions");
    }
    let row = |label: &str, (yes, n): (u64, u64)| RecognitionRow {
        label: label.to_string(),
        spice_no: n - yes,
        spice_yes: yes,
        row_pct_no: if n > 0 { (n - yes) as f64 / n as f64 } else { f64::NAN },
        row_pct_yes: if n > 0 { yes as f64 / n as f64 } else { f64::NAN },
    };
    let rows = vec![
        row("classified_as_abusive", recognized),
        row("not_classified_as_abusive", missed),
    ];
    let subset_glm = recognition_glm(records).map(|(beta, se, p)| SubsetGlm {
        beta,
        robust_se: se,
        p_robust: p,
        note: "SPICE ~ classified_as_abusive on joint-compliant abusive trials; \
               the published coefficient (≈ −1.47) is not derivable from the \
               2×2 margins, so the saturated fit is reported instead"
            .into(),
    });
    SectionResult::computed(RecognitionSection { rows, subset_glm })
}

/// Fit SPICE ~ classified_as_abusive on the abusive-tone, joint-compliant
/// subset with interaction clusters. Robust SE may be unavailable (too few
/// clusters); the point estimate still reports.
fn recognition_glm(records: &[TrialRecord]) -> Option<(f64, Option<f64>, Option<f64>)> {
    use crate::runner::ParsedAnswer;
    use std::collections::HashMap;
    let mut spice: HashMap<(&str, &str, Condition), bool> = HashMap::new();
    let mut abuse: HashMap<(&str, &str, Condition), bool> = HashMap::new();
    for r in records.iter().filter(|r| r.tone == Tone::Abusive) {
        let key = (r.interaction_id.as_str(), r.model_name.as_str(), r.condition);
        let value = match r.parsed {
            ParsedAnswer::Yes => true,
            ParsedAnswer::No => false,
            ParsedAnswer::Noncompliant => continue,
        };
        match r.question {
            Question::Spice => {
                spice.insert(key, value);
            }
            Question::Abusive => {
                abuse.insert(key, value);
            }
            Question::Adequate => {}
        }
    }
    let mut keys: Vec<_> = spice.keys().filter(|k| abuse.contains_key(*k)).collect();
    keys.sort_by_key(|k| (k.0, k.1, k.2.label()));
    if keys.is_empty() {
        return None;
    }
    let rows: Vec<Vec<f64>> = keys
        .iter()
        .map(|k| vec![1.0, abuse[*k] as u8 as f64])
        .collect();
    let response: Vec<bool> = keys.iter().map(|k| spice[*k]).collect();
    let clusters: Vec<String> = keys.iter().map(|k| k.0.to_string()).collect();
    let design = DesignMatrix::new(
        vec!["intercept".into(), "classified_as_abusive".into()],
        rows,
        response,
        clusters,
    )
    .ok()?;
    let fit = fit_logit(&design).ok()?;
    let beta = fit.coefficients[1];
    match cluster_robust_cov(&fit, &design, CovCorrection::Cr1) {
        Ok(cov) => {
            let se = GlmFit::standard_errors(&cov)[1];
            let p = GlmFit::wald_p(beta, se).ok();
            Some((beta, Some(se), p))
        }
        Err(_) => Some((beta, None, None)),
    }
}

fn sign_test_section(records: &[TrialRecord], models: &[String]) -> SectionResult<Vec<SignContrast>> {
    let unclear: Vec<&TrialRecord> = records
        .iter()
        .filter(|r| r.tone == Tone::Unclear && r.question == Question::Spice)
        .collect();
    if unclear.is_empty() {
        return SectionResult::skipped("no unclear-tone trials");
    }
    let mut interactions: Vec<String> = Vec::new();
    for r in &unclear {
        if !interactions.contains(&r.interaction_id) {
            interactions.push(r.interaction_id.clone());
        }
    }
    interactions.sort();

    // Per-interaction mean of the binary outcome across models, within one
    // condition cell; None when no compliant trial exists.
    let cell_mean = |interaction: &str, condition: Condition| -> Option<f64> {
        let mut yes = 0u32;
        let mut n = 0u32;
        for r in &unclear {
            if r.interaction_id == interaction && r.condition == condition && r.is_compliant() {
                n += 1;
                if r.parsed == crate::runner::ParsedAnswer::Yes {
                    yes += 1;
                }
            }
        }
        (n > 0).then(|| yes as f64 / n as f64)
    };
    let overall_mean = |condition: Condition| -> Option<f64> {
        let mut yes = 0u32;
        let mut n = 0u32;
        for r in &unclear {
            if r.condition == condition && r.is_compliant() {
                n += 1;
                if r.parsed == crate::runner::ParsedAnswer::Yes {
                    yes += 1;
                }
            }
        }
        (n > 0).then(|| yes as f64 / n as f64)
    };

    let contrast_defs = [
        ("unclear: prompt 1b vs 1a", "1a", "1b"),
        ("unclear: interaction 2b vs 2a", "2a", "2b"),
    ];
    let mut results = Vec::new();
    for (label, a_label, b_label) in contrast_defs {
        let a = Condition::from_label(a_label).unwrap();
        let b = Condition::from_label(b_label).unwrap();
        let pairs: Vec<(f64, f64)> = interactions
            .iter()
            .filter_map(|i| Some((cell_mean(i, a)?, cell_mean(i, b)?)))
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let test = match paired_sign_test(&pairs) {
            Ok(t) => t,
            Err(e) => return SectionResult::skipped(e.to_string()),
        };
        let cell_mean_delta = match (overall_mean(a), overall_mean(b)) {
            (Some(ma), Some(mb)) => mb - ma,
            _ => f64::NAN,
        };
        results.push(SignContrast {
            label: label.to_string(),
            n_pos: test.n_pos,
            n_neg: test.n_neg,
            n_ties: test.n_ties,
            p: test.p,
            p_holm: test.p, // adjusted below over the family
            paired_mean_delta: test.mean_delta,
            cell_mean_delta,
            pairs: pairs.len(),
        });
    }
    if results.is_empty() {
        return SectionResult::skipped("no interaction has compliant trials in both conditions");
    }
    let raw: Vec<f64> = results.iter().map(|r| r.p).collect();
    if let Ok(adjusted) = holm_adjust(&raw) {
        for (r, p_holm) in results.iter_mut().zip(adjusted) {
            r.p_holm = p_holm;
        }
    }
    // Per-model checks feed the exploratory battery (BH-controlled there);
    // the bayes section carries the per-model contrasts, so this section
    // stays at the two planned contrasts.
    let _ = models;
    SectionResult::computed(results)
}

fn tone_rate(data: &ClusteredBinaryDataset, tone: Tone) -> Option<f64> {
    let mut k = 0u64;
    let mut n = 0u64;
    for c in data
        .clusters()
        .iter()
        .filter(|c| c.group == tone.as_str())
    {
        k += c.successes() as u64;
        n += c.size() as u64;
    }
    (n > 0).then(|| k as f64 / n as f64)
}

fn p_adj_statistic(freeze: Option<f64>) -> impl Fn(&ClusteredBinaryDataset) -> Option<f64> {
    move |d: &ClusteredBinaryDataset| {
        let table = d.to_contingency().ok()?;
        let test = chi_square(&table).ok()?;
        let deff = match freeze {
            Some(value) => value,
            None => estimate_icc(d).ok()?.design_effect,
        };
        rao_scott(test.statistic, test.df, deff.max(1.0))
            .ok()
            .map(|(_, p)| p)
    }
}

fn loio_section(data: &ClusteredBinaryDataset, tones: &[Tone]) -> Result<LoioSection, StatsError> {
    let mut statistics: Vec<ResampleStatistic> = tones
        .iter()
        .map(|&tone| {
            ResampleStatistic::new(tone.as_str(), move |d: &ClusteredBinaryDataset| {
                tone_rate(d, tone)
            })
        })
        .collect();
    statistics.push(
        ResampleStatistic::new("rao_scott_p_adj", p_adj_statistic(None)).with_significance(0.05),
    );
    let report = leave_one_cluster_out(data, &statistics)?;
    let rows = tones
        .iter()
        .filter_map(|&tone| {
            let summary = report.statistic(tone.as_str())?;
            Some(LoioRow {
                tone,
                all_data: tone_rate(data, tone)?,
                min: summary.min?,
                max: summary.max?,
            })
        })
        .collect();
    let p_summary = report.statistic("rao_scott_p_adj");
    Ok(LoioSection {
        rows,
        p_adjusted_max: p_summary.and_then(|s| s.max),
        fraction_significant: p_summary
            .and_then(|s| s.significant_fraction)
            .unwrap_or(0.0),
    })
}

fn bootstrap_section(
    data: &ClusteredBinaryDataset,
    options: &AnalysisOptions,
) -> Result<BootstrapSection, StatsError> {
    let frozen_deff = options
        .freeze_design_effect
        .then(|| estimate_icc(data).map(|s| s.design_effect))
        .transpose()?;
    let statistics = vec![
        ResampleStatistic::new("cramers_v", |d: &ClusteredBinaryDataset| {
            cramers_v(&d.to_contingency().ok()?).ok()
        }),
        ResampleStatistic::new("rao_scott_p_adj", p_adj_statistic(frozen_deff))
            .with_significance(0.05),
    ];
    let stream = RngStream::new(options.seed.wrapping_add(2), 0);
    let report = if options.stratified_bootstrap {
        crate::stats::resample::cluster_bootstrap_stratified(
            data,
            &statistics,
            options.bootstrap_replicates,
            &stream,
        )?
    } else {
        cluster_bootstrap(data, &statistics, options.bootstrap_replicates, &stream)?
    };
    let rows = report
        .statistics
        .iter()
        .filter_map(|s| {
            Some(BootstrapRow {
                statistic: s.name.clone(),
                p2_5: s.p2_5?,
                median: s.median?,
                p97_5: s.p97_5?,
                missing: s.missing,
            })
        })
        .collect();
    Ok(BootstrapSection {
        replicates: options.bootstrap_replicates,
        rows,
        fraction_significant: report
            .statistic("rao_scott_p_adj")
            .and_then(|s| s.significant_fraction)
            .unwrap_or(0.0),
        stratified: options.stratified_bootstrap,
        design_effect_frozen: options.freeze_design_effect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use approx::assert_abs_diff_eq;

    fn quick_options() -> AnalysisOptions {
        AnalysisOptions {
            permutation_replicates: 199,
            bootstrap_replicates: 100,
            draws: 2_000,
            ..AnalysisOptions::default()
        }
    }

    #[test]
    fn reference_log_reproduces_headline_statistics() {
        let records = reference::synthetic_reference_log();
        let report = analyze_records(&records, &quick_options());

        let ts = report.tone_spice.get().expect("tone_spice computed");
        assert_abs_diff_eq!(ts.chi2, 206.74, epsilon = 0.02);
        assert_eq!(ts.df, 2);
        assert_abs_diff_eq!(ts.cramers_v, 0.663, epsilon = 0.001);
        assert_eq!(ts.n, 470);
        assert_eq!(ts.excluded_noncompliant, 10);

        let glm = report.glm.get().expect("glm computed");
        let coef = |name: &str| {
            glm.coefficients
                .iter()
                .find(|c| c.name == name)
                .unwrap_or_else(|| panic!("missing {name}"))
        };
        assert_abs_diff_eq!(coef("group=unclear").beta, -3.242, epsilon = 0.01);
        assert_abs_diff_eq!(coef("group=abusive").beta, -5.183, epsilon = 0.01);

        let wilson = report.model_tone_wilson.get().expect("wilson computed");
        assert_eq!(wilson.len(), 12);
        for expected in &reference::WILSON_MODEL_TONE {
            let row = wilson
                .iter()
                .find(|r| {
                    r.model.as_deref() == Some(expected.model) && r.tone == expected.tone
                })
                .expect("cell present");
            assert_eq!((row.successes, row.trials), (expected.successes, expected.trials));
            assert_abs_diff_eq!(row.ci.0, expected.ci.0, epsilon = 0.001);
            assert_abs_diff_eq!(row.ci.1, expected.ci.1, epsilon = 0.001);
        }

        let recognition = report.recognition.get().expect("recognition computed");
        assert_eq!(recognition.rows[0].spice_no, 109);
        assert_eq!(recognition.rows[0].spice_yes, 22);
        assert_eq!(recognition.rows[1].spice_no, 17);
        assert_eq!(recognition.rows[1].spice_yes, 4);
        let subset = recognition.subset_glm.as_ref().expect("subset glm");
        assert_abs_diff_eq!(subset.beta, -0.1534, epsilon = 0.01);

        let perm = report.permutation.get().expect("permutation computed");
        assert_abs_diff_eq!(perm.p, 1.0 / 200.0, epsilon = 1e-12);

        let bayes = report.bayes.get().expect("bayes computed");
        assert!(bayes.tone_ordering_probability >= 0.999);
    }

    #[test]
    fn single_tone_log_skips_tone_sections_with_reason() {
        let records: Vec<_> = reference::synthetic_reference_log()
            .into_iter()
            .filter(|r| r.tone == Tone::Friendly)
            .collect();
        let report = analyze_records(&records, &quick_options());
        let reason = report.tone_spice.skipped.as_deref().expect("skipped");
        assert!(reason.contains("fewer than 2 tones"), "{reason}");
        assert!(report.glm.value.is_none());
        // Descriptive sections still compute.
        assert!(report.tone_wilson.value.is_some());
    }

    #[test]
    fn condition_tone_table_matches_reference_cells() {
        let records = reference::synthetic_reference_log();
        let report = analyze_records(&records, &quick_options());
        let rows = report.condition_tone.get().expect("computed");
        for expected in &reference::CONDITION_TONE_SPICE {
            let row = rows
                .iter()
                .find(|r| r.condition == expected.condition_label && r.tone == expected.tone)
                .expect("cell present");
            assert_eq!(row.successes, expected.successes);
            assert_eq!(row.trials, expected.trials);
        }
    }

    #[test]
    fn bayes_report_matches_published_contrast_shape() {
        let records = reference::synthetic_reference_log();
        let report = analyze_records(
            &records,
            &AnalysisOptions {
                permutation_replicates: 49,
                bootstrap_replicates: 20,
                draws: 10_000,
                ..AnalysisOptions::default()
            },
        );
        let bayes = report.bayes.get().expect("bayes computed");

        // Within-abusive preamble contrast reproduces the published 0.9994.
        let b_contrast = bayes
            .spice_by_tone_condition
            .contrasts
            .iter()
            .find(|c| c.label == "abusive:1b > abusive:1a")
            .expect("contrast present");
        assert_abs_diff_eq!(b_contrast.pr_b_gt_a, 0.9994, epsilon = 0.005);

        // Overall recognition contrast reproduces the published 0.6674.
        let g_contrast = bayes
            .abusive_recognition
            .contrasts
            .iter()
            .find(|c| c.label == "overall:missed > overall:recognized")
            .expect("contrast present");
        assert_abs_diff_eq!(g_contrast.pr_b_gt_a, 0.6674, epsilon = 0.02);

        // llama3.1:8b recognized every abusive interaction, so its missed
        // split is empty and must surface as a prior-only cell.
        let llama_missed = bayes
            .abusive_recognition
            .cells
            .iter()
            .find(|c| c.label == "llama3.1:8b:missed")
            .expect("cell present");
        assert!(llama_missed.prior_only);
        assert_eq!((llama_missed.successes, llama_missed.trials), (0, 0));
    }

    #[test]
    fn sign_tests_report_both_contrasts_with_holm() {
        let records = reference::synthetic_reference_log();
        let report = analyze_records(&records, &quick_options());
        let sign = report.sign_tests.get().expect("computed");
        assert_eq!(sign.len(), 2);
        for contrast in sign {
            assert!(contrast.p_holm >= contrast.p);
            assert_eq!(contrast.pairs, 10);
        }
    }
}
