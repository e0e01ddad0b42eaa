//! Recompute every statistic derivable from the published aggregates and
//! compare against the published values at pinned tolerances.
//!
//! Hermetic: no network, no clock, fixed seeds. Statistics that need the
//! original per-trial data (ICC point value, permutation p, LOIO and
//! bootstrap percentiles) are exercised on labeled synthetic fixtures
//! instead, checking the properties the publication reports for them.

use serde::Serialize;

use crate::corpus::Tone;
use crate::error::StatsError;
use crate::numerics::RngStream;
use crate::reference::{
    tone_spice_table, PublishedCell, ABUSE_MODEL_TONE, ADEQUACY_MODEL_TONE, CLUSTERS,
    KEY_CONDITION_CONTRASTS, MISSED_ROW, PUBLISHED_ICC, RECOGNITION_OVERALL_PR, RECOGNIZED_ROW,
    SPICE_MODEL_TONE, SPICE_TONE_POSTERIORS, TONE_CONTRASTS, UNCLEAR_PER_MODEL_CONTRASTS,
    WILSON_MODEL_TONE,
};
use crate::stats::bayes::{contrast, ordering_probability, PosteriorCell};
use crate::stats::freq::{
    chi_square, cluster_permutation_test, cramers_v, estimate_icc, paired_sign_test, rao_scott,
    wilson_interval, PermutationStatistic,
};
use crate::stats::glm::{cluster_robust_cov, fit_logit, odds_ratios, CovCorrection, DesignMatrix, GlmFit};
use crate::stats::resample::{cluster_bootstrap, ResampleStatistic};
use crate::stats::ClusteredBinaryDataset;
use crate::synthetic::{generate_clustered, paper_shaped_groups};

/// How a computed value is compared against its published expectation.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum Tolerance {
    Abs(f64),
    Rel(f64),
    AtLeast,
    AtMost,
    Exact,
}

impl Tolerance {
    fn check(&self, expected: f64, computed: f64) -> bool {
        match *self {
            Tolerance::Abs(tol) => (computed - expected).abs() <= tol,
            Tolerance::Rel(tol) => {
                expected != 0.0 && ((computed - expected) / expected).abs() <= tol
            }
            Tolerance::AtLeast => computed >= expected,
            Tolerance::AtMost => computed <= expected,
            Tolerance::Exact => computed == expected,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Tolerance::Abs(tol) => format!("±{tol}"),
            Tolerance::Rel(tol) => format!("±{}% rel", tol * 100.0),
            Tolerance::AtLeast => ">=".into(),
            Tolerance::AtMost => "<=".into(),
            Tolerance::Exact => "exact".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct ReproduceOptions {
    pub seed: u64,
    pub draws: u32,
    pub permutation_replicates: u32,
    pub bootstrap_replicates: u32,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            draws: 10_000,
            permutation_replicates: 1999,
            bootstrap_replicates: 1000,
        }
    }
}

struct Suite {
    results: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, id: impl Into<String>, expected: f64, computed: f64, tolerance: Tolerance) {
        let id = id.into();
        self.results.push(CheckResult {
            pass: tolerance.check(expected, computed),
            id,
            expected,
            computed,
            tolerance,
        });
    }
}

fn tone_key(tone: Tone) -> &'static str {
    tone.as_str()
}

fn model_key(model: &str) -> String {
    model.replace([':', '.'], "_")
}

/// Tolerance for a Monte-Carlo probability against a published 10k-draw
/// estimate: tight at the boundary, looser mid-range.
fn mc_pr_tolerance(expected: f64) -> Tolerance {
    if !(0.01..=0.99).contains(&expected) {
        Tolerance::Abs(0.005)
    } else if !(0.1..=0.9).contains(&expected) {
        Tolerance::Abs(0.01)
    } else {
        Tolerance::Abs(0.02)
    }
}

/// Everything `run_checks` will compute, without computing it.
pub fn check_ids() -> Vec<String> {
    let mut ids: Vec<String> = Vec::new();
    ids.extend(
        ["chi2.statistic", "chi2.df", "chi2.p", "chi2.cramers_v"].map(String::from),
    );
    ids.extend(
        [
            "rao_scott.design_effect",
            "rao_scott.chi2_adjusted",
            "rao_scott.p_adjusted",
        ]
        .map(String::from),
    );
    ids.extend(
        [
            "glm.intercept",
            "glm.beta_unclear",
            "glm.beta_abusive",
            "glm.or_unclear",
            "glm.or_abusive",
        ]
        .map(String::from),
    );
    for cell in &WILSON_MODEL_TONE {
        let base = format!("wilson.{}.{}", model_key(cell.model), tone_key(cell.tone));
        ids.push(format!("{base}.prop"));
        ids.push(format!("{base}.lo"));
        ids.push(format!("{base}.hi"));
    }
    for (tone, ..) in &SPICE_TONE_POSTERIORS {
        let base = format!("bayes_a.{}", tone_key(*tone));
        ids.push(format!("{base}.mean"));
        ids.push(format!("{base}.lo"));
        ids.push(format!("{base}.hi"));
    }
    for (section, cells) in [
        ("bayes_d", &SPICE_MODEL_TONE),
        ("bayes_e", &ABUSE_MODEL_TONE),
        ("bayes_f", &ADEQUACY_MODEL_TONE),
    ] {
        for cell in cells.iter() {
            let base = format!("{section}.{}.{}", model_key(cell.model), tone_key(cell.tone));
            ids.push(format!("{base}.mean"));
            ids.push(format!("{base}.lo"));
            ids.push(format!("{base}.hi"));
        }
    }
    for c in &TONE_CONTRASTS {
        let base = format!("contrast.{}_gt_{}", tone_key(c.high), tone_key(c.low));
        ids.push(format!("{base}.pr"));
        ids.push(format!("{base}.delta_lo"));
        ids.push(format!("{base}.delta_hi"));
        ids.push(format!("{base}.or_lo"));
        ids.push(format!("{base}.or_hi"));
    }
    ids.push("ordering.friendly_unclear_abusive".into());
    for (tone, label, _) in &KEY_CONDITION_CONTRASTS {
        ids.push(format!(
            "key_contrast.{}.{}.pr",
            tone_key(*tone),
            label.replace('>', "_gt_")
        ));
    }
    for (model, ..) in &UNCLEAR_PER_MODEL_CONTRASTS {
        ids.push(format!("unclear_model.{}.pr", model_key(model)));
    }
    ids.push("recognition.overall.pr".into());
    ids.extend(
        [
            "table6.recognized.spice_no",
            "table6.recognized.spice_yes",
            "table6.missed.spice_no",
            "table6.missed.spice_yes",
            "table6.glm_beta",
        ]
        .map(String::from),
    );
    ids.extend(["sign.10_0.p", "sign.2_1_7.p"].map(String::from));
    ids.extend(
        [
            "synthetic.permutation.p",
            "synthetic.bootstrap.significant_fraction",
            "synthetic.glm.p_unclear",
            "synthetic.glm.p_abusive",
        ]
        .map(String::from),
    );
    ids
}

/// Run the whole suite.
pub fn run_checks(options: &ReproduceOptions) -> Result<Vec<CheckResult>, StatsError> {
    let mut suite = Suite { results: Vec::new() };

    // χ² battery over the published counts.
    let table = tone_spice_table();
    let test = chi_square(&table)?;
    suite.push("chi2.statistic", 206.74, test.statistic, Tolerance::Abs(0.02));
    suite.push("chi2.df", 2.0, test.df as f64, Tolerance::Exact);
    suite.push("chi2.p", 1.28e-45, test.p, Tolerance::Rel(0.02));
    suite.push("chi2.cramers_v", 0.663, cramers_v(&table)?, Tolerance::Abs(0.001));

    // Rao–Scott from the published ICC and mean cluster size.
    let mean_cluster_size = table.total() as f64 / CLUSTERS as f64;
    let design_effect = 1.0 + (mean_cluster_size - 1.0) * PUBLISHED_ICC;
    suite.push("rao_scott.design_effect", 8.555, design_effect, Tolerance::Abs(0.01));
    let (chi2_adjusted, p_adjusted) = rao_scott(test.statistic, test.df, design_effect)?;
    suite.push("rao_scott.chi2_adjusted", 24.17, chi2_adjusted, Tolerance::Abs(0.05));
    suite.push("rao_scott.p_adjusted", 5.65e-6, p_adjusted, Tolerance::Rel(0.03));

    // Saturated tone logit over the expanded counts.
    let expanded = expanded_tone_dataset();
    let design = DesignMatrix::with_group_indicators(&expanded, "friendly")?;
    let fit = fit_logit(&design)?;
    let coef = |name: &str| -> f64 {
        fit.col_names
            .iter()
            .position(|c| c == name)
            .map(|j| fit.coefficients[j])
            .expect("column present")
    };
    suite.push("glm.intercept", 3.664, coef("intercept"), Tolerance::Abs(0.01));
    suite.push("glm.beta_unclear", -3.24, coef("group=unclear"), Tolerance::Abs(0.01));
    suite.push("glm.beta_abusive", -5.18, coef("group=abusive"), Tolerance::Abs(0.01));
    let ors = odds_ratios(&fit, &fit.model_covariance)?;
    let or_of = |name: &str| -> f64 {
        ors.iter()
            .find(|o| o.name == name)
            .map(|o| o.odds_ratio)
            .expect("column present")
    };
    suite.push("glm.or_unclear", 0.039, or_of("group=unclear"), Tolerance::Rel(0.02));
    suite.push("glm.or_abusive", 0.0056, or_of("group=abusive"), Tolerance::Rel(0.02));

    // Wilson intervals for the 12 published cells.
    for cell in &WILSON_MODEL_TONE {
        let base = format!("wilson.{}.{}", model_key(cell.model), tone_key(cell.tone));
        let (lo, hi) = wilson_interval(cell.successes, cell.trials, 0.95)?;
        let prop = cell.successes as f64 / cell.trials as f64;
        suite.push(format!("{base}.prop"), cell.proportion, prop, Tolerance::Abs(0.001));
        suite.push(format!("{base}.lo"), cell.ci.0, lo, Tolerance::Abs(0.001));
        suite.push(format!("{base}.hi"), cell.ci.1, hi, Tolerance::Abs(0.001));
    }

    // Posterior cells: tone-level and the three model × tone tables.
    for &(tone, k, n, mean, cri) in &SPICE_TONE_POSTERIORS {
        let cell = PosteriorCell::new(tone.as_str(), k, n)?;
        let base = format!("bayes_a.{}", tone_key(tone));
        suite.push(format!("{base}.mean"), mean, cell.mean, Tolerance::Abs(0.001));
        suite.push(format!("{base}.lo"), cri.0, cell.cri_low, Tolerance::Abs(0.002));
        suite.push(format!("{base}.hi"), cri.1, cell.cri_high, Tolerance::Abs(0.002));
    }
    let mut posterior_table = |section: &str, cells: &[PublishedCell]| -> Result<(), StatsError> {
        for cell in cells {
            let posterior = PosteriorCell::new(cell.model, cell.successes, cell.trials)?;
            let base = format!("{section}.{}.{}", model_key(cell.model), tone_key(cell.tone));
            suite.push(format!("{base}.mean"), cell.mean, posterior.mean, Tolerance::Abs(0.001));
            suite.push(format!("{base}.lo"), cell.cri.0, posterior.cri_low, Tolerance::Abs(0.002));
            suite.push(format!("{base}.hi"), cell.cri.1, posterior.cri_high, Tolerance::Abs(0.002));
        }
        Ok(())
    };
    posterior_table("bayes_d", &SPICE_MODEL_TONE)?;
    posterior_table("bayes_e", &ABUSE_MODEL_TONE)?;
    posterior_table("bayes_f", &ADEQUACY_MODEL_TONE)?;

    // Pairwise tone contrasts by posterior simulation, seed fixed.
    let tone_posterior = |tone: Tone| -> Result<PosteriorCell, StatsError> {
        let row = SPICE_TONE_POSTERIORS
            .iter()
            .find(|(t, ..)| *t == tone)
            .expect("tone present");
        PosteriorCell::new(tone.as_str(), row.1, row.2)
    };
    let mut stream_id = 100u64;
    for c in &TONE_CONTRASTS {
        stream_id += 1;
        let low = tone_posterior(c.low)?;
        let high = tone_posterior(c.high)?;
        let mut stream = RngStream::new(options.seed, stream_id);
        let result = contrast(&low, &high, options.draws, &mut stream)?;
        let base = format!("contrast.{}_gt_{}", tone_key(c.high), tone_key(c.low));
        suite.push(format!("{base}.pr"), c.pr, result.pr_b_gt_a, Tolerance::Abs(0.005));
        suite.push(format!("{base}.delta_lo"), c.delta_cri.0, result.delta_cri.0, Tolerance::Abs(0.01));
        suite.push(format!("{base}.delta_hi"), c.delta_cri.1, result.delta_cri.1, Tolerance::Abs(0.01));
        suite.push(format!("{base}.or_lo"), c.or_cri.0, result.or_cri.0, Tolerance::Rel(0.10));
        suite.push(format!("{base}.or_hi"), c.or_cri.1, result.or_cri.1, Tolerance::Rel(0.10));
    }
    let friendly = tone_posterior(Tone::Friendly)?;
    let unclear = tone_posterior(Tone::Unclear)?;
    let abusive = tone_posterior(Tone::Abusive)?;
    let ordering = ordering_probability(
        &[&friendly, &unclear, &abusive],
        options.draws,
        &mut RngStream::new(options.seed, 150),
    )?;
    suite.push("ordering.friendly_unclear_abusive", 0.9999, ordering, Tolerance::AtLeast);

    // Within-tone preamble contrasts from the condition × tone counts.
    let condition_cell = |tone: Tone, label: &str| -> Result<PosteriorCell, StatsError> {
        let cell = crate::reference::CONDITION_TONE_SPICE
            .iter()
            .find(|c| c.tone == tone && c.condition_label == label)
            .expect("cell present");
        PosteriorCell::new(format!("{}:{label}", tone.as_str()), cell.successes, cell.trials)
    };
    for (tone, label, expected) in &KEY_CONDITION_CONTRASTS {
        stream_id += 1;
        let (a_label, b_label) = if *label == "1b>1a" { ("1a", "1b") } else { ("2a", "2b") };
        let a = condition_cell(*tone, a_label)?;
        let b = condition_cell(*tone, b_label)?;
        let mut stream = RngStream::new(options.seed, stream_id);
        let result = contrast(&a, &b, options.draws, &mut stream)?;
        suite.push(
            format!("key_contrast.{}.{}.pr", tone_key(*tone), label.replace('>', "_gt_")),
            *expected,
            result.pr_b_gt_a,
            mc_pr_tolerance(*expected),
        );
    }

    // Unclear tone, per-model 1b vs 1a with the published small cells.
    for (model, cell_1a, cell_1b, expected) in &UNCLEAR_PER_MODEL_CONTRASTS {
        stream_id += 1;
        let a = PosteriorCell::new(format!("{model}:1a"), cell_1a.0, cell_1a.1)?;
        let b = PosteriorCell::new(format!("{model}:1b"), cell_1b.0, cell_1b.1)?;
        let mut stream = RngStream::new(options.seed, stream_id);
        let result = contrast(&a, &b, options.draws, &mut stream)?;
        suite.push(
            format!("unclear_model.{}.pr", model_key(model)),
            *expected,
            result.pr_b_gt_a,
            mc_pr_tolerance(*expected),
        );
    }

    // Recognition quadrant: counts are transcriptions (identity checks on the
    // fixture), the contrast and the subset fit are computed.
    let recognized = PosteriorCell::new("recognized", RECOGNIZED_ROW.1, RECOGNIZED_ROW.0 + RECOGNIZED_ROW.1)?;
    let missed = PosteriorCell::new("missed", MISSED_ROW.1, MISSED_ROW.0 + MISSED_ROW.1)?;
    let mut stream = RngStream::new(options.seed, 175);
    let g = contrast(&recognized, &missed, options.draws, &mut stream)?;
    suite.push("recognition.overall.pr", RECOGNITION_OVERALL_PR, g.pr_b_gt_a, Tolerance::Abs(0.02));
    suite.push("table6.recognized.spice_no", 109.0, RECOGNIZED_ROW.0 as f64, Tolerance::Exact);
    suite.push("table6.recognized.spice_yes", 22.0, RECOGNIZED_ROW.1 as f64, Tolerance::Exact);
    suite.push("table6.missed.spice_no", 17.0, MISSED_ROW.0 as f64, Tolerance::Exact);
    suite.push("table6.missed.spice_yes", 4.0, MISSED_ROW.1 as f64, Tolerance::Exact);
    // Dual route: saturated fit vs the closed-form logit difference.
    let quadrant = recognition_dataset();
    let design = DesignMatrix::new(
        vec!["intercept".into(), "classified_as_abusive".into()],
        quadrant.0,
        quadrant.1,
        quadrant.2,
    )?;
    let fit = fit_logit(&design)?;
    let closed_form = (22.0_f64 / 109.0).ln() - (4.0_f64 / 17.0).ln();
    suite.push("table6.glm_beta", closed_form, fit.coefficients[1], Tolerance::Abs(0.001));

    // Published sign tests.
    let ten_pos: Vec<(f64, f64)> = (0..10).map(|_| (0.0, 1.0)).collect();
    suite.push("sign.10_0.p", 0.00195, paired_sign_test(&ten_pos)?.p, Tolerance::Abs(1e-5));
    let mut mixed: Vec<(f64, f64)> = vec![(0.0, 1.0), (0.0, 1.0), (1.0, 0.0)];
    mixed.extend(std::iter::repeat((0.5, 0.5)).take(7));
    suite.push("sign.2_1_7.p", 1.0, paired_sign_test(&mixed)?.p, Tolerance::Abs(1e-12));

    // Synthetic-fixture properties (per-trial data is unpublished).
    let synthetic = generate_clustered(
        &paper_shaped_groups(),
        0.5,
        &mut RngStream::new(options.seed, 944),
    )?;
    let (_, p_perm) = cluster_permutation_test(
        &synthetic,
        PermutationStatistic::ChiSquare,
        options.permutation_replicates,
        &RngStream::new(options.seed.wrapping_add(1), 0),
    )?;
    suite.push(
        "synthetic.permutation.p",
        1.0 / (1.0 + options.permutation_replicates as f64),
        p_perm,
        Tolerance::Abs(1e-12),
    );
    let statistics = vec![ResampleStatistic::new("p_adj", |d: &ClusteredBinaryDataset| {
        let table = d.to_contingency().ok()?;
        let test = chi_square(&table).ok()?;
        let deff = estimate_icc(d).ok()?.design_effect.max(1.0);
        rao_scott(test.statistic, test.df, deff).ok().map(|(_, p)| p)
    })
    .with_significance(0.05)];
    let boot = cluster_bootstrap(
        &synthetic,
        &statistics,
        options.bootstrap_replicates,
        &RngStream::new(options.seed.wrapping_add(2), 0),
    )?;
    suite.push(
        "synthetic.bootstrap.significant_fraction",
        1.0,
        boot.statistic("p_adj").and_then(|s| s.significant_fraction).unwrap_or(0.0),
        Tolerance::Exact,
    );
    let design = DesignMatrix::with_group_indicators(&synthetic, "friendly")?;
    let fit = fit_logit(&design)?;
    let robust = cluster_robust_cov(&fit, &design, CovCorrection::Cr1)?;
    let se = GlmFit::standard_errors(&robust);
    for (name, id) in [("group=unclear", "synthetic.glm.p_unclear"), ("group=abusive", "synthetic.glm.p_abusive")] {
        let j = fit.col_names.iter().position(|c| c == name).expect("column");
        let p = GlmFit::wald_p(fit.coefficients[j], se[j])?;
        suite.push(id, 0.001, p, Tolerance::AtMost);
    }

    Ok(suite.results)
}

/// Expand the tone × SPICE counts to 470 rows with 10 interaction clusters
/// per tone (outcomes round-robin over clusters).
fn expanded_tone_dataset() -> ClusteredBinaryDataset {
    let mut rows = Vec::new();
    for (tone, no, yes) in crate::reference::TONE_SPICE_COUNTS {
        let n = no + yes;
        for i in 0..n {
            rows.push((
                format!("{}_{}", tone.as_str(), i % 10),
                tone.as_str().to_string(),
                i < yes,
            ));
        }
    }
    ClusteredBinaryDataset::from_rows(rows).expect("consistent rows")
}

/// Expand the recognition 2×2 into rows with interaction clusters.
fn recognition_dataset() -> (Vec<Vec<f64>>, Vec<bool>, Vec<String>) {
    let mut rows = Vec::new();
    let mut response = Vec::new();
    let mut clusters = Vec::new();
    for (classified, (no, yes)) in [(1.0, RECOGNIZED_ROW), (0.0, MISSED_ROW)] {
        for i in 0..(no + yes) {
            rows.push(vec![1.0, classified]);
            response.push(i >= no);
            clusters.push(format!("a_{}", i % 10));
        }
    }
    (rows, response, clusters)
}

/// Aligned text table with one line per check plus a verdict.
pub fn render_text(results: &[CheckResult]) -> String {
    let mut out = String::new();
    let width = results.iter().map(|r| r.id.len()).max().unwrap_or(8).max(8);
    out.push_str(&format!(
        "{:<width$}  {:>14}  {:>14}  {:>10}  verdict\n",
        "check", "expected", "computed", "tolerance",
    ));
    for r in results {
        out.push_str(&format!(
            "{:<width$}  {:>14}  {:>14}  {:>10}  {}\n",
            r.id,
            format_value(r.expected),
            format_value(r.computed),
            r.tolerance.describe(),
            if r.pass { "PASS" } else { "FAIL" },
        ));
    }
    let passed = results.iter().filter(|r| r.pass).count();
    out.push_str(&format!("\n{passed}/{} checks passed\n", results.len()));
    out
}

fn format_value(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 0.001 && v.abs() < 100_000.0 {
        let s = format!("{v:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.4e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_match_run_checks() {
        let ids = check_ids();
        let results = run_checks(&ReproduceOptions {
            draws: 500,
            permutation_replicates: 99,
            bootstrap_replicates: 50,
            ..ReproduceOptions::default()
        })
        .unwrap();
        let computed: Vec<String> = results.iter().map(|r| r.id.clone()).collect();
        assert_eq!(ids, computed);
    }

    #[test]
    fn closed_form_checks_pass_regardless_of_seed() {
        // Non-simulation checks must pass under any seed.
        let results = run_checks(&ReproduceOptions {
            seed: 12345,
            draws: 200,
            permutation_replicates: 99,
            bootstrap_replicates: 20,
            ..ReproduceOptions::default()
        })
        .unwrap();
        for r in results.iter().filter(|r| {
            r.id.starts_with("chi2.")
                || r.id.starts_with("rao_scott.")
                || r.id.starts_with("glm.")
                || r.id.starts_with("wilson.")
                || r.id.starts_with("bayes_")
                || r.id.starts_with("table6.")
                || r.id.starts_with("sign.")
        }) {
            assert!(r.pass, "{} failed: expected {} got {}", r.id, r.expected, r.computed);
        }
    }

    #[test]
    fn tampered_counts_fail_the_chi2_check() {
        // One count nudged by one (128 -> 129) must push the statistic
        // outside the pinned tolerance.
        let tampered = crate::stats::ContingencyTable::new(
            vec!["abusive".into(), "unclear".into(), "friendly".into()],
            vec!["NO".into(), "YES".into()],
            vec![vec![129, 28], vec![61, 93], vec![4, 156]],
        )
        .unwrap();
        let statistic = chi_square(&tampered).unwrap().statistic;
        assert!(!Tolerance::Abs(0.02).check(206.74, statistic), "statistic {statistic}");
    }

    #[test]
    fn render_text_has_one_line_per_check() {
        let results = vec![CheckResult {
            id: "demo".into(),
            expected: 1.0,
            computed: 1.0,
            tolerance: Tolerance::Exact,
            pass: true,
        }];
        let text = render_text(&results);
        assert!(text.contains("demo"));
        assert!(text.contains("PASS"));
        assert!(text.contains("1/1 checks passed"));
    }
}
