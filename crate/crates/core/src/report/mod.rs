//! File writers for analysis output: CSV for machines, Markdown for reading,
//! JSON for round-tripping, SVG for figures. No arithmetic happens here.

pub mod svg;

use std::io;
use std::path::{Path, PathBuf};

use crate::analysis::{AnalysisReport, SectionResult};

/// Fixed-precision float so repeated runs with the same seed are
/// byte-identical.
pub(crate) fn fmt(v: f64) -> String {
    if v.is_nan() {
        return "NA".into();
    }
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.6e}")
    } else {
        format!("{v:.6}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_csv(
    path: &Path,
    header: &[&str],
    rows: Vec<Vec<String>>,
) -> io::Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let encoded: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&encoded.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)
}

fn section_status<T>(section: &SectionResult<T>) -> String {
    match &section.skipped {
        Some(reason) => format!("skipped: {reason}"),
        None => "computed".into(),
    }
}

/// Write every table; returns the paths written.
pub fn write_analysis_outputs(
    report: &AnalysisReport,
    out_dir: &Path,
) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let emit = |name: &str, header: &[&str], rows: Vec<Vec<String>>| -> io::Result<PathBuf> {
        let path = out_dir.join(name);
        write_csv(&path, header, rows)?;
        Ok(path)
    };

    // Section status manifest: every section appears, computed or skipped.
    let status_rows = vec![
        vec!["tone_spice".into(), section_status(&report.tone_spice)],
        vec!["clustering".into(), section_status(&report.clustering)],
        vec!["permutation".into(), section_status(&report.permutation)],
        vec!["glm".into(), section_status(&report.glm)],
        vec!["tone_wilson".into(), section_status(&report.tone_wilson)],
        vec!["model_tone_wilson".into(), section_status(&report.model_tone_wilson)],
        vec!["condition_tone".into(), section_status(&report.condition_tone)],
        vec!["recognition".into(), section_status(&report.recognition)],
        vec!["sign_tests".into(), section_status(&report.sign_tests)],
        vec!["loio".into(), section_status(&report.loio)],
        vec!["bootstrap".into(), section_status(&report.bootstrap)],
        vec!["bayes".into(), section_status(&report.bayes)],
    ];
    written.push(emit("sections.csv", &["section", "status"], status_rows)?);

    written.push(emit(
        "compliance.csv",
        &["question", "compliant", "noncompliant", "total"],
        report
            .compliance
            .iter()
            .map(|c| {
                vec![
                    c.question.to_string(),
                    c.compliant.to_string(),
                    c.noncompliant.to_string(),
                    c.total.to_string(),
                ]
            })
            .collect(),
    )?);

    if let Some(ts) = report.tone_spice.get() {
        written.push(emit(
            "tone_spice_counts.csv",
            &["tone", "no", "yes"],
            ts.rows
                .iter()
                .map(|r| vec![r.tone.to_string(), r.no.to_string(), r.yes.to_string()])
                .collect(),
        )?);
        written.push(emit(
            "chi_square.csv",
            &["n", "chi2", "df", "p", "cramers_v", "excluded_noncompliant"],
            vec![vec![
                ts.n.to_string(),
                fmt(ts.chi2),
                ts.df.to_string(),
                fmt(ts.p),
                fmt(ts.cramers_v),
                ts.excluded_noncompliant.to_string(),
            ]],
        )?);
    }

    if let Some(cl) = report.clustering.get() {
        written.push(emit(
            "clustering.csv",
            &["clusters", "icc", "mean_cluster_size", "design_effect", "chi2_adjusted", "p_adjusted", "estimator"],
            vec![vec![
                cl.clusters.to_string(),
                fmt(cl.icc),
                fmt(cl.mean_cluster_size),
                fmt(cl.design_effect),
                fmt(cl.chi2_adjusted),
                fmt(cl.p_adjusted),
                cl.estimator.clone(),
            ]],
        )?);
    }

    if let Some(perm) = report.permutation.get() {
        written.push(emit(
            "permutation.csv",
            &["statistic", "observed", "p", "replicates", "seed"],
            vec![vec![
                perm.statistic.clone(),
                fmt(perm.observed),
                fmt(perm.p),
                perm.replicates.to_string(),
                perm.seed.to_string(),
            ]],
        )?);
    }

    if let Some(glm) = report.glm.get() {
        written.push(emit(
            "glm.csv",
            &["coefficient", "beta", "model_se", "robust_se", "p_robust", "odds_ratio", "or_lo", "or_hi"],
            glm.coefficients
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        fmt(c.beta),
                        fmt(c.model_se),
                        fmt(c.robust_se),
                        fmt(c.p_robust),
                        fmt(c.odds_ratio),
                        fmt(c.or_ci.0),
                        fmt(c.or_ci.1),
                    ]
                })
                .collect(),
        )?);
    }

    let wilson_rows = |rows: &[crate::analysis::WilsonRow]| -> Vec<Vec<String>> {
        rows.iter()
            .map(|r| {
                vec![
                    r.model.clone().unwrap_or_else(|| "overall".into()),
                    r.tone.to_string(),
                    r.successes.to_string(),
                    r.trials.to_string(),
                    fmt(r.proportion),
                    fmt(r.ci.0),
                    fmt(r.ci.1),
                ]
            })
            .collect()
    };
    if let Some(rows) = report.tone_wilson.get() {
        written.push(emit(
            "tone_wilson.csv",
            &["model", "tone", "k", "n", "proportion", "wilson_lo", "wilson_hi"],
            wilson_rows(rows),
        )?);
    }
    if let Some(rows) = report.model_tone_wilson.get() {
        written.push(emit(
            "model_tone_wilson.csv",
            &["model", "tone", "k", "n", "proportion", "wilson_lo", "wilson_hi"],
            wilson_rows(rows),
        )?);
    }

    if let Some(rows) = report.condition_tone.get() {
        written.push(emit(
            "condition_tone.csv",
            &["condition", "tone", "k", "n", "mean"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.condition.clone(),
                        r.tone.to_string(),
                        r.successes.to_string(),
                        r.trials.to_string(),
                        fmt(r.mean),
                    ]
                })
                .collect(),
        )?);
    }

    if let Some(rec) = report.recognition.get() {
        written.push(emit(
            "abusive_recognition.csv",
            &["group", "spice_no", "spice_yes", "row_pct_no", "row_pct_yes"],
            rec.rows
                .iter()
                .map(|r| {
                    vec![
                        r.label.clone(),
                        r.spice_no.to_string(),
                        r.spice_yes.to_string(),
                        fmt(r.row_pct_no),
                        fmt(r.row_pct_yes),
                    ]
                })
                .collect(),
        )?);
        if let Some(glm) = &rec.subset_glm {
            written.push(emit(
                "abusive_recognition_glm.csv",
                &["beta", "robust_se", "p_robust", "note"],
                vec![vec![
                    fmt(glm.beta),
                    glm.robust_se.map(fmt).unwrap_or_else(|| "NA".into()),
                    glm.p_robust.map(fmt).unwrap_or_else(|| "NA".into()),
                    glm.note.clone(),
                ]],
            )?);
        }
    }

    if let Some(sign) = report.sign_tests.get() {
        written.push(emit(
            "sign_tests.csv",
            &["contrast", "pairs", "n_pos", "n_neg", "n_ties", "p", "p_holm", "paired_mean_delta", "cell_mean_delta"],
            sign.iter()
                .map(|s| {
                    vec![
                        s.label.clone(),
                        s.pairs.to_string(),
                        s.n_pos.to_string(),
                        s.n_neg.to_string(),
                        s.n_ties.to_string(),
                        fmt(s.p),
                        fmt(s.p_holm),
                        fmt(s.paired_mean_delta),
                        fmt(s.cell_mean_delta),
                    ]
                })
                .collect(),
        )?);
    }

    if let Some(loio) = report.loio.get() {
        let mut rows: Vec<Vec<String>> = loio
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.tone.to_string(),
                    fmt(r.all_data),
                    fmt(r.min),
                    fmt(r.max),
                ]
            })
            .collect();
        rows.push(vec![
            "fraction_p_adj_significant".into(),
            fmt(loio.fraction_significant),
            loio.p_adjusted_max.map(fmt).unwrap_or_else(|| "NA".into()),
            String::new(),
        ]);
        written.push(emit("loio.csv", &["tone", "all_data", "loio_min", "loio_max"], rows)?);
    }

    if let Some(boot) = report.bootstrap.get() {
        let mut rows: Vec<Vec<String>> = boot
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.statistic.clone(),
                    fmt(r.p2_5),
                    fmt(r.median),
                    fmt(r.p97_5),
                    r.missing.to_string(),
                ]
            })
            .collect();
        rows.push(vec![
            "fraction_p_adj_significant".into(),
            fmt(boot.fraction_significant),
            String::new(),
            String::new(),
            String::new(),
        ]);
        written.push(emit(
            "bootstrap.csv",
            &["statistic", "p2_5", "median", "p97_5", "missing"],
            rows,
        )?);
    }

    if let Some(bayes) = report.bayes.get() {
        let mut cells = Vec::new();
        let mut contrasts = Vec::new();
        let sections = [
            &bayes.spice_by_tone,
            &bayes.spice_by_tone_condition,
            &bayes.unclear_prompt_per_model,
            &bayes.spice_by_model_tone,
            &bayes.abuse_by_model_tone,
            &bayes.adequacy_by_model_tone,
            &bayes.abusive_recognition,
        ];
        for section in sections {
            for c in &section.cells {
                cells.push(vec![
                    section.name.clone(),
                    c.label.clone(),
                    c.successes.to_string(),
                    c.trials.to_string(),
                    fmt(c.mean),
                    fmt(c.cri_low),
                    fmt(c.cri_high),
                    c.prior_only.to_string(),
                ]);
            }
            for c in &section.contrasts {
                contrasts.push(vec![
                    section.name.clone(),
                    c.label.clone(),
                    fmt(c.pr_b_gt_a),
                    fmt(c.delta_cri.0),
                    fmt(c.delta_cri.1),
                    fmt(c.or_cri.0),
                    fmt(c.or_cri.1),
                    c.draws.to_string(),
                    c.seed.to_string(),
                ]);
            }
        }
        written.push(emit(
            "bayes_cells.csv",
            &["section", "cell", "k", "n", "mean", "cri_lo", "cri_hi", "prior_only"],
            cells,
        )?);
        contrasts.push(vec![
            "spice_by_tone".into(),
            "ordering friendly>unclear>abusive".into(),
            fmt(bayes.tone_ordering_probability),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            bayes.draws.to_string(),
            bayes.seed.to_string(),
        ]);
        written.push(emit(
            "bayes_contrasts.csv",
            &["section", "contrast", "pr", "delta_lo", "delta_hi", "or_lo", "or_hi", "draws", "seed"],
            contrasts,
        )?);
    }

    let json_path = out_dir.join("report.json");
    std::fs::write(&json_path, serde_json::to_string_pretty(report)?)?;
    written.push(json_path);

    let md_path = out_dir.join("report.md");
    std::fs::write(&md_path, render_markdown(report))?;
    written.push(md_path);

    Ok(written)
}

/// Human-readable summary of the same numbers.
pub fn render_markdown(report: &AnalysisReport) -> String {
    let mut md = String::new();
    md.push_str("# Disposition audit report\n\n");
    md.push_str(&format!(
        "Provenance: {}. Seed {}, permutation B={}, bootstrap B={}, draws={}.\n\n",
        report.provenance,
        report.options.seed,
        report.options.permutation_replicates,
        report.options.bootstrap_replicates,
        report.options.draws
    ));

    md.push_str("## Compliance\n\n|question|compliant|noncompliant|total|\n|-|-|-|-|\n");
    for c in &report.compliance {
        md.push_str(&format!(
            "|{}|{}|{}|{}|\n",
            c.question, c.compliant, c.noncompliant, c.total
        ));
    }
    md.push('\n');

    let skipped_note = |md: &mut String, name: &str, reason: &str| {
        md.push_str(&format!("## {name}\n\nskipped: {reason}\n\n"));
    };

    match (&report.tone_spice.value, &report.tone_spice.skipped) {
        (Some(ts), _) => {
            md.push_str("## Tone × re-engagement counts\n\n|tone|NO|YES|\n|-|-|-|\n");
            for r in &ts.rows {
                md.push_str(&format!("|{}|{}|{}|\n", r.tone, r.no, r.yes));
            }
            md.push_str(&format!(
                "\nχ²({}) = {}, p = {}, Cramér's V = {} over N = {} compliant rows ({} noncompliant excluded).\n\n",
                ts.df,
                fmt(ts.chi2),
                fmt(ts.p),
                fmt(ts.cramers_v),
                ts.n,
                ts.excluded_noncompliant
            ));
        }
        (None, Some(reason)) => skipped_note(&mut md, "Tone × re-engagement counts", reason),
        _ => {}
    }

    match (&report.clustering.value, &report.clustering.skipped) {
        (Some(cl), _) => md.push_str(&format!(
            "## Clustering adjustment\n\n{} clusters, ICC = {}, mean cluster size = {}, design effect = {}; adjusted χ² = {}, adjusted p = {} ({}).\n\n",
            cl.clusters,
            fmt(cl.icc),
            fmt(cl.mean_cluster_size),
            fmt(cl.design_effect),
            fmt(cl.chi2_adjusted),
            fmt(cl.p_adjusted),
            cl.estimator
        )),
        (None, Some(reason)) => skipped_note(&mut md, "Clustering adjustment", reason),
        _ => {}
    }

    match (&report.permutation.value, &report.permutation.skipped) {
        (Some(p), _) => md.push_str(&format!(
            "## Cluster permutation test\n\nObserved {} = {}, p = {} over {} relabelings (seed {}).\n\n",
            p.statistic,
            fmt(p.observed),
            fmt(p.p),
            p.replicates,
            p.seed
        )),
        (None, Some(reason)) => skipped_note(&mut md, "Cluster permutation test", reason),
        _ => {}
    }

    match (&report.glm.value, &report.glm.skipped) {
        (Some(glm), _) => {
            md.push_str(&format!(
                "## Cluster-robust logit (reference = {}, {} clusters)\n\n|coefficient|β|robust SE|p|OR|OR 95% CI|\n|-|-|-|-|-|-|\n",
                glm.reference_tone, glm.clusters
            ));
            for c in &glm.coefficients {
                md.push_str(&format!(
                    "|{}|{}|{}|{}|{}|[{}, {}]|\n",
                    c.name,
                    fmt(c.beta),
                    fmt(c.robust_se),
                    fmt(c.p_robust),
                    fmt(c.odds_ratio),
                    fmt(c.or_ci.0),
                    fmt(c.or_ci.1)
                ));
            }
            if !glm.separation_warnings.is_empty() {
                md.push_str(&format!(
                    "\nSeparation warnings: {}.\n",
                    glm.separation_warnings.join(", ")
                ));
            }
            md.push('\n');
        }
        (None, Some(reason)) => skipped_note(&mut md, "Cluster-robust logit", reason),
        _ => {}
    }

    let wilson_table = |md: &mut String, title: &str, rows: &[crate::analysis::WilsonRow]| {
        md.push_str(&format!(
            "## {title}\n\n|model|tone|k|n|prop|95% CI|\n|-|-|-|-|-|-|\n"
        ));
        for r in rows {
            md.push_str(&format!(
                "|{}|{}|{}|{}|{}|[{}, {}]|\n",
                r.model.as_deref().unwrap_or("overall"),
                r.tone,
                r.successes,
                r.trials,
                fmt(r.proportion),
                fmt(r.ci.0),
                fmt(r.ci.1)
            ));
        }
        md.push('\n');
    };
    if let Some(rows) = report.tone_wilson.get() {
        wilson_table(&mut md, "Re-engagement by tone (Wilson 95%)", rows);
    }
    if let Some(rows) = report.model_tone_wilson.get() {
        wilson_table(&mut md, "Re-engagement by model × tone (Wilson 95%)", rows);
    }

    if let Some(rows) = report.condition_tone.get() {
        md.push_str("## Condition × tone means\n\n|condition|tone|k|n|mean|\n|-|-|-|-|-|\n");
        for r in rows {
            md.push_str(&format!(
                "|{}|{}|{}|{}|{}|\n",
                r.condition,
                r.tone,
                r.successes,
                r.trials,
                fmt(r.mean)
            ));
        }
        md.push('\n');
    }

    match (&report.recognition.value, &report.recognition.skipped) {
        (Some(rec), _) => {
            md.push_str("## Abusive trials: recognition × re-engagement\n\n|group|NO|YES|row % NO|row % YES|\n|-|-|-|-|-|\n");
            for r in &rec.rows {
                md.push_str(&format!(
                    "|{}|{}|{}|{}|{}|\n",
                    r.label,
                    r.spice_no,
                    r.spice_yes,
                    fmt(r.row_pct_no),
                    fmt(r.row_pct_yes)
                ));
            }
            if let Some(glm) = &rec.subset_glm {
                md.push_str(&format!(
                    "\nSupportive fit: β = {}, robust SE = {}, p = {}. {}\n",
                    fmt(glm.beta),
                    glm.robust_se.map(fmt).unwrap_or_else(|| "NA".into()),
                    glm.p_robust.map(fmt).unwrap_or_else(|| "NA".into()),
                    glm.note
                ));
            }
            md.push('\n');
        }
        (None, Some(reason)) => {
            skipped_note(&mut md, "Abusive trials: recognition × re-engagement", reason)
        }
        _ => {}
    }

    match (&report.sign_tests.value, &report.sign_tests.skipped) {
        (Some(sign), _) => {
            md.push_str("## Paired sign tests (unclear tone)\n\n|contrast|pairs|+|−|ties|p|p (Holm)|paired Δ|cell Δ|\n|-|-|-|-|-|-|-|-|-|\n");
            for s in sign {
                md.push_str(&format!(
                    "|{}|{}|{}|{}|{}|{}|{}|{}|{}|\n",
                    s.label,
                    s.pairs,
                    s.n_pos,
                    s.n_neg,
                    s.n_ties,
                    fmt(s.p),
                    fmt(s.p_holm),
                    fmt(s.paired_mean_delta),
                    fmt(s.cell_mean_delta)
                ));
            }
            md.push('\n');
        }
        (None, Some(reason)) => skipped_note(&mut md, "Paired sign tests", reason),
        _ => {}
    }

    match (&report.loio.value, &report.loio.skipped) {
        (Some(loio), _) => {
            md.push_str("## Leave-one-interaction-out\n\n|tone|all data|min|max|\n|-|-|-|-|\n");
            for r in &loio.rows {
                md.push_str(&format!(
                    "|{}|{}|{}|{}|\n",
                    r.tone,
                    fmt(r.all_data),
                    fmt(r.min),
                    fmt(r.max)
                ));
            }
            md.push_str(&format!(
                "\nAdjusted p stayed below .05 in {} of replicates (max {}).\n\n",
                fmt(loio.fraction_significant),
                loio.p_adjusted_max.map(fmt).unwrap_or_else(|| "NA".into())
            ));
        }
        (None, Some(reason)) => skipped_note(&mut md, "Leave-one-interaction-out", reason),
        _ => {}
    }

    match (&report.bootstrap.value, &report.bootstrap.skipped) {
        (Some(boot), _) => {
            md.push_str(&format!(
                "## Cluster bootstrap (B = {})\n\n|statistic|2.5%|50%|97.5%|missing|\n|-|-|-|-|-|\n",
                boot.replicates
            ));
            for r in &boot.rows {
                md.push_str(&format!(
                    "|{}|{}|{}|{}|{}|\n",
                    r.statistic,
                    fmt(r.p2_5),
                    fmt(r.median),
                    fmt(r.p97_5),
                    r.missing
                ));
            }
            md.push_str(&format!(
                "\nFraction of draws with adjusted p < .05: {}.\n\n",
                fmt(boot.fraction_significant)
            ));
        }
        (None, Some(reason)) => skipped_note(&mut md, "Cluster bootstrap", reason),
        _ => {}
    }

    match (&report.bayes.value, &report.bayes.skipped) {
        (Some(bayes), _) => {
            md.push_str("## Posterior battery (Beta-Binomial, uniform prior)\n\n");
            md.push_str(&format!(
                "Ordering Pr[friendly > unclear > abusive] = {} ({} draws, seed {}).\n\n",
                fmt(bayes.tone_ordering_probability),
                bayes.draws,
                bayes.seed
            ));
            for section in [
                &bayes.spice_by_tone,
                &bayes.spice_by_tone_condition,
                &bayes.unclear_prompt_per_model,
                &bayes.spice_by_model_tone,
                &bayes.abuse_by_model_tone,
                &bayes.adequacy_by_model_tone,
                &bayes.abusive_recognition,
            ] {
                md.push_str(&format!("### {}\n\n", section.name));
                if !section.cells.is_empty() {
                    md.push_str("|cell|k/n|mean|95% CrI|\n|-|-|-|-|\n");
                    for c in &section.cells {
                        md.push_str(&format!(
                            "|{}|{}/{}|{}|[{}, {}]|{}\n",
                            c.label,
                            c.successes,
                            c.trials,
                            fmt(c.mean),
                            fmt(c.cri_low),
                            fmt(c.cri_high),
                            if c.prior_only { " (prior only)" } else { "" }
                        ));
                    }
                    md.push('\n');
                }
                if !section.contrasts.is_empty() {
                    md.push_str("|contrast|Pr|Δ CrI|OR CrI|\n|-|-|-|-|\n");
                    for c in &section.contrasts {
                        md.push_str(&format!(
                            "|{}|{}|[{}, {}]|[{}, {}]|\n",
                            c.label,
                            fmt(c.pr_b_gt_a),
                            fmt(c.delta_cri.0),
                            fmt(c.delta_cri.1),
                            fmt(c.or_cri.0),
                            fmt(c.or_cri.1)
                        ));
                    }
                    md.push('\n');
                }
            }
        }
        (None, Some(reason)) => skipped_note(&mut md, "Posterior battery", reason),
        _ => {}
    }

    md
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze_records, AnalysisOptions};
    use crate::reference::synthetic_reference_log;

    fn small_report() -> AnalysisReport {
        let records = synthetic_reference_log();
        analyze_records(
            &records,
            &AnalysisOptions {
                permutation_replicates: 49,
                bootstrap_replicates: 20,
                draws: 500,
                ..AnalysisOptions::default()
            },
        )
    }

    #[test]
    fn outputs_are_deterministic_given_seed() {
        let report = small_report();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        write_analysis_outputs(&report, dir_a.path()).unwrap();
        write_analysis_outputs(&small_report(), dir_b.path()).unwrap();
        for entry in std::fs::read_dir(dir_a.path()).unwrap() {
            let name = entry.unwrap().file_name();
            let a = std::fs::read(dir_a.path().join(&name)).unwrap();
            let b = std::fs::read(dir_b.path().join(&name)).unwrap();
            assert_eq!(a, b, "file {name:?} differs between runs");
        }
    }

    #[test]
    fn markdown_mentions_headline_numbers() {
        let report = small_report();
        let md = render_markdown(&report);
        assert!(md.contains("206.74"), "chi2 missing");
        assert!(md.contains("## Compliance"));
        assert!(md.contains("|spice|470|10|480|"));
    }

    #[test]
    fn skipped_sections_are_marked() {
        let records: Vec<_> = synthetic_reference_log()
            .into_iter()
            .filter(|r| r.tone == crate::corpus::Tone::Friendly)
            .collect();
        let report = analyze_records(
            &records,
            &AnalysisOptions {
                permutation_replicates: 49,
                bootstrap_replicates: 20,
                draws: 500,
                ..AnalysisOptions::default()
            },
        );
        let dir = tempfile::tempdir().unwrap();
        write_analysis_outputs(&report, dir.path()).unwrap();
        let sections = std::fs::read_to_string(dir.path().join("sections.csv")).unwrap();
        assert!(sections.contains("skipped: fewer than 2 tones"));
        assert!(!dir.path().join("chi_square.csv").exists());
    }
}
