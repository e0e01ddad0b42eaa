//! End-to-end checks of the `spice` binary: exit codes, run/analyze/plot
//! round trips, and the reproduce-paper surface.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use spice_core::corpus::{build_trial_matrix, bundled_corpus, Question, QuestionTemplates};
use spice_core::runner::mock::{request_key, MockEndpoint, MockReply};
use spice_core::runner::EndpointKind;

fn spice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_corpus(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("interactions.jsonl");
    let bundled = include_str!("../../core/data/interactions.jsonl");
    std::fs::write(&path, bundled).unwrap();
    path
}

fn write_config(dir: &Path, base_url: &str, models: &[&str]) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    let model_list = models
        .iter()
        .map(|m| format!("\"{m}\""))
        .collect::<Vec<_>>()
        .join(", ");
    std::fs::write(
        &path,
        format!(
            r#"
models = [{model_list}]
parallelism = 8

[endpoint]
kind = "openai"
base_url = "{base_url}"
timeout_secs = 10

[endpoint.retry]
max_retries = 1
backoff_base_ms = 1
"#
        ),
    )
    .unwrap();
    path
}

/// Answers for every (model, rendered prompt) key: three questions per trial.
fn spawn_scripted_mock(models: &[&str]) -> MockEndpoint {
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let model_names: Vec<String> = models.iter().map(|m| m.to_string()).collect();
    let matrix = build_trial_matrix(&corpus, &model_names, &Question::ALL).unwrap();
    let mut answers: HashMap<String, String> = HashMap::new();
    for (i, spec) in matrix.iter().enumerate() {
        let interaction = corpus.get(&spec.interaction_id).unwrap();
        let rendered = spice_core::render_trial(spec, interaction, &templates).unwrap();
        let messages: Vec<(String, String)> = rendered
            .messages
            .iter()
            .map(|m| {
                (
                    match m.role {
                        spice_core::ChatRole::User => "user".to_string(),
                        spice_core::ChatRole::Assistant => "assistant".to_string(),
                    },
                    m.content.clone(),
                )
            })
            .collect();
        let answer = if i % 2 == 0 { "YES" } else { "NO" };
        answers.insert(request_key(&spec.model_name, &messages), answer.to_string());
    }
    MockEndpoint::spawn(EndpointKind::OpenAi, move |request| {
        match answers.get(&request_key(&request.model, &request.messages)) {
            Some(answer) => MockReply::Answer(answer.clone()),
            None => MockReply::Status(422),
        }
    })
}

#[test]
fn corpus_validate_reports_tone_counts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let out = spice(&["corpus", "validate", "--corpus", corpus.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("30 interactions"), "{stdout}");
    assert!(stdout.contains("friendly: 10"));
    assert!(stdout.contains("abusive: 10"));
}

#[test]
fn corpus_validate_rejects_duplicates_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let line = r#"{"id":"dup","tone":"friendly","turns":[{"role":"user","text":"hi"},{"role":"assistant","text":"hello"}]}"#;
    let path = dir.path().join("bad.jsonl");
    std::fs::write(&path, format!("{line}\n{line}\n")).unwrap();
    let out = spice(&["corpus", "validate", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("dup"), "{stderr}");
}

#[test]
fn missing_corpus_file_is_an_io_error() {
    let out = spice(&["corpus", "validate", "--corpus", "/nonexistent/corpus.jsonl"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_endpoint_url_exits_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let config = write_config(dir.path(), "not-a-url", &["m1"]);
    let out = spice(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--corpus",
        corpus.to_str().unwrap(),
        "--log",
        dir.path().join("log.jsonl").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("base_url"), "{stderr}");
}

#[test]
fn run_analyze_plot_round_trip() {
    let models = ["gemma2:9b", "gemma3:12b", "llama3.1:8b", "mistral:7b"];
    let mock = spawn_scripted_mock(&models);
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let config = write_config(dir.path(), &mock.base_url(), &models);
    let log = dir.path().join("log.jsonl");

    // Campaign over 480 trials x 3 questions.
    let out = spice(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--corpus",
        corpus.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("1440 new trials"), "{stdout}");
    assert!(stdout.contains("spice: 480/480 compliant"), "{stdout}");
    let records = spice_core::runner::read_log(&log).unwrap();
    assert_eq!(records.len(), 1440);

    // Rerun: resume reports zero new trials.
    let out = spice(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--corpus",
        corpus.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("0 new trials"));
    assert_eq!(mock.requests(), 1440);

    // Analyze with small resampling budgets.
    let report_dir = dir.path().join("report");
    let out = spice(&[
        "analyze",
        "--log",
        log.to_str().unwrap(),
        "--out",
        report_dir.to_str().unwrap(),
        "--seed",
        "42",
        "--boot-b",
        "50",
        "--perm-b",
        "99",
        "--draws",
        "500",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["report.json", "report.md", "chi_square.csv", "sections.csv"] {
        assert!(report_dir.join(file).exists(), "missing {file}");
    }

    // Determinism: a second analyze into a fresh directory is byte-identical.
    let report_dir2 = dir.path().join("report2");
    let out = spice(&[
        "analyze",
        "--log",
        log.to_str().unwrap(),
        "--out",
        report_dir2.to_str().unwrap(),
        "--seed",
        "42",
        "--boot-b",
        "50",
        "--perm-b",
        "99",
        "--draws",
        "500",
    ]);
    assert!(out.status.success());
    for entry in std::fs::read_dir(&report_dir).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(report_dir.join(&name)).unwrap();
        let b = std::fs::read(report_dir2.join(&name)).unwrap();
        assert_eq!(a, b, "{name:?} differs across identical runs");
    }

    // Figures from the written report.
    let out = spice(&["plot", "--out", report_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for figure in [
        "spice_by_tone.svg",
        "spice_by_model_tone.svg",
        "abusive_recognition.svg",
    ] {
        assert!(report_dir.join(figure).exists(), "missing {figure}");
    }
}

#[test]
fn plot_without_report_names_the_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = spice(&["plot", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("report.json"), "{stderr}");
}

#[test]
fn reproduce_paper_list_enumerates_checks() {
    let out = spice(&["reproduce-paper", "--list"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines.len() > 150, "expected many check ids, got {}", lines.len());
    assert!(lines.contains(&"chi2.statistic"));
    assert!(lines.contains(&"ordering.friendly_unclear_abusive"));
}

#[test]
fn reproduce_paper_passes_with_default_settings() {
    let out = spice(&["reproduce-paper"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{stdout}");
    assert!(!stdout.contains("FAIL"), "{stdout}");
    assert!(stdout.contains("checks passed"));
}

#[test]
fn usage_errors_exit_1() {
    let out = spice(&["analyze", "--log"]);
    assert_eq!(out.status.code(), Some(1));
    let out = spice(&["definitely-not-a-command"]);
    assert_eq!(out.status.code(), Some(1));
}
