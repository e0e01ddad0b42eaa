//! Campaign execution against the scripted endpoint: resume semantics,
//! retries, failure surfacing, and log stability.

use std::collections::HashMap;

use spice_core::corpus::{build_trial_matrix, bundled_corpus, Question, QuestionTemplates};
use spice_core::runner::mock::{request_key, MockEndpoint, MockReply};
use spice_core::runner::{
    read_log, run_campaign, CampaignOptions, DecodingConfig, EndpointConfig, EndpointKind,
    ParseMode, RetryConfig, RunConfig, TrialRecord,
};
use spice_core::{render_trial, Corpus, TrialSpec};

const MODELS: [&str; 4] = ["gemma2:9b", "gemma3:12b", "llama3.1:8b", "mistral:7b"];

fn endpoint_config(base_url: String, kind: EndpointKind) -> EndpointConfig {
    EndpointConfig {
        kind,
        base_url,
        api_key_env: None,
        timeout_secs: 10,
        send_top_k: false,
        retry: RetryConfig {
            max_retries: 3,
            backoff_base_ms: 1,
        },
    }
}

fn options() -> CampaignOptions {
    CampaignOptions {
        parallelism: 8,
        parse_mode: ParseMode::Strict,
        config_hash: "test-config".into(),
    }
}

/// Answer table keyed by the rendered request content: YES/NO alternating by
/// matrix position, with `noncompliant` picked trials answering off-format.
fn script_answers(
    matrix: &[TrialSpec],
    corpus: &Corpus,
    templates: &QuestionTemplates,
    noncompliant_every: Option<usize>,
) -> HashMap<String, String> {
    let mut answers = HashMap::new();
    for (i, spec) in matrix.iter().enumerate() {
        let interaction = corpus.get(&spec.interaction_id).unwrap();
        let rendered = render_trial(spec, interaction, templates).unwrap();
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
        let key = request_key(&spec.model_name, &messages);
        let answer = match noncompliant_every {
            Some(step) if i % step == step - 1 => "I would rather not say.".to_string(),
            _ if i % 2 == 0 => "YES".to_string(),
            _ => "NO".to_string(),
        };
        answers.insert(key, answer);
    }
    answers
}

fn lookup_endpoint(answers: HashMap<String, String>) -> MockEndpoint {
    MockEndpoint::spawn(EndpointKind::OpenAi, move |request| {
        let key = request_key(&request.model, &request.messages);
        match answers.get(&key) {
            Some(answer) => MockReply::Answer(answer.clone()),
            None => MockReply::Status(422),
        }
    })
}

#[test]
fn full_campaign_reports_published_compliance_shape() {
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let models: Vec<String> = MODELS.iter().map(|m| m.to_string()).collect();
    let matrix = build_trial_matrix(&corpus, &models, &[Question::Spice]).unwrap();
    assert_eq!(matrix.len(), 480);

    // 10 noncompliant answers out of 480.
    let answers = script_answers(&matrix, &corpus, &templates, Some(48));
    let mock = lookup_endpoint(answers);
    let endpoint = endpoint_config(mock.base_url(), EndpointKind::OpenAi);

    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("trials.jsonl");
    let summary = run_campaign(
        &matrix,
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &options(),
    )
    .unwrap();

    assert_eq!(summary.executed, 480);
    assert_eq!(summary.skipped, 0);
    assert!(summary.failed.is_empty());
    let spice = summary
        .per_question
        .iter()
        .find(|c| c.question == Question::Spice)
        .unwrap();
    assert_eq!(spice.compliant, 470);
    assert_eq!(spice.noncompliant, 10);
    assert_eq!(mock.requests(), 480);

    let records = read_log(&log_path).unwrap();
    assert_eq!(records.len(), 480);
    let ids: std::collections::HashSet<_> = records.iter().map(|r| &r.trial_id).collect();
    assert_eq!(ids.len(), 480, "no duplicate trial ids");
}

#[test]
fn campaign_resumes_without_duplicate_requests() {
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let models: Vec<String> = MODELS.iter().map(|m| m.to_string()).collect();
    let matrix = build_trial_matrix(&corpus, &models, &[Question::Spice]).unwrap();

    let answers = script_answers(&matrix, &corpus, &templates, None);
    let mock = lookup_endpoint(answers);
    let endpoint = endpoint_config(mock.base_url(), EndpointKind::OpenAi);

    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("trials.jsonl");

    // Simulate an interrupted run: only the first 100 specs complete.
    run_campaign(
        &matrix[..100],
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &options(),
    )
    .unwrap();
    assert_eq!(mock.requests(), 100);

    // Rerun over the full matrix: exactly the remaining 380 go out.
    let summary = run_campaign(
        &matrix,
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &options(),
    )
    .unwrap();
    assert_eq!(summary.executed, 380);
    assert_eq!(summary.skipped, 100);
    assert_eq!(mock.requests(), 480);

    // Rerun on the complete log: no new requests.
    let summary = run_campaign(
        &matrix,
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &options(),
    )
    .unwrap();
    assert_eq!(summary.executed, 0);
    assert_eq!(summary.skipped, 480);
    assert_eq!(mock.requests(), 480);

    let records = read_log(&log_path).unwrap();
    let ids: std::collections::HashSet<_> = records.iter().map(|r| &r.trial_id).collect();
    assert_eq!(ids.len(), records.len(), "trial ids unique in the log");
}

#[test]
fn transient_server_errors_are_retried() {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;
    let failures = Arc::new(AtomicUsize::new(0));
    let counter = Arc::clone(&failures);
    let mock = MockEndpoint::spawn(EndpointKind::OpenAi, move |_request| {
        // First two requests fail with 500, then answer.
        if counter.fetch_add(1, Ordering::SeqCst) < 2 {
            MockReply::Status(500)
        } else {
            MockReply::Answer("NO".into())
        }
    });
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let matrix = build_trial_matrix(&corpus, &["m1".to_string()], &[Question::Spice]).unwrap();
    let endpoint = endpoint_config(mock.base_url(), EndpointKind::OpenAi);

    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("trials.jsonl");
    let mut opts = options();
    opts.parallelism = 1;
    let summary = run_campaign(
        &matrix[..1],
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &opts,
    )
    .unwrap();
    assert!(summary.failed.is_empty());
    let records = read_log(&log_path).unwrap();
    assert_eq!(records[0].raw_response, "NO");
    assert_eq!(mock.requests(), 3, "two failures plus the success");
}

#[test]
fn exhausted_retries_surface_trial_id_and_are_not_logged() {
    let mock = MockEndpoint::spawn(EndpointKind::OpenAi, |_request| MockReply::Status(503));
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let matrix = build_trial_matrix(&corpus, &["m1".to_string()], &[Question::Spice]).unwrap();
    let endpoint = endpoint_config(mock.base_url(), EndpointKind::OpenAi);

    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("trials.jsonl");
    let summary = run_campaign(
        &matrix[..3],
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &options(),
    )
    .unwrap();
    assert_eq!(summary.failed.len(), 3);
    for (trial_id, message) in &summary.failed {
        assert!(matrix.iter().any(|s| &s.trial_id == trial_id));
        assert!(message.contains("503") || message.contains("4 attempts"), "{message}");
    }
    // Failed trials are retried on the next invocation, so they never enter
    // the log.
    assert!(read_log(&log_path).unwrap().is_empty());
    assert_eq!(mock.requests(), 12, "3 trials x 4 attempts");
}

#[test]
fn unreachable_host_fails_with_trial_id() {
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let matrix = build_trial_matrix(&corpus, &["m1".to_string()], &[Question::Spice]).unwrap();
    // Reserved port with nothing listening.
    let endpoint = endpoint_config("http://127.0.0.1:1".into(), EndpointKind::OpenAi);
    let dir = tempfile::tempdir().unwrap();
    let summary = run_campaign(
        &matrix[..1],
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &dir.path().join("trials.jsonl"),
        &options(),
    )
    .unwrap();
    assert_eq!(summary.failed.len(), 1);
    assert_eq!(summary.failed[0].0, matrix[0].trial_id);
}

#[test]
fn malformed_bodies_consume_retries() {
    let mock = MockEndpoint::spawn(EndpointKind::OpenAi, |_request| MockReply::Malformed);
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let matrix = build_trial_matrix(&corpus, &["m1".to_string()], &[Question::Spice]).unwrap();
    let endpoint = endpoint_config(mock.base_url(), EndpointKind::OpenAi);
    let dir = tempfile::tempdir().unwrap();
    let summary = run_campaign(
        &matrix[..1],
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &dir.path().join("trials.jsonl"),
        &options(),
    )
    .unwrap();
    assert_eq!(summary.failed.len(), 1);
    assert!(summary.failed[0].1.contains("missing message content"));
}

#[test]
fn ollama_wire_format_round_trips() {
    let mock = MockEndpoint::spawn(EndpointKind::Ollama, |request| {
        // Echo decodingin the reply so the options block is visibly received.
        assert_eq!(request.body["options"]["seed"], 42);
        MockReply::Answer("YES".into())
    });
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let matrix = build_trial_matrix(&corpus, &["m1".to_string()], &[Question::Spice]).unwrap();
    let endpoint = endpoint_config(mock.base_url(), EndpointKind::Ollama);
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("trials.jsonl");
    let summary = run_campaign(
        &matrix[..4],
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &options(),
    )
    .unwrap();
    assert!(summary.failed.is_empty());
    assert_eq!(read_log(&log_path).unwrap().len(), 4);
}

#[test]
fn resume_under_different_config_hash_is_refused() {
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let matrix = build_trial_matrix(&corpus, &["m1".to_string()], &[Question::Spice]).unwrap();
    let answers = script_answers(&matrix, &corpus, &templates, None);
    let mock = lookup_endpoint(answers);
    let endpoint = endpoint_config(mock.base_url(), EndpointKind::OpenAi);
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("trials.jsonl");
    run_campaign(
        &matrix[..2],
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &options(),
    )
    .unwrap();
    let mut changed = options();
    changed.config_hash = "different".into();
    let err = run_campaign(
        &matrix,
        &corpus,
        &templates,
        &DecodingConfig::default(),
        &endpoint,
        &log_path,
        &changed,
    )
    .unwrap_err();
    assert!(err.to_string().contains("config"), "{err}");
}

#[test]
fn log_is_stable_across_runs_modulo_timing() {
    let corpus = bundled_corpus();
    let templates = QuestionTemplates::default();
    let models = vec!["m1".to_string(), "m2".to_string()];
    let matrix = build_trial_matrix(&corpus, &models, &[Question::Spice]).unwrap();
    let answers = script_answers(&matrix, &corpus, &templates, Some(7));
    let run_once = |answers: HashMap<String, String>| -> Vec<TrialRecord> {
        let mock = lookup_endpoint(answers);
        let endpoint = endpoint_config(mock.base_url(), EndpointKind::OpenAi);
        let dir = tempfile::tempdir().unwrap();
        let log_path = dir.path().join("trials.jsonl");
        let mut opts = options();
        opts.parallelism = 1; // deterministic log order
        run_campaign(
            &matrix,
            &corpus,
            &templates,
            &DecodingConfig::default(),
            &endpoint,
            &log_path,
            &opts,
        )
        .unwrap();
        let mut records = read_log(&log_path).unwrap();
        for r in &mut records {
            r.timestamp = String::new();
            r.latency_ms = 0;
        }
        records
    };
    let a = run_once(answers.clone());
    let b = run_once(answers);
    assert_eq!(a, b);
}

#[test]
fn run_config_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        r#"
models = ["gemma2:9b", "mistral:7b"]
parallelism = 2
parse_mode = "lenient"

[endpoint]
kind = "ollama"
base_url = "http://127.0.0.1:11434"
timeout_secs = 30

[endpoint.retry]
max_retries = 2
backoff_base_ms = 250

[decoding]
temperature = 0.0
top_p = 1.0
top_k = 1
seed = 42
max_tokens = 8
"#,
    )
    .unwrap();
    let config = RunConfig::load(&path).unwrap();
    assert_eq!(config.models.len(), 2);
    assert_eq!(config.parse_mode, ParseMode::Lenient);
    assert_eq!(config.endpoint.retry.max_retries, 2);
    assert_eq!(config.decoding.seed, 42);
}
