//! Trial execution: endpoints, parsing, the resumable log, and campaigns.

mod endpoint;
mod log;
pub mod mock;
mod parse;

pub use endpoint::{
    execute_trial, DecodingConfig, EndpointConfig, EndpointKind, ExecuteOutcome, RetryConfig,
    RunConfig,
};
pub use log::{
    completed_ids, manifest_path, read_log, read_manifest, write_manifest, LogWriter, RunManifest,
    TrialRecord,
};
pub use parse::{parse_answer, ParseMode, ParsedAnswer};

use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::mpsc;
use std::sync::Mutex;

use crate::corpus::{render_trial, Corpus, Question, QuestionTemplates, TrialSpec};
use crate::error::RunnerError;

/// Per-question compliance tallies over the whole log.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct QuestionCounts {
    pub question: Question,
    pub compliant: usize,
    pub noncompliant: usize,
}

/// What a campaign run did and what the log now holds.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CampaignSummary {
    /// Requests issued by this invocation.
    pub executed: usize,
    /// Trials already present in the log and skipped.
    pub skipped: usize,
    /// Compliance accounting over every record in the log.
    pub per_question: Vec<QuestionCounts>,
    /// Trials that failed after the retry budget; not logged, retried on the
    /// next invocation.
    pub failed: Vec<(String, String)>,
}

/// Execution knobs that do not affect trial content.
#[derive(Debug, Clone)]
pub struct CampaignOptions {
    pub parallelism: usize,
    pub parse_mode: ParseMode,
    /// Hash binding the log to its configuration; resuming under a different
    /// hash is refused.
    pub config_hash: String,
}

/// Execute every spec not already in the log, appending one record per trial
/// through a single writer. Re-invocation skips completed trials.
pub fn run_campaign(
    matrix: &[TrialSpec],
    corpus: &Corpus,
    templates: &QuestionTemplates,
    decoding: &DecodingConfig,
    endpoint: &EndpointConfig,
    log_path: &Path,
    options: &CampaignOptions,
) -> Result<CampaignSummary, RunnerError> {
    endpoint.validate()?;
    if options.parallelism == 0 {
        return Err(RunnerError::ConfigInvalid("parallelism must be >= 1".into()));
    }
    // Every referenced interaction must exist before any request goes out.
    let interactions: HashMap<&str, _> = corpus
        .interactions()
        .iter()
        .map(|i| (i.id.as_str(), i))
        .collect();
    for spec in matrix {
        if !interactions.contains_key(spec.interaction_id.as_str()) {
            return Err(RunnerError::ConfigInvalid(format!(
                "matrix references unknown interaction {:?}",
                spec.interaction_id
            )));
        }
    }

    match read_manifest(log_path)? {
        Some(manifest) => {
            if manifest.config_hash != options.config_hash {
                return Err(RunnerError::ManifestMismatch(format!(
                    "log was produced under config {} but this run has {}",
                    manifest.config_hash, options.config_hash
                )));
            }
        }
        None => {
            write_manifest(
                log_path,
                &RunManifest::new(options.config_hash.clone(), options.parse_mode),
            )?;
        }
    }

    let mut records = read_log(log_path)?;
    let completed = completed_ids(&records);
    let pending: Vec<&TrialSpec> = matrix
        .iter()
        .filter(|s| !completed.contains(&s.trial_id))
        .collect();
    let skipped = matrix.len() - pending.len();

    let client = reqwest::blocking::Client::builder()
        .timeout(std::time::Duration::from_secs(endpoint.timeout_secs))
        .build()
        .map_err(|e| RunnerError::ConfigInvalid(e.to_string()))?;

    let queue: Mutex<VecDeque<&TrialSpec>> = Mutex::new(pending.iter().copied().collect());
    let (results_tx, results_rx) = mpsc::channel::<Result<TrialRecord, (String, String)>>();

    let mut executed = 0usize;
    let mut failed = Vec::new();
    std::thread::scope(|scope| -> Result<(), RunnerError> {
        for _ in 0..options.parallelism.min(pending.len().max(1)) {
            let results_tx = results_tx.clone();
            let queue = &queue;
            let client = &client;
            let interactions = &interactions;
            scope.spawn(move || loop {
                let Some(spec) = queue.lock().expect("queue lock").pop_front() else {
                    break;
                };
                let interaction = interactions[spec.interaction_id.as_str()];
                let outcome = render_trial(spec, interaction, templates)
                    .map_err(RunnerError::from)
                    .and_then(|prompt| {
                        execute_trial(client, &prompt, &spec.model_name, decoding, endpoint)
                    });
                let message = match outcome {
                    Ok(reply) => Ok(TrialRecord {
                        trial_id: spec.trial_id.clone(),
                        interaction_id: spec.interaction_id.clone(),
                        model_name: spec.model_name.clone(),
                        condition: spec.condition,
                        question: spec.question,
                        tone: interaction.tone,
                        parsed: parse_answer(&reply.raw_response, options.parse_mode),
                        raw_response: reply.raw_response,
                        timestamp: chrono::Utc::now().to_rfc3339(),
                        endpoint_model: reply.endpoint_model,
                        latency_ms: reply.latency_ms,
                    }),
                    Err(e) => Err((spec.trial_id.clone(), e.to_string())),
                };
                if results_tx.send(message).is_err() {
                    break;
                }
            });
        }
        drop(results_tx);

        // Single-writer loop: every record lands in the log exactly once.
        let mut writer = LogWriter::append_to(log_path)?;
        for message in results_rx {
            match message {
                Ok(record) => {
                    writer.append(&record)?;
                    records.push(record);
                    executed += 1;
                }
                Err(failure) => {
                    executed += 1;
                    failed.push(failure);
                }
            }
        }
        Ok(())
    })?;
    failed.sort();

    let per_question = Question::ALL
        .iter()
        .map(|&question| {
            let of_question = records.iter().filter(|r| r.question == question);
            let (mut compliant, mut noncompliant) = (0, 0);
            for r in of_question {
                if r.is_compliant() {
                    compliant += 1;
                } else {
                    noncompliant += 1;
                }
            }
            QuestionCounts {
                question,
                compliant,
                noncompliant,
            }
        })
        .collect();

    Ok(CampaignSummary {
        executed,
        skipped,
        per_question,
        failed,
    })
}
