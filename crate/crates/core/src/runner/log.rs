//! Append-only line-delimited trial log with a sidecar manifest.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{Condition, Question, Tone};
use crate::error::RunnerError;

use super::parse::{ParseMode, ParsedAnswer};

/// One executed trial. Compliance is carried by `parsed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: String,
    pub interaction_id: String,
    pub model_name: String,
    pub condition: Condition,
    pub question: Question,
    pub tone: Tone,
    pub raw_response: String,
    pub parsed: ParsedAnswer,
    pub timestamp: String,
    pub endpoint_model: String,
    pub latency_ms: u64,
}

impl TrialRecord {
    pub fn is_compliant(&self) -> bool {
        self.parsed.is_compliant()
    }
}

/// Run metadata written next to the log; the completed set is derived by
/// scanning the log itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub config_hash: String,
    pub parse_mode: ParseMode,
    pub created_at: String,
}

impl RunManifest {
    pub fn new(config_hash: String, parse_mode: ParseMode) -> Self {
        use sha2::{Digest, Sha256};
        let created_at = chrono::Utc::now().to_rfc3339();
        let mut hasher = Sha256::new();
        hasher.update(config_hash.as_bytes());
        hasher.update(created_at.as_bytes());
        let digest = hasher.finalize();
        Self {
            run_id: super::endpoint::hex_encode(&digest[..6]),
            config_hash,
            parse_mode,
            created_at,
        }
    }
}

pub fn manifest_path(log_path: &Path) -> PathBuf {
    let mut name = log_path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    log_path.with_file_name(name)
}

pub fn read_manifest(log_path: &Path) -> Result<Option<RunManifest>, RunnerError> {
    let path = manifest_path(log_path);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(RunnerError::LogIo)?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| RunnerError::ManifestMismatch(format!("unreadable manifest: {e}")))
}

pub fn write_manifest(log_path: &Path, manifest: &RunManifest) -> Result<(), RunnerError> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(manifest_path(log_path), text).map_err(RunnerError::LogIo)
}

/// Read every record; a malformed line fails with its line number.
pub fn read_log(path: &Path) -> Result<Vec<TrialRecord>, RunnerError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let file = File::open(path).map_err(RunnerError::LogIo)?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(RunnerError::LogIo)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TrialRecord =
            serde_json::from_str(&line).map_err(|e| RunnerError::LogParse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}

pub fn completed_ids(records: &[TrialRecord]) -> BTreeSet<String> {
    records.iter().map(|r| r.trial_id.clone()).collect()
}

/// Single appender; campaign workers funnel records through one of these so
/// log lines never interleave.
pub struct LogWriter {
    writer: BufWriter<File>,
}

impl LogWriter {
    pub fn append_to(path: &Path) -> Result<Self, RunnerError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent).map_err(RunnerError::LogIo)?;
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(RunnerError::LogIo)?;
        Ok(Self {
            writer: BufWriter::new(file),
        })
    }

    pub fn append(&mut self, record: &TrialRecord) -> Result<(), RunnerError> {
        let line = serde_json::to_string(record).expect("record serializes");
        self.writer
            .write_all(line.as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .and_then(|_| self.writer.flush())
            .map_err(RunnerError::LogIo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{PreambleMode, PresentationFormat};

    fn record(id: &str) -> TrialRecord {
        TrialRecord {
            trial_id: id.into(),
            interaction_id: "i".into(),
            model_name: "m".into(),
            condition: Condition {
                format: PresentationFormat::Prompt,
                preamble: PreambleMode::Included,
            },
            question: Question::Spice,
            tone: Tone::Friendly,
            raw_response: "YES".into(),
            parsed: ParsedAnswer::Yes,
            timestamp: "2025-01-01T00:00:00Z".into(),
            endpoint_model: "m".into(),
            latency_ms: 3,
        }
    }

    #[test]
    fn log_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trials.jsonl");
        let mut writer = LogWriter::append_to(&path).unwrap();
        writer.append(&record("t1")).unwrap();
        writer.append(&record("t2")).unwrap();
        drop(writer);
        let records = read_log(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0], record("t1"));
        assert_eq!(
            completed_ids(&records),
            ["t1", "t2"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn missing_log_reads_empty() {
        let dir = tempfile::tempdir().unwrap();
        assert!(read_log(&dir.path().join("absent.jsonl")).unwrap().is_empty());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trials.jsonl");
        let good = serde_json::to_string(&record("t1")).unwrap();
        std::fs::write(&path, format!("{good}\nnot json\n")).unwrap();
        match read_log(&path) {
            Err(RunnerError::LogParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trials.jsonl");
        assert!(read_manifest(&path).unwrap().is_none());
        let manifest = RunManifest::new("hash123".into(), ParseMode::Strict);
        write_manifest(&path, &manifest).unwrap();
        let back = read_manifest(&path).unwrap().unwrap();
        assert_eq!(back.config_hash, "hash123");
        assert_eq!(back.run_id, manifest.run_id);
    }
}
