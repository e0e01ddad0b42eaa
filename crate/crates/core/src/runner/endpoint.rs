//! Chat-completion endpoint configuration and the request path.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus::RenderedPrompt;
use crate::error::RunnerError;

use super::parse::ParseMode;

/// Decoding parameters sent with every request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecodingConfig {
    pub temperature: f64,
    pub top_p: f64,
    pub top_k: u32,
    pub seed: u64,
    pub max_tokens: u32,
}

impl Default for DecodingConfig {
    fn default() -> Self {
        Self {
            temperature: 0.0,
            top_p: 1.0,
            top_k: 1,
            seed: 42,
            max_tokens: 16,
        }
    }
}

/// Which wire format the endpoint speaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointKind {
    /// `POST {base_url}/v1/chat/completions`.
    OpenAi,
    /// `POST {base_url}/api/chat` with decoding under `options`.
    Ollama,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryConfig {
    pub max_retries: u32,
    pub backoff_base_ms: u64,
}

impl Default for RetryConfig {
    fn default() -> Self {
        Self {
            max_retries: 3,
            backoff_base_ms: 1000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    pub kind: EndpointKind,
    pub base_url: String,
    /// Name of the environment variable holding the API key; the key itself
    /// never reaches the log or manifest.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    /// OpenAI-style servers usually reject `top_k`; opt in when yours
    /// accepts it. Ollama always receives it under `options`.
    #[serde(default)]
    pub send_top_k: bool,
    #[serde(default)]
    pub retry: RetryConfig,
}

fn default_timeout_secs() -> u64 {
    60
}

impl EndpointConfig {
    pub fn validate(&self) -> Result<(), RunnerError> {
        if !(self.base_url.starts_with("http://") || self.base_url.starts_with("https://")) {
            return Err(RunnerError::ConfigInvalid(format!(
                "base_url must start with http:// or https://, got {:?}",
                self.base_url
            )));
        }
        Ok(())
    }
}

/// The full run configuration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub endpoint: EndpointConfig,
    pub models: Vec<String>,
    #[serde(default)]
    pub decoding: DecodingConfig,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default = "default_parse_mode")]
    pub parse_mode: ParseMode,
}

fn default_parallelism() -> usize {
    4
}

fn default_parse_mode() -> ParseMode {
    ParseMode::Strict
}

impl RunConfig {
    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, RunnerError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(RunnerError::ConfigIo)?;
        let config: RunConfig =
            toml::from_str(&text).map_err(|e| RunnerError::ConfigInvalid(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), RunnerError> {
        self.endpoint.validate()?;
        if self.models.is_empty() {
            return Err(RunnerError::ConfigInvalid("model list is empty".into()));
        }
        if self.parallelism == 0 {
            return Err(RunnerError::ConfigInvalid("parallelism must be >= 1".into()));
        }
        Ok(())
    }

    /// Stable hash over everything that shapes trial content and parsing;
    /// resuming a log under a different hash is refused.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let payload = serde_json::to_string(&(
            &self.endpoint.kind,
            &self.endpoint.base_url,
            &self.models,
            &self.decoding,
            &self.parse_mode,
        ))
        .expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(payload.as_bytes());
        hex_encode(&hasher.finalize())
    }
}

pub(crate) fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Outcome of one successful endpoint call.
#[derive(Debug, Clone)]
pub struct ExecuteOutcome {
    pub raw_response: String,
    /// Model string echoed by the server.
    pub endpoint_model: String,
    pub latency_ms: u64,
}

/// One chat-completion request with retries and exponential backoff.
///
/// Transport errors, HTTP status >= 400, timeouts, and malformed bodies all
/// consume a retry; the final failure reports the attempt count.
pub fn execute_trial(
    client: &reqwest::blocking::Client,
    prompt: &RenderedPrompt,
    model_name: &str,
    decoding: &DecodingConfig,
    endpoint: &EndpointConfig,
) -> Result<ExecuteOutcome, RunnerError> {
    let (url, body) = build_request(prompt, model_name, decoding, endpoint);
    let api_key = endpoint
        .api_key_env
        .as_ref()
        .and_then(|name| std::env::var(name).ok());

    let attempts = endpoint.retry.max_retries + 1;
    let mut last_error = String::new();
    for attempt in 0..attempts {
        if attempt > 0 {
            let backoff = endpoint.retry.backoff_base_ms.saturating_mul(1 << (attempt - 1));
            std::thread::sleep(Duration::from_millis(backoff));
        }
        let started = Instant::now();
        let mut request = client.post(&url).json(&body);
        if let Some(key) = &api_key {
            request = request.bearer_auth(key);
        }
        match request.send() {
            Err(e) => last_error = format!("transport: {e}"),
            Ok(response) => {
                let status = response.status();
                if status.as_u16() >= 400 {
                    last_error = format!("http status {status}");
                    continue;
                }
                let latency_ms = started.elapsed().as_millis() as u64;
                match response
                    .json::<Value>()
                    .map_err(|e| format!("body: {e}"))
                    .and_then(|v| extract_reply(&v, endpoint.kind))
                {
                    Ok((raw_response, endpoint_model)) => {
                        return Ok(ExecuteOutcome {
                            raw_response,
                            endpoint_model,
                            latency_ms,
                        })
                    }
                    Err(e) => last_error = e,
                }
            }
        }
    }
    Err(RunnerError::Endpoint {
        attempts,
        message: last_error,
    })
}

fn build_request(
    prompt: &RenderedPrompt,
    model_name: &str,
    decoding: &DecodingConfig,
    endpoint: &EndpointConfig,
) -> (String, Value) {
    let base = endpoint.base_url.trim_end_matches('/');
    let messages: Vec<Value> = prompt
        .messages
        .iter()
        .map(|m| json!({"role": m.role, "content": m.content}))
        .collect();
    match endpoint.kind {
        EndpointKind::OpenAi => {
            let mut body = json!({
                "model": model_name,
                "messages": messages,
                "temperature": decoding.temperature,
                "top_p": decoding.top_p,
                "seed": decoding.seed,
                "max_tokens": decoding.max_tokens,
            });
            if endpoint.send_top_k {
                body["top_k"] = json!(decoding.top_k);
            }
            (format!("{base}/v1/chat/completions"), body)
        }
        EndpointKind::Ollama => (
            format!("{base}/api/chat"),
            json!({
                "model": model_name,
                "messages": messages,
                "stream": false,
                "options": {
                    "temperature": decoding.temperature,
                    "top_p": decoding.top_p,
                    "top_k": decoding.top_k,
                    "seed": decoding.seed,
                    "num_predict": decoding.max_tokens,
                },
            }),
        ),
    }
}

fn extract_reply(value: &Value, kind: EndpointKind) -> Result<(String, String), String> {
    let model = value
        .get("model")
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_string();
    let content = match kind {
        EndpointKind::OpenAi => value
            .get("choices")
            .and_then(|c| c.get(0))
            .and_then(|c| c.get("message"))
            .and_then(|m| m.get("content"))
            .and_then(Value::as_str),
        EndpointKind::Ollama => value
            .get("message")
            .and_then(|m| m.get("content"))
            .and_then(Value::as_str),
    };
    content
        .map(|c| (c.to_string(), model))
        .ok_or_else(|| "missing message content".to_string())
}
