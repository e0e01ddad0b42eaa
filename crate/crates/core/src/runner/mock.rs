//! Scripted in-process chat endpoint for offline tests and dry runs.
//!
//! Speaks just enough HTTP/1.1 for the blocking client: one request per
//! connection, `Connection: close`. The handler decides each reply from the
//! parsed request, so scripts can key off model, messages, or a request
//! counter.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use serde_json::Value;

use super::endpoint::EndpointKind;

/// Parsed body of an incoming chat request.
#[derive(Debug, Clone)]
pub struct MockRequest {
    pub model: String,
    /// (role, content) pairs in order.
    pub messages: Vec<(String, String)>,
    /// Zero-based index of this request since the server started.
    pub index: usize,
    pub body: Value,
}

/// What the script wants the server to do.
#[derive(Debug, Clone)]
pub enum MockReply {
    /// Respond 200 with this assistant text.
    Answer(String),
    /// Respond with a bare HTTP status code.
    Status(u16),
    /// Respond 200 with a body that is not valid for the wire format.
    Malformed,
}

type Handler = dyn Fn(&MockRequest) -> MockReply + Send + Sync;

/// A scripted endpoint bound to a random local port.
pub struct MockEndpoint {
    address: String,
    requests: Arc<AtomicUsize>,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl MockEndpoint {
    pub fn spawn<H>(kind: EndpointKind, handler: H) -> Self
    where
        H: Fn(&MockRequest) -> MockReply + Send + Sync + 'static,
    {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind mock endpoint");
        let address = format!("http://{}", listener.local_addr().expect("local addr"));
        let requests = Arc::new(AtomicUsize::new(0));
        let stop = Arc::new(AtomicBool::new(false));
        let handler: Arc<Handler> = Arc::new(handler);

        let thread_requests = Arc::clone(&requests);
        let thread_stop = Arc::clone(&stop);
        let handle = std::thread::spawn(move || {
            for connection in listener.incoming() {
                if thread_stop.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = connection else { continue };
                let handler = Arc::clone(&handler);
                let requests = Arc::clone(&thread_requests);
                std::thread::spawn(move || {
                    let _ = serve_connection(stream, kind, &handler, &requests);
                });
            }
        });

        Self {
            address,
            requests,
            stop,
            handle: Some(handle),
        }
    }

    /// Base URL for an `EndpointConfig`.
    pub fn base_url(&self) -> String {
        self.address.clone()
    }

    /// Total requests served so far.
    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for MockEndpoint {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop.
        if let Some(address) = self.address.strip_prefix("http://") {
            let _ = TcpStream::connect(address);
        }
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

fn serve_connection(
    mut stream: TcpStream,
    kind: EndpointKind,
    handler: &Arc<Handler>,
    requests: &Arc<AtomicUsize>,
) -> std::io::Result<()> {
    let mut buffer = Vec::new();
    let mut chunk = [0u8; 4096];
    let header_end = loop {
        let n = stream.read(&mut chunk)?;
        if n == 0 {
            return Ok(());
        }
        buffer.extend_from_slice(&chunk[..n]);
        if let Some(pos) = find_header_end(&buffer) {
            break pos;
        }
        if buffer.len() > 1 << 20 {
            return Ok(());
        }
    };
    let header_text = String::from_utf8_lossy(&buffer[..header_end]).to_string();
    let content_length = header_text
        .lines()
        .find_map(|l| {
            let (name, value) = l.split_once(':')?;
            name.eq_ignore_ascii_case("content-length")
                .then(|| value.trim().parse::<usize>().ok())?
        })
        .unwrap_or(0);
    let body_start = header_end + 4;
    while buffer.len() < body_start + content_length {
        let n = stream.read(&mut chunk)?;
        if n == 0 {
            break;
        }
        buffer.extend_from_slice(&chunk[..n]);
    }
    let body: Value =
        serde_json::from_slice(&buffer[body_start..body_start + content_length])
            .unwrap_or(Value::Null);

    let index = requests.fetch_add(1, Ordering::SeqCst);
    let request = MockRequest {
        model: body
            .get("model")
            .and_then(Value::as_str)
            .unwrap_or_default()
            .to_string(),
        messages: body
            .get("messages")
            .and_then(Value::as_array)
            .map(|ms| {
                ms.iter()
                    .map(|m| {
                        (
                            m.get("role").and_then(Value::as_str).unwrap_or_default().to_string(),
                            m.get("content")
                                .and_then(Value::as_str)
                                .unwrap_or_default()
                                .to_string(),
                        )
                    })
                    .collect()
            })
            .unwrap_or_default(),
        index,
        body,
    };

    let (status, payload) = match handler(&request) {
        MockReply::Answer(text) => (200, reply_body(kind, &request.model, &text)),
        MockReply::Status(code) => (code, "{}".to_string()),
        MockReply::Malformed => (200, r#"{"unexpected":"shape"}"#.to_string()),
    };
    let response = format!(
        "HTTP/1.1 {status} {}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
        status_text(status),
        payload.len(),
    );
    stream.write_all(response.as_bytes())?;
    stream.flush()
}

fn find_header_end(buffer: &[u8]) -> Option<usize> {
    buffer.windows(4).position(|w| w == b"\r\n\r\n")
}

fn reply_body(kind: EndpointKind, model: &str, text: &str) -> String {
    let body = match kind {
        EndpointKind::OpenAi => serde_json::json!({
            "id": "mock",
            "model": model,
            "choices": [{
                "index": 0,
                "message": {"role": "assistant", "content": text},
                "finish_reason": "stop",
            }],
        }),
        EndpointKind::Ollama => serde_json::json!({
            "model": model,
            "message": {"role": "assistant", "content": text},
            "done": true,
        }),
    };
    body.to_string()
}

fn status_text(status: u16) -> &'static str {
    match status {
        200 => "OK",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        503 => "Service Unavailable",
        _ => "Status",
    }
}

/// Stable script key for a rendered prompt: the model plus every message.
/// Tests build answer tables keyed by this.
pub fn request_key(model: &str, messages: &[(String, String)]) -> String {
    let mut key = String::from(model);
    for (role, content) in messages {
        key.push('\u{1f}');
        key.push_str(role);
        key.push('\u{1f}');
        key.push_str(content);
    }
    key
}
