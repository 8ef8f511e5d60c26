//! Language-model clients.
//!
//! The remote client speaks a small JSON-over-HTTP protocol:
//!
//! ```text
//! POST {base_url}/generate
//! {"model": "...", "directives": "[TONE=NEUTRAL]", "messages": [{"role": "user", "speaker": "a", "content": "hi"}]}
//!
//! 200 {"output": "..."}
//! ```

use std::env;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gcode::DirectiveString;
use crate::transcript::Transcript;

pub const ENV_BASE_URL: &str = "MSA_LLM_BASE_URL";
pub const ENV_MODEL: &str = "MSA_LLM_MODEL";
pub const ENV_TOKEN: &str = "MSA_LLM_TOKEN";
pub const ENV_TIMEOUT_MS: &str = "MSA_LLM_TIMEOUT_MS";
pub const ENV_RETRIES: &str = "MSA_LLM_RETRIES";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LlmError {
    #[error("language model unavailable after {attempts} attempt(s): {message}")]
    Unavailable { attempts: u32, message: String },
    #[error("language model timed out after {attempts} attempt(s) of {timeout_ms} ms")]
    Timeout { attempts: u32, timeout_ms: u64 },
    #[error("language model client misconfigured: {0}")]
    Config(String),
}

/// Produces a reply given prompt directives and the conversation so far.
/// Implementations must tolerate concurrent calls.
pub trait LlmClient: Send + Sync {
    fn generate(
        &self,
        directives: &DirectiveString,
        context: &Transcript,
    ) -> Result<String, LlmError>;
}

/// Deterministic echo client: `<ECHO directives='…' last='…'>`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StubClient;

impl LlmClient for StubClient {
    fn generate(
        &self,
        directives: &DirectiveString,
        context: &Transcript,
    ) -> Result<String, LlmError> {
        let last = context.last().map_or("", |t| t.text.as_str());
        Ok(format!("<ECHO directives='{directives}' last='{last}'>"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemoteConfig {
    pub base_url: String,
    pub model: String,
    #[serde(default, skip_serializing)]
    pub token: Option<String>,
    pub timeout_ms: u64,
    pub retries: u32,
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
}

fn default_backoff() -> u64 {
    100
}

impl RemoteConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            model: model.into(),
            token: None,
            timeout_ms: 30_000,
            retries: 2,
            backoff_ms: default_backoff(),
        }
    }

    /// Reads `MSA_LLM_BASE_URL`, `MSA_LLM_MODEL`, `MSA_LLM_TOKEN`,
    /// `MSA_LLM_TIMEOUT_MS` and `MSA_LLM_RETRIES`.
    pub fn from_env() -> Result<Self, LlmError> {
        let base_url = env::var(ENV_BASE_URL)
            .map_err(|_| LlmError::Config(format!("{ENV_BASE_URL} is not set")))?;
        let model = env::var(ENV_MODEL).unwrap_or_else(|_| "default".into());
        let mut cfg = Self::new(base_url, model);
        cfg.token = env::var(ENV_TOKEN).ok();
        if let Ok(v) = env::var(ENV_TIMEOUT_MS) {
            cfg.timeout_ms = v
                .parse()
                .map_err(|_| LlmError::Config(format!("{ENV_TIMEOUT_MS} must be an integer")))?;
        }
        if let Ok(v) = env::var(ENV_RETRIES) {
            cfg.retries = v
                .parse()
                .map_err(|_| LlmError::Config(format!("{ENV_RETRIES} must be an integer")))?;
        }
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct RemoteMessage<'a> {
    role: &'a str,
    speaker: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct RemoteRequest<'a> {
    model: &'a str,
    directives: &'a str,
    messages: Vec<RemoteMessage<'a>>,
}

#[derive(Deserialize)]
struct RemoteResponse {
    output: String,
}

/// Blocking HTTP client with timeout and retry. Call from a blocking
/// context (e.g. `tokio::task::spawn_blocking`) when inside an async runtime.
#[derive(Debug, Clone)]
pub struct RemoteClient {
    config: RemoteConfig,
}

enum AttemptError {
    Timeout,
    Other(String),
}

impl RemoteClient {
    pub fn new(config: RemoteConfig) -> Self {
        Self { config }
    }

    pub fn config(&self) -> &RemoteConfig {
        &self.config
    }

    fn attempt(&self, body: &RemoteRequest<'_>) -> Result<String, AttemptError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(self.config.timeout_ms))
            .build()
            .map_err(|e| AttemptError::Other(e.to_string()))?;
        let url = format!("{}/generate", self.config.base_url.trim_end_matches('/'));
        let mut req = client.post(url).json(body);
        if let Some(token) = &self.config.token {
            req = req.bearer_auth(token);
        }
        let classify = |e: reqwest::Error| {
            if e.is_timeout() {
                AttemptError::Timeout
            } else {
                AttemptError::Other(e.to_string())
            }
        };
        let resp = req.send().map_err(classify)?;
        let status = resp.status();
        if !status.is_success() {
            return Err(AttemptError::Other(format!("HTTP {status}")));
        }
        resp.json::<RemoteResponse>()
            .map(|r| r.output)
            .map_err(classify)
    }
}

impl LlmClient for RemoteClient {
    fn generate(
        &self,
        directives: &DirectiveString,
        context: &Transcript,
    ) -> Result<String, LlmError> {
        let body = RemoteRequest {
            model: &self.config.model,
            directives: directives.as_str(),
            messages: context
                .iter()
                .map(|t| RemoteMessage {
                    role: t.turn_role.as_str(),
                    speaker: t.speaker.as_str(),
                    content: &t.text,
                })
                .collect(),
        };
        let attempts = self.config.retries + 1;
        let mut all_timeouts = true;
        let mut last_message = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                thread::sleep(Duration::from_millis(
                    self.config.backoff_ms * u64::from(attempt),
                ));
            }
            match self.attempt(&body) {
                Ok(text) => return Ok(text),
                Err(AttemptError::Timeout) => last_message = "timeout".into(),
                Err(AttemptError::Other(m)) => {
                    all_timeouts = false;
                    last_message = m;
                }
            }
        }
        if all_timeouts {
            Err(LlmError::Timeout {
                attempts,
                timeout_ms: self.config.timeout_ms,
            })
        } else {
            Err(LlmError::Unavailable {
                attempts,
                message: last_message,
            })
        }
    }
}

impl<T: LlmClient + ?Sized> LlmClient for std::sync::Arc<T> {
    fn generate(
        &self,
        directives: &DirectiveString,
        context: &Transcript,
    ) -> Result<String, LlmError> {
        (**self).generate(directives, context)
    }
}

impl<T: LlmClient + ?Sized> LlmClient for Box<T> {
    fn generate(
        &self,
        directives: &DirectiveString,
        context: &Transcript,
    ) -> Result<String, LlmError> {
        (**self).generate(directives, context)
    }
}
