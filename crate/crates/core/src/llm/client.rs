//! Chat-completion clients: a live HTTP client with retry, a replaying
//! wrapper over the on-disk cache, and a scripted mock for tests.

use super::cache::{CacheEntry, ReplayCache};
use super::{LlmError, ENDPOINT_ENV, MODEL_ENV, TOKEN_ENV};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Duration;

/// One chat completion per call; `sample_index` distinguishes repeated draws
/// of the same prompt so caching stays deterministic.
pub trait ChatClient {
    fn complete(&self, prompt: &str, sample_index: u32) -> Result<String, LlmError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub num_samples: u32,
    pub temperature: f64,
    pub max_tokens: u32,
    pub endpoint: Option<String>,
    pub model: String,
    pub cache_dir: Option<PathBuf>,
    pub auth_token: Option<String>,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            num_samples: 5,
            temperature: 0.0,
            max_tokens: 512 * 3,
            endpoint: None,
            model: "gpt-4".to_string(),
            cache_dir: None,
            auth_token: None,
        }
    }
}

impl GenerationConfig {
    /// Pick up endpoint, model, and token from the environment when set.
    pub fn from_env() -> Self {
        let mut cfg = GenerationConfig::default();
        if let Ok(endpoint) = std::env::var(ENDPOINT_ENV) {
            if !endpoint.is_empty() {
                cfg.endpoint = Some(endpoint);
            }
        }
        if let Ok(model) = std::env::var(MODEL_ENV) {
            if !model.is_empty() {
                cfg.model = model;
            }
        }
        if let Ok(token) = std::env::var(TOKEN_ENV) {
            if !token.is_empty() {
                cfg.auth_token = Some(token);
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), LlmError> {
        if self.num_samples == 0 {
            return Err(LlmError::InvalidConfig("num_samples must be >= 1".into()));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(LlmError::InvalidConfig(format!(
                "temperature {} out of range",
                self.temperature
            )));
        }
        Ok(())
    }

    /// Build the client stack this config describes: replay cache in front
    /// when a cache dir is set, live HTTP behind it when an endpoint is set.
    pub fn client(&self) -> Result<ReplayClient, LlmError> {
        self.validate()?;
        let live = match &self.endpoint {
            Some(endpoint) => Some(HttpChatClient::new(
                endpoint.clone(),
                self.model.clone(),
                self.temperature,
                self.max_tokens,
                self.auth_token.clone(),
            )?),
            None => None,
        };
        Ok(ReplayClient {
            cache: self.cache_dir.as_ref().map(|d| ReplayCache::new(d.clone())),
            model: self.model.clone(),
            temperature: self.temperature,
            live,
        })
    }
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 1],
    temperature: f64,
    max_tokens: u32,
    frequency_penalty: f64,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ResponseMessage,
}

#[derive(Deserialize)]
struct ResponseMessage {
    content: String,
}

/// Blocking chat-completion client: one user message per request, three
/// attempts with exponential backoff on transport and 429/5xx failures.
pub struct HttpChatClient {
    http: reqwest::blocking::Client,
    endpoint: String,
    model: String,
    temperature: f64,
    max_tokens: u32,
    auth_token: Option<String>,
}

impl HttpChatClient {
    pub fn new(
        endpoint: String,
        model: String,
        temperature: f64,
        max_tokens: u32,
        auth_token: Option<String>,
    ) -> Result<Self, LlmError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        Ok(HttpChatClient {
            http,
            endpoint,
            model,
            temperature,
            max_tokens,
            auth_token,
        })
    }

    fn request_once(&self, prompt: &str) -> Result<String, RequestFailure> {
        let body = ChatRequest {
            model: &self.model,
            messages: [ChatMessage {
                role: "user",
                content: prompt,
            }],
            temperature: self.temperature,
            max_tokens: self.max_tokens,
            frequency_penalty: 0.0,
        };
        let mut req = self.http.post(&self.endpoint).json(&body);
        if let Some(token) = &self.auth_token {
            req = req.bearer_auth(token);
        }
        let resp = req
            .send()
            .map_err(|e| RequestFailure::Retryable(e.to_string()))?;
        let status = resp.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(RequestFailure::Retryable(format!("http {status}")));
        }
        if !status.is_success() {
            return Err(RequestFailure::Fatal(format!("http {status}")));
        }
        let parsed: ChatResponse = resp
            .json()
            .map_err(|e| RequestFailure::Fatal(format!("bad response body: {e}")))?;
        parsed
            .choices
            .first()
            .map(|c| c.message.content.clone())
            .ok_or_else(|| RequestFailure::Fatal("response held no choices".into()))
    }
}

enum RequestFailure {
    Retryable(String),
    Fatal(String),
}

impl ChatClient for HttpChatClient {
    fn complete(&self, prompt: &str, _sample_index: u32) -> Result<String, LlmError> {
        let mut last = String::new();
        for attempt in 0..3 {
            if attempt > 0 {
                std::thread::sleep(Duration::from_millis(500 << attempt));
            }
            match self.request_once(prompt) {
                Ok(text) => return Ok(text),
                Err(RequestFailure::Fatal(e)) => return Err(LlmError::Transport(e)),
                Err(RequestFailure::Retryable(e)) => last = e,
            }
        }
        Err(LlmError::Transport(format!("3 attempts failed: {last}")))
    }
}

/// Read-through cache client. With a warm cache it never touches the
/// network; with a cold cache and no live endpoint, generation is
/// unavailable.
pub struct ReplayClient {
    cache: Option<ReplayCache>,
    model: String,
    temperature: f64,
    live: Option<HttpChatClient>,
}

impl ReplayClient {
    pub fn replay_only(cache_dir: impl Into<PathBuf>, model: &str, temperature: f64) -> Self {
        ReplayClient {
            cache: Some(ReplayCache::new(cache_dir.into())),
            model: model.to_string(),
            temperature,
            live: None,
        }
    }

    pub fn has_live_endpoint(&self) -> bool {
        self.live.is_some()
    }
}

impl ChatClient for ReplayClient {
    fn complete(&self, prompt: &str, sample_index: u32) -> Result<String, LlmError> {
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.get(&self.model, self.temperature, sample_index, prompt)? {
                return Ok(hit);
            }
        }
        let Some(live) = &self.live else {
            return Err(LlmError::GenerationUnavailable(
                "cold cache and no live endpoint configured".into(),
            ));
        };
        let response = live.complete(prompt, sample_index)?;
        if let Some(cache) = &self.cache {
            cache.put(&CacheEntry {
                model: self.model.clone(),
                temperature: self.temperature,
                sample_index,
                prompt: prompt.to_string(),
                response: response.clone(),
            })?;
        }
        Ok(response)
    }
}

/// Scripted client for tests: returns canned responses keyed by sample
/// index, cycling when more samples are requested than scripted.
pub struct MockClient {
    responses: Vec<String>,
    calls: Mutex<u32>,
}

impl MockClient {
    pub fn new(responses: Vec<String>) -> Self {
        MockClient {
            responses,
            calls: Mutex::new(0),
        }
    }

    pub fn calls(&self) -> u32 {
        *self.calls.lock().unwrap()
    }
}

impl ChatClient for MockClient {
    fn complete(&self, _prompt: &str, sample_index: u32) -> Result<String, LlmError> {
        *self.calls.lock().unwrap() += 1;
        if self.responses.is_empty() {
            return Err(LlmError::GenerationUnavailable("no scripted responses".into()));
        }
        Ok(self.responses[sample_index as usize % self.responses.len()].clone())
    }
}

/// Issue `num_samples` completions of one prompt. Every response a live
/// endpoint produces lands in the replay cache via the client stack.
pub fn generate_candidates(
    prompt: &str,
    client: &dyn ChatClient,
    num_samples: u32,
) -> Result<Vec<String>, LlmError> {
    if num_samples == 0 {
        return Err(LlmError::InvalidConfig("num_samples must be >= 1".into()));
    }
    (0..num_samples).map(|i| client.complete(prompt, i)).collect()
}
