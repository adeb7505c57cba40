//! Code-generation harness: prompt assembly, a chat-completion client with a
//! replay cache, candidate extraction/selection, failure classification, and
//! the numeric/spatial probes.

mod board;
mod cache;
mod classify;
mod client;
mod digits;
mod extract;
mod probes;
mod prompt;

pub use board::{render_board, BoardGrid};
pub use cache::{CacheEntry, ReplayCache};
pub use classify::{classify_failure, ErrorCategory};
pub use client::{
    generate_candidates, ChatClient, GenerationConfig, HttpChatClient, MockClient, ReplayClient,
};
pub use digits::digit_space_format;
pub use extract::{extract_program, select_best};
pub use probes::{
    regression_prompt, regression_probe, sinusoid_prompt, sinusoid_probe, NumberFormatting,
    RegressionProbeConfig, RegressionProbeResult, SinusoidProbeConfig, SinusoidProbeResult,
};
pub use prompt::{api_doc, assemble_prompt, bundle_for_task, Hint, PromptBundle, Shots};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("generation unavailable: {0}")]
    GenerationUnavailable(String),
    #[error("invalid generation config: {0}")]
    InvalidConfig(String),
    #[error("invalid literal: {0}")]
    InvalidLiteral(String),
    #[error("invalid board grid: {0}")]
    InvalidGrid(String),
    #[error("misuse: {0}")]
    Misuse(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("cache error: {0}")]
    Cache(String),
}

/// Environment variables the live client reads.
pub const ENDPOINT_ENV: &str = "BENCH_LLM_ENDPOINT";
pub const MODEL_ENV: &str = "BENCH_LLM_MODEL";
pub const TOKEN_ENV: &str = "BENCH_LLM_TOKEN";
