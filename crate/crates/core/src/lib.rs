//! Disposition-audit harness for chat models: elicit YES/NO re-engagement and
//! companion judgments over a tone-labeled stimulus corpus, then analyze the
//! clustered binary outcomes with a frequentist and Bayesian battery.
//!
//! The crate splits into:
//!
//! * [`corpus`] — stimulus transcripts, the 2×2 condition grid, trial matrix
//!   expansion, and prompt rendering;
//! * [`runner`] — campaign execution against chat-completion endpoints with
//!   deterministic decoding, strict YES/NO parsing, and a resumable log;
//! * [`numerics`] — special functions and counter-based random streams;
//! * [`stats`] — contingency tests, clustering corrections, cluster-robust
//!   logit, resampling checks, and Beta-Binomial posteriors;
//! * [`analysis`] / [`report`] — turn a trial log into tables and figures;
//! * [`reference`] / [`reproduce`] — published aggregates and the check suite
//!   that recomputes every statistic derivable from them.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod numerics;
pub mod reference;
pub mod report;
pub mod reproduce;
pub mod runner;
pub mod stats;
pub mod synthetic;

pub use corpus::{
    build_trial_matrix, load_corpus, render_trial, ChatMessage, ChatRole, Condition, Corpus,
    Interaction, PreambleMode, PresentationFormat, Question, QuestionTemplates, RenderedPrompt,
    Tone, TrialSpec,
};
pub use error::{CorpusError, NumericsError, RunnerError, StatsError};
pub use numerics::RngStream;
pub use runner::{parse_answer, DecodingConfig, ParseMode, ParsedAnswer, TrialRecord};
pub use stats::{ClusteredBinaryDataset, ContingencyTable};
