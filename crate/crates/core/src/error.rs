//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("{what} (got {value})")]
    Domain { what: &'static str, value: f64 },
    #[error("{0} failed to converge")]
    NoConvergence(&'static str),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus file not found: {0}")]
    Missing(String),
    #[error("could not read corpus file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: unknown tone label {label:?}")]
    UnknownTone { line: usize, label: String },
    #[error("duplicate interaction id {0:?}")]
    DuplicateId(String),
    #[error("empty corpus")]
    Empty,
    #[error("empty model list")]
    NoModels,
    #[error("trial references interaction {expected:?} but was rendered with {got:?}")]
    InteractionMismatch { expected: String, got: String },
    #[error("template error: {0}")]
    Template(String),
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("{0}")]
    Numerics(#[from] NumericsError),
    #[error("empty compliant subset")]
    EmptyCompliantSubset,
    #[error("contingency table has a zero {0} margin")]
    ZeroMargin(&'static str),
    #[error("expected count is zero in cell ({row}, {col})")]
    ZeroExpected { row: String, col: String },
    #[error("cluster {cluster:?} carries more than one group label ({a:?}, {b:?})")]
    MixedCluster { cluster: String, a: String, b: String },
    #[error("need at least {need} clusters, found {found}")]
    TooFewClusters { need: usize, found: usize },
    #[error("all clusters are singletons; within-cluster variance is undefined")]
    AllSingletonClusters,
    #[error("need at least 2 distinct group labels, found {0}")]
    TooFewGroups(usize),
    #[error("design effect must be >= 1, got {0}")]
    BadDesignEffect(f64),
    #[error("p-value out of [0,1]: {0}")]
    BadPValue(f64),
    #[error("design matrix is rank deficient at column {0:?}")]
    RankDeficient(String),
    #[error("response is constant; the logit is not identified")]
    ConstantResponse,
    #[error("need more observations than parameters (n={n}, k={k})")]
    TooFewObservations { n: usize, k: usize },
    #[error("IRLS did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("fit has not converged; refusing to compute covariance")]
    NotConverged,
    #[error("resampling requires B >= 1")]
    BadReplicateCount,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("could not read config: {0}")]
    ConfigIo(std::io::Error),
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("log io: {0}")]
    LogIo(std::io::Error),
    #[error("log line {line}: {message}")]
    LogParse { line: usize, message: String },
    #[error("log manifest mismatch: {0}")]
    ManifestMismatch(String),
    #[error("endpoint request failed after {attempts} attempts: {message}")]
    Endpoint { attempts: u32, message: String },
    #[error("malformed endpoint response: {0}")]
    MalformedResponse(String),
    #[error("trial {trial_id}: {source}")]
    Trial {
        trial_id: String,
        #[source]
        source: Box<RunnerError>,
    },
    #[error("{0}")]
    Corpus(#[from] CorpusError),
}
