//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A malformed record in a corpus manifest, with its 1-based line number.
    #[error("{path}:{line}: {message}")]
    Manifest {
        path: String,
        line: usize,
        message: String,
    },

    #[error("unknown language code `{0}`")]
    UnknownLanguage(String),

    #[error("invalid language code `{0}`: expected 3 lowercase ASCII letters")]
    InvalidLanguageCode(String),

    #[error("unknown level `{0}`: expected one of L1, L2, L3")]
    UnknownLevel(String),

    #[error("no documents for language `{0}`")]
    NoDocuments(String),

    #[error("family tree: {0}")]
    FamilyTree(String),

    #[error("not a word: `{0}` contains no letters")]
    NotAWord(String),

    #[error("n-gram size must be 2 or 3, got {0}")]
    InvalidNgramSize(usize),

    #[error("profile fraction must be in (0, 1], got {0}")]
    InvalidFraction(f64),

    #[error("empty n-gram profile for `{0}`")]
    EmptyProfile(String),

    #[error("profiles have mismatched n-gram sizes ({0} vs {1})")]
    MismatchedNgramSize(usize, usize),

    #[error("empty document `{0}`: no word tokens")]
    EmptyDocument(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("feature vector has {got} values, expected {expected}")]
    Dimensionality { expected: usize, got: usize },

    #[error("model: {0}")]
    Model(String),

    #[error("t-test: {0}")]
    TTest(String),

    #[error("experiment: {0}")]
    Experiment(String),

    #[error("dataset: {0}")]
    Dataset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
