use std::path::PathBuf;

use thiserror::Error;

use crate::features::Fingerprint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corpus header must be exactly `artist,title,year,lyrics,mood`, found `{found}`")]
    CorpusHeader { found: String },

    #[error("corpus row {row}: {message}")]
    CorpusRow { row: usize, message: String },

    #[error("invalid song: {0}")]
    InvalidSong(String),

    #[error("corpus contains {count} unlabeled song(s); a labeled corpus is required")]
    Unlabeled { count: usize },

    #[error("infeasible split: {0}")]
    InfeasibleSplit(String),

    #[error("no songs labeled {0}")]
    MissingLabel(&'static str),

    #[error("invalid tokenizer config: {0}")]
    TokenizerConfig(String),

    #[error("vocabulary is empty after applying min_df={min_df}")]
    EmptyVocabulary { min_df: usize },

    #[error("feature vector was built against vocabulary {found}, expected {expected}")]
    FingerprintMismatch {
        expected: Fingerprint,
        found: Fingerprint,
    },

    #[error("feature scheme mismatch: {0}")]
    SchemeMismatch(String),

    #[error("invalid training data: {0}")]
    Training(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported model format version {found} (this build reads version {supported})")]
    ModelVersion { found: u64, supported: u64 },

    #[error("model checksum mismatch: file says {stored}, payload hashes to {computed}")]
    ModelChecksum { stored: String, computed: String },

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("cross-validation: {0}")]
    Folds(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
