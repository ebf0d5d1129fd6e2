use std::io;
use std::path::PathBuf;

use tagscope_core::coding::TaxonomyError;
use tagscope_core::corpus::CorpusError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error("{}:{line}: field `{field}`: {message}", path.display())]
    Record {
        path: PathBuf,
        line: u64,
        field: String,
        message: String,
    },

    #[error("{}:{line}: {message}", path.display())]
    Syntax {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Corpus { path: PathBuf, source: CorpusError },

    #[error("{}: no documents left after filtering", path.display())]
    EmptyCorpus { path: PathBuf },

    #[error("{}: {source}", path.display())]
    Taxonomy { path: PathBuf, source: TaxonomyError },

    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),

    #[error("invalid window `{0}`: expected START..END with dates or RFC 3339 timestamps")]
    Window(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Data(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage { stage: &'static str, source: Box<Error> },
}

impl Error {
    /// Process exit code: 1 usage, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Write { .. } => 3,
            Error::UnsupportedFormat(_) | Error::Window(_) | Error::Config(_) => 1,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn read(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Read { path, source }
    }

    pub(crate) fn write(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Write { path, source }
    }
}
