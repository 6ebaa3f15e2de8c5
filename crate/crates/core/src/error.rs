use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("illegal system {label}{rank}: {reason}")]
    IllegalSystem {
        label: String,
        rank: usize,
        reason: &'static str,
    },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("elements belong to different systems ({left} vs {right})")]
    OwnerMismatch { left: String, right: String },

    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),

    #[error("element {word} is not a minimal coset representative for J = {{{j}}}")]
    NotMinimalRep { word: String, j: String },

    #[error("generator set {{{inner}}} is not contained in {{{outer}}}")]
    NotSubset { inner: String, outer: String },

    #[error("parabolic subgroup generated by {{{0}}} is infinite")]
    InfiniteParabolic(String),

    #[error("element {word} is not Grassmannian relative to {{{j}}} (|S(w)\\J| = {extra})")]
    NotGrassmannian {
        word: String,
        j: String,
        extra: usize,
    },

    #[error("generator set {{{0}}} is not a finite-type diagram")]
    NotFiniteType(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
