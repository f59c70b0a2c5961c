use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("reduction polynomial is reducible over Z_17")]
    ReduciblePolynomial,

    #[error("element code {code} out of range for a ring of order {order}")]
    InvalidElement { code: u32, order: u32 },

    #[error(
        "{{±ω^e : 0 ≤ e < {exponents}}} with ω = {omega} is not a subgroup of size {expected}"
    )]
    NotASubgroup {
        omega: u32,
        exponents: u32,
        expected: u32,
    },

    #[error("no base block in the catalog for {target} of order {order}")]
    NotInCatalog { target: String, order: u64 },

    #[error("developed block (e = {e}, d = {d}) repeats label {label}")]
    DuplicateLabel { e: u32, d: u32, label: u32 },

    #[error("developed block (e = {e}, d = {d}) duplicates an earlier block")]
    DuplicateBlock { e: u32, d: u32 },

    #[error("order {order} is not admissible: need n = 1 or n ≡ 1 (mod 96)")]
    NotAdmissible { order: u64 },

    #[error("ingredient unavailable: {0}")]
    IngredientUnavailable(String),

    #[error("unsupported order {0}")]
    UnsupportedOrder(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget of {nodes} nodes exhausted")]
    BudgetExhausted { nodes: u64 },

    #[error("constructed object failed verification: {0}")]
    VerificationFailed(String),

    #[error("{}:{line}: {message}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line,
            message: message.into(),
        }
    }

    pub(crate) fn with_path(self, p: &std::path::Path) -> Self {
        match self {
            Error::Parse { line, message, .. } => Error::Parse {
                path: Some(p.to_path_buf()),
                line,
                message,
            },
            other => other,
        }
    }
}
