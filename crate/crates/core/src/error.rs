//! Error type shared by every module of the kernel.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole: `{factor}` vanishes{}", fmt_index(.index))]
    Pole { factor: String, index: Option<i64> },

    #[error("constraint `{constraint}` violated for pair `{pair}`")]
    Constraint { pair: String, constraint: String },

    #[error("sampler exhausted after {retries} retries")]
    SamplerExhausted { retries: usize },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("index variable `{0}` is not bound here")]
    UnboundIndex(&'static str),

    #[error("expected an integer, got `{0}`")]
    NotInteger(String),

    #[error("square root of `{0}` is not available at this point")]
    RootUnavailable(String),

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("series: {0}")]
    Series(String),

    #[error("interval: {0}")]
    Interval(String),

    #[error("`{0}` cannot be evaluated exactly (use the series or interval backend)")]
    NotExact(String),

    #[error("backend `{backend}` is not admissible for `{id}`")]
    InadmissibleBackend { id: String, backend: String },

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("invalid chain step: {0}")]
    Step(String),

    #[error("config: {0}")]
    Config(String),
}

fn fmt_index(index: &Option<i64>) -> String {
    match index {
        Some(n) => format!(" at index {n}"),
        None => String::new(),
    }
}

impl Error {
    /// True for errors that mean "this point sits on a pole"; the sampler
    /// rejects such points instead of reporting them.
    pub fn is_pole(&self) -> bool {
        matches!(self, Error::Pole { .. } | Error::DivisionByZero)
    }

    pub(crate) fn pole(factor: impl Into<String>, index: Option<i64>) -> Self {
        Error::Pole { factor: factor.into(), index }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
