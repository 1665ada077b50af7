use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("value {value} out of range (must be < {bound})")]
    ValueOutOfRange { value: u64, bound: u64 },

    #[error("{what} needs {needed} units of work, cap is {cap} (raise --cap to allow it)")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("word of length {len} is too short for {iterations} iteration(s) at radius {radius}")]
    WordTooShort { len: usize, iterations: usize, radius: usize },

    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),

    #[error("partition is not a congruence: {0}")]
    IncompatiblePartition(String),

    #[error("{m} states is not a power of {p}")]
    NotPowerOf { m: usize, p: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(what: &'static str, needed: u128, cap: u128) -> Self {
        Error::CapExceeded { what, needed, cap }
    }
}
