/// Crate-wide error type.
///
/// `Overflow` means a value does not fit in u64; results are exact or absent,
/// never wrapped. `InequalityViolated` is reserved for the impossible branch
/// of a split comparison (rhs below the recurrence value): single-shot
/// evaluators surface it as an error instead of fabricating a relation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arithmetic overflow evaluating {name}({n})")]
    Overflow { name: String, n: u64 },

    #[error("split inequality violated at (n={n}, i={i}): rhs {rhs} < F(n) {fn_value}")]
    InequalityViolated { n: u64, i: u64, rhs: u64, fn_value: u64 },

    #[error("cache error: {0}")]
    Cache(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
