use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("slot {slot} out of range for rank-{rank} tensor")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("slots {slot_a} and {slot_b} have the same variance; adjust one index first")]
    SameVariance { slot_a: usize, slot_b: usize },
    #[error("slot {0} paired with itself")]
    SameSlot(usize),
    #[error("rank {0} exceeds the supported maximum of 4")]
    RankExceeded(usize),
    #[error("expected {expected} components, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("variance tags do not match")]
    VarianceMismatch,
    #[error("invalid slot permutation")]
    BadPermutation,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BivectorError {
    #[error("matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },
    #[error("expected an all-contravariant rank-2 tensor")]
    NotRank2Contravariant,
    #[error("phase factor must have exact unit modulus")]
    NonUnitPhase,
    #[error("boost speed {0} must be below 1 (units of c)")]
    Superluminal(f64),
    #[error("rotation axis must be nonzero")]
    ZeroAxis,
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConcomitantError {
    #[error("input bivector has a nonzero imaginary part")]
    ComplexInput,
    #[error("{0} is not a valence-2 contraction usable for reconstruction")]
    WrongTag(String),
    #[error("trace of {0} is not zero")]
    NonzeroTrace(&'static str),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("component `{0}` is not a hermitian form in the bivector")]
    NotHermitianForm(String),
    #[error("irreducibility report needs an all-contravariant rank-2 or rank-4 tensor, got rank {0}")]
    UnsupportedRank(usize),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("series needs at least 4 samples, found {0}")]
    TooShort(usize),
    #[error("sample times are not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("sampling is not uniform at index {index} (relative deviation {deviation:e})")]
    NonUniform { index: usize, deviation: f64 },
    #[error("field arrays have {found} samples but there are {expected} sample times")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite value at sample {0}")]
    NonFinite(usize),
    #[error("frequency {frequency} must be positive and below the Nyquist frequency {nyquist}")]
    AboveNyquist { frequency: f64, nyquist: f64 },
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("empty component selection")]
    EmptySelection,
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
