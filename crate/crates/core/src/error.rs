use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("mode index {0} listed twice")]
    DuplicateMode(usize),

    #[error("unsupported photon number {0} (only 1 and 2 are simulated)")]
    UnsupportedPhotonNumber(usize),

    #[error("state mixes photon numbers {expected} and {found}")]
    MixedPhotonNumber { expected: usize, found: usize },

    #[error("at least one unit is required")]
    EmptyUnits,

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("branch {branch} out of range for {levels} tree levels")]
    BranchOutOfRange { branch: usize, levels: u32 },

    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("{formula} is outside its validity range (value {value})")]
    OutOfValidity { formula: &'static str, value: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("malformed threshold curve: {0}")]
    MalformedCurve(String),

    #[error("pattern space of {0} qubits is too large to enumerate")]
    EnumerationTooLarge(usize),

    #[error("herald pattern is not recoverable: {0}")]
    UnrecoverablePattern(&'static str),
}
