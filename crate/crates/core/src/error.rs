use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("register size {0} outside the supported range 1..=26")]
    UnsupportedQubitCount(usize),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("control and target are both qubit {0}")]
    ControlIsTarget(usize),
    #[error("rotation about the identity axis is not a valid gate")]
    IdentityRotation,
    #[error("cannot normalize an all-zero input")]
    ZeroNorm,
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("class {class} out of range for {num_classes} classes")]
    ClassOutOfRange { class: usize, num_classes: usize },
    #[error("pixel value {0} outside [0, 1]")]
    PixelOutOfRange(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
