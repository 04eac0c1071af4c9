use thiserror::Error;

/// Errors raised by the state-vector core and the alphabets built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not unitary (max |U†U - I| entry = {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("interaction is not unitary: {0}")]
    InteractionNotUnitary(String),
    #[error("measurement basis is not orthonormal (deviation {deviation:e})")]
    BadBasis { deviation: f64 },
    #[error("theta = {theta} is outside the open interval (0, pi/4)")]
    ThetaOutOfRange { theta: f64 },
    #[error("matrix is not Hermitian (max |A - A†| entry = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("POVM elements do not sum to identity (deviation {deviation:e})")]
    Incomplete { deviation: f64 },
    #[error("operator is not positive semidefinite (trace/determinant {min:e})")]
    NotPositive { min: f64 },
    #[error("projected component has zero norm")]
    DegenerateProjection,
    #[error("the {0} alphabet is not decodable by a projective measurement")]
    NotProjectiveAlphabet(String),
    #[error("incoming state is not one of the alphabet's code states")]
    StateNotInAlphabet,
    #[error("POVM element is not rank one; post-measurement probe state is undefined")]
    NotRankOne,
}

/// Errors raised by the protocol engine and the key-distillation phases.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("no slot survived sifting")]
    EmptySiftedKey,
    #[error("estimated error rate {rate} exceeds threshold {r_max}; restart required")]
    RestartRequired { rate: f64, r_max: f64 },
    #[error("reconciled keys still differ in {differing} positions")]
    ReconciliationFailed { differing: usize },
    #[error("key exhausted: n - k - s = {n} - {k} - {s} < 1")]
    KeyExhausted { n: usize, k: usize, s: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
