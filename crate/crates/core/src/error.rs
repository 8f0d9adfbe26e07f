use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("operators in the class do not commute (commutator norm {norm:.3e})")]
    NonCommuting { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("observables are not pairwise unbiased (deviation {deviation:.3e})")]
    NotUnbiased { deviation: f64 },

    #[error("algebras span {achieved} of the required {required} dimensions")]
    SpanDeficiency { achieved: usize, required: usize },

    #[error("algebras are not pairwise quasi-orthogonal (defect {defect:.3e})")]
    NotQuasiOrthogonal { defect: f64 },

    #[error("Cartan parameters are outside every useful class")]
    Unclassified,

    #[error("matrix does not belong to the Bell algebra (residual {residual:.3e})")]
    NotInBellAlgebra { residual: f64 },

    #[error("invalid mode partition: {0}")]
    Partition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
