use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("minimal polynomial must have degree at least 1")]
    ZeroDegree,
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient vector has length {got}, field degree is {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("embedding index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("could not certify complex roots at {0} bits")]
    PrecisionUnreachable(u32),
    #[error("precision must be at least 53 bits, got {0}")]
    PrecisionTooLow(u32),

    #[error("singular curve (discriminant is zero)")]
    SingularCurve,
    #[error("curve coefficients must have integral coefficient vectors")]
    NonIntegralCoefficients,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("point is not integral")]
    PointNotIntegral,
    #[error("point at infinity has no affine coordinates")]
    PointAtInfinity,

    #[error("psi_2(Q) = 0: the point is 2-torsion")]
    TorsionPoint2,
    #[error("psi_{0}(Q) = 0: the point is torsion")]
    TorsionPoint(u64),
    #[error("division by psi_2 was not exact; block is inconsistent")]
    InexactDivision,
    #[error("scalar must be non-zero")]
    ZeroScalar,
    #[error("term u_{0} vanishes")]
    ZeroTerm(u64),
    #[error("floating-point track lost precision at step {step}")]
    PrecisionLoss { step: u32 },
    #[error("sequence seed needs u_0 = 0, u_1 = 1 and u_2 != 0")]
    BadSeed,
    #[error("sequence terms could not be made integral by a weight-consistent rescale")]
    NonIntegralTerms,

    #[error("index {0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("index must be at least {min}, got {got}")]
    IndexTooSmall { min: u64, got: u64 },
    #[error("inputs must be positive")]
    ZeroInput,
    #[error("prime {0} does not divide D")]
    PrimeDoesNotDivideD(String),
    #[error("extrapolation needs two distinct indices")]
    EqualIndices,

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
