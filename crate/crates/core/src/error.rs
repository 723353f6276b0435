use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// `m[row][col]` differs from `conj(m[col][row])` by `defect`.
    NonHermitian { row: usize, col: usize, defect: f64 },
    DimensionMismatch { expected: usize, found: usize },
    NotNormalized { norm: f64 },
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    /// A numeric argument outside its allowed domain.
    InvalidArgument { name: &'static str, reason: String },
    /// `t` outside the schedule window `[0, total_time]`.
    TimeOutOfRange { t: f64, total_time: f64 },
    UnknownOperator(String),
    /// The state has weight outside the span of the reference pair.
    LeftSubspace { residual: f64 },
    /// `b (1 - b) = alpha_beta_sq` has no root below one half.
    NoValidRoot { alpha_beta_sq: f64 },
    WindowTooShort { span: f64, period: f64 },
    TooFewSamples { per_period: f64, required: usize },
    NoClosedForm { observable: String },
    ImaginaryExpectation { imag: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonHermitian { row, col, defect } => write!(
                f,
                "matrix is not Hermitian: entry ({row}, {col}) differs from the conjugate of ({col}, {row}) by {defect:e}"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotNormalized { norm } => write!(f, "state is not normalized (norm {norm})"),
            Error::NoConvergence { sweeps, off_diagonal } => write!(
                f,
                "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})"
            ),
            Error::InvalidArgument { name, reason } => write!(f, "invalid `{name}`: {reason}"),
            Error::TimeOutOfRange { t, total_time } => {
                write!(f, "time {t} is outside the schedule window [0, {total_time}]")
            }
            Error::UnknownOperator(name) => {
                write!(f, "unknown operator `{name}` (expected one of I, X, Y, Z, H)")
            }
            Error::LeftSubspace { residual } => write!(
                f,
                "state left the two-level reference subspace (projection residual {residual:e})"
            ),
            Error::NoValidRoot { alpha_beta_sq } => write!(
                f,
                "|alpha beta|^2 = {alpha_beta_sq} admits no excited-state weight below 1/2"
            ),
            Error::WindowTooShort { span, period } => write!(
                f,
                "series spans {span} but one oscillation period is {period}"
            ),
            Error::TooFewSamples { per_period, required } => write!(
                f,
                "{per_period:.2} samples per period, at least {required} required"
            ),
            Error::NoClosedForm { observable } => {
                write!(f, "no closed-form oscillation for observable `{observable}` on this model")
            }
            Error::ImaginaryExpectation { imag } => {
                write!(f, "expectation value has imaginary part {imag:e}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument { name, reason: reason.into() }
}
