use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes of the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a domain invariant. `field` names the violated
    /// field as `Type.field`.
    InvalidParameter {
        field: &'static str,
        reason: &'static str,
        value: f64,
    },
    /// An operation was handed a mode (or drive) of the wrong kind.
    WrongMode {
        expected: &'static str,
        found: &'static str,
    },
    EmptyGrid {
        axis: &'static str,
    },
    NonMonotoneGrid {
        axis: &'static str,
    },
    /// The frequency-domain linear system is numerically singular.
    NearSingular {
        omega: f64,
        condition: f64,
    },
    /// A closed-form denominator fell below tolerance.
    SmallDenominator {
        omega: f64,
        magnitude: f64,
    },
    /// Eigenvalues at a point are too close to tell the branches apart.
    DegenerateBasis {
        p_in: f64,
        delta: f64,
        gap: f64,
    },
    /// Adaptive integration could not make progress.
    StepUnderflow {
        t: f64,
        p_in: f64,
        delta: f64,
    },
    /// Two trajectories were sampled on different grids.
    MismatchedSampling,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { field, reason, value } => write!(f, "invalid {field} = {value}: {reason}"),
            Error::WrongMode { expected, found } => {
                write!(f, "expected a {expected} mode, got {found}")
            }
            Error::EmptyGrid { axis } => write!(f, "grid `{axis}` is empty"),
            Error::NonMonotoneGrid { axis } => {
                write!(f, "grid `{axis}` is not strictly monotone and finite")
            }
            Error::NearSingular { omega, condition } => write!(
                f,
                "linear system near-singular at omega = {omega} (condition number {condition:e})"
            ),
            Error::SmallDenominator { omega, magnitude } => write!(
                f,
                "closed-form denominator {magnitude:e} below tolerance at omega = {omega}"
            ),
            Error::DegenerateBasis { p_in, delta, gap } => {
                write!(f, "eigenvalue gap {gap:e} too small at p_in = {p_in}, delta = {delta}")
            }
            Error::StepUnderflow { t, p_in, delta } => write!(
                f,
                "integrator step underflow at t = {t} (p_in = {p_in}, delta = {delta})"
            ),
            Error::MismatchedSampling => write!(f, "trajectories use different sampling"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for failures caused by the inputs rather than by numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::WrongMode { .. }
                | Error::EmptyGrid { .. }
                | Error::NonMonotoneGrid { .. }
                | Error::MismatchedSampling
        )
    }
}
